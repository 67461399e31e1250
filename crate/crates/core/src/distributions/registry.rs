use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{Deterministic, Erlang, Exponential, GammaLaw, ServiceDistribution, ServiceLaw};
use crate::error::{AoiError, Result};

/// Builds a law from the `:`-separated parameter fields that follow its name.
pub type LawParser = fn(&[&str]) -> std::result::Result<Arc<dyn ServiceLaw>, String>;

/// Name → parser table for distribution specs such as `erlang:3:3`.
#[derive(Clone, Default)]
pub struct DistributionRegistry {
    parsers: BTreeMap<&'static str, (usize, LawParser)>,
}

impl DistributionRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry with `det`, `exp`, `erlang` and `gamma`.
    pub fn builtin() -> &'static DistributionRegistry {
        static BUILTIN: OnceLock<DistributionRegistry> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let mut r = DistributionRegistry::empty();
            r.register("det", 1, parse_det);
            r.register("exp", 1, parse_exp);
            r.register("erlang", 2, parse_erlang);
            r.register("gamma", 2, parse_gamma);
            r
        })
    }

    /// Register (or replace) a law under `name` taking `arity` parameters.
    pub fn register(&mut self, name: &'static str, arity: usize, parser: LawParser) {
        self.parsers.insert(name, (arity, parser));
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.parsers.keys().copied()
    }

    pub fn parse(&self, spec: &str) -> Result<ServiceDistribution> {
        let err = |reason: String| AoiError::Parse { spec: spec.to_string(), reason };
        let mut fields = spec.trim().split(':');
        let name = fields.next().unwrap_or_default().trim().to_ascii_lowercase();
        let params: Vec<&str> = fields.map(str::trim).collect();
        let (arity, parser) = self.parsers.get(name.as_str()).ok_or_else(|| {
            let known: Vec<_> = self.names().collect();
            err(format!("unknown law `{name}` (known: {})", known.join(", ")))
        })?;
        if params.len() != *arity {
            return Err(err(format!("`{name}` takes {arity} parameter(s), got {}", params.len())));
        }
        parser(&params).map(ServiceDistribution).map_err(err)
    }
}

fn num(field: &str) -> std::result::Result<f64, String> {
    field.parse::<f64>().map_err(|_| format!("`{field}` is not a number"))
}

fn parse_det(p: &[&str]) -> std::result::Result<Arc<dyn ServiceLaw>, String> {
    Ok(Arc::new(Deterministic::new(num(p[0])?).map_err(|e| e.to_string())?))
}

fn parse_exp(p: &[&str]) -> std::result::Result<Arc<dyn ServiceLaw>, String> {
    Ok(Arc::new(Exponential::new(num(p[0])?).map_err(|e| e.to_string())?))
}

fn parse_erlang(p: &[&str]) -> std::result::Result<Arc<dyn ServiceLaw>, String> {
    let k = p[0].parse::<u32>().map_err(|_| format!("erlang shape `{}` is not a positive integer", p[0]))?;
    Ok(Arc::new(Erlang::new(k, num(p[1])?).map_err(|e| e.to_string())?))
}

fn parse_gamma(p: &[&str]) -> std::result::Result<Arc<dyn ServiceLaw>, String> {
    Ok(Arc::new(GammaLaw::new(num(p[0])?, num(p[1])?).map_err(|e| e.to_string())?))
}
