use anyhow::{bail, Context, Result};

/// Parse `start:stop:step` (inclusive of `stop` up to rounding) or a comma
/// list of values.
pub fn parse_lambda_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("range `{text}` must be start:stop:step");
        }
        let num = |s: &str| s.trim().parse::<f64>().with_context(|| format!("`{s}` is not a number"));
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            bail!("range `{text}` needs step > 0 and stop >= start");
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        if n > 1_000_000 {
            bail!("range `{text}` has too many points");
        }
        (0..=n).map(|k| start + k as f64 * step).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("`{s}` is not a number")))
            .collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        bail!("empty lambda grid");
    }
    if let Some(bad) = values.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        bail!("lambda must be positive, got {bad}");
    }
    Ok(values)
}

/// Comma list of buffer sizes.
pub fn parse_m_list(text: &str) -> Result<Vec<usize>> {
    let mut ms = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("`{s}` is not a buffer size")))
        .collect::<Result<Vec<_>>>()?;
    if ms.is_empty() {
        bail!("buffer size list is empty");
    }
    if ms.contains(&0) {
        bail!("buffer size must be >= 1");
    }
    ms.sort_unstable();
    ms.dedup();
    Ok(ms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_the_end_point() {
        let g = parse_lambda_grid("0.5:8:0.25").unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!(g[0], 0.5);
        assert!((g[30] - 8.0).abs() < 1e-12);
        assert_eq!(parse_lambda_grid("1, 2,4").unwrap(), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        for g in ["", "0:1:0.1", "1:0:0.1", "1:2", "a,b", "-1", "1:2:0"] {
            assert!(parse_lambda_grid(g).is_err(), "{g}");
        }
    }

    #[test]
    fn m_lists() {
        assert_eq!(parse_m_list("3,1,2,2").unwrap(), vec![1, 2, 3]);
        assert!(parse_m_list("").is_err());
        assert!(parse_m_list("0,1").is_err());
    }
}
