use nalgebra::{Matrix3, Vector3};

use super::{RateTransform, SystemParams};
use crate::error::{AoiError, Result};

/// Transition matrix and stationary law of the post-departure occupancy
/// chain of the three-cell buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainModel {
    pub p: [[f64; 3]; 3],
    pub pi: [f64; 3],
}

impl ChainModel {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(Self { p: transition_matrix(params)?, pi: stationary_distribution(params)? })
    }
}

pub(crate) fn matrix_from(t: &RateTransform) -> [[f64; 3]; 3] {
    let stay = [t.g, t.exactly_one(), t.two_or_more()];
    [stay, stay, [0.0, t.g, 1.0 - t.g]]
}

/// Rows 0 and 1 are `[Ĝ, −λĜ′, 1−Ĝ+λĜ′]`; row 2 is `[0, Ĝ, 1−Ĝ]`.
///
/// From states 0 and 1 the next service starts with no one waiting, so the
/// next state is the number of arrivals during it, capped at 2. From state 2
/// one message is already waiting, so one or more arrivals keep the buffer
/// full and none leaves a single message.
pub fn transition_matrix(params: &SystemParams) -> Result<[[f64; 3]; 3]> {
    params.require_m(3)?;
    Ok(matrix_from(&params.at_rate()))
}

pub(crate) fn closed_form_pi(t: &RateTransform) -> Result<[f64; 3]> {
    let den = 1.0 + t.lambda * t.g1;
    if !(den > 0.0) {
        return Err(AoiError::Degenerate(format!("1 + λĜ′(λ) = {den:e} is not positive")));
    }
    Ok([t.g * t.g / den, t.g * (1.0 - t.g) / den, t.two_or_more() / den])
}

/// Closed-form `π`, cross-checked against [`solve_stationary`] and `π = πP`.
pub fn stationary_distribution(params: &SystemParams) -> Result<[f64; 3]> {
    params.require_m(3)?;
    let t = params.at_rate();
    let pi = closed_form_pi(&t)?;
    let p = matrix_from(&t);

    let solved = solve_stationary(&p)?;
    for k in 0..3 {
        if (pi[k] - solved[k]).abs() > 1e-10 {
            return Err(AoiError::Numerical(format!("closed-form pi {pi:?} disagrees with linear solve {solved:?}")));
        }
        let balance: f64 = (0..3).map(|i| pi[i] * p[i][k]).sum();
        if (balance - pi[k]).abs() > 1e-12 {
            return Err(AoiError::Numerical(format!("pi P != pi at component {k}: {balance} vs {}", pi[k])));
        }
    }
    Ok(pi)
}

/// Stationary vector of a 3×3 stochastic matrix by LU solve of
/// `π(P − I) = 0` with the last balance equation replaced by `Σπ = 1`.
pub fn solve_stationary(p: &[[f64; 3]; 3]) -> Result<[f64; 3]> {
    // Rows of A are the balance equations (P^T - I) pi = 0.
    let mut a = Matrix3::from_fn(|r, c| p[c][r] - if r == c { 1.0 } else { 0.0 });
    for c in 0..3 {
        a[(2, c)] = 1.0;
    }
    let b = Vector3::new(0.0, 0.0, 1.0);
    let x = a.lu().solve(&b).ok_or_else(|| AoiError::Degenerate("singular stationary system".into()))?;
    Ok([x[0], x[1], x[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ServiceDistribution;

    fn params(lambda: f64, spec: &str) -> SystemParams {
        SystemParams::new(lambda, 3, ServiceDistribution::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn exponential_unit_rates() {
        let p = transition_matrix(&params(1.0, "exp:1")).unwrap();
        assert_eq!(p, [[0.5, 0.25, 0.25], [0.5, 0.25, 0.25], [0.0, 0.5, 0.5]]);
        let pi = stationary_distribution(&params(1.0, "exp:1")).unwrap();
        for x in pi {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        // eigenvector route
        let solved = solve_stationary(&p).unwrap();
        for x in solved {
            assert!((x - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn light_traffic_limit() {
        let pr = params(1e-9, "det:1");
        let p = transition_matrix(&pr).unwrap();
        assert!((p[0][0] - 1.0).abs() < 1e-8 && p[0][1] < 1e-8 && p[0][2] < 1e-8);
        let pi = stationary_distribution(&pr).unwrap();
        assert!((pi[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn structural_properties() {
        for spec in ["det:1", "exp:2", "erlang:3:3", "gamma:0.5:0.5"] {
            for lambda in [0.05, 0.3, 1.0, 3.7, 50.0] {
                let p = transition_matrix(&params(lambda, spec)).unwrap();
                assert_eq!(p[2][0], 0.0);
                assert_eq!(p[0], p[1]);
                for row in p {
                    assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    assert!(row.iter().all(|x| (0.0..=1.0).contains(x)));
                }
                let pi = stationary_distribution(&params(lambda, spec)).unwrap();
                assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_other_buffer_sizes() {
        let p = SystemParams::new(1.0, 2, ServiceDistribution::parse("exp:1").unwrap()).unwrap();
        assert!(matches!(transition_matrix(&p), Err(AoiError::Unsupported(_))));
        assert!(matches!(stationary_distribution(&p), Err(AoiError::Unsupported(_))));
    }
}
