use super::chain::{closed_form_pi, matrix_from};
use super::step1::table_from;
use super::{ChainModel, Step1Table, SystemParams};
use crate::error::{AoiError, Result};

/// One entry of the conditional AoI table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    /// The triple cannot occur; reading it is a bug.
    Unused,
}

/// `E⁰(α(0) | K₋₂=i, K₋₁=j, K₀=ℓ)` for the three-cell buffer, indexed
/// `[i][j][ℓ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalAoiTable {
    cells: [[[Cell; 3]; 3]; 3],
}

impl ConditionalAoiTable {
    pub fn cell(&self, i: usize, j: usize, l: usize) -> Cell {
        self.cells[i][j][l]
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> Option<f64> {
        match self.cells[i][j][l] {
            Cell::Value(v) => Some(v),
            Cell::Unused => None,
        }
    }
}

pub(crate) fn table_from_step1(s: &Step1Table, p_single_before_full: f64) -> ConditionalAoiTable {
    // Service of the message departing at S₀ given it started with no one
    // waiting (K₋₁ ∈ {0, 1}) and left ℓ behind.
    let fresh_service = [s.e_sigma_tau_gt, s.e_sigma_between, s.e_sigma_two_le];
    let mut cells = [[[Cell::Unused; 3]; 3]; 3];
    for i in 0..3 {
        for l in 0..3 {
            // Idle before S₀'s service: AoI is that service time alone.
            cells[i][0][l] = Cell::Value(fresh_service[l]);

            // One arrival in the previous service; it is served next.
            let lag = if i < 2 {
                s.e_tau_between
            } else {
                // The message served at S₀ had been waiting since before
                // S₋₂ and the freshest served one left at S₋₁. Its lag
                // behind S₋₂ depends on whether the service ending at S₋₂
                // saw exactly one arrival (after a full state) or two or
                // more.
                let w = p_single_before_full;
                w * s.e_tau_between + (1.0 - w) * s.e_tau_two_le + s.e_sigma_tau_gt
            };
            cells[i][1][l] = Cell::Value(lag + fresh_service[l]);
        }

        // K₋₁ = 2: the message served at S₀ is the last arrival in the
        // previous service, and a message was waiting when it started, so
        // ℓ is 1 (no arrivals) or 2 (some).
        let lag = if i < 2 { s.e_tau_two_le } else { s.e_tau_le };
        cells[i][2][0] = Cell::Unused;
        cells[i][2][1] = Cell::Value(lag + s.e_sigma_tau_gt);
        cells[i][2][2] = Cell::Value(lag + s.e_sigma_tau_le);
    }
    ConditionalAoiTable { cells }
}

pub fn conditional_aoi_table(params: &SystemParams) -> Result<ConditionalAoiTable> {
    params.require_m(3)?;
    let t = params.at_rate();
    Ok(table_from_step1(&table_from(&t)?, t.exactly_one()))
}

/// `ℙ(K₋₂=i, K₋₁=j | K₀=ℓ) = π_i P_ij P_jℓ / π_ℓ`, indexed `[i][j]`.
pub fn backward_weights(chain: &ChainModel, l: usize) -> Result<[[f64; 3]; 3]> {
    let (p, pi) = (&chain.p, &chain.pi);
    if !(pi[l] > 0.0) {
        return Err(AoiError::Degenerate(format!("π_{l} = {} is not positive", pi[l])));
    }
    let mut w = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            w[i][j] = pi[i] * p[i][j] * p[j][l] / pi[l];
        }
    }
    Ok(w)
}

pub(crate) fn condition_on_k0(chain: &ChainModel, table: &ConditionalAoiTable) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (l, slot) in out.iter_mut().enumerate() {
        let w = backward_weights(chain, l)?;
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if w[i][j] == 0.0 {
                    continue;
                }
                let v = table.get(i, j, l).ok_or_else(|| {
                    AoiError::Numerical(format!("positive weight {} on impossible triple ({i},{j},{l})", w[i][j]))
                })?;
                acc += w[i][j] * v;
            }
        }
        *slot = acc;
    }
    Ok(out)
}

/// `E⁰[α(0) | K₀ = ℓ]` for ℓ = 0, 1, 2.
pub fn aoi_given_k0(params: &SystemParams) -> Result<[f64; 3]> {
    params.require_m(3)?;
    let t = params.at_rate();
    let chain = ChainModel { p: matrix_from(&t), pi: closed_form_pi(&t)? };
    condition_on_k0(&chain, &conditional_aoi_table(params)?)
}
