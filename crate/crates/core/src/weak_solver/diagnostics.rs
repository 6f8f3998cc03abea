use serde::{Deserialize, Serialize};

use super::Povm3;
use crate::instance::QubitEnsemble;
use crate::op2::trace_product;

/// Outcomes with total probability below this have undefined conditionals.
pub const OUTCOME_PROB_FLOOR: f64 = 1e-14;

/// Joint, marginal and conditional statistics of a three-outcome measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `joint[a][μ] = η_a tr(E_μ ρ_a)`.
    pub joint: [[f64; 3]; 2],
    /// `P_{E_μ}`.
    pub outcome_probs: [f64; 3],
    pub p_success: f64,
    pub p_error: f64,
    pub p_inconclusive: f64,
    /// `P_{ρ2|E1}`, `None` when outcome 1 never occurs.
    pub cond_err_1: Option<f64>,
    /// `P_{ρ1|E2}`, `None` when outcome 2 never occurs.
    pub cond_err_2: Option<f64>,
}

impl Diagnostics {
    /// `P_{ρ_a|E_μ}` with zero-based indices.
    pub fn conditional(&self, a: usize, mu: usize) -> Option<f64> {
        let p = self.outcome_probs[mu];
        (p >= OUTCOME_PROB_FLOOR).then(|| self.joint[a][mu] / p)
    }
}

pub fn diagnostics(ens: &QubitEnsemble, povm: &Povm3) -> Diagnostics {
    let elems = povm.elements();
    let mut joint = [[0.0; 3]; 2];
    for (a, row) in joint.iter_mut().enumerate() {
        let rho = ens.density(a);
        for (mu, cell) in row.iter_mut().enumerate() {
            *cell = ens.eta[a] * trace_product(&elems[mu], &rho);
        }
    }
    let outcome_probs = [0, 1, 2].map(|mu| joint[0][mu] + joint[1][mu]);
    let mut d = Diagnostics {
        joint,
        outcome_probs,
        p_success: joint[0][0] + joint[1][1],
        p_error: joint[0][1] + joint[1][0],
        p_inconclusive: outcome_probs[2],
        cond_err_1: None,
        cond_err_2: None,
    };
    d.cond_err_1 = d.conditional(1, 0);
    d.cond_err_2 = d.conditional(0, 1);
    d
}
