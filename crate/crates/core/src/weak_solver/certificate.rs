//! Dual certificates for the weak-margin problem.
//!
//! A pair `(Y, y)` with
//!
//! ```text
//! Y ⪰ 0,   Y ⪰ η1ρ1 − y η2ρ2,   Y ⪰ η2ρ2 − y η1ρ1,   y ≥ 0
//! ```
//!
//! bounds every feasible success probability by `d = tr Y + m y`. When the
//! margin is zero the optimal multiplier diverges, so the certificate carries
//! [`Multiplier::Unbounded`] and the two middle constraints are replaced by
//! their compressions onto the kernels of `ρ2` and `ρ1` respectively:
//! a zero-error measurement has `E1` supported on `ker ρ2` and `E2` on
//! `ker ρ1`, which is all the bound `p ≤ tr Y` needs.

use serde::{Deserialize, Serialize};

use super::{diagnostics, Povm3};
use crate::instance::QubitEnsemble;
use crate::op2::{mul, trace_product, Herm2, PSD_TOL};

/// Tolerance on complementary-slackness residuals.
pub const SLACKNESS_TOL: f64 = 1e-10;
/// Tolerance on `|p_success − d|`.
pub const GAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplier {
    Finite(f64),
    /// Zero-margin limit `y → ∞`.
    Unbounded,
}

impl Multiplier {
    pub fn finite(self) -> Option<f64> {
        match self {
            Multiplier::Finite(y) => Some(y),
            Multiplier::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// The operator `Y`.
    pub y_op: Herm2,
    pub y: Multiplier,
    pub m: f64,
    /// `tr Y + m y` (just `tr Y` for the unbounded multiplier).
    pub d: f64,
}

impl Certificate {
    pub fn new(y_op: Herm2, y: Multiplier, m: f64) -> Self {
        let d = match y {
            Multiplier::Finite(y) => y_op.trace() + m * y,
            Multiplier::Unbounded => y_op.trace(),
        };
        Certificate { y_op, y, m, d }
    }

    /// `Y − (η_a ρ_a − y η_b ρ_b)` for a finite multiplier.
    pub fn residual_op(&self, ens: &QubitEnsemble, a: usize, y: f64) -> Herm2 {
        let b = 1 - a;
        self.y_op - (ens.weighted(a) - ens.weighted(b).scale(y))
    }

    /// Evaluates feasibility, complementary slackness and the duality gap
    /// against a measurement, both given in the same labelling.
    pub fn check(&self, ens: &QubitEnsemble, povm: &Povm3) -> CertificateCheck {
        let diag = diagnostics(ens, povm);
        let y_min = self.y_op.min_eig();
        let (constraint_eigs, slackness) = match self.y {
            Multiplier::Finite(y) => {
                let y1 = self.residual_op(ens, 0, y);
                let y2 = self.residual_op(ens, 1, y);
                let slack = [
                    mul(povm.e1, y1).frobenius_norm(),
                    mul(povm.e2, y2).frobenius_norm(),
                    mul(povm.e3, self.y_op).frobenius_norm(),
                    (y * (self.m - diag.p_error)).abs(),
                ];
                ([y1.min_eig(), y2.min_eig()], slack)
            }
            Multiplier::Unbounded => {
                // compressions of Y − η_a ρ_a onto ker ρ_b
                let kernel = |b: usize| Herm2::projector(-ens.bloch[b]);
                let c1 = self.y_op - ens.weighted(0);
                let c2 = self.y_op - ens.weighted(1);
                let slack = [
                    trace_product(&povm.e1, &c1).abs(),
                    trace_product(&povm.e2, &c2).abs(),
                    mul(povm.e3, self.y_op).frobenius_norm(),
                    diag.p_error.abs(),
                ];
                ([trace_product(&kernel(1), &c1), trace_product(&kernel(0), &c2)], slack)
            }
        };
        CertificateCheck {
            min_eigenvalues: [y_min, constraint_eigs[0], constraint_eigs[1]],
            multiplier: self.y.finite(),
            slackness,
            gap: (diag.p_success - self.d).abs(),
            p_error: diag.p_error,
            margin: self.m,
        }
    }
}

/// Residuals produced by [`Certificate::check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    /// Smallest eigenvalues of `Y`, `Y1`, `Y2` (compressions when unbounded).
    pub min_eigenvalues: [f64; 3],
    pub multiplier: Option<f64>,
    /// `‖E1Y1‖, ‖E2Y2‖, ‖E3Y‖, |y(m − p_error)|`.
    pub slackness: [f64; 4],
    pub gap: f64,
    pub p_error: f64,
    pub margin: f64,
}

impl CertificateCheck {
    pub fn worst_eigenvalue(&self) -> f64 {
        self.min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn worst_slackness(&self) -> f64 {
        self.slackness.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.worst_eigenvalue() >= -tol && self.multiplier.is_none_or(|y| y >= -tol)
    }

    pub fn passes(&self) -> bool {
        self.is_feasible(PSD_TOL)
            && self.worst_slackness() <= SLACKNESS_TOL
            && self.gap <= GAP_TOL
            && self.p_error <= self.margin + PSD_TOL
    }
}
