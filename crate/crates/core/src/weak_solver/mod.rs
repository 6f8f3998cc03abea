//! Optimal measurements under the weak (mean-error) margin `p_error ≤ m`.
//!
//! One builder per domain, each returning a POVM together with a dual
//! certificate in the internal labelling (`eta1 ≤ eta2`):
//!
//! * [`build_min_error`]: Helstrom projective measurement, `E3 = 0`, `y = 0`.
//! * [`build_intermediate`]: three rank-one elements with `p_error = m`.
//! * [`build_single_state`]: `E1 = 0`, `E2` and `E3` orthogonal projectors.
//! * [`build_unambiguous`]: zero-margin limit of the intermediate family.
//!
//! [`solve_weak`] dispatches on the domain and maps everything back to the
//! caller's labels.

mod certificate;
mod diagnostics;

pub use certificate::{Certificate, CertificateCheck, Multiplier, GAP_TOL, SLACKNESS_TOL};
pub use diagnostics::{diagnostics, Diagnostics, OUTCOME_PROB_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{check_margin, classify, classify_margin, Domain, DomainKind, Instance};
use crate::op2::{Herm2, Mat2c, Vec3, PSD_TOL};

/// Coefficients within this distance below zero are boundary noise.
const COEFF_CLAMP: f64 = 1e-12;

/// Three-outcome measurement: conclude state 1, conclude state 2, inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Povm3 {
    pub e1: Herm2,
    pub e2: Herm2,
    pub e3: Herm2,
}

impl Povm3 {
    pub fn new(e1: Herm2, e2: Herm2, e3: Herm2) -> Self {
        Povm3 { e1, e2, e3 }
    }

    pub fn elements(&self) -> [Herm2; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// Exchanges the two conclusive outcomes.
    pub fn swap_labels(self) -> Self {
        Povm3 { e1: self.e2, e2: self.e1, e3: self.e3 }
    }

    /// Largest deviation of `E1 + E2 + E3` from the identity, entrywise.
    pub fn completeness_residual(&self) -> f64 {
        let sum = self.e1 + self.e2 + self.e3 - Herm2::IDENTITY;
        sum.to_mat().0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.elements().iter().all(|e| e.is_psd(tol)) && self.completeness_residual() <= tol
    }

    /// Every element has rank at most one (smaller eigenvalue within `tol` of zero).
    pub fn is_rank_one(&self, tol: f64) -> bool {
        self.elements().iter().all(|e| e.min_eig().abs() <= tol)
    }

    pub fn conjugate_by(&self, u: &Mat2c) -> Self {
        Povm3::new(self.e1.conjugate_by(u), self.e2.conjugate_by(u), self.e3.conjugate_by(u))
    }
}

/// Optimal weak-margin solution, expressed in the caller's labels.
///
/// The POVM lives in the canonical frame of the instance; use
/// [`Solution::povm_in_caller_basis`] for the caller's basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub domain: Domain,
    pub margin: f64,
    pub p_max: f64,
    pub povm: Povm3,
    pub cert: Certificate,
    pub diagnostics: Diagnostics,
    /// `tr E1` for the caller's first state.
    pub trace_e1: f64,
}

impl Solution {
    pub fn p_success(&self) -> f64 {
        self.diagnostics.p_success
    }

    pub fn p_error(&self) -> f64 {
        self.diagnostics.p_error
    }

    pub fn check_certificate(&self, inst: &Instance) -> CertificateCheck {
        self.cert.check(&inst.caller(), &self.povm)
    }

    pub fn povm_in_caller_basis(&self, inst: &Instance) -> Povm3 {
        self.povm.conjugate_by(&inst.frame())
    }
}

/// Closed-form optimum for priors `(eta1, 1 − eta1)`, squared overlap `s` and margin `m`.
pub fn optimal_success(eta1: f64, s: f64, m: f64) -> Result<f64> {
    let domain = classify_margin(eta1, s, m)?;
    let e1 = eta1.min(1.0 - eta1);
    let e2 = 1.0 - e1;
    let q = (e1 * e2 * s).sqrt();
    Ok(match domain.kind {
        DomainKind::MinimumError => helstrom(e1, s),
        DomainKind::Intermediate => (m.sqrt() + (1.0 - 2.0 * q).sqrt()).powi(2),
        DomainKind::SingleState => {
            e2 * ((m * s / e1).sqrt() + ((e1 - m).max(0.0) * (1.0 - s) / e1).sqrt()).powi(2)
        }
    })
}

/// Minimum-error optimum `½(1 + √(1 − 4η1η2S))`.
pub fn helstrom(eta1: f64, s: f64) -> f64 {
    0.5 * (1.0 + (1.0 - 4.0 * eta1 * (1.0 - eta1) * s).max(0.0).sqrt())
}

pub fn p_max_weak(inst: &Instance, m: f64) -> Result<f64> {
    optimal_success(inst.eta1, inst.s, m)
}

/// Solves the weak-margin problem, returning results in the caller's labels.
pub fn solve_weak(inst: &Instance, m: f64) -> Result<Solution> {
    let domain = classify(inst, m)?;
    let (povm, cert) = match domain.kind {
        DomainKind::MinimumError => {
            let (povm, cert) = build_min_error(inst)?;
            (povm, Certificate::new(cert.y_op, cert.y, m))
        }
        DomainKind::Intermediate if m == 0.0 => build_unambiguous(inst)?,
        DomainKind::Intermediate => build_intermediate(inst, m)?,
        DomainKind::SingleState => build_single_state(inst, m)?,
    };
    let povm = if inst.swapped { povm.swap_labels() } else { povm };
    let diagnostics = diagnostics(&inst.caller(), &povm);
    Ok(Solution {
        domain,
        margin: m,
        p_max: p_max_weak(inst, m)?,
        povm,
        cert,
        diagnostics,
        trace_e1: povm.e1.trace(),
    })
}

/// Helstrom measurement and its certificate (`y = 0`, recorded with `m = 1`).
pub fn build_min_error(inst: &Instance) -> Result<(Povm3, Certificate)> {
    let ens = inst.internal();
    let diff = ens.weighted(0) - ens.weighted(1);
    let v = diff.beta * 2.0;
    let g = v.normalized(1e-14).ok_or(Error::DegenerateDirection(v.norm()))?;
    let povm = Povm3::new(Herm2::projector(g), Herm2::projector(-g), Herm2::ZERO);
    let y_op = ens.weighted(1) + diff.positive_part();
    Ok((povm, Certificate::new(y_op, Multiplier::Finite(0.0), 1.0)))
}

/// Intermediate-domain quantities for a margin `m` and multiplier `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateParts {
    pub y: f64,
    pub alpha: f64,
    pub beta: Vec3,
    pub a1: Vec3,
    pub a2: Vec3,
    /// Raw linear-relation coefficients `c1, c2, c3` (before clamping).
    pub coeffs: [f64; 3],
}

impl IntermediateParts {
    pub fn beta_mu(&self) -> [Vec3; 3] {
        [self.beta - self.a1 * 0.5, self.beta - self.a2 * 0.5, self.beta]
    }

    /// Residuals of the three smallest-eigenvalue-zero equations for `Y`, `Y1`, `Y2`.
    pub fn eigen_equation_residuals(&self, inst: &Instance) -> [f64; 3] {
        let (e1, e2, y) = (inst.eta1, inst.eta2, self.y);
        let [b1, b2, _] = self.beta_mu();
        [
            self.alpha - 0.5 * (e1 - y * e2) - b1.norm(),
            self.alpha - 0.5 * (e2 - y * e1) - b2.norm(),
            self.alpha - self.beta.norm(),
        ]
    }
}

/// Dual operator `Y(y)` of the intermediate family for any `y > 1`.
pub fn intermediate_dual(inst: &Instance, y: f64) -> Herm2 {
    let k = y / (2.0 * (y - 1.0));
    let beta = intermediate_direction(inst) * k;
    Herm2::new(beta.norm(), beta)
}

/// `η1n1 + η2n2 − √(η1η2/S)(n1 + n2)`, evaluated with the bisector so `S → 0` stays finite.
fn intermediate_direction(inst: &Instance) -> Vec3 {
    let (e1, e2) = (inst.eta1, inst.eta2);
    let bisector = (inst.n1 + inst.n2).normalized(0.0).unwrap_or(Vec3::Z);
    inst.n1 * e1 + inst.n2 * e2 - bisector * (2.0 * (e1 * e2).sqrt())
}

pub fn intermediate_parts(inst: &Instance, m: f64) -> Result<IntermediateParts> {
    let domain = classify(inst, m)?;
    if m < domain.m_c_prime || m > domain.m_c {
        return Err(Error::OutOfDomain { domain: "intermediate", m, lo: domain.m_c_prime, hi: domain.m_c });
    }
    if m == 0.0 {
        return Err(Error::MarginZeroDegenerate);
    }
    let (e1, e2) = (inst.eta1, inst.eta2);
    let q = (e1 * e2 * inst.s).sqrt();
    let root_d = (1.0 - 2.0 * q).sqrt();
    let root_m = m.sqrt();
    let y = 1.0 + root_d / root_m;
    let y_op = intermediate_dual(inst, y);
    let a1 = inst.n1 * e1 - inst.n2 * (y * e2);
    let a2 = inst.n2 * e2 - inst.n1 * (y * e1);
    let ratio = y / (y + 1.0);
    let coeffs = [
        ratio * (root_m - (q - e1) / root_d),
        ratio * (root_m - (q - e2) / root_d),
        q / root_m - root_m - root_d,
    ];
    Ok(IntermediateParts { y, alpha: y_op.alpha, beta: y_op.beta, a1, a2, coeffs })
}

/// Three-outcome optimum for `m_c′ ≤ m ≤ m_c`, `m > 0`.
pub fn build_intermediate(inst: &Instance, m: f64) -> Result<(Povm3, Certificate)> {
    let parts = intermediate_parts(inst, m)?;
    let mut c = parts.coeffs;
    for ci in c.iter_mut() {
        if *ci < -COEFF_CLAMP {
            let domain = classify(inst, m)?;
            return Err(Error::OutOfDomain { domain: "intermediate", m, lo: domain.m_c_prime, hi: domain.m_c });
        }
        *ci = ci.max(0.0);
    }
    let betas = parts.beta_mu();
    let total: f64 = c.iter().zip(&betas).map(|(ci, b)| ci * b.norm()).sum();
    let gamma = 1.0 / total;
    let elem = |ci: f64, b: Vec3| Herm2::new(b.norm(), -b).scale(gamma * ci);
    let povm = Povm3::new(elem(c[0], betas[0]), elem(c[1], betas[1]), elem(c[2], betas[2]));
    let cert = Certificate::new(Herm2::new(parts.alpha, parts.beta), Multiplier::Finite(parts.y), m);
    Ok((povm, cert))
}

/// Zero-margin optimum when `eta1 > eta2·S`: the unambiguous measurement
/// with `E1 ∝ |φ2⊥⟩⟨φ2⊥|`, `E2 ∝ |φ1⊥⟩⟨φ1⊥|`.
pub fn build_unambiguous(inst: &Instance) -> Result<(Povm3, Certificate)> {
    let (e1, e2, s, t) = (inst.eta1, inst.eta2, inst.s, inst.t);
    if e1 <= e2 * s {
        return Err(Error::OutOfDomain { domain: "intermediate", m: 0.0, lo: critical_margins_of(inst).1, hi: 0.0 });
    }
    let w1 = (1.0 - (e2 * s / e1).sqrt()) / t;
    let w2 = (1.0 - (e1 * s / e2).sqrt()) / t;
    let p1 = Herm2::projector(-inst.n2).scale(w1);
    let p2 = Herm2::projector(-inst.n1).scale(w2);
    let povm = Povm3::new(p1, p2, Herm2::IDENTITY - p1 - p2);
    let beta = intermediate_direction(inst) * 0.5;
    let cert = Certificate::new(Herm2::new(beta.norm(), beta), Multiplier::Unbounded, 0.0);
    Ok((povm, cert))
}

fn critical_margins_of(inst: &Instance) -> (f64, f64) {
    crate::instance::critical_margins(inst.eta1, inst.s)
}

/// Multiplier `y(m)` of the single-state construction, fixed by `p_error = m`.
pub fn single_state_multiplier(inst: &Instance, m: f64) -> f64 {
    let (e1, e2, s, t) = (inst.eta1, inst.eta2, inst.s, inst.t);
    (e2 / e1) * (s - t + (s * t).sqrt() * (e1 - 2.0 * m) / (m * (e1 - m)).sqrt())
}

/// Two-outcome optimum (`E1 = 0`) for `0 ≤ m ≤ m_c′`, requiring `eta1 ≤ eta2·S`.
pub fn build_single_state(inst: &Instance, m: f64) -> Result<(Povm3, Certificate)> {
    check_margin(m)?;
    let (e1, e2, s, t) = (inst.eta1, inst.eta2, inst.s, inst.t);
    let (_, m_cp) = critical_margins_of(inst);
    if e1 > e2 * s || m > m_cp {
        return Err(Error::OutOfDomain { domain: "single-state", m, lo: 0.0, hi: m_cp });
    }
    if m == 0.0 {
        let f = -inst.n1;
        let povm = Povm3::new(Herm2::ZERO, Herm2::projector(f), Herm2::projector(-f));
        let y_op = Herm2::projector(f).scale(e2 * t);
        return Ok((povm, Certificate::new(y_op, Multiplier::Unbounded, 0.0)));
    }
    assert!(m < e1, "single-state margin {m} must stay below eta1 = {e1}");
    let y = single_state_multiplier(inst, m);
    let a2 = inst.n2 * e2 - inst.n1 * (y * e1);
    let norm = a2.norm();
    let f = a2 * (1.0 / norm);
    let shift = e2 - y * e1;
    // λ+ = (shift + |a2|)/2, rewritten to avoid cancellation when shift < 0
    let lambda_plus = if shift >= 0.0 { 0.5 * (shift + norm) } else { 2.0 * y * e1 * e2 * t / (norm - shift) };
    let povm = Povm3::new(Herm2::ZERO, Herm2::projector(f), Herm2::projector(-f));
    let y_op = Herm2::projector(f).scale(lambda_plus);
    Ok((povm, Certificate::new(y_op, Multiplier::Finite(y), m)))
}

/// Convenience check that a built POVM meets the structural invariants.
pub fn povm_is_structurally_valid(povm: &Povm3) -> bool {
    povm.is_valid(PSD_TOL) && povm.is_rank_one(PSD_TOL)
}

#[cfg(test)]
mod tests;
