//! Problem normalization and domain classification.
//!
//! An [`Instance`] stores two linearly independent pure states in a canonical
//! frame: the Bloch vectors lie in the x–z plane, symmetric about the z axis,
//!
//! ```text
//! n1 = ( √T, 0, √S ),   n2 = ( −√T, 0, √S ),   S = |⟨φ1|φ2⟩|²,  T = 1 − S,
//! ```
//!
//! and the labels are ordered so that `eta1 ≤ eta2`. The `swapped` flag
//! records whether the caller's labels were exchanged to achieve that order;
//! [`Instance::caller`] gives the ensemble in the caller's labelling.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::op2::{Herm2, Mat2c, Vec3};

/// Squared overlaps above `1 - LINEAR_DEPENDENCE_CUTOFF` are rejected.
pub const LINEAR_DEPENDENCE_CUTOFF: f64 = 1e-10;

pub type Ket = [Complex64; 2];

/// Two-outcome ensemble on a qubit: priors and Bloch vectors (pure or mixed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitEnsemble {
    pub eta: [f64; 2],
    pub bloch: [Vec3; 2],
}

impl QubitEnsemble {
    pub fn density(&self, a: usize) -> Herm2 {
        Herm2::density(self.bloch[a])
    }

    /// `eta_a ρ_a`.
    pub fn weighted(&self, a: usize) -> Herm2 {
        self.density(a).scale(self.eta[a])
    }

    pub fn swapped(&self) -> QubitEnsemble {
        QubitEnsemble { eta: [self.eta[1], self.eta[0]], bloch: [self.bloch[1], self.bloch[0]] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub eta1: f64,
    pub eta2: f64,
    /// Caller's first state, normalized.
    pub psi1: Ket,
    /// Caller's second state, normalized.
    pub psi2: Ket,
    pub s: f64,
    pub t: f64,
    pub n1: Vec3,
    pub n2: Vec3,
    pub swapped: bool,
}

fn normalize(psi: Ket) -> Result<Ket> {
    let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NotNormalizable);
    }
    Ok([psi[0] / norm, psi[1] / norm])
}

fn inner(a: &Ket, b: &Ket) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Canonical Bloch pair for squared overlap `s`.
pub fn canonical_bloch(s: f64) -> (Vec3, Vec3) {
    let (sin, cos) = ((1.0 - s).max(0.0).sqrt(), s.max(0.0).sqrt());
    (Vec3::new(sin, 0.0, cos), Vec3::new(-sin, 0.0, cos))
}

fn check_prior(eta1: f64) -> Result<()> {
    if eta1 > 0.0 && eta1 < 1.0 {
        Ok(())
    } else {
        Err(Error::DegeneratePrior(eta1))
    }
}

pub fn check_margin(m: f64) -> Result<()> {
    if (0.0..=1.0).contains(&m) {
        Ok(())
    } else {
        Err(Error::MarginOutOfRange(m))
    }
}

impl Instance {
    /// Normalizes the caller's states and priors into canonical form.
    pub fn canonicalize(psi1: Ket, psi2: Ket, eta1: f64) -> Result<Self> {
        let psi1 = normalize(psi1)?;
        let psi2 = normalize(psi2)?;
        check_prior(eta1)?;
        let s = inner(&psi1, &psi2).norm_sqr().min(1.0);
        if s > 1.0 - LINEAR_DEPENDENCE_CUTOFF {
            return Err(Error::LinearlyDependent(s));
        }
        let swapped = eta1 > 0.5;
        let (n1, n2) = canonical_bloch(s);
        let small = if swapped { 1.0 - eta1 } else { eta1 };
        Ok(Instance { eta1: small, eta2: 1.0 - small, psi1, psi2, s, t: 1.0 - s, n1, n2, swapped })
    }

    /// Instance for states with real overlap `overlap = |⟨φ1|φ2⟩|`.
    pub fn from_overlap(eta1: f64, overlap: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&overlap) {
            return Err(Error::InvalidInput(format!("overlap {overlap} must lie in [0, 1]")));
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let psi2 = [Complex64::new(overlap, 0.0), Complex64::new((1.0 - overlap * overlap).sqrt(), 0.0)];
        Self::canonicalize([one, zero], psi2, eta1)
    }

    /// `|⟨φ1|φ2⟩| = √S`.
    pub fn overlap(&self) -> f64 {
        self.s.sqrt()
    }

    /// Ensemble with internal labels (`eta1 ≤ eta2`).
    pub fn internal(&self) -> QubitEnsemble {
        QubitEnsemble { eta: [self.eta1, self.eta2], bloch: [self.n1, self.n2] }
    }

    /// Ensemble with the caller's labels, still in the canonical frame.
    pub fn caller(&self) -> QubitEnsemble {
        if self.swapped {
            self.internal().swapped()
        } else {
            self.internal()
        }
    }

    pub fn caller_eta1(&self) -> f64 {
        if self.swapped {
            self.eta2
        } else {
            self.eta1
        }
    }

    /// Unitary taking the canonical frame to the caller's basis: the internal
    /// canonical kets map to the caller's kets up to global phases.
    pub fn frame(&self) -> Mat2c {
        let (a, b) = if self.swapped { (self.psi2, self.psi1) } else { (self.psi1, self.psi2) };
        let ov = inner(&a, &b);
        let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { Complex64::new(1.0, 0.0) };
        let b = [b[0] * phase, b[1] * phase];
        let root = self.s.sqrt();
        let c = ((1.0 + root) / 2.0).sqrt();
        let s = ((1.0 - root) / 2.0).sqrt();
        let col0 = [(a[0] + b[0]) / (2.0 * c), (a[1] + b[1]) / (2.0 * c)];
        let col1 = [(a[0] - b[0]) / (2.0 * s), (a[1] - b[1]) / (2.0 * s)];
        Mat2c::from_columns(col0, col1)
    }

    /// Canonical kets for the internal labels: `(cos θ/2, ±sin θ/2)` with `cos θ = √S`.
    pub fn canonical_kets(&self) -> (Ket, Ket) {
        let root = self.s.sqrt();
        let c = ((1.0 + root) / 2.0).sqrt();
        let s = ((1.0 - root) / 2.0).sqrt();
        let k = |x: f64, y: f64| [Complex64::new(x, 0.0), Complex64::new(y, 0.0)];
        (k(c, s), k(c, -s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    MinimumError,
    Intermediate,
    SingleState,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::MinimumError => "minimum-error",
            DomainKind::Intermediate => "intermediate",
            DomainKind::SingleState => "single-state",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub m_c: f64,
    pub m_c_prime: f64,
}

/// Critical margins `(m_c, m_c′)` for priors `(eta1, 1 − eta1)` and squared overlap `s`.
///
/// The priors are reordered internally so the smaller one plays the role of
/// `eta1`. Equality `eta1 = eta2·S` is sent to the zero branch, where both
/// branches agree.
pub fn critical_margins(eta1: f64, s: f64) -> (f64, f64) {
    let e1 = eta1.min(1.0 - eta1);
    let e2 = 1.0 - e1;
    let m_c = 0.5 * (1.0 - (1.0 - 4.0 * e1 * e2 * s).max(0.0).sqrt());
    let m_c_prime = if e1 < e2 * s {
        let q = (e1 * e2 * s).sqrt();
        (e1 - q).powi(2) / (1.0 - 2.0 * q)
    } else {
        0.0
    };
    (m_c, m_c_prime)
}

/// Domain of the margin `m` for priors `(eta1, 1 − eta1)` and squared overlap `s`.
///
/// Closed intervals; on a shared endpoint minimum-error wins, then single-state.
/// Without a single-state domain (`eta1 > eta2·S`) the margin `m = 0` is intermediate.
pub fn classify_margin(eta1: f64, s: f64, m: f64) -> Result<Domain> {
    check_margin(m)?;
    let (m_c, m_c_prime) = critical_margins(eta1, s);
    let e1 = eta1.min(1.0 - eta1);
    // The single-state domain only exists when eta1 ≤ eta2·S.
    let single_exists = e1 <= (1.0 - e1) * s;
    let kind = if m >= m_c {
        DomainKind::MinimumError
    } else if single_exists && m <= m_c_prime {
        DomainKind::SingleState
    } else {
        DomainKind::Intermediate
    };
    Ok(Domain { kind, m_c, m_c_prime })
}

pub fn classify(inst: &Instance, m: f64) -> Result<Domain> {
    classify_margin(inst.eta1, inst.s, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(a: f64, b: f64) -> Ket {
        [Complex64::new(a, 0.0), Complex64::new(b, 0.0)]
    }

    #[test]
    fn orthogonal_states() {
        let inst = Instance::canonicalize(ket(1.0, 0.0), ket(0.0, 1.0), 0.4).unwrap();
        assert_eq!(inst.s, 0.0);
        assert_eq!(inst.t, 1.0);
        assert_eq!(inst.n1.dot(inst.n2), -1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            Instance::canonicalize(ket(1.0, 0.0), ket(1.0, 0.0), 0.3),
            Err(Error::LinearlyDependent(_))
        ));
        assert!(matches!(Instance::canonicalize(ket(0.0, 0.0), ket(1.0, 0.0), 0.3), Err(Error::NotNormalizable)));
        for eta in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(Instance::canonicalize(ket(1.0, 0.0), ket(0.0, 1.0), eta), Err(Error::DegeneratePrior(_))));
        }
    }

    #[test]
    fn eta03_overlap09_margins() {
        let inst = Instance::canonicalize(ket(1.0, 0.0), ket(0.9, 0.19f64.sqrt()), 0.3).unwrap();
        assert!((inst.s - 0.81).abs() < 1e-15);
        assert!(!inst.swapped);
        assert!((inst.n1.norm() - 1.0).abs() < 1e-12 && (inst.n2.norm() - 1.0).abs() < 1e-12);
        assert!((inst.n1.dot(inst.n2) - (2.0 * inst.s - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn large_first_prior_is_swapped() {
        let inst = Instance::from_overlap(0.8, 0.5).unwrap();
        assert!(inst.swapped);
        assert!((inst.eta1 - 0.2).abs() < 1e-15);
        assert_eq!(inst.caller_eta1(), 0.8);
        assert_eq!(inst.caller().bloch[0], inst.n2);
    }

    #[test]
    fn complex_phases_are_removed() {
        let i = Complex64::new(0.0, 1.0);
        let psi1 = [Complex64::new(0.6, 0.0) * i, Complex64::new(0.0, 0.8)];
        let psi2 = [Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.2)];
        let inst = Instance::canonicalize(psi1, psi2, 0.35).unwrap();
        let want = inner(&normalize(psi1).unwrap(), &normalize(psi2).unwrap()).norm_sqr();
        assert!((inst.s - want).abs() < 1e-15);
    }

    #[test]
    fn frame_maps_canonical_kets_to_caller_kets() {
        let psi1 = [Complex64::new(0.2, 0.5), Complex64::new(-0.7, 0.1)];
        let psi2 = [Complex64::new(0.9, -0.3), Complex64::new(0.1, 0.4)];
        for eta in [0.25, 0.75] {
            let inst = Instance::canonicalize(psi1, psi2, eta).unwrap();
            let u = inst.frame();
            let id = u * u.adjoint();
            assert!((id - Mat2c::identity()).frobenius_norm() < 1e-14);
            let (k1, k2) = inst.canonical_kets();
            let (c1, c2) = if inst.swapped { (inst.psi2, inst.psi1) } else { (inst.psi1, inst.psi2) };
            // equal up to a global phase: |⟨caller|U canonical⟩| = 1
            assert!((inner(&c1, &u.apply(&k1)).norm() - 1.0).abs() < 1e-14);
            assert!((inner(&c2, &u.apply(&k2)).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let inst = Instance::from_overlap(0.3, 0.9).unwrap();
        let (k1, k2) = inst.canonical_kets();
        let again = Instance::canonicalize(k1, k2, inst.eta1).unwrap();
        assert!((again.s - inst.s).abs() < 1e-14);
        assert!((again.n1 - inst.n1).norm() < 1e-14 && (again.n2 - inst.n2).norm() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let d = classify_margin(0.3, 0.81, 0.5).unwrap();
        assert_eq!(d.kind, DomainKind::MinimumError);
        assert!((d.m_c - 0.217335).abs() < 1e-6);
        let d = classify_margin(0.3, 0.81, 0.03).unwrap();
        assert_eq!(d.kind, DomainKind::SingleState);
        assert!((d.m_c_prime - 0.072178).abs() < 1e-6);
        let d = classify_margin(0.5, 0.81, 0.0).unwrap();
        assert_eq!(d.kind, DomainKind::Intermediate);
        assert_eq!(d.m_c_prime, 0.0);
        assert!(matches!(classify_margin(0.3, 0.81, 1.5), Err(Error::MarginOutOfRange(_))));
    }

    #[test]
    fn boundary_conventions() {
        let (m_c, m_cp) = critical_margins(0.3, 0.81);
        assert_eq!(classify_margin(0.3, 0.81, m_c).unwrap().kind, DomainKind::MinimumError);
        assert_eq!(classify_margin(0.3, 0.81, m_cp).unwrap().kind, DomainKind::SingleState);
    }

    #[test]
    fn critical_margins_are_ordered_on_grid() {
        for i in 1..=100 {
            let eta1 = 0.5 * i as f64 / 100.0;
            for j in 0..100 {
                let s = 0.99 * j as f64 / 99.0;
                let (m_c, m_cp) = critical_margins(eta1, s);
                assert!(0.0 <= m_cp && m_cp <= m_c && m_c <= 0.5, "eta1={eta1} s={s}: {m_cp} {m_c}");
                if eta1 >= (1.0 - eta1) * s {
                    assert_eq!(m_cp, 0.0);
                }
            }
        }
    }

    #[test]
    fn classification_has_two_breakpoints() {
        let (eta1, s) = (0.3, 0.81);
        let mut changes = 0;
        let mut last = classify_margin(eta1, s, 0.0).unwrap().kind;
        for i in 1..=10_000 {
            let kind = classify_margin(eta1, s, i as f64 / 10_000.0).unwrap().kind;
            if kind != last {
                changes += 1;
                last = kind;
            }
        }
        assert_eq!(changes, 2);
    }
}
