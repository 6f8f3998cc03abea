//! 2×2 operator algebra in Bloch form.
//!
//! Every Hermitian operator on the two-dimensional signal space is stored as
//! `αI + β·σ`. Its eigenvalues are then `α ± |β|`, so positivity checks and
//! spectral decompositions reduce to scalar arithmetic. General complex
//! matrices ([`Mat2c`]) only appear when two operators are multiplied.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default tolerance on eigenvalues for positivity checks.
pub const PSD_TOL: f64 = 1e-12;

/// Real 3-vector holding Bloch components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Euclidean norm, computed with `hypot` so intermediate squares never overflow.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Unit vector in the same direction, or `None` if the norm is below `tol`.
    pub fn normalized(self, tol: f64) -> Option<Vec3> {
        let n = self.norm();
        (n > tol).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.9}, {:.9}, {:.9})", self.x, self.y, self.z)
    }
}

/// Hermitian 2×2 operator `alpha·I + beta·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Herm2 {
    pub alpha: f64,
    pub beta: Vec3,
}

impl Herm2 {
    pub const ZERO: Herm2 = Herm2 { alpha: 0.0, beta: Vec3::ZERO };
    pub const IDENTITY: Herm2 = Herm2 { alpha: 1.0, beta: Vec3::ZERO };

    pub const fn new(alpha: f64, beta: Vec3) -> Self {
        Herm2 { alpha, beta }
    }

    /// Rank-one projector `(I + u·σ)/2` onto the pure state with unit Bloch vector `u`.
    pub fn projector(u: Vec3) -> Self {
        Herm2::new(0.5, u * 0.5)
    }

    /// Density operator `(I + r·σ)/2` for a Bloch vector with `|r| ≤ 1`.
    pub fn density(r: Vec3) -> Self {
        Herm2::projector(r)
    }

    /// Hermitian part `(M + M†)/2` of a general matrix, in Bloch form.
    pub fn from_mat(m: &Mat2c) -> Self {
        let [[a, b], [c, d]] = m.0;
        // Hermitian part has off-diagonal h10 = (c + conj(b))/2.
        let h10 = (c + b.conj()) * 0.5;
        Herm2::new(0.5 * (a.re + d.re), Vec3::new(h10.re, h10.im, 0.5 * (a.re - d.re)))
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.alpha
    }

    pub fn scale(self, k: f64) -> Self {
        Herm2::new(self.alpha * k, self.beta * k)
    }

    /// Eigenvalues `(α − |β|, α + |β|)`.
    pub fn eigs(&self) -> (f64, f64) {
        let r = self.beta.norm();
        (self.alpha - r, self.alpha + r)
    }

    pub fn min_eig(&self) -> f64 {
        self.eigs().0
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eig() >= -tol
    }

    /// Positive part `Σ max(λ,0) P_λ`.
    pub fn positive_part(&self) -> Herm2 {
        let (lo, hi) = self.eigs();
        match self.beta.normalized(0.0) {
            None => Herm2::new(self.alpha.max(0.0), Vec3::ZERO),
            Some(u) => Herm2::projector(u).scale(hi.max(0.0)) + Herm2::projector(-u).scale(lo.max(0.0)),
        }
    }

    pub fn to_mat(&self) -> Mat2c {
        let Vec3 { x, y, z } = self.beta;
        let a = self.alpha;
        Mat2c([
            [Complex64::new(a + z, 0.0), Complex64::new(x, -y)],
            [Complex64::new(x, y), Complex64::new(a - z, 0.0)],
        ])
    }

    /// `U H U†` for a unitary `U`, returned in Bloch form.
    pub fn conjugate_by(&self, u: &Mat2c) -> Herm2 {
        Herm2::from_mat(&(*u * self.to_mat() * u.adjoint()))
    }

    /// Expectation `⟨ψ|H|ψ⟩` for a (not necessarily normalized) ket.
    pub fn expectation(&self, psi: &[Complex64; 2]) -> f64 {
        let m = self.to_mat();
        let hv = [m.0[0][0] * psi[0] + m.0[0][1] * psi[1], m.0[1][0] * psi[0] + m.0[1][1] * psi[1]];
        (psi[0].conj() * hv[0] + psi[1].conj() * hv[1]).re
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }
}

impl Add for Herm2 {
    type Output = Herm2;
    fn add(self, o: Herm2) -> Herm2 {
        Herm2::new(self.alpha + o.alpha, self.beta + o.beta)
    }
}

impl Sub for Herm2 {
    type Output = Herm2;
    fn sub(self, o: Herm2) -> Herm2 {
        Herm2::new(self.alpha - o.alpha, self.beta - o.beta)
    }
}

impl Neg for Herm2 {
    type Output = Herm2;
    fn neg(self) -> Herm2 {
        Herm2::new(-self.alpha, -self.beta)
    }
}

impl fmt::Display for Herm2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.9}·I + {}·σ", self.alpha, self.beta)
    }
}

/// Free-function form of [`Herm2::eigs`].
pub fn eigs(h: &Herm2) -> (f64, f64) {
    h.eigs()
}

/// Free-function form of [`Herm2::is_psd`].
pub fn is_psd(h: &Herm2, tol: f64) -> bool {
    h.is_psd(tol)
}

/// `tr[(αI+β·σ)(α′I+β′·σ)] = 2(αα′ + β·β′)`.
pub fn trace_product(a: &Herm2, b: &Herm2) -> f64 {
    2.0 * (a.alpha * b.alpha + a.beta.dot(b.beta))
}

/// Product of two operators as a general complex matrix.
pub fn mul(a: impl Into<Mat2c>, b: impl Into<Mat2c>) -> Mat2c {
    a.into() * b.into()
}

pub fn frobenius_norm(m: &Mat2c) -> f64 {
    m.frobenius_norm()
}

/// General complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2c(pub [[Complex64; 2]; 2]);

impl Mat2c {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Mat2c([[o, z], [z, o]])
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: [Complex64; 2], c1: [Complex64; 2]) -> Self {
        Mat2c([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    pub fn adjoint(&self) -> Self {
        let m = self.0;
        Mat2c([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        let m = self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl From<Herm2> for Mat2c {
    fn from(h: Herm2) -> Mat2c {
        h.to_mat()
    }
}

impl From<&Herm2> for Mat2c {
    fn from(h: &Herm2) -> Mat2c {
        h.to_mat()
    }
}

impl Mul for Mat2c {
    type Output = Mat2c;
    fn mul(self, o: Mat2c) -> Mat2c {
        let (a, b) = (self.0, o.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2c(out)
    }
}

impl Sub for Mat2c {
    type Output = Mat2c;
    fn sub(self, o: Mat2c) -> Mat2c {
        let mut out = self.0;
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] -= o.0[i][j];
            }
        }
        Mat2c(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eigs_examples() {
        assert_eq!(Herm2::IDENTITY.eigs(), (1.0, 1.0));
        assert_eq!(Herm2::new(0.5, Vec3::new(0.0, 0.0, 0.5)).eigs(), (0.0, 1.0));
        let (lo, hi) = Herm2::new(0.3, Vec3::new(0.3, 0.0, 0.4)).eigs();
        assert!(close(lo, -0.2, 1e-15) && close(hi, 0.8, 1e-15));
    }

    #[test]
    fn psd_examples() {
        assert!(Herm2::IDENTITY.is_psd(0.0));
        assert!(!Herm2::new(0.0, Vec3::Z).is_psd(1e-12));
        assert!(Herm2::new(0.5, Vec3::new(0.0, 0.0, 0.5 + 1e-13)).is_psd(1e-12));
    }

    #[test]
    fn trace_product_examples() {
        let up = Herm2::projector(Vec3::Z);
        let down = Herm2::projector(-Vec3::Z);
        assert_eq!(trace_product(&Herm2::IDENTITY, &Herm2::density(Vec3::Z)), 1.0);
        assert_eq!(trace_product(&up, &down), 0.0);
        assert_eq!(frobenius_norm(&mul(up, down)), 0.0);
    }

    #[test]
    fn positive_part_splits_spectrum() {
        let h = Herm2::new(0.1, Vec3::new(0.3, -0.2, 0.4));
        let p = h.positive_part();
        let (lo, hi) = h.eigs();
        assert!(close(p.trace(), hi, 1e-15));
        assert!(close((p - h).trace(), -lo, 1e-15));
        assert!(p.is_psd(1e-15) && (p - h).is_psd(1e-15));
    }

    fn herm() -> impl Strategy<Value = Herm2> {
        (-2.0..2.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
            .prop_map(|(a, x, y, z)| Herm2::new(a, Vec3::new(x, y, z)))
    }

    /// Dense complex Hermitian eigensolver, independent of the Bloch formula.
    fn dense_eigs(h: &Herm2) -> (f64, f64) {
        let m = h.to_mat().0;
        let dense = nalgebra::Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
        let ev = dense.symmetric_eigenvalues();
        (ev[0].min(ev[1]), ev[0].max(ev[1]))
    }

    proptest! {
        #[test]
        fn eigs_match_dense_solver(h in herm()) {
            let (lo, hi) = h.eigs();
            let (dlo, dhi) = dense_eigs(&h);
            prop_assert!(close(lo, dlo, 1e-13) && close(hi, dhi, 1e-13), "{h:?}: {lo} {hi} vs {dlo} {dhi}");
        }

        #[test]
        fn trace_against_identity(h in herm()) {
            prop_assert!(close(trace_product(&h, &Herm2::IDENTITY), h.trace(), 1e-15));
        }

        #[test]
        fn psd_iff_both_eigs_nonnegative(h in herm()) {
            let (lo, hi) = h.eigs();
            prop_assert_eq!(h.is_psd(0.0), lo >= 0.0 && hi >= 0.0);
        }

        #[test]
        fn trace_product_symmetric_and_matches_dense(a in herm(), b in herm()) {
            let dense = mul(a, b).trace().re;
            prop_assert!(close(trace_product(&a, &b), trace_product(&b, &a), 0.0));
            prop_assert!(close(trace_product(&a, &b), dense, 1e-14));
        }

        #[test]
        fn from_mat_inverts_to_mat(h in herm()) {
            let back = Herm2::from_mat(&h.to_mat());
            prop_assert!((back - h).to_mat().frobenius_norm() <= 1e-15, "{} vs {}", back, h);
        }
    }
}
