//! Mixed-state bounds through the fidelity.
//!
//! For mixed `ρ1, ρ2` the optimal success probability under a weak margin is
//! bounded by the pure-state optimum with the squared overlap replaced by
//! `F(ρ1, ρ2)²`, where
//!
//! ```text
//! F(ρ1, ρ2) = tr √(√ρ1 ρ2 √ρ1).
//! ```
//!
//! The minimum-error branch (`m ≥ m_c`) is included, giving the Helstrom
//! bound `½(1 + √(1 − 4η1η2F²))`, which also dominates the exact Helstrom
//! value `½(1 + tr|η1ρ1 − η2ρ2|)`.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{critical_margins, QubitEnsemble};
use crate::op2::Vec3;
use crate::weak_solver::optimal_success;

pub const MAX_DIM: usize = 8;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

/// Validated density matrix of dimension `2..=8`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

/// On-disk form: row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Square root of a PSD matrix, clamping small negative eigenvalues to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let roots = vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(vals.len(), roots));
    &vecs * diag * vecs.adjoint()
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim {
            return Err(Error::NotAState(format!("matrix is {}x{}, not square", dim, mat.ncols())));
        }
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::NotAState(format!("dimension {dim} outside 2..={MAX_DIM}")));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotAState("non-finite entry".into()));
        }
        let skew = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > HERMITIAN_TOL {
            return Err(Error::NotAState(format!("not Hermitian (max |A - A†| = {skew:e})")));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace {trace} is not 1")));
        }
        let mat = hermitian_part(&mat);
        let min = hermitian_eigen(&mat).0[0];
        if min < -STATE_PSD_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { mat })
    }

    /// `|ψ⟩⟨ψ|` for a nonzero ket, normalized.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalizable);
        }
        let v = nalgebra::DVector::from_iterator(ket.len(), ket.iter().map(|z| z / norm));
        Self::new(&v * v.adjoint())
    }

    /// Qubit state `(I + r·σ)/2`, requiring `|r| ≤ 1`.
    pub fn from_bloch(r: Vec3) -> Result<Self> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let mat = CMatrix::from_row_slice(
            2,
            2,
            &[c((1.0 + r.z) / 2.0, 0.0), c(r.x / 2.0, -r.y / 2.0), c(r.x / 2.0, r.y / 2.0), c((1.0 - r.z) / 2.0, 0.0)],
        );
        Self::new(mat)
    }

    pub fn from_json(json: &DensityMatrixJson) -> Result<Self> {
        let n = json.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&json.re) || !json.im.as_ref().is_none_or(shape_ok) {
            return Err(Error::NotAState(format!("entries do not form a {n}x{n} matrix")));
        }
        let mat = CMatrix::from_fn(n, n, |r, c| {
            Complex64::new(json.re[r][c], json.im.as_ref().map_or(0.0, |im| im[r][c]))
        });
        Self::new(mat)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: DensityMatrixJson = serde_json::from_str(text)
            .map_err(|e| Error::Json { path: "<string>".into(), source: e })?;
        Self::from_json(&json)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: name.clone(), source: e })?;
        let json: DensityMatrixJson = serde_json::from_str(&text).map_err(|e| Error::Json { path: name, source: e })?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let n = self.dim();
        let rows = |f: fn(&Complex64) -> f64| (0..n).map(|r| (0..n).map(|c| f(&self.mat[(r, c)])).collect()).collect();
        DensityMatrixJson { dim: n, re: rows(|z| z.re), im: Some(rows(|z| z.im)) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<Vec3> {
        if self.dim() != 2 {
            return Err(Error::DimensionUnsupported(self.dim()));
        }
        let off = self.mat[(0, 1)];
        Ok(Vec3::new(2.0 * off.re, -2.0 * off.im, (self.mat[(0, 0)] - self.mat[(1, 1)]).re))
    }

    pub fn determinant(&self) -> f64 {
        self.mat.determinant().re
    }

    /// Uniformly random qubit state (Bloch vector uniform in the unit ball).
    pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = rng.gen::<f64>().cbrt();
        let rho = (1.0 - z * z).max(0.0).sqrt();
        Self::from_bloch(Vec3::new(rho * phi.cos(), rho * phi.sin(), z) * r).expect("ball sample is a state")
    }
}

/// Distance from 1 below which a computed fidelity is reported as exactly 1.
pub const FIDELITY_SNAP: f64 = 1e-14;

/// `tr√(√ρ1 ρ2 √ρ1)`, clamped to `[0, 1]`.
///
/// Values within [`FIDELITY_SNAP`] of 1 are returned as 1: the bound depends
/// on `√(1 − F²)`, which would turn the rounding error into a visible one.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let root = psd_sqrt(rho1.matrix());
    let inner = &root * rho2.matrix() * &root;
    let (vals, _) = hermitian_eigen(&inner);
    let f: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    Ok(if f >= 1.0 - FIDELITY_SNAP { 1.0 } else { f.max(0.0) })
}

/// Two mixed states with priors `(eta1, 1 − eta1)` and cached fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedInstance {
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
    pub eta1: f64,
    pub eta2: f64,
    pub fidelity: f64,
}

impl MixedInstance {
    pub fn new(rho1: DensityMatrix, rho2: DensityMatrix, eta1: f64) -> Result<Self> {
        if !(eta1 > 0.0 && eta1 < 1.0) {
            return Err(Error::DegeneratePrior(eta1));
        }
        let fidelity = fidelity(&rho1, &rho2)?;
        Ok(MixedInstance { rho1, rho2, eta1, eta2: 1.0 - eta1, fidelity })
    }

    /// Critical margins with the squared overlap replaced by `F²`.
    pub fn critical_margins(&self) -> (f64, f64) {
        critical_margins(self.eta1, self.fidelity * self.fidelity)
    }

    /// Qubit ensemble view (caller labels), for the qubit oracle.
    pub fn qubit_ensemble(&self) -> Result<QubitEnsemble> {
        Ok(QubitEnsemble { eta: [self.eta1, self.eta2], bloch: [self.rho1.bloch()?, self.rho2.bloch()?] })
    }

    /// `η1ρ1 − η2ρ2`.
    pub fn weighted_difference(&self) -> CMatrix {
        self.rho1.matrix().scale(self.eta1) - self.rho2.matrix().scale(self.eta2)
    }
}

/// Pure-state optimum evaluated at `S = F²`.
pub fn upper_bound_mixed(minst: &MixedInstance, m: f64) -> Result<f64> {
    optimal_success(minst.eta1, minst.fidelity * minst.fidelity, m)
}

/// `½(1 + tr|η1ρ1 − η2ρ2|)`.
pub fn helstrom_mixed(minst: &MixedInstance) -> f64 {
    0.5 * (1.0 + trace_norm(&minst.weighted_difference()))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.iter().map(|v| v.abs()).sum()
}

/// `√(1 − 4η1η2F²) − tr|η1ρ1 − η2ρ2|`, nonnegative up to rounding.
pub fn trace_fidelity_inequality_gap(minst: &MixedInstance) -> f64 {
    let f2 = minst.fidelity * minst.fidelity;
    (1.0 - 4.0 * minst.eta1 * minst.eta2 * f2).max(0.0).sqrt() - trace_norm(&minst.weighted_difference())
}

/// Zero-margin bound `1 − 2√(η1η2)F` if `η1 ≥ η2F²`, else `η2(1 − F²)`, with `η1` the smaller prior.
pub fn zero_margin_bound(eta1: f64, fidelity: f64) -> f64 {
    let e1 = eta1.min(1.0 - eta1);
    let e2 = 1.0 - e1;
    let f2 = fidelity * fidelity;
    if e1 >= e2 * f2 {
        1.0 - 2.0 * (e1 * e2).sqrt() * fidelity
    } else {
        e2 * (1.0 - f2)
    }
}
