//! Brute-force verification by direct search over measurements.
//!
//! Nothing here uses the closed forms. The conclusive elements are searched
//! in the rank-one family
//!
//! ```text
//! E1 = t1 (I + u(θ1)·σ)/2,   E2 = t2 (I + u(θ2)·σ)/2,   E3 = I − E1 − E2,
//! ```
//!
//! with `u(θ)` a unit vector in the plane spanned by the two Bloch vectors.
//! Restricting to that plane loses nothing: reflecting an element through
//! the plane leaves every `tr(E ρ_a)` unchanged, so averaging a measurement
//! with its reflection gives an in-plane measurement with the same
//! statistics. [`oracle_full_bloch_weak`] searches the whole sphere and is
//! used to check this numerically.
//!
//! For fixed directions the weights are found exactly: `E3 ⪰ 0` reads
//! `t2 ≤ 2(1 − t1)/(2(1 − t1) + t1(1 + u1·u2))`, the margin is linear in `(t1, t2)`,
//! and the success probability, maximized over `t2`, is concave in `t1`, so a
//! golden-section search settles it. The directions come from a coarse grid
//! followed by pattern-search refinement.
//!
//! Every returned value is attained by an explicit feasible measurement and
//! is therefore a lower bound on the optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{check_margin, Instance, QubitEnsemble};
use crate::mixed_bounds::MixedInstance;
use crate::op2::{trace_product, Herm2, Vec3};
use crate::weak_solver::Povm3;

const GOLDEN_ITERS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Angular samples per direction.
    pub coarse_grid: usize,
    /// Pattern-search rounds after the grid.
    pub refine_iters: usize,
    /// Step shrink factor after a round without improvement.
    pub refine_shrink: f64,
    /// Number of best grid cells refined.
    pub refine_starts: usize,
    /// Reporting target for oracle/closed-form agreement.
    pub target_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { coarse_grid: 180, refine_iters: 40, refine_shrink: 0.5, refine_starts: 4, target_tol: 1e-3 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid < 8 {
            return Err(Error::InvalidInput(format!("coarse_grid {} must be at least 8", self.coarse_grid)));
        }
        if self.refine_starts == 0 || !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::InvalidInput("refinement needs at least one start and shrink in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Which error condition a search enforces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// `p_error ≤ m`.
    Weak(f64),
    /// Both conditional errors `≤ m`; an outcome that never occurs is unconstrained.
    Strong(f64),
}

/// Best measurement found by a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub p_best: f64,
    pub povm: Povm3,
}

/// Success and error weights contributed per unit `t` by a direction.
#[derive(Debug, Clone, Copy)]
struct Weights {
    succ: f64,
    err: f64,
}

/// `tr(ρ E)/t = (1 + u·r)/2` for unit `u`, written as `(1 − |r|)/2 + |r||u + r̂|²/4`
/// so it stays accurate, and exactly zero, when `u = −r̂`.
fn overlap_weight(u: Vec3, r: Vec3) -> f64 {
    let len = r.norm();
    match r.normalized(0.0) {
        Some(dir) => 0.5 * (1.0 - len) + 0.25 * len * (u + dir).dot(u + dir),
        None => 0.5,
    }
}

fn weights(ens: &QubitEnsemble, u: Vec3, own: usize) -> Weights {
    let other = 1 - own;
    Weights {
        succ: ens.eta[own] * overlap_weight(u, ens.bloch[own]),
        err: ens.eta[other] * overlap_weight(u, ens.bloch[other]),
    }
}

/// Largest `t2` keeping `I − t1P1 − t2P2 ⪰ 0`, given `opc = 1 + u1·u2 = |u1 + u2|²/2`.
fn psd_cap(t1: f64, opc: f64) -> f64 {
    let num = 2.0 * (1.0 - t1);
    let denom = num + t1 * opc;
    if denom <= 0.0 {
        return 1.0;
    }
    (num / denom).clamp(0.0, 1.0)
}

fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (f(lo), lo);
    let fh = f(hi);
    if fh > best.0 {
        best = (fh, hi);
    }
    if hi - lo <= 0.0 {
        return best;
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    for (v, x) in [(f1, x1), (f2, x2)] {
        if v > best.0 {
            best = (v, x);
        }
    }
    best
}

/// Optimal `(value, t1, t2)` for fixed unit directions.
fn best_weights(ens: &QubitEnsemble, u1: Vec3, u2: Vec3, cons: Constraint) -> (f64, f64, f64) {
    let w1 = weights(ens, u1, 0);
    let w2 = weights(ens, u2, 1);
    let c = 0.5 * (u1 + u2).dot(u1 + u2);
    match cons {
        Constraint::Weak(m) => {
            let budget = m;
            let t1_max = if w1.err > 0.0 { (budget / w1.err).min(1.0) } else { 1.0 };
            let t2_cap = |t1: f64| {
                let margin = if w2.err > 0.0 { ((budget - t1 * w1.err) / w2.err).max(0.0) } else { f64::INFINITY };
                psd_cap(t1, c).min(margin)
            };
            let (v, t1) = golden_max(|t1| t1 * w1.succ + t2_cap(t1) * w2.succ, 0.0, t1_max);
            (v, t1, t2_cap(t1))
        }
        Constraint::Strong(m) => {
            let allowed = |w: Weights| w.err <= m * (w.succ + w.err);
            let t1_max = if allowed(w1) { 1.0 } else { 0.0 };
            let t2_on = allowed(w2);
            let t2_cap = |t1: f64| if t2_on { psd_cap(t1, c) } else { 0.0 };
            let (v, t1) = golden_max(|t1| t1 * w1.succ + t2_cap(t1) * w2.succ, 0.0, t1_max);
            (v, t1, t2_cap(t1))
        }
    }
}

fn povm_from(u1: Vec3, u2: Vec3, t1: f64, t2: f64) -> Povm3 {
    let e1 = Herm2::projector(u1).scale(t1);
    let e2 = Herm2::projector(u2).scale(t2);
    Povm3::new(e1, e2, Herm2::IDENTITY - e1 - e2)
}

/// Orthonormal pair spanning a plane that contains both Bloch vectors.
fn search_plane(ens: &QubitEnsemble) -> (Vec3, Vec3) {
    let [r1, r2] = ens.bloch;
    let a = r1.normalized(1e-12).or_else(|| r2.normalized(1e-12)).unwrap_or(Vec3::Z);
    let b = [r2, r1, Vec3::X, Vec3::new(0.0, 1.0, 0.0), Vec3::Z]
        .into_iter()
        .find_map(|v| (v - a * v.dot(a)).normalized(1e-9))
        .expect("some axis is independent of a");
    (a, b)
}

/// Unit vectors `±r̂_a`, kept exact so that zero-error directions are hit exactly.
fn state_directions(ens: &QubitEnsemble) -> Vec<Vec3> {
    ens.bloch.iter().filter_map(|r| r.normalized(1e-12)).flat_map(|d| [d, -d]).collect()
}

/// In-plane grid directions plus `±r̂_a` and their in-plane perpendiculars.
fn plane_directions(n: usize, ens: &QubitEnsemble, (a, b): (Vec3, Vec3)) -> Vec<Vec3> {
    let normal = a.cross(b);
    let mut dirs: Vec<Vec3> = (0..n)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / n as f64;
            a * th.cos() + b * th.sin()
        })
        .collect();
    for d in state_directions(ens) {
        dirs.push(d);
        dirs.push(normal.cross(d));
    }
    dirs
}

/// Rotates `u0` by `delta` within the plane with unit normal `normal`; exact at `delta = 0`.
fn rotate_in_plane(u0: Vec3, normal: Vec3, delta: f64) -> Vec3 {
    if delta == 0.0 {
        return u0;
    }
    u0 * delta.cos() + normal.cross(u0) * delta.sin()
}

/// Moves `u0` along the tangent offset `(da, db)` on the sphere; exact at zero offset.
fn move_on_sphere(u0: Vec3, da: f64, db: f64) -> Vec3 {
    let len = da.hypot(db);
    if len == 0.0 {
        return u0;
    }
    let ea = [Vec3::X, Vec3::new(0.0, 1.0, 0.0), Vec3::Z]
        .into_iter()
        .find_map(|v| (v - u0 * v.dot(u0)).normalized(0.5))
        .expect("some axis is far from u0");
    let eb = u0.cross(ea);
    u0 * len.cos() + (ea * da + eb * db) * (len.sin() / len)
}

/// Top `k` entries of `scored` by value, descending.
fn top_k<T: Copy>(mut scored: Vec<(f64, T)>, k: usize) -> Vec<(f64, T)> {
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    scored.truncate(k);
    scored
}

/// Maximizes `f` from the origin by compass search over all `±1, 0` combinations.
fn pattern_search<const D: usize>(f: &impl Fn(&[f64; D]) -> f64, step0: f64, cfg: &SearchConfig) -> (f64, [f64; D]) {
    // The objective has ridges where the active weight constraint changes,
    // so fixed compass moves can stall. Fresh random directions each round
    // let the search keep climbing along them.
    let mut dirs: Vec<[f64; D]> = Vec::new();
    for code in 0..3usize.pow(D as u32) {
        let mut d = [0.0; D];
        let mut c = code;
        for x in d.iter_mut() {
            *x = (c % 3) as f64 - 1.0;
            c /= 3;
        }
        if d.iter().any(|&x| x != 0.0) {
            dirs.push(d);
        }
    }
    let n_fixed = dirs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = [0.0; D];
    let mut fx = f(&x);
    let mut step = step0;
    let mut fails = 0;
    for _ in 0..cfg.refine_iters {
        dirs.truncate(n_fixed);
        for _ in 0..4 * D {
            let mut d = [0.0; D];
            for v in d.iter_mut() {
                *v = rng.gen_range(-1.0..1.0);
            }
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
            d.iter_mut().for_each(|v| *v /= norm);
            dirs.push(d);
            dirs.push(d.map(|v| -v));
        }
        let mut best = (fx, x);
        for d in &dirs {
            let mut y = x;
            for (yi, di) in y.iter_mut().zip(d) {
                *yi += step * di;
            }
            let fy = f(&y);
            if fy > best.0 {
                best = (fy, y);
            }
        }
        if best.0 > fx {
            (fx, x) = best;
            fails = 0;
        } else {
            fails += 1;
            if fails >= 2 {
                step *= cfg.refine_shrink;
                fails = 0;
            }
        }
    }
    (fx, x)
}

/// Scores every direction pair, then refines the best few with `refine`.
fn grid_then_refine<P: Copy + Send + Sync>(
    ens: &QubitEnsemble,
    dirs: &[Vec3],
    cons: Constraint,
    cfg: &SearchConfig,
    refine: impl Fn(Vec3, Vec3) -> (f64, P) + Sync,
) -> (f64, P) {
    let scored: Vec<(f64, (usize, usize))> = (0..dirs.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..dirs.len()).map(move |j| (best_weights(ens, dirs[i], dirs[j], cons).0, (i, j))))
        .collect();
    top_k(scored, cfg.refine_starts)
        .into_par_iter()
        .map(|(_, (i, j))| refine(dirs[i], dirs[j]))
        .reduce_with(|x, y| if y.0 > x.0 { y } else { x })
        .expect("at least one start")
}

/// Planar rank-one search on an arbitrary qubit ensemble (caller labels).
pub fn search_ensemble(ens: &QubitEnsemble, cons: Constraint, cfg: &SearchConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let plane = search_plane(ens);
    let normal = plane.0.cross(plane.1);
    let dirs = plane_directions(cfg.coarse_grid, ens, plane);
    let step0 = std::f64::consts::TAU / cfg.coarse_grid as f64;
    let (_, (u1, u2)) = grid_then_refine(ens, &dirs, cons, cfg, |s1, s2| {
        let at = |x: &[f64; 2]| (rotate_in_plane(s1, normal, x[0]), rotate_in_plane(s2, normal, x[1]));
        let (v, x) = pattern_search(&|x: &[f64; 2]| { let (u1, u2) = at(x); best_weights(ens, u1, u2, cons).0 }, step0, cfg);
        (v, at(&x))
    });
    let (p_best, t1, t2) = best_weights(ens, u1, u2, cons);
    if !p_best.is_finite() {
        return Err(Error::NoFeasiblePoint);
    }
    Ok(OracleResult { p_best, povm: povm_from(u1, u2, t1, t2) })
}

/// Best weak-margin success probability found by search; POVM in the canonical frame, caller labels.
pub fn oracle_pure_weak(inst: &Instance, m: f64, cfg: &SearchConfig) -> Result<OracleResult> {
    check_margin(m)?;
    search_ensemble(&inst.caller(), Constraint::Weak(m), cfg)
}

/// Best strong-margin success probability found by search.
pub fn oracle_pure_strong(inst: &Instance, m_s: f64, cfg: &SearchConfig) -> Result<OracleResult> {
    check_margin(m_s)?;
    search_ensemble(&inst.caller(), Constraint::Strong(m_s), cfg)
}

/// Best weak-margin success probability for two qubit mixed states.
///
/// Takes the better of the rank-one search and a search over general-rank
/// conclusive elements `a I + b u·σ` (`0 ≤ b ≤ a`), whose weights for fixed
/// `(u, b)` solve a two-variable linear program exactly.
pub fn oracle_mixed_weak(minst: &MixedInstance, m: f64, cfg: &SearchConfig) -> Result<f64> {
    check_margin(m)?;
    if minst.rho1.dim() != 2 {
        return Err(Error::DimensionUnsupported(minst.rho1.dim()));
    }
    let ens = minst.qubit_ensemble()?;
    let rank_one = search_ensemble(&ens, Constraint::Weak(m), cfg)?.p_best;
    Ok(rank_one.max(general_rank_search(&ens, m, cfg)))
}

/// Grid over directions and Bloch lengths of general-rank conclusive elements.
fn general_rank_search(ens: &QubitEnsemble, m: f64, cfg: &SearchConfig) -> f64 {
    let dirs = plane_directions((cfg.coarse_grid / 5).max(8), ens, search_plane(ens));
    let lengths: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
    dirs.par_iter()
        .map(|&u1| {
            let mut best = f64::NEG_INFINITY;
            for &u2 in &dirs {
                for &b1 in &lengths {
                    for &b2 in &lengths {
                        best = best.max(general_rank_lp(ens, m, u1 * b1, u2 * b2));
                    }
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Maximizes success over `(a1, a2)` for `E_μ = a_μ I + v_μ·σ`, or `-∞` if infeasible.
fn general_rank_lp(ens: &QubitEnsemble, m: f64, v1: Vec3, v2: Vec3) -> f64 {
    let [r1, r2] = ens.bloch;
    let [e1, e2] = ens.eta;
    // tr(E ρ) = a + v·r
    let succ_const = e1 * v1.dot(r1) + e2 * v2.dot(r2);
    let err_const = e2 * v1.dot(r2) + e1 * v2.dot(r1);
    let cap = 1.0 - (v1 + v2).norm();
    // rows g·a ≤ h
    let rows = [([-1.0, 0.0], -v1.norm()), ([0.0, -1.0], -v2.norm()), ([1.0, 1.0], cap), ([e2, e1], m - err_const)];
    let feasible = |x: [f64; 2]| rows.iter().all(|(g, h)| g[0] * x[0] + g[1] * x[1] <= *h);
    let mut best = f64::NEG_INFINITY;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (g, h) = rows[i];
            let (k, l) = rows[j];
            let det = g[0] * k[1] - g[1] * k[0];
            if det.abs() < 1e-15 {
                continue;
            }
            let x = [(h * k[1] - g[1] * l) / det, (g[0] * l - h * k[0]) / det];
            // vertices may miss their own rows by rounding; shrink onto the feasible side
            let x = [x[0].max(-rows[0].1), x[1].max(-rows[1].1)];
            if feasible(x) {
                best = best.max(e1 * x[0] + e2 * x[1] + succ_const);
            }
        }
    }
    best
}

/// Weak-margin search over the full Bloch sphere for both conclusive directions.
pub fn oracle_full_bloch_weak(inst: &Instance, m: f64, cfg: &SearchConfig) -> Result<f64> {
    check_margin(m)?;
    cfg.validate()?;
    let ens = inst.caller();
    let cons = Constraint::Weak(m);
    let n_az = (cfg.coarse_grid / 6).max(8);
    let n_pol = n_az / 2;
    let mut dirs = Vec::new();
    for i in 0..=n_pol {
        let pol = std::f64::consts::PI * i as f64 / n_pol as f64;
        for j in 0..n_az {
            let az = std::f64::consts::TAU * j as f64 / n_az as f64;
            dirs.push(Vec3::new(pol.sin() * az.cos(), pol.sin() * az.sin(), pol.cos()));
        }
    }
    dirs.extend(state_directions(&ens));
    let step0 = std::f64::consts::TAU / n_az as f64;
    let (best, ()) = grid_then_refine(&ens, &dirs, cons, cfg, |s1, s2| {
        let f = |x: &[f64; 4]| best_weights(&ens, move_on_sphere(s1, x[0], x[1]), move_on_sphere(s2, x[2], x[3]), cons).0;
        (pattern_search(&f, step0, cfg).0, ())
    });
    Ok(best)
}

/// `Σ_μ √(q1_μ q2_μ)` with `q_a,μ = tr(ρ_a E_μ)`; never below the overlap `√S`.
pub fn classical_fidelity(inst: &Instance, povm: &Povm3) -> f64 {
    classical_fidelity_ensemble(&inst.caller(), povm)
}

pub fn classical_fidelity_ensemble(ens: &QubitEnsemble, povm: &Povm3) -> f64 {
    let (r1, r2) = (ens.density(0), ens.density(1));
    povm.elements()
        .iter()
        .map(|e| (trace_product(e, &r1).max(0.0) * trace_product(e, &r2).max(0.0)).sqrt())
        .sum()
}
