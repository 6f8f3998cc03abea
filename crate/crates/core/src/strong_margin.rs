//! Strong (conditional-error) margins.
//!
//! Under the strong condition each conclusive outcome must be wrong with
//! conditional probability at most `m`:
//!
//! ```text
//! P(ρ2 | E1) ≤ m,   P(ρ1 | E2) ≤ m.
//! ```
//!
//! The strong problem at margin `m_S` has the same optimal measurement as the
//! weak problem at
//!
//! ```text
//! m_W = m_S · p_S(m_S) / (1 − m_S),   equivalently   m_S = m_W / (p_W(m_W) + m_W),
//! ```
//!
//! so [`solve_strong`] delegates to the weak solver at the mapped margin.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{check_margin, DomainKind, Instance};
use crate::weak_solver::{helstrom, optimal_success, solve_weak, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MarginKind {
    /// Mean error probability bounded by `m`.
    Weak,
    /// Both conditional error probabilities bounded by `m`.
    Strong,
}

impl MarginKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MarginKind::Weak => "weak",
            MarginKind::Strong => "strong",
        }
    }
}

impl fmt::Display for MarginKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strong-margin breakpoints `(m_c, m_c′)` for priors `(eta1, 1 − eta1)` and squared overlap `s`.
///
/// `m_c` coincides with the weak value; `m_c′ = (η1 − q)² / ((η1 − q)² + (η2 − q)²)`
/// with `q = √(η1η2S)` when `η1 < η2S`, else zero.
pub fn strong_critical_margins(eta1: f64, s: f64) -> (f64, f64) {
    let e1 = eta1.min(1.0 - eta1);
    let e2 = 1.0 - e1;
    let m_c = 0.5 * (1.0 - (1.0 - 4.0 * e1 * e2 * s).max(0.0).sqrt());
    let m_c_prime = if e1 < e2 * s {
        let q = (e1 * e2 * s).sqrt();
        let (a, b) = ((e1 - q).powi(2), (e2 - q).powi(2));
        a / (a + b)
    } else {
        0.0
    };
    (m_c, m_c_prime)
}

/// Strong-margin domain, same breakpoint conventions as the weak classification.
pub fn classify_strong(eta1: f64, s: f64, m_s: f64) -> Result<DomainKind> {
    check_margin(m_s)?;
    let (m_c, m_cp) = strong_critical_margins(eta1, s);
    let e1 = eta1.min(1.0 - eta1);
    Ok(if m_s >= m_c {
        DomainKind::MinimumError
    } else if e1 <= (1.0 - e1) * s && m_s <= m_cp {
        DomainKind::SingleState
    } else {
        DomainKind::Intermediate
    })
}

/// `A_m = (1 − m)/(1 − 2m)² · (1 + 2√(m(1 − m)))`.
pub fn a_factor(m: f64) -> f64 {
    assert!(m < 0.5, "A_m is singular at m = 1/2 (got {m})");
    (1.0 - m) / (1.0 - 2.0 * m).powi(2) * (1.0 + 2.0 * (m * (1.0 - m)).sqrt())
}

/// Closed-form strong optimum for priors `(eta1, 1 − eta1)`, squared overlap `s`, margin `m_s`.
pub fn optimal_success_strong(eta1: f64, s: f64, m_s: f64) -> Result<f64> {
    let kind = classify_strong(eta1, s, m_s)?;
    let e1 = eta1.min(1.0 - eta1);
    let e2 = 1.0 - e1;
    let q = (e1 * e2 * s).sqrt();
    let m = m_s;
    Ok(match kind {
        DomainKind::MinimumError => helstrom(e1, s),
        DomainKind::Intermediate => a_factor(m) * (1.0 - 2.0 * q),
        DomainKind::SingleState => {
            let denom = m * e2 + (1.0 - m) * e1 - 2.0 * (m * (1.0 - m) * e1 * e2 * s).sqrt();
            e1 * e2 * (1.0 - m) * (1.0 - s) / denom
        }
    })
}

pub fn p_max_strong(inst: &Instance, m_s: f64) -> Result<f64> {
    optimal_success_strong(inst.eta1, inst.s, m_s)
}

/// Weak margin with the same optimal measurement as the strong margin `m_s`.
///
/// Values above one (large `m_s`, where both constraints are inactive anyway)
/// are clamped to one.
pub fn weak_margin_of_strong(inst: &Instance, m_s: f64) -> Result<f64> {
    check_margin(m_s)?;
    if m_s >= 1.0 {
        return Err(Error::MarginOutOfRange(m_s));
    }
    let p = p_max_strong(inst, m_s)?;
    Ok((m_s * p / (1.0 - m_s)).min(1.0))
}

/// Strong margin with the same optimal measurement as the weak margin `m_w`.
pub fn strong_margin_of_weak(inst: &Instance, m_w: f64) -> Result<f64> {
    let p = crate::weak_solver::p_max_weak(inst, m_w)?;
    Ok(if m_w == 0.0 { 0.0 } else { m_w / (p + m_w) })
}

/// Strong solution: the weak solution at the mapped margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongSolution {
    pub strong_margin: f64,
    pub weak_margin: f64,
    /// Domain in the strong classification.
    pub strong_domain: DomainKind,
    pub p_max: f64,
    pub solution: Solution,
}

impl StrongSolution {
    /// Largest defined conditional error, zero if neither conclusive outcome occurs.
    pub fn worst_conditional_error(&self) -> f64 {
        let d = &self.solution.diagnostics;
        d.cond_err_1.unwrap_or(0.0).max(d.cond_err_2.unwrap_or(0.0))
    }

    /// Both conditional errors within `m_s + tol`.
    pub fn satisfies_strong_margin(&self, tol: f64) -> bool {
        self.worst_conditional_error() <= self.strong_margin + tol
    }
}

pub fn solve_strong(inst: &Instance, m_s: f64) -> Result<StrongSolution> {
    // m_s = 1 imposes nothing; reuse the Helstrom solution
    let m_w = if m_s == 1.0 { 1.0 } else { weak_margin_of_strong(inst, m_s)? };
    let solution = solve_weak(inst, m_w)?;
    Ok(StrongSolution {
        strong_margin: m_s,
        weak_margin: m_w,
        strong_domain: classify_strong(inst.eta1, inst.s, m_s)?,
        p_max: p_max_strong(inst, m_s)?,
        solution,
    })
}

/// Weak optimum at the margin mapped from `m_s`; equals [`optimal_success_strong`].
pub fn optimal_success_strong_via_weak(eta1: f64, s: f64, m_s: f64) -> Result<f64> {
    let inst = Instance::from_overlap(eta1, s.sqrt())?;
    optimal_success(eta1, s, weak_margin_of_strong(&inst, m_s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weak_solver::p_max_weak;
    use proptest::prelude::*;

    fn eta03_overlap09() -> Instance {
        Instance::from_overlap(0.3, 0.9).unwrap()
    }

    /// Inverts the increasing map `m_w ↦ m_s` by bisection, independent of the strong closed form.
    fn invert(inst: &Instance, m_s: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if strong_margin_of_weak(inst, mid).unwrap() < m_s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn map_examples() {
        let inst = eta03_overlap09();
        assert_eq!(weak_margin_of_strong(&inst, 0.0).unwrap(), 0.0);
        assert_eq!(strong_margin_of_weak(&inst, 0.0).unwrap(), 0.0);
        let (m_c, _) = strong_critical_margins(0.3, 0.81);
        assert!((weak_margin_of_strong(&inst, m_c).unwrap() - m_c).abs() < 1e-12);
        assert!((strong_margin_of_weak(&inst, m_c).unwrap() - m_c).abs() < 1e-12);
        assert!((weak_margin_of_strong(&inst, 0.187_664_8).unwrap() - 0.15).abs() < 1e-6);
        let p_h = helstrom(0.3, 0.81);
        assert!((strong_margin_of_weak(&inst, 1.0).unwrap() - 1.0 / (p_h + 1.0)).abs() < 1e-15);
        let want = 0.15 / (p_max_weak(&inst, 0.15).unwrap() + 0.15);
        assert!((strong_margin_of_weak(&inst, 0.15).unwrap() - want).abs() < 1e-15);
        assert!(matches!(weak_margin_of_strong(&inst, 1.0), Err(Error::MarginOutOfRange(_))));
    }

    #[test]
    fn p_max_examples() {
        let inst = eta03_overlap09();
        assert!((p_max_strong(&inst, 0.0).unwrap() - 0.133).abs() < 1e-12);
        assert_eq!(p_max_strong(&inst, 0.3).unwrap(), helstrom(0.3, 0.81));
        let m_s = strong_margin_of_weak(&inst, 0.15).unwrap();
        assert!((p_max_strong(&inst, m_s).unwrap() - p_max_weak(&inst, 0.15).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn solve_examples() {
        let inst = eta03_overlap09();
        let sol = solve_strong(&inst, 0.3).unwrap();
        assert_eq!(sol.solution.povm.e3, crate::op2::Herm2::ZERO);
        let sol = solve_strong(&inst, 0.10).unwrap();
        assert!(sol.satisfies_strong_margin(1e-10));
        assert!((sol.worst_conditional_error() - 0.10).abs() < 1e-10);
        let strong = solve_strong(&inst, 0.0).unwrap();
        let weak = solve_weak(&inst, 0.0).unwrap();
        assert_eq!(strong.solution.povm, weak.povm);
    }

    #[test]
    fn fixed_point_at_critical_margin() {
        for (eta, s) in [(0.3, 0.81), (0.1, 0.5), (0.45, 0.99)] {
            let inst = Instance::from_overlap(eta, f64::sqrt(s)).unwrap();
            let (m_c, _) = strong_critical_margins(eta, s);
            let (w_c, _) = crate::instance::critical_margins(eta, s);
            assert_eq!(m_c, w_c);
            assert!((strong_margin_of_weak(&inst, w_c).unwrap() - w_c).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_breakpoint_is_image_of_weak_breakpoint() {
        let inst = eta03_overlap09();
        let (_, w_cp) = crate::instance::critical_margins(0.3, 0.81);
        let (_, s_cp) = strong_critical_margins(0.3, 0.81);
        assert!((strong_margin_of_weak(&inst, w_cp).unwrap() - s_cp).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn closed_form_matches_conversion(eta in 0.01f64..0.99, s in 0.0f64..0.98) {
            let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
            let mut prev = 0.0;
            for i in 0..1000 {
                let m_s = i as f64 / 1000.0;
                let closed = p_max_strong(&inst, m_s).unwrap();
                let via = p_max_weak(&inst, weak_margin_of_strong(&inst, m_s).unwrap()).unwrap();
                prop_assert!((closed - via).abs() <= 1e-10, "m_s={m_s}: {closed} vs {via}");
                prop_assert!(closed <= p_max_weak(&inst, m_s).unwrap() + 1e-12);
                prop_assert!(closed >= prev - 1e-15);
                prev = closed;
            }
        }

        #[test]
        fn round_trip(eta in 0.01f64..0.99, s in 0.0f64..0.98, m_s in 0.0f64..0.45) {
            let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
            let back = strong_margin_of_weak(&inst, weak_margin_of_strong(&inst, m_s).unwrap()).unwrap();
            prop_assert!((back - m_s).abs() <= 1e-10);
        }

        #[test]
        fn bisection_inverse_agrees(eta in 0.01f64..0.99, s in 0.0f64..0.98, frac in 0.0f64..1.0) {
            let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
            let (m_c, _) = strong_critical_margins(eta, s);
            let m_s = frac * m_c;
            let m_w = invert(&inst, m_s);
            let closed = p_max_strong(&inst, m_s).unwrap();
            prop_assert!((closed - p_max_weak(&inst, m_w).unwrap()).abs() <= 1e-9);
        }

        #[test]
        fn strong_solution_respects_conditionals(eta in 0.01f64..0.99, s in 0.0f64..0.98, m_s in 0.0f64..0.6) {
            let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
            let sol = solve_strong(&inst, m_s).unwrap();
            prop_assert!(sol.satisfies_strong_margin(1e-10));
            prop_assert!((sol.solution.p_success() - sol.p_max).abs() <= 1e-10);
        }
    }
}
