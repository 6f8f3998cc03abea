use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::instance::critical_margins;
use crate::op2::trace_product;

fn eta03_overlap09() -> Instance {
    Instance::from_overlap(0.3, 0.9).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn p_max_examples() {
    let inst = eta03_overlap09();
    close(p_max_weak(&inst, 1.0).unwrap(), 0.782_665_880_502_051_4, 1e-12);
    close(p_max_weak(&inst, 0.0).unwrap(), 0.133, 1e-12);
    close(p_max_weak(&Instance::from_overlap(0.5, 0.9).unwrap(), 0.0).unwrap(), 0.1, 1e-12);
    for eta in [0.1, 0.3, 0.5, 0.8] {
        for m in [0.0, 0.1, 0.6, 1.0] {
            close(p_max_weak(&Instance::from_overlap(eta, 0.0).unwrap(), m).unwrap(), 1.0, 1e-15);
        }
    }
    assert!(matches!(p_max_weak(&inst, 1.5), Err(Error::MarginOutOfRange(_))));
}

#[test]
fn solve_examples() {
    let inst = eta03_overlap09();
    let sol = solve_weak(&inst, 0.15).unwrap();
    assert_eq!(sol.domain.kind, DomainKind::Intermediate);
    close(sol.p_max, 0.649_299_643_870_934_8, 1e-12);
    close(sol.p_success(), sol.p_max, 1e-12);

    let sol = solve_weak(&inst, 0.03).unwrap();
    assert_eq!(sol.domain.kind, DomainKind::SingleState);
    assert_eq!(sol.trace_e1, 0.0);
    close(sol.p_max, 0.341_166_380_065_837_4, 1e-12);

    let a = solve_weak(&inst, 0.4).unwrap();
    let b = solve_weak(&inst, 1.0).unwrap();
    assert_eq!(a.povm, b.povm);
    assert_eq!(a.p_max, b.p_max);
    assert_eq!(a.cert.y_op, b.cert.y_op);
    assert_eq!(a.margin, 0.4);
}

#[test]
fn min_error_examples() {
    let inst = Instance::from_overlap(0.5, 0.0).unwrap();
    let (povm, _) = build_min_error(&inst).unwrap();
    close(trace_product(&povm.e1, &Herm2::density(inst.n1)), 1.0, 1e-14);
    close(trace_product(&povm.e2, &Herm2::density(inst.n2)), 1.0, 1e-14);

    let inst = eta03_overlap09();
    let (povm, _) = build_min_error(&inst).unwrap();
    let d = diagnostics(&inst.internal(), &povm);
    close(d.p_success, 0.782_665_880_502_051_4, 1e-12);
    close(d.p_error, critical_margins(0.3, 0.81).0, 1e-12);

    let inst = Instance::from_overlap(1e-6, 0.9).unwrap();
    let (povm, _) = build_min_error(&inst).unwrap();
    close(povm.e1.trace(), 1.0, 1e-12);
    close(diagnostics(&inst.internal(), &povm).p_success, inst.eta2, 1e-5);
}

#[test]
fn intermediate_examples() {
    let inst = eta03_overlap09();
    let parts = intermediate_parts(&inst, 0.15).unwrap();
    close(parts.y, 1.0 + (1.0 - 2.0 * (0.3f64 * 0.7 * 0.81).sqrt()).sqrt() / 0.15f64.sqrt(), 1e-14);
    close(parts.y, 2.080_55, 1e-5);
    for r in parts.eigen_equation_residuals(&inst) {
        close(r, 0.0, 1e-10);
    }
    let (povm, cert) = build_intermediate(&inst, 0.15).unwrap();
    assert!(povm.elements().iter().all(|e| e.trace() > 1e-3));
    close(cert.d, 0.649_299_643_870_934_8, 1e-12);
    close(diagnostics(&inst.internal(), &povm).p_error, 0.15, 1e-10);

    let (m_c, m_cp) = critical_margins(0.3, 0.81);
    let at_mc = intermediate_parts(&inst, m_c).unwrap();
    close(at_mc.coeffs[2], 0.0, 1e-10);
    let at_mcp = intermediate_parts(&inst, m_cp).unwrap();
    close(at_mcp.coeffs[0], 0.0, 1e-10);

    assert!(matches!(build_intermediate(&inst, 0.03), Err(Error::OutOfDomain { .. })));
    assert!(matches!(build_intermediate(&inst, 0.3), Err(Error::OutOfDomain { .. })));
    let equal = Instance::from_overlap(0.5, 0.9).unwrap();
    assert!(matches!(build_intermediate(&equal, 0.0), Err(Error::MarginZeroDegenerate)));
}

#[test]
fn intermediate_matches_min_error_at_boundary() {
    let inst = eta03_overlap09();
    let (m_c, _) = critical_margins(0.3, 0.81);
    let (a, _) = build_intermediate(&inst, m_c).unwrap();
    let (b, _) = build_min_error(&inst).unwrap();
    assert!(a.e3.trace().abs() < 1e-9);
    for (x, y) in a.elements().iter().zip(b.elements()) {
        assert!((*x - y).to_mat().frobenius_norm() < 1e-7, "{x} vs {y}");
    }
}

#[test]
fn single_state_examples() {
    let inst = Instance::from_overlap(0.2, 0.9).unwrap();
    let (povm, cert) = build_single_state(&inst, 0.0).unwrap();
    assert_eq!(povm.e1, Herm2::ZERO);
    close(trace_product(&povm.e2, &Herm2::density(inst.n1)), 0.0, 1e-15);
    close(cert.d, 0.8 * 0.19, 1e-14);

    let inst = eta03_overlap09();
    let (_, m_cp) = critical_margins(0.3, 0.81);
    let y_ss = single_state_multiplier(&inst, m_cp);
    let y_int = intermediate_parts(&inst, m_cp).unwrap().y;
    close(y_ss, y_int, 1e-9);
    let (a, _) = build_single_state(&inst, m_cp).unwrap();
    let (b, _) = build_intermediate(&inst, m_cp).unwrap();
    for (x, y) in a.elements().iter().zip(b.elements()) {
        assert!((*x - y).to_mat().frobenius_norm() < 1e-7, "{x} vs {y}");
    }
    assert!(matches!(build_single_state(&inst, 0.1), Err(Error::OutOfDomain { .. })));
    let no_single = Instance::from_overlap(0.5, 0.9).unwrap();
    assert!(matches!(build_single_state(&no_single, 0.0), Err(Error::OutOfDomain { .. })));
}

#[test]
fn single_state_conditionals() {
    let inst = eta03_overlap09();
    let sol = solve_weak(&inst, 0.03).unwrap();
    assert_eq!(sol.diagnostics.cond_err_1, None);
    let d = &sol.diagnostics;
    assert!(d.cond_err_2.is_some());
    // E3 is forced to the projector onto -f, so the E3 conditionals differ here
    let (a, b) = (d.conditional(0, 2).unwrap(), d.conditional(1, 2).unwrap());
    close(a + b, 1.0, 1e-12);
    assert!((a - b).abs() > 0.1);
    close(d.p_error, 0.03, 1e-10);
}

#[test]
fn unambiguous_examples() {
    let inst = Instance::from_overlap(0.5, 0.9).unwrap();
    let sol = solve_weak(&inst, 0.0).unwrap();
    assert_eq!(sol.cert.y, Multiplier::Unbounded);
    close(sol.p_success(), 0.1, 1e-12);
    close(sol.p_error(), 0.0, 1e-14);
    assert!(sol.check_certificate(&inst).passes());
}

#[test]
fn envelope_property() {
    let inst = eta03_overlap09();
    for m in [0.08, 0.12, 0.15, 0.2] {
        let parts = intermediate_parts(&inst, m).unwrap();
        let h = 1e-6;
        let dtr = (intermediate_dual(&inst, parts.y + h).trace() - intermediate_dual(&inst, parts.y - h).trace()) / (2.0 * h);
        let (povm, _) = build_intermediate(&inst, m).unwrap();
        let p_err = diagnostics(&inst.internal(), &povm).p_error;
        close(dtr, -p_err, 1e-5);
    }
}

#[test]
fn equal_priors_symmetry() {
    let inst = Instance::from_overlap(0.5, 0.9).unwrap();
    let sol = solve_weak(&inst, 0.05).unwrap();
    let d = sol.diagnostics;
    close(d.cond_err_1.unwrap(), d.cond_err_2.unwrap(), 1e-10);
}

#[test]
fn swap_covariance() {
    let a = Instance::from_overlap(0.3, 0.9).unwrap();
    let b = Instance::from_overlap(0.7, 0.9).unwrap();
    for m in [0.0, 0.03, 0.1, 0.15, 0.5] {
        let sa = solve_weak(&a, m).unwrap();
        let sb = solve_weak(&b, m).unwrap();
        close(sa.p_max, sb.p_max, 1e-12);
        // Both instances share the same internal frame, so the caller-label POVMs are swaps.
        let swapped = sb.povm.swap_labels();
        for (x, y) in sa.povm.elements().iter().zip(swapped.elements()) {
            assert!((*x - y).to_mat().frobenius_norm() < 1e-12);
        }
        close(sa.diagnostics.cond_err_1.unwrap_or(0.0), sb.diagnostics.cond_err_2.unwrap_or(0.0), 1e-12);
    }
}

#[test]
fn caller_basis_povm_reproduces_statistics() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let psi1 = [c(0.3, 0.4), c(-0.2, 0.7)];
    let psi2 = [c(0.9, -0.1), c(0.1, 0.5)];
    let inst = Instance::canonicalize(psi1, psi2, 0.65).unwrap();
    for m in [0.0, 0.01, 0.05, 0.1, 0.3] {
        let sol = solve_weak(&inst, m).unwrap();
        let povm = sol.povm_in_caller_basis(&inst);
        let ket = |p: [Complex64; 2]| {
            let n = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
            [p[0] / n, p[1] / n]
        };
        let (k1, k2) = (ket(psi1), ket(psi2));
        let eta1 = 0.65;
        let p_succ = eta1 * povm.e1.expectation(&k1) + (1.0 - eta1) * povm.e2.expectation(&k2);
        close(p_succ, sol.p_max, 1e-12);
        assert!(povm.is_valid(1e-12));
    }
}

#[test]
fn continuity_at_breakpoints() {
    for (eta, ov) in [(0.3, 0.9), (0.1, 0.95), (0.45, 0.5), (0.02, 0.99)] {
        let (m_c, m_cp) = critical_margins(eta, ov * ov);
        for b in [m_c, m_cp] {
            if b <= 0.0 {
                continue;
            }
            let lo = optimal_success(eta, ov * ov, b * (1.0 - 1e-15)).unwrap();
            let hi = optimal_success(eta, ov * ov, b * (1.0 + 1e-15)).unwrap();
            close(lo, hi, 1e-12);
        }
    }
}

fn instance_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.01f64..0.99, 0.0f64..0.98)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_passes((eta, s) in instance_strategy(), frac in 0.0f64..1.0) {
        let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
        let (m_c, _) = critical_margins(eta, s);
        for m in [0.0, frac * m_c, frac, 1.0] {
            let sol = solve_weak(&inst, m).unwrap();
            let chk = sol.check_certificate(&inst);
            prop_assert!(chk.passes(), "eta={eta} s={s} m={m} {chk:?}");
            prop_assert!(sol.povm.is_valid(1e-12));
            prop_assert!(sol.povm.is_rank_one(1e-12));
            prop_assert!((sol.p_success() - sol.p_max).abs() <= 1e-10);
        }
    }

    #[test]
    fn monotone_in_margin((eta, s) in instance_strategy()) {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let m = i as f64 / 1000.0;
            let p = optimal_success(eta, s, m).unwrap();
            prop_assert!(p >= prev - 1e-15, "m={m}: {p} < {prev}");
            prev = p;
        }
    }

    #[test]
    fn conditional_symmetry((eta, s) in instance_strategy(), frac in 0.0f64..1.0) {
        let inst = Instance::from_overlap(eta, s.sqrt()).unwrap();
        let (m_c, m_cp) = critical_margins(eta, s);
        let m = m_cp + frac * (m_c - m_cp);
        let sol = solve_weak(&inst, m).unwrap();
        let d = sol.diagnostics;
        if let (Some(a), Some(b)) = (d.cond_err_1, d.cond_err_2) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
        if let (Some(a), Some(b)) = (d.conditional(0, 2), d.conditional(1, 2)) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }
}
