//! Conditional-error margins and their translation to the weak condition.

use errmargin::instance::Instance;
use errmargin::strong_margin::{solve_strong, strong_critical_margins, strong_margin_of_weak};

pub fn run_example() -> errmargin::Result<()> {
    let inst = Instance::from_overlap(0.3, 0.9)?;
    let (m_c, m_cp) = strong_critical_margins(inst.eta1, inst.s);
    println!("strong m_c = {m_c:.6}, m_c' = {m_cp:.6}");
    for m_s in [0.0, 0.05, 0.1, 0.2, 0.3, 1.0] {
        let sol = solve_strong(&inst, m_s)?;
        println!(
            "m_s {m_s:<4} -> m_w {:.6}  {:<13} p_max {:.8}  worst conditional {:.6}",
            sol.weak_margin,
            sol.strong_domain.as_str(),
            sol.p_max,
            sol.worst_conditional_error()
        );
        assert!(sol.satisfies_strong_margin(1e-10));
    }
    let back = strong_margin_of_weak(&inst, 0.02)?;
    println!("weak 0.02 is strong {back:.6}");
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
