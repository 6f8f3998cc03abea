//! Audit dual certificates across all three domains.

use errmargin::instance::Instance;
use errmargin::weak_solver::{solve_weak, Multiplier};

pub fn run_example() -> errmargin::Result<()> {
    let inst = Instance::from_overlap(0.3, 0.9)?;
    println!("{:>6} {:>14} {:>12} {:>10} {:>10} {:>10}", "m", "domain", "y", "min eig", "slack", "gap");
    for m in [0.0, 0.03, 0.072, 0.1, 0.2, 0.3, 1.0] {
        let sol = solve_weak(&inst, m)?;
        let check = sol.check_certificate(&inst);
        let y = match sol.cert.y {
            Multiplier::Finite(y) => format!("{y:.6}"),
            Multiplier::Unbounded => "unbounded".into(),
        };
        println!(
            "{m:>6} {:>14} {y:>12} {:>10.2e} {:>10.2e} {:>10.2e}",
            sol.domain.kind.as_str(),
            check.worst_eigenvalue(),
            check.worst_slackness(),
            check.gap
        );
        assert!(check.passes(), "certificate failed at m = {m}");
    }
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
