//! Compare the closed form with a direct search over measurements.

use errmargin::instance::Instance;
use errmargin::oracle::{oracle_pure_weak, SearchConfig};
use errmargin::weak_solver::p_max_weak;

pub fn run_example() -> errmargin::Result<()> {
    let cfg = SearchConfig::default();
    for (eta1, overlap, m) in [(0.3, 0.9, 0.03), (0.3, 0.9, 0.15), (0.3, 0.9, 0.5), (0.45, 0.6, 0.0)] {
        let inst = Instance::from_overlap(eta1, overlap)?;
        let exact = p_max_weak(&inst, m)?;
        let found = oracle_pure_weak(&inst, m, &cfg)?;
        println!(
            "eta1 {eta1} overlap {overlap} m {m:<5} closed {exact:.8} search {:.8} diff {:.1e}",
            found.p_best,
            exact - found.p_best
        );
        assert!((exact - found.p_best).abs() <= cfg.target_tol);
    }
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
