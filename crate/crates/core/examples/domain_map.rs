//! Walk the prior at a fixed margin and report where the optimal
//! measurement changes type.

use errmargin::instance::{classify_margin, DomainKind};

const OVERLAP: f64 = 0.9;
const MARGIN: f64 = 0.06;

/// Domains met as `eta1` falls from 0.5, with the prior at each change.
pub fn crossings(steps: usize) -> errmargin::Result<Vec<(f64, DomainKind)>> {
    let s = OVERLAP * OVERLAP;
    let mut out: Vec<(f64, DomainKind)> = Vec::new();
    for i in 0..steps {
        let eta1 = 0.5 * (1.0 - i as f64 / steps as f64);
        let kind = classify_margin(eta1, s, MARGIN)?.kind;
        if out.last().is_none_or(|&(_, k)| k != kind) {
            out.push((eta1, kind));
        }
    }
    Ok(out)
}

pub fn run_example() -> errmargin::Result<()> {
    println!("overlap {OVERLAP}, margin {MARGIN}");
    for (eta1, kind) in crossings(2000)? {
        println!("  from eta1 = {eta1:.4}: {kind}");
    }
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
