//! Success probability and `tr E1` against the margin, as CSV on stdout.

use errmargin::cli::{sweep, Axis, SWEEP_HEADER};
use errmargin::strong_margin::MarginKind;

pub fn run_example() -> errmargin::Result<()> {
    let rows = sweep(&Axis::single(0.3), &Axis { lo: 0.0, hi: 1.0, steps: 500 }, 0.9, MarginKind::Weak)?;
    println!("{SWEEP_HEADER}");
    for r in rows.iter().step_by(25) {
        println!("{}", r.to_csv());
    }
    let first_open = rows.iter().find(|r| r.trace_e1 > 0.0).map(|r| r.m);
    println!("# E1 first used at m = {first_open:?} (m_c' = {:.6})", rows[0].m_c_prime);
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
