//! Solve one weak-margin instance and print the optimal measurement.
//!
//! ```text
//! cargo run --example solve_weak
//! ```

use errmargin::instance::Instance;
use errmargin::weak_solver::solve_weak;

pub fn run_example() -> errmargin::Result<()> {
    let inst = Instance::from_overlap(0.3, 0.9)?;
    let sol = solve_weak(&inst, 0.15)?;

    println!("domain   {}", sol.domain.kind);
    println!("m_c      {:.6}", sol.domain.m_c);
    println!("m_c'     {:.6}", sol.domain.m_c_prime);
    println!("p_max    {:.10}", sol.p_max);
    println!("p_error  {:.10}", sol.p_error());
    for (i, e) in sol.povm_in_caller_basis(&inst).elements().iter().enumerate() {
        println!("E{}       {e}", i + 1);
    }
    let check = sol.check_certificate(&inst);
    println!("certificate gap {:.2e}, slackness {:.2e}", check.gap, check.worst_slackness());
    assert!(check.passes());
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
