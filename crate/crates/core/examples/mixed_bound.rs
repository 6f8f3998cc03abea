//! Upper bound for mixed states from their fidelity.

use errmargin::mixed_bounds::{
    fidelity, helstrom_mixed, trace_fidelity_inequality_gap, upper_bound_mixed, DensityMatrix, MixedInstance,
};
use errmargin::op2::Vec3;

pub fn run_example() -> errmargin::Result<()> {
    let rho1 = DensityMatrix::from_bloch(Vec3::new(0.6, 0.0, 0.7))?;
    let rho2 = DensityMatrix::from_bloch(Vec3::new(-0.5, 0.2, 0.6))?;
    println!("fidelity {:.10}", fidelity(&rho1, &rho2)?);

    let minst = MixedInstance::new(rho1, rho2, 0.35)?;
    let (m_c, m_cp) = minst.critical_margins();
    println!("m_c {m_c:.6}  m_c' {m_cp:.6}");
    println!("helstrom {:.10}", helstrom_mixed(&minst));
    println!("gap      {:.3e}", trace_fidelity_inequality_gap(&minst));
    for m in [0.0, 0.01, 0.05, 0.1, 1.0] {
        println!("m {m:<5} bound {:.10}", upper_bound_mixed(&minst, m)?);
    }
    Ok(())
}

fn main() -> errmargin::Result<()> {
    run_example()
}
