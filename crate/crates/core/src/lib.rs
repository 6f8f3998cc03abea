//! Optimal discrimination of two quantum states under an error margin.
//!
//! The closed-form solver ([`weak_solver`], [`strong_margin`]) returns the
//! optimal success probability, an optimal three-outcome measurement and a
//! dual certificate proving optimality. [`oracle`] re-derives the optimum by
//! direct search with no reference to the closed forms, and [`mixed_bounds`]
//! bounds the mixed-state problem through the fidelity.
//!
//! ```
//! use errmargin::{instance::Instance, weak_solver::solve_weak};
//!
//! let inst = Instance::from_overlap(0.3, 0.9).unwrap();
//! let sol = solve_weak(&inst, 0.15).unwrap();
//! assert!((sol.p_max - 0.649_299_643_870_934_8).abs() < 1e-12);
//! assert!(sol.check_certificate(&inst).passes());
//! ```

pub mod cli;
pub mod error;
pub mod instance;
pub mod mixed_bounds;
pub mod op2;
pub mod oracle;
pub mod strong_margin;
pub mod weak_solver;

pub use error::{Error, Result};
