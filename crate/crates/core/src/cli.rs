//! Command-line front end.
//!
//! Subcommands:
//!
//! * `solve`: one instance, text or JSON report.
//! * `sweep`: CSV over an `eta1 × margin` grid (η1 outer, margin inner).
//! * `verify`: seeded random instances checked against the oracle and the certificates.
//! * `mixed-bound`: fidelity bound for two density matrices read from JSON.
//!
//! Exit codes: 0 success, 1 tolerance violation in `verify`, 2 invalid input or I/O failure.
//! Worker threads follow `RAYON_NUM_THREADS`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{critical_margins, DomainKind, Instance, Ket};
use crate::mixed_bounds::{
    helstrom_mixed, trace_fidelity_inequality_gap, upper_bound_mixed, DensityMatrix, MixedInstance,
};
use crate::op2::Herm2;
use crate::oracle::{oracle_mixed_weak, oracle_pure_strong, oracle_pure_weak, SearchConfig};
use crate::strong_margin::{
    p_max_strong, solve_strong, strong_critical_margins, MarginKind,
};
use crate::weak_solver::{p_max_weak, solve_weak, Solution};

/// Oracle/closed-form agreement required by `verify`.
pub const ORACLE_TOL: f64 = 1e-3;
/// Slack allowed when the oracle is compared with a certificate value.
pub const WEAK_DUALITY_TOL: f64 = 1e-9;
/// Slack allowed when the mixed oracle is compared with the fidelity bound.
pub const MIXED_BOUND_TOL: f64 = 1e-6;
/// Smallest allowed trace/fidelity inequality gap.
pub const GAP_FLOOR: f64 = -1e-10;

#[derive(Debug, Parser)]
#[command(name = "errmargin", version, about = "Optimal two-state discrimination with an error margin")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Write a CSV over a grid of priors and margins.
    Sweep(SweepArgs),
    /// Compare closed forms with the brute-force oracle on random instances.
    Verify(VerifyArgs),
    /// Evaluate the fidelity bound for two mixed states.
    MixedBound(MixedBoundArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Prior of the first state.
    #[arg(long)]
    pub eta1: f64,
    /// Overlap |<φ1|φ2>| of two real states (alternative to --state1/--state2).
    #[arg(long, conflicts_with_all = ["state1", "state2"], required_unless_present_all = ["state1", "state2"])]
    pub overlap: Option<f64>,
    /// First state as `re0,im0,re1,im1` (or `a0,a1` for real amplitudes).
    #[arg(long, requires = "state2", allow_hyphen_values = true)]
    pub state1: Option<String>,
    /// Second state, same format as --state1.
    #[arg(long, requires = "state1", allow_hyphen_values = true)]
    pub state2: Option<String>,
    #[arg(long)]
    pub margin: f64,
    #[arg(long, value_enum, default_value_t = MarginKind::Weak)]
    pub kind: MarginKind,
    /// Emit a single JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Prior axis: a value or `LO:HI:STEPS`.
    #[arg(long)]
    pub eta1: Axis,
    /// Margin axis: a value or `LO:HI:STEPS`.
    #[arg(long)]
    pub margin: Axis,
    /// Fixed overlap |<φ1|φ2>|.
    #[arg(long)]
    pub overlap: f64,
    #[arg(long, value_enum, default_value_t = MarginKind::Weak)]
    pub kind: MarginKind,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MarginKind::Weak)]
    pub kind: MarginKind,
    /// Check the mixed-state bound instead (qubits).
    #[arg(long)]
    pub mixed: bool,
    /// Angular grid of the oracle search.
    #[arg(long, default_value_t = SearchConfig::default().coarse_grid)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct MixedBoundArgs {
    /// JSON density matrix `{"dim": n, "re": [[..]], "im": [[..]]}`.
    #[arg(long)]
    pub rho1: PathBuf,
    #[arg(long)]
    pub rho2: PathBuf,
    #[arg(long)]
    pub eta1: f64,
    #[arg(long)]
    pub margin: f64,
    #[arg(long)]
    pub json: bool,
}

/// Evenly spaced closed range, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn single(v: f64) -> Self {
        Axis { lo: v, hi: v, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / n }).collect()
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let axis = match parts.as_slice() {
            [v] => Axis::single(num(v)?),
            [lo, hi, steps] => {
                let steps = steps.trim().parse::<usize>().map_err(|e| format!("bad step count {steps:?}: {e}"))?;
                if steps < 2 {
                    return Err(format!("a range needs at least 2 steps, got {steps}"));
                }
                Axis { lo: num(lo)?, hi: num(hi)?, steps }
            }
            _ => return Err(format!("expected VALUE or LO:HI:STEPS, got {s:?}")),
        };
        if ![axis.lo, axis.hi].iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(format!("range {s:?} must lie within [0, 1]"));
        }
        Ok(axis)
    }
}

/// Parses `re0,im0,re1,im1` or `a0,a1`.
pub fn parse_ket(s: &str) -> Result<Ket> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::InvalidInput(format!("bad amplitude {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    match vals.as_slice() {
        [a, b] => Ok([Complex64::new(*a, 0.0), Complex64::new(*b, 0.0)]),
        [a, b, c, d] => Ok([Complex64::new(*a, *b), Complex64::new(*c, *d)]),
        _ => Err(Error::InvalidInput(format!("state {s:?} needs 2 real or 4 (re, im) numbers"))),
    }
}

/// Bloch form of an operator for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpReport {
    pub alpha: f64,
    pub beta: [f64; 3],
}

impl From<Herm2> for OpReport {
    fn from(h: Herm2) -> Self {
        OpReport { alpha: h.alpha, beta: h.beta.to_array() }
    }
}

/// Output of `solve`; POVM and `Y` are in the caller's basis and labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub kind: MarginKind,
    pub eta1: f64,
    pub overlap: f64,
    pub margin: f64,
    /// Weak margin with the same optimal measurement (equals `margin` for weak).
    pub weak_margin: f64,
    pub domain: DomainKind,
    pub m_c: f64,
    pub m_c_prime: f64,
    pub p_max: f64,
    pub p_success: f64,
    pub p_error: f64,
    pub p_inconclusive: f64,
    pub cond_err_1: Option<f64>,
    pub cond_err_2: Option<f64>,
    pub trace_e1: f64,
    pub povm: [OpReport; 3],
    pub certificate_y_op: OpReport,
    /// `None` when the multiplier is unbounded (zero margin).
    pub certificate_y: Option<f64>,
    pub certificate_d: f64,
    pub certificate_passes: bool,
}

pub fn solve_report(inst: &Instance, margin: f64, kind: MarginKind) -> Result<SolveReport> {
    let (sol, weak_margin, domain, (m_c, m_c_prime), p_max): (Solution, _, _, _, _) = match kind {
        MarginKind::Weak => {
            let sol = solve_weak(inst, margin)?;
            let d = sol.domain;
            let p = sol.p_max;
            (sol, margin, d.kind, (d.m_c, d.m_c_prime), p)
        }
        MarginKind::Strong => {
            let s = solve_strong(inst, margin)?;
            let cm = strong_critical_margins(inst.eta1, inst.s);
            (s.solution, s.weak_margin, s.strong_domain, cm, s.p_max)
        }
    };
    let frame = inst.frame();
    let povm = sol.povm_in_caller_basis(inst);
    let d = sol.diagnostics;
    Ok(SolveReport {
        kind,
        eta1: inst.caller_eta1(),
        overlap: inst.overlap(),
        margin,
        weak_margin,
        domain,
        m_c,
        m_c_prime,
        p_max,
        p_success: d.p_success,
        p_error: d.p_error,
        p_inconclusive: d.p_inconclusive,
        cond_err_1: d.cond_err_1,
        cond_err_2: d.cond_err_2,
        trace_e1: sol.trace_e1,
        povm: povm.elements().map(OpReport::from),
        certificate_y_op: sol.cert.y_op.conjugate_by(&frame).into(),
        certificate_y: sol.cert.y.finite(),
        certificate_d: sol.cert.d,
        certificate_passes: sol.check_certificate(inst).passes(),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

fn fmt_op(o: &OpReport) -> String {
    format!("alpha={} beta=({}, {}, {})", o.alpha, o.beta[0], o.beta[1], o.beta[2])
}

pub fn render_solve(r: &SolveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "kind: {}", r.kind);
    let _ = writeln!(s, "eta1: {}", r.eta1);
    let _ = writeln!(s, "overlap: {}", r.overlap);
    let _ = writeln!(s, "margin: {}", r.margin);
    if r.kind == MarginKind::Strong {
        let _ = writeln!(s, "weak_margin: {}", r.weak_margin);
    }
    let _ = writeln!(s, "domain: {}", r.domain);
    let _ = writeln!(s, "m_c: {}", r.m_c);
    let _ = writeln!(s, "m_c_prime: {}", r.m_c_prime);
    let _ = writeln!(s, "p_max: {}", r.p_max);
    for (i, e) in r.povm.iter().enumerate() {
        let _ = writeln!(s, "E{}: {}", i + 1, fmt_op(e));
    }
    let _ = writeln!(s, "Y: {}", fmt_op(&r.certificate_y_op));
    let _ = writeln!(s, "y: {}", r.certificate_y.map_or_else(|| "unbounded".to_string(), |y| y.to_string()));
    let _ = writeln!(s, "d: {}", r.certificate_d);
    let _ = writeln!(s, "certificate: {}", if r.certificate_passes { "pass" } else { "FAIL" });
    let _ = writeln!(s, "p_success: {}", r.p_success);
    let _ = writeln!(s, "p_error: {}", r.p_error);
    let _ = writeln!(s, "p_inconclusive: {}", r.p_inconclusive);
    let _ = writeln!(s, "cond_err_1: {}", fmt_opt(r.cond_err_1));
    let _ = writeln!(s, "cond_err_2: {}", fmt_opt(r.cond_err_2));
    let _ = writeln!(s, "trace_e1: {}", r.trace_e1);
    s
}

fn solve_instance(args: &SolveArgs) -> Result<Instance> {
    match (&args.state1, &args.state2, args.overlap) {
        (Some(a), Some(b), _) => Instance::canonicalize(parse_ket(a)?, parse_ket(b)?, args.eta1),
        (_, _, Some(ov)) => Instance::from_overlap(args.eta1, ov),
        _ => Err(Error::InvalidInput("give --overlap or both --state1 and --state2".into())),
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eta1: f64,
    pub m: f64,
    pub domain: DomainKind,
    pub p_max: f64,
    pub trace_e1: f64,
    pub p_error: f64,
    pub m_c: f64,
    pub m_c_prime: f64,
}

pub const SWEEP_HEADER: &str = "eta1,m,domain,p_max,trace_e1,p_error,m_c,m_c_prime";

impl SweepRow {
    /// Numbers with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let f = |v: f64| format!("{v:.16e}");
        format!(
            "{},{},{},{},{},{},{},{}",
            f(self.eta1),
            f(self.m),
            self.domain,
            f(self.p_max),
            f(self.trace_e1),
            f(self.p_error),
            f(self.m_c),
            f(self.m_c_prime)
        )
    }
}

/// Evaluates the grid with η1 outer and margin inner; order is independent of threading.
pub fn sweep(eta1: &Axis, margin: &Axis, overlap: f64, kind: MarginKind) -> Result<Vec<SweepRow>> {
    let etas = eta1.values();
    let margins = margin.values();
    let cells: Vec<(f64, f64)> = etas.iter().flat_map(|&e| margins.iter().map(move |&m| (e, m))).collect();
    cells
        .par_iter()
        .map(|&(e, m)| {
            let inst = Instance::from_overlap(e, overlap)?;
            let r = solve_report(&inst, m, kind)?;
            Ok(SweepRow {
                eta1: e,
                m,
                domain: r.domain,
                p_max: r.p_max,
                trace_e1: r.trace_e1,
                p_error: r.p_error,
                m_c: r.m_c,
                m_c_prime: r.m_c_prime,
            })
        })
        .collect()
}

pub fn write_sweep(rows: &[SweepRow], out: &std::path::Path) -> Result<()> {
    let io = |e| Error::Io { path: out.display().to_string(), source: e };
    let mut w = std::io::BufWriter::new(std::fs::File::create(out).map_err(io)?);
    writeln!(w, "{SWEEP_HEADER}").map_err(io)?;
    for r in rows {
        writeln!(w, "{}", r.to_csv()).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// A sampled pure-state problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub eta1: f64,
    pub s: f64,
    pub m: f64,
}

/// Seeded samples cycling through the three domains of the chosen margin kind.
///
/// `η1 ∈ [0.02, 0.5]`, `S ∈ [0, 0.98]`, and `m` uniform within the target
/// domain; pairs without a single-state domain are redrawn when that domain is
/// the target.
pub fn sample_instances(n: usize, seed: u64, kind: MarginKind) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| loop {
            let eta1 = rng.gen_range(0.02..=0.5);
            let s = rng.gen_range(0.0..=0.98);
            let (m_c, m_cp) = match kind {
                MarginKind::Weak => critical_margins(eta1, s),
                MarginKind::Strong => strong_critical_margins(eta1, s),
            };
            let (lo, hi) = match i % 3 {
                0 => (m_c, 1.0),
                1 => (m_cp, m_c),
                _ if eta1 <= (1.0 - eta1) * s && m_cp > 0.0 => (0.0, m_cp),
                _ => continue,
            };
            break Sample { eta1, s, m: rng.gen_range(lo..=hi) };
        })
        .collect()
}

/// Outcome of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub samples: usize,
    /// Largest `|closed form − oracle|` (pure runs) or `oracle − bound` (mixed runs).
    pub max_deviation: f64,
    pub worst: Option<Sample>,
    /// Largest certificate slackness residual.
    pub max_slackness: f64,
    /// Largest duality gap.
    pub max_gap: f64,
    /// Smallest certificate eigenvalue.
    pub min_feasibility: f64,
    /// Largest `oracle − d` (weak) or conditional-error excess (strong).
    pub max_excess: f64,
    /// Smallest trace/fidelity inequality gap (mixed runs).
    pub min_inequality_gap: f64,
    pub violations: usize,
}

impl VerifyReport {
    fn new(kind: &str, samples: usize) -> Self {
        VerifyReport {
            kind: kind.into(),
            samples,
            max_deviation: 0.0,
            worst: None,
            max_slackness: 0.0,
            max_gap: 0.0,
            min_feasibility: f64::INFINITY,
            max_excess: f64::NEG_INFINITY,
            min_inequality_gap: f64::INFINITY,
            violations: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind: {}", self.kind);
        let _ = writeln!(s, "samples: {}", self.samples);
        let _ = writeln!(s, "max_deviation: {:e}", self.max_deviation);
        if self.kind != "mixed" {
            let _ = writeln!(s, "max_slackness: {:e}", self.max_slackness);
            let _ = writeln!(s, "max_duality_gap: {:e}", self.max_gap);
            let _ = writeln!(s, "min_feasibility_eigenvalue: {:e}", self.min_feasibility);
        } else {
            let _ = writeln!(s, "min_inequality_gap: {:e}", self.min_inequality_gap);
        }
        let _ = writeln!(s, "max_excess: {:e}", self.max_excess);
        if let Some(w) = self.worst {
            let _ = writeln!(s, "worst: eta1={} S={} m={}", w.eta1, w.s, w.m);
        }
        let _ = writeln!(s, "violations: {}", self.violations);
        let _ = writeln!(s, "result: {}", if self.passed() { "pass" } else { "FAIL" });
        s
    }
}

#[derive(Debug, Clone, Copy)]
struct Check {
    sample: Sample,
    deviation: f64,
    slackness: f64,
    gap: f64,
    feasibility: f64,
    excess: f64,
    ok: bool,
}

fn fold_checks(mut report: VerifyReport, checks: Vec<Check>) -> VerifyReport {
    for c in checks {
        if c.deviation >= report.max_deviation || report.worst.is_none() {
            report.max_deviation = c.deviation;
            report.worst = Some(c.sample);
        }
        report.max_slackness = report.max_slackness.max(c.slackness);
        report.max_gap = report.max_gap.max(c.gap);
        report.min_feasibility = report.min_feasibility.min(c.feasibility);
        report.max_excess = report.max_excess.max(c.excess);
        report.violations += usize::from(!c.ok);
    }
    report
}

fn check_pure(sample: Sample, kind: MarginKind, cfg: &SearchConfig) -> Result<Check> {
    let inst = Instance::from_overlap(sample.eta1, sample.s.sqrt())?;
    let m = sample.m;
    let (analytic, oracle, sol, excess) = match kind {
        MarginKind::Weak => {
            let sol = solve_weak(&inst, m)?;
            let oracle = oracle_pure_weak(&inst, m, cfg)?.p_best;
            let excess = oracle - sol.cert.d;
            (p_max_weak(&inst, m)?, oracle, sol, excess)
        }
        MarginKind::Strong => {
            let strong = solve_strong(&inst, m)?;
            let oracle = oracle_pure_strong(&inst, m, cfg)?.p_best;
            let excess = strong.worst_conditional_error() - m;
            (p_max_strong(&inst, m)?, oracle, strong.solution, excess)
        }
    };
    let chk = sol.check_certificate(&inst);
    let deviation = (analytic - oracle).abs();
    let excess_ok = match kind {
        MarginKind::Weak => excess <= WEAK_DUALITY_TOL,
        MarginKind::Strong => excess <= 1e-10,
    };
    Ok(Check {
        sample,
        deviation,
        slackness: chk.worst_slackness(),
        gap: chk.gap,
        feasibility: chk.worst_eigenvalue(),
        excess,
        ok: deviation <= ORACLE_TOL && chk.passes() && excess_ok,
    })
}

/// Closed form against oracle and certificates on seeded random pure instances.
pub fn verify_pure(samples: usize, seed: u64, kind: MarginKind, cfg: &SearchConfig) -> Result<VerifyReport> {
    let checks = sample_instances(samples, seed, kind)
        .into_iter()
        .map(|s| check_pure(s, kind, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(fold_checks(VerifyReport::new(kind.as_str(), samples), checks))
}

/// Mixed oracle against the fidelity bound on seeded random qubit pairs.
pub fn verify_mixed(samples: usize, seed: u64, cfg: &SearchConfig) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::new("mixed", samples);
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let rho1 = DensityMatrix::random_qubit(&mut rng);
        let rho2 = DensityMatrix::random_qubit(&mut rng);
        let eta1 = rng.gen_range(0.02..=0.98);
        let m = rng.gen_range(0.0..=1.0);
        let minst = MixedInstance::new(rho1, rho2, eta1)?;
        let bound = upper_bound_mixed(&minst, m)?;
        let oracle = oracle_mixed_weak(&minst, m, cfg)?;
        let ineq = trace_fidelity_inequality_gap(&minst);
        report.min_inequality_gap = report.min_inequality_gap.min(ineq);
        let excess = oracle - bound;
        checks.push(Check {
            sample: Sample { eta1, s: minst.fidelity * minst.fidelity, m },
            deviation: excess.max(0.0),
            slackness: 0.0,
            gap: 0.0,
            feasibility: 0.0,
            excess,
            ok: excess <= MIXED_BOUND_TOL && ineq >= GAP_FLOOR,
        });
    }
    Ok(fold_checks(report, checks))
}

/// Output of `mixed-bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedReport {
    pub eta1: f64,
    pub margin: f64,
    pub fidelity: f64,
    pub m_c: f64,
    pub m_c_prime: f64,
    pub domain: DomainKind,
    pub upper_bound: f64,
    pub helstrom: f64,
    pub inequality_gap: f64,
}

pub fn mixed_report(minst: &MixedInstance, margin: f64) -> Result<MixedReport> {
    let (m_c, m_c_prime) = minst.critical_margins();
    let domain = crate::instance::classify_margin(minst.eta1, minst.fidelity * minst.fidelity, margin)?.kind;
    Ok(MixedReport {
        eta1: minst.eta1,
        margin,
        fidelity: minst.fidelity,
        m_c,
        m_c_prime,
        domain,
        upper_bound: upper_bound_mixed(minst, margin)?,
        helstrom: helstrom_mixed(minst),
        inequality_gap: trace_fidelity_inequality_gap(minst),
    })
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report types serialize") + "\n"
}

/// Runs a parsed command, writing the report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let io = |e| Error::Io { path: "<stdout>".into(), source: e };
    match cli.command {
        Command::Solve(args) => {
            let inst = solve_instance(&args)?;
            let report = solve_report(&inst, args.margin, args.kind)?;
            let text = if args.json { json_line(&report) } else { render_solve(&report) };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let rows = sweep(&args.eta1, &args.margin, args.overlap, args.kind)?;
            write_sweep(&rows, &args.out)?;
            writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display()).map_err(io)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg = SearchConfig { coarse_grid: args.grid, ..SearchConfig::default() };
            cfg.validate()?;
            let report = if args.mixed {
                verify_mixed(args.samples, args.seed, &cfg)?
            } else {
                verify_pure(args.samples, args.seed, args.kind, &cfg)?
            };
            out.write_all(report.render().as_bytes()).map_err(io)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::MixedBound(args) => {
            let minst = MixedInstance::new(DensityMatrix::load(&args.rho1)?, DensityMatrix::load(&args.rho2)?, args.eta1)?;
            let report = mixed_report(&minst, args.margin)?;
            let text = if args.json {
                json_line(&report)
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "fidelity: {}", report.fidelity);
                let _ = writeln!(s, "m_c: {}", report.m_c);
                let _ = writeln!(s, "m_c_prime: {}", report.m_c_prime);
                let _ = writeln!(s, "domain: {}", report.domain);
                let _ = writeln!(s, "upper_bound: {}", report.upper_bound);
                let _ = writeln!(s, "helstrom: {}", report.helstrom);
                let _ = writeln!(s, "inequality_gap: {}", report.inequality_gap);
                s
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
    }
}

/// Process entry point: parses `std::env::args`, returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
