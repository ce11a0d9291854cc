//! Subcommand implementations. Each returns the records to print plus a
//! success flag; the binary only parses flags and writes.

use std::path::PathBuf;

use chaosdet_core::malliavin::{ReportOptions, DEFAULT_TOL};
use chaosdet_core::verify::{run_case, Case, CheckResult, Comparison};
use chaosdet_core::{ChaosPair, Guard, MalliavinReport, SymTensor};
use clap::Args;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::format::{read_tensor, TensorFile};
use crate::output::{base_record, num, quantity, Format, Record};
use crate::parallel::{default_workers, estimate_edet, ordered_map};

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Threads for Monte Carlo and suites; defaults to available cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Lift the exact-route limits (dim <= 5, orders <= 4).
    #[arg(long = "unsafe")]
    pub unsafe_guard: bool,
}

impl Common {
    pub fn guard(&self) -> Guard {
        if self.unsafe_guard {
            Guard::UNBOUNDED
        } else {
            Guard::DEFAULT
        }
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers).max(1)
    }
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, alias = "n", short = 'k')]
    pub order: usize,
    #[command(flatten)]
    pub common: Common,
}

/// A pair read from tensor files, or drawn at random from
/// `(dim, n, m, seed)` when no files are given.
#[derive(Args, Clone, Debug, Serialize)]
pub struct PairArgs {
    #[arg(long, requires = "g")]
    pub f: Option<PathBuf>,
    #[arg(long, requires = "f")]
    pub g: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Monte Carlo samples; 0 skips the Monte Carlo route.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    /// Relative tolerance of the proportionality test.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct VerifyArgs {
    /// Restrict the grid to one dimension (default: 2 and 3).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Restrict the first order (default: 1 to 4).
    #[arg(long)]
    pub n: Option<usize>,
    /// Restrict the second order (default: 1 to 4).
    #[arg(long)]
    pub m: Option<usize>,
    /// Seeds per grid point, starting at --seed.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[command(flatten)]
    pub common: Common,
}

pub struct Outcome {
    pub records: Vec<Record>,
    pub success: bool,
}

pub fn gen(args: &GenArgs) -> Result<String> {
    let t = SymTensor::random_unit(args.common.seed, args.dim, args.order)?;
    Ok(TensorFile::from_tensor(&t).to_json())
}

pub fn load_pair(args: &PairArgs) -> Result<ChaosPair<f64>> {
    match (&args.f, &args.g) {
        (Some(f), Some(g)) => Ok(ChaosPair::new(read_tensor(f)?, read_tensor(g)?)?),
        _ => {
            if args.dim == 0 || args.n == 0 || args.m == 0 {
                return Err(Error::Usage("--dim, --n and --m must be at least 1".into()));
            }
            Ok(Case::new(args.dim, args.n, args.m, args.common.seed).pair())
        }
    }
}

mod anchor {
    pub const DET_C: &str = "det C = E[F^2] E[G^2] - E[FG]^2";
    pub const T_K: &str = "T_k = c_k sum_{i<l} ||sym(s_i f (x)_k s_l g - s_l f (x)_k s_i g)||^2, c_k = k!^2 C(n-1,k)^2 C(m-1,k)^2 (n+m-2-2k)!";
    pub const R: &str = "R = sum_{k>=1} T_k";
    pub const T0: &str = "T_0 = mn m! n! sum_r C(n-1,r) C(m-1,r) (||f (x)_r g||^2 - ||f (x)_{r+1} g||^2)";
    pub const EDET_CLOSED: &str = "E det Lambda = sum_k T_k";
    pub const EDET_REGROUPED: &str = "E det Lambda = T_0 + R";
    pub const EDET_ORACLE: &str = "E[AB] - E[Q^2] with A = ||DF||^2, B = ||DG||^2, Q = <DF,DG> expanded by chaos products";
    pub const SCALED_DET_C: &str = "m^2 det C";
    pub const CORRECTION: &str = "(m m!)^2 sum_{1<=r<=(m-1)/2} (C(m-1,r)^2 - C(m-1,r-1)^2)(||f (x)_r g||^2 - ||f (x)_{m-r} g||^2)";
    pub const REMAINDER: &str = "R_m = sum_{k>=1} T_k at n = m";
    pub const MC: &str = "sample mean of det Lambda = 1/2 sum_{i,l} (S_if S_lg - S_lf S_ig)^2 at Gaussian draws";
    pub const VERDICT: &str = "n = m <= 4: joint density iff det C != 0";
    pub const WARNING: &str = "exact routes limited to dim <= 5, orders <= 4";
}

pub fn check_anchor(check_id: &str) -> &'static str {
    match check_id {
        "contraction_duality" => "<f1 (x)_{n-r} f3, f2 (x)_{m-r} f4> = <f1 (x)_r f2, f3 (x)_r f4>",
        "symmetrized_inner" => "<f1 ~ f2, f3 ~ f4> = m!n!/(m+n)! sum_r C(n,r) C(m,r) <f1 (x)_r f3, f4 (x)_r f2>",
        "slice_contraction" => "f (x)_{r+1} g = 1/(nm) sum_i s_i f (x)_r s_i g",
        "sum_of_squares" => "||DF||^2 ||DG||^2 - <DF,DG>^2 = 1/2 sum_{i,l} (S_if S_lg - S_lf S_ig)^2",
        "contraction_norm_sum" => "sum_r C(n-1,r) C(m-1,r) (||f (x)_r g||^2 - ||f (x)_{r+1} g||^2) >= 0",
        "terms_nonnegative" => "T_k >= 0",
        "t0_forms" => anchor::T0,
        "edet_regrouping" => "sum_k T_k = T_0 + R",
        "edet_oracle" => "T_0 + R = E[AB] - E[Q^2]",
        "edet_exact" => "sum_k T_k = T_0 + R = E[AB] - E[Q^2] in exact arithmetic",
        "same_chaos" => "sum_k T_k = m^2 det C + correction + R_m",
        "last_term" => "T_{m-1} = m^2 m!^2 (||f (x)_{m-1} g||^2 - <f (x)_1 g, g (x)_1 f>)",
        "order_two_remainder" => "R_2 = 32 (||f (x)_1 g||^2 - ||f ~_1 g||^2)",
        "order_two_oracle" => "E det Lambda = 4 det C + 32 (||f (x)_1 g||^2 - ||f ~_1 g||^2)",
        "mixed_edet" => "(e_1^n, e_1^m): E det Lambda = 0",
        "mixed_covariance" => "(e_1^n, e_1^m), n != m: det C = n! m!",
        "density_dichotomy" => anchor::VERDICT,
        _ => "",
    }
}

pub fn report(args: &PairArgs) -> Result<Outcome> {
    let pair = load_pair(args)?;
    let opts = ReportOptions { guard: args.common.guard(), tol: args.tol };
    let mc = if args.trials > 0 { Some(estimate_edet(&pair, args.trials, args.common.seed, args.common.workers())?) } else { None };
    let rep = MalliavinReport::compute(&pair, &opts, mc);
    let base = base_record("report", args.common.seed, args);
    let mut out = vec![quantity(&base, "detC", num(rep.det_c), anchor::DET_C)];
    if let Some(ex) = &rep.exact {
        for (k, t) in ex.t_terms.iter().enumerate() {
            out.push(quantity(&base, &format!("T[{k}]"), num(*t), anchor::T_K));
        }
        out.push(quantity(&base, "R", num(ex.r_term), anchor::R));
        out.push(quantity(&base, "T0_contraction", num(ex.t0_contraction), anchor::T0));
        out.push(quantity(&base, "edet_closed", num(ex.edet_closed), anchor::EDET_CLOSED));
        out.push(quantity(&base, "edet_regrouped", num(ex.edet_regrouped), anchor::EDET_REGROUPED));
        out.push(quantity(&base, "edet_oracle", num(ex.edet_oracle), anchor::EDET_ORACLE));
        if let Some(sc) = &ex.same_chaos {
            out.push(quantity(&base, "same_chaos_scaled_detC", num(sc.scaled_det_c), anchor::SCALED_DET_C));
            out.push(quantity(&base, "same_chaos_correction", num(sc.correction), anchor::CORRECTION));
            out.push(quantity(&base, "same_chaos_remainder", num(sc.remainder), anchor::REMAINDER));
        }
    }
    if let Some(mc) = &rep.edet_mc {
        push_mc(&mut out, &base, mc);
    }
    if let Some(v) = rep.density_verdict {
        out.push(quantity(&base, "verdict", v.as_str().into(), anchor::VERDICT));
    }
    for w in &rep.warnings {
        out.push(quantity(&base, "warning", w.clone().into(), anchor::WARNING));
    }
    Ok(Outcome { records: out, success: true })
}

fn push_mc(out: &mut Vec<Record>, base: &Record, mc: &chaosdet_core::McEstimate) {
    out.push(quantity(base, "edet_mc_mean", num(mc.mean), anchor::MC));
    out.push(quantity(base, "edet_mc_stderr", num(mc.stderr), anchor::MC));
    out.push(quantity(base, "edet_mc_ci95_lo", num(mc.ci95.0), anchor::MC));
    out.push(quantity(base, "edet_mc_ci95_hi", num(mc.ci95.1), anchor::MC));
    out.push(quantity(base, "edet_mc_samples", Value::from(mc.n_samples), anchor::MC));
}

pub fn mc(args: &PairArgs) -> Result<Outcome> {
    if args.trials < 2 {
        return Err(Error::Usage("mc needs --trials of at least 2".into()));
    }
    let pair = load_pair(args)?;
    let est = estimate_edet(&pair, args.trials, args.common.seed, args.common.workers())?;
    let base = base_record("mc", args.common.seed, args);
    let mut out = Vec::new();
    push_mc(&mut out, &base, &est);
    Ok(Outcome { records: out, success: true })
}

pub fn density(args: &PairArgs) -> Result<Outcome> {
    let pair = load_pair(args)?;
    let verdict = pair.density_verdict(args.tol)?;
    let base = base_record("density", args.common.seed, args);
    let out = vec![
        quantity(&base, "detC", num(pair.det_c()), anchor::DET_C),
        quantity(&base, "edet_closed", num(pair.edet_closed()), anchor::EDET_CLOSED),
        quantity(&base, "verdict", verdict.as_str().into(), anchor::VERDICT),
    ];
    Ok(Outcome { records: out, success: true })
}

pub fn verify_cases(args: &VerifyArgs) -> Result<Vec<Case>> {
    let dims = args.dim.map_or_else(|| vec![2, 3], |d| vec![d]);
    let ns = args.n.map_or_else(|| (1..=4).collect(), |n| vec![n]);
    let ms = args.m.map_or_else(|| (1..=4).collect(), |m| vec![m]);
    let guard = args.common.guard();
    let mut cases = Vec::new();
    for &d in &dims {
        for &n in &ns {
            for &m in &ms {
                if d == 0 || n == 0 || m == 0 {
                    return Err(Error::Usage("--dim, --n and --m must be at least 1".into()));
                }
                if !guard.admits(d, n, m) {
                    return Err(chaosdet_core::Error::GuardExceeded {
                        dim: d,
                        n,
                        m,
                        max_dim: guard.max_dim,
                        max_order: guard.max_order,
                    }
                    .into());
                }
                for s in 0..args.seeds {
                    cases.push(Case::new(d, n, m, args.common.seed + s));
                }
            }
        }
    }
    Ok(cases)
}

pub fn check_record(base: &Record, r: &CheckResult) -> Record {
    let mut rec = Record::new();
    rec.insert("check_id".into(), r.check_id.into());
    rec.insert("anchor".into(), check_anchor(r.check_id).into());
    rec.insert("dim".into(), r.case.dim.into());
    rec.insert("n".into(), r.case.n.into());
    rec.insert("m".into(), r.case.m.into());
    rec.insert("inputs_seed".into(), r.case.seed.into());
    rec.insert("lhs".into(), num(r.lhs));
    rec.insert("rhs".into(), num(r.rhs));
    rec.insert("abs_err".into(), num(r.abs_err));
    rec.insert("rel_err".into(), num(r.rel_err));
    rec.insert("tol".into(), num(r.tol));
    let cmp = match r.comparison {
        Comparison::Relative => "relative",
        Comparison::Absolute => "absolute",
        Comparison::AtLeast => "at_least",
        Comparison::Exact => "exact",
    };
    rec.insert("comparison".into(), cmp.into());
    rec.insert("passed".into(), r.passed.into());
    rec.insert("note".into(), r.note.clone().map_or(Value::Null, Value::from));
    rec.extend(base.clone());
    rec
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let cases = verify_cases(args)?;
    let results: Vec<CheckResult> = ordered_map(&cases, args.common.workers(), |c| run_case(*c)).into_iter().flatten().collect();
    let base = base_record("verify", args.common.seed, args);
    let success = results.iter().all(|r| r.passed);
    Ok(Outcome { records: results.iter().map(|r| check_record(&base, r)).collect(), success })
}
