mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use spectral_tails::bounds::{
    bennett, bernstein, chernoff_lower, chernoff_upper, cov_lower_t_limit, cov_rel_over,
    cov_rel_under, cov_sample_size, cov_sample_size_terms, cov_tail_lower, cov_tail_upper,
    cov_upper_t_limit, invert_bound, split_bernstein, subexp_bernstein, subsample_median_interval,
    BennettParams, BoundCurve, ChernoffParams, CovSpectrumParams, Inversion, SubexpParams,
    DEFAULT_C,
};
use spectral_tails::experiments::output::check_output_dir;
use spectral_tails::experiments::{
    run_covariance, run_oracle_suite, run_subsample, CovConfig, MatrixKind, PRule, SubsampleConfig,
};
use spectral_tails::linalg::TauMethod;
use spectral_tails::Error;

/// Eigenvalue tail bounds for sums of random self-adjoint matrices.
///
/// Exit codes: 0 ok, 2 usage or I/O error, 3 argument outside a bound's
/// stated range, 4 failed acceptance check under --strict.
///
/// Every subcommand accepts `--config FILE` with `key = value` lines (keys
/// are long flag names, `#` starts a comment); explicit flags win. The
/// worker count is capped by SPECTRAL_TAILS_THREADS.
#[derive(Parser, Debug)]
#[command(name = "spectral-tails", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a tail bound at one argument.
    Bound(BoundCmd),
    /// Smallest argument at which a bound drops to the target probability.
    Invert(InvertCmd),
    /// Number of samples that estimates the top eigenvalues of a covariance
    /// matrix to relative accuracy eps.
    Plan(PlanCmd),
    /// Run a Monte Carlo or enumeration experiment and write CSV/JSON files.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    /// P(λ_k ≥ (1+δ)μ) for PSD summands; needs n, k, mu, psi, delta > 0.
    ChernoffUpper,
    /// P(λ_k ≤ (1−δ)μ) for PSD summands; needs n, k, mu, psi, 0 ≤ delta < 1.
    ChernoffLower,
    /// Bennett bound on P(λ_k ≥ t); needs n, k, sigma2, psi, t ≥ 0.
    Bennett,
    /// Bernstein bound; same inputs as bennett.
    Bernstein,
    /// Two-regime Bernstein bound; same inputs as bennett.
    SplitBernstein,
    /// Subexponential Bernstein bound on P(λ_k ≥ mu + t); needs n, k, mu, sigma2, b, t.
    Subexp,
    /// Two-regime subexponential bound; same inputs as subexp.
    SubexpSplit,
    /// Median interval for σ_k of a column subsample; needs n, k, p, tau-k, tau-nk1.
    Subsample,
    /// P(λ̂_k ≥ λ_k + t) for a sample covariance; needs p, spectrum, k, nsamples, 0 ≤ t ≤ 4nλ_k.
    CovUpper,
    /// P(λ̂_k ≤ λ_k − t); needs p, spectrum, k, nsamples, 0 ≤ t ≤ 4nλ_1.
    CovLower,
    /// P(λ̂_k ≥ (1+ε)λ_k); needs p, spectrum, k, nsamples, 0 ≤ eps ≤ 4n.
    CovRelOver,
    /// P(λ̂_k ≤ (1−ε)λ_k); needs p, spectrum, k, nsamples, 0 < eps ≤ 1.
    CovRelUnder,
    /// The curve e^{−x}.
    ExpDecay,
    /// A constant curve at --value.
    Constant,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Bound family.
    #[arg(long, value_enum)]
    family: Family,
    /// Ambient dimension, n ≥ 1.
    #[arg(long)]
    n: Option<usize>,
    /// Eigenvalue index, 1 ≤ k ≤ n (or ≤ p for covariance families).
    #[arg(long)]
    k: Option<usize>,
    /// μ_k, the k-th eigenvalue of the mean, ≥ 0 (any finite value for subexp).
    #[arg(long)]
    mu: Option<f64>,
    /// Almost-sure bound Ψ > 0 on the compressed summands.
    #[arg(long)]
    psi: Option<f64>,
    /// Relative deviation δ.
    #[arg(long)]
    delta: Option<f64>,
    /// Variance proxy σ_k² ≥ 0.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Absolute deviation t ≥ 0.
    #[arg(long)]
    t: Option<f64>,
    /// Moment growth scale B > 0.
    #[arg(long)]
    b: Option<f64>,
    /// Covariance dimension (covariance families) or sampling probability
    /// in (0, 1) (subsample).
    #[arg(long)]
    p: Option<f64>,
    /// Covariance eigenvalues, comma separated, nonincreasing and > 0.
    #[arg(long, value_delimiter = ',')]
    spectrum: Option<Vec<f64>>,
    /// Number of covariance samples, ≥ 1.
    #[arg(long)]
    nsamples: Option<u64>,
    /// Relative deviation ε for cov-rel-over (0 ≤ ε ≤ 4n) and cov-rel-under (0 < ε ≤ 1).
    #[arg(long)]
    eps: Option<f64>,
    /// Absolute constant in the covariance bounds, > 0.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// τ_k coherence bound in (0, 1].
    #[arg(long)]
    tau_k: Option<f64>,
    /// τ_{n−k+1} coherence bound in (0, 1].
    #[arg(long)]
    tau_nk1: Option<f64>,
    /// Value of the constant curve.
    #[arg(long, default_value_t = 1.0)]
    value: f64,
    /// Clamp out-of-range arguments to the edge of the stated range, with a warning.
    #[arg(long)]
    clamp: bool,
    /// Read further flags from a `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundCmd {
    #[command(flatten)]
    args: BoundArgs,
}

#[derive(Args, Debug)]
struct InvertCmd {
    #[command(flatten)]
    args: BoundArgs,
    /// Target probability in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    target: f64,
}

#[derive(Args, Debug)]
struct PlanCmd {
    /// Covariance dimension p ≥ 1.
    #[arg(long)]
    p: usize,
    /// Covariance eigenvalues, comma separated, nonincreasing and > 0.
    #[arg(long, value_delimiter = ',', required = true)]
    spectrum: Vec<f64>,
    /// Number of top eigenvalues to control, 1 ≤ ell ≤ p.
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Relative accuracy ε in (0, 1].
    #[arg(long)]
    eps: f64,
    /// Total failure probability in (0, 1).
    #[arg(long)]
    fail: f64,
    /// Absolute constant in the covariance bounds, > 0.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Also print the closed-form requirement of each over/under term.
    #[arg(long)]
    breakdown: bool,
    /// Read further flags from a `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Existing directory for the CSV and JSON outputs.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Exit with status 4 if any acceptance flag is false.
    #[arg(long)]
    strict: bool,
    /// Read further flags from a `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Median singular values of Bernoulli column samples against their predicted intervals.
    Subsample {
        /// Rows n, 1 ≤ n ≤ r.
        #[arg(long)]
        n: usize,
        /// Columns r.
        #[arg(long)]
        r: usize,
        /// Matrix: dft-rows or random-orthonormal.
        #[arg(long, default_value = "dft-rows")]
        kind: MatrixKind,
        /// Column keep probability in (0, 1), or log-n-over-n for ln(n)/n.
        #[arg(long, default_value = "log-n-over-n")]
        p: PRule,
        /// Number of trials, ≥ 1.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coherence bound method: exact-subsets (C(n,k) ≤ 1e6) or greedy.
        #[arg(long, default_value = "greedy")]
        tau: TauMethod,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Relative eigenvalue errors of Gaussian sample covariances against their bounds.
    Covariance {
        /// Dimension p ≥ 1.
        #[arg(long)]
        p: usize,
        /// Eigenvalues, comma separated, nonincreasing and > 0.
        #[arg(long, value_delimiter = ',', required = true)]
        spectrum: Vec<f64>,
        /// Number of top eigenvalues checked, 1 ≤ ell ≤ p.
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Relative accuracy ε in (0, 1].
        #[arg(long)]
        eps: f64,
        /// Failure probability used to plan the sample count, in (0, 1).
        #[arg(long, default_value_t = 0.1)]
        fail: f64,
        /// Number of trials, ≥ 1.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Use this many samples per trial instead of the planned count.
        #[arg(long)]
        nsamples: Option<u64>,
        /// Use diag(spectrum) without a random rotation.
        #[arg(long)]
        no_rotate: bool,
        /// Absolute constant in the covariance bounds, > 0.
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact enumeration of small finite-support ensembles against every bound family.
    Oracle {
        /// Number of random instances, ≥ 1.
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Failure {
    Usage(String),
    Range(String),
    Strict(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Range(_) => 3,
            Failure::Strict(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Range(m) | Failure::Strict(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Range(_) | Error::SupportExplosion { .. } | Error::SubsetOverflow { .. } => {
                Failure::Range(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Formats `x` with 12 significant digits, dropping trailing zeros.
fn fmt12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!(
            "{:.*}",
            decimals,
            mant.parse::<f64>().unwrap() * 10f64.powi(exp)
        ))
    } else {
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn need<T: Copy>(value: Option<T>, flag: &str, family: Family) -> Result<T, Failure> {
    value.ok_or_else(|| {
        let name = family.to_possible_value().expect("no skipped variants");
        Failure::Usage(format!(
            "--{flag} is required for --family {}",
            name.get_name()
        ))
    })
}

fn chernoff_params(a: &BoundArgs) -> Result<ChernoffParams, Failure> {
    let psi = need(a.psi, "psi", a.family)?;
    Ok(ChernoffParams {
        n: need(a.n, "n", a.family)?,
        k: need(a.k, "k", a.family)?,
        mu_k: need(a.mu, "mu", a.family)?,
        psi_plus: psi,
        psi_minus: psi,
    })
}

fn bennett_params(a: &BoundArgs) -> Result<BennettParams, Failure> {
    Ok(BennettParams {
        n: need(a.n, "n", a.family)?,
        k: need(a.k, "k", a.family)?,
        sigma2_k: need(a.sigma2, "sigma2", a.family)?,
        psi_plus: need(a.psi, "psi", a.family)?,
    })
}

fn subexp_params(a: &BoundArgs) -> Result<SubexpParams, Failure> {
    Ok(SubexpParams {
        n: need(a.n, "n", a.family)?,
        k: need(a.k, "k", a.family)?,
        mu_k: a.mu.unwrap_or(0.0),
        sigma2_k: need(a.sigma2, "sigma2", a.family)?,
        b: need(a.b, "b", a.family)?,
    })
}

fn cov_params(a: &BoundArgs) -> Result<(CovSpectrumParams, usize), Failure> {
    let spectrum = a
        .spectrum
        .clone()
        .ok_or_else(|| Failure::Usage("--spectrum is required for covariance families".into()))?;
    let p = need(a.p, "p", a.family)?;
    if p != spectrum.len() as f64 {
        return Err(Failure::Usage(format!(
            "--p {p} does not match the {} spectrum entries",
            spectrum.len()
        )));
    }
    if !(a.c > 0.0 && a.c.is_finite()) {
        return Err(Failure::Usage(format!(
            "--c must be finite and > 0, got {}",
            a.c
        )));
    }
    let mut params = CovSpectrumParams::new(spectrum, need(a.nsamples, "nsamples", a.family)?)?;
    params.c = a.c;
    Ok((params, need(a.k, "k", a.family)?))
}

/// Evaluates `f(x)`; under `--clamp`, a range violation is retried at `limit`.
fn eval_clamped(
    clamp: bool,
    x: f64,
    limit: impl FnOnce() -> Result<f64, Error>,
    f: impl Fn(f64) -> Result<f64, Error>,
) -> Result<f64, Failure> {
    match f(x) {
        Err(Error::Range(msg)) if clamp => {
            let edge = limit()?;
            warn!("{msg}; clamping to {}", fmt12(edge));
            Ok(f(edge)?)
        }
        other => Ok(other?),
    }
}

fn cmd_bound(a: &BoundArgs) -> CmdResult {
    let fam = a.family;
    let value = match fam {
        Family::ChernoffUpper => {
            chernoff_upper(&chernoff_params(a)?, need(a.delta, "delta", fam)?)?
        }
        Family::ChernoffLower => {
            chernoff_lower(&chernoff_params(a)?, need(a.delta, "delta", fam)?)?
        }
        Family::Bennett => bennett(&bennett_params(a)?, need(a.t, "t", fam)?)?,
        Family::Bernstein => bernstein(&bennett_params(a)?, need(a.t, "t", fam)?)?,
        Family::SplitBernstein => split_bernstein(&bennett_params(a)?, need(a.t, "t", fam)?)?,
        Family::Subexp | Family::SubexpSplit => subexp_bernstein(
            &subexp_params(a)?,
            need(a.t, "t", fam)?,
            fam == Family::SubexpSplit,
        )?,
        Family::Subsample => {
            let iv = subsample_median_interval(
                need(a.n, "n", fam)?,
                need(a.k, "k", fam)?,
                need(a.p, "p", fam)?,
                need(a.tau_k, "tau-k", fam)?,
                need(a.tau_nk1, "tau-nk1", fam)?,
            )?;
            println!("{} {}", fmt12(iv.lo), fmt12(iv.hi));
            return Ok(());
        }
        Family::CovUpper => {
            let (q, k) = cov_params(a)?;
            eval_clamped(
                a.clamp,
                need(a.t, "t", fam)?,
                || cov_upper_t_limit(&q, k),
                |t| cov_tail_upper(&q, k, t),
            )?
        }
        Family::CovLower => {
            let (q, k) = cov_params(a)?;
            eval_clamped(
                a.clamp,
                need(a.t, "t", fam)?,
                || cov_lower_t_limit(&q, k),
                |t| cov_tail_lower(&q, k, t),
            )?
        }
        Family::CovRelOver => {
            let (q, k) = cov_params(a)?;
            let limit = 4.0 * q.n_samples as f64;
            eval_clamped(
                a.clamp,
                need(a.eps, "eps", fam)?,
                || Ok(limit),
                |e| cov_rel_over(&q, k, e),
            )?
        }
        Family::CovRelUnder => {
            let (q, k) = cov_params(a)?;
            eval_clamped(
                a.clamp,
                need(a.eps, "eps", fam)?,
                || Ok(1.0),
                |e| cov_rel_under(&q, k, e),
            )?
        }
        Family::ExpDecay => (-need(a.t, "t", fam)?).exp(),
        Family::Constant => a.value,
    };
    println!("{}", fmt12(value));
    Ok(())
}

fn curve(a: &BoundArgs) -> Result<BoundCurve, Failure> {
    Ok(match a.family {
        Family::ChernoffUpper => BoundCurve::chernoff_upper(chernoff_params(a)?)?,
        Family::ChernoffLower => BoundCurve::chernoff_lower(chernoff_params(a)?)?,
        Family::Bennett => BoundCurve::bennett(bennett_params(a)?)?,
        Family::Bernstein => BoundCurve::bernstein(bennett_params(a)?)?,
        Family::SplitBernstein => BoundCurve::split_bernstein(bennett_params(a)?)?,
        Family::Subexp => BoundCurve::subexp(subexp_params(a)?, false)?,
        Family::SubexpSplit => BoundCurve::subexp(subexp_params(a)?, true)?,
        Family::CovUpper => {
            let (q, k) = cov_params(a)?;
            BoundCurve::cov_upper(q, k)?
        }
        Family::CovLower => {
            let (q, k) = cov_params(a)?;
            BoundCurve::cov_lower(q, k)?
        }
        Family::CovRelOver => {
            let (q, k) = cov_params(a)?;
            BoundCurve::cov_rel_over(q, k)?
        }
        Family::CovRelUnder => {
            let (q, k) = cov_params(a)?;
            BoundCurve::cov_rel_under(q, k)?
        }
        Family::ExpDecay => BoundCurve::exp_decay(),
        Family::Constant => BoundCurve::constant(a.value),
        Family::Subsample => {
            return Err(Failure::Usage(
                "--family subsample is an interval, not an invertible curve".into(),
            ))
        }
    })
}

fn cmd_invert(cmd: &InvertCmd) -> CmdResult {
    if !(cmd.target > 0.0 && cmd.target < 1.0) {
        return Err(Failure::Usage(format!(
            "--target must lie in (0, 1), got {}",
            cmd.target
        )));
    }
    match invert_bound(&curve(&cmd.args)?, cmd.target)? {
        Inversion::Root(x) => println!("{}", fmt12(x)),
        Inversion::NoGuarantee => println!("no-guarantee"),
    }
    Ok(())
}

fn cmd_plan(cmd: &PlanCmd) -> CmdResult {
    if cmd.p != cmd.spectrum.len() {
        return Err(Failure::Usage(format!(
            "--p {} does not match the {} spectrum entries",
            cmd.p,
            cmd.spectrum.len()
        )));
    }
    if !(cmd.c > 0.0 && cmd.c.is_finite()) {
        return Err(Failure::Usage(format!(
            "--c must be finite and > 0, got {}",
            cmd.c
        )));
    }
    let mut params = CovSpectrumParams::new(cmd.spectrum.clone(), 1)?;
    params.c = cmd.c;
    let n = cov_sample_size(&params, cmd.ell, cmd.eps, cmd.fail)?;
    println!("{n}");
    if cmd.breakdown {
        println!("k over under");
        for term in cov_sample_size_terms(&params, cmd.ell, cmd.eps, cmd.fail)? {
            println!("{} {} {}", term.k, term.over, term.under);
        }
    }
    Ok(())
}

fn strict_check(strict: bool, pass: bool, what: &str) -> CmdResult {
    if strict && !pass {
        return Err(Failure::Strict(format!(
            "{what} failed an acceptance check"
        )));
    }
    Ok(())
}

fn log_written(paths: &spectral_tails::experiments::output::OutputPaths) {
    for p in [&paths.records, &paths.summary, &paths.sidecar] {
        info!("wrote {}", p.display());
    }
}

fn out_dir(output: &OutputArgs) -> Result<&Path, Failure> {
    check_output_dir(&output.out)?;
    Ok(&output.out)
}

fn cmd_experiment(cmd: &ExperimentCmd) -> CmdResult {
    match cmd {
        ExperimentCmd::Subsample {
            n,
            r,
            kind,
            p,
            trials,
            seed,
            tau,
            output,
        } => {
            let dir = out_dir(output)?;
            let config = SubsampleConfig {
                n: *n,
                r: *r,
                kind: *kind,
                p_rule: *p,
                trials: *trials,
                master_seed: *seed,
                tau_method: *tau,
            };
            let out = run_subsample(&config)?;
            log_written(&out.write(dir, &config)?);
            info!("subsample finished in {:.2}s", out.wall_seconds);
            println!("p: {}", fmt12(out.p));
            println!("k lo hi median contained");
            for row in &out.summary.rows {
                println!(
                    "{} {} {} {} {}",
                    row.k,
                    fmt12(row.lo),
                    fmt12(row.hi),
                    fmt12(row.empirical_median),
                    row.contained
                );
            }
            println!("contained: {}/{}", out.contained(), out.summary.rows.len());
            strict_check(output.strict, out.summary.all_pass(), "subsample")
        }
        ExperimentCmd::Covariance {
            p,
            spectrum,
            ell,
            eps,
            fail,
            trials,
            nsamples,
            no_rotate,
            c,
            seed,
            output,
        } => {
            let dir = out_dir(output)?;
            let config = CovConfig {
                p: *p,
                spectrum: spectrum.clone(),
                ell: *ell,
                eps: *eps,
                fail_prob: *fail,
                trials: *trials,
                n_override: *nsamples,
                master_seed: *seed,
                rotate: !no_rotate,
                c: *c,
            };
            let out = run_covariance(&config)?;
            log_written(&out.write(dir, &config)?);
            info!("covariance finished in {:.2}s", out.wall_seconds);
            println!("n: {}", out.n_samples);
            println!("k over_freq over_bound under_freq under_bound pass");
            for row in &out.summary.rows {
                println!(
                    "{} {} {} {} {} {}",
                    row.k,
                    fmt12(row.over_freq),
                    fmt12(row.over_bound),
                    fmt12(row.under_freq),
                    fmt12(row.under_bound),
                    row.over_pass && row.under_pass
                );
            }
            println!("all pass: {}", out.summary.all_pass());
            strict_check(output.strict, out.summary.all_pass(), "covariance")
        }
        ExperimentCmd::Oracle {
            instances,
            seed,
            output,
        } => {
            let dir = out_dir(output)?;
            let report = run_oracle_suite(*seed, *instances)?;
            log_written(&report.write(dir, *seed)?);
            info!("oracle finished in {:.2}s", report.wall_seconds);
            println!("family checks violations max_ratio");
            for t in &report.summary.rows {
                println!(
                    "{} {} {} {}",
                    t.family,
                    t.checks,
                    t.violations,
                    fmt12(t.max_ratio)
                );
            }
            println!("violations: {}", report.total_violations());
            strict_check(output.strict, report.total_violations() == 0, "oracle")
        }
    }
}

fn set_threads() -> CmdResult {
    let Ok(raw) = std::env::var("SPECTRAL_TAILS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "SPECTRAL_TAILS_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    set_threads()?;
    match &cli.command {
        Cmd::Bound(b) => cmd_bound(&b.args),
        Cmd::Invert(i) => cmd_invert(i),
        Cmd::Plan(p) => cmd_plan(p),
        Cmd::Experiment(e) => cmd_experiment(e),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args: Vec<String> = std::env::args().collect();
    let args = match config::merge_config(&Cli::command(), args) {
        Ok(a) => a,
        Err(config::ConfigError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(std::f64::consts::E / 4.0), "0.679570457115");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(2.0 * (-0.5f64).exp()), "1.21306131943");
        assert_eq!(fmt12(384.0), "384");
        assert_eq!(fmt12(1.5e-20), "1.5e-20");
        assert_eq!(fmt12(0.0), "0");
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
