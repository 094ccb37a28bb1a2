//! Command-line front end: build measures from JSON specs, run
//! certifications and simulations, emit JSON/CSV reports.
//!
//! Exit codes: 0 on certified-bounded or pure-report runs, 2 when a
//! violation is found, 1 on usage errors.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use funcineq::certify::{self, CertifySettings, LipschitzStatistic, TransferRule};
use funcineq::costs::{CostFunction, CostSpec};
use funcineq::families::{self, FamilySpec, TestFamily};
use funcineq::functionals::DiscreteInstance;
use funcineq::grid::GridFunction;
use funcineq::hardy::{self, Weight};
use funcineq::measures::{Measure1D, MeasureSpec, ProductMeasure};
use funcineq::report::Verdict;
use funcineq::transport::{self, DensityMember};
use funcineq::{REPORT_SCHEMA_VERSION, VERSION};

#[derive(Parser)]
#[command(name = "funcineq", version, about = "functional-inequality toolkit")]
struct Cli {
    /// Worker threads for family evaluation and Monte Carlo shards
    /// (FUNCINEQ_THREADS as fallback; defaults to the machine).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Supremize Ent/energy ratios over a test family.
    CertifyLsi(CertifyLsiArgs),
    /// Supremize Var/Dirichlet ratios over a test family.
    CertifyPoincare(CertifyPoincareArgs),
    /// Two-term inequality Ent <= A Var + B restricted-energy: (A, B) frontier.
    CertifyModified(CertifyModifiedArgs),
    /// Transportation inequality cost <= (C/4) Ent over density families.
    CertifyTalagrand(CertifyTalagrandArgs),
    /// Weighted Hardy criterion suprema for a measure and weight.
    Hardy(HardyArgs),
    /// Monte Carlo concentration tails vs the Herbst bounds.
    Concentration(ConcentrationArgs),
    /// Hopf-Lax infimal convolution of a CSV-sampled function.
    HopfLax(HopfLaxArgs),
    /// Exact constant-transfer arithmetic.
    Transfer(TransferArgs),
    /// Pointwise auxiliary-lemma slacks.
    Lemmas(LemmasArgs),
}

#[derive(Args)]
struct MeasureArg {
    /// Measure spec: JSON like {"family":"mu_alpha","alpha":1.5} or a bare
    /// family name combined with --alpha/--beta/--sigma/--b.
    #[arg(long)]
    measure: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
}

impl MeasureArg {
    fn build(&self) -> Result<(MeasureSpec, Measure1D), String> {
        let spec: MeasureSpec = if self.measure.trim_start().starts_with('{') {
            serde_json::from_str(&self.measure)
                .map_err(|e| format!("invalid measure spec: {e}"))?
        } else {
            match self.measure.as_str() {
                "mu_alpha" => MeasureSpec::MuAlpha {
                    alpha: self.alpha.ok_or("mu_alpha requires --alpha")?,
                },
                "mu_alpha_beta" => MeasureSpec::MuAlphaBeta {
                    alpha: self.alpha.ok_or("mu_alpha_beta requires --alpha")?,
                    beta: self.beta.ok_or("mu_alpha_beta requires --beta")?,
                    core: None,
                },
                "tau_alpha" => MeasureSpec::TauAlpha {
                    alpha: self.alpha.ok_or("tau_alpha requires --alpha")?,
                },
                "gamma_alpha_b" => MeasureSpec::GammaAlphaB {
                    alpha: self.alpha.ok_or("gamma_alpha_b requires --alpha")?,
                    b: self.b.ok_or("gamma_alpha_b requires --b")?,
                },
                "gaussian" => MeasureSpec::Gaussian {
                    sigma: self.sigma.ok_or("gaussian requires --sigma")?,
                },
                other => return Err(format!("unknown measure family: {other}")),
            }
        };
        let m = Measure1D::build(&spec).map_err(|e| e.to_string())?;
        Ok((spec, m))
    }
}

#[derive(Args)]
struct CertifyLsiArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// Cost spec JSON, e.g. {"family":"H","a":1,"alpha":1.5}; the name
    /// "gross" selects the plain |x|^2 energy.
    #[arg(long)]
    cost: String,
    /// Family name (exponentials|bumps|ramps|fourier|combined) or JSON spec.
    #[arg(long)]
    family: String,
    #[arg(long)]
    claimed: Option<f64>,
    #[arg(long, default_value_t = 2049)]
    grid_nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyPoincareArgs {
    #[command(flatten)]
    measure: MeasureArg,
    #[arg(long)]
    family: String,
    #[arg(long)]
    claimed: Option<f64>,
    #[arg(long, default_value_t = 2049)]
    grid_nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyModifiedArgs {
    #[command(flatten)]
    measure: MeasureArg,
    #[arg(long, default_value = "combined")]
    family: String,
    /// Comma-separated A sweep.
    #[arg(long, default_value = "10,20,34,50")]
    a_sweep: String,
    #[arg(long, default_value_t = 2049)]
    grid_nodes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyTalagrandArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// LSI constant C of the chain; the transport inequality is checked at
    /// threshold a C / 2 with constant C / 4.
    #[arg(long = "constant")]
    constant: f64,
    #[arg(long)]
    a: f64,
    /// Cost exponent alpha of the chain.
    #[arg(long = "cost-alpha")]
    cost_alpha: f64,
    /// Comma-separated exponential-tilt strengths.
    #[arg(long, default_value = "0.3,0.6,1.0")]
    tilts: String,
    /// Comma-separated translation shifts (full-line measures only).
    #[arg(long, default_value = "")]
    shifts: String,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HardyArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// Weight: "one", "alpha:<alpha>", or "alpha_beta:<alpha>:<beta>".
    #[arg(long)]
    weight: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConcentrationArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// Product dimension.
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 16)]
    lambda_steps: usize,
    /// Modified-LSI constant for the printed per-lambda bound (1D only).
    #[arg(long = "constant")]
    constant: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// CSV output (lambda, empirical, herbst, ci_lo, ci_hi).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HopfLaxArgs {
    /// Transport cost JSON, e.g. {"family":"L","a":1,"alpha":1.5}.
    #[arg(long)]
    cost: String,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Input CSV with header "x,f".
    #[arg(long)]
    input: PathBuf,
    /// Output CSV with header "x,q".
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransferArgs {
    /// tensorise | perturb | lsi_to_poincare | t_to_lsi
    #[arg(long)]
    rule: String,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long = "constant")]
    constant: Option<f64>,
    #[arg(long)]
    osc: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct LemmasArgs {
    #[arg(long, default_value_t = 100_001)]
    grid_points: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("FUNCINEQ_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(violated) => {
            if violated {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_family(arg: &str, m: &Measure1D) -> Result<(Option<FamilySpec>, TestFamily), String> {
    if arg.trim_start().starts_with('{') {
        let spec: FamilySpec =
            serde_json::from_str(arg).map_err(|e| format!("invalid family spec: {e}"))?;
        let fam = spec.build().map_err(|e| e.to_string())?;
        return Ok((Some(spec), fam));
    }
    let (lo, hi) = m.window();
    let safe_lambda = safe_exponential_lambda(m);
    let fam = match arg {
        "exponentials" => families::exponentials(0.1, safe_lambda, 40),
        "bumps" => families::bumps(lo * 0.5, hi * 0.5, 20, &[0.4, 0.8, 1.6], 2.0)
            .map_err(|e| e.to_string())?,
        "ramps" => families::ramps(lo * 0.5, hi * 0.5, 20, &[0.5, 1.0, 2.0], 0.5)
            .map_err(|e| e.to_string())?,
        "fourier" => families::fourier(40, 5, 1.2, 2.0, 20260810).map_err(|e| e.to_string())?,
        "combined" => families::combine(
            "combined",
            vec![
                families::exponentials(0.1, safe_lambda, 60),
                families::bumps(lo * 0.5, hi * 0.5, 20, &[0.4, 0.8, 1.6], 2.0)
                    .map_err(|e| e.to_string())?,
                families::ramps(lo * 0.5, hi * 0.5, 20, &[0.5, 1.0, 2.0], 0.5)
                    .map_err(|e| e.to_string())?,
                families::fourier(40, 5, 1.2, 2.0, 20260810).map_err(|e| e.to_string())?,
            ],
        ),
        other => return Err(format!("unknown family: {other}")),
    };
    Ok((None, fam))
}

/// Largest exponential-tilt slope whose squared mass still sits well inside
/// the truncated window.
fn safe_exponential_lambda(m: &Measure1D) -> f64 {
    let (_, hi) = m.window();
    match m.spec() {
        MeasureSpec::MuAlpha { alpha } if *alpha > 1.0 => {
            (alpha * (0.6 * hi).powf(alpha - 1.0)).min(3.0)
        }
        _ => 3.0f64.min(0.3 * hi),
    }
}

fn write_json(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), String> {
    let body = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, body + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn envelope<T: Serialize>(
    command: &str,
    config: serde_json::Value,
    report: T,
) -> serde_json::Value {
    json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "library_version": VERSION,
        "command": command,
        "config": config,
        "report": report,
    })
}

fn run(cmd: Command) -> Result<bool, String> {
    match cmd {
        Command::CertifyLsi(args) => {
            let (spec, m) = args.measure.build()?;
            let cost = if args.cost == "gross" {
                CostFunction::power(2.0, 1.0).map_err(|e| e.to_string())?
            } else {
                let cspec: CostSpec = serde_json::from_str(&args.cost)
                    .map_err(|e| format!("invalid cost spec: {e}"))?;
                cspec.build().map_err(|e| e.to_string())?
            };
            let (fspec, family) = parse_family(&args.family, &m)?;
            let settings = CertifySettings {
                grid_nodes: args.grid_nodes,
                claimed_constant: args.claimed,
                ..CertifySettings::default()
            };
            let mut report = certify::estimate_lsi_constant(&m, &cost, &family, &settings)
                .map_err(|e| e.to_string())?;
            report.family = fspec;
            if args.cost != "gross" {
                report.cost = serde_json::from_str(&args.cost).ok();
            }
            let violated = report.verdict == Verdict::Violated;
            let config = json!({
                "measure": spec, "cost": args.cost, "family": args.family,
                "claimed": args.claimed, "settings": settings,
            });
            write_json(&args.out, &envelope("certify-lsi", config, report))?;
            Ok(violated)
        }
        Command::CertifyPoincare(args) => {
            let (spec, m) = args.measure.build()?;
            let (fspec, family) = parse_family(&args.family, &m)?;
            let settings = CertifySettings {
                grid_nodes: args.grid_nodes,
                claimed_constant: args.claimed,
                ..CertifySettings::default()
            };
            let mut report = certify::estimate_poincare_constant(&m, &family, &settings)
                .map_err(|e| e.to_string())?;
            report.family = fspec;
            let violated = report.verdict == Verdict::Violated;
            let config = json!({
                "measure": spec, "family": args.family,
                "claimed": args.claimed, "settings": settings,
            });
            write_json(&args.out, &envelope("certify-poincare", config, report))?;
            Ok(violated)
        }
        Command::CertifyModified(args) => {
            let (spec, m) = args.measure.build()?;
            let (_, family) = parse_family(&args.family, &m)?;
            let a_sweep: Vec<f64> = args
                .a_sweep
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let settings = CertifySettings {
                grid_nodes: args.grid_nodes,
                ..CertifySettings::default()
            };
            let report = certify::verify_modified_lsi(&m, &family, &a_sweep, &settings)
                .map_err(|e| e.to_string())?;
            let violated = report.verdict == Verdict::Violated;
            let config = json!({
                "measure": spec, "family": args.family, "a_sweep": a_sweep,
                "settings": settings,
            });
            write_json(&args.out, &envelope("certify-modified", config, report))?;
            Ok(violated)
        }
        Command::CertifyTalagrand(args) => {
            let (spec, m) = args.measure.build()?;
            let mut densities: Vec<DensityMember> = Vec::new();
            for part in args.tilts.split(',').filter(|s| !s.trim().is_empty()) {
                let lambda: f64 = part.trim().parse().map_err(|e| format!("{e}"))?;
                densities.extend(DensityMember::tilts(&m, &[lambda]));
            }
            for part in args.shifts.split(',').filter(|s| !s.trim().is_empty()) {
                let c: f64 = part.trim().parse().map_err(|e| format!("{e}"))?;
                densities.extend(DensityMember::translations(&m, &[c]));
            }
            if densities.is_empty() {
                return Err("no densities requested".into());
            }
            let report = transport::verify_talagrand(
                &m,
                args.constant,
                args.a,
                args.cost_alpha,
                &densities,
                args.tolerance,
            )
            .map_err(|e| e.to_string())?;
            let violated = report.verdict == Verdict::Violated;
            let config = json!({
                "measure": spec, "constant": args.constant, "a": args.a,
                "cost_alpha": args.cost_alpha, "tilts": args.tilts,
                "shifts": args.shifts, "tolerance": args.tolerance,
            });
            write_json(&args.out, &envelope("certify-talagrand", config, report))?;
            Ok(violated)
        }
        Command::Hardy(args) => {
            let (spec, m) = args.measure.build()?;
            let weight = parse_weight(&args.weight)?;
            let report = hardy::barthe_roberto_constants(&m, &weight);
            let config = json!({ "measure": spec, "weight": args.weight });
            write_json(&args.out, &envelope("hardy", config, report))?;
            Ok(false)
        }
        Command::Concentration(args) => {
            let (spec, m) = args.measure.build()?;
            let alpha = match m.spec() {
                MeasureSpec::MuAlpha { alpha } => *alpha,
                _ => 2.0,
            };
            let pm = ProductMeasure::new(m, args.n).map_err(|e| e.to_string())?;
            let stat = if args.n == 1 {
                LipschitzStatistic::coordinate()
            } else {
                LipschitzStatistic::normalized_sum(args.n)
            };
            let lambdas: Vec<f64> = (1..=args.lambda_steps)
                .map(|i| args.lambda_max * i as f64 / args.lambda_steps as f64)
                .collect();
            let curve =
                certify::simulate_concentration(&pm, &stat, args.samples, args.seed, &lambdas)
                    .map_err(|e| e.to_string())?;
            let fitted = certify::fit_product_constant(alpha, &curve);
            let bound_at = |lam: f64| -> f64 {
                if args.n == 1 {
                    if let Some(c) = args.constant {
                        return certify::herbst_bound(c, args.a, alpha, 1.0, lam);
                    }
                }
                match fitted {
                    Some(k) => {
                        (2.0 * (-k * certify::product_min_exponent(alpha, lam)).exp()).min(1.0)
                    }
                    None => 1.0,
                }
            };
            let mut violated = false;
            let mut rows = Vec::new();
            for (i, &lam) in curve.lambdas.iter().enumerate() {
                let bound = bound_at(lam);
                if curve.wilson_lo[i] > bound {
                    violated = true;
                }
                rows.push((
                    lam,
                    curve.empirical[i],
                    bound,
                    curve.wilson_lo[i],
                    curve.wilson_hi[i],
                ));
            }
            write_tail_csv(args.out.as_deref(), &rows)?;
            eprintln!(
                "concentration: measure={spec:?} n={} samples={} fitted_K={fitted:?} mean={} \
                 violated={violated}",
                args.n, args.samples, curve.mean_used
            );
            Ok(violated)
        }
        Command::HopfLax(args) => {
            let cspec: CostSpec = serde_json::from_str(&args.cost)
                .map_err(|e| format!("invalid cost spec: {e}"))?;
            let cost = cspec.build().map_err(|e| e.to_string())?;
            let (xs, fs) = read_xy_csv(&args.input)?;
            let f = GridFunction::new(xs, fs).map_err(|e| e.to_string())?;
            let q = transport::hopf_lax(&f, &cost, args.t).map_err(|e| e.to_string())?;
            write_xy_csv(args.out.as_deref(), "x", "q", q.nodes(), q.values())?;
            Ok(false)
        }
        Command::Transfer(args) => {
            let rule = match args.rule.as_str() {
                "tensorise" => TransferRule::Tensorise {
                    c1: args.c1.ok_or("tensorise requires --c1")?,
                    c2: args.c2.ok_or("tensorise requires --c2")?,
                },
                "perturb" => TransferRule::Perturb {
                    c: args.constant.ok_or("perturb requires --constant")?,
                    osc: args.osc.ok_or("perturb requires --osc")?,
                },
                "lsi_to_poincare" => TransferRule::LsiToPoincare {
                    c: args.constant.ok_or("lsi_to_poincare requires --constant")?,
                },
                "t_to_lsi" => TransferRule::TToLsi {
                    a: args.a.ok_or("t_to_lsi requires --a")?,
                    alpha: args.alpha.ok_or("t_to_lsi requires --alpha")?,
                    c: args.constant.ok_or("t_to_lsi requires --constant")?,
                    lambda: args.lambda.ok_or("t_to_lsi requires --lambda")?,
                },
                other => return Err(format!("unknown rule: {other}")),
            };
            let outcome = certify::transfer_constants(rule).map_err(|e| e.to_string())?;
            match outcome.threshold {
                Some(a) => println!("a' = {a}\nC' = {}", outcome.constant),
                None => println!("C' = {}", outcome.constant),
            }
            Ok(false)
        }
        Command::Lemmas(args) => {
            use rand::Rng as _;
            use rand::SeedableRng as _;
            let grid: Vec<f64> = (0..args.grid_points)
                .map(|i| 100.0 * i as f64 / (args.grid_points - 1) as f64)
                .collect();
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(args.seed);
            let mut instances = Vec::with_capacity(args.trials);
            for _ in 0..args.trials {
                let weights: Vec<f64> = (0..8).map(|_| rng.random::<f64>() + 1e-3).collect();
                let values: Vec<f64> = (0..8).map(|_| 4.0 * rng.random::<f64>()).collect();
                instances
                    .push(DiscreteInstance::new(weights, values).map_err(|e| e.to_string())?);
            }
            let report = funcineq::functionals::verify_pointwise_lemmas(&grid, &instances);
            let violated = [
                report.quintic_min_slack,
                report.squared_deviation_min_slack,
                report.restricted_mass_min_slack,
                report.restricted_entropy_min_slack,
                report.xlnx_min_slack,
            ]
            .iter()
            .any(|s| *s < -1e-12);
            let config = json!({
                "grid_points": args.grid_points, "trials": args.trials, "seed": args.seed,
            });
            write_json(&args.out, &envelope("lemmas", config, report))?;
            Ok(violated)
        }
    }
}

fn parse_weight(arg: &str) -> Result<Weight, String> {
    if arg == "one" || arg == "1" {
        return Ok(Weight::constant_one());
    }
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        ["alpha", a] => {
            let alpha: f64 = a.parse().map_err(|e| format!("{e}"))?;
            Weight::saturating_alpha(alpha).map_err(|e| e.to_string())
        }
        ["alpha_beta", a, b] => {
            let alpha: f64 = a.parse().map_err(|e| format!("{e}"))?;
            let beta: f64 = b.parse().map_err(|e| format!("{e}"))?;
            Weight::saturating_alpha_beta(alpha, beta).map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "weight must be 'one', 'alpha:<a>' or 'alpha_beta:<a>:<b>', got {arg}"
        )),
    }
}

fn read_xy_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() < 2 {
            return Err("expected two columns (x, f)".into());
        }
        xs.push(rec[0].trim().parse::<f64>().map_err(|e| format!("{e}"))?);
        ys.push(rec[1].trim().parse::<f64>().map_err(|e| format!("{e}"))?);
    }
    Ok((xs, ys))
}

fn write_xy_csv(
    out: Option<&Path>,
    xname: &str,
    yname: &str,
    xs: &[f64],
    ys: &[f64],
) -> Result<(), String> {
    let write_to = |w: &mut dyn std::io::Write| -> Result<(), String> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([xname, yname]).map_err(|e| e.to_string())?;
        for (x, y) in xs.iter().zip(ys) {
            wtr.write_record([format!("{x}"), format!("{y}")])
                .map_err(|e| e.to_string())?;
        }
        wtr.flush().map_err(|e| e.to_string())
    };
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| e.to_string())?;
            write_to(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_to(&mut lock)?;
            lock.flush().map_err(|e| e.to_string())
        }
    }
}

fn write_tail_csv(out: Option<&Path>, rows: &[(f64, f64, f64, f64, f64)]) -> Result<(), String> {
    let write_to = |w: &mut dyn std::io::Write| -> Result<(), String> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["lambda", "empirical", "herbst", "ci_lo", "ci_hi"])
            .map_err(|e| e.to_string())?;
        for (l, e, h, lo, hi) in rows {
            wtr.write_record([
                format!("{l}"),
                format!("{e}"),
                format!("{h}"),
                format!("{lo}"),
                format!("{hi}"),
            ])
            .map_err(|e| e.to_string())?;
        }
        wtr.flush().map_err(|e| e.to_string())
    };
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| e.to_string())?;
            write_to(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_to(&mut lock)?;
            lock.flush().map_err(|e| e.to_string())
        }
    }
}
