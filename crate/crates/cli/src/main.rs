//! `pcm`: analyse pairwise comparison matrices from the command line.
//!
//! Exit codes: 0 success (or certified), 1 not certified, 2 input error,
//! 3 numerical degeneracy (tied weights, failed eigen-iteration).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcm_core::montecarlo::{run_experiment_with_threads, Axis};
use pcm_core::{
    certify_scalars, evm, full_certificate, gmm, histogram_csv, io, kendall_tau, koczkodaj_ki,
    manhattan_distance, md_bounds, ordinal_ranking, run_experiment, spearman_rho, Error,
    InconsistencyReport, McConfig, OrdinalRanking, PcMatrix, PriorityVector, ScaleBound,
    StabilityCertificate,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pcm", version, about = "Pairwise comparison matrix analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Priority vectors and ordinal rankings.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Power-iteration tolerance (L1 change between iterates).
        #[arg(long, default_value_t = pcm_core::prioritize::EVM_DEFAULT_TOL)]
        tol: f64,
    },
    /// Koczkodaj index, Saaty CI and λmax.
    Inconsistency {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Rank-stability certificate. Exits 0 when the full ranking is certified,
    /// 1 otherwise.
    Certify {
        #[arg(long, conflicts_with_all = ["ki", "d", "dstar"])]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Bounds-only mode: Koczkodaj index.
        #[arg(long, requires_all = ["d", "n"])]
        ki: Option<f64>,
        /// Bounds-only mode: smallest adjacent EVM weight gap.
        #[arg(long, requires = "ki")]
        d: Option<f64>,
        /// Bounds-only mode: gap between the two largest EVM weights
        /// (defaults to `d`).
        #[arg(long, requires = "ki")]
        dstar: Option<f64>,
        /// Bounds-only mode: number of objects.
        #[arg(long, requires = "ki")]
        n: Option<usize>,
    },
    /// Distance and rank correlation between the EVM and GMM results.
    Compare {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Disturbance sweep over random consistent matrices.
    Montecarlo(McArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file (CSV or JSON); `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 250)]
    bases: usize,
    #[arg(long, default_value_t = 1.0)]
    beta_min: f64,
    #[arg(long, default_value_t = 30.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 0.02)]
    beta_step: f64,
    #[arg(long, default_value_t = pcm_core::montecarlo::DEFAULT_SEED)]
    seed: u64,
    /// Clip disturbed comparisons to the fundamental scale [1/9, 9].
    #[arg(long)]
    clamp: bool,
    /// Output directory for result.json, trials.csv and histogram CSVs.
    #[arg(long, default_value = "montecarlo-out")]
    out: PathBuf,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Ev,
    Gm,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Degenerate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TiesPresent | Error::DegenerateGap(_) | Error::NoConvergence(_) => {
                Failure::Degenerate(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Rank { input, method, tol } => cmd_rank(&input, method, tol),
        Command::Inconsistency { input } => cmd_inconsistency(&input),
        Command::Certify {
            input,
            format,
            ki,
            d,
            dstar,
            n,
        } => cmd_certify(input.as_deref(), format, ki, d, dstar, n),
        Command::Compare { input } => cmd_compare(&input),
        Command::Montecarlo(args) => cmd_montecarlo(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Degenerate(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_matrix(path: &Path) -> Result<PcMatrix, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    Ok(io::parse_matrix(&text)?)
}

fn fmt_ranking(o: &OrdinalRanking) -> String {
    o.order()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" > ")
}

fn vector_json(w: &PriorityVector) -> serde_json::Value {
    json!({
        "weights": w.weights(),
        "lambda_max": w.lambda_max(),
        "ranking": ordinal_ranking(w).order(),
    })
}

fn cmd_rank(args: &InputArgs, method: MethodArg, tol: f64) -> CmdResult {
    let m = read_matrix(&args.input)?;
    let mut vectors = Vec::new();
    if method != MethodArg::Gm {
        vectors.push(("EV", evm(&m, tol, pcm_core::prioritize::EVM_DEFAULT_MAX_ITER)?));
    }
    if method != MethodArg::Ev {
        vectors.push(("GM", gmm(&m)));
    }
    match args.format {
        Format::Json => {
            let obj: serde_json::Map<_, _> = vectors
                .iter()
                .map(|(name, w)| (name.to_lowercase(), vector_json(w)))
                .collect();
            println!("{}", serde_json::Value::Object(obj));
        }
        Format::Csv => {
            let names: Vec<&str> = vectors.iter().map(|(n, _)| *n).collect();
            println!("object,{}", names.join(","));
            for i in 0..m.n() {
                let row: Vec<String> = vectors.iter().map(|(_, w)| format!("{:?}", w.weights()[i])).collect();
                println!("{i},{}", row.join(","));
            }
        }
        Format::Plain => {
            let names: Vec<String> = vectors.iter().map(|(n, _)| format!("{n:>12}")).collect();
            println!("object{}", names.join(""));
            for i in 0..m.n() {
                let row: Vec<String> = vectors
                    .iter()
                    .map(|(_, w)| format!("{:>12.6}", w.weights()[i]))
                    .collect();
                println!("{i:>6}{}", row.join(""));
            }
            for (name, w) in &vectors {
                if let Some(l) = w.lambda_max() {
                    println!("lambda_max = {l:.6}");
                }
                println!("ranking ({name}): {}", fmt_ranking(&ordinal_ranking(w)));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_inconsistency(args: &InputArgs) -> CmdResult {
    let m = read_matrix(&args.input)?;
    let r = InconsistencyReport::compute(&m)?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string(&r).expect("report serializes")),
        Format::Csv => {
            println!("n,ki,kappa,lambda_max,ci");
            println!("{},{:?},{:?},{:?},{:?}", r.n, r.ki, r.kappa, r.lambda_max, r.ci);
        }
        Format::Plain => {
            println!("n          = {}", r.n);
            println!("KI         = {:.6}", r.ki);
            println!("kappa      = {:.6}", r.kappa);
            println!("lambda_max = {:.6}", r.lambda_max);
            println!("CI         = {:.6}", r.ci);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_certificate(c: &StabilityCertificate, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(c).expect("certificate serializes")),
        Format::Csv => {
            println!("n,ki,kappa,K,md_lower,d,d_star,k,prop1_holds,prop2_holds,tau_lower,rho_lower");
            println!(
                "{},{:?},{:?},{:?},{:?},{:?},{:?},{},{},{},{:?},{:?}",
                c.n,
                c.ki,
                c.kappa,
                c.distance_budget,
                c.md_lower,
                c.d,
                c.d_star,
                c.max_swaps,
                c.prop1_holds,
                c.prop2_holds,
                c.tau_lower,
                c.rho_lower
            );
        }
        Format::Plain => {
            println!("n           = {}", c.n);
            println!("KI          = {:.6}", c.ki);
            println!("kappa       = {:.6}", c.kappa);
            println!("K           = {:.6}  (MD upper bound 1/kappa^2 - 1)", c.distance_budget);
            println!("MD lower    = {:.6}", c.md_lower);
            println!("d           = {:.6}", c.d);
            println!("d*          = {:.6}", c.d_star);
            println!("k           = {}", c.max_swaps);
            println!("full ranking certified : {}", c.prop1_holds);
            println!("best object certified  : {}", c.prop2_holds);
            println!("tau >= {:.4}", c.tau_lower);
            println!("rho >= {:.4}", c.rho_lower);
        }
    }
}

fn cmd_certify(
    input: Option<&Path>,
    format: Format,
    ki: Option<f64>,
    d: Option<f64>,
    dstar: Option<f64>,
    n: Option<usize>,
) -> CmdResult {
    let cert = match (input, ki, d, n) {
        (Some(path), ..) => full_certificate(&read_matrix(path)?)?,
        (None, Some(ki), Some(d), Some(n)) => certify_scalars(n, ki, d, dstar.unwrap_or(d))?,
        _ => {
            return Err(Failure::Input(
                "certify needs --input PATH or all of --ki, --d, --n".into(),
            ))
        }
    };
    print_certificate(&cert, format);
    Ok(if cert.prop1_holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_compare(args: &InputArgs) -> CmdResult {
    let m = read_matrix(&args.input)?;
    let ev = pcm_core::evm_default(&m)?;
    let gm = gmm(&m);
    let (o_ev, o_gm) = (ordinal_ranking(&ev), ordinal_ranking(&gm));
    let md = manhattan_distance(&ev, &gm)?;
    let tau = kendall_tau(&o_ev, &o_gm)?;
    let rho = spearman_rho(&o_ev, &o_gm)?;
    let ki = koczkodaj_ki(&m);
    let (lo, hi) = md_bounds(ki)?;
    match args.format {
        Format::Json => println!(
            "{}",
            json!({
                "md": md, "tau": tau, "rho": rho, "ki": ki,
                "md_lower": lo, "md_upper": hi,
                "ranking_ev": o_ev.order(), "ranking_gm": o_gm.order(),
            })
        ),
        Format::Csv => {
            println!("md,tau,rho,ki,md_lower,md_upper");
            println!("{md:?},{tau:?},{rho:?},{ki:?},{lo:?},{hi:?}");
        }
        Format::Plain => {
            println!("ranking (EV): {}", fmt_ranking(&o_ev));
            println!("ranking (GM): {}", fmt_ranking(&o_gm));
            println!("MD  = {md:.3e}");
            println!("tau = {tau:.4}");
            println!("rho = {rho:.4}");
            println!("KI  = {ki:.6}");
            println!("MD bounds: [{lo:.6}, {hi:.6}]");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_montecarlo(a: &McArgs) -> CmdResult {
    let cfg = McConfig {
        n: a.n,
        base_count: a.bases,
        beta_start: a.beta_min,
        beta_step: a.beta_step,
        beta_end: a.beta_max,
        master_seed: a.seed,
        clamp: a.clamp.then(ScaleBound::fundamental),
        ..McConfig::standard(a.n)
    };
    cfg.validate().map_err(|e| Failure::Input(e.to_string()))?;
    let r = if a.threads == 0 {
        run_experiment(&cfg)?
    } else {
        run_experiment_with_threads(&cfg, a.threads)?
    };
    let write = |name: &str, body: &str| {
        let p = a.out.join(name);
        fs::write(&p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
    };
    fs::create_dir_all(&a.out).map_err(|e| Failure::Input(format!("{}: {e}", a.out.display())))?;
    write("result.json", &r.to_json())?;
    write("trials.csv", &r.trials_csv())?;
    write("histogram_ki.csv", &histogram_csv(&r, Axis::Ki))?;
    write("histogram_ci.csv", &histogram_csv(&r, Axis::Ci))?;
    match a.format {
        Format::Json => println!(
            "{}",
            json!({
                "total_trials": r.total_trials,
                "trials_meeting_condition": r.trials_meeting_condition,
                "fraction_meeting": r.fraction_meeting,
                "tied_trial_count": r.tied_trial_count,
                "failed_trial_count": r.failed_trial_count,
                "soundness": r.soundness,
            })
        ),
        _ => {
            println!(
                "{} of {} trials meet the full-ranking condition ({:.3}%)",
                r.trials_meeting_condition,
                r.total_trials,
                100.0 * r.fraction_meeting
            );
            if r.tied_trial_count + r.failed_trial_count > 0 {
                println!(
                    "{} tied and {} failed trials excluded",
                    r.tied_trial_count, r.failed_trial_count
                );
            }
            if !r.soundness.is_clean() {
                println!("certificate counterexamples: {:?}", r.soundness);
            }
            println!("wrote {}", a.out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
