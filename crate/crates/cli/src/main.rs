use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use popcert_core::dp::{estimate_graph, to_dot, tpwidp, widp};
use popcert_core::pipeline::{
    analyze, check_polytime, empirical_validate, verify, AnalysisConfig, AnalysisMode, Certificate,
    PolytimeOutcome, SortedSignatureInfo, Verdict,
};
use popcert_core::synth::{solve, write_solver_output, Backend, Cnf, FilterSpace};
use popcert_core::trs::{parse_trs, DEFAULT_FUEL};

#[derive(Parser)]
#[command(
    name = "popcert",
    version,
    about = "Polynomial runtime certificates for term rewrite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a TRS and print a certificate.
    Analyze(AnalyzeArgs),
    /// Solve a DIMACS CNF with the built-in solver.
    Sat { cnf: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    Dp,
    Dg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Identity,
    Restricted,
    Full,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "dg")]
    mode: ModeArg,
    /// Use type-preserving dependency pairs.
    #[arg(long)]
    tpwidp: bool,
    #[arg(long, value_enum, default_value = "restricted")]
    filters: FilterArg,
    /// `internal` or `ext:<program> [args..]`.
    #[arg(long, env = "POPCERT_SOLVER", default_value = "internal")]
    solver: String,
    #[arg(long, default_value_t = 60_000)]
    timeout_ms: u64,
    #[arg(long, default_value_t = 5_000)]
    path_timeout_ms: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    check_polytime: bool,
    /// Sample runtime complexity up to this start-term size.
    #[arg(long, value_name = "N")]
    empirical: Option<usize>,
    #[arg(long, value_name = "FILE")]
    cert_out: Option<PathBuf>,
    /// Replay an existing certificate instead of searching.
    #[arg(long, value_name = "CERT")]
    recheck: Option<PathBuf>,
    /// Write the estimated dependency graph in DOT format.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
}

fn run_analyze(args: AnalyzeArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let trs = parse_trs(&text).with_context(|| format!("parsing {}", args.file.display()))?;

    if let Some(path) = &args.dot {
        let problem = if args.tpwidp {
            tpwidp(&trs)
        } else {
            widp(&trs)
        };
        let labels: Vec<String> = (0..problem.pairs.len())
            .map(|i| problem.pair_display(i))
            .collect();
        fs::write(path, to_dot(&estimate_graph(&problem, &trs), Some(&labels)))
            .with_context(|| format!("writing {}", path.display()))?;
    }

    if let Some(path) = &args.recheck {
        let cert_text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cert = Certificate::parse(&cert_text)?;
        return Ok(match verify(&cert, &trs) {
            Ok(()) => {
                println!("recheck: ok ({})", cert.verdict);
                0
            }
            Err(e) => {
                println!("recheck: failed: {e}");
                1
            }
        });
    }

    let config = AnalysisConfig {
        mode: match args.mode {
            ModeArg::Direct => AnalysisMode::Direct,
            ModeArg::Dp => AnalysisMode::Dp,
            ModeArg::Dg => AnalysisMode::Dg,
        },
        tpwidp: args.tpwidp,
        filters: match args.filters {
            FilterArg::Identity => FilterSpace::Identity,
            FilterArg::Restricted => FilterSpace::Restricted,
            FilterArg::Full => FilterSpace::Full,
        },
        backend: Backend::parse(&args.solver),
        timeout: Duration::from_millis(args.timeout_ms),
        path_timeout: Duration::from_millis(args.path_timeout_ms),
        workers: args.workers.unwrap_or(AnalysisConfig::default().workers),
    };
    let mut cert = analyze(&trs, &config);

    if args.check_polytime {
        match check_polytime(&trs, &SortedSignatureInfo::from_trs(&trs), &cert) {
            PolytimeOutcome::Claim => cert.verdict = Verdict::PolytimeComputable,
            PolytimeOutcome::NotApplicable(reasons) => cert
                .diagnostics
                .extend(reasons.iter().map(|r| format!("polytime: {r}"))),
        }
    }
    if let Some(n) = args.empirical {
        cert.empirical = Some(empirical_validate(&trs, n, DEFAULT_FUEL)?);
    }

    let out = cert.to_text();
    if let Some(path) = &args.cert_out {
        fs::write(path, &out).with_context(|| format!("writing {}", path.display()))?;
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(cert.verdict.exit_code() as u8)
}

fn run_sat(path: PathBuf) -> Result<u8> {
    let file = fs::File::open(&path).with_context(|| format!("reading {}", path.display()))?;
    let cnf = Cnf::from_dimacs(io::BufReader::new(file))?;
    let model = solve(&cnf, &Backend::Internal, None)?;
    let mut stdout = io::stdout().lock();
    write_solver_output(model.as_ref(), &mut stdout)?;
    // competition convention
    Ok(if model.is_some() { 10 } else { 20 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Sat { cnf } => run_sat(cnf),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
