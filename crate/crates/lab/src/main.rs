use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bicombing_core::Exponent;
use bicombing_lab::plot::plot_csv;
use bicombing_lab::{apply_overrides, generate, run, GenOptions, InstanceFile, Kind, LabError, LabResult, Pipeline, Report};
use clap::{Parser, Subcommand};

const THREADS_VAR: &str = "BICOMBING_LAB_THREADS";

#[derive(Parser)]
#[command(name = "bicombing-lab", version, about = "Convex hulls, extremal points and their checks on bicombed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Instance file (report file for export-plot).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,
    /// Output path; reports go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the net resolution.
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    rng_seed: Option<u64>,
    #[arg(long, global = true)]
    max_rounds: Option<usize>,
    /// Suppress status lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance file.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        leaves: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        /// Norm exponent for lp_ball, a number >= 1 or `inf`.
        #[arg(long, value_parser = parse_exponent)]
        p: Option<Exponent>,
        #[arg(long)]
        side: Option<f64>,
    },
    CheckAxioms,
    Hull,
    Extremal,
    VerifyKm,
    PaperChecks,
    /// Project a report's point sets to `x,y,label` rows.
    ExportPlot {
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Exponent::INFINITY);
    }
    s.parse::<f64>().map(Exponent::Finite).map_err(|e| format!("expected a number or `inf`: {e}"))
}

fn configure_threads() -> LabResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| LabError::Usage(format!("{THREADS_VAR} must be a non-negative integer, got `{raw}`")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| LabError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn write_output(out: Option<&Path>, text: &str) -> LabResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| LabError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| LabError::io("<stdout>", e)),
    }
}

fn execute(cli: Cli) -> LabResult<bool> {
    configure_threads()?;
    let pipeline = match cli.command {
        Command::Gen { kind, step, leaves, n, dim, p, side } => {
            let opts = GenOptions { step: step.or(cli.eps), leaves, n, dim, p, side, rng_seed: cli.rng_seed };
            let mut inst = generate(kind, &opts)?;
            apply_overrides(&mut inst, None, None, cli.max_rounds)?;
            let path = cli.out.unwrap_or_else(|| {
                let name = serde_json::to_value(kind).expect("kind serializes");
                PathBuf::from(format!("{}.json", name.as_str().expect("kind is a string")))
            });
            inst.save(&path)?;
            if !cli.quiet {
                println!("{}", path.display());
            }
            return Ok(true);
        }
        Command::ExportPlot { report } => {
            let path = report
                .or(cli.instance)
                .ok_or_else(|| LabError::Usage("export-plot needs --report PATH".into()))?;
            let text = std::fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
            let report = Report::parse(&text).map_err(|message| LabError::Input { path, message })?;
            write_output(cli.out.as_deref(), &plot_csv(&report)?)?;
            return Ok(true);
        }
        Command::CheckAxioms => Pipeline::CheckAxioms,
        Command::Hull => Pipeline::Hull,
        Command::Extremal => Pipeline::Extremal,
        Command::VerifyKm => Pipeline::VerifyKm,
        Command::PaperChecks => Pipeline::PaperChecks,
    };
    let path = cli
        .instance
        .ok_or_else(|| LabError::Usage("this command needs --instance PATH".into()))?;
    let mut inst = InstanceFile::load(&path)?;
    apply_overrides(&mut inst, cli.eps, cli.rng_seed, cli.max_rounds)?;
    let report = run(pipeline, &inst)?;
    write_output(cli.out.as_deref(), &report.to_json())?;
    if !cli.quiet {
        let verdict = if report.pass { "pass" } else { "FAIL" };
        eprintln!("{}: {verdict}", serde_json::to_value(pipeline).expect("name").as_str().unwrap_or("run"));
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
