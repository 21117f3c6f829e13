use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use varlp::checks::Ctx;
use varlp::config::ExperimentConfig;
use varlp::fixtures::Fixtures;
use varlp::report::{emit_report, Report};
use varlp::{adhoc, suites};

#[derive(Parser)]
#[command(name = "varlp", version, about = "Verification harness for weighted variable-exponent Bergman estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite and write JSON and CSV reports.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Refine grid and family once before running.
        #[arg(long)]
        refine: bool,
    },
    /// ‖f‖_{p(·),w} for the configured exponent and weight.
    Norm {
        /// const:c, power:β or tent:x,y,r
        #[arg(long)]
        func: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// A weight-class constant for the configured weight, exponent and family.
    Constant {
        /// bekolle, muckenhoupt, bplus, bplusplus, b1 or classical
        #[arg(long)]
        class: String,
        /// Exponent of the classical constant.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// ‖Tf‖/‖f‖ in L^{p(·)}(w) for one operator.
    Op {
        /// maximal, regularize, bergman or bergman-positive
        #[arg(long)]
        op: String,
        #[arg(long)]
        func: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List the suites and the claims each one checks.
    Suites,
    /// Recompute the calibrated constants and write the fixtures file.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "crates/varlp/fixtures/calibration.json")]
        out: PathBuf,
    },
}

fn load_config(path: &Option<PathBuf>) -> varlp::Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn adhoc_ctx(config: &Option<PathBuf>) -> varlp::Result<Ctx> {
    Ctx::from_config(&load_config(config)?, Fixtures::bundled()?, false)
}

fn run(cli: Cli) -> varlp::Result<bool> {
    match cli.command {
        Command::Verify { suite, config, out, seed, refine } => {
            let mut cfg = load_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let fixtures = match &cfg.fixtures {
                Some(p) => Fixtures::load(p)?,
                None => Fixtures::bundled()?,
            };
            suites::find(&suite)?;
            let ctx = Ctx::from_config(&cfg, fixtures, refine)?;
            let results = suites::run_suite(&suite, &ctx)?;
            for r in &results {
                println!("{}", r.summary_line());
            }
            let report = Report::new(&suite, serde_json::to_value(&cfg)?, results);
            let (json, csv) = emit_report(&report, &out, &suite)?;
            println!("{} passed, {} failed; wrote {} and {}", report.passed, report.failed, json.display(), csv.display());
            Ok(report.all_pass())
        }
        Command::Norm { func, config } => {
            let ctx = adhoc_ctx(&config)?;
            println!("{}", serde_json::to_string_pretty(&adhoc::norm(&ctx, &adhoc::Function::parse(&func)?)?)?);
            Ok(true)
        }
        Command::Constant { class, q, config } => {
            let ctx = adhoc_ctx(&config)?;
            println!("{}", serde_json::to_string_pretty(&adhoc::constant(&ctx, adhoc::parse_class(&class, q)?)?)?);
            Ok(true)
        }
        Command::Op { op, func, config } => {
            let ctx = adhoc_ctx(&config)?;
            println!("{}", serde_json::to_string_pretty(&adhoc::op(&ctx, &op, &adhoc::Function::parse(&func)?)?)?);
            Ok(true)
        }
        Command::Suites => {
            println!("{}", serde_json::to_string_pretty(&suites::paper_map())?);
            Ok(true)
        }
        Command::Calibrate { config, out } => {
            let cfg = load_config(&config)?;
            let ctx = Ctx::from_config(&cfg, Fixtures::default(), false)?;
            let f = varlp::calibrate::calibrate(&ctx, &mut |stage| eprintln!("calibrating: {stage}"))?;
            f.save(&out)?;
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
