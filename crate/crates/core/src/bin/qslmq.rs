use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qslmq::config::RunConfig;
use qslmq::sweep::{self, format_label, format_value};
use qslmq::verify::{run_verify, VerifyLevel};
use qslmq::Error;

#[derive(Parser)]
#[command(
    name = "qslmq",
    version,
    about = "Speed limit and memory of a driven moving qubit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form time trace of C1, the decoherence rate and the Lamb shift.
    Trace(RunArgs),
    /// Speed-limit ratio and non-Markovianity over the driving-strength grid.
    Sweep(RunArgs),
    /// Critical driving strength for every (lambda, beta) pair.
    Critical(RunArgs),
    /// Run the built-in consistency checks.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    omega0: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long = "omega_drive")]
    omega_drive: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    tau0: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long = "omega_start")]
    omega_start: Option<String>,
    #[arg(long = "omega_stop")]
    omega_stop: Option<String>,
    #[arg(long = "omega_count")]
    omega_count: Option<String>,
    #[arg(long = "trace_horizon")]
    trace_horizon: Option<String>,
    #[arg(long = "trace_count")]
    trace_count: Option<String>,
    #[arg(long = "oracle_step")]
    oracle_step: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> [(&'static str, &Option<String>); 14] {
        [
            ("omega0", &self.omega0),
            ("gamma", &self.gamma),
            ("lambda", &self.lambda),
            ("omega_drive", &self.omega_drive),
            ("delta", &self.delta),
            ("beta", &self.beta),
            ("tau0", &self.tau0),
            ("tau", &self.tau),
            ("omega_start", &self.omega_start),
            ("omega_stop", &self.omega_stop),
            ("omega_count", &self.omega_count),
            ("trace_horizon", &self.trace_horizon),
            ("trace_count", &self.trace_count),
            ("oracle_step", &self.oracle_step),
        ]
    }
}

fn load(args: &RunArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for (key, value) in args.overrides.pairs() {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn trace(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(out)?;
    for p in cfg.parameter_sets() {
        let series = sweep::trace_for(&p, cfg.trace_horizon, cfg.trace_count, cfg.oracle_step)?;
        let path = out.join(sweep::trace_file_name(&p));
        let file = std::fs::File::create(&path)?;
        sweep::write_trace_csv(std::io::BufWriter::new(file), &series)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn sweep_cmd(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    let curves = sweep::run_sweep(&cfg.sweep_spec())?;
    for path in sweep::write_sweep_files(out, &curves)? {
        println!("{}", path.display());
    }
    for c in &curves {
        let skipped = c.rows.iter().filter(|r| !r.status.is_ok()).count();
        if skipped > 0 {
            eprintln!(
                "warning: lambda={} beta={}: {skipped} rows skipped",
                format_label(c.lambda),
                format_label(c.beta)
            );
        }
    }
    Ok(())
}

fn critical(cfg: &RunConfig, out: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(out)?;
    let path = out.join("critical.csv");
    let mut w = csv::Writer::from_path(&path).map_err(Error::from)?;
    w.write_record(["lambda", "beta", "omega_c", "status"])?;
    for p in cfg.parameter_sets() {
        let (value, status) = match sweep::locate_critical_omega(&p, &cfg.omega) {
            Ok(v) => (v, "ok".to_string()),
            Err(e) => (f64::NAN, format!("skipped: {e}")),
        };
        w.write_record([
            format_value(p.lambda),
            format_value(p.beta),
            format_value(value),
            status,
        ])?;
    }
    w.flush()?;
    println!("{}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Trace(args) => load(args).and_then(|c| trace(&c, &args.out)),
        Command::Sweep(args) => load(args).and_then(|c| sweep_cmd(&c, &args.out)),
        Command::Critical(args) => load(args).and_then(|c| critical(&c, &args.out)),
        Command::Verify { level, run } => {
            if let Err(e) = load(run) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            let level = match level {
                Level::Fast => VerifyLevel::Fast,
                Level::Full => VerifyLevel::Full,
            };
            let report = run_verify(level);
            println!("{report}");
            return if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
