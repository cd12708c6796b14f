//! Drive a small sweep from a `key = value` configuration and write CSV files.
//!
//! cargo run --example config_run -- path/to/run.cfg out_dir

use std::path::PathBuf;

use qslmq::config::RunConfig;
use qslmq::sweep::{run_sweep, write_sweep_files};

const DEMO: &str = "\
lambda = 3, 0.01
beta = 0, 1e-9
omega_stop = 15
omega_count = 31
";

fn main() -> qslmq::Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = match args.next() {
        Some(path) => RunConfig::from_file(&PathBuf::from(path))?,
        None => RunConfig::parse(DEMO)?,
    };
    cfg.validate()?;
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qslmq_demo"));
    let curves = run_sweep(&cfg.sweep_spec())?;
    for path in write_sweep_files(&out, &curves)? {
        println!("{}", path.display());
    }
    Ok(())
}
