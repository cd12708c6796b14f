//! Speed-limit ratio against driving strength for a moving qubit.

use qslmq::sweep::{run_sweep, OmegaGrid, SweepSpec};
use qslmq::ModelParams;

fn main() -> qslmq::Result<()> {
    let spec = SweepSpec {
        base: ModelParams::default(),
        omega: OmegaGrid {
            start: 0.0,
            stop: 20.0,
            count: 21,
        },
        beta_list: vec![0.0, 1e-9],
        lambda_list: vec![3.0, 0.01],
    };
    for curve in run_sweep(&spec)? {
        println!("lambda = {}, beta = {:e}", curve.lambda, curve.beta);
        for r in curve.rows.iter().step_by(2) {
            println!(
                "  Omega = {:>5.1}  qsl = {:.6}  N = {:.3e}",
                r.omega_over_gamma, r.qsl_ratio, r.nm
            );
        }
    }
    Ok(())
}
