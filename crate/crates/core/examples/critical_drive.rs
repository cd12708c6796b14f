//! Smallest driving strength at which the evolution speeds up, per coupling
//! and velocity.

use qslmq::config::DEFAULT_BETAS;
use qslmq::sweep::{locate_critical_omega, OmegaGrid};
use qslmq::ModelParams;

fn main() {
    let grid = OmegaGrid::default();
    for lambda in [3.0, 5.0, 10.0, 0.01] {
        print!("lambda = {lambda:<5}");
        for beta in DEFAULT_BETAS {
            let p = ModelParams::default().with_lambda(lambda).with_beta(beta);
            match locate_critical_omega(&p, &grid) {
                Ok(oc) => print!("  {oc:>8.4}"),
                Err(e) => print!("  ({e})"),
            }
        }
        println!();
    }
}
