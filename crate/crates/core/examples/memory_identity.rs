//! Non-Markovianity and the speed-limit ratio, and the identity that ties
//! them: qsl = (1 - p) / (1 - p + 2N).

use qslmq::measures;
use qslmq::{AmplitudeSolution, ModelParams};

fn main() -> qslmq::Result<()> {
    let p = ModelParams::default().with_lambda(0.01);
    for omega in [0.0, 1.0, 2.0, 5.0, 10.0] {
        let q = p.with_drive(omega);
        let sol = AmplitudeSolution::from_params(&q)?;
        let m = measures::metrics(&sol, q.tau)?;
        let rebuilt = (1.0 - m.p_tau) / (1.0 - m.p_tau + 2.0 * m.nm);
        println!(
            "Omega = {omega:>4}: p = {:.6}  N = {:.4e}  qsl = {:.6}  rebuilt = {rebuilt:.6}  residual = {:.1e}",
            m.p_tau, m.nm, m.qsl_ratio, m.identity_residual
        );
    }
    Ok(())
}
