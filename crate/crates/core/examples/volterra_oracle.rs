//! Closed-form amplitude against direct integration of the memory equation,
//! including the finite-cavity kernel which has no closed form.

use qslmq::model::TransitTime;
use qslmq::oracle::{convergence_order, solve_volterra, VolterraConfig};
use qslmq::{AmplitudeSolution, Kernel, ModelParams};

fn main() -> qslmq::Result<()> {
    let p = ModelParams::default()
        .with_lambda(3.0)
        .with_drive(5.0)
        .with_beta(1e-9);
    let sol = AmplitudeSolution::from_params(&p)?;
    let kernel = Kernel::continuum(&p)?;
    for h in [1e-2, 5e-3, 1e-3] {
        let ts = solve_volterra(&kernel, &VolterraConfig::new(h, 1.0))?;
        println!(
            "h = {h:e}: max |C1 - C1_volterra| = {:.3e}",
            ts.max_deviation(|t| sol.c1_at(t))
        );
    }
    println!(
        "order: {:?}",
        convergence_order(&kernel, &VolterraConfig::new(1e-3, 1.0))?
    );

    let short = p.with_tau0(TransitTime::Finite(0.5));
    let ts = solve_volterra(
        &Kernel::finite_cavity(&short)?,
        &VolterraConfig::new(1e-3, 2.0),
    )?;
    let last = ts.len() - 1;
    println!(
        "finite cavity tau0 = 0.5: |C1(2)|^2 = {:.6} (continuum {:.6})",
        ts.population(last),
        sol.population(2.0)
    );
    Ok(())
}
