//! Excited-state population, decoherence rate and Lamb shift of a static,
//! undriven qubit in the weak and strong coupling regimes.

use qslmq::{AmplitudeSolution, ModelParams};

fn main() -> qslmq::Result<()> {
    for lambda in [3.0, 0.01] {
        let p = ModelParams::default().with_lambda(lambda);
        let sol = AmplitudeSolution::from_params(&p)?;
        println!("lambda = {lambda} ({:?})", p.regime());
        println!("{:>6} {:>12} {:>12} {:>12}", "t", "|C1|^2", "Gamma", "S");
        for t in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
            match sol.rates_at(t) {
                Ok(r) => println!(
                    "{t:>6} {:>12.6} {:>12.4e} {:>12.4e}",
                    sol.population(t),
                    r.gamma,
                    r.lamb_shift
                ),
                Err(e) => println!("{t:>6} {:>12.6} {e}", sol.population(t)),
            }
        }
        println!();
    }
    Ok(())
}
