//! The experimental route: prepare states, run finite-shot tomography on the
//! outputs, and combine them into a gate fidelity estimate.
//!
//! ```text
//! cargo run --release --example tomography
//! ```

use avgfid::basis::{shift, shift_clock_basis};
use avgfid::channel::{compose, depolarizing, unitary_channel};
use avgfid::experiment::{estimate_fidelity_experiment, solve_alphas, standard_preparation_basis, Shots};
use avgfid::fidelity::average_gate_fidelity;

fn main() -> avgfid::Result<()> {
    let d = 2;
    let x = shift(d);
    let channel = compose(&unitary_channel(&x)?, &depolarizing(d, 0.1)?)?;
    let exact = average_gate_fidelity(&channel, &x, &shift_clock_basis(d)?)?.value;

    let pb = standard_preparation_basis(d)?;
    let alphas = solve_alphas(&shift_clock_basis(d)?, &pb)?;
    println!("{} preparation states, smallest Gram eigenvalue {:.3}", pb.states().len(), pb.gram_min_eigenvalue());
    println!("alpha reconstruction residual {:.1e}", alphas.reconstruction_residual(&shift_clock_basis(d)?, &pb));

    let ideal = estimate_fidelity_experiment(&channel, &x, Shots::Exact, 0, 1)?;
    println!("exact outputs : {:.12} (formula {exact:.12})", ideal.mean);
    for shots in [100, 1_000, 10_000, 100_000] {
        let est = estimate_fidelity_experiment(&channel, &x, Shots::Finite(shots), 11, 50)?;
        println!(
            "{shots:>6} shots : {:.6} +/- {:.1e} over {} repeats",
            est.mean, est.std_error, est.n_samples
        );
    }
    Ok(())
}
