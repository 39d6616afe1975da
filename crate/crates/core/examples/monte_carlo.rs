//! Haar-averaged fidelity by sampling, against the closed forms.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use avgfid::basis::shift_clock_basis;
use avgfid::channel::random_channel;
use avgfid::fidelity::{average_fidelity, average_gate_fidelity, entanglement_fidelity_choi};
use avgfid::haar::{haar_unitary, mc_average_fidelity, mc_average_gate_fidelity, substream};

fn main() -> avgfid::Result<()> {
    let samples = 100_000;
    for d in [2, 3, 4] {
        let channel = random_channel(d, 2, 40 + d as u64)?;
        let fe = entanglement_fidelity_choi(&channel).value;
        let exact = average_fidelity(&channel).value;
        let est = mc_average_fidelity(&channel, samples, 1)?;
        println!(
            "d={d}  F_e={fe:.6}  (dF_e+1)/(d+1)={exact:.6}  sampled={:.6} +/- {:.1e}  z={:.2}",
            est.mean,
            est.std_error,
            est.z_score(exact)
        );

        let gate = haar_unitary(d, &mut substream(9, d as u64));
        let formula = average_gate_fidelity(&channel, &gate, &shift_clock_basis(d)?)?.value;
        let est = mc_average_gate_fidelity(&channel, &gate, samples, 2)?;
        println!(
            "      random gate: formula={formula:.6}  sampled={:.6} +/- {:.1e}  z={:.2}",
            est.mean,
            est.std_error,
            est.z_score(formula)
        );
    }
    Ok(())
}
