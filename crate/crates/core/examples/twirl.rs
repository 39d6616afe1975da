//! Twirling a channel over Haar unitaries yields a depolarizing channel.
//!
//! ```text
//! cargo run --release --example twirl
//! ```

use avgfid::channel::{exact_twirl, random_channel};
use avgfid::fidelity::entanglement_fidelity_choi;
use avgfid::haar::{mc_twirl_channel, mc_twirl_choi};

fn main() -> avgfid::Result<()> {
    let channel = random_channel(3, 3, 2024)?;
    let params = exact_twirl(&channel)?;
    println!("F_e = {:.6}, depolarizing p = {:.6}", entanglement_fidelity_choi(&channel).value, params.p());

    let exact = params.choi_state();
    for n in [1_000, 10_000, 100_000] {
        let empirical = mc_twirl_choi(&channel, n, 7)?;
        let distance = empirical.matrix().frobenius_distance(exact.matrix());
        println!("{n:>7} unitaries: Frobenius distance to depolarizing Choi = {distance:.2e}");
    }

    // the twirl keeps the entanglement fidelity
    let twirled = mc_twirl_channel(&channel, 2_000, 7)?;
    println!(
        "twirled channel: {} Kraus operators, F_e = {:.6}",
        twirled.kraus().len(),
        entanglement_fidelity_choi(&twirled).value
    );
    Ok(())
}
