//! Average gate fidelity of a noisy X gate, computed three ways.
//!
//! ```text
//! cargo run --example gate_fidelity
//! ```

use avgfid::basis::{pauli_basis, shift, shift_clock_basis};
use avgfid::channel::{compose, depolarizing, unitary_channel};
use avgfid::fidelity::{average_gate_fidelity, average_gate_fidelity_qubit, average_gate_fidelity_via_composition};

fn main() -> avgfid::Result<()> {
    let x = shift(2);
    // a perfect X followed by 10% depolarizing noise
    let noisy_x = compose(&unitary_channel(&x)?, &depolarizing(2, 0.1)?)?;

    let via_basis = average_gate_fidelity(&noisy_x, &x, &shift_clock_basis(2)?)?;
    let via_paulis = average_gate_fidelity(&noisy_x, &x, &pauli_basis())?;
    let via_qubit = average_gate_fidelity_qubit(&noisy_x, &x)?;
    let via_composition = average_gate_fidelity_via_composition(&noisy_x, &x)?;

    println!("shift/clock basis : {:.15}", via_basis.value);
    println!("Pauli basis       : {:.15}", via_paulis.value);
    println!("qubit closed form : {:.15}", via_qubit.value);
    println!("via U^dagger o E  : {:.15}", via_composition.value);
    println!("expected 1 - p/2  : {:.15}", 1.0 - 0.1 / 2.0);

    // qutrit shift gate under 20% depolarizing noise
    let x3 = shift(3);
    let noisy = compose(&unitary_channel(&x3)?, &depolarizing(3, 0.2)?)?;
    let f = average_gate_fidelity(&noisy, &x3, &shift_clock_basis(3)?)?;
    println!("qutrit shift, p=0.2: {:.15} (expected {:.15})", f.value, 1.0 - 0.2 * 2.0 / 3.0);
    Ok(())
}
