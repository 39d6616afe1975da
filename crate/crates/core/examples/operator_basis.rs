//! Shift/clock unitary operator bases and the maximally entangled state.
//!
//! ```text
//! cargo run --example operator_basis
//! ```

use avgfid::basis::{clock, entangled_state_decomposition_check, shift, shift_clock_basis, validate_basis};
use avgfid::linalg::hs_inner;
use avgfid::Complex64;

fn main() -> avgfid::Result<()> {
    let d = 3;
    let basis = shift_clock_basis(d)?;
    println!("d={d}: {} elements, orthogonal: {}", basis.len(), validate_basis(&basis, 1e-12));
    for (label, u) in basis.labels().iter().zip(basis.elements()).take(4) {
        println!("  {label:?}: tr = {:.3}", u.trace());
    }

    // Z X = ω X Z
    let (x, z) = (shift(d), clock(d));
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    let gap = z.matmul(&x).max_abs_diff(&x.matmul(&z).scale(omega));
    println!("ZX - wXZ max entry: {gap:.1e}");

    let gram = hs_inner(&basis.elements()[1], &basis.elements()[1])?;
    println!("<U_1, U_1> = {gram:.3}");

    for d in 2..=6 {
        let b = shift_clock_basis(d)?;
        println!("d={d}: |phi><phi| - sum U*(x)U / d^2 max deviation {:.1e}", entangled_state_decomposition_check(&b));
    }
    Ok(())
}
