//! The parameter recursion: strict exponents at d = 10^6 and a re-anchored
//! schedule at desk scale.

use nibble::nibble::{build_nibble_schedule, NibbleSchedule, DEFAULT_D_TILDE};

fn show(name: &str, s: &NibbleSchedule) {
    println!(
        "{name}: κ={:.6e} η={:.4e} steps={} i*={:?} cap={} feasible={} ln(min feasible d)={:.1}",
        s.kappa,
        s.eta,
        s.len(),
        s.i_star,
        s.iteration_cap,
        s.feasible(),
        s.ln_min_feasible_d
    );
    for i in 0..s.len().min(6) {
        println!("  i={:<3} ℓ={:<14.3} d={:<14.3} flags={:?}", i + 1, s.ell_seq[i], s.d_seq[i], s.flags[i]);
    }
}

fn main() -> nibble::Result<()> {
    show("strict d=1e6", &build_nibble_schedule(1e6, 0.1)?);
    show("override d=60 ℓ=61", &NibbleSchedule::from_start(60.0, 61.0, 61.0 / 480.0, 0.1, 2.0, DEFAULT_D_TILDE)?);
    show("override d=1e4 ℓ=1.5e4", &NibbleSchedule::from_start(1e4, 1.5e4, 0.3, 0.1, 5.0, DEFAULT_D_TILDE)?);
    Ok(())
}
