//! Palette sparsification trials as CSV, run on several threads.

use nibble::generators::{generate, GenSpec};
use nibble::nibble::{NibbleConfig, OverrideParams};
use nibble::pipeline::PipelineConfig;
use nibble::sparsify::{run_trials, trials_csv};

fn main() -> nibble::Result<()> {
    let g = generate(&GenSpec::gnp(200, 0.1, 1))?;
    let cfg = PipelineConfig::new(NibbleConfig::override_mode(0.1, 2, OverrideParams::default()));
    for (q, ell) in [(10, 1), (50, 1), (200, 8)] {
        let rows = run_trials(&g, q, ell, 8, 3, 4, false, &cfg)?;
        print!("{}", trials_csv(&rows));
        let rate = rows.iter().map(|r| r.e_prime as f64).sum::<f64>() / (rows.len() * g.m()) as f64;
        println!("# q={q} ℓ={ell}: |E'|/|E| = {rate:.4}\n");
    }
    Ok(())
}
