//! Full pipeline: nibble rounds, then the finisher, on random lists.

use nibble::generators::{generate, uniform_lists, GenSpec};
use nibble::graph::is_proper_list_coloring;
use nibble::nibble::{NibbleConfig, OverrideParams};
use nibble::pipeline::{list_color, PipelineConfig};

fn main() -> nibble::Result<()> {
    let g = generate(&GenSpec::gnp(800, 0.04, 5))?;
    let l = uniform_lists(800, 80, 64, 5)?;
    for (name, exponents) in [("default", 2.0), ("lenient", 1.0)] {
        let params = OverrideParams {
            eta: None,
            codegree_exponent: exponents,
            error_exponent: exponents,
        };
        let cfg = PipelineConfig::new(NibbleConfig::override_mode(0.1, 2, params));
        let out = list_color(&g, &l, &cfg, 9)?;
        assert!(out.coloring.is_total() && is_proper_list_coloring(&g, &l, &out.coloring));
        println!("{name} exponents: stopped at {}", out.nibble.stop);
        for r in &out.nibble.rounds {
            println!(
                "  round {} (retries {}): colored {}, left {}, min |L| {}, max color-degree {}",
                r.round,
                r.retries,
                r.colored.len(),
                r.remaining,
                r.min_list,
                r.max_color_degree
            );
        }
        println!(
            "  finisher: {} sweeps, greedy {}, {} colors used",
            out.finisher.sweeps,
            out.finisher.used_greedy,
            out.coloring.colors_used()
        );
    }
    Ok(())
}
