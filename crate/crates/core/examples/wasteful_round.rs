//! One round of the wasteful coloring procedure on a random pair, with the
//! exact per-color survival probability next to `keep`.

use nibble::generators::{generate, uniform_lists, GenSpec};
use nibble::graph::{color_degree, is_proper_list_coloring, max_color_degree};
use nibble::wcp::{eq_value, exact_survival_probability, run_round, RoundParams};

fn main() -> nibble::Result<()> {
    let g = generate(&GenSpec::gnp(60, 0.25, 3))?;
    let l = uniform_lists(60, 20, 12, 3)?;
    let g = g.filter_edges(|u, v| l.intersects(u, v));
    let d = max_color_degree(&g, &l) as f64;
    let p = RoundParams::new(d, 12, 2, 0.2)?;
    println!("d={d} ℓ=12 η=0.2 keep={:.6} uncolor={:.6}", p.keep, p.uncolor);

    for v in [0, 1, 2] {
        let c = l.list(v)[0];
        let k = color_degree(&g, &l, v, c)?;
        let exact = exact_survival_probability(&g, &l, &p, v, c)?;
        println!("v={v} c={c} color-degree={k} eq={:.6} Pr(c survives)={exact:.12}", eq_value(&p, k)?);
    }

    let out = run_round(&g, &l, &p, 11)?;
    assert!(is_proper_list_coloring(&g, &l, &out.coloring));
    let mean = out.trace.list_sizes.iter().sum::<usize>() as f64 / g.n() as f64;
    println!(
        "activated {}, colored {}, equalizing flips {}, mean |L'| {mean:.2} (ℓ·keep = {:.2}), {} vertices left",
        out.trace.activations.len(),
        out.coloring.domain_size(),
        out.trace.flips.len(),
        12.0 * p.keep,
        out.kept.len()
    );
    Ok(())
}
