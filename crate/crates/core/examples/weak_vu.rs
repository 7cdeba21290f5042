//! Random bipartitions halving degree and codegree, then one palette per part.

use nibble::generators::{generate, GenSpec};
use nibble::graph::{is_proper, max_s_codegree};
use nibble::partition::{build_schedule, part_within_bounds, random_bipartition, weak_vu_pipeline, WeakVuConfig};

fn main() -> nibble::Result<()> {
    let g = generate(&GenSpec::gnp(500, 0.05, 1))?;
    let (d, t) = (g.max_degree() as f64, max_s_codegree(&g, 2) as f64);
    let split = random_bipartition(&g, 2, d, t, 3, 100)?;
    println!(
        "Δ={d} codegree={t}: parts of {} and {} after {} resampling passes, within bounds: {}",
        split.parts[0].len(),
        split.parts[1].len(),
        split.retries,
        split.parts.iter().all(|p| part_within_bounds(&g, p, 2, d, t))
    );

    let s = build_schedule(1024.0, 0.1, 0.1, 2)?;
    println!("Δ=1024 ζ=0.1: k={} levels={} degree targets {:?}", s.k, s.i_star, &s.d_seq[..4]);

    let g = generate(&GenSpec::gnp(1500, 0.04, 2))?;
    let out = weak_vu_pipeline(&g, &WeakVuConfig::new(0.5, 0.1, 2), 5)?;
    assert!(out.coloring.is_total() && is_proper(&g, &out.coloring));
    println!(
        "Δ={}: {} parts, palettes {:?}, {} colors in total",
        g.max_degree(),
        out.parts.len(),
        out.palettes.iter().map(|p| p.size).collect::<Vec<_>>(),
        out.palette_total
    );
    Ok(())
}
