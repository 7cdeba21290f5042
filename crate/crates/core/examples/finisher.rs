//! Random conflict-resolution sweeps once lists dwarf color-degrees, and
//! the peeling greedy below that.

use nibble::finisher::finish;
use nibble::generators::{generate, GenSpec};
use nibble::graph::is_proper;
use nibble::ListAssignment;

fn main() -> nibble::Result<()> {
    let g = generate(&GenSpec::gnp(500, 0.01, 2))?;
    for q in [8 * g.max_degree() as u32, g.max_degree() as u32 + 1] {
        let l = ListAssignment::full_palette(g.n(), q);
        let (phi, report) = finish(&g, &l, 4, 50)?;
        assert!(phi.is_total() && is_proper(&g, &phi));
        println!(
            "Δ={} q={q}: sweeps {}, conflicts per sweep {:?}, greedy {}",
            g.max_degree(),
            report.sweeps,
            report.conflicts,
            report.used_greedy
        );
    }
    Ok(())
}
