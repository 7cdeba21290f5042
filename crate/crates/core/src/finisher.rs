//! Completing a partial coloring once lists dominate color-degrees.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{find_conflict, max_color_degree, Color, Graph, ListAssignment, PartialColoring};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinisherReport {
    pub sweeps: usize,
    /// Vertices uncolored by a conflict in each sweep.
    pub conflicts: Vec<usize>,
    /// Random sweeps were skipped or gave up and peeling finished the job.
    pub used_greedy: bool,
}

/// Color every vertex of `g` from `l`.
pub fn complete_coloring(g: &Graph, l: &ListAssignment, seed: u64, max_iterations: usize) -> Result<PartialColoring> {
    finish(g, l, seed, max_iterations).map(|(phi, _)| phi)
}

/// Random conflict-resolution sweeps while `min |L| ≥ 8 · max color-degree`,
/// then a peeling greedy for whatever is left.
///
/// A sweep: every uncolored vertex picks a uniform color from its list minus
/// the colors of its colored neighbors; picks shared with an uncolored
/// neighbor are dropped. After `max_iterations` consecutive sweeps without
/// progress the greedy takes over.
pub fn finish(
    g: &Graph,
    l: &ListAssignment,
    seed: u64,
    max_iterations: usize,
) -> Result<(PartialColoring, FinisherReport)> {
    if l.n() != g.n() {
        return Err(Error::Argument(format!(
            "list assignment covers {} vertices, graph has {}",
            l.n(),
            g.n()
        )));
    }
    let n = g.n();
    let mut phi = PartialColoring::new(n);
    let mut report = FinisherReport::default();
    let random_ok = n > 0 && l.min_size() >= 8 * max_color_degree(g, l);
    if random_ok {
        let mut stale = 0;
        while !phi.is_total() && stale < max_iterations {
            let mut rng = rng_from_seed(derive_seed(seed, &[report.sweeps as u64]));
            report.sweeps += 1;
            let mut pick: Vec<Option<Color>> = vec![None; n];
            for v in phi.uncolored() {
                let avail = available(g, l, &phi, v);
                if !avail.is_empty() {
                    pick[v] = Some(avail[rng.gen_range(0..avail.len())]);
                }
            }
            let mut progress = 0;
            let mut conflicts = 0;
            for v in 0..n {
                let Some(c) = pick[v] else { continue };
                if g.neighbors(v).iter().any(|&u| pick[u] == Some(c)) {
                    conflicts += 1;
                } else {
                    phi.set(v, c);
                    progress += 1;
                }
            }
            report.conflicts.push(conflicts);
            stale = if progress == 0 { stale + 1 } else { 0 };
        }
    }
    if !phi.is_total() {
        report.used_greedy = true;
        if let Err(stuck) = peel_and_color(g, l, &mut phi) {
            return Err(if random_ok {
                Error::FinisherExhausted { remaining: stuck }
            } else {
                Error::Infeasible(format!(
                    "lists are below 8 × max color-degree and peeling stalls on {} vertices",
                    stuck.len()
                ))
            });
        }
    }
    if let Some((u, v)) = find_conflict(g, &phi) {
        panic!("finisher produced monochromatic edge {u}-{v}");
    }
    Ok((phi, report))
}

fn available(g: &Graph, l: &ListAssignment, phi: &PartialColoring, v: usize) -> Vec<Color> {
    let used: Vec<Color> = g.neighbors(v).iter().filter_map(|&u| phi.get(u)).collect();
    l.list(v).iter().copied().filter(|c| !used.contains(c)).collect()
}

/// Repeatedly remove an uncolored vertex with more available colors than
/// uncolored neighbors, then color in reverse removal order. On a stall,
/// returns the vertices that could not be removed.
fn peel_and_color(g: &Graph, l: &ListAssignment, phi: &mut PartialColoring) -> std::result::Result<(), Vec<usize>> {
    let n = g.n();
    let mut active = vec![false; n];
    for v in phi.uncolored() {
        active[v] = true;
    }
    let mut rdeg: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).iter().filter(|&&u| active[u]).count())
        .collect();
    let slack: Vec<usize> = (0..n)
        .map(|v| if active[v] { available(g, l, phi, v).len() } else { 0 })
        .collect();
    let mut queue: Vec<usize> = (0..n).rev().filter(|&v| active[v] && slack[v] > rdeg[v]).collect();
    let mut queued = vec![false; n];
    for &v in &queue {
        queued[v] = true;
    }
    let mut order = Vec::new();
    while let Some(v) = queue.pop() {
        active[v] = false;
        order.push(v);
        for &u in g.neighbors(v) {
            if active[u] {
                rdeg[u] -= 1;
                if !queued[u] && slack[u] > rdeg[u] {
                    queued[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    let stuck: Vec<usize> = (0..n).filter(|&v| active[v]).collect();
    if !stuck.is_empty() {
        return Err(stuck);
    }
    for &v in order.iter().rev() {
        let c = available(g, l, phi, v)[0];
        phi.set(v, c);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::fixture;
    use crate::graph::is_proper_list_coloring;

    #[test]
    fn edgeless_in_one_sweep() {
        let g = Graph::empty(7);
        let l = ListAssignment::full_palette(7, 2);
        let (phi, r) = finish(&g, &l, 0, 10).unwrap();
        assert!(phi.is_total());
        assert_eq!(r.sweeps, 1);
        assert!(!r.used_greedy);
    }

    #[test]
    fn single_edge_sixteen_colors() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = ListAssignment::full_palette(2, 16);
        let mut sweeps = 0;
        for seed in 0..1000 {
            let (phi, r) = finish(&g, &l, seed, 10).unwrap();
            assert!(is_proper_list_coloring(&g, &l, &phi) && phi.is_total());
            sweeps += r.sweeps;
        }
        // one sweep fails with probability 1/16
        let mean = sweeps as f64 / 1000.0;
        assert!((mean - 16.0 / 15.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn greedy_when_lists_are_short() {
        let g = fixture("petersen").unwrap();
        let l = ListAssignment::full_palette(10, 4);
        let (phi, r) = finish(&g, &l, 3, 10).unwrap();
        assert!(r.used_greedy && r.sweeps == 0);
        assert!(is_proper_list_coloring(&g, &l, &phi) && phi.is_total());
    }

    #[test]
    fn infeasible_when_nothing_applies() {
        let g = fixture("c5").unwrap();
        let l = ListAssignment::full_palette(5, 2);
        assert!(matches!(finish(&g, &l, 0, 10), Err(Error::Infeasible(_))));
    }

    #[test]
    fn determinism() {
        let g = fixture("rook3x3").unwrap();
        let l = ListAssignment::full_palette(9, 40);
        assert_eq!(finish(&g, &l, 8, 5).unwrap(), finish(&g, &l, 8, 5).unwrap());
    }

    #[test]
    fn conflicts_shrink_across_sweeps() {
        for name in ["c5", "petersen", "k13", "rook3x3"] {
            let g = fixture(name).unwrap();
            let q = 8 * g.max_degree() as u32;
            let l = ListAssignment::full_palette(g.n(), q);
            let runs: Vec<Vec<usize>> = (0..100).map(|s| finish(&g, &l, s, 50).unwrap().1.conflicts).collect();
            let sweeps = runs.iter().map(Vec::len).max().unwrap();
            let stats: Vec<(f64, f64)> = (0..sweeps)
                .map(|k| {
                    let xs: Vec<f64> = runs.iter().map(|r| r.get(k).copied().unwrap_or(0) as f64).collect();
                    let m = xs.iter().sum::<f64>() / 100.0;
                    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 99.0;
                    (m, (var / 100.0).sqrt())
                })
                .collect();
            for w in stats.windows(2) {
                let band = 3.0 * (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
                assert!(w[1].0 <= w[0].0 + band, "{name}: {stats:?}");
            }
        }
    }
}
