//! Palette sparsification: color a graph using only the edges whose small
//! random lists collide.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::uniform_lists;
use crate::graph::{is_proper, is_proper_list_coloring, Color, Graph, ListAssignment, PartialColoring};
use crate::pipeline::{list_color, PipelineConfig};
use crate::rng::derive_seed;

/// Sampled lists and the conflict graph `E' = {uv ∈ E : L(u) ∩ L(v) ≠ ∅}`.
pub fn sparsify(g: &Graph, q: Color, ell: usize, seed: u64) -> Result<(ListAssignment, Graph)> {
    let l = uniform_lists(g.n(), q, ell, seed)?;
    let conflict = g.filter_edges(|u, v| l.intersects(u, v));
    Ok((l, conflict))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparsifyOutcome {
    pub lists: ListAssignment,
    pub e_prime: usize,
    pub coloring: Option<PartialColoring>,
    pub failure: Option<String>,
}

impl SparsifyOutcome {
    pub fn success(&self) -> bool {
        self.coloring.is_some()
    }
}

/// Sample lists, keep the colliding edges, and list-color that sparse graph.
pub fn sparsify_and_color(g: &Graph, q: Color, ell: usize, seed: u64, cfg: &PipelineConfig) -> Result<SparsifyOutcome> {
    let (lists, conflict) = sparsify(g, q, ell, seed)?;
    let e_prime = conflict.m();
    let (coloring, failure) = match list_color(&conflict, &lists, cfg, derive_seed(seed, &[1])) {
        Ok(out) => {
            assert!(is_proper_list_coloring(&conflict, &lists, &out.coloring));
            assert!(is_proper(g, &out.coloring), "sparsified coloring conflicts outside E'");
            (Some(out.coloring), None)
        }
        Err(e @ (Error::Argument(_) | Error::InvalidVertex { .. })) => return Err(e),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SparsifyOutcome {
        lists,
        e_prime,
        coloring,
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub seed: u64,
    pub q: Color,
    pub ell: usize,
    pub e_prime: usize,
    pub success: bool,
    pub colors_used: usize,
    /// Only filled when timing is requested, so reports stay reproducible.
    pub wall_ms: Option<f64>,
}

/// `trials` independent runs with seeds derived from `seed`, on `threads`
/// worker threads; rows come back in trial order.
pub fn run_trials(
    g: &Graph,
    q: Color,
    ell: usize,
    trials: usize,
    seed: u64,
    threads: usize,
    timing: bool,
    cfg: &PipelineConfig,
) -> Result<Vec<TrialRow>> {
    let one = |t: usize| -> Result<TrialRow> {
        let s = derive_seed(seed, &[t as u64]);
        let start = Instant::now();
        let out = sparsify_and_color(g, q, ell, s, cfg)?;
        Ok(TrialRow {
            seed: s,
            q,
            ell,
            e_prime: out.e_prime,
            success: out.success(),
            colors_used: out.coloring.as_ref().map_or(0, PartialColoring::colors_used),
            wall_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Argument(e.to_string()))?;
    pool.install(|| (0..trials).into_par_iter().map(one).collect())
}

pub fn trials_csv(rows: &[TrialRow]) -> String {
    let mut out = String::from("seed,q,ell,e_prime,success,colors_used,wall_ms\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.seed,
            r.q,
            r.ell,
            r.e_prime,
            r.success,
            r.colors_used,
            r.wall_ms.map_or(String::new(), |w| format!("{w:.3}"))
        ));
    }
    out
}
