//! Nibble rounds followed by the finisher.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finisher::{finish, FinisherReport};
use crate::graph::{find_conflict, find_list_violation, Graph, ListAssignment, PartialColoring};
use crate::nibble::{run_nibble, NibbleConfig, NibbleOutcome};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub nibble: NibbleConfig,
    pub finisher_iterations: usize,
}

impl PipelineConfig {
    pub fn new(nibble: NibbleConfig) -> Self {
        PipelineConfig {
            nibble,
            finisher_iterations: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOutcome {
    pub coloring: PartialColoring,
    pub nibble: NibbleOutcome,
    pub finisher: FinisherReport,
    /// Nibble rounds whose colors survive; fewer than `nibble.rounds.len()`
    /// when the finisher had to restart from an earlier state.
    pub rounds_kept: usize,
}

/// Uncolored vertices after the first `kept` rounds, with lists reduced only
/// by the colors of colored neighbors.
fn rebuild_residual(g: &Graph, l: &ListAssignment, nibble: &NibbleOutcome, kept: usize) -> (PartialColoring, Vec<usize>, Graph, ListAssignment) {
    let mut phi = PartialColoring::new(g.n());
    for r in &nibble.rounds[..kept] {
        for &(v, c) in &r.colored {
            phi.set(v, c);
        }
    }
    let ids = phi.uncolored();
    let lists = ids
        .iter()
        .map(|&v| {
            let mut list = l.list(v).to_vec();
            list.retain(|&c| g.neighbors(v).iter().all(|&u| phi.get(u) != Some(c)));
            list
        })
        .collect();
    let lists = ListAssignment::new(lists).expect("sublists of valid lists");
    (phi, ids.clone(), g.induced(&ids), lists)
}

/// Total proper coloring of `g` from `l`.
///
/// When the finisher fails on the nibble residual, it is retried on residuals
/// rebuilt from the original lists, dropping accepted rounds from the end.
pub fn list_color(g: &Graph, l: &ListAssignment, cfg: &PipelineConfig, seed: u64) -> Result<PipelineOutcome> {
    let nibble = run_nibble(g, l, &cfg.nibble, seed)?;
    let fin_seed = derive_seed(seed, &[u64::MAX]);
    let total = nibble.rounds.len();
    let mut first_err = None;
    let candidates = std::iter::once(None).chain((0..=total).rev().map(Some));
    for kept in candidates {
        let (mut coloring, ids, sub_g, sub_l) = match kept {
            None => (
                nibble.coloring.clone(),
                nibble.remaining.clone(),
                nibble.graph.clone(),
                nibble.lists.clone(),
            ),
            Some(k) => rebuild_residual(g, l, &nibble, k),
        };
        match finish(&sub_g, &sub_l, fin_seed, cfg.finisher_iterations) {
            Ok((rest, finisher)) => {
                for (i, &v) in ids.iter().enumerate() {
                    coloring.set(v, rest.get(i).expect("finisher output is total"));
                }
                assert!(find_conflict(g, &coloring).is_none() && find_list_violation(l, &coloring).is_none());
                return Ok(PipelineOutcome {
                    coloring,
                    nibble,
                    finisher,
                    rounds_kept: kept.unwrap_or(total),
                });
            }
            Err(e) => {
                let e = match e {
                    Error::FinisherExhausted { remaining } => Error::FinisherExhausted {
                        remaining: remaining.iter().map(|&i| ids[i]).collect(),
                    },
                    e => e,
                };
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one attempt"))
}
