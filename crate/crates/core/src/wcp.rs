//! One round of the wasteful coloring procedure.
//!
//! The round consumes a fixed random stream in this order: activation coins
//! by ascending vertex, color choices by ascending activated vertex, then
//! equalizing coins by ascending `(vertex, color)`. Equalizing coins are
//! drawn for every pair, colored vertices included, so the stream layout does
//! not depend on the outcome.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{color_degrees, Color, Graph, ListAssignment, PartialColoring};
use crate::rng::rng_from_seed;

/// `(1 - η/ℓ)^d`.
pub fn keep_value(d: f64, ell: f64, eta: f64) -> f64 {
    (1.0 - eta / ell).powf(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundParams {
    pub d: f64,
    pub ell: usize,
    pub s: usize,
    pub eta: f64,
    pub keep: f64,
    pub uncolor: f64,
}

impl RoundParams {
    pub fn new(d: f64, ell: usize, s: usize, eta: f64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Argument("list size ℓ must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Argument(format!("activation probability {eta} outside [0, 1]")));
        }
        if !(d >= 0.0) {
            return Err(Error::Argument(format!("color-degree bound {d} must be non-negative")));
        }
        let keep = keep_value(d, ell as f64, eta);
        Ok(RoundParams {
            d,
            ell,
            s,
            eta,
            keep,
            uncolor: 1.0 - eta * keep,
        })
    }
}

/// Equalizing probability `keep · (1 - η/ℓ)^{-d_L(v,c)}`, evaluated as
/// `(1 - η/ℓ)^{d - d_L(v,c)}` so that `dvc = d` gives exactly 1.
pub fn eq_value(p: &RoundParams, dvc: usize) -> Result<f64> {
    if dvc as f64 > p.d {
        return Err(Error::Precondition(format!(
            "color-degree {dvc} exceeds d = {}",
            p.d
        )));
    }
    Ok((1.0 - p.eta / p.ell as f64).powf(p.d - dvc as f64))
}

/// The realized point of the round's product space.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTrace {
    /// `(v, A_v)` for activated vertices only.
    pub activations: Vec<(usize, Color)>,
    /// `(v, c)` with `E_{v,c} = 1`.
    pub flips: Vec<(usize, Color)>,
    /// `|L'(v)|` for every vertex of the input graph.
    pub list_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundOutcome {
    /// Colors assigned this round, indexed like the input graph.
    pub coloring: PartialColoring,
    /// Input-graph ids of the uncolored vertices, ascending.
    pub kept: Vec<usize>,
    /// `G'`: induced on `kept`, vertex `i` is `kept[i]`.
    pub residual: Graph,
    /// `L'` on the residual vertices.
    pub lists: ListAssignment,
    pub trace: OutcomeTrace,
}

/// Run activation, assignment, list update, commit and equalizing flips on
/// a preprocessed pair.
///
/// Checks the structural part of the pair definition up front (uniform list
/// size, color-degree at most `d`, no edge between disjoint lists); the η
/// window and codegree bound are the caller's concern.
pub fn run_round(g: &Graph, l: &ListAssignment, p: &RoundParams, seed: u64) -> Result<RoundOutcome> {
    let n = g.n();
    if l.n() != n {
        return Err(Error::Argument(format!(
            "list assignment covers {} vertices, graph has {n}",
            l.n()
        )));
    }
    if let Some(v) = (0..n).find(|&v| l.list(v).len() != p.ell) {
        return Err(Error::Precondition(format!(
            "|L({v})| = {} ≠ ℓ = {}",
            l.list(v).len(),
            p.ell
        )));
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| !l.intersects(u, v)) {
        return Err(Error::Precondition(format!("edge {u}-{v} joins disjoint lists")));
    }
    let degs = color_degrees(g, l);
    let eq: Vec<Vec<f64>> = degs
        .iter()
        .enumerate()
        .map(|(v, row)| {
            row.iter()
                .map(|&k| eq_value(p, k))
                .collect::<Result<Vec<f64>>>()
                .map_err(|_| {
                    Error::Precondition(format!("vertex {v} has color-degree above d = {}", p.d))
                })
        })
        .collect::<Result<_>>()?;

    let mut rng = rng_from_seed(seed);
    let mut alive: Vec<Vec<bool>> = (0..n).map(|v| vec![true; l.list(v).len()]).collect();

    let activated: Vec<bool> = (0..n).map(|_| rng.gen_bool(p.eta)).collect();
    let mut activations = Vec::new();
    for v in (0..n).filter(|&v| activated[v]) {
        let c = l.list(v)[rng.gen_range(0..p.ell)];
        activations.push((v, c));
    }

    for &(v, c) in &activations {
        for &u in g.neighbors(v) {
            if let Ok(i) = l.list(u).binary_search(&c) {
                alive[u][i] = false;
            }
        }
    }

    let mut coloring = PartialColoring::new(n);
    for &(v, c) in &activations {
        let i = l.list(v).binary_search(&c).unwrap();
        if alive[v][i] {
            coloring.set(v, c);
        }
    }

    let mut flips = Vec::new();
    for v in 0..n {
        for (i, &c) in l.list(v).iter().enumerate() {
            if rng.gen::<f64>() < 1.0 - eq[v][i] {
                flips.push((v, c));
                alive[v][i] = false;
            }
        }
    }

    let list_sizes: Vec<usize> = alive.iter().map(|a| a.iter().filter(|&&x| x).count()).collect();
    let kept = coloring.uncolored();
    let residual = g.induced(&kept);
    let lists = ListAssignment::from_sorted(
        kept.iter()
            .map(|&v| {
                l.list(v)
                    .iter()
                    .zip(&alive[v])
                    .filter_map(|(&c, &a)| a.then_some(c))
                    .collect()
            })
            .collect(),
    );
    Ok(RoundOutcome {
        coloring,
        kept,
        residual,
        lists,
        trace: OutcomeTrace {
            activations,
            flips,
            list_sizes,
        },
    })
}

/// Exact `Pr(c ∈ L'(v))` by enumerating the activations of `N_L(v, c)`
/// (each neighbor either picks `c` or not) together with the equalizing coin.
pub fn exact_survival_probability(
    g: &Graph,
    l: &ListAssignment,
    p: &RoundParams,
    v: usize,
    c: Color,
) -> Result<f64> {
    g.check_vertex(v)?;
    if !l.contains(v, c) {
        return Err(Error::Argument(format!("color {c} not in L({v})")));
    }
    let picks_c: Vec<f64> = g
        .neighbors(v)
        .iter()
        .filter(|&&u| l.contains(u, c))
        .map(|&u| p.eta / l.list(u).len() as f64)
        .collect();
    let k = picks_c.len();
    const LIMIT: u128 = 1 << 20;
    let size = 1u128 << k;
    if size > LIMIT {
        return Err(Error::TooLarge {
            what: "survival enumeration",
            size,
            limit: LIMIT,
        });
    }
    let eq = eq_value(p, k)?;
    let mut survive = 0.0;
    let mut mass = 0.0;
    for mask in 0u64..(1u64 << k) {
        let pr: f64 = picks_c
            .iter()
            .enumerate()
            .map(|(i, &q)| if mask >> i & 1 == 1 { q } else { 1.0 - q })
            .product();
        for (flip, pf) in [(false, eq), (true, 1.0 - eq)] {
            mass += pr * pf;
            if mask == 0 && !flip {
                survive += pr * pf;
            }
        }
    }
    debug_assert!((mass - 1.0).abs() < 1e-9, "enumeration mass {mass}");
    Ok(survive)
}
