//! Graphs, list assignments and partial colorings, plus the color-degree
//! and codegree measurements everything else is checked against.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Color ids are positive; 0 is reserved for "not activated".
pub type Color = u32;

/// Immutable simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Build from an edge list. Loops, duplicate edges and out-of-range
    /// endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex { vertex: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            if let Some(w) = nb.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Argument(format!(
                    "duplicate edge {}-{}",
                    v.min(w[0]),
                    v.max(w[0])
                )));
            }
        }
        Ok(Graph { adj })
    }

    /// Build from per-vertex neighbor sets that are already symmetric.
    pub(crate) fn from_sets(sets: Vec<BTreeSet<usize>>) -> Self {
        Graph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `vertices`; vertex `i` of the result is
    /// `vertices[i]` of `self`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Graph { adj }
    }

    /// Same vertex set, keeping only edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            if keep(u, v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Graph { adj }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }
}

/// Per-vertex sorted, duplicate-free lists of positive colors.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    /// Lists are sorted on the way in; zero colors and repeats are errors.
    pub fn new(mut lists: Vec<Vec<Color>>) -> Result<Self> {
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if list.first() == Some(&0) {
                return Err(Error::Argument(format!(
                    "vertex {v}: color 0 is reserved"
                )));
            }
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Argument(format!(
                    "vertex {v}: color {} listed twice",
                    w[0]
                )));
            }
        }
        Ok(ListAssignment { lists })
    }

    /// Every vertex gets `1..=q`.
    pub fn full_palette(n: usize, q: Color) -> Self {
        ListAssignment {
            lists: vec![(1..=q).collect(); n],
        }
    }

    pub(crate) fn from_sorted(lists: Vec<Vec<Color>>) -> Self {
        debug_assert!(lists
            .iter()
            .all(|l| l.windows(2).all(|w| w[0] < w[1]) && l.first() != Some(&0)));
        ListAssignment { lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: usize) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn contains(&self, v: usize, c: Color) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_color(&self) -> Color {
        self.lists
            .iter()
            .filter_map(|l| l.last().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, vertices: &[usize]) -> ListAssignment {
        ListAssignment {
            lists: vertices.iter().map(|&v| self.lists[v].clone()).collect(),
        }
    }

    pub fn intersects(&self, u: usize, v: usize) -> bool {
        let (a, b) = (&self.lists[u], &self.lists[v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Partial map vertex → color.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    pub fn new(n: usize) -> Self {
        PartialColoring {
            colors: vec![None; n],
        }
    }

    pub fn from_vec(colors: Vec<Option<Color>>) -> Self {
        PartialColoring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|_| v))
    }

    pub fn domain_size(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn uncolored(&self) -> Vec<usize> {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.is_none().then_some(v))
            .collect()
    }

    pub fn colors_used(&self) -> usize {
        self.colors.iter().flatten().collect::<BTreeSet<_>>().len()
    }
}

/// Parameters of a (d, ℓ, s, η) graph-list pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub d: f64,
    pub ell: usize,
    pub s: usize,
    pub eta: f64,
    pub codegree_exponent: f64,
}

impl PairParams {
    /// Codegree exponent defaults to `16 s`.
    pub fn new(d: f64, ell: usize, s: usize, eta: f64) -> Self {
        PairParams {
            d,
            ell,
            s,
            eta,
            codegree_exponent: 16.0 * s as f64,
        }
    }

    pub fn with_codegree_exponent(mut self, exponent: f64) -> Self {
        self.codegree_exponent = exponent;
        self
    }

    pub fn codegree_bound(&self) -> f64 {
        codegree_bound(self.d, self.codegree_exponent)
    }
}

/// `d / ln(d)^exponent`; vacuous (infinite) when `ln d <= 0`.
pub fn codegree_bound(d: f64, exponent: f64) -> f64 {
    let l = d.ln();
    if l <= 0.0 {
        f64::INFINITY
    } else {
        d / l.powf(exponent)
    }
}

/// `|{u ∈ N(v) : c ∈ L(u)}|`.
pub fn color_degree(g: &Graph, l: &ListAssignment, v: usize, c: Color) -> Result<usize> {
    g.check_vertex(v)?;
    Ok(g.neighbors(v).iter().filter(|&&u| l.contains(u, c)).count())
}

/// Number of common neighbors of `vs` whose lists contain `c`.
pub fn s_color_codegree(g: &Graph, l: &ListAssignment, vs: &[usize], c: Color) -> Result<usize> {
    for &v in vs {
        g.check_vertex(v)?;
    }
    let distinct: BTreeSet<_> = vs.iter().collect();
    if distinct.len() != vs.len() {
        return Err(Error::Argument(format!("repeated vertex in tuple {vs:?}")));
    }
    let Some((&first, rest)) = vs.split_first() else {
        return Err(Error::Argument("empty tuple".into()));
    };
    Ok(g.neighbors(first)
        .iter()
        .filter(|&&u| l.contains(u, c) && rest.iter().all(|&v| g.has_edge(v, u)))
        .count())
}

/// Color-degrees of every `(v, c ∈ L(v))`, aligned with `l.list(v)`.
pub fn color_degrees(g: &Graph, l: &ListAssignment) -> Vec<Vec<usize>> {
    (0..g.n())
        .map(|v| {
            let lv = l.list(v);
            let mut counts = vec![0usize; lv.len()];
            for &u in g.neighbors(v) {
                let lu = l.list(u);
                let (mut i, mut j) = (0, 0);
                while i < lv.len() && j < lu.len() {
                    match lv[i].cmp(&lu[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            counts[i] += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
            counts
        })
        .collect()
}

pub fn max_color_degree(g: &Graph, l: &ListAssignment) -> usize {
    color_degrees(g, l)
        .iter()
        .flat_map(|c| c.iter().copied())
        .max()
        .unwrap_or(0)
}

/// Visit every sorted distinct `s`-tuple and color `c` held by all tuple
/// members that has at least one common neighbor holding `c`, with that
/// count. With `lists = None` the graph is treated as uncolored (color 0).
///
/// Tuples are discovered from neighborhoods, never by enumerating all
/// `s`-subsets of `V`.
pub fn scan_codegrees<F>(g: &Graph, lists: Option<&ListAssignment>, s: usize, mut visit: F)
where
    F: FnMut(&[usize], Color, usize),
{
    assert!(s >= 2, "codegree arity must be at least 2");
    let n = g.n();
    let holds = |v: usize, c: Color| lists.is_none_or(|l| l.contains(v, c));
    let mut counts = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut tuple: Vec<usize> = Vec::with_capacity(s);

    #[allow(clippy::too_many_arguments)]
    fn extend<F, H>(
        g: &Graph,
        s: usize,
        c: Color,
        holds: &H,
        tuple: &mut Vec<usize>,
        common: &[usize],
        counts: &mut [usize],
        touched: &mut Vec<usize>,
        visit: &mut F,
    ) where
        F: FnMut(&[usize], Color, usize),
        H: Fn(usize, Color) -> bool,
    {
        let last = *tuple.last().unwrap();
        for &w in common {
            for &v in g.neighbors(w) {
                if v > last && holds(v, c) {
                    if counts[v] == 0 {
                        touched.push(v);
                    }
                    counts[v] += 1;
                }
            }
        }
        touched.sort_unstable();
        let candidates: Vec<(usize, usize)> = touched.iter().map(|&v| (v, counts[v])).collect();
        for &v in touched.iter() {
            counts[v] = 0;
        }
        touched.clear();
        for (v, count) in candidates {
            tuple.push(v);
            if tuple.len() == s {
                visit(tuple, c, count);
            } else {
                let next: Vec<usize> = common
                    .iter()
                    .copied()
                    .filter(|&w| g.has_edge(v, w))
                    .collect();
                extend(g, s, c, holds, tuple, &next, counts, touched, visit);
            }
            tuple.pop();
        }
    }

    for v1 in 0..n {
        let colors: Vec<Color> = match lists {
            Some(l) => l.list(v1).to_vec(),
            None => vec![0],
        };
        for c in colors {
            let common: Vec<usize> = g
                .neighbors(v1)
                .iter()
                .copied()
                .filter(|&w| holds(w, c))
                .collect();
            if common.is_empty() {
                continue;
            }
            tuple.clear();
            tuple.push(v1);
            extend(
                g,
                s,
                c,
                &holds,
                &mut tuple,
                &common,
                &mut counts,
                &mut touched,
                &mut visit,
            );
        }
    }
}

/// Maximum s-codegree of the plain graph (common neighbors of s vertices).
pub fn max_s_codegree(g: &Graph, s: usize) -> usize {
    let mut best = 0;
    scan_codegrees(g, None, s, |_, _, k| best = best.max(k));
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub max_color_degree: usize,
    pub max_codegree: usize,
    pub min_list_size: usize,
}

pub fn max_metrics(g: &Graph, l: &ListAssignment, s: usize) -> Metrics {
    let mut max_codegree = 0;
    scan_codegrees(g, Some(l), s, |_, _, k| max_codegree = max_codegree.max(k));
    Metrics {
        max_color_degree: max_color_degree(g, l),
        max_codegree,
        min_list_size: l.min_size(),
    }
}

/// Trim every list to its `ell` smallest colors, then drop edges whose
/// endpoint lists are disjoint.
pub fn preprocess(g: &Graph, l: &ListAssignment, ell: usize) -> Result<(Graph, ListAssignment)> {
    if let Some((v, list)) = l.lists().iter().enumerate().find(|(_, x)| x.len() < ell) {
        return Err(Error::ListTooShort {
            vertex: v,
            size: list.len(),
            required: ell,
        });
    }
    let trimmed = ListAssignment::from_sorted(l.lists().iter().map(|x| x[..ell].to_vec()).collect());
    let pruned = g.filter_edges(|u, v| trimmed.intersects(u, v));
    Ok((pruned, trimmed))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairViolation {
    EllNotAboveActivation { ell: usize, bound: f64 },
    EllNotBelowEightD { ell: usize, bound: f64 },
    EtaWindow { eta: f64, lower: f64, upper: f64 },
    ListSize { vertex: usize, size: usize, ell: usize },
    ColorDegree { vertex: usize, color: Color, degree: usize, d: f64 },
    Codegree { tuple: Vec<usize>, color: Color, codegree: usize, bound: f64 },
    DisjointEdge { u: usize, v: usize },
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::EllNotAboveActivation { ell, bound } => {
                write!(f, "4ηd < ℓ fails: ℓ = {ell}, 4ηd = {bound}")
            }
            PairViolation::EllNotBelowEightD { ell, bound } => {
                write!(f, "ℓ < 8d fails: ℓ = {ell}, 8d = {bound}")
            }
            PairViolation::EtaWindow { eta, lower, upper } => {
                write!(f, "η = {eta} outside ({lower}, {upper})")
            }
            PairViolation::ListSize { vertex, size, ell } => {
                write!(f, "|L({vertex})| = {size} ≠ ℓ = {ell}")
            }
            PairViolation::ColorDegree {
                vertex,
                color,
                degree,
                d,
            } => write!(f, "d_L({vertex}, {color}) = {degree} > d = {d}"),
            PairViolation::Codegree {
                tuple,
                color,
                codegree,
                bound,
            } => write!(f, "codegree of {tuple:?} at color {color} is {codegree} > {bound}"),
            PairViolation::DisjointEdge { u, v } => {
                write!(f, "edge {u}-{v} joins disjoint lists")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub violations: Vec<PairViolation>,
    pub warnings: Vec<PairViolation>,
}

impl PairReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every bullet of the (d, ℓ, s, η) pair definition. In non-strict
/// mode the η window and the codegree bound are demoted to warnings.
pub fn validate_pair(g: &Graph, l: &ListAssignment, p: &PairParams, strict: bool) -> PairReport {
    let mut violations = Vec::new();
    let mut soft = Vec::new();
    let ell = p.ell as f64;
    if 4.0 * p.eta * p.d >= ell {
        violations.push(PairViolation::EllNotAboveActivation {
            ell: p.ell,
            bound: 4.0 * p.eta * p.d,
        });
    }
    if ell >= 8.0 * p.d {
        violations.push(PairViolation::EllNotBelowEightD {
            ell: p.ell,
            bound: 8.0 * p.d,
        });
    }
    let log_d = p.d.ln();
    let (lower, upper) = (1.0 / (log_d * log_d), 1.0 / (4.0 * log_d));
    if !(log_d > 0.0 && lower < p.eta && p.eta < upper) {
        soft.push(PairViolation::EtaWindow {
            eta: p.eta,
            lower,
            upper,
        });
    }
    for v in 0..g.n() {
        if l.list(v).len() != p.ell {
            violations.push(PairViolation::ListSize {
                vertex: v,
                size: l.list(v).len(),
                ell: p.ell,
            });
        }
    }
    for (v, degs) in color_degrees(g, l).iter().enumerate() {
        for (&c, &k) in l.list(v).iter().zip(degs) {
            if k as f64 > p.d {
                violations.push(PairViolation::ColorDegree {
                    vertex: v,
                    color: c,
                    degree: k,
                    d: p.d,
                });
            }
        }
    }
    let bound = p.codegree_bound();
    scan_codegrees(g, Some(l), p.s, |t, c, k| {
        if k as f64 > bound {
            soft.push(PairViolation::Codegree {
                tuple: t.to_vec(),
                color: c,
                codegree: k,
                bound,
            });
        }
    });
    for (u, v) in g.edges() {
        if !l.intersects(u, v) {
            violations.push(PairViolation::DisjointEdge { u, v });
        }
    }
    if strict {
        violations.extend(soft);
        PairReport {
            violations,
            warnings: Vec::new(),
        }
    } else {
        PairReport {
            violations,
            warnings: soft,
        }
    }
}

/// First monochromatic edge under `phi`, if any.
pub fn find_conflict(g: &Graph, phi: &PartialColoring) -> Option<(usize, usize)> {
    g.edges().find(|&(u, v)| match (phi.get(u), phi.get(v)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    })
}

/// First vertex whose assigned color is outside its list.
pub fn find_list_violation(l: &ListAssignment, phi: &PartialColoring) -> Option<usize> {
    (0..phi.n()).find(|&v| matches!(phi.get(v), Some(c) if v >= l.n() || !l.contains(v, c)))
}

pub fn is_proper(g: &Graph, phi: &PartialColoring) -> bool {
    phi.n() == g.n() && find_conflict(g, phi).is_none()
}

/// Properness plus list membership.
pub fn is_proper_list_coloring(g: &Graph, l: &ListAssignment, phi: &PartialColoring) -> bool {
    is_proper(g, phi) && find_list_violation(l, phi).is_none()
}
