//! Test-graph and list generators with controllable degree and codegree.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{scan_codegrees, Color, Graph, ListAssignment};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gnp,
    BipartiteRandom,
    BlowupCycle,
    KstFreeSample,
    Fixture,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListSpec {
    pub q: Color,
    pub ell: usize,
}

/// Generator input, also the `gen --spec` JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    #[serde(default)]
    pub n: usize,
    /// Target maximum degree; sets the edge probability unless `p` is given.
    #[serde(default)]
    pub target_degree: f64,
    #[serde(default)]
    pub p: Option<f64>,
    /// Maximum allowed s-codegree; `None` means uncapped.
    #[serde(default)]
    pub codegree_cap: Option<usize>,
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default)]
    pub seed: u64,
    /// Fixture name for `family = "fixture"`.
    #[serde(default)]
    pub fixture: Option<String>,
    /// Optional list assignment to generate alongside the graph.
    #[serde(default)]
    pub lists: Option<ListSpec>,
}

fn default_s() -> usize {
    2
}

impl GenSpec {
    pub fn gnp(n: usize, p: f64, seed: u64) -> Self {
        GenSpec {
            family: Family::Gnp,
            n,
            target_degree: p * n.saturating_sub(1) as f64,
            p: Some(p),
            codegree_cap: None,
            s: 2,
            seed,
            fixture: None,
            lists: None,
        }
    }

    pub fn fixture(name: &str) -> Self {
        GenSpec {
            family: Family::Fixture,
            n: 0,
            target_degree: 0.0,
            p: None,
            codegree_cap: None,
            s: 2,
            seed: 0,
            fixture: Some(name.to_string()),
            lists: None,
        }
    }

    fn edge_probability(&self, pool: usize) -> Result<f64> {
        let p = match self.p {
            Some(p) => p,
            None if pool == 0 => 0.0,
            None => self.target_degree / pool as f64,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Argument(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(p)
    }
}

pub const FIXTURES: [&str; 4] = ["c5", "petersen", "k13", "rook3x3"];

pub fn fixture(name: &str) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = match name.to_ascii_lowercase().as_str() {
        "c5" => (0..5).map(|i| (i, (i + 1) % 5)).collect(),
        "petersen" => {
            let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
            e.extend((0..5).map(|i| (i, i + 5)));
            e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
            e
        }
        "k13" => vec![(0, 1), (0, 2), (0, 3)],
        "rook3x3" => {
            let mut e = Vec::new();
            for a in 0..9 {
                for b in a + 1..9 {
                    if a / 3 == b / 3 || a % 3 == b % 3 {
                        e.push((a, b));
                    }
                }
            }
            e
        }
        other => return Err(Error::Argument(format!("unknown fixture {other:?}"))),
    };
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::from_edges(n, &edges)
}

/// Deterministic in `spec` (including its seed).
pub fn generate(spec: &GenSpec) -> Result<Graph> {
    if spec.family == Family::Fixture {
        let name = spec
            .fixture
            .as_deref()
            .ok_or_else(|| Error::Argument("fixture family needs a fixture name".into()))?;
        return fixture(name);
    }
    if spec.n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if spec.s < 2 {
        return Err(Error::Argument("codegree arity s must be at least 2".into()));
    }
    let mut rng = rng_from_seed(spec.seed);
    let n = spec.n;
    let mut sets = vec![BTreeSet::new(); n];
    let add = |u: usize, v: usize, sets: &mut Vec<BTreeSet<usize>>| {
        sets[u].insert(v);
        sets[v].insert(u);
    };
    match spec.family {
        Family::Gnp => {
            let p = spec.edge_probability(n - 1)?;
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        add(u, v, &mut sets);
                    }
                }
            }
        }
        Family::BipartiteRandom | Family::KstFreeSample => {
            let half = n / 2;
            let p = spec.edge_probability(n - half)?;
            for u in 0..half {
                for v in half..n {
                    if rng.gen_bool(p) {
                        add(u, v, &mut sets);
                    }
                }
            }
        }
        Family::BlowupCycle => {
            let blob = (spec.target_degree / 2.0).ceil().max(1.0) as usize;
            let k = (n / blob).max(3);
            let group = |v: usize| v * k / n;
            for u in 0..n {
                for v in u + 1..n {
                    let (a, b) = (group(u), group(v));
                    if (a + 1) % k == b || (b + 1) % k == a {
                        add(u, v, &mut sets);
                    }
                }
            }
        }
        Family::Fixture => unreachable!(),
    }
    let cap = match spec.family {
        Family::KstFreeSample => Some(spec.codegree_cap.unwrap_or(1)),
        _ => spec.codegree_cap,
    };
    let mut g = Graph::from_sets(sets);
    let sampled = g.m();
    if let Some(cap) = cap {
        g = enforce_codegree_cap(&g, spec.s, cap);
    }
    if sampled > 0 && g.m() == 0 {
        return Err(Error::Infeasible(format!(
            "codegree cap {cap:?} leaves no edges while target degree is {}",
            spec.target_degree
        )));
    }
    Ok(g)
}

/// Greedy edge deletion until every s-codegree is at most `cap`.
///
/// Violating tuples are processed in lexicographic order; for each, edges
/// from the tuple to its common neighbors are deleted in lexicographic edge
/// order until the tuple complies. Deletions only lower codegrees, so one
/// pass suffices.
pub fn enforce_codegree_cap(g: &Graph, s: usize, cap: usize) -> Graph {
    let mut violating = Vec::new();
    scan_codegrees(g, None, s, |t, _, k| {
        if k > cap {
            violating.push(t.to_vec());
        }
    });
    let mut sets: Vec<BTreeSet<usize>> = (0..g.n())
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    for tuple in violating {
        let mut common: BTreeSet<usize> = sets[tuple[0]].clone();
        for &v in &tuple[1..] {
            common.retain(|w| sets[v].contains(w));
        }
        if common.len() <= cap {
            continue;
        }
        let mut candidates: Vec<(usize, usize, usize)> = common
            .iter()
            .flat_map(|&w| tuple.iter().map(move |&v| (v.min(w), v.max(w), w)))
            .collect();
        candidates.sort_unstable();
        for (a, b, w) in candidates {
            if common.len() <= cap {
                break;
            }
            if !common.contains(&w) {
                continue;
            }
            sets[a].remove(&b);
            sets[b].remove(&a);
            common.remove(&w);
        }
    }
    Graph::from_sets(sets)
}

/// Independent uniform `ell`-subsets of `1..=q`.
pub fn uniform_lists(n: usize, q: Color, ell: usize, seed: u64) -> Result<ListAssignment> {
    if ell > q as usize {
        return Err(Error::Argument(format!("list size {ell} exceeds palette {q}")));
    }
    let mut rng = rng_from_seed(seed);
    let lists = (0..n)
        .map(|_| {
            let mut l: Vec<Color> = sample(&mut rng, q as usize, ell)
                .into_iter()
                .map(|i| i as Color + 1)
                .collect();
            l.sort_unstable();
            l
        })
        .collect();
    Ok(ListAssignment::from_sorted(lists))
}

/// Lists requested by `spec.lists`, seeded independently of the graph.
pub fn generate_lists(spec: &GenSpec, n: usize) -> Result<Option<ListAssignment>> {
    spec.lists
        .as_ref()
        .map(|ls| uniform_lists(n, ls.q, ls.ell, derive_seed(spec.seed, &[0x11575])))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::max_s_codegree;

    #[test]
    fn fixtures_have_expected_shape() {
        let c5 = fixture("C5").unwrap();
        assert_eq!((c5.n(), c5.m(), c5.max_degree()), (5, 5, 2));
        let p = fixture("petersen").unwrap();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
        // girth 5: no two vertices share two neighbors
        assert_eq!(max_s_codegree(&p, 2), 1);
        let r = fixture("rook3x3").unwrap();
        assert_eq!((r.n(), r.m()), (9, 18));
        assert_eq!(fixture("k13").unwrap().m(), 3);
        assert!(fixture("k5").is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        let spec = GenSpec::gnp(300, 0.05, 42);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GenSpec::gnp(300, 0.05, 43);
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn codegree_cap_is_enforced() {
        for seed in 0..5 {
            let mut spec = GenSpec::gnp(120, 0.2, seed);
            spec.codegree_cap = Some(3);
            let g = generate(&spec).unwrap();
            assert!(max_s_codegree(&g, 2) <= 3);
            assert!(g.m() > 0);
        }
        let mut spec = GenSpec::gnp(60, 0.3, 1);
        spec.codegree_cap = Some(2);
        spec.s = 3;
        assert!(max_s_codegree(&generate(&spec).unwrap(), 3) <= 2);
    }

    #[test]
    fn kst_free_sample_is_c4_free() {
        let spec = GenSpec {
            family: Family::KstFreeSample,
            n: 80,
            target_degree: 10.0,
            ..GenSpec::gnp(80, 0.0, 9)
        };
        let spec = GenSpec { p: None, ..spec };
        let g = generate(&spec).unwrap();
        assert!(max_s_codegree(&g, 2) <= 1);
    }

    #[test]
    fn blowup_cycle_has_high_codegree() {
        let spec = GenSpec {
            family: Family::BlowupCycle,
            n: 30,
            target_degree: 6.0,
            p: None,
            ..GenSpec::gnp(30, 0.0, 0)
        };
        let g = generate(&spec).unwrap();
        assert_eq!(g.max_degree(), 6);
        assert_eq!(max_s_codegree(&g, 2), 6);
    }

    #[test]
    fn degenerate_caps_and_probabilities() {
        let mut spec = GenSpec::gnp(10, 0.9, 3);
        spec.codegree_cap = Some(0);
        spec.s = 2;
        // cap 0 at s = 2 still allows a matching
        let g = generate(&spec).unwrap();
        assert!(g.max_degree() <= 1);

        let spec = GenSpec {
            family: Family::BipartiteRandom,
            p: Some(0.0),
            target_degree: 3.0,
            ..GenSpec::gnp(10, 0.0, 0)
        };
        assert_eq!(generate(&spec).unwrap().m(), 0);
    }

    #[test]
    fn lists_full_when_ell_equals_q() {
        let l = uniform_lists(5, 4, 4, 1).unwrap();
        assert!(l.lists().iter().all(|x| x == &[1, 2, 3, 4]));
        assert!(uniform_lists(5, 3, 4, 1).is_err());
        assert_eq!(uniform_lists(9, 10, 3, 7).unwrap(), uniform_lists(9, 10, 3, 7).unwrap());
    }

    #[test]
    fn uniform_lists_inclusion_frequency() {
        let trials = 10_000;
        let l = uniform_lists(trials, 10, 3, 2024).unwrap();
        let mut freq = [0usize; 10];
        for list in l.lists() {
            for &c in list {
                freq[c as usize - 1] += 1;
            }
        }
        let se = (0.3 * 0.7 / trials as f64).sqrt();
        let p: Vec<f64> = freq.iter().map(|&k| k as f64 / trials as f64).collect();
        for &pc in &p {
            assert!((pc - 0.3).abs() < 3.0 * se, "frequency {pc}");
        }
        for a in 0..10 {
            for b in a + 1..10 {
                assert!((p[a] - p[b]).abs() < 5.0 * se * 2f64.sqrt());
            }
        }
    }
}
