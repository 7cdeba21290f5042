use serde::{Deserialize, Serialize};

/// `exp(−δ² μ / (2 + δ))`.
pub fn chernoff_bound(mu: f64, delta: f64) -> f64 {
    (-delta * delta * mu / (2.0 + delta)).exp()
}

/// Symmetric local lemma condition `4 p d ≤ 1`.
pub fn lll_ok(p: f64, d: f64) -> bool {
    4.0 * p * d <= 1.0
}

/// `(t−1)^{1/s} n m^{1−1/s} + (s−1) m` for parts of sizes `m` (holding the
/// `t`-set) and `n` (holding the `s`-set).
pub fn kst_bound(m: usize, n: usize, s: usize, t: usize) -> f64 {
    let (m, n, sf, tf) = (m as f64, n as f64, s as f64, t as f64);
    (tf - 1.0).powf(1.0 / sf) * n * m.powf(1.0 - 1.0 / sf) + (sf - 1.0) * m
}

/// Whether some `t` vertices of the first part and `s` of the second span a
/// complete bipartite graph. `cols[b]` is the neighborhood of second-part
/// vertex `b` as a bitmask over the first part.
fn contains_kst(cols: &[u32], s: usize, t: usize) -> bool {
    let n = cols.len();
    (0u32..1 << n)
        .filter(|y| y.count_ones() as usize == s)
        .any(|y| {
            let common = (0..n).filter(|b| y >> b & 1 == 1).fold(u32::MAX, |acc, b| acc & cols[b]);
            common.count_ones() as usize >= t
        })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KstRow {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    /// Most edges over all `K_{s,t}`-free graphs.
    pub max_free_edges: usize,
    pub bound: f64,
    pub free_graphs: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KstReport {
    pub graphs: usize,
    pub rows: Vec<KstRow>,
}

impl KstReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }
}

/// Every bipartite graph with parts of sizes `1..=max_part`, every
/// `2 ≤ s, t ≤ max_st`: `K_{s,t}`-free implies fewer edges than the bound.
pub fn verify_kst(max_part: usize, max_st: usize) -> KstReport {
    assert!(max_part <= 5, "exhaustive search is limited to parts of size 5");
    let mut rows = Vec::new();
    let mut graphs = 0;
    for m in 1..=max_part {
        for n in 1..=max_part {
            let total = 1u64 << (m * n);
            graphs += total as usize;
            for s in 2..=max_st {
                for t in 2..=max_st {
                    let mut row = KstRow {
                        m,
                        n,
                        s,
                        t,
                        max_free_edges: 0,
                        bound: kst_bound(m, n, s, t),
                        free_graphs: 0,
                        violations: 0,
                    };
                    for g in 0..total {
                        let cols: Vec<u32> = (0..n).map(|b| ((g >> (b * m)) & ((1 << m) - 1)) as u32).collect();
                        if contains_kst(&cols, s, t) {
                            continue;
                        }
                        let e = g.count_ones() as usize;
                        row.free_graphs += 1;
                        row.max_free_edges = row.max_free_edges.max(e);
                        if e as f64 >= row.bound {
                            row.violations += 1;
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    KstReport { graphs, rows }
}
