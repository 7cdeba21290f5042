//! Degree- and codegree-halving bipartitions and the partition-then-color
//! pipeline built on them.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{max_metrics, max_s_codegree, scan_codegrees, Color, Graph, ListAssignment, PartialColoring};
use crate::nibble::{NibbleConfig, OverrideParams};
use crate::pipeline::{list_color, PipelineConfig};
use crate::rng::{derive_seed, rng_from_seed};

/// `x/2 + x^{2/3}`.
pub fn halve(x: f64) -> f64 {
    x / 2.0 + x.powf(2.0 / 3.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSchedule {
    pub delta: f64,
    pub zeta: f64,
    pub eps: f64,
    pub s: usize,
    /// Number of parts, a power of two.
    pub k: usize,
    pub i_star: usize,
    pub d_seq: Vec<f64>,
    pub t_seq: Vec<f64>,
    /// `t_i > √d_i` per level.
    pub sqrt_ok: Vec<bool>,
}

impl PartitionSchedule {
    pub fn sqrt_condition_holds(&self) -> bool {
        self.sqrt_ok.iter().all(|&b| b)
    }
}

/// `k` is the smallest power of two with `Δ/k ≤ exp((1 − ε/4) ζ^{−1/(16s)})`
/// and the sequences run to depth `log₂ k + 1`.
pub fn build_schedule(delta: f64, zeta: f64, eps: f64, s: usize) -> Result<PartitionSchedule> {
    if !(delta >= 1.0) {
        return Err(Error::Argument(format!("Δ = {delta} must be at least 1")));
    }
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::Argument(format!("ζ = {zeta} outside (0, 1]")));
    }
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(Error::Argument(format!("ε = {eps} outside (0, 1/3)")));
    }
    if s < 2 {
        return Err(Error::Argument("s must be at least 2".into()));
    }
    let target = ((1.0 - eps / 4.0) * zeta.powf(-1.0 / (16.0 * s as f64))).exp();
    let mut k = 1usize;
    while delta / k as f64 > target {
        k *= 2;
    }
    let i_star = k.trailing_zeros() as usize + 1;
    let mut d_seq = vec![delta];
    let mut t_seq = vec![zeta * delta];
    for _ in 1..i_star {
        d_seq.push(halve(*d_seq.last().unwrap()));
        t_seq.push(halve(*t_seq.last().unwrap()));
    }
    let sqrt_ok = d_seq.iter().zip(&t_seq).map(|(d, t)| *t > d.sqrt()).collect();
    Ok(PartitionSchedule {
        delta,
        zeta,
        eps,
        s,
        k,
        i_star,
        d_seq,
        t_seq,
        sqrt_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub parts: [Vec<usize>; 2],
    /// Resampling passes used.
    pub retries: usize,
}

/// Split `V(g)` so both induced parts have degree at most `halve(d)` and
/// s-codegree at most `halve(t)`.
///
/// Starts from a uniform split; each pass collects every bad event (a
/// vertex with more than `halve(d)` neighbors on one side, or an s-tuple
/// with more than `halve(t)` common neighbors on one side) and redraws the
/// sides of the union of their variable sets in ascending order.
pub fn random_bipartition(g: &Graph, s: usize, d: f64, t: f64, seed: u64, max_retries: usize) -> Result<Bipartition> {
    let n = g.n();
    let (bd, bt) = (halve(d), halve(t));
    let mut heavy: Vec<Vec<usize>> = Vec::new();
    scan_codegrees(g, None, s, |tuple, _, k| {
        if k as f64 > bt {
            let common = g.neighbors(tuple[0])
                .iter()
                .copied()
                .filter(|&w| tuple[1..].iter().all(|&v| g.has_edge(v, w)))
                .collect();
            heavy.push(common);
        }
    });
    let mut rng = rng_from_seed(seed);
    let mut side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let over = |vars: &[usize], side: &[bool], bound: f64| {
        let ones = vars.iter().filter(|&&u| side[u]).count();
        ones as f64 > bound || (vars.len() - ones) as f64 > bound
    };
    let mut retries = 0;
    loop {
        let mut redraw = vec![false; n];
        let mut bad = 0;
        for v in 0..n {
            if over(g.neighbors(v), &side, bd) {
                bad += 1;
                for &u in g.neighbors(v) {
                    redraw[u] = true;
                }
            }
        }
        for common in &heavy {
            if over(common, &side, bt) {
                bad += 1;
                for &u in common {
                    redraw[u] = true;
                }
            }
        }
        if bad == 0 {
            break;
        }
        if retries == max_retries {
            return Err(Error::PartitionRetries {
                retries,
                surviving: bad,
            });
        }
        retries += 1;
        for v in (0..n).filter(|&v| redraw[v]) {
            side[v] = rng.gen();
        }
    }
    let parts = [
        (0..n).filter(|&v| !side[v]).collect(),
        (0..n).filter(|&v| side[v]).collect(),
    ];
    Ok(Bipartition { parts, retries })
}

/// Exact check of a part against `(halve(d), halve(t))`.
pub fn part_within_bounds(g: &Graph, part: &[usize], s: usize, d: f64, t: f64) -> bool {
    let h = g.induced(part);
    let m = max_metrics(&h, &ListAssignment::full_palette(h.n(), 1), s);
    m.max_color_degree as f64 <= halve(d) && m.max_codegree as f64 <= halve(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartPalette {
    /// Colors used by the part are `offset + 1 ..= offset + size`.
    pub offset: Color,
    pub size: Color,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakVuOutcome {
    pub coloring: PartialColoring,
    pub schedule: PartitionSchedule,
    pub parts: Vec<Vec<usize>>,
    pub palettes: Vec<PartPalette>,
    pub palette_total: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakVuConfig {
    pub zeta: f64,
    pub eps: f64,
    pub s: usize,
    pub max_retries: usize,
    pub nibble: OverrideParams,
}

impl WeakVuConfig {
    pub fn new(zeta: f64, eps: f64, s: usize) -> Self {
        WeakVuConfig {
            zeta,
            eps,
            s,
            max_retries: 100,
            nibble: OverrideParams::default(),
        }
    }
}

/// Split `g` into `k` parts by repeated bipartition, then color each part
/// from its own palette, a disjoint integer range.
///
/// A part's palette starts at `⌈(1+ε) d / ln d⌉` for its measured maximum
/// degree `d` and grows by a quarter after each failed attempt, up to
/// `d + 1`.
pub fn weak_vu_pipeline(g: &Graph, cfg: &WeakVuConfig, seed: u64) -> Result<WeakVuOutcome> {
    let delta = g.max_degree().max(1) as f64;
    let schedule = build_schedule(delta, cfg.zeta, cfg.eps, cfg.s)?;
    let codeg = max_s_codegree(g, cfg.s) as f64;
    if codeg > schedule.t_seq[0] {
        return Err(Error::Precondition(format!(
            "s-codegree {codeg} exceeds ζΔ = {}",
            schedule.t_seq[0]
        )));
    }
    let mut parts: Vec<Vec<usize>> = vec![(0..g.n()).collect()];
    for level in 0..schedule.i_star - 1 {
        let (d, t) = (schedule.d_seq[level], schedule.t_seq[level]);
        let mut next = Vec::with_capacity(parts.len() * 2);
        for (j, part) in parts.iter().enumerate() {
            let h = g.induced(part);
            let split = random_bipartition(&h, cfg.s, d, t, derive_seed(seed, &[1, level as u64, j as u64]), cfg.max_retries)
                .map_err(|e| Error::Part {
                    part: j,
                    source: Box::new(e),
                })?;
            for side in split.parts {
                next.push(side.iter().map(|&i| part[i]).collect());
            }
        }
        parts = next;
    }

    let mut coloring = PartialColoring::new(g.n());
    let mut palettes = Vec::with_capacity(parts.len());
    let mut offset: Color = 0;
    for (j, part) in parts.iter().enumerate() {
        let h = g.induced(part);
        let dp = h.max_degree();
        let cap = dp as Color + 1;
        let mut q = if dp <= 2 {
            cap
        } else {
            (((1.0 + cfg.eps) * dp as f64 / (dp as f64).ln()).ceil() as Color).clamp(1, cap)
        };
        let mut attempt = 0u64;
        let colored = loop {
            let l = ListAssignment::full_palette(h.n(), q);
            let pc = PipelineConfig::new(NibbleConfig::override_mode(cfg.eps, cfg.s, cfg.nibble));
            match list_color(&h, &l, &pc, derive_seed(seed, &[2, j as u64, attempt])) {
                Ok(out) => break out.coloring,
                Err(e) if q >= cap => {
                    return Err(Error::Part {
                        part: j,
                        source: Box::new(e),
                    })
                }
                Err(_) => {
                    q = ((q as f64 * 1.25).ceil() as Color).min(cap);
                    attempt += 1;
                }
            }
        };
        for (i, &v) in part.iter().enumerate() {
            coloring.set(v, offset + colored.get(i).unwrap());
        }
        palettes.push(PartPalette { offset, size: q });
        offset += q;
    }
    Ok(WeakVuOutcome {
        coloring,
        schedule,
        parts,
        palettes,
        palette_total: offset as usize,
    })
}
