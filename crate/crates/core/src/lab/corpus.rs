use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::space::ProductSpace;
use super::witness::{verify_structure, ClauseStructure, TableStructure, WitnessStructure};
use crate::error::Result;
use crate::rng::{derive_seed, rng_from_seed, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureKind {
    Clauses(ClauseStructure),
    Table(TableStructure),
}

impl StructureKind {
    pub fn as_dyn(&self) -> &dyn WitnessStructure {
        match self {
            StructureKind::Clauses(c) => c,
            StructureKind::Table(t) => t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub space: ProductSpace,
    pub structure: StructureKind,
}

/// Two events of a product space, each a list of outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TalagrandCase {
    pub space: ProductSpace,
    pub a: Vec<Vec<usize>>,
    pub b: Vec<Vec<usize>>,
}

/// The `lab run` input.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    #[serde(default)]
    pub structures: Vec<CorpusEntry>,
    #[serde(default)]
    pub talagrand: Vec<TalagrandCase>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Random clause indicators, no exceptional set.
    Plain,
    /// Random clause indicators and a rare exceptional cylinder, possibly
    /// with overridden indicator values on it.
    Exceptional,
    /// Indicators vanish off a rare exceptional cylinder and all fire on
    /// it; `β` and `D` are declared tiny.
    Adversarial,
}

fn random_space(rng: &mut Rng, max_m: usize) -> ProductSpace {
    let m = rng.gen_range(2..=max_m.max(2));
    let mut size = 1usize;
    let supports = (0..m)
        .map(|_| {
            let k = if size < 1 << 12 && rng.gen_bool(0.2) { 3 } else { 2 };
            size *= k;
            let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
            let head: f64 = p[..k - 1].iter().sum();
            p[k - 1] = 1.0 - head;
            p
        })
        .collect();
    ProductSpace::new(supports).expect("normalized supports")
}

fn random_clause(rng: &mut Rng, space: &ProductSpace, max_len: usize) -> Vec<(usize, usize)> {
    let len = rng.gen_range(1..=max_len.min(space.m()));
    let mut trials = sample(rng, space.m(), len).into_vec();
    trials.sort_unstable();
    trials.into_iter().map(|j| (j, rng.gen_range(0..space.arity(j)))).collect()
}

/// A cylinder of probability at most 1/6, built from the least likely
/// values of randomly ordered trials.
fn rare_cylinder(rng: &mut Rng, space: &ProductSpace) -> Vec<(usize, usize)> {
    let order = sample(rng, space.m(), space.m()).into_vec();
    let mut clause = Vec::new();
    let mut p = 1.0;
    let target = rng.gen_range(0.005..1.0 / 6.0);
    for j in order {
        if p <= target {
            break;
        }
        let s = &space.supports()[j];
        let v = if rng.gen_bool(0.5) {
            rng.gen_range(0..s.len())
        } else {
            (0..s.len()).min_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap()
        };
        p *= s[v];
        clause.push((j, v));
    }
    clause.sort_unstable();
    clause
}

/// A random clause structure whose declared `β`, `D` are the exact maxima
/// (raised to 1 when they vanish), or tiny for the adversarial flavor.
pub fn random_structure(seed: u64, max_m: usize, max_n: usize, flavor: Flavor) -> Result<CorpusEntry> {
    let mut attempt = 0u64;
    loop {
        let mut rng = rng_from_seed(derive_seed(seed, &[attempt]));
        attempt += 1;
        let space = random_space(&mut rng, max_m);
        let n = rng.gen_range(1..=max_n.max(1));
        let mut st = ClauseStructure {
            indicators: vec![],
            exceptional: vec![],
            exceptional_values: None,
            beta: f64::MAX,
            d: f64::MAX,
        };
        match flavor {
            Flavor::Plain | Flavor::Exceptional => {
                st.indicators = (0..n)
                    .map(|_| {
                        let k = rng.gen_range(1..=3);
                        (0..k).map(|_| random_clause(&mut rng, &space, 3)).collect()
                    })
                    .collect();
            }
            Flavor::Adversarial => st.indicators = vec![vec![]; n],
        }
        if flavor != Flavor::Plain {
            st.exceptional = vec![rare_cylinder(&mut rng, &space)];
            st.exceptional_values = match flavor {
                Flavor::Adversarial => Some(vec![true; n]),
                _ if rng.gen_bool(0.5) => Some((0..n).map(|_| rng.gen_bool(0.7)).collect()),
                _ => None,
            };
        }
        let stats = match verify_structure(&space, &st) {
            Ok(s) => s,
            // the cylinder overshot 1/6; draw again
            Err(_) => continue,
        };
        let floor = if flavor == Flavor::Adversarial { 1e-6 } else { 1.0 };
        st.beta = (stats.actual_beta as f64).max(floor);
        st.d = (stats.actual_d as f64).max(floor);
        if flavor != Flavor::Plain && stats.pr_exceptional == 0.0 {
            continue;
        }
        return Ok(CorpusEntry {
            space,
            structure: StructureKind::Clauses(st),
        });
    }
}

fn hamming_ball(center: &[usize], radius: usize) -> Vec<Vec<usize>> {
    let m = center.len();
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize <= radius)
        .map(|mask| (0..m).map(|j| center[j] ^ ((mask >> j) & 1) as usize).collect())
        .collect()
}

/// A random proper subset of `{0,1}^m`; balls, scattered points or
/// cylinders.
fn random_event(rng: &mut Rng, m: usize) -> Vec<Vec<usize>> {
    loop {
        let mut e = random_event_once(rng, m);
        e.sort();
        e.dedup();
        if e.len() < 1 << m {
            return e;
        }
    }
}

fn random_event_once(rng: &mut Rng, m: usize) -> Vec<Vec<usize>> {
    let point = |rng: &mut Rng| (0..m).map(|_| rng.gen_range(0..2)).collect::<Vec<usize>>();
    match rng.gen_range(0..3) {
        0 => {
            let c = point(rng);
            hamming_ball(&c, rng.gen_range(0..=2.min(m)))
        }
        1 => {
            let k = rng.gen_range(1..=12);
            (0..k).map(|_| point(rng)).collect()
        }
        _ => {
            // cylinder on a few coordinates
            let k = rng.gen_range(1..=m.min(4));
            let fixed = sample(rng, m, k).into_vec();
            let vals: Vec<usize> = fixed.iter().map(|_| rng.gen_range(0..2)).collect();
            (0u32..1 << m)
                .map(|mask| (0..m).map(|j| ((mask >> j) & 1) as usize).collect::<Vec<usize>>())
                .filter(|x| fixed.iter().zip(&vals).all(|(&j, &v)| x[j] == v))
                .take(64)
                .collect()
        }
    }
}

/// Two random events, neither the whole space, over at most `max_m` fair
/// coins.
pub fn random_talagrand_case(seed: u64, max_m: usize) -> TalagrandCase {
    let mut rng = rng_from_seed(seed);
    let m = rng.gen_range(2..=max_m.max(2));
    let a = random_event(&mut rng, m);
    let b = random_event(&mut rng, m);
    TalagrandCase {
        space: ProductSpace::fair_coins(m),
        a,
        b,
    }
}

/// `count` structures cycling through the three flavors, plus
/// `talagrand` event pairs.
pub fn generate_corpus(count: usize, talagrand: usize, seed: u64, max_m: usize, max_n: usize) -> Result<Corpus> {
    let flavors = [Flavor::Plain, Flavor::Exceptional, Flavor::Adversarial];
    let structures = (0..count)
        .map(|k| random_structure(derive_seed(seed, &[0, k as u64]), max_m, max_n, flavors[k % 3]))
        .collect::<Result<_>>()?;
    let talagrand = (0..talagrand)
        .map(|k| random_talagrand_case(derive_seed(seed, &[1, k as u64]), 12))
        .collect();
    Ok(Corpus { structures, talagrand })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structures_verify_and_round_trip() {
        for (k, flavor) in [Flavor::Plain, Flavor::Exceptional, Flavor::Adversarial].into_iter().enumerate() {
            let e = random_structure(k as u64, 8, 10, flavor).unwrap();
            let st = e.structure.as_dyn();
            let stats = verify_structure(&e.space, st).unwrap();
            if flavor != Flavor::Plain {
                assert!(stats.pr_exceptional > 0.0 && stats.pr_exceptional <= 1.0 / 6.0);
            }
            let text = serde_json::to_string(&e).unwrap();
            let back: CorpusEntry = serde_json::from_str(&text).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = generate_corpus(6, 3, 4, 6, 5).unwrap();
        let b = generate_corpus(6, 3, 4, 6, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.talagrand.iter().all(|c| !c.a.is_empty() && !c.b.is_empty()));
        assert!(a.talagrand.iter().all(|c| c.a.len() < 1 << c.space.m()));
    }
}
