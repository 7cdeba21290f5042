use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::space::ProductSpace;
use crate::error::{Error, Result};

/// Indicators `R_1..R_n` over a product space with witness sets, an
/// exceptional set and declared bounds `β`, `D`.
pub trait WitnessStructure {
    fn n(&self) -> usize;
    fn indicator(&self, x: &[usize], i: usize) -> bool;
    /// Trial indices certifying `R_i(x) = 1`; empty when `R_i(x) = 0`.
    fn witness(&self, x: &[usize], i: usize) -> Vec<usize>;
    fn exceptional(&self, x: &[usize]) -> bool;
    fn beta(&self) -> f64;
    fn d_bound(&self) -> f64;

    fn value(&self, x: &[usize]) -> usize {
        (0..self.n()).filter(|&i| self.indicator(x, i)).count()
    }
}

/// A literal `X_trial = value`.
pub type Literal = (usize, usize);

/// Each indicator is a disjunction of conjunctions of literals; its witness
/// is the trial set of the first satisfied clause. The exceptional set is a
/// disjunction of conjunctions too, and on it the indicators may be
/// replaced by fixed values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseStructure {
    pub indicators: Vec<Vec<Vec<Literal>>>,
    #[serde(default)]
    pub exceptional: Vec<Vec<Literal>>,
    #[serde(default)]
    pub exceptional_values: Option<Vec<bool>>,
    pub beta: f64,
    pub d: f64,
}

fn satisfied(clause: &[Literal], x: &[usize]) -> bool {
    clause.iter().all(|&(j, v)| x[j] == v)
}

impl ClauseStructure {
    fn first_clause(&self, x: &[usize], i: usize) -> Option<&Vec<Literal>> {
        self.indicators[i].iter().find(|c| satisfied(c, x))
    }
}

impl WitnessStructure for ClauseStructure {
    fn n(&self) -> usize {
        self.indicators.len()
    }

    fn indicator(&self, x: &[usize], i: usize) -> bool {
        match &self.exceptional_values {
            Some(vals) if self.exceptional(x) => vals[i],
            _ => self.first_clause(x, i).is_some(),
        }
    }

    fn witness(&self, x: &[usize], i: usize) -> Vec<usize> {
        if !self.indicator(x, i) {
            return vec![];
        }
        let mut w: Vec<usize> = self.first_clause(x, i).map_or(vec![], |c| c.iter().map(|&(j, _)| j).collect());
        w.sort_unstable();
        w.dedup();
        w
    }

    fn exceptional(&self, x: &[usize]) -> bool {
        self.exceptional.iter().any(|c| satisfied(c, x))
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn d_bound(&self) -> f64 {
        self.d
    }
}

/// Fully tabulated structure: per outcome (row-major index), the indicators
/// equal to 1 and their witness sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableStructure {
    pub n: usize,
    pub arities: Vec<usize>,
    pub ones: Vec<Vec<usize>>,
    pub witnesses: Vec<Vec<Vec<usize>>>,
    pub exceptional: Vec<usize>,
    pub beta: f64,
    pub d: f64,
}

impl TableStructure {
    pub fn tabulate(space: &ProductSpace, st: &dyn WitnessStructure) -> Result<Self> {
        let mut ones = Vec::new();
        let mut witnesses = Vec::new();
        let mut exceptional = Vec::new();
        space.for_each(|x, _| {
            let idx = ones.len();
            let on: Vec<usize> = (0..st.n()).filter(|&i| st.indicator(x, i)).collect();
            witnesses.push(on.iter().map(|&i| st.witness(x, i)).collect());
            ones.push(on);
            if st.exceptional(x) {
                exceptional.push(idx);
            }
        })?;
        Ok(TableStructure {
            n: st.n(),
            arities: (0..space.m()).map(|j| space.arity(j)).collect(),
            ones,
            witnesses,
            exceptional,
            beta: st.beta(),
            d: st.d_bound(),
        })
    }

    fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.arities).fold(0, |acc, (&v, &k)| acc * k + v)
    }
}

impl WitnessStructure for TableStructure {
    fn n(&self) -> usize {
        self.n
    }

    fn indicator(&self, x: &[usize], i: usize) -> bool {
        self.ones[self.index(x)].contains(&i)
    }

    fn witness(&self, x: &[usize], i: usize) -> Vec<usize> {
        let k = self.index(x);
        self.ones[k]
            .iter()
            .position(|&j| j == i)
            .map_or(vec![], |p| self.witnesses[k][p].clone())
    }

    fn exceptional(&self, x: &[usize]) -> bool {
        self.exceptional.binary_search(&self.index(x)).is_ok()
    }

    fn beta(&self) -> f64 {
        self.beta
    }

    fn d_bound(&self) -> f64 {
        self.d
    }
}

/// Exact quantities of a structure, from one pass over the space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureStats {
    /// Largest number of witness sets containing one trial.
    pub actual_beta: usize,
    /// Largest `Σ |W_i(x)|`.
    pub actual_d: usize,
    pub pr_exceptional: f64,
    /// `sup R` over the exceptional set, 0 when it is empty.
    pub sup_exceptional: usize,
    pub mean: f64,
    /// `Pr(R = r)` for `r = 0..=n`.
    pub distribution: Vec<f64>,
    pub mass: f64,
}

/// Check the witness property, `β`, `D` and `Pr(Ω*) ≤ 1/6` exhaustively.
///
/// Witness-property checks are shared between outcomes that agree on the
/// witness set.
pub fn verify_structure(space: &ProductSpace, st: &dyn WitnessStructure) -> Result<StructureStats> {
    let n = st.n();
    let mut stats = StructureStats {
        actual_beta: 0,
        actual_d: 0,
        pr_exceptional: 0.0,
        sup_exceptional: 0,
        mean: 0.0,
        distribution: vec![0.0; n + 1],
        mass: 0.0,
    };
    let mut checked: HashSet<(usize, Vec<(usize, usize)>)> = HashSet::new();
    let mut failure: Option<String> = None;
    space.for_each(|x, p| {
        if failure.is_some() {
            return;
        }
        let r = st.value(x);
        stats.distribution[r] += p;
        stats.mean += r as f64 * p;
        stats.mass += p;
        if st.exceptional(x) {
            stats.pr_exceptional += p;
            stats.sup_exceptional = stats.sup_exceptional.max(r);
            return;
        }
        let mut per_trial = vec![0usize; space.m()];
        let mut total = 0;
        for i in 0..n {
            let w = st.witness(x, i);
            if !st.indicator(x, i) {
                if !w.is_empty() {
                    failure = Some(format!("indicator {i} is 0 at {x:?} but has witness {w:?}"));
                    return;
                }
                continue;
            }
            total += w.len();
            for &j in &w {
                per_trial[j] += 1;
            }
            let key = (i, w.iter().map(|&j| (j, x[j])).collect::<Vec<_>>());
            if checked.insert(key) {
                let mut broken = None;
                space.for_each_extension(x, &w, |y| {
                    if broken.is_none() && !st.exceptional(y) && !st.indicator(y, i) {
                        broken = Some(y.to_vec());
                    }
                });
                if let Some(y) = broken {
                    failure = Some(format!(
                        "witness {w:?} of indicator {i} at {x:?} does not force it at {y:?}"
                    ));
                    return;
                }
            }
        }
        stats.actual_d = stats.actual_d.max(total);
        stats.actual_beta = stats.actual_beta.max(per_trial.into_iter().max().unwrap_or(0));
    })?;
    if let Some(msg) = failure {
        return Err(Error::Structure(msg));
    }
    if (stats.mass - 1.0).abs() > 1e-12 {
        return Err(Error::Structure(format!("enumeration mass {}", stats.mass)));
    }
    if !(st.beta() > 0.0 && st.d_bound() > 0.0) {
        return Err(Error::Structure("β and D must be positive".into()));
    }
    if (stats.actual_beta as f64) > st.beta() {
        return Err(Error::Structure(format!(
            "a trial witnesses {} indicators, declared β = {}",
            stats.actual_beta,
            st.beta()
        )));
    }
    if (stats.actual_d as f64) > st.d_bound() {
        return Err(Error::Structure(format!(
            "witness sets total {}, declared D = {}",
            stats.actual_d,
            st.d_bound()
        )));
    }
    if stats.pr_exceptional > 1.0 / 6.0 {
        return Err(Error::Structure(format!(
            "Pr(exceptional) = {} exceeds 1/6",
            stats.pr_exceptional
        )));
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coins_sum(m: usize) -> ClauseStructure {
        ClauseStructure {
            indicators: (0..m).map(|j| vec![vec![(j, 1)]]).collect(),
            exceptional: vec![],
            exceptional_values: None,
            beta: 1.0,
            d: m as f64,
        }
    }

    #[test]
    fn singleton_witnesses() {
        let space = ProductSpace::fair_coins(6);
        let s = verify_structure(&space, &coins_sum(6)).unwrap();
        assert_eq!((s.actual_beta, s.actual_d), (1, 6));
        assert!((s.mean - 3.0).abs() < 1e-12);
        assert_eq!(s.pr_exceptional, 0.0);
    }

    #[test]
    fn broken_witness_is_caught() {
        // R = X0 AND X1 but the witness only names X0
        let space = ProductSpace::fair_coins(2);
        let table = TableStructure {
            n: 1,
            arities: vec![2, 2],
            ones: vec![vec![], vec![], vec![], vec![0]],
            witnesses: vec![vec![], vec![], vec![], vec![vec![0]]],
            exceptional: vec![],
            beta: 1.0,
            d: 1.0,
        };
        assert!(matches!(verify_structure(&space, &table), Err(Error::Structure(_))));
    }

    #[test]
    fn exceptional_outcomes_excuse_the_witness() {
        // same structure, with the offending outcome (1, 0) declared exceptional
        let space = ProductSpace::new(vec![vec![0.5, 0.5], vec![0.9, 0.1]]).unwrap();
        let table = TableStructure {
            n: 1,
            arities: vec![2, 2],
            ones: vec![vec![], vec![], vec![], vec![0]],
            witnesses: vec![vec![], vec![], vec![], vec![vec![0]]],
            exceptional: vec![2],
            beta: 1.0,
            d: 1.0,
        };
        assert!(verify_structure(&space, &table).is_err());
        let space = ProductSpace::new(vec![vec![0.5, 0.5], vec![0.1, 0.9]]).unwrap();
        let s = verify_structure(&space, &table).unwrap();
        assert!((s.pr_exceptional - 0.05).abs() < 1e-12);
    }

    #[test]
    fn declared_bounds_are_enforced() {
        let space = ProductSpace::fair_coins(4);
        let mut st = coins_sum(4);
        st.d = 3.0;
        assert!(verify_structure(&space, &st).is_err());
    }

    #[test]
    fn tabulation_agrees() {
        let space = ProductSpace::fair_coins(5);
        let mut st = coins_sum(5);
        st.indicators[2].push(vec![(0, 0), (4, 1)]);
        st.exceptional = vec![vec![(0, 1), (1, 1), (2, 1)]];
        st.beta = 2.0;
        st.d = 6.0;
        let t = TableStructure::tabulate(&space, &st).unwrap();
        space
            .for_each(|x, _| {
                for i in 0..5 {
                    assert_eq!(t.indicator(x, i), st.indicator(x, i));
                    assert_eq!(t.witness(x, i), st.witness(x, i));
                }
                assert_eq!(t.exceptional(x), st.exceptional(x));
            })
            .unwrap();
        assert_eq!(verify_structure(&space, &t).unwrap(), verify_structure(&space, &st).unwrap());
    }
}
