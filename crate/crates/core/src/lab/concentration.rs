use serde::{Deserialize, Serialize};

use super::space::ProductSpace;
use super::witness::{verify_structure, WitnessStructure};
use crate::error::Result;
use crate::rng::rng_from_seed;

/// Slack when comparing `|R − E R|` against `τ`: outcomes within it count
/// toward the tail.
const TAIL_SLACK: f64 = 1e-9;

fn tail_from(distribution: &[f64], mean: f64, tau: f64) -> f64 {
    distribution
        .iter()
        .enumerate()
        .filter(|&(r, _)| (r as f64 - mean).abs() >= tau - TAIL_SLACK)
        .map(|(_, &p)| p)
        .sum()
}

/// `Pr(|R − E R| ≥ τ)` by enumeration.
pub fn exact_tail(space: &ProductSpace, st: &dyn WitnessStructure, tau: f64) -> Result<f64> {
    let mut dist = vec![0.0; st.n() + 1];
    let mut mean = 0.0;
    space.for_each(|x, p| {
        let r = st.value(x);
        dist[r] += p;
        mean += r as f64 * p;
    })?;
    Ok(tail_from(&dist, mean, tau))
}

/// Monte-Carlo estimate of the same tail around the exact mean.
pub fn sample_tail(space: &ProductSpace, st: &dyn WitnessStructure, mean: f64, tau: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let hits = (0..samples)
        .filter(|_| {
            let x = space.sample(&mut rng);
            (st.value(&x) as f64 - mean).abs() >= tau - TAIL_SLACK
        })
        .count();
    hits as f64 / samples as f64
}

/// `6 exp(−τ²/(24 β D)) + Pr(Ω*)`.
pub fn mahdian_exceptional_bound(beta: f64, d: f64, tau: f64, pr_exceptional: f64) -> f64 {
    6.0 * (-tau * tau / (24.0 * beta * d)).exp() + pr_exceptional
}

/// Smallest admissible `τ`: `12 √(π β D) + 2 Pr(Ω*) sup_{Ω*} R`.
pub fn threshold(beta: f64, d: f64, pr_exceptional: f64, sup_exceptional: f64) -> f64 {
    12.0 * (std::f64::consts::PI * beta * d).sqrt() + 2.0 * pr_exceptional * sup_exceptional
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub beta: f64,
    pub d: f64,
    pub pr_exceptional: f64,
    pub sup_exceptional: usize,
    pub mean: f64,
    pub threshold: f64,
    /// `(τ, exact tail, bound)` for every in-regime `τ`.
    pub checked: Vec<(f64, f64, f64)>,
    /// Grid points below the threshold.
    pub skipped: Vec<f64>,
    pub violations: Vec<(f64, f64, f64)>,
    /// Violations at `τ ≥ 12√(πβD)` once the exceptional term is dropped
    /// from the threshold.
    pub unguarded_violations: Vec<(f64, f64, f64)>,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verify the structure, then compare the exact tail with the bound at
/// every grid point.
pub fn verify_inequality(space: &ProductSpace, st: &dyn WitnessStructure, tau_grid: &[f64]) -> Result<InequalityReport> {
    let stats = verify_structure(space, st)?;
    let (beta, d) = (st.beta(), st.d_bound());
    let full = threshold(beta, d, stats.pr_exceptional, stats.sup_exceptional as f64);
    let bare = threshold(beta, d, 0.0, 0.0);
    let mut rep = InequalityReport {
        beta,
        d,
        pr_exceptional: stats.pr_exceptional,
        sup_exceptional: stats.sup_exceptional,
        mean: stats.mean,
        threshold: full,
        ..Default::default()
    };
    for &tau in tau_grid {
        let tail = tail_from(&stats.distribution, stats.mean, tau);
        let bound = mahdian_exceptional_bound(beta, d, tau, stats.pr_exceptional);
        if tau >= bare && tail > bound {
            rep.unguarded_violations.push((tau, tail, bound));
        }
        if tau < full {
            rep.skipped.push(tau);
            continue;
        }
        rep.checked.push((tau, tail, bound));
        if tail > bound {
            rep.violations.push((tau, tail, bound));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::witness::ClauseStructure;

    fn coin_sum(m: usize) -> ClauseStructure {
        ClauseStructure {
            indicators: (0..m).map(|j| vec![vec![(j, 1)]]).collect(),
            exceptional: vec![],
            exceptional_values: None,
            beta: 1.0,
            d: m as f64,
        }
    }

    #[test]
    fn ten_coin_tails() {
        let space = ProductSpace::fair_coins(10);
        let st = coin_sum(10);
        // |R − 5| ≥ 5 iff R ∈ {0, 10}
        assert_eq!(exact_tail(&space, &st, 5.0).unwrap(), 0.001_953_125);
        assert_eq!(exact_tail(&space, &st, 6.0).unwrap(), 0.0);
        // |R − 5| ≥ 4: 2 (1 + 10) / 1024
        assert_eq!(exact_tail(&space, &st, 4.0).unwrap(), 22.0 / 1024.0);
    }

    #[test]
    fn constant_indicator_has_no_tail() {
        let space = ProductSpace::fair_coins(3);
        let st = ClauseStructure {
            indicators: vec![vec![vec![]]],
            exceptional: vec![],
            exceptional_values: None,
            beta: 1.0,
            d: 1.0,
        };
        for tau in [0.1, 1.0, 3.0] {
            assert_eq!(exact_tail(&space, &st, tau).unwrap(), 0.0);
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(mahdian_exceptional_bound(1.0, 10.0, 70.0, 0.0), 6.0 * (-4900.0f64 / 240.0).exp());
        assert!((mahdian_exceptional_bound(1.0, 10.0, 70.0, 0.0) - 8.152_8e-9).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let b = mahdian_exceptional_bound(2.0, 7.0, k as f64 * 0.5, 0.01);
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn below_threshold_is_skipped() {
        let space = ProductSpace::fair_coins(6);
        let rep = verify_inequality(&space, &coin_sum(6), &[1.0, 2.0, 40.0, 60.0]).unwrap();
        assert_eq!(rep.skipped, vec![1.0, 2.0, 40.0]);
        assert_eq!(rep.checked.len(), 1);
        assert!(rep.holds());
    }

    #[test]
    fn monte_carlo_agrees() {
        let space = ProductSpace::new(vec![vec![0.3, 0.7]; 8]).unwrap();
        let st = coin_sum(8);
        let mean = 8.0 * 0.7;
        for tau in [1.0, 2.0, 3.0] {
            let exact = exact_tail(&space, &st, tau).unwrap();
            let est = sample_tail(&space, &st, mean, tau, 20_000, 5);
            let se = (exact * (1.0 - exact) / 20_000.0).sqrt();
            assert!((est - exact).abs() <= 4.0 * se + 1e-12, "{tau}: {est} vs {exact}");
        }
    }

    #[test]
    fn dropping_exceptional_term_is_detectable() {
        // R ≡ 0 off a rare exceptional cylinder where every indicator fires
        let m = 6;
        let space = ProductSpace::fair_coins(m);
        let st = ClauseStructure {
            indicators: vec![vec![]; 20],
            exceptional: vec![vec![(0, 1), (1, 1), (2, 1)]],
            exceptional_values: Some(vec![true; 20]),
            beta: 1e-6,
            d: 1e-6,
        };
        let grid: Vec<f64> = (1..200).map(|k| k as f64 * 0.025).collect();
        let rep = verify_inequality(&space, &st, &grid).unwrap();
        assert!(rep.holds());
        assert!(!rep.unguarded_violations.is_empty());
    }
}
