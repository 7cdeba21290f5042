use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest space enumerated exactly.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// Independent finite trials; trial `j` takes value `k` with probability
/// `supports[j][k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSpace {
    supports: Vec<Vec<f64>>,
}

impl ProductSpace {
    pub fn new(supports: Vec<Vec<f64>>) -> Result<Self> {
        for (j, s) in supports.iter().enumerate() {
            if s.is_empty() || s.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::Argument(format!("trial {j}: invalid probabilities {s:?}")));
            }
            let total: f64 = s.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Argument(format!("trial {j}: probabilities sum to {total}")));
            }
        }
        Ok(ProductSpace { supports })
    }

    pub fn fair_coins(m: usize) -> Self {
        ProductSpace {
            supports: vec![vec![0.5, 0.5]; m],
        }
    }

    pub fn m(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Vec<f64>] {
        &self.supports
    }

    pub fn arity(&self, j: usize) -> usize {
        self.supports[j].len()
    }

    pub fn size(&self) -> u128 {
        self.supports
            .iter()
            .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
            .unwrap_or(u128::MAX)
    }

    pub fn check_enumerable(&self) -> Result<()> {
        let size = self.size();
        if size > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "product space",
                size,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(())
    }

    pub fn prob(&self, x: &[usize]) -> f64 {
        x.iter().zip(&self.supports).map(|(&v, s)| s[v]).product()
    }

    /// Visit every outcome in odometer order (last trial fastest).
    pub fn for_each(&self, mut visit: impl FnMut(&[usize], f64)) -> Result<()> {
        self.check_enumerable()?;
        let m = self.m();
        let mut x = vec![0usize; m];
        loop {
            visit(&x, self.prob(&x));
            let mut j = m;
            loop {
                if j == 0 {
                    return Ok(());
                }
                j -= 1;
                x[j] += 1;
                if x[j] < self.arity(j) {
                    break;
                }
                x[j] = 0;
            }
        }
    }

    /// Visit every outcome agreeing with `x` on `fixed`.
    pub fn for_each_extension(&self, x: &[usize], fixed: &[usize], mut visit: impl FnMut(&[usize])) {
        let free: Vec<usize> = (0..self.m()).filter(|j| !fixed.contains(j)).collect();
        let mut y = x.to_vec();
        for &j in &free {
            y[j] = 0;
        }
        loop {
            visit(&y);
            let mut k = free.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                let j = free[k];
                y[j] += 1;
                if y[j] < self.arity(j) {
                    break;
                }
                y[j] = 0;
            }
        }
    }

    /// Row-major index of `x`.
    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.supports).fold(0, |acc, (&v, s)| acc * s.len() + v)
    }

    pub fn sample(&self, rng: &mut impl rand::Rng) -> Vec<usize> {
        self.supports
            .iter()
            .map(|s| {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (k, &p) in s.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        return k;
                    }
                }
                s.len() - 1
            })
            .collect()
    }
}
