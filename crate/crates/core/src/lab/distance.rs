use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::space::ProductSpace;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

const WEIGHT_EPS: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinNormPoint {
    pub point: Vec<f64>,
    pub norm: f64,
    /// `(index into the input, weight)` of the active points.
    pub weights: Vec<(usize, f64)>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Weights of the minimum-norm point of the affine hull of `pts`.
fn affine_minimizer(pts: &[&[f64]]) -> Option<Vec<f64>> {
    let k = pts.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = dot(pts[i], pts[j]);
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs)?;
    let w: Vec<f64> = sol.iter().take(k).copied().collect();
    w.iter().all(|x| x.is_finite()).then_some(w)
}

fn combine(points: &[Vec<f64>], set: &[usize], w: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&i, &wi) in set.iter().zip(w) {
        for (xk, pk) in x.iter_mut().zip(&points[i]) {
            *xk += wi * pk;
        }
    }
    x
}

/// Wolfe's minimum-norm-point method on the convex hull of `points`.
pub fn min_norm_point(points: &[Vec<f64>], tol: f64) -> MinNormPoint {
    assert!(!points.is_empty(), "empty point set");
    let dim = points[0].len();
    let scale = points.iter().map(|p| dot(p, p)).fold(1.0, f64::max);
    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut set = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..10_000 {
        let j = (0..points.len())
            .min_by(|&a, &b| dot(&x, &points[a]).total_cmp(&dot(&x, &points[b])))
            .unwrap();
        if dot(&x, &x) - dot(&x, &points[j]) <= tol * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lambda.push(0.0);
        loop {
            let pts: Vec<&[f64]> = set.iter().map(|&i| points[i].as_slice()).collect();
            let Some(alpha) = affine_minimizer(&pts) else {
                // affinely dependent set: drop the newest point and stop
                set.pop();
                lambda.pop();
                break;
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                lambda = alpha;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|&(_, &a)| a <= WEIGHT_EPS)
                .map(|(&l, &a)| l / (l - a))
                .fold(f64::INFINITY, f64::min)
                .clamp(0.0, 1.0);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > WEIGHT_EPS).collect();
            if keep.iter().all(|&k| k) {
                // numerical stall; drop the smallest weight
                let worst = (0..lambda.len()).min_by(|&a, &b| lambda[a].total_cmp(&lambda[b])).unwrap();
                set.remove(worst);
                lambda.remove(worst);
            } else {
                set = set.iter().zip(&keep).filter(|(_, &k)| k).map(|(&i, _)| i).collect();
                lambda = lambda.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(points, &set, &lambda, dim);
        if !set.contains(&j) {
            break;
        }
    }
    let norm = dot(&x, &x).sqrt();
    MinNormPoint {
        point: x,
        norm,
        weights: set.into_iter().zip(lambda).collect(),
    }
}

/// Mismatch patterns `χ(x, y)` for `y ∈ A`, keeping only the minimal ones.
fn minimal_mismatches(x: &[usize], set: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let mut pats: Vec<Vec<bool>> = set
        .iter()
        .map(|y| x.iter().zip(y).map(|(a, b)| a != b).collect())
        .collect();
    pats.sort_by_key(|p: &Vec<bool>| p.iter().filter(|&&b| b).count());
    pats.dedup();
    let mut minimal: Vec<Vec<bool>> = Vec::new();
    for p in pats {
        let dominated = minimal.iter().any(|q| q.iter().zip(&p).all(|(&qi, &pi)| !qi || pi));
        if !dominated {
            minimal.push(p);
        }
    }
    minimal
}

fn as_points(pats: &[Vec<bool>]) -> Vec<Vec<f64>> {
    pats.iter()
        .map(|p| p.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn check_set(x: &[usize], set: &[Vec<usize>]) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Argument("distance to an empty set".into()));
    }
    if set.iter().any(|y| y.len() != x.len()) {
        return Err(Error::Argument("outcome lengths differ".into()));
    }
    Ok(())
}

/// `dist(x, A)`: the norm of the minimum-norm point of the convex hull of
/// the mismatch patterns, which equals the supremum of the normalized
/// weighted Hamming distance over all directions.
pub fn convex_distance(x: &[usize], set: &[Vec<usize>]) -> Result<f64> {
    check_set(x, set)?;
    let minimal = minimal_mismatches(x, set);
    if minimal.iter().any(|p| p.iter().all(|&b| !b)) {
        return Ok(0.0);
    }
    Ok(min_norm_point(&as_points(&minimal), 1e-12).norm)
}

/// `dist_a(x, A) = min_{y ∈ A} Σ_{x_i ≠ y_i} a_i / ‖a‖`.
pub fn directional_distance(x: &[usize], set: &[Vec<usize>], a: &[f64]) -> f64 {
    let norm = dot(a, a).sqrt();
    set.iter()
        .map(|y| x.iter().zip(y).zip(a).filter(|((u, v), _)| u != v).map(|(_, w)| w).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        / norm
}

/// Lower bound on `dist(x, A)` from `samples` random nonnegative directions
/// plus, when the minimal patterns are few, the direction of the
/// minimum-norm point of every face they span.
pub fn distance_lower_bound(x: &[usize], set: &[Vec<usize>], samples: usize, seed: u64) -> Result<f64> {
    check_set(x, set)?;
    let minimal = minimal_mismatches(x, set);
    let pts = as_points(&minimal);
    let m = x.len();
    let value = |a: &[f64]| -> f64 {
        let norm = dot(a, a).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        pts.iter().map(|p| dot(a, p)).fold(f64::INFINITY, f64::min) / norm
    };
    let mut best = 0.0f64;
    let mut rng = rng_from_seed(seed);
    for _ in 0..samples {
        let a: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
        best = best.max(value(&a));
    }
    if pts.len() <= 20 && m <= 8 {
        let k = pts.len();
        for mask in 1u32..(1u32 << k) {
            if mask.count_ones() as usize > m + 1 {
                continue;
            }
            let face: Vec<&[f64]> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].as_slice()).collect();
            let Some(w) = affine_minimizer(&face) else { continue };
            if w.iter().any(|&wi| wi < -1e-12) {
                continue;
            }
            let mut a = vec![0.0; m];
            for (p, wi) in face.iter().zip(&w) {
                for (ak, pk) in a.iter_mut().zip(p.iter()) {
                    *ak += wi * pk;
                }
            }
            a.iter_mut().for_each(|v| *v = v.max(0.0));
            best = best.max(value(&a));
        }
    }
    Ok(best)
}

/// `dist(A, B) = min_{y ∈ B} dist(y, A)`.
pub fn set_distance(a: &[Vec<usize>], b: &[Vec<usize>]) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::Argument("distance from an empty set".into()));
    }
    b.iter().try_fold(f64::INFINITY, |best, y| Ok(best.min(convex_distance(y, a)?)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TalagrandReport {
    pub pr_a: f64,
    pub pr_b: f64,
    pub dist: f64,
    pub dist_reverse: f64,
    /// `exp(−dist²/4)`
    pub bound: f64,
    /// `Pr(A) Pr(B) < exp(−dist²/4)`
    pub holds: bool,
}

/// Compute both set distances and compare `Pr(A) Pr(B)` with
/// `exp(−dist²/4)`.
pub fn verify_talagrand(space: &ProductSpace, a: &[Vec<usize>], b: &[Vec<usize>]) -> Result<TalagrandReport> {
    space.check_enumerable()?;
    for y in a.iter().chain(b) {
        if y.len() != space.m() || y.iter().enumerate().any(|(j, &v)| v >= space.arity(j)) {
            return Err(Error::Argument(format!("{y:?} is not an outcome of the space")));
        }
    }
    let pr = |set: &[Vec<usize>]| {
        let mut s: Vec<&Vec<usize>> = set.iter().collect();
        s.sort();
        s.dedup();
        s.iter().map(|y| space.prob(y)).sum::<f64>()
    };
    let dist = set_distance(a, b)?;
    let dist_reverse = set_distance(b, a)?;
    let bound = (-dist * dist / 4.0).exp();
    let (pr_a, pr_b) = (pr(a), pr(b));
    Ok(TalagrandReport {
        pr_a,
        pr_b,
        dist,
        dist_reverse,
        bound,
        holds: pr_a * pr_b < bound,
    })
}
