//! Dilation operators on decreasing sequences and numerical Boyd indices.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{linear_fit, stream_rng};
pub use crate::numeric::LinearFit;
use crate::spaces::{SpaceKind, SpaceSpec};

/// Default largest candidate length.
pub const DEFAULT_BUDGET: usize = 1 << 14;
/// Default largest dilation factor.
pub const DEFAULT_J_MAX: usize = 1 << 10;
/// Slack allowed in `α̂ ≤ β̂` when both estimate the same index from finite data.
pub const FIT_TOLERANCE: f64 = 0.05;

/// A nonincreasing sequence of nonnegative reals, indexed from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecreasingSequence(Vec<f64>);

impl DecreasingSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return domain("decreasing sequence entries must be finite and nonnegative");
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return domain("sequence is not nonincreasing");
        }
        Ok(Self(values))
    }

    /// Sorts arbitrary nonnegative data into a decreasing sequence.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `(E_j g)_k = g_{jk}`.
pub fn dilate_down(j: usize, g: &DecreasingSequence) -> Result<DecreasingSequence> {
    if j == 0 {
        return domain("dilation factor must be at least 1");
    }
    Ok(DecreasingSequence(g.0.iter().skip(j - 1).step_by(j).copied().collect()))
}

/// `(F_j g)_k = g_{⌊(k-1)/j⌋+1}`: every entry repeated `j` times.
pub fn dilate_up(j: usize, g: &DecreasingSequence) -> Result<DecreasingSequence> {
    if j == 0 {
        return domain("dilation factor must be at least 1");
    }
    Ok(DecreasingSequence(
        g.0.iter().flat_map(|v| std::iter::repeat_n(*v, j)).collect(),
    ))
}

fn require_unweighted(spec: &SpaceSpec) -> Result<SpaceKind> {
    if spec.weight.is_some() {
        return domain("Boyd indices are defined for the unweighted space");
    }
    Ok(spec.kind)
}

/// Candidate unit-ball elements: flat blocks over a dyadic sweep (plus
/// multiples of `j`), geometric tails and seeded random decreasing sequences.
fn candidates(j: usize, budget: usize, seed: u64) -> Vec<DecreasingSequence> {
    let budget = budget.max(1);
    let mut lengths: Vec<usize> = std::iter::successors(Some(1usize), |n| n.checked_mul(2))
        .take_while(|n| *n <= budget)
        .collect();
    lengths.extend(std::iter::successors(Some(j), |n| n.checked_mul(2)).take_while(|n| *n <= budget));
    lengths.extend((1..=4).map(|m| m * j).filter(|n| *n <= budget));
    lengths.sort_unstable();
    lengths.dedup();
    let mut out: Vec<DecreasingSequence> = lengths.into_iter().map(|n| DecreasingSequence(vec![1.0; n])).collect();

    for r in [0.5, 0.9, 0.99, 0.999] {
        out.push(DecreasingSequence((0..budget).map(|k| r_pow(r, k)).collect()));
    }
    let mut rng = stream_rng(seed, j as u64);
    for _ in 0..8 {
        let len = rng.random_range(1..=budget);
        let vals: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
        out.push(DecreasingSequence::from_unsorted(vals).expect("uniform samples are valid"));
    }
    out
}

fn r_pow(r: f64, k: usize) -> f64 {
    r.powi(k as i32)
}

fn dilation_sup(
    spec: &SpaceSpec,
    j: usize,
    budget: usize,
    seed: u64,
    op: fn(usize, &DecreasingSequence) -> Result<DecreasingSequence>,
) -> Result<f64> {
    let kind = require_unweighted(spec)?;
    if j == 0 {
        return domain("dilation factor must be at least 1");
    }
    if j == 1 {
        return Ok(1.0);
    }
    let mut best: f64 = 0.0;
    for g in candidates(j, budget, seed) {
        let n = kind.norm_of_decreasing(g.values())?;
        if n == 0.0 {
            continue;
        }
        let d = op(j, &g)?;
        best = best.max(kind.norm_of_decreasing(d.values())? / n);
    }
    Ok(best)
}

/// Lower bound for `H(j, X) = sup{ ‖E_j f*‖ : ‖f‖ ≤ 1 }`.
pub fn estimate_h(spec: &SpaceSpec, j: usize, budget: usize, seed: u64) -> Result<f64> {
    dilation_sup(spec, j, budget, seed, dilate_down)
}

/// Lower bound for `K(j, X) = sup{ ‖F_j f*‖ : ‖f‖ ≤ 1 }`.
///
/// Candidates are capped so that the dilated sequence fits in `budget`.
pub fn estimate_k(spec: &SpaceSpec, j: usize, budget: usize, seed: u64) -> Result<f64> {
    dilation_sup(spec, j, (budget / j.max(1)).max(1), seed, dilate_up)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoydRow {
    pub j: usize,
    pub h: f64,
    pub k: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityCheck {
    /// `α̂` of the associate space.
    pub alpha_dual: f64,
    /// `|α̂_{X'} - (1 - β̂_X)|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoydEstimate {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub per_j: Vec<BoydRow>,
    /// Fit of `-ln H(j)` against `ln j`.
    pub alpha_fit: LinearFit,
    /// Fit of `ln K(j)` against `ln j`.
    pub beta_fit: LinearFit,
    /// Present for `ℓ^p`, whose associate space is again `ℓ^q`.
    pub duality: Option<DualityCheck>,
}

impl BoydEstimate {
    /// `0 ≤ α̂ ≤ β̂ ≤ 1`, up to `tol`.
    pub fn is_ordered(&self, tol: f64) -> bool {
        self.alpha_hat >= -tol && self.alpha_hat <= self.beta_hat + tol && self.beta_hat <= 1.0 + tol
    }
}

/// Slopes fitted on the upper half of the dyadic `j` range (at least three
/// points), where the finite-size curvature of small `j` has died out.
fn tail_fit(js: &[usize], ys: &[f64]) -> Result<LinearFit> {
    if js.len() < 3 {
        return Err(Error::Domain(format!(
            "index fit needs at least 3 dyadic points, got {}",
            js.len()
        )));
    }
    let start = (js.len() / 2).min(js.len() - 3);
    let xs: Vec<f64> = js[start..].iter().map(|j| (*j as f64).ln()).collect();
    Ok(linear_fit(&xs, &ys[start..]))
}

fn indices_only(spec: &SpaceSpec, j_max: usize, budget: usize, seed: u64) -> Result<(Vec<BoydRow>, LinearFit, LinearFit)> {
    require_unweighted(spec)?;
    let js: Vec<usize> = std::iter::successors(Some(2usize), |j| j.checked_mul(2))
        .take_while(|j| *j <= j_max)
        .collect();
    if js.len() < 3 {
        return Err(Error::Domain(format!(
            "index fit needs at least 3 dyadic points, got {} for j_max = {j_max}",
            js.len()
        )));
    }
    let rows: Vec<BoydRow> = js
        .par_iter()
        .map(|&j| {
            Ok(BoydRow {
                j,
                h: estimate_h(spec, j, budget, seed)?,
                k: estimate_k(spec, j, budget, seed)?,
            })
        })
        .collect::<Result<_>>()?;
    let neg_ln_h: Vec<f64> = rows.iter().map(|r| -r.h.ln()).collect();
    let ln_k: Vec<f64> = rows.iter().map(|r| r.k.ln()).collect();
    Ok((rows, tail_fit(&js, &neg_ln_h)?, tail_fit(&js, &ln_k)?))
}

/// Regression estimates of the Boyd indices from `H(j)` and `K(j)` over
/// `j = 2, 4, ..., j_max`.
pub fn boyd_indices(spec: &SpaceSpec, j_max: usize, budget: usize, seed: u64) -> Result<BoydEstimate> {
    let (per_j, alpha_fit, beta_fit) = indices_only(spec, j_max, budget, seed)?;
    let duality = match spec.associate() {
        Some(dual) => {
            let (_, dual_alpha, _) = indices_only(&dual, j_max, budget, seed)?;
            Some(DualityCheck {
                alpha_dual: dual_alpha.slope,
                residual: (dual_alpha.slope - (1.0 - beta_fit.slope)).abs(),
            })
        }
        None => None,
    };
    Ok(BoydEstimate {
        alpha_hat: alpha_fit.slope,
        beta_hat: beta_fit.slope,
        per_j,
        alpha_fit,
        beta_fit,
        duality,
    })
}
