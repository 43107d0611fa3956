use crate::error::{domain, Result};
use crate::sequence::FiniteSequence;

/// `d_f(λ) = #{k : |f_k| > λ}`.
pub fn distribution_function(f: &FiniteSequence, lambda: f64) -> Result<usize> {
    if !(lambda >= 0.0) {
        return domain(format!("distribution function needs λ ≥ 0, got {lambda}"));
    }
    Ok(f.iter().filter(|(_, v)| v.norm() > lambda).count())
}

/// `f*(n) = inf{λ ≥ 0 : d_f(λ) ≤ n - 1}` for `n = 1, 2, ...`, truncated at
/// the last nonzero value.
pub fn decreasing_rearrangement(f: &FiniteSequence) -> Vec<f64> {
    let mut m: Vec<f64> = f.magnitudes().into_iter().filter(|v| *v > 0.0).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}
