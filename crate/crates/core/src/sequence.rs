//! Finitely supported complex sequences on the integers.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// A complex sequence on `Z` with finite support.
///
/// Stored as a contiguous block `values` starting at index `offset`. The block
/// is kept trimmed so that its first and last entries are nonzero; the zero
/// sequence is the canonical empty block at offset 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FiniteSequence {
    offset: i64,
    values: Vec<C64>,
}

impl FiniteSequence {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(offset: i64, values: Vec<C64>) -> Self {
        let first = values.iter().position(|v| *v != C64::new(0.0, 0.0));
        match first {
            None => Self::zero(),
            Some(first) => {
                let last = values.iter().rposition(|v| *v != C64::new(0.0, 0.0)).unwrap();
                Self {
                    offset: offset + first as i64,
                    values: values[first..=last].to_vec(),
                }
            }
        }
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Self {
        Self::new(offset, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// The unit vector `e_k`.
    pub fn unit(k: i64) -> Self {
        Self::new(k, vec![C64::new(1.0, 0.0)])
    }

    /// Builds the sequence `k ↦ f(k)` on `lo..=hi` (zero elsewhere).
    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> C64) -> Self {
        if hi < lo {
            return Self::zero();
        }
        Self::new(lo, (lo..=hi).map(&mut f).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Length of the stored support block.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Inclusive index range of the support block, `None` for the zero sequence.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    /// Largest `|k|` over the support block (0 for the zero sequence).
    pub fn radius(&self) -> i64 {
        self.support().map_or(0, |(lo, hi)| lo.abs().max(hi.abs()))
    }

    pub fn get(&self, k: i64) -> C64 {
        let i = k - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            C64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, *v))
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    /// Applies `f(k, value)` entrywise on the support block.
    pub fn map_indexed(&self, mut f: impl FnMut(i64, C64) -> C64) -> Self {
        Self::new(
            self.offset,
            self.iter().map(|(k, v)| f(k, v)).collect(),
        )
    }

    /// `(reflect f)_k = f_{-k}`.
    pub fn reflect(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((_, hi)) => Self::new(-hi, self.values.iter().rev().copied().collect()),
        }
    }

    /// `(shift f)_k = f_{k - by}`.
    pub fn translate(&self, by: i64) -> Self {
        Self {
            offset: if self.is_zero() { 0 } else { self.offset + by },
            values: self.values.clone(),
        }
    }

    /// Dense copy on `lo..=hi`; entries outside the window are dropped.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<C64> {
        (lo..=hi).map(|k| self.get(k)).collect()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.offset, self.values.iter().map(|v| v.conj()).collect())
    }

    /// Discrete convolution `(self * other)_j = Σ_k self_{j-k} other_k`.
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.len() + other.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in other.values.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.offset + other.offset, out)
    }
}

impl Add for &FiniteSequence {
    type Output = FiniteSequence;

    fn add(self, rhs: &FiniteSequence) -> FiniteSequence {
        let (lo, hi) = match (self.support(), rhs.support()) {
            (None, None) => return FiniteSequence::zero(),
            (Some(s), None) | (None, Some(s)) => s,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        };
        FiniteSequence::from_fn(lo, hi, |k| self.get(k) + rhs.get(k))
    }
}

impl Sub for &FiniteSequence {
    type Output = FiniteSequence;

    fn sub(self, rhs: &FiniteSequence) -> FiniteSequence {
        self + &(-rhs)
    }
}

impl Neg for &FiniteSequence {
    type Output = FiniteSequence;

    fn neg(self) -> FiniteSequence {
        self.scale(C64::new(-1.0, 0.0))
    }
}
