//! Laurent operators `L(a): φ ↦ a * φ`, their weighted finite sections
//! `P_N w L(a) w^{-1} P_N`, and multiplier-norm estimation.

mod norms;

pub use norms::{
    lp_operator_norm, multiplier_norm_lower, multiplier_norm_lower_with, multiplier_norm_sweep,
    multiplier_norm_upper, LowerOptions, OperatorNorm, UpperCalibration,
};

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sequence::FiniteSequence;
use crate::symbols::Symbol;
use crate::weights::Weight;
use crate::C64;

/// Coefficient count at or below which sections apply by direct summation.
const SPARSE_LIMIT: usize = 64;

/// A square linear map on `C^dim` together with its adjoint.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64>;

    /// `A e_k`.
    fn column(&self, k: usize) -> Vec<C64> {
        let mut e = vec![C64::new(0.0, 0.0); self.dim()];
        e[k] = C64::new(1.0, 0.0);
        self.apply(&e)
    }
}

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn diagonal(d: &[C64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for i in 0..self.n {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.data[i * self.n + j].conj() * y[i];
            }
        }
        out
    }
}

struct Spectral {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel: Vec<C64>,
    kernel_adjoint: Vec<C64>,
}

/// `P_N w L(a) w^{-1} P_N` on indices `[-N, N]`, with
/// `entry(j, k) = w_j â(j-k) / w_k`.
pub struct FiniteSection {
    n: usize,
    /// `â(d)` for `d ∈ [-2N, 2N]`.
    coeffs: Vec<C64>,
    /// Weight on `[-N, N]`, rescaled to geometric mean 1.
    w: Vec<f64>,
    sparse: Option<Vec<(i64, C64)>>,
    spectral: Option<Spectral>,
}

impl FiniteSection {
    pub fn new(a: &Symbol, n: usize, weight: Option<&Weight>) -> Result<Self> {
        if n == 0 {
            return domain("section half-width must be at least 1");
        }
        let r = 2 * n as i64;
        let coeffs: Vec<C64> = (-r..=r).map(|d| a.fourier_coefficient(d)).collect();
        let ni = n as i64;
        let ln_w: Vec<f64> = (-ni..=ni).map(|k| weight.map_or(0.0, |w| w.ln_value(k))).collect();
        let mean = ln_w.iter().sum::<f64>() / ln_w.len() as f64;
        let w: Vec<f64> = ln_w.iter().map(|l| (l - mean).exp()).collect();
        if w.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return domain("weight overflows on the section window");
        }

        let nonzero: Vec<(i64, C64)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(i, c)| (i as i64 - r, *c))
            .collect();
        let (sparse, spectral) = if nonzero.len() <= SPARSE_LIMIT {
            (Some(nonzero), None)
        } else {
            let len = (6 * n + 1).next_power_of_two();
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(len);
            let inverse = planner.plan_fft_inverse(len);
            let mut kernel = vec![C64::new(0.0, 0.0); len];
            kernel[..coeffs.len()].copy_from_slice(&coeffs);
            forward.process(&mut kernel);
            let mut kernel_adjoint = vec![C64::new(0.0, 0.0); len];
            for (i, c) in coeffs.iter().rev().enumerate() {
                kernel_adjoint[i] = c.conj();
            }
            forward.process(&mut kernel_adjoint);
            (
                None,
                Some(Spectral {
                    len,
                    forward,
                    inverse,
                    kernel,
                    kernel_adjoint,
                }),
            )
        };
        Ok(Self {
            n,
            coeffs,
            w,
            sparse,
            spectral,
        })
    }

    pub fn half_width(&self) -> usize {
        self.n
    }

    fn coeff(&self, d: i64) -> C64 {
        let r = 2 * self.n as i64;
        if d.abs() > r {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(d + r) as usize]
        }
    }

    /// `w_j â(j-k) / w_k` for `j, k ∈ [-N, N]`.
    pub fn entry(&self, j: i64, k: i64) -> C64 {
        let ni = self.n as i64;
        self.coeff(j - k) * (self.w[(j + ni) as usize] / self.w[(k + ni) as usize])
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let ni = self.n as i64;
        DenseMatrix::from_fn(2 * self.n + 1, |i, j| self.entry(i as i64 - ni, j as i64 - ni))
    }

    /// Vector on `[-N, N]` as a finite sequence.
    pub fn to_sequence(&self, x: &[C64]) -> FiniteSequence {
        FiniteSequence::new(-(self.n as i64), x.to_vec())
    }

    /// Restricts `φ` to `[-N, N]`.
    pub fn from_sequence(&self, phi: &FiniteSequence) -> Vec<C64> {
        let ni = self.n as i64;
        (-ni..=ni).map(|k| phi.get(k)).collect()
    }

    /// `w_k` on the section, up to the common rescaling.
    pub(crate) fn weights(&self) -> &[f64] {
        &self.w
    }

    fn convolve_window(&self, spec: &Spectral, kernel: &[C64], u: &[C64]) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); spec.len];
        buf[..u.len()].copy_from_slice(u);
        spec.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(kernel) {
            *b *= k;
        }
        spec.inverse.process(&mut buf);
        let scale = 1.0 / spec.len as f64;
        let n = self.n;
        buf[2 * n..=4 * n].iter().map(|v| v * scale).collect()
    }
}

impl LinearOperator for FiniteSection {
    fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let dim = self.dim();
        if let Some(nz) = &self.sparse {
            let mut y = vec![C64::new(0.0, 0.0); dim];
            for &(d, c) in nz {
                for (j, yj) in y.iter_mut().enumerate() {
                    let k = j as i64 - d;
                    if k >= 0 && (k as usize) < dim {
                        let k = k as usize;
                        *yj += c * x[k] * (self.w[j] / self.w[k]);
                    }
                }
            }
            return y;
        }
        let spec = self.spectral.as_ref().expect("dense sections carry a spectral kernel");
        let u: Vec<C64> = x.iter().zip(&self.w).map(|(v, w)| v / w).collect();
        let mut y = self.convolve_window(spec, &spec.kernel, &u);
        for (v, w) in y.iter_mut().zip(&self.w) {
            *v *= w;
        }
        y
    }

    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let dim = self.dim();
        if let Some(nz) = &self.sparse {
            let mut x = vec![C64::new(0.0, 0.0); dim];
            for &(d, c) in nz {
                for (k, xk) in x.iter_mut().enumerate() {
                    let j = k as i64 + d;
                    if j >= 0 && (j as usize) < dim {
                        let j = j as usize;
                        *xk += c.conj() * y[j] * (self.w[j] / self.w[k]);
                    }
                }
            }
            return x;
        }
        let spec = self.spectral.as_ref().expect("dense sections carry a spectral kernel");
        let u: Vec<C64> = y.iter().zip(&self.w).map(|(v, w)| v * w).collect();
        let mut x = self.convolve_window(spec, &spec.kernel_adjoint, &u);
        for (v, w) in x.iter_mut().zip(&self.w) {
            *v /= w;
        }
        x
    }

    fn column(&self, k: usize) -> Vec<C64> {
        let ni = self.n as i64;
        let kk = k as i64 - ni;
        (-ni..=ni).map(|j| self.entry(j, kk)).collect()
    }
}

/// `finite_section(a, N, w)`; see [`FiniteSection`].
pub fn finite_section(a: &Symbol, n: usize, weight: Option<&Weight>) -> Result<FiniteSection> {
    FiniteSection::new(a, n, weight)
}

/// `a * φ` with error metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convolution {
    pub sequence: FiniteSequence,
    /// True when no coefficients were dropped.
    pub exact: bool,
    /// Bound on `‖a * φ - sequence‖_{ℓ²}`.
    pub tail_bound: f64,
}

/// `(a * φ)_j = Σ_k â(j-k) φ_k` using coefficients up to `coeff_radius`.
///
/// Trigonometric polynomials are exact and must fit in the radius. Other
/// symbols are truncated, with error at most `‖φ‖_{ℓ¹}` times the ℓ² tail of
/// the coefficients.
pub fn convolve(a: &Symbol, phi: &FiniteSequence, coeff_radius: usize) -> Result<Convolution> {
    if let Some(c) = a.as_trig_poly() {
        let deg = c.radius() as usize;
        if coeff_radius < deg {
            return domain(format!("coefficient radius {coeff_radius} is below the degree {deg}"));
        }
        return Ok(Convolution {
            sequence: c.convolve(phi),
            exact: true,
            tail_bound: 0.0,
        });
    }
    let r = coeff_radius as i64;
    let window = FiniteSequence::from_fn(-r, r, |k| a.fourier_coefficient(k));
    let l1: f64 = phi.magnitudes().iter().sum();
    Ok(Convolution {
        sequence: window.convolve(phi),
        exact: false,
        tail_bound: l1 * a.coefficient_tail_bound(coeff_radius),
    })
}

/// `(D_x φ)_j = e^{ijx} φ_j`.
pub fn modulation(x: f64, phi: &FiniteSequence) -> FiniteSequence {
    phi.map_indexed(|j, v| v * C64::from_polar(1.0, j as f64 * x))
}
