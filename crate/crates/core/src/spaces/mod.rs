//! Norms on finitely supported sequences for concrete rearrangement-invariant
//! spaces, optionally weighted: `‖f‖_{X(Z,w)} = ‖f w‖_{X(Z)}`.

mod duality;
mod rearrangement;
mod reflection;

pub use duality::{associate_norm_estimate, calderon_product_norm_estimate, lozanovskii_check};
pub use rearrangement::{decreasing_rearrangement, distribution_function};
pub use reflection::{reflect, reflection_invariance_check, ReflectionReport};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::sequence::FiniteSequence;
use crate::weights::Weight;

const LUXEMBURG_REL_TOL: f64 = 1e-12;
const LUXEMBURG_MAX_ITERS: usize = 200;

/// Convex `Φ: [0, ∞) → [0, ∞)` with `Φ(0) = 0` and `Φ(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum YoungFunction {
    /// `t^p`.
    Power { p: f64 },
    /// `t^p · ((1 + ln(1 + t)) / (1 + ln 2))^s`.
    LogPower { p: f64, s: f64 },
}

impl YoungFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power { p } => t.powf(p),
            YoungFunction::LogPower { p, s } => {
                if t == 0.0 {
                    return 0.0;
                }
                let g = (1.0 + t.ln_1p()) / (1.0 + std::f64::consts::LN_2);
                t.powf(p) * g.powf(s)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power { p } => {
                if t == 0.0 {
                    if p == 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    p * t.powf(p - 1.0)
                }
            }
            YoungFunction::LogPower { p, s } => {
                if t == 0.0 {
                    return if p == 1.0 { (1.0 + std::f64::consts::LN_2).powf(-s) } else { 0.0 };
                }
                let c = (1.0 + std::f64::consts::LN_2).powf(-s);
                let g = 1.0 + t.ln_1p();
                c * (p * t.powf(p - 1.0) * g.powf(s) + t.powf(p) * s * g.powf(s - 1.0) / (1.0 + t))
            }
        }
    }

    /// Checks `Φ(0) = 0`, monotonicity and midpoint convexity on a sample grid.
    pub fn validate(&self) -> Result<()> {
        let (p, s) = match *self {
            YoungFunction::Power { p } => (p, 0.0),
            YoungFunction::LogPower { p, s } => (p, s),
        };
        if !(p >= 1.0 && p.is_finite() && s.is_finite()) {
            return domain(format!("Young function parameters out of range: p={p}, s={s}"));
        }
        if self.eval(0.0) != 0.0 {
            return domain("Young function must vanish at 0");
        }
        let grid: Vec<f64> = (0..=400).map(|i| 1e-4 * 1.05f64.powi(i)).collect();
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            if self.eval(b) <= self.eval(a) {
                return domain(format!("Young function not increasing near t={a}"));
            }
            let mid = self.eval(0.5 * (a + b));
            if mid > 0.5 * (self.eval(a) + self.eval(b)) * (1.0 + 1e-12) {
                return domain(format!("Young function not convex near t={a}"));
            }
        }
        Ok(())
    }

    fn label(&self) -> String {
        match *self {
            YoungFunction::Power { p } => format!("power,{p}"),
            YoungFunction::LogPower { p, s } => format!("logpower,{p},{s}"),
        }
    }
}

/// The unweighted space `X(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// `ℓ^p`, `1 ≤ p ≤ ∞`.
    LebesgueP { p: f64 },
    /// `ℓ^{p,q}` with `‖f‖ = (Σ_{n≥1} n^{q/p-1} f*(n)^q)^{1/q}`, `1 ≤ q ≤ p`.
    Lorentz { p: f64, q: f64 },
    /// Luxemburg norm `inf{λ > 0 : Σ Φ(|f_k|/λ) ≤ 1}`.
    Orlicz(YoungFunction),
}

/// `X(Z, w)`: a space kind and an optional weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub weight: Option<Weight>,
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> Result<Self> {
        Self::new(SpaceKind::LebesgueP { p }, None)
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        Self::new(SpaceKind::Lorentz { p, q }, None)
    }

    pub fn orlicz(phi: YoungFunction) -> Result<Self> {
        Self::new(SpaceKind::Orlicz(phi), None)
    }

    pub fn new(kind: SpaceKind, weight: Option<Weight>) -> Result<Self> {
        match kind {
            SpaceKind::LebesgueP { p } => {
                if !(p >= 1.0) {
                    return domain(format!("ℓ^p needs p ≥ 1, got {p}"));
                }
            }
            SpaceKind::Lorentz { p, q } => {
                if !(p > 1.0 && p.is_finite() && q >= 1.0 && q <= p) {
                    return domain(format!("Lorentz space needs 1 ≤ q ≤ p < ∞, p > 1; got ({p}, {q})"));
                }
            }
            SpaceKind::Orlicz(phi) => phi.validate()?,
        }
        Ok(Self { kind, weight })
    }

    pub fn with_weight(mut self, weight: Weight) -> Self {
        self.weight = Some(weight);
        self
    }

    pub fn unweighted(&self) -> Self {
        Self {
            kind: self.kind,
            weight: None,
        }
    }

    pub fn is_weighted(&self) -> bool {
        self.weight.as_ref().is_some_and(|w| !w.is_constant())
    }

    pub fn weight_at(&self, k: i64) -> f64 {
        self.weight.as_ref().map_or(1.0, |w| w.value(k))
    }

    /// `‖f‖_{X(Z,w)}`.
    pub fn norm(&self, f: &FiniteSequence) -> Result<f64> {
        if !f.is_finite() {
            return domain("sequence has non-finite entries");
        }
        let m: Vec<f64> = f.iter().map(|(k, v)| v.norm() * self.weight_at(k)).collect();
        if m.iter().any(|x| !x.is_finite()) {
            return domain("weighted sequence overflowed");
        }
        self.kind.norm_of_magnitudes(&m)
    }

    /// The associate space `X'(Z, w^{-1})`, available in closed form for `ℓ^p`.
    pub fn associate(&self) -> Option<SpaceSpec> {
        match self.kind {
            SpaceKind::LebesgueP { p } => Some(SpaceSpec {
                kind: SpaceKind::LebesgueP { p: conjugate_exponent(p) },
                weight: self.weight.as_ref().map(|w| w.pow(-1.0)),
            }),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        let body = match self.kind {
            SpaceKind::LebesgueP { p } => format!("lp({p})"),
            SpaceKind::Lorentz { p, q } => format!("lorentz({p},{q})"),
            SpaceKind::Orlicz(phi) => format!("orlicz({})", phi.label()),
        };
        match &self.weight {
            Some(w) => format!("{body}+{}", w.label()),
            None => body,
        }
    }
}

/// `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `‖f‖_{X(Z,w)}`.
pub fn space_norm(spec: &SpaceSpec, f: &FiniteSequence) -> Result<f64> {
    spec.norm(f)
}

impl SpaceKind {
    /// Norm of the sequence with the given entry magnitudes (any order).
    pub fn norm_of_magnitudes(&self, m: &[f64]) -> Result<f64> {
        match *self {
            SpaceKind::LebesgueP { p } => Ok(lp_norm(m, p)),
            SpaceKind::Lorentz { .. } => {
                let mut sorted: Vec<f64> = m.to_vec();
                sorted.sort_by(|a, b| b.total_cmp(a));
                self.norm_of_decreasing(&sorted)
            }
            SpaceKind::Orlicz(phi) => luxemburg(&phi, m),
        }
    }

    /// Norm of a nonincreasing nonnegative sequence (skips sorting).
    pub fn norm_of_decreasing(&self, m: &[f64]) -> Result<f64> {
        match *self {
            SpaceKind::Lorentz { p, q } => {
                let top = m.first().copied().unwrap_or(0.0);
                if top == 0.0 {
                    return Ok(0.0);
                }
                let e = q / p - 1.0;
                let sum: f64 = m
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v > 0.0)
                    .map(|(i, v)| ((i + 1) as f64).powf(e) * (v / top).powf(q))
                    .sum();
                Ok(top * sum.powf(1.0 / q))
            }
            _ => self.norm_of_magnitudes(m),
        }
    }

    /// Norm together with its partial derivatives in each magnitude.
    pub(crate) fn norm_with_gradient(&self, m: &[f64]) -> Result<(f64, Vec<f64>)> {
        let norm = self.norm_of_magnitudes(m)?;
        if norm == 0.0 {
            return Ok((0.0, vec![0.0; m.len()]));
        }
        let grad = match *self {
            SpaceKind::LebesgueP { p } => {
                if p.is_infinite() {
                    m.iter().map(|v| if *v == norm { 1.0 } else { 0.0 }).collect()
                } else {
                    m.iter().map(|v| (v / norm).powf(p - 1.0)).collect()
                }
            }
            SpaceKind::Lorentz { p, q } => {
                let mut order: Vec<usize> = (0..m.len()).collect();
                order.sort_by(|&a, &b| m[b].total_cmp(&m[a]));
                let mut g = vec![0.0; m.len()];
                for (rank, &i) in order.iter().enumerate() {
                    let c = ((rank + 1) as f64).powf(q / p - 1.0);
                    g[i] = c * (m[i] / norm).powf(q - 1.0);
                }
                g
            }
            SpaceKind::Orlicz(phi) => {
                let d: Vec<f64> = m.iter().map(|v| phi.derivative(v / norm)).collect();
                let denom: f64 = d.iter().zip(m).map(|(di, v)| di * v / norm).sum();
                d.iter().map(|di| di / denom).collect()
            }
        };
        Ok((norm, grad))
    }
}

pub(crate) fn lp_norm(m: &[f64], p: f64) -> f64 {
    let top = m.iter().copied().fold(0.0, f64::max);
    if top == 0.0 || p.is_infinite() {
        return top;
    }
    if p == 1.0 {
        return m.iter().sum();
    }
    if p == 2.0 {
        return top * m.iter().map(|v| (v / top).powi(2)).sum::<f64>().sqrt();
    }
    top * m.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn luxemburg(phi: &YoungFunction, m: &[f64]) -> Result<f64> {
    let top = m.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let g = |lambda: f64| m.iter().map(|v| phi.eval(v / lambda)).sum::<f64>();
    let (mut lo, mut hi) = (top, top);
    let mut steps = 0;
    while g(lo) <= 1.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 {
            return Err(Error::Bracket("could not find λ with Σ Φ(|f|/λ) > 1".into()));
        }
    }
    steps = 0;
    while g(hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 || !hi.is_finite() {
            return Err(Error::Bracket("could not find λ with Σ Φ(|f|/λ) ≤ 1".into()));
        }
    }
    for _ in 0..LUXEMBURG_MAX_ITERS {
        if hi - lo <= LUXEMBURG_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
