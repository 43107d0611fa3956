//! Periodic symbols on `[-π, π)`: trigonometric polynomials, continuous
//! piecewise-linear functions, step functions, and finite linear combinations.

mod fourier;
pub(crate) mod parse;

pub use fourier::{
    analytic_project, conjugate_symbol, fejer_kernel, fejer_mean, partial_sum, stechkin_bound,
    AnalyticSide,
};

use std::f64::consts::PI;
use std::fmt;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::{adaptive_simpson, golden_max, wrap_angle};
use crate::sequence::FiniteSequence;
use crate::C64;

const TAU: f64 = 2.0 * PI;
const MIN_GRID: usize = 1 << 14;
const TV_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum Repr {
    /// Coefficients `â(k)`.
    TrigPoly(FiniteSequence),
    /// Values at sorted breakpoints, joined linearly with periodic wrap.
    PiecewiseLinear { breaks: Vec<f64>, values: Vec<C64> },
    /// `values[i]` on `[breaks[i], breaks[i+1])`; the last piece wraps past `π`.
    Step { breaks: Vec<f64>, values: Vec<C64> },
    Sum(Vec<(C64, Symbol)>),
}

/// Representation tag of a [`Symbol`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    TrigPoly,
    PiecewiseLinear,
    Step,
    Sum,
}

/// A `2π`-periodic function of bounded variation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symbol(Repr);

/// Result of a sup-norm evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: f64,
    /// Grid size used, 0 when the value is exact from breakpoints.
    pub grid_points: usize,
}

/// A window `â(-R..=R)` with a bound on what lies outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub radius: usize,
    /// `values[k + radius] = â(k)`.
    pub values: Vec<C64>,
    /// Upper bound for `(Σ_{|k|>R} |â(k)|²)^{1/2}`.
    pub tail_l2_bound: f64,
}

impl FourierCoeffs {
    pub fn get(&self, k: i64) -> C64 {
        let r = self.radius as i64;
        if k.abs() > r {
            C64::new(0.0, 0.0)
        } else {
            self.values[(k + r) as usize]
        }
    }
}

fn sorted_breaks(breaks: Vec<f64>, values: Vec<C64>) -> Result<(Vec<f64>, Vec<C64>)> {
    if breaks.is_empty() || breaks.len() != values.len() {
        return domain("breakpoints and values must be nonempty and of equal length");
    }
    if breaks.iter().any(|b| !b.is_finite()) || values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return domain("breakpoints and values must be finite");
    }
    let mut pairs: Vec<(f64, C64)> = breaks.into_iter().map(wrap_angle).zip(values).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
        return domain("breakpoints must be distinct modulo 2π");
    }
    Ok(pairs.into_iter().unzip())
}

/// Index `i` of the piece `[b_i, b_{i+1})` containing `θ ∈ [-π, π)`, and `θ`
/// shifted into `[b_0, b_0 + 2π)`.
fn locate(breaks: &[f64], theta: f64) -> (usize, f64) {
    let t = wrap_angle(theta);
    if t < breaks[0] {
        return (breaks.len() - 1, t + TAU);
    }
    let i = breaks.partition_point(|b| *b <= t) - 1;
    (i, t)
}

fn piece_end(breaks: &[f64], i: usize) -> f64 {
    if i + 1 < breaks.len() {
        breaks[i + 1]
    } else {
        breaks[0] + TAU
    }
}

fn prev(i: usize, n: usize) -> usize {
    (i + n - 1) % n
}

impl Symbol {
    pub fn trig_poly(coeffs: FiniteSequence) -> Self {
        Symbol(Repr::TrigPoly(coeffs))
    }

    pub fn constant(c: C64) -> Self {
        Self::trig_poly(FiniteSequence::new(0, vec![c]))
    }

    /// `E_k(θ) = e^{ikθ}`.
    pub fn exponential(k: i64) -> Self {
        Self::trig_poly(FiniteSequence::unit(k))
    }

    pub fn piecewise_linear(breaks: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        let (breaks, values) = sorted_breaks(breaks, values)?;
        Ok(Symbol(Repr::PiecewiseLinear { breaks, values }))
    }

    pub fn step(breaks: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        let (breaks, values) = sorted_breaks(breaks, values)?;
        Ok(Symbol(Repr::Step { breaks, values }))
    }

    /// Tent of height `peak` on `(-width, width)`, zero elsewhere.
    pub fn hat(peak: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width <= PI) {
            return domain(format!("hat width must lie in (0, π], got {width}"));
        }
        let p = C64::new(peak, 0.0);
        let z = C64::new(0.0, 0.0);
        if width == PI {
            Self::piecewise_linear(vec![-PI, 0.0], vec![z, p])
        } else {
            Self::piecewise_linear(vec![-width, 0.0, width], vec![z, p, z])
        }
    }

    /// `h` on `[a, b)` (taken modulo `2π`) and zero elsewhere.
    pub fn indicator(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(b > a) {
            return domain(format!("step needs a < b, got [{a}, {b})"));
        }
        if b - a >= TAU {
            return Ok(Self::constant(C64::new(h, 0.0)));
        }
        Self::step(vec![a, b], vec![C64::new(h, 0.0), C64::new(0.0, 0.0)])
    }

    /// `Σ c_i a_i`; collapses to a trigonometric polynomial when every term is one.
    pub fn sum(terms: Vec<(C64, Symbol)>) -> Self {
        if terms.iter().all(|(_, s)| s.kind() == SymbolKind::TrigPoly) {
            let mut acc = FiniteSequence::zero();
            for (c, s) in &terms {
                if let Repr::TrigPoly(t) = &s.0 {
                    acc = &acc + &t.scale(*c);
                }
            }
            return Self::trig_poly(acc);
        }
        Symbol(Repr::Sum(terms))
    }

    /// `self - other`.
    pub fn minus(&self, other: &Symbol) -> Self {
        Self::sum(vec![(C64::new(1.0, 0.0), self.clone()), (C64::new(-1.0, 0.0), other.clone())])
    }

    pub fn kind(&self) -> SymbolKind {
        match self.0 {
            Repr::TrigPoly(_) => SymbolKind::TrigPoly,
            Repr::PiecewiseLinear { .. } => SymbolKind::PiecewiseLinear,
            Repr::Step { .. } => SymbolKind::Step,
            Repr::Sum(_) => SymbolKind::Sum,
        }
    }

    /// Coefficients of a trigonometric polynomial.
    pub fn as_trig_poly(&self) -> Option<&FiniteSequence> {
        match &self.0 {
            Repr::TrigPoly(c) => Some(c),
            _ => None,
        }
    }

    /// `max |k|` over nonzero coefficients, for trigonometric polynomials.
    pub fn degree(&self) -> Option<usize> {
        self.as_trig_poly().map(|c| c.radius() as usize)
    }

    /// Largest trigonometric degree among the terms (0 for piecewise kinds).
    fn max_degree(&self) -> usize {
        match &self.0 {
            Repr::TrigPoly(c) => c.radius() as usize,
            Repr::Sum(terms) => terms.iter().map(|(_, s)| s.max_degree()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn is_continuous(&self) -> bool {
        match &self.0 {
            Repr::TrigPoly(_) | Repr::PiecewiseLinear { .. } => true,
            Repr::Step { values, .. } => values.iter().all(|v| *v == values[0]),
            Repr::Sum(terms) => self.jump_points().iter().all(|b| self.jump_at(*b).norm() == 0.0) && !terms.is_empty(),
        }
    }

    pub fn eval(&self, theta: f64) -> C64 {
        match &self.0 {
            Repr::TrigPoly(c) => eval_trig(c, theta),
            Repr::PiecewiseLinear { breaks, values } => {
                let (i, t) = locate(breaks, theta);
                let n = breaks.len();
                if n == 1 {
                    return values[0];
                }
                let (b0, b1) = (breaks[i], piece_end(breaks, i));
                let s = (t - b0) / (b1 - b0);
                values[i] * (1.0 - s) + values[(i + 1) % n] * s
            }
            Repr::Step { breaks, values } => values[locate(breaks, theta).0],
            Repr::Sum(terms) => terms.iter().map(|(c, s)| c * s.eval(theta)).sum(),
        }
    }

    /// `a'(θ)` away from breakpoints.
    pub fn derivative(&self, theta: f64) -> C64 {
        match &self.0 {
            Repr::TrigPoly(c) => {
                let d = c.map_indexed(|k, v| v * C64::new(0.0, k as f64));
                eval_trig(&d, theta)
            }
            Repr::PiecewiseLinear { breaks, values } => {
                let n = breaks.len();
                if n == 1 {
                    return C64::new(0.0, 0.0);
                }
                let (i, _) = locate(breaks, theta);
                (values[(i + 1) % n] - values[i]) / (piece_end(breaks, i) - breaks[i])
            }
            Repr::Step { .. } => C64::new(0.0, 0.0),
            Repr::Sum(terms) => terms.iter().map(|(c, s)| c * s.derivative(theta)).sum(),
        }
    }

    /// `â(n) = (1/2π) ∫ a(θ) e^{-inθ} dθ`, in closed form for every representation.
    pub fn fourier_coefficient(&self, n: i64) -> C64 {
        match &self.0 {
            Repr::TrigPoly(c) => c.get(n),
            Repr::Step { breaks, values } => {
                let m = breaks.len();
                if n == 0 {
                    return (0..m).map(|i| values[i] * (piece_end(breaks, i) - breaks[i])).sum::<C64>() / TAU;
                }
                let nf = n as f64;
                let s: C64 = (0..m)
                    .map(|i| (values[i] - values[prev(i, m)]) * C64::from_polar(1.0, -nf * breaks[i]))
                    .sum();
                s / C64::new(0.0, TAU * nf)
            }
            Repr::PiecewiseLinear { breaks, values } => {
                let m = breaks.len();
                if m == 1 {
                    return if n == 0 { values[0] } else { C64::new(0.0, 0.0) };
                }
                let slope = |i: usize| (values[(i + 1) % m] - values[i]) / (piece_end(breaks, i) - breaks[i]);
                if n == 0 {
                    return (0..m)
                        .map(|i| (values[i] + values[(i + 1) % m]) * 0.5 * (piece_end(breaks, i) - breaks[i]))
                        .sum::<C64>()
                        / TAU;
                }
                let nf = n as f64;
                let s: C64 = (0..m)
                    .map(|i| (slope(i) - slope(prev(i, m))) * C64::from_polar(1.0, -nf * breaks[i]))
                    .sum();
                -s / (TAU * nf * nf)
            }
            Repr::Sum(terms) => terms.iter().map(|(c, s)| c * s.fourier_coefficient(n)).sum(),
        }
    }

    /// `â(-R..=R)` with an ℓ² bound on the discarded coefficients.
    pub fn fourier_window(&self, radius: usize) -> FourierCoeffs {
        let r = radius as i64;
        FourierCoeffs {
            radius,
            values: (-r..=r).map(|k| self.fourier_coefficient(k)).collect(),
            tail_l2_bound: self.coefficient_tail_bound(radius),
        }
    }

    /// Upper bound for `(Σ_{|k|>R} |â(k)|²)^{1/2}`.
    ///
    /// Jumps give `|â(k)| ≤ V/(2π|k|)`, hence `V/(π√(2R))`; kinks give
    /// `|â(k)| ≤ V(a')/(2πk²)`, whose ℓ¹ tail `V(a')/(πR)` dominates.
    pub fn coefficient_tail_bound(&self, radius: usize) -> f64 {
        let r = radius.max(1) as f64;
        match &self.0 {
            Repr::TrigPoly(c) => {
                if c.radius() as usize <= radius {
                    0.0
                } else {
                    let tail: f64 = c.iter().filter(|(k, _)| k.unsigned_abs() as usize > radius).map(|(_, v)| v.norm_sqr()).sum();
                    tail.sqrt()
                }
            }
            Repr::Step { .. } => self.total_variation() / (PI * (2.0 * r).sqrt()),
            Repr::PiecewiseLinear { breaks, values } => {
                let m = breaks.len();
                if m == 1 {
                    return 0.0;
                }
                let slope = |i: usize| (values[(i + 1) % m] - values[i]) / (piece_end(breaks, i) - breaks[i]);
                let v_deriv: f64 = (0..m).map(|i| (slope(i) - slope(prev(i, m))).norm()).sum();
                v_deriv / (PI * r)
            }
            Repr::Sum(terms) => terms.iter().map(|(c, s)| c.norm() * s.coefficient_tail_bound(radius)).sum(),
        }
    }

    /// Breakpoints of every piecewise component, sorted and deduplicated.
    fn jump_points(&self) -> Vec<f64> {
        let mut pts = match &self.0 {
            Repr::TrigPoly(_) => Vec::new(),
            Repr::PiecewiseLinear { breaks, .. } | Repr::Step { breaks, .. } => breaks.clone(),
            Repr::Sum(terms) => terms.iter().flat_map(|(_, s)| s.jump_points()).collect(),
        };
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `a(b) - a(b-)`.
    fn jump_at(&self, b: f64) -> C64 {
        match &self.0 {
            Repr::Step { breaks, values } => match breaks.iter().position(|x| *x == b) {
                Some(i) => values[i] - values[prev(i, breaks.len())],
                None => C64::new(0.0, 0.0),
            },
            Repr::Sum(terms) => terms.iter().map(|(c, s)| c * s.jump_at(b)).sum(),
            _ => C64::new(0.0, 0.0),
        }
    }

    /// Values on the grid `θ_j = -π + 2πj/m`.
    pub fn grid_values(&self, m: usize) -> Vec<C64> {
        match &self.0 {
            Repr::TrigPoly(c) if c.radius() as usize * 2 < m => {
                let mut buf = vec![C64::new(0.0, 0.0); m];
                for (k, v) in c.iter() {
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    buf[k.rem_euclid(m as i64) as usize] += v * sign;
                }
                FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
                buf
            }
            Repr::Sum(terms) => {
                let mut acc = vec![C64::new(0.0, 0.0); m];
                for (c, s) in terms {
                    for (a, v) in acc.iter_mut().zip(s.grid_values(m)) {
                        *a += c * v;
                    }
                }
                acc
            }
            _ => (0..m).map(|j| self.eval(-PI + TAU * j as f64 / m as f64)).collect(),
        }
    }

    /// `ess sup |a|`: exact for piecewise-linear and step symbols, grid plus
    /// golden-section refinement otherwise.
    pub fn sup_norm_report(&self) -> SupNorm {
        match &self.0 {
            Repr::PiecewiseLinear { breaks, values } | Repr::Step { breaks, values } => {
                let (i, v) = values
                    .iter()
                    .map(|v| v.norm())
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
                SupNorm {
                    value: v,
                    argmax: breaks[i],
                    grid_points: 0,
                }
            }
            _ => {
                let m = MIN_GRID.max((16 * self.max_degree()).next_power_of_two());
                let vals = self.grid_values(m);
                let h = TAU / m as f64;
                let mut cands: Vec<(f64, f64)> = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (-PI + h * j as f64, v.norm()))
                    .collect();
                for b in self.jump_points() {
                    cands.push((b, self.eval(b).norm()));
                    let left = self.eval(b) - self.jump_at(b);
                    cands.push((b, left.norm()));
                }
                let mut best = cands.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a });
                let mut top: Vec<(f64, f64)> = (0..m)
                    .filter(|&j| {
                        let v = vals[j].norm();
                        v >= vals[(j + m - 1) % m].norm() && v >= vals[(j + 1) % m].norm()
                    })
                    .map(|j| (-PI + h * j as f64, vals[j].norm()))
                    .collect();
                top.sort_by(|a, b| b.1.total_cmp(&a.1));
                for (t, _) in top.into_iter().take(8) {
                    let (arg, v) = golden_max(|x| self.eval(x).norm(), t - h, t + h, 80);
                    if v > best.1 {
                        best = (wrap_angle(arg), v);
                    }
                }
                SupNorm {
                    value: best.1,
                    argmax: best.0,
                    grid_points: m,
                }
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_report().value
    }

    /// `V(a)`: jumps plus `∫|a'|` over the smooth pieces.
    pub fn total_variation(&self) -> f64 {
        match &self.0 {
            Repr::Step { values, .. } => {
                let m = values.len();
                (0..m).map(|i| (values[i] - values[prev(i, m)]).norm()).sum()
            }
            Repr::PiecewiseLinear { values, .. } => {
                let m = values.len();
                (0..m).map(|i| (values[(i + 1) % m] - values[i]).norm()).sum()
            }
            _ => {
                let mut pts = self.jump_points();
                if pts.is_empty() {
                    pts.push(-PI);
                }
                let jumps: f64 = pts.iter().map(|b| self.jump_at(*b).norm()).sum();
                let pieces_total = 64.max(8 * self.max_degree());
                let mut smooth = 0.0;
                for i in 0..pts.len() {
                    let (a, b) = (pts[i], piece_end(&pts, i));
                    let pieces = ((pieces_total as f64 * (b - a) / TAU).ceil() as usize).max(1);
                    let h = (b - a) / pieces as f64;
                    let tol = TV_TOLERANCE / pieces_total as f64;
                    for j in 0..pieces {
                        let (lo, hi) = (a + h * j as f64, a + h * (j + 1) as f64);
                        // Stay strictly inside the piece so `derivative` sees one formula.
                        let eps = 1e-12 * h;
                        smooth += adaptive_simpson(&|t| self.derivative(t).norm(), lo + eps, hi - eps, tol);
                    }
                }
                smooth + jumps
            }
        }
    }

    /// `a(θ - x)`, with coefficients `e^{-ikx} â(k)`.
    pub fn translate(&self, x: f64) -> Symbol {
        match &self.0 {
            Repr::TrigPoly(c) => Self::trig_poly(c.map_indexed(|k, v| v * C64::from_polar(1.0, -(k as f64) * x))),
            Repr::PiecewiseLinear { breaks, values } => {
                Self::piecewise_linear(breaks.iter().map(|b| b + x).collect(), values.clone()).expect("shift keeps breakpoints distinct")
            }
            Repr::Step { breaks, values } => {
                Self::step(breaks.iter().map(|b| b + x).collect(), values.clone()).expect("shift keeps breakpoints distinct")
            }
            Repr::Sum(terms) => Symbol(Repr::Sum(terms.iter().map(|(c, s)| (*c, s.translate(x))).collect())),
        }
    }

    /// Pointwise product of two trigonometric polynomials.
    pub fn product(&self, other: &Symbol) -> Result<Symbol> {
        match (&self.0, &other.0) {
            (Repr::TrigPoly(a), Repr::TrigPoly(b)) => Ok(Self::trig_poly(a.convolve(b))),
            _ => Err(crate::Error::Unsupported("products are only formed for trigonometric polynomials".into())),
        }
    }

    fn map_values(&self, f: &impl Fn(C64) -> C64) -> Symbol {
        match &self.0 {
            Repr::TrigPoly(_) => unreachable!("coefficient maps are handled by callers"),
            Repr::PiecewiseLinear { breaks, values } => Symbol(Repr::PiecewiseLinear {
                breaks: breaks.clone(),
                values: values.iter().map(|v| f(*v)).collect(),
            }),
            Repr::Step { breaks, values } => Symbol(Repr::Step {
                breaks: breaks.clone(),
                values: values.iter().map(|v| f(*v)).collect(),
            }),
            Repr::Sum(_) => unreachable!("sums are mapped term by term"),
        }
    }
}

fn eval_trig(c: &FiniteSequence, theta: f64) -> C64 {
    if c.is_zero() {
        return C64::new(0.0, 0.0);
    }
    let z = C64::from_polar(1.0, theta);
    let mut acc = C64::new(0.0, 0.0);
    for v in c.values().iter().rev() {
        acc = acc * z + v;
    }
    acc * C64::from_polar(1.0, c.offset() as f64 * theta)
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |vs: &[C64]| vs.iter().map(|v| parse::format_complex(*v)).collect::<Vec<_>>().join(",");
        match &self.0 {
            Repr::TrigPoly(c) => {
                let r = c.radius();
                let window: Vec<C64> = (-r..=r).map(|k| c.get(k)).collect();
                write!(f, "trigpoly: {}", list(&window))
            }
            Repr::PiecewiseLinear { breaks, values } => {
                write!(f, "pl({};{})", breaks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","), list(values))
            }
            Repr::Step { breaks, values } => {
                write!(f, "steps({};{})", breaks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","), list(values))
            }
            Repr::Sum(terms) => {
                let parts: Vec<String> = terms.iter().map(|(c, s)| format!("({})*[{s}]", parse::format_complex(*c))).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    }
}
