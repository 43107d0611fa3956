use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FiniteSection, LinearOperator};
use crate::bounds::{BoundEstimate, EstimateParams, UpperMethod};
use crate::error::{domain, Result};
use crate::numeric::stream_rng;
use crate::sequence::FiniteSequence;
use crate::spaces::{SpaceKind, SpaceSpec};
use crate::symbols::{stechkin_bound, Symbol};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
/// Above this dimension only an evenly spaced subset of basis vectors is tried.
const ALL_COLUMNS_LIMIT: usize = 1025;
const SPACED_COLUMNS: usize = 65;
/// Deterministic starts that get a full ascent run.
const POLISHED_STARTS: usize = 4;

/// Lower-bound search settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Extra starting vector, restricted to the section.
    pub warm_start: Option<FiniteSequence>,
}

impl Default for LowerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 200,
            seed: 0,
            warm_start: None,
        }
    }
}

/// Best ratio `ρ(Ax)/ρ(x)` found and the vector attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorNorm {
    pub value: f64,
    pub witness: Vec<C64>,
}

struct Engine<'a> {
    op: &'a dyn LinearOperator,
    kind: SpaceKind,
}

fn magnitudes(x: &[C64]) -> Vec<f64> {
    x.iter().map(|v| v.norm()).collect()
}

fn l2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn phase(v: C64) -> C64 {
    let r = v.norm();
    if r == 0.0 {
        ZERO
    } else {
        v / r
    }
}

impl Engine<'_> {
    fn norm(&self, x: &[C64]) -> f64 {
        self.kind.norm_of_magnitudes(&magnitudes(x)).unwrap_or(f64::NAN)
    }

    fn ratio(&self, x: &[C64]) -> f64 {
        let d = self.norm(x);
        if !(d > 0.0) {
            return 0.0;
        }
        let r = self.norm(&self.op.apply(x)) / d;
        if r.is_finite() {
            r
        } else {
            0.0
        }
    }

    fn normalized(&self, mut x: Vec<C64>) -> Vec<C64> {
        let s = l2(&x);
        if s > 0.0 {
            for v in &mut x {
                *v /= s;
            }
        }
        x
    }

    /// Power iteration on `A*A`; `‖Ax‖/‖x‖` is nondecreasing along it.
    fn power_l2(&self, x0: Vec<C64>, iters: usize) -> OperatorNorm {
        let mut x = self.normalized(x0);
        let mut best = OperatorNorm {
            value: self.ratio(&x),
            witness: x.clone(),
        };
        for _ in 0..iters {
            let y = self.op.apply_adjoint(&self.op.apply(&x));
            if l2(&y) == 0.0 {
                break;
            }
            x = self.normalized(y);
            let v = self.ratio(&x);
            if v > best.value {
                let gain = v - best.value;
                best = OperatorNorm {
                    value: v,
                    witness: x.clone(),
                };
                if gain <= 1e-15 * v {
                    break;
                }
            }
        }
        best
    }

    /// Boyd's nonlinear power method `x ← ψ_q(A* ψ_p(Ax))`, `ψ_r(v) = |v|^{r-1} sgn v`.
    fn power_lp(&self, x0: Vec<C64>, p: f64, iters: usize) -> OperatorNorm {
        let q = p / (p - 1.0);
        let psi = |v: &[C64], r: f64| -> Vec<C64> { v.iter().map(|z| phase(*z) * z.norm().powf(r - 1.0)).collect() };
        let mut x = self.normalized(x0);
        let mut best = OperatorNorm {
            value: self.ratio(&x),
            witness: x.clone(),
        };
        let mut stall = 0;
        for _ in 0..iters {
            let y = self.op.apply(&x);
            let scale = y.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if scale == 0.0 {
                break;
            }
            let ys: Vec<C64> = y.iter().map(|v| v / scale).collect();
            let z = self.op.apply_adjoint(&psi(&ys, p));
            let zs = z.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if zs == 0.0 {
                break;
            }
            let zn: Vec<C64> = z.iter().map(|v| v / zs).collect();
            x = self.normalized(psi(&zn, q));
            let v = self.ratio(&x);
            if v > best.value * (1.0 + 1e-14) {
                best = OperatorNorm {
                    value: v,
                    witness: x.clone(),
                };
                stall = 0;
            } else {
                stall += 1;
                if stall >= 5 {
                    break;
                }
            }
        }
        best
    }

    /// Normalized gradient ascent on `ln ρ(Ax) - ln ρ(x)` with backtracking.
    fn ascend(&self, x0: Vec<C64>, iters: usize) -> OperatorNorm {
        let mut x = self.normalized(x0);
        let mut value = self.ratio(&x);
        let mut eta = 0.25;
        for _ in 0..iters {
            let y = self.op.apply(&x);
            let (Ok((ny, gy)), Ok((nx, gx))) = (
                self.kind.norm_with_gradient(&magnitudes(&y)),
                self.kind.norm_with_gradient(&magnitudes(&x)),
            ) else {
                break;
            };
            if !(ny > 0.0 && nx > 0.0) {
                break;
            }
            let sy: Vec<C64> = y.iter().zip(&gy).map(|(v, g)| phase(*v) * (*g / ny)).collect();
            let back = self.op.apply_adjoint(&sy);
            let dir: Vec<C64> = back.iter().zip(&x).zip(&gx).map(|((b, v), g)| b - phase(*v) * (*g / nx)).collect();
            let dn = l2(&dir);
            if !(dn > 0.0) || !dn.is_finite() {
                break;
            }
            let mut moved = false;
            while eta > 1e-7 {
                let trial: Vec<C64> = x.iter().zip(&dir).map(|(v, d)| v + d * (eta / dn)).collect();
                let tv = self.ratio(&trial);
                if tv > value {
                    x = self.normalized(trial);
                    value = tv;
                    eta = (eta * 1.5).min(1.0);
                    moved = true;
                    break;
                }
                eta *= 0.5;
            }
            if !moved {
                break;
            }
        }
        OperatorNorm { value, witness: x }
    }

    fn improve(&self, x0: Vec<C64>, iters: usize) -> OperatorNorm {
        match self.kind {
            SpaceKind::LebesgueP { p } if p == 2.0 => self.power_l2(x0, iters),
            SpaceKind::LebesgueP { p } if p > 1.0 && p.is_finite() => {
                let stage = self.power_lp(x0, p, iters);
                let polished = self.ascend(stage.witness.clone(), iters / 4 + 1);
                if polished.value > stage.value {
                    polished
                } else {
                    stage
                }
            }
            _ => self.ascend(x0, iters),
        }
    }

    /// Ratios of basis vectors: every column for small or `ℓ¹` problems, an
    /// evenly spaced subset otherwise.
    fn basis_candidates(&self, all: bool) -> Vec<(f64, usize)> {
        let dim = self.op.dim();
        let unit = self.kind.norm_of_magnitudes(&[1.0]).unwrap_or(1.0);
        let ks: Vec<usize> = if all || dim <= ALL_COLUMNS_LIMIT {
            (0..dim).collect()
        } else {
            (0..SPACED_COLUMNS).map(|i| i * (dim - 1) / (SPACED_COLUMNS - 1)).collect()
        };
        ks.into_par_iter()
            .map(|k| {
                let col = self.op.column(k);
                let v = self.kind.norm_of_magnitudes(&magnitudes(&col)).unwrap_or(0.0) / unit;
                (v, k)
            })
            .collect()
    }

    fn run(&self, starts: Vec<Vec<C64>>, opts: &LowerOptions, basis_all: bool) -> OperatorNorm {
        let dim = self.op.dim();
        let mut best = OperatorNorm {
            value: 0.0,
            witness: vec![ZERO; dim],
        };
        let consider = |cand: OperatorNorm, best: &mut OperatorNorm| {
            if cand.value > best.value {
                *best = cand;
            }
        };

        let mut basis = self.basis_candidates(basis_all);
        basis.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let unit_vec = |k: usize| {
            let mut e = vec![ZERO; dim];
            e[k] = C64::new(1.0, 0.0);
            e
        };
        if let Some(&(v, k)) = basis.first() {
            consider(
                OperatorNorm {
                    value: v,
                    witness: unit_vec(k),
                },
                &mut best,
            );
        }

        // ℓ² witness first; it seeds every other space.
        let l2_engine = Engine {
            op: self.op,
            kind: SpaceKind::LebesgueP { p: 2.0 },
        };
        let mut seeds: Vec<Vec<C64>> = starts;
        if let Some(first) = seeds.first().cloned() {
            let w = l2_engine.power_l2(first, opts.iterations);
            seeds.push(w.witness);
        }
        let mut scored: Vec<(f64, Vec<C64>)> = seeds.into_iter().map(|s| (self.ratio(&s), s)).collect();
        scored.extend(basis.iter().take(POLISHED_STARTS).map(|&(v, k)| (v, unit_vec(k))));
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        scored.truncate(POLISHED_STARTS + 2);

        let mut jobs: Vec<Vec<C64>> = scored.into_iter().map(|(_, s)| s).collect();
        for r in 0..opts.restarts {
            let mut rng = stream_rng(opts.seed, r as u64 + 1);
            jobs.push(
                (0..dim)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect(),
            );
        }
        let results: Vec<OperatorNorm> = jobs.into_par_iter().map(|x| self.improve(x, opts.iterations)).collect();
        for r in results {
            consider(r, &mut best);
        }
        best
    }
}

/// Lower bound for the operator norm of `op` on `ℓ^p` (or any unweighted
/// space kind) by basis vectors, the `ℓ²` singular vector, and multi-start
/// power/ascent iterations. Exact for `p = 1`.
pub fn lp_operator_norm(op: &dyn LinearOperator, kind: SpaceKind, opts: &LowerOptions) -> Result<OperatorNorm> {
    if opts.iterations == 0 {
        return domain("norm search needs at least one iteration");
    }
    let engine = Engine { op, kind };
    let dim = op.dim();
    let flat = vec![C64::new(1.0, 0.0); dim];
    let exact_l1 = matches!(kind, SpaceKind::LebesgueP { p } if p == 1.0);
    Ok(engine.run(vec![flat], opts, exact_l1))
}

/// Sine window modulated to frequency `theta`, on `dim` points.
fn modulated_bump(dim: usize, theta: f64) -> Vec<C64> {
    let n = (dim / 2) as f64;
    (0..dim)
        .map(|i| {
            let k = i as f64 - n;
            let s = (PI * (i as f64 + 1.0) / (dim as f64 + 1.0)).sin();
            C64::from_polar(s, k * theta)
        })
        .collect()
}

/// Frequencies worth probing: the global maximiser of `|a|` and the centre of
/// the widest window on which `|a|` stays large (away from jumps).
fn peak_frequencies(a: &Symbol, n: usize) -> Vec<f64> {
    let m = 4096;
    let vals: Vec<f64> = a.grid_values(m).iter().map(|v| v.norm()).collect();
    let theta = |j: usize| -PI + 2.0 * PI * j as f64 / m as f64;
    let mut out = vec![a.sup_norm_report().argmax];
    let half = ((8.0 * m as f64 / (2.0 * PI * n as f64)).ceil() as usize).clamp(1, m / 4);
    let mut best = (f64::NEG_INFINITY, 0);
    for j in 0..m {
        let lo = (0..=2 * half).map(|d| vals[(j + m + d - half) % m]).fold(f64::INFINITY, f64::min);
        if lo > best.0 {
            best = (lo, j);
        }
    }
    out.push(theta(best.1));
    out
}

/// Certified lower bound for `‖a‖_{M_{X(Z,w)}}` from the section on `[-N, N]`.
pub fn multiplier_norm_lower(
    a: &Symbol,
    spec: &SpaceSpec,
    n: usize,
    restarts: usize,
    iterations: usize,
    seed: u64,
) -> Result<BoundEstimate> {
    multiplier_norm_lower_with(
        a,
        spec,
        n,
        &LowerOptions {
            restarts,
            iterations,
            seed,
            warm_start: None,
        },
    )
}

/// [`multiplier_norm_lower`] with a warm start.
///
/// The search runs on `ψ = wφ` against `wL(a)w^{-1}` in the unweighted space;
/// the reported witness is `φ` and the reported value is recomputed as
/// `‖P_N(a * φ)‖ / ‖φ‖`.
pub fn multiplier_norm_lower_with(a: &Symbol, spec: &SpaceSpec, n: usize, opts: &LowerOptions) -> Result<BoundEstimate> {
    if opts.iterations == 0 {
        return domain("norm search needs at least one iteration");
    }
    let section = FiniteSection::new(a, n, spec.weight.as_ref())?;
    let dim = section.dim();
    let w = section.weights().to_vec();

    let mut starts: Vec<Vec<C64>> = Vec::new();
    for theta in peak_frequencies(a, n) {
        let bump = modulated_bump(dim, theta);
        starts.push(bump.iter().zip(&w).map(|(v, wk)| v * wk).collect());
        starts.push(bump);
    }
    if let Some(ws) = &opts.warm_start {
        starts.push(section.from_sequence(ws).iter().zip(&w).map(|(v, wk)| v * wk).collect());
    }

    let engine = Engine {
        op: &section,
        kind: spec.kind,
    };
    let exact_l1 = matches!(spec.kind, SpaceKind::LebesgueP { p } if p == 1.0);
    let found = engine.run(starts, opts, exact_l1);

    let phi = section.to_sequence(&found.witness.iter().zip(&w).map(|(v, wk)| v / wk).collect::<Vec<_>>());
    let params = EstimateParams {
        n,
        iterations: opts.iterations,
        restarts: opts.restarts,
        seed: opts.seed,
    };
    Ok(BoundEstimate::lower_only(found.value, Some(phi), params))
}

/// Lower bounds at increasing `N`, each warm-started from the previous
/// witness and clamped to be nondecreasing.
pub fn multiplier_norm_sweep(a: &Symbol, spec: &SpaceSpec, ns: &[usize], opts: &LowerOptions) -> Result<Vec<BoundEstimate>> {
    if ns.windows(2).any(|w| w[1] < w[0]) {
        return domain("sweep sizes must be nondecreasing");
    }
    let mut out: Vec<BoundEstimate> = Vec::with_capacity(ns.len());
    let mut warm = opts.warm_start.clone();
    for &n in ns {
        let o = LowerOptions {
            warm_start: warm.clone(),
            ..opts.clone()
        };
        let mut est = multiplier_norm_lower_with(a, spec, n, &o)?;
        if let Some(prev) = out.last() {
            if est.lower < prev.lower {
                est.lower = prev.lower;
                est.witness = prev.witness.clone();
            }
        }
        warm = est.witness.clone();
        out.push(est);
    }
    Ok(out)
}

/// Constants for [`multiplier_norm_upper`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UpperCalibration {
    /// Working value of `c_{X,w}` in `c (‖a‖_∞ + V(a))`.
    pub stechkin: Option<f64>,
    /// The same constant for the associate space `X'(w^{-1})`.
    pub stechkin_dual: Option<f64>,
}

fn is_plain_l2(spec: &SpaceSpec) -> bool {
    matches!(spec.kind, SpaceKind::LebesgueP { p } if p == 2.0) && !spec.is_weighted()
}

/// Upper bound for `‖a‖_{M_{X(Z,w)}}`: the smaller of the calibrated
/// Stechkin bound and, on unweighted `ℓ²`, the exact `‖a‖_∞`. When both a
/// primal and dual constant are given, `√(upper_X · upper_{X'})` is reported
/// in `advisory` as a consistency value for `‖a‖_∞`.
pub fn multiplier_norm_upper(a: &Symbol, spec: &SpaceSpec, cal: &UpperCalibration) -> Result<BoundEstimate> {
    let mut est = BoundEstimate::lower_only(0.0, None, EstimateParams::default());
    let mut consider = |v: f64, m: UpperMethod| {
        if est.upper.is_none_or(|u| v < u) {
            est.upper = Some(v);
            est.method = Some(m);
        }
    };
    let sup = a.sup_norm();
    if is_plain_l2(spec) {
        consider(sup, UpperMethod::LinfExact);
    }
    let stechkin = cal.stechkin.map(|c| stechkin_bound(a, c)).transpose()?;
    if let Some(s) = stechkin {
        consider(s, UpperMethod::Stechkin);
    }
    if let (Some(up), Some(cd)) = (est.upper, cal.stechkin_dual) {
        let dual = stechkin_bound(a, cd)?;
        est.advisory = Some((up * dual).sqrt());
    }
    // Every multiplier norm dominates ‖a‖_∞.
    est.lower = sup;
    if let Some(u) = est.upper {
        est.lower = est.lower.min(u);
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::DenseMatrix;
    use crate::weights::{Domain, Weight};
    use crate::YoungFunction;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn quick() -> LowerOptions {
        LowerOptions {
            restarts: 4,
            iterations: 100,
            seed: 1,
            warm_start: None,
        }
    }

    #[test]
    fn constant_symbol_is_exact() {
        let k = Symbol::constant(c(-1.5, 2.0));
        let specs = [
            SpaceSpec::lebesgue(2.0).unwrap(),
            SpaceSpec::lebesgue(3.0).unwrap().with_weight(Weight::power(0.2, Domain::FullLine)),
            SpaceSpec::lorentz(3.0, 1.5).unwrap(),
            SpaceSpec::orlicz(YoungFunction::LogPower { p: 2.0, s: 1.0 }).unwrap(),
        ];
        for spec in &specs {
            let est = multiplier_norm_lower_with(&k, spec, 8, &quick()).unwrap();
            assert!((est.lower - 2.5).abs() < 1e-14, "{}: {}", spec.label(), est.lower);
        }
    }

    #[test]
    fn shift_matches_basis_brute_force() {
        for gamma in [0.3, -0.4] {
            let w = Weight::power(gamma, Domain::FullLine);
            let spec = SpaceSpec::lebesgue(3.0).unwrap().with_weight(w.clone());
            let n = 12;
            let est = multiplier_norm_lower_with(&Symbol::exponential(1), &spec, n, &quick()).unwrap();
            let brute = (-(n as i64)..n as i64).map(|k| w.value(k + 1) / w.value(k)).fold(0.0, f64::max);
            assert!((est.lower - brute).abs() < 1e-12, "γ={gamma}: {} vs {brute}", est.lower);
        }
    }

    #[test]
    fn witness_certifies_the_value() {
        let a = Symbol::hat(1.0, 2.0).unwrap();
        let spec = SpaceSpec::lebesgue(3.0).unwrap().with_weight(Weight::power(0.2, Domain::FullLine));
        let n = 32;
        let est = multiplier_norm_lower_with(&a, &spec, n, &quick()).unwrap();
        let phi = est.witness.unwrap();
        let out = crate::laurent::convolve(&a, &phi, 4 * n).unwrap().sequence;
        let ni = n as i64;
        let truncated = FiniteSequence::from_fn(-ni, ni, |k| out.get(k));
        let r = spec.norm(&truncated).unwrap() / spec.norm(&phi).unwrap();
        assert!((r - est.lower).abs() < 1e-10 * r, "{r} vs {}", est.lower);
    }

    #[test]
    fn l2_approaches_sup_norm() {
        let a = Symbol::trig_poly(FiniteSequence::from_real(-1, &[1.0, 0.0, 1.0, 0.5]));
        let est = multiplier_norm_lower_with(&a, &SpaceSpec::lebesgue(2.0).unwrap(), 256, &quick()).unwrap();
        assert!(est.lower <= 2.5 + 1e-9);
        assert!(est.lower > 0.98 * 2.5);
    }

    #[test]
    fn sweep_is_monotone() {
        let a = Symbol::indicator(0.0, PI, 1.0).unwrap();
        let spec = SpaceSpec::lorentz(3.0, 2.0).unwrap();
        let est = multiplier_norm_sweep(&a, &spec, &[4, 8, 16, 32], &quick()).unwrap();
        assert!(est.windows(2).all(|w| w[1].lower >= w[0].lower));
    }

    #[test]
    fn l1_norm_is_max_column_sum() {
        let m = DenseMatrix::from_fn(5, |i, j| c((i * 3 + j) as f64 % 4.0 - 1.0, (i + 2 * j) as f64 % 3.0));
        let exact = (0..5).map(|j| (0..5).map(|i| m.get(i, j).norm()).sum::<f64>()).fold(0.0, f64::max);
        let est = lp_operator_norm(&m, SpaceKind::LebesgueP { p: 1.0 }, &quick()).unwrap();
        assert!((est.value - exact).abs() < 1e-14);
    }

    #[test]
    fn diagonal_norms_agree_across_p() {
        let d = DenseMatrix::diagonal(&[c(0.5, 0.0), c(0.0, -3.0), c(2.0, 1.0), c(1.0, 0.0)]);
        for p in [1.0, 1.5, 2.0, 3.0, 8.0] {
            let v = lp_operator_norm(&d, SpaceKind::LebesgueP { p }, &quick()).unwrap().value;
            assert!((v - 3.0).abs() < 1e-12, "p={p}: {v}");
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let a = Symbol::exponential(1);
        assert!(multiplier_norm_lower(&a, &SpaceSpec::lebesgue(2.0).unwrap(), 4, 1, 0, 0).is_err());
    }

    #[test]
    fn upper_routes() {
        let l2 = SpaceSpec::lebesgue(2.0).unwrap();
        let none = UpperCalibration::default();
        let k = multiplier_norm_upper(&Symbol::constant(c(0.0, -2.0)), &l2, &none).unwrap();
        assert_eq!(k.upper, Some(2.0));
        assert_eq!(k.method, Some(UpperMethod::LinfExact));
        let cal = UpperCalibration {
            stechkin: Some(1.0),
            stechkin_dual: Some(1.0),
        };
        let e1 = multiplier_norm_upper(&Symbol::exponential(1), &l2, &cal).unwrap();
        assert!((e1.upper.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(e1.method, Some(UpperMethod::LinfExact));
        assert!(e1.advisory.is_some());
        let l3 = SpaceSpec::lebesgue(3.0).unwrap();
        let s = multiplier_norm_upper(&Symbol::exponential(1), &l3, &cal).unwrap();
        assert_eq!(s.method, Some(UpperMethod::Stechkin));
        assert!(multiplier_norm_upper(&Symbol::exponential(1), &l3, &none).unwrap().upper.is_none());
    }
}
