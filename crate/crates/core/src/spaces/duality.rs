use rand::Rng;
use rand_distr::StandardNormal;

use super::{SpaceKind, SpaceSpec};
use crate::bounds::{BoundEstimate, EstimateParams, UpperMethod};
use crate::error::{domain, Error, Result};
use crate::numeric::{golden_max, stream_rng};
use crate::sequence::FiniteSequence;
use crate::C64;

/// Magnitudes `m ≥ 0` on the support of `f`, paired as `s_k = conj(sgn f_k) m_k`
/// so that `Σ f_k s_k = Σ |f_k| m_k`.
struct DualSearch<'a> {
    spec: &'a SpaceSpec,
    ks: Vec<i64>,
    x: Vec<f64>,
    w: Vec<f64>,
}

impl DualSearch<'_> {
    /// `Σ |f_k| m_k / ‖m‖_{X(w)}`.
    fn ratio(&self, m: &[f64]) -> f64 {
        let pairing: f64 = self.x.iter().zip(m).map(|(a, b)| a * b).sum();
        let mw: Vec<f64> = m.iter().zip(&self.w).map(|(a, b)| a * b).collect();
        match self.spec.kind.norm_of_magnitudes(&mw) {
            Ok(n) if n > 0.0 && n.is_finite() => pairing / n,
            _ => 0.0,
        }
    }

    /// `m_k = |f_k|^t w_k^{-(t+1)}`, the Hölder extremal shape.
    fn power_family(&self, t: f64) -> Vec<f64> {
        let logs: Vec<f64> = self.x.iter().zip(&self.w).map(|(a, w)| t * a.ln() - (t + 1.0) * w.ln()).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        logs.iter().map(|l| (l - top).exp()).collect()
    }

    /// Mirror ascent on `log ratio` from `m`, multiplicative so entries stay positive.
    fn ascend(&self, mut m: Vec<f64>, steps: usize) -> (Vec<f64>, f64) {
        let mut best = self.ratio(&m);
        let mut eta = 0.5;
        for _ in 0..steps {
            let pairing: f64 = self.x.iter().zip(&m).map(|(a, b)| a * b).sum();
            let mw: Vec<f64> = m.iter().zip(&self.w).map(|(a, b)| a * b).collect();
            let Ok((norm, g)) = self.spec.kind.norm_with_gradient(&mw) else {
                break;
            };
            if norm == 0.0 || pairing == 0.0 {
                break;
            }
            // d/d(ln m_k) of log(pairing / norm).
            let dir: Vec<f64> = (0..m.len())
                .map(|k| m[k] * (self.x[k] / pairing - self.w[k] * g[k] / norm))
                .collect();
            let mut improved = false;
            while eta > 1e-8 {
                let trial: Vec<f64> = m.iter().zip(&dir).map(|(a, d)| a * (eta * d).exp()).collect();
                let v = self.ratio(&trial);
                if v > best {
                    best = v;
                    m = trial;
                    eta *= 1.5;
                    improved = true;
                    break;
                }
                eta *= 0.5;
            }
            if !improved {
                break;
            }
        }
        (m, best)
    }

    fn to_sequence(&self, m: &[f64], f: &FiniteSequence) -> FiniteSequence {
        let (lo, hi) = f.support().unwrap_or((0, 0));
        let mut vals = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (k, mk) in self.ks.iter().zip(m) {
            let fk = f.get(*k);
            vals[(k - lo) as usize] = fk.conj() / fk.norm() * *mk;
        }
        FiniteSequence::new(lo, vals)
    }
}

struct Incumbent {
    value: f64,
    m: Vec<f64>,
}

impl Incumbent {
    fn consider(&mut self, m: Vec<f64>, v: f64) {
        if v > self.value {
            self.value = v;
            self.m = m;
        }
    }
}

/// Lower bound for `‖f‖_{X'(w^{-1})}` as `sup |Σ f_k s_k| / ‖s‖_{X(w)}` over
/// candidate `s`: basis vectors, the sign pattern of `f`, the Hölder power
/// family, and randomized ascent restarts. Weighted `ℓ^p` also gets the exact
/// dual norm `‖f w^{-1}‖_{ℓ^q}` as its upper bound.
pub fn associate_norm_estimate(
    spec: &SpaceSpec,
    f: &FiniteSequence,
    support_radius: usize,
    search_budget: usize,
) -> Result<BoundEstimate> {
    if search_budget == 0 {
        return domain("associate norm search needs a positive budget");
    }
    if f.radius() as u64 > support_radius as u64 {
        return domain(format!("support radius {support_radius} does not cover supp(f)"));
    }
    if !f.is_finite() {
        return domain("sequence has non-finite entries");
    }
    let params = EstimateParams {
        n: support_radius,
        iterations: search_budget,
        restarts: 0,
        seed: 0,
    };
    let exact = spec.associate().map(|dual| dual.norm(f)).transpose()?;
    let with_exact = |mut est: BoundEstimate| {
        if let Some(u) = exact {
            est.upper = Some(u);
            est.method = Some(UpperMethod::HolderExact);
        }
        est
    };
    if f.is_zero() {
        return Ok(with_exact(BoundEstimate::lower_only(0.0, None, params)));
    }

    let (ks, x): (Vec<i64>, Vec<f64>) = f.iter().filter(|(_, v)| v.norm() > 0.0).map(|(k, v)| (k, v.norm())).unzip();
    let w: Vec<f64> = ks.iter().map(|k| spec.weight_at(*k)).collect();
    let search = DualSearch { spec, ks, x, w };

    let mut inc = Incumbent {
        value: f64::NEG_INFINITY,
        m: Vec::new(),
    };

    for i in 0..search.x.len() {
        let mut m = vec![0.0; search.x.len()];
        m[i] = 1.0;
        let v = search.ratio(&m);
        inc.consider(m, v);
    }
    let ones = vec![1.0; search.x.len()];
    let v = search.ratio(&ones);
    inc.consider(ones, v);

    let mut ts: Vec<f64> = (0..=16).map(|i| i as f64 * 0.25).collect();
    if let SpaceKind::LebesgueP { p } = spec.kind {
        let q = super::conjugate_exponent(p);
        if q.is_finite() {
            ts.push(q - 1.0);
        }
    }
    let mut best_t = 0.0;
    let mut best_tv = f64::NEG_INFINITY;
    for &t in &ts {
        let m = search.power_family(t);
        let v = search.ratio(&m);
        if v > best_tv {
            best_tv = v;
            best_t = t;
        }
        inc.consider(m, v);
    }
    let (t_star, _) = golden_max(
        |t| search.ratio(&search.power_family(t)),
        (best_t - 0.25).max(0.0),
        best_t + 0.25,
        60,
    );
    let m = search.power_family(t_star);
    let v = search.ratio(&m);
    inc.consider(m, v);

    // Randomized restarts: perturb the incumbent and ascend.
    let mut rng = stream_rng(0x5eed, 1);
    let restarts = search_budget.min(64);
    let steps = (search_budget / restarts).max(1);
    for r in 0..restarts {
        let start: Vec<f64> = if r == 0 {
            inc.m.clone()
        } else {
            inc.m.iter().map(|m| (m + 1e-3) * (0.5 * rng.sample::<f64, _>(StandardNormal)).exp()).collect()
        };
        let (m, v) = search.ascend(start, steps);
        inc.consider(m, v);
    }

    let witness = search.to_sequence(&inc.m, f);
    let mut est = with_exact(BoundEstimate::lower_only(inc.value, Some(witness), params));
    est.params.restarts = restarts;
    if let Some(u) = est.upper {
        // Rounding can push the search a hair past the closed form.
        est.lower = est.lower.min(u);
    }
    Ok(est)
}

/// Factorization search for the Calderón product `X0^{1-θ} X1^θ`.
struct Factorization<'a> {
    spec0: &'a SpaceSpec,
    spec1: &'a SpaceSpec,
    theta: f64,
    ln_x: Vec<f64>,
    ln_w0: Vec<f64>,
    ln_w1: Vec<f64>,
}

impl Factorization<'_> {
    fn new<'a>(spec0: &'a SpaceSpec, spec1: &'a SpaceSpec, theta: f64, x: &[(i64, f64)]) -> Factorization<'a> {
        Factorization {
            spec0,
            spec1,
            theta,
            ln_x: x.iter().map(|(_, v)| v.ln()).collect(),
            ln_w0: x.iter().map(|(k, _)| spec0.weight_at(*k).ln()).collect(),
            ln_w1: x.iter().map(|(k, _)| spec1.weight_at(*k).ln()).collect(),
        }
    }

    /// `‖y‖_{X0}^{1-θ} ‖z‖_{X1}^θ` with `y = (x / z^θ)^{1/(1-θ)}`, all in log form.
    fn value(&self, ln_z: &[f64]) -> f64 {
        let th = self.theta;
        let ln_y: Vec<f64> = self.ln_x.iter().zip(ln_z).map(|(lx, lz)| (lx - th * lz) / (1.0 - th)).collect();
        let n0 = scaled_norm(self.spec0, &ln_y, &self.ln_w0);
        let n1 = scaled_norm(self.spec1, ln_z, &self.ln_w1);
        match (n0, n1) {
            (Some((s0, l0)), Some((s1, l1))) => ((1.0 - th) * (l0 + s0.ln()) + th * (l1 + s1.ln())).exp(),
            _ => f64::INFINITY,
        }
    }

    /// `ln z_k = s ln x_k + a ln w0_k + b ln w1_k`.
    fn family(&self, s: f64, a: f64, b: f64) -> Vec<f64> {
        (0..self.ln_x.len())
            .map(|k| s * self.ln_x[k] + a * self.ln_w0[k] + b * self.ln_w1[k])
            .collect()
    }
}

/// Norm of `exp(ln_v + ln_w)` returned as `(norm of scaled vector, log scale)`.
fn scaled_norm(spec: &SpaceSpec, ln_v: &[f64], ln_w: &[f64]) -> Option<(f64, f64)> {
    let logs: Vec<f64> = ln_v.iter().zip(ln_w).map(|(a, b)| a + b).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return None;
    }
    let m: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    spec.kind.norm_of_magnitudes(&m).ok().filter(|n| *n > 0.0).map(|n| (n, top))
}

fn lebesgue_exponent(spec: &SpaceSpec) -> Option<f64> {
    match spec.kind {
        SpaceKind::LebesgueP { p } => Some(p),
        _ => None,
    }
}

/// Smallest factorization value found for `x` (magnitudes with indices).
fn factorization_upper(spec0: &SpaceSpec, spec1: &SpaceSpec, theta: f64, x: &[(i64, f64)], budget: usize, seed: u64) -> (f64, Vec<f64>) {
    let fac = Factorization::new(spec0, spec1, theta, x);
    let weighted = spec0.is_weighted() || spec1.is_weighted();

    let mut starts: Vec<[f64; 3]> = [0.0, 0.5, 1.0, 1.5, 2.0].iter().map(|&s| [s, 0.0, 0.0]).collect();
    if let (Some(p0), Some(p1)) = (lebesgue_exponent(spec0), lebesgue_exponent(spec1)) {
        // Closed-form optimum for weighted Lebesgue pairs.
        let (r0, r1) = (1.0 / p0, 1.0 / p1);
        let r = (1.0 - theta) * r0 + theta * r1;
        let ratio = if r > 0.0 { r1 / r } else { 1.0 };
        starts.push([ratio, (1.0 - theta) * ratio, theta * ratio - 1.0]);
    }
    let mut best_params = starts[0];
    let mut best = f64::INFINITY;
    for st in &starts {
        let v = fac.value(&fac.family(st[0], st[1], st[2]));
        if v < best {
            best = v;
            best_params = *st;
        }
    }

    let coords = if weighted { 3 } else { 1 };
    for _sweep in 0..3 {
        for c in 0..coords {
            let centre = best_params[c];
            let (arg, neg) = golden_max(
                |t| {
                    let mut q = best_params;
                    q[c] = t;
                    -fac.value(&fac.family(q[0], q[1], q[2]))
                },
                centre - 1.0,
                centre + 1.0,
                50,
            );
            if -neg < best {
                best = -neg;
                best_params[c] = arg;
            }
        }
    }

    let mut ln_z = fac.family(best_params[0], best_params[1], best_params[2]);
    let mut rng = stream_rng(seed, 2);
    let mut sigma = 0.25;
    for _ in 0..budget {
        let trial: Vec<f64> = ln_z.iter().map(|l| l + sigma * rng.sample::<f64, _>(StandardNormal)).collect();
        let v = fac.value(&trial);
        if v < best {
            best = v;
            ln_z = trial;
        } else {
            sigma = (sigma * 0.97).max(1e-4);
        }
    }
    (best, ln_z)
}

/// Bounds on `‖f‖` in the Calderón product `X0(w0)^{1-θ} X1(w1)^θ`.
///
/// The upper bound is the best factorization `|f| = y^{1-θ} z^θ` found by
/// searching a three-parameter family `z = |f|^s w0^a w1^b` followed by
/// random perturbations. For two weighted Lebesgue spaces the lower bound
/// pairs `f` with a dual vector `g` and divides by a factorization upper bound
/// of `g` in the product of associate spaces; for identical specs it is the
/// norm itself. Other pairs report a lower bound of 0.
pub fn calderon_product_norm_estimate(
    spec0: &SpaceSpec,
    spec1: &SpaceSpec,
    theta: f64,
    f: &FiniteSequence,
    budget: usize,
) -> Result<BoundEstimate> {
    if !(theta > 0.0 && theta < 1.0) {
        return domain(format!("θ must lie in (0, 1), got {theta}"));
    }
    if !f.is_finite() {
        return domain("sequence has non-finite entries");
    }
    let params = EstimateParams {
        n: f.radius() as usize,
        iterations: budget,
        restarts: 0,
        seed: 0,
    };
    if f.is_zero() {
        let mut est = BoundEstimate::lower_only(0.0, None, params);
        est.upper = Some(0.0);
        est.method = Some(UpperMethod::Factorization);
        return Ok(est);
    }
    let x: Vec<(i64, f64)> = f.iter().filter(|(_, v)| v.norm() > 0.0).map(|(k, v)| (k, v.norm())).collect();
    let (upper, _) = factorization_upper(spec0, spec1, theta, &x, budget, 0);

    let lower = if spec0 == spec1 {
        spec0.norm(f)?
    } else if let (Some(d0), Some(d1), Some(p0), Some(p1)) =
        (spec0.associate(), spec1.associate(), lebesgue_exponent(spec0), lebesgue_exponent(spec1))
    {
        lebesgue_pair_lower(&d0, &d1, p0, p1, theta, &x, budget)
    } else {
        0.0
    };

    let mut est = BoundEstimate::lower_only(lower.min(upper), None, params);
    est.upper = Some(upper);
    est.method = Some(UpperMethod::Factorization);
    Ok(est)
}

/// `⟨|x|, g⟩ / U(g)` for Hölder-type dual vectors `g`, where `U` is a
/// factorization upper bound in `X0'^{1-θ} X1'^θ`.
fn lebesgue_pair_lower(d0: &SpaceSpec, d1: &SpaceSpec, p0: f64, p1: f64, theta: f64, x: &[(i64, f64)], budget: usize) -> f64 {
    let r = (1.0 - theta) / p0 + theta / p1;
    // Product weight W = w0^{1-θ} w1^θ, recovered from the dual weights.
    let ln_big_w: Vec<f64> = x
        .iter()
        .map(|(k, _)| -((1.0 - theta) * d0.weight_at(*k).ln() + theta * d1.weight_at(*k).ln()))
        .collect();
    let mut exponents = vec![0.0, 1.0];
    if r > 0.0 && r < 1.0 {
        exponents.push(1.0 / r - 1.0);
    }
    let mut best: f64 = 0.0;
    for t in exponents {
        // g = (xW)^t W, the ℓ^{p'}(W^{-1}) extremal when t = p - 1.
        let logs: Vec<f64> = x.iter().zip(&ln_big_w).map(|((_, v), lw)| t * (v.ln() + lw) + lw).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let g: Vec<(i64, f64)> = x.iter().zip(&logs).map(|((k, _), l)| (*k, (l - top).exp())).collect();
        let pairing: f64 = x.iter().zip(&g).map(|((_, a), (_, b))| a * b).sum();
        let (u, _) = factorization_upper(d0, d1, theta, &g, budget / 2, 1);
        if u.is_finite() && u > 0.0 {
            best = best.max(pairing / u);
        }
    }
    best
}

/// Relative gap between the Calderón-product estimate of `f` in
/// `X^{1/2} (X')^{1/2}` and `‖f‖_{ℓ²}`; only weighted `ℓ^p` has a closed-form `X'`.
pub fn lozanovskii_check(spec: &SpaceSpec, f: &FiniteSequence, budget: usize) -> Result<f64> {
    let dual = spec
        .associate()
        .ok_or_else(|| Error::Unsupported(format!("no closed-form associate space for {}", spec.label())))?;
    let l2 = SpaceSpec::lebesgue(2.0)?.norm(f)?;
    if l2 == 0.0 {
        return Ok(0.0);
    }
    let est = calderon_product_norm_estimate(spec, &dual, 0.5, f, budget)?;
    let upper = est.upper.unwrap_or(f64::INFINITY);
    Ok((upper - l2).abs() / l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{Domain, Weight};
    use crate::YoungFunction;

    fn seq(vals: &[f64]) -> FiniteSequence {
        FiniteSequence::from_real(0, vals)
    }

    #[test]
    fn l2_is_self_dual() {
        let est = associate_norm_estimate(&SpaceSpec::lebesgue(2.0).unwrap(), &FiniteSequence::unit(0), 0, 8).unwrap();
        assert!((est.lower - 1.0).abs() < 1e-12);
        assert_eq!(est.upper, Some(1.0));
    }

    #[test]
    fn l3_dual_of_pair() {
        let est = associate_norm_estimate(&SpaceSpec::lebesgue(3.0).unwrap(), &seq(&[1.0, 1.0]), 1, 32).unwrap();
        let exact = 2f64.powf(2.0 / 3.0);
        assert!((est.upper.unwrap() - exact).abs() < 1e-12);
        assert!((est.lower - exact).abs() < 1e-6);
    }

    #[test]
    fn zero_sequence_has_zero_dual() {
        let spec = SpaceSpec::lorentz(3.0, 1.5).unwrap();
        let est = associate_norm_estimate(&spec, &FiniteSequence::zero(), 0, 4).unwrap();
        assert_eq!(est.lower, 0.0);
    }

    #[test]
    fn associate_rejects_zero_budget_and_small_radius() {
        let spec = SpaceSpec::lebesgue(2.0).unwrap();
        assert!(associate_norm_estimate(&spec, &seq(&[1.0]), 0, 0).is_err());
        assert!(associate_norm_estimate(&spec, &FiniteSequence::unit(5), 2, 4).is_err());
    }

    #[test]
    fn weighted_lebesgue_search_reaches_holder_dual() {
        let spec = SpaceSpec::lebesgue(2.5).unwrap().with_weight(Weight::power(0.3, Domain::FullLine));
        let f = FiniteSequence::from_real(-3, &[0.5, -2.0, 1.0, 0.0, 3.0, 0.25, -1.5]);
        let est = associate_norm_estimate(&spec, &f, 4, 64).unwrap();
        let u = est.upper.unwrap();
        assert!(est.lower <= u);
        assert!((u - est.lower) / u < 1e-8, "{} vs {u}", est.lower);
    }

    #[test]
    fn holder_inequality_with_exact_dual() {
        let spec = SpaceSpec::lebesgue(3.0).unwrap().with_weight(Weight::power(-0.2, Domain::FullLine));
        let f = FiniteSequence::from_real(-2, &[1.0, 2.0, -0.5, 0.7, 3.0]);
        let g = FiniteSequence::from_real(-1, &[0.3, -1.0, 2.0, 0.1]);
        let pairing: C64 = f.iter().map(|(k, v)| v * g.get(k).conj()).sum();
        let bound = spec.norm(&f).unwrap() * associate_norm_estimate(&spec, &g, 4, 8).unwrap().upper.unwrap();
        assert!(pairing.norm() <= bound * (1.0 + 1e-9));
    }

    #[test]
    fn lorentz_dual_lower_is_consistent_with_pairing() {
        let spec = SpaceSpec::lorentz(3.0, 1.5).unwrap();
        let f = seq(&[3.0, 1.0, 2.0, 0.5]);
        let est = associate_norm_estimate(&spec, &f, 4, 64).unwrap();
        let w = est.witness.unwrap();
        let pairing: C64 = f.iter().map(|(k, v)| v * w.get(k)).sum();
        let ratio = pairing.norm() / spec.norm(&w).unwrap();
        assert!((ratio - est.lower).abs() < 1e-10);
    }

    #[test]
    fn product_of_a_space_with_itself() {
        let specs = [
            SpaceSpec::lebesgue(3.0).unwrap(),
            SpaceSpec::lorentz(3.0, 1.5).unwrap(),
            SpaceSpec::orlicz(YoungFunction::LogPower { p: 2.0, s: 1.0 }).unwrap(),
        ];
        let f = seq(&[1.0, -3.0, 0.5, 2.0]);
        for spec in &specs {
            let est = calderon_product_norm_estimate(spec, spec, 0.3, &f, 32).unwrap();
            let n = spec.norm(&f).unwrap();
            assert!((est.upper.unwrap() - n).abs() <= 1e-10 * n, "{}", spec.label());
            assert!((est.lower - n).abs() <= 1e-12 * n);
        }
    }

    #[test]
    fn product_of_unit_vector_is_one() {
        let a = SpaceSpec::lorentz(3.0, 1.5).unwrap();
        let b = SpaceSpec::lebesgue(1.5).unwrap();
        let est = calderon_product_norm_estimate(&a, &b, 0.6, &FiniteSequence::unit(2), 16).unwrap();
        assert!((est.upper.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l1_linf_proxy_midpoint_is_near_l2() {
        let a = SpaceSpec::lebesgue(1.0).unwrap();
        let b = SpaceSpec::lebesgue(1000.0).unwrap();
        let est = calderon_product_norm_estimate(&a, &b, 0.5, &seq(&[1.0, 1.0]), 32).unwrap();
        let u = est.upper.unwrap();
        assert!((u - 2f64.sqrt()).abs() < 1e-3, "{u}");
        assert!(est.lower <= u && (u - est.lower) < 1e-8);
    }

    #[test]
    fn theta_out_of_range() {
        let a = SpaceSpec::lebesgue(2.0).unwrap();
        assert!(calderon_product_norm_estimate(&a, &a, 1.0, &seq(&[1.0]), 1).is_err());
        assert!(calderon_product_norm_estimate(&a, &a, 0.0, &seq(&[1.0]), 1).is_err());
    }

    #[test]
    fn lozanovskii_examples() {
        let f = FiniteSequence::from_real(-2, &[1.0, -0.5, 2.0, 0.0, 0.75]);
        assert!(lozanovskii_check(&SpaceSpec::lebesgue(2.0).unwrap(), &f, 16).unwrap() < 1e-12);
        assert!(lozanovskii_check(&SpaceSpec::lebesgue(4.0).unwrap(), &seq(&[1.0, 1.0, 1.0]), 16).unwrap() <= 1e-6);
        let weighted = SpaceSpec::lebesgue(3.0).unwrap().with_weight(Weight::power(0.2, Domain::FullLine));
        assert!(lozanovskii_check(&weighted, &FiniteSequence::unit(7), 16).unwrap() <= 1e-6);
        assert!(lozanovskii_check(&weighted, &f, 64).unwrap() <= 1e-6);
        assert!(matches!(
            lozanovskii_check(&SpaceSpec::lorentz(3.0, 2.0).unwrap(), &f, 4),
            Err(Error::Unsupported(_))
        ));
    }
}
