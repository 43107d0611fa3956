use serde::{Deserialize, Serialize};

use super::{Repr, Symbol};
use crate::error::{domain, Error, Result};
use crate::sequence::FiniteSequence;
use crate::C64;

/// Which half of the spectrum [`analytic_project`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticSide {
    /// `â(k) = 0` for `k < 0`.
    Plus,
    /// `â(k) = 0` for `k > 0`.
    Minus,
}

/// `s_n(a) = Σ_{|k|≤n} â(k) e^{ikθ}`.
pub fn partial_sum(a: &Symbol, n: usize) -> Symbol {
    let r = n as i64;
    match a.as_trig_poly() {
        Some(c) => Symbol::trig_poly(FiniteSequence::from_fn(-r, r, |k| c.get(k))),
        None => Symbol::trig_poly(FiniteSequence::from_fn(-r, r, |k| a.fourier_coefficient(k))),
    }
}

/// `σ_n(a)`, with coefficients `(1 - |k|/(n+1)) â(k)` for `|k| ≤ n`.
pub fn fejer_mean(a: &Symbol, n: usize) -> Symbol {
    let r = n as i64;
    let scale = |k: i64| 1.0 - k.unsigned_abs() as f64 / (n as f64 + 1.0);
    match a.as_trig_poly() {
        Some(c) => Symbol::trig_poly(FiniteSequence::from_fn(-r, r, |k| c.get(k) * scale(k))),
        None => Symbol::trig_poly(FiniteSequence::from_fn(-r, r, |k| a.fourier_coefficient(k) * scale(k))),
    }
}

/// `K_n(θ) = Σ_{|k|≤n} (1 - |k|/(n+1)) e^{ikθ}`.
pub fn fejer_kernel(n: usize, theta: f64) -> f64 {
    let m = n as f64 + 1.0;
    let s = (0.5 * theta).sin();
    if s.abs() < 1e-4 {
        let tail: f64 = (1..=n).map(|k| (1.0 - k as f64 / m) * (k as f64 * theta).cos()).sum();
        return 1.0 + 2.0 * tail;
    }
    let num = (0.5 * m * theta).sin();
    num * num / (m * s * s)
}

/// `ā`, whose coefficients are `conj(â(-k))`.
pub fn conjugate_symbol(a: &Symbol) -> Symbol {
    match &a.0 {
        Repr::TrigPoly(c) => Symbol::trig_poly(c.reflect().conj()),
        Repr::Sum(terms) => Symbol(Repr::Sum(terms.iter().map(|(c, s)| (c.conj(), conjugate_symbol(s))).collect())),
        _ => a.map_values(&|v: C64| v.conj()),
    }
}

/// Drops the coefficients on the wrong side of zero.
pub fn analytic_project(a: &Symbol, side: AnalyticSide) -> Result<Symbol> {
    let c = a
        .as_trig_poly()
        .ok_or_else(|| Error::Unsupported("analytic projection needs a trigonometric polynomial".into()))?;
    let keep = |k: i64| match side {
        AnalyticSide::Plus => k >= 0,
        AnalyticSide::Minus => k <= 0,
    };
    Ok(Symbol::trig_poly(c.map_indexed(|k, v| if keep(k) { v } else { C64::new(0.0, 0.0) })))
}

/// `c · (‖a‖_∞ + V(a))`.
pub fn stechkin_bound(a: &Symbol, constant: f64) -> Result<f64> {
    if !(constant > 0.0 && constant.is_finite()) {
        return domain(format!("Stechkin constant must be positive, got {constant}"));
    }
    Ok(constant * (a.sup_norm() + a.total_variation()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::stream_rng;
    use rand::Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_poly(seed: u64, deg: i64) -> Symbol {
        let mut rng = stream_rng(seed, 0);
        Symbol::trig_poly(FiniteSequence::from_fn(-deg, deg, |_| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }))
    }

    #[test]
    fn partial_sum_examples() {
        let a = random_poly(1, 5);
        assert_eq!(partial_sum(&a, 5), a);
        assert_eq!(partial_sum(&a, 9), a);
        assert_eq!(partial_sum(&a, 0), Symbol::constant(a.fourier_coefficient(0)));
        let chi = Symbol::indicator(0.0, PI, 1.0).unwrap();
        let s1 = partial_sum(&chi, 1);
        assert!((s1.fourier_coefficient(1) - c(0.0, -1.0 / PI)).norm() < 1e-15);
        assert!((s1.fourier_coefficient(-1) - c(0.0, 1.0 / PI)).norm() < 1e-15);
    }

    #[test]
    fn fejer_examples() {
        let m = fejer_mean(&Symbol::exponential(1), 1);
        assert_eq!(m, Symbol::trig_poly(FiniteSequence::new(1, vec![c(0.5, 0.0)])));
        let k = Symbol::constant(c(2.0, -1.0));
        for n in [0, 3, 40] {
            assert_eq!(fejer_mean(&k, n), k);
        }
    }

    #[test]
    fn fejer_mean_is_average_of_partial_sums() {
        for seed in 0..4 {
            let a = random_poly(seed, 12);
            for n in 0..=16usize {
                let mut acc = FiniteSequence::zero();
                for k in 0..=n {
                    acc = &acc + partial_sum(&a, k).as_trig_poly().unwrap();
                }
                let avg = acc.scale(c(1.0 / (n as f64 + 1.0), 0.0));
                let direct = fejer_mean(&a, n);
                let d = direct.as_trig_poly().unwrap();
                for k in -(n as i64)..=n as i64 {
                    assert!((avg.get(k) - d.get(k)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn kernel_examples() {
        for n in [0usize, 1, 7, 64] {
            assert!((fejer_kernel(n, 0.0) - (n as f64 + 1.0)).abs() < 1e-12);
        }
        assert!(fejer_kernel(1, PI).abs() < 1e-15);
        // Closed form and direct sum agree on either side of the switch.
        for t in [1.5e-4, 2.5e-4, 0.3] {
            let direct: f64 = 1.0 + 2.0 * (1..=9).map(|k| (1.0 - k as f64 / 10.0) * (k as f64 * t).cos()).sum::<f64>();
            assert!((fejer_kernel(9, t) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_has_unit_mass_and_is_nonnegative() {
        for n in 0..=32usize {
            let m = 4096;
            // Trapezoid rule is exact for trigonometric polynomials of degree < m.
            let mass: f64 = (0..m).map(|j| fejer_kernel(n, -PI + 2.0 * PI * j as f64 / m as f64)).sum::<f64>() / m as f64;
            assert!((mass - 1.0).abs() < 1e-10);
        }
        for n in [1usize, 17, 128] {
            let m = 1 << 14;
            for j in 0..m {
                assert!(fejer_kernel(n, -PI + 2.0 * PI * j as f64 / m as f64) >= -1e-12);
            }
        }
    }

    #[test]
    fn conjugation_rules() {
        let real = Symbol::trig_poly(FiniteSequence::new(-1, vec![c(0.5, -0.25), c(2.0, 0.0), c(0.5, 0.25)]));
        assert_eq!(conjugate_symbol(&real), real);
        let ie2 = Symbol::trig_poly(FiniteSequence::new(2, vec![c(0.0, 1.0)]));
        assert_eq!(conjugate_symbol(&ie2).fourier_coefficient(-2), c(0.0, -1.0));
        let a = random_poly(9, 7);
        assert_eq!(conjugate_symbol(&conjugate_symbol(&a)), a);
    }

    #[test]
    fn conjugation_chain_on_every_representation() {
        let fixtures = [
            random_poly(3, 4),
            Symbol::step(vec![-2.0, 0.5], vec![c(1.0, 1.0), c(0.0, -2.0)]).unwrap(),
            Symbol::piecewise_linear(vec![-1.0, 0.2, 2.9], vec![c(0.0, 1.0), c(2.0, 0.0), c(-1.0, -1.0)]).unwrap(),
        ];
        for a in &fixtures {
            let ab = conjugate_symbol(a);
            for n in -64..=64 {
                assert!((ab.fourier_coefficient(n) - a.fourier_coefficient(-n).conj()).norm() < 1e-14);
            }
            for t in [-3.0, -0.4, 1.0, 2.5] {
                assert!((ab.eval(t) - a.eval(t).conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projection_examples() {
        let a = Symbol::trig_poly(FiniteSequence::from_real(-1, &[1.0, 2.0, 1.0]));
        let plus = analytic_project(&a, AnalyticSide::Plus).unwrap();
        assert_eq!(plus, Symbol::trig_poly(FiniteSequence::from_real(0, &[2.0, 1.0])));
        assert_eq!(analytic_project(&plus, AnalyticSide::Plus).unwrap(), plus);
        let minus = analytic_project(&a, AnalyticSide::Minus).unwrap();
        let recombined = Symbol::sum(vec![(c(1.0, 0.0), plus.clone()), (c(1.0, 0.0), minus), (c(-1.0, 0.0), Symbol::constant(c(2.0, 0.0)))]);
        assert_eq!(recombined, a);
        let sig = fejer_mean(&plus, 3);
        assert_eq!(analytic_project(&sig, AnalyticSide::Plus).unwrap(), sig);
        assert!(analytic_project(&Symbol::hat(1.0, 1.0).unwrap(), AnalyticSide::Plus).is_err());
    }

    #[test]
    fn fejer_commutes_with_conjugation_and_projection() {
        let a = random_poly(11, 9);
        for n in [0usize, 3, 8, 20] {
            assert_eq!(fejer_mean(&conjugate_symbol(&a), n), conjugate_symbol(&fejer_mean(&a, n)));
            for side in [AnalyticSide::Plus, AnalyticSide::Minus] {
                assert_eq!(
                    fejer_mean(&analytic_project(&a, side).unwrap(), n),
                    analytic_project(&fejer_mean(&a, n), side).unwrap()
                );
            }
        }
    }

    #[test]
    fn fejer_means_do_not_increase_sup_norm() {
        let fixtures = [
            random_poly(5, 10),
            Symbol::indicator(0.0, PI, 1.0).unwrap(),
            Symbol::hat(1.0, PI).unwrap(),
        ];
        for a in &fixtures {
            let s = a.sup_norm();
            for n in [1usize, 4, 16, 64] {
                assert!(fejer_mean(a, n).sup_norm() <= s + 1e-9);
            }
        }
    }

    #[test]
    fn stechkin_examples() {
        assert!((stechkin_bound(&Symbol::constant(c(-3.0, 0.0)), 1.0).unwrap() - 3.0).abs() < 1e-15);
        let b = stechkin_bound(&Symbol::exponential(1), 1.0).unwrap();
        assert!((b - (1.0 + 2.0 * PI)).abs() < 1e-9);
        assert!(stechkin_bound(&Symbol::exponential(1), 0.0).is_err());
    }
}
