//! Convergence of Fejér means in the multiplier norm.
//!
//! For a continuous symbol of bounded variation the deficit `σ_n(a) - a` is
//! bounded through interpolation between `ℓ²` (where the multiplier norm is
//! the sup norm) and a perturbed weighted space `ℓ^{p(1+δ)}(w^{1+δ'})` (where
//! it is at most `2c(‖a‖_∞ + V(a))`):
//!
//! `C max{(‖a‖_∞+V)^{θ_p}, (‖a‖_∞+V)^{θ_q}} · max{‖σ_n-a‖_∞^{1-θ_p}, ‖σ_n-a‖_∞^{1-θ_q}}`
//!
//! with `1/p = (1-θ_p)/2 + θ_p/(p(1+δ))` and `(1+δ')θ_p = 1`. The constant
//! `C` is not constructive; its Stechkin factor is calibrated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calibrate::{calibrate_space, default_fixture_literals, lower_options, parse_fixtures, DEFAULT_SECTION};
use super::config::ExperimentConfig;
use super::report::{Report, ReportRow, Tag};
use crate::error::{Error, Result};
use crate::laurent::multiplier_norm_lower_with;
use crate::spaces::{SpaceKind, SpaceSpec, YoungFunction};
use crate::symbols::{fejer_mean, Symbol};

pub const DEFAULT_SYMBOL: &str = "hat(1, pi)";
pub const DEFAULT_SPACE: &str = "lp(3)+power(0.2)";
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_DEGREES: &[usize] = &[1, 2, 4, 8, 16, 32, 64, 128, 256];

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// One interpolation endpoint `r ∈ {p, q}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub exponent: f64,
    /// `δ` in `r(1+δ)`; zero when `θ = 0`.
    pub delta: f64,
    pub theta: f64,
    /// `1 + δ'`, the power applied to the weight.
    pub weight_power: f64,
    /// `ℓ^{r(1+δ)}(w^{1+δ'})`.
    pub perturbed: SpaceSpec,
}

/// Solves `1/r = (1-θ)/2 + θ/(r(1+δ))` for `θ`, with `δ` signed like `r - 2`.
pub fn interpolation_endpoint(r: f64, spec: &SpaceSpec, delta: f64) -> Result<Endpoint> {
    if !(r > 1.0 && r.is_finite()) {
        return config_err(format!("interpolation endpoint must lie in (1, ∞), got {r}"));
    }
    let weighted = spec.is_weighted();
    if r == 2.0 {
        if weighted {
            return config_err(
                "endpoint 2 with a nonconstant weight admits no θ in (0, 1); set fejer.p / fejer.q away from 2",
            );
        }
        return Ok(Endpoint {
            exponent: r,
            delta: 0.0,
            theta: 0.0,
            weight_power: 1.0,
            perturbed: SpaceSpec::lebesgue(2.0)?,
        });
    }
    let delta = if r > 2.0 { delta } else { -delta };
    let r1 = r * (1.0 + delta);
    if r1 <= 1.0 {
        return config_err(format!("perturbed exponent {r1} must exceed 1; lower fejer.delta"));
    }
    let theta = (0.5 - 1.0 / r) / (0.5 - 1.0 / r1);
    let weight_power = 1.0 / theta;
    let mut perturbed = SpaceSpec::lebesgue(r1)?;
    if let Some(w) = &spec.weight {
        perturbed = perturbed.with_weight(w.pow(weight_power));
    }
    Ok(Endpoint {
        exponent: r,
        delta,
        theta,
        weight_power,
        perturbed,
    })
}

/// Lebesgue endpoints bracketing the space: `p = q = r` for `ℓ^r`, otherwise
/// `1 + 0.8(r-1)` and `1.25r` around the space's exponent `r`.
pub fn default_endpoints(kind: &SpaceKind) -> Result<(f64, f64)> {
    let r = match *kind {
        SpaceKind::LebesgueP { p } => {
            if !(p > 1.0 && p.is_finite()) {
                return config_err(format!("Fejér convergence needs 1 < p < ∞ (nontrivial Boyd indices), got p = {p}"));
            }
            return Ok((p, p));
        }
        SpaceKind::Lorentz { p, .. } => p,
        SpaceKind::Orlicz(YoungFunction::Power { p }) | SpaceKind::Orlicz(YoungFunction::LogPower { p, .. }) => p,
    };
    if r <= 1.0 {
        return config_err(format!("Fejér convergence needs nontrivial Boyd indices, got exponent {r}"));
    }
    Ok((1.0 + 0.8 * (r - 1.0), 1.25 * r))
}

fn l2_deficit(d: &Symbol) -> (f64, Tag) {
    match d.as_trig_poly() {
        Some(c) => (c.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(), Tag::Exact),
        None => {
            let m = 1 << 14;
            let s: f64 = d.grid_values(m).iter().map(|v| v.norm_sqr()).sum();
            ((s / m as f64).sqrt(), Tag::Estimate)
        }
    }
}

fn stechkin_constant(cfg: &ExperimentConfig, a_literal: &str, end: &Endpoint, n: usize) -> Result<f64> {
    if end.theta == 0.0 {
        return Ok(1.0);
    }
    if let Some(c) = cfg.fejer.stechkin {
        return Ok(c);
    }
    let mut literals = default_fixture_literals();
    if !literals.iter().any(|l| l == a_literal) {
        literals.push(a_literal.to_owned());
    }
    let fixtures = parse_fixtures(&literals)?;
    Ok(calibrate_space(&end.perturbed, &fixtures, n, &lower_options(cfg))?.constant)
}

/// Emits one row per Fejér degree.
pub fn run_fejer_convergence(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let literal = cfg.symbol.clone().unwrap_or_else(|| DEFAULT_SYMBOL.to_owned());
    let a = cfg.symbol_or(DEFAULT_SYMBOL)?;
    if !a.is_continuous() {
        return config_err(format!(
            "Fejér convergence in the multiplier norm needs a continuous symbol of bounded variation; '{literal}' has jumps"
        ));
    }
    let spec = cfg.space_or(DEFAULT_SPACE)?;
    let (dp, dq) = default_endpoints(&spec.kind)?;
    let (p, q) = (cfg.fejer.p.unwrap_or(dp), cfg.fejer.q.unwrap_or(dq));
    let delta = cfg.fejer.delta.unwrap_or(DEFAULT_DELTA);
    let ep = interpolation_endpoint(p, &spec, delta)?;
    let eq = if q == p { ep.clone() } else { interpolation_endpoint(q, &spec, delta)? };

    let degrees = cfg.degrees_or(DEFAULT_DEGREES);
    let n_section = *cfg.sections_or(&[DEFAULT_SECTION]).last().expect("nonempty schedule");
    let cp = stechkin_constant(cfg, &literal, &ep, n_section)?;
    let cq = if q == p { cp } else { stechkin_constant(cfg, &literal, &eq, n_section)? };
    let interp = cfg.fejer.interpolation_constant.unwrap_or(1.0);
    let constant = interp * (2.0 * cp).powf(ep.theta).max((2.0 * cq).powf(eq.theta));
    let mass = a.sup_norm() + a.total_variation();
    let scale = mass.powf(ep.theta).max(mass.powf(eq.theta));
    let opts = lower_options(cfg);

    let rows = degrees
        .par_iter()
        .map(|&n| {
            let d = fejer_mean(&a, n).minus(&a);
            let sup = d.sup_norm();
            let variation = d.total_variation();
            let (l2, l2_tag) = l2_deficit(&d);
            let shape = constant * scale * sup.powf(1.0 - ep.theta).max(sup.powf(1.0 - eq.theta));
            let lower = multiplier_norm_lower_with(&d, &spec, n_section, &opts)?.lower;
            Ok(ReportRow::new()
                .param("symbol", literal.as_str())
                .param("space", spec.label())
                .param("section", n_section)
                .param("p", p)
                .param("q", q)
                .param("theta_p", ep.theta)
                .param("theta_q", eq.theta)
                .param("constant", constant)
                .param("n", n)
                .measured("sup_deficit", Tag::Exact, sup)
                .measured("variation_deficit", Tag::Exact, variation)
                .measured("l2_deficit", l2_tag, l2)
                .measured("lower_bound", Tag::Lower, lower)
                .measured("upper_shape", Tag::CalibratedUpper, shape))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = Report::new("fejer");
    for r in rows {
        report.push(r);
    }
    report.guard_bounds(cfg.tolerance());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(extra: &str) -> ExperimentConfig {
        let base = "sections = [32]\ndegrees = [1, 4, 16]\nrestarts = 2\niterations = 60\n";
        ExperimentConfig::from_toml_str(&format!("{base}{extra}")).unwrap()
    }

    #[test]
    fn theta_solves_the_relation() {
        let spec = SpaceSpec::lebesgue(3.0).unwrap();
        for (r, d) in [(3.0, 0.1), (1.5, 0.1), (4.0, 0.05)] {
            let e = interpolation_endpoint(r, &spec, d).unwrap();
            let r1 = r * (1.0 + e.delta);
            assert!(e.theta > 0.0 && e.theta < 1.0);
            assert!((1.0 / r - ((1.0 - e.theta) / 2.0 + e.theta / r1)).abs() < 1e-14);
            assert!((e.weight_power * e.theta - 1.0).abs() < 1e-14);
        }
        let w = SpaceSpec::lebesgue(2.0).unwrap().with_weight(crate::Weight::power(0.2, crate::Domain::FullLine));
        assert!(matches!(interpolation_endpoint(2.0, &w, 0.1), Err(Error::Config(_))));
        assert_eq!(interpolation_endpoint(2.0, &SpaceSpec::lebesgue(2.0).unwrap(), 0.1).unwrap().theta, 0.0);
    }

    #[test]
    fn rejects_discontinuous_symbols() {
        let e = run_fejer_convergence(&quick("symbol = \"step(0, pi, 1)\"\n")).unwrap_err();
        assert!(matches!(&e, Error::Config(m) if m.contains("continuous")), "{e}");
    }

    #[test]
    fn trig_poly_deficit_decays_like_one_over_n() {
        let cfg = ExperimentConfig::from_toml_str(
            "symbol = \"trigpoly: 0, 1, 0, 1, 0.5\"\nspace = \"lp(2)\"\nsections = [32]\ndegrees = [8, 16, 32, 64]\nrestarts = 2\n",
        )
        .unwrap();
        let r = run_fejer_convergence(&cfg).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let l2: Vec<f64> = r.rows.iter().map(|row| row.get("l2_deficit").unwrap().as_f64().unwrap()).collect();
        for w in l2.windows(2) {
            assert!((w[1] / w[0] - 0.5).abs() < 0.05, "{l2:?}");
        }
    }

    #[test]
    fn weighted_hat_rows_are_consistent() {
        let r = run_fejer_convergence(&quick("")).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rows.len(), 3);
        let sups: Vec<f64> = r.rows.iter().map(|row| row.get("sup_deficit").unwrap().as_f64().unwrap()).collect();
        assert!(sups.windows(2).all(|w| w[1] < w[0]));
    }
}
