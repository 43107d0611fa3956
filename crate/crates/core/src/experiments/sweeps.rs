//! Muckenhoupt weight sweeps and Boyd index tables.

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::report::{Report, ReportRow, Tag};
use crate::boyd::{boyd_indices, DEFAULT_BUDGET, DEFAULT_J_MAX, FIT_TOLERANCE};
use crate::error::{Error, Result};
use crate::spaces::SpaceSpec;
use crate::weights::{
    ap_membership_verdict, dyadic_ladder, reverse_holder_probe, stability_probe, Domain, Verdict, VerdictOptions, Weight,
};

pub const DEFAULT_PARAMETERS: &[f64] = &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const DEFAULT_EXPONENTS: &[f64] = &[2.0];
pub const DEFAULT_WEIGHT_BUDGET: usize = 1 << 12;
pub const DEFAULT_DELTAS: &[f64] = &[0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
pub const DEFAULT_REVERSE_HOLDER_CAP: f64 = 10.0;
pub const DEFAULT_STABILITY_P: f64 = 2.0;
pub const DEFAULT_STABILITY_STEPS: &[f64] = &[-0.1, -0.05, 0.0, 0.05, 0.1];
pub const DEFAULT_BOYD_SPACES: &[&str] = &["lp(1.5)", "lp(2)", "lp(3)", "lorentz(3,1.5)"];

fn or_default(v: &[f64], d: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        d.to_vec()
    } else {
        v.to_vec()
    }
}

fn trace_text(trace: &[(usize, f64)]) -> String {
    trace.iter().map(|(b, v)| format!("{b}:{v}")).collect::<Vec<_>>().join(";")
}

/// Grid over (family parameter, p): scanned characteristic and its growth
/// trace, membership verdict, reverse Hölder best `(δ, C)`, and the
/// stability box radius at `p0` for in-evidence rows.
pub fn run_weight_sweep(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let ws = &cfg.weights;
    let family = ws.family.as_deref().unwrap_or("power");
    let base = match family {
        "exponent" => Some(
            cfg.weight_literal()?
                .ok_or_else(|| Error::Config("weights.family = 'exponent' needs a 'weight'".into()))?,
        ),
        _ => None,
    };
    let make = |t: f64| -> Weight {
        match &base {
            Some(w) => w.pow(1.0 + t),
            None => Weight::power(t, Domain::FullLine),
        }
    };
    let parameters = or_default(&ws.parameters, DEFAULT_PARAMETERS);
    let exponents = or_default(&ws.exponents, DEFAULT_EXPONENTS);
    let deltas = or_default(&ws.deltas, DEFAULT_DELTAS);
    let steps = or_default(&ws.stability_steps, DEFAULT_STABILITY_STEPS);
    if !steps.contains(&0.0) {
        return Err(Error::Config("weights.stability_steps must contain 0".into()));
    }
    let budget = ws.budget.unwrap_or(DEFAULT_WEIGHT_BUDGET);
    let cap = ws.reverse_holder_cap.unwrap_or(DEFAULT_REVERSE_HOLDER_CAP);
    let p0 = ws.stability_p.unwrap_or(DEFAULT_STABILITY_P);
    let ladder = dyadic_ladder(budget);
    let opts = VerdictOptions::default();

    let cells: Vec<(f64, f64)> = parameters.iter().flat_map(|&t| exponents.iter().map(move |&p| (t, p))).collect();
    let rows = cells
        .par_iter()
        .map(|&(t, p)| {
            let w = make(t);
            let m = ap_membership_verdict(&w, p, &ladder, &opts)?;
            let value = m.trace.last().map(|x| x.1).unwrap_or(f64::NAN);
            let rh = reverse_holder_probe(&w, p, budget, &deltas, cap)?;
            let radius = if p == p0 && m.verdict == Verdict::InApEvidence {
                let p_grid: Vec<f64> = steps.iter().map(|s| p0 + s).collect();
                Some(stability_probe(&w, p0, &steps, &p_grid, budget, &opts)?.box_radius)
            } else {
                None
            };
            Ok(ReportRow::new()
                .param("family", family)
                .param("parameter", t)
                .param("p", p)
                .param("weight", w.label())
                .param("budget", budget)
                .measured("characteristic", Tag::Lower, value)
                .measured("trace", Tag::Lower, trace_text(&m.trace))
                .measured("final_growth", Tag::Exact, m.final_growth)
                .measured("verdict", Tag::Estimate, m.verdict.as_str())
                .measured("rh_delta", Tag::Estimate, rh.best.map(|b| b.delta))
                .measured("rh_constant", Tag::Lower, rh.best.map(|b| b.constant))
                .measured("stability_radius", Tag::Estimate, radius))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("weights");
    for r in rows {
        report.push(r);
    }
    Ok(report)
}

/// One row per unweighted space: `α̂`, `β̂`, fit quality, and for `ℓ^p` the
/// duality residual `|α̂_{X'} - (1 - β̂_X)|`.
pub fn run_boyd_table(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let literals: Vec<String> = if cfg.boyd.spaces.is_empty() {
        match &cfg.space {
            Some(s) => vec![s.clone()],
            None => DEFAULT_BOYD_SPACES.iter().map(|s| s.to_string()).collect(),
        }
    } else {
        cfg.boyd.spaces.clone()
    };
    let specs: Vec<SpaceSpec> = literals.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    if let Some(s) = specs.iter().find(|s| s.weight.is_some()) {
        return Err(Error::Config(format!("Boyd indices are defined for unweighted spaces, got {}", s.label())));
    }
    let j_max = cfg.boyd.j_max.unwrap_or(DEFAULT_J_MAX);
    let budget = cfg.boyd.budget.unwrap_or(DEFAULT_BUDGET);
    let rows = specs
        .par_iter()
        .map(|spec| {
            let est = boyd_indices(spec, j_max, budget, cfg.seed)?;
            Ok(ReportRow::new()
                .param("space", spec.label())
                .param("j_max", j_max)
                .param("budget", budget)
                .measured("alpha_hat", Tag::Estimate, est.alpha_hat)
                .measured("beta_hat", Tag::Estimate, est.beta_hat)
                .measured("alpha_r2", Tag::Exact, est.alpha_fit.r_squared)
                .measured("beta_r2", Tag::Exact, est.beta_fit.r_squared)
                .measured("dual_alpha_hat", Tag::Estimate, est.duality.map(|d| d.alpha_dual))
                .measured("duality_residual", Tag::Estimate, est.duality.map(|d| d.residual))
                .measured("ordered", Tag::Estimate, est.is_ordered(FIT_TOLERANCE)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("boyd");
    for r in rows {
        report.push(r);
    }
    Ok(report)
}
