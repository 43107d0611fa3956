//! Named invariant checks across all modules, collected into one summary.
//!
//! Each check reports a discrepancy and the threshold it must not exceed.
//! Failures and errors are collected; the run never stops early.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calibrate::{calibrate_space, parse_fixtures};
use super::config::ExperimentConfig;
use super::fejer::run_fejer_convergence;
use super::report::{Format, Report, ReportRow, Tag};
use crate::boyd::{boyd_indices, DEFAULT_BUDGET, DEFAULT_J_MAX, FIT_TOLERANCE};
use crate::error::{Error, Result};
use crate::laurent::{
    lp_operator_norm, multiplier_norm_lower_with, multiplier_norm_sweep, multiplier_norm_upper, DenseMatrix, LowerOptions,
};
use crate::numeric::{adaptive_simpson, stream_rng};
use crate::sequence::FiniteSequence;
use crate::spaces::{associate_norm_estimate, lozanovskii_check, reflection_invariance_check, SpaceKind, SpaceSpec, YoungFunction};
use crate::symbols::{conjugate_symbol, fejer_mean, partial_sum, Symbol};
use crate::weights::{
    ap_characteristic, ap_membership_verdict, convexity_region_probe, dyadic_ladder, stability_probe, Domain, Verdict,
    VerdictOptions, Weight,
};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A designed counterexample failed, as it should.
    ExpectedFail,
    /// A designed counterexample passed; counts as a failure.
    UnexpectedPass,
    /// The check could not run; counts as a failure.
    Error,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::ExpectedFail => "expected-fail",
            CheckStatus::UnexpectedPass => "unexpected-pass",
            CheckStatus::Error => "error",
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, CheckStatus::Pass | CheckStatus::ExpectedFail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub module: String,
    pub status: CheckStatus,
    pub discrepancy: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status.is_ok())
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.status.is_ok()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn to_report(&self) -> Report {
        let mut report = Report::new("verify");
        for o in &self.outcomes {
            report.push(
                ReportRow::new()
                    .param("check", o.name.as_str())
                    .param("module", o.module.as_str())
                    .param("status", o.status.as_str())
                    .param("threshold", o.threshold)
                    .measured("discrepancy", Tag::Exact, o.discrepancy)
                    .param("detail", o.detail.as_str()),
            );
        }
        report.failures = self.failures().iter().map(|o| format!("{}: {}", o.name, o.detail)).collect();
        report
    }
}

struct Ctx {
    seed: u64,
    tol: f64,
    opts: LowerOptions,
}

/// `(discrepancy, threshold, detail)`; passes when discrepancy ≤ threshold.
type Measure = Result<(f64, f64, String)>;

struct Check {
    name: &'static str,
    expect_fail: bool,
    run: fn(&Ctx) -> Measure,
}

const CHECKS: &[Check] = &[
    Check { name: "spaces.norm-axioms", expect_fail: false, run: norm_axioms },
    Check { name: "spaces.rearrangement-invariance", expect_fail: false, run: rearrangement_invariance },
    Check { name: "spaces.luxemburg-normalization", expect_fail: false, run: luxemburg_normalization },
    Check { name: "spaces.reflection-invariance", expect_fail: false, run: reflection_symmetric },
    Check { name: "spaces.holder-duality", expect_fail: false, run: holder_duality },
    Check { name: "spaces.lozanovskii", expect_fail: false, run: lozanovskii },
    Check { name: "weights.constant-characteristic", expect_fail: false, run: constant_characteristic },
    Check { name: "weights.power-threshold", expect_fail: false, run: power_threshold },
    Check { name: "weights.budget-monotonicity", expect_fail: false, run: budget_monotonicity },
    Check { name: "weights.convexity", expect_fail: false, run: convexity },
    Check { name: "weights.stability", expect_fail: false, run: stability },
    Check { name: "boyd.lebesgue-indices", expect_fail: false, run: lebesgue_indices },
    Check { name: "boyd.duality-residual", expect_fail: false, run: boyd_duality },
    Check { name: "boyd.lorentz-window", expect_fail: false, run: lorentz_window },
    Check { name: "symbols.fourier-quadrature", expect_fail: false, run: fourier_quadrature },
    Check { name: "symbols.fejer-averaging", expect_fail: false, run: fejer_averaging },
    Check { name: "symbols.fejer-sup-bound", expect_fail: false, run: fejer_sup_bound },
    Check { name: "symbols.conjugation", expect_fail: false, run: conjugation },
    Check { name: "laurent.l2-equals-sup", expect_fail: false, run: l2_equals_sup },
    Check { name: "laurent.sweep-monotone", expect_fail: false, run: sweep_monotone },
    Check { name: "laurent.shift-norm", expect_fail: false, run: shift_norm },
    Check { name: "laurent.conjugate-duality", expect_fail: false, run: conjugate_duality },
    Check { name: "laurent.diagonal-interpolation", expect_fail: false, run: diagonal_interpolation },
    Check { name: "laurent.lower-below-upper", expect_fail: false, run: lower_below_upper },
    Check { name: "experiments.determinism", expect_fail: false, run: determinism },
];

const ASYMMETRIC: Check = Check {
    name: "spaces.reflection-invariance[asymmetric]",
    expect_fail: true,
    run: reflection_asymmetric,
};

/// Names of the built-in checks, in execution order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn selected<'a>(cfg: &ExperimentConfig) -> Result<Vec<&'a Check>> {
    let mut out: Vec<&Check> = Vec::new();
    let filters = &cfg.verify.checks;
    for f in filters {
        if !CHECKS.iter().chain([&ASYMMETRIC]).any(|c| c.name.starts_with(f.as_str())) {
            return Err(Error::Config(format!("no verification check matches '{f}'")));
        }
    }
    for c in CHECKS {
        if filters.is_empty() || filters.iter().any(|f| c.name.starts_with(f.as_str())) {
            out.push(c);
        }
    }
    if cfg.verify.inject_asymmetric {
        out.push(&ASYMMETRIC);
    }
    Ok(out)
}

/// Runs the selected checks concurrently; outcomes keep the declared order.
pub fn run_verification_suite(cfg: &ExperimentConfig) -> Result<VerificationSummary> {
    cfg.validate()?;
    let checks = selected(cfg)?;
    let ctx = Ctx {
        seed: cfg.seed,
        tol: cfg.tolerance(),
        opts: LowerOptions {
            restarts: cfg.restarts.unwrap_or(4),
            iterations: cfg.iterations.unwrap_or(200),
            seed: cfg.seed,
            warm_start: None,
        },
    };
    let outcomes = checks
        .par_iter()
        .map(|c| {
            let module = c.name.split('.').next().unwrap_or("").to_owned();
            let (status, discrepancy, threshold, detail) = match (c.run)(&ctx) {
                Ok((d, t, detail)) => {
                    let ok = d <= t;
                    let status = match (ok, c.expect_fail) {
                        (true, false) => CheckStatus::Pass,
                        (false, false) => CheckStatus::Fail,
                        (false, true) => CheckStatus::ExpectedFail,
                        (true, true) => CheckStatus::UnexpectedPass,
                    };
                    (status, d, t, detail)
                }
                Err(e) => (CheckStatus::Error, f64::NAN, f64::NAN, e.to_string()),
            };
            CheckOutcome {
                name: c.name.to_owned(),
                module,
                status,
                discrepancy,
                threshold,
                detail,
            }
        })
        .collect();
    Ok(VerificationSummary { outcomes })
}

fn random_sequence(seed: u64, stream: u64, lo: i64, hi: i64) -> FiniteSequence {
    let mut rng = stream_rng(seed, stream);
    FiniteSequence::from_fn(lo, hi, |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn spec(s: &str) -> SpaceSpec {
    s.parse().expect("built-in literal")
}

fn axiom_specs() -> Vec<SpaceSpec> {
    ["lp(1)", "lp(1.5)", "lp(3)", "lp(inf)", "lorentz(3,1.5)", "orlicz(logpower,2,1)", "lp(3)+power(0.2)", "lorentz(4,2)+power(-0.1)"]
        .iter()
        .map(|s| spec(s))
        .collect()
}

fn norm_axioms(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for (i, s) in axiom_specs().iter().enumerate() {
        for t in 0..16u64 {
            let f = random_sequence(ctx.seed, 100 * i as u64 + 2 * t, -8, 8);
            let g = random_sequence(ctx.seed, 100 * i as u64 + 2 * t + 1, -5, 11);
            let (nf, ng) = (s.norm(&f)?, s.norm(&g)?);
            let nfg = s.norm(&(&f + &g))?;
            worst = worst.max((nfg - nf - ng) / (nf + ng));
            let c = C64::new(-1.5, 0.5);
            worst = worst.max((s.norm(&f.scale(c))? - c.norm() * nf).abs() / (c.norm() * nf));
            worst = worst.max(-nf);
        }
        if s.norm(&FiniteSequence::zero())? != 0.0 {
            worst = f64::INFINITY;
        }
    }
    Ok((worst, ctx.tol, "triangle, homogeneity, positivity on random sequences".into()))
}

fn rearrangement_invariance(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for s in axiom_specs().iter().filter(|s| s.weight.is_none()) {
        for t in 0..8u64 {
            let f = random_sequence(ctx.seed, 500 + t, 0, 20);
            let mut vals = f.values().to_vec();
            vals.reverse();
            vals.rotate_left(7);
            let g = FiniteSequence::new(-40, vals);
            let (a, b) = (s.norm(&f)?, s.norm(&g)?);
            worst = worst.max((a - b).abs() / a);
        }
    }
    Ok((worst, ctx.tol, "norm of permuted and translated sequences".into()))
}

fn luxemburg_normalization(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for phi in [YoungFunction::LogPower { p: 2.0, s: 1.0 }, YoungFunction::Power { p: 3.0 }, YoungFunction::LogPower { p: 1.5, s: 2.0 }] {
        let s = SpaceSpec::orlicz(phi)?;
        for t in 0..8u64 {
            let f = random_sequence(ctx.seed, 700 + t, -6, 6);
            let n = s.norm(&f)?;
            let modular: f64 = f.values().iter().map(|v| phi.eval(v.norm() / n)).sum();
            worst = worst.max((modular - 1.0).abs());
        }
    }
    Ok((worst, 1e-9, "modular at the Luxemburg norm".into()))
}

fn reflection_symmetric(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for s in ["lp(3)+power(0.2)", "lorentz(3,1.5)+power(0.3)", "orlicz(logpower,2,1)+table(-1;2,1,2)", "lp(1.5)+const(2)"] {
        let r = reflection_invariance_check(&spec(s), 16, ctx.seed)?;
        worst = worst.max(r.max_discrepancy);
    }
    Ok((worst, 1e-10, "symmetric weights".into()))
}

fn reflection_asymmetric(ctx: &Ctx) -> Measure {
    let r = reflection_invariance_check(&spec("lp(2)+table(-1;0.5,1,2)"), 16, ctx.seed)?;
    Ok((r.max_discrepancy, 1e-10, format!("asymmetric table weight, norm ratio {}", r.max_ratio)))
}

fn holder_duality(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for s in ["lp(3)+power(0.2)", "lp(1.5)", "lp(4)+power(-0.3)"] {
        let f = random_sequence(ctx.seed, 900, -4, 4);
        let est = associate_norm_estimate(&spec(s), &f, 4, 64)?;
        let u = est.upper.unwrap_or(f64::INFINITY);
        worst = worst.max((u - est.lower) / u).max(est.lower / u - 1.0);
    }
    Ok((worst, 1e-8, "dual-norm search against the exact Hölder dual".into()))
}

fn lozanovskii(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for s in ["lp(2)", "lp(3)+power(0.2)", "lp(1.5)+power(0.4)"] {
        let f = random_sequence(ctx.seed, 950, -3, 3);
        worst = worst.max(lozanovskii_check(&spec(s), &f, 64)?);
    }
    Ok((worst, 1e-6, "Calderón product of X and X' against ℓ²".into()))
}

fn constant_characteristic(_: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for (c, d) in [(1.0, Domain::FullLine), (3.5, Domain::FullLine), (0.2, Domain::HalfLine)] {
        let w = Weight::constant(c, d)?;
        for p in [1.5, 2.0, 4.0] {
            worst = worst.max((ap_characteristic(&w, p, 1024, 64)?.value - 1.0).abs());
        }
    }
    Ok((worst, 0.0, "constant weights have characteristic exactly 1".into()))
}

fn power_threshold(_: &Ctx) -> Measure {
    let ladder = dyadic_ladder(1 << 12);
    let opts = VerdictOptions::default();
    let v4 = ap_membership_verdict(&Weight::power(0.4, Domain::FullLine), 2.0, &ladder, &opts)?.verdict;
    let v6 = ap_membership_verdict(&Weight::power(0.6, Domain::FullLine), 2.0, &ladder, &opts)?.verdict;
    let wrong = (v4 != Verdict::InApEvidence) as u8 + (v6 != Verdict::NotInApEvidence) as u8;
    Ok((wrong as f64, 0.0, format!("power(0.4): {}, power(0.6): {}", v4.as_str(), v6.as_str())))
}

fn budget_monotonicity(_: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for g in [0.3, 0.7, -0.2] {
        let c = ap_characteristic(&Weight::power(g, Domain::FullLine), 2.0, 1 << 11, 64)?;
        for w in c.growth_trace.windows(2) {
            worst = worst.max(w[0].1 - w[1].1);
        }
    }
    Ok((worst, 0.0, "scanned characteristic is nondecreasing in the budget".into()))
}

fn convexity(_: &Ctx) -> Measure {
    let r = convexity_region_probe(
        &Weight::power(0.2, Domain::FullLine),
        &[1.5, 2.0, 3.0],
        &[0.0, 1.0, 2.0],
        1 << 10,
        &VerdictOptions::default(),
    )?;
    Ok(((-r.min_slack).max(0.0), 1e-12, format!("{} midpoint instances", r.checks.len())))
}

fn stability(_: &Ctx) -> Measure {
    let steps = [-0.1, -0.05, 0.0, 0.05, 0.1];
    let p_grid: Vec<f64> = steps.iter().map(|s| 2.0 + s).collect();
    let r = stability_probe(&Weight::power(0.4, Domain::FullLine), 2.0, &steps, &p_grid, 1 << 12, &VerdictOptions::default())?;
    Ok(((!r.nonempty_box()) as u8 as f64, 0.0, format!("box radius {}", r.box_radius)))
}

fn lebesgue_indices(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for p in [1.5, 2.0, 3.0] {
        let e = boyd_indices(&SpaceSpec::lebesgue(p)?, 1 << 10, 1 << 12, ctx.seed)?;
        worst = worst.max((e.alpha_hat - 1.0 / p).abs()).max((e.beta_hat - 1.0 / p).abs());
    }
    Ok((worst, 0.02, "|index - 1/p| for p in {1.5, 2, 3}".into()))
}

fn boyd_duality(ctx: &Ctx) -> Measure {
    let e = boyd_indices(&SpaceSpec::lebesgue(1.5)?, 1 << 10, 1 << 12, ctx.seed)?;
    let r = e.duality.map(|d| d.residual).unwrap_or(f64::INFINITY);
    Ok((r, 0.05, "ℓ^1.5 against ℓ^3".into()))
}

fn lorentz_window(ctx: &Ctx) -> Measure {
    let e = boyd_indices(&SpaceSpec::lorentz(3.0, 1.5)?, DEFAULT_J_MAX, DEFAULT_BUDGET, ctx.seed)?;
    let outside = |x: f64| (0.28 - x).max(x - 0.38).max(0.0);
    let d = outside(e.alpha_hat).max(outside(e.beta_hat)) + if e.is_ordered(FIT_TOLERANCE) { 0.0 } else { 1.0 };
    Ok((d, 0.0, format!("alpha {:.4}, beta {:.4}", e.alpha_hat, e.beta_hat)))
}

/// `(1/2π) ∫ a(θ) e^{-inθ} dθ`, split at the given nonsmooth points.
fn quadrature_coefficient(a: &Symbol, n: i64, breaks: &[f64]) -> C64 {
    let mut pts: Vec<f64> = vec![-PI, PI];
    for b in breaks {
        let t = crate::numeric::wrap_angle(*b);
        if t > -PI && t < PI {
            pts.push(t);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut acc = C64::new(0.0, 0.0);
    let f = |t: f64| a.eval(t) * C64::from_polar(1.0, -(n as f64) * t);
    // Pre-split so the oscillating integrand cannot alias the initial Simpson samples.
    let pieces = 4 * (n.unsigned_abs() as usize + 1);
    for w in pts.windows(2) {
        let eps = 1e-14;
        let (lo, hi) = (w[0] + eps, w[1] - eps);
        let h = (hi - lo) / pieces as f64;
        for j in 0..pieces {
            let (x0, x1) = (lo + h * j as f64, lo + h * (j + 1) as f64);
            let re = adaptive_simpson(&|t| f(t).re, x0, x1, 1e-14);
            let im = adaptive_simpson(&|t| f(t).im, x0, x1, 1e-14);
            acc += C64::new(re, im);
        }
    }
    acc / (2.0 * PI)
}

fn fourier_quadrature(_: &Ctx) -> Measure {
    let fixtures: Vec<(Symbol, Vec<f64>)> = vec![
        (Symbol::hat(1.0, PI)?, vec![0.0, PI]),
        (Symbol::hat(2.0, 0.5)?, vec![-0.5, 0.0, 0.5]),
        (Symbol::indicator(0.0, PI, 1.0)?, vec![0.0, PI]),
        (Symbol::indicator(-1.0, 2.0, 0.5)?, vec![-1.0, 2.0]),
    ];
    let mut worst = 0.0f64;
    for (a, breaks) in &fixtures {
        for n in -64..=64 {
            worst = worst.max((a.fourier_coefficient(n) - quadrature_coefficient(a, n, breaks)).norm());
        }
    }
    Ok((worst, 1e-10, "closed-form coefficients against quadrature, |n| ≤ 64".into()))
}

fn fejer_averaging(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for seed in 0..3u64 {
        let a = Symbol::trig_poly(random_sequence(ctx.seed, 1200 + seed, -12, 12));
        for n in 0..=16usize {
            let mut acc = FiniteSequence::zero();
            for k in 0..=n {
                acc = &acc + partial_sum(&a, k).as_trig_poly().expect("trig poly");
            }
            let direct = fejer_mean(&a, n);
            let d = direct.as_trig_poly().expect("trig poly");
            for k in -(n as i64)..=n as i64 {
                worst = worst.max((acc.get(k) / (n as f64 + 1.0) - d.get(k)).norm());
            }
        }
    }
    Ok((worst, 1e-13, "mean of partial sums against the coefficient formula".into()))
}

fn fixtures() -> Vec<Symbol> {
    let mut out = parse_fixtures(&super::calibrate::default_fixture_literals())
        .expect("built-in fixtures")
        .into_iter()
        .map(|(_, s)| s)
        .collect::<Vec<_>>();
    out.push(Symbol::hat(-2.0, 1.0).expect("valid hat"));
    out
}

fn fejer_sup_bound(_: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for a in fixtures() {
        let s = a.sup_norm();
        for n in [1usize, 2, 3, 5, 8, 16, 32, 64, 100, 128] {
            worst = worst.max(fejer_mean(&a, n).sup_norm() - s);
        }
    }
    Ok((worst, 1e-9, "‖σ_n(a)‖_∞ - ‖a‖_∞ for n ≤ 128".into()))
}

fn conjugation(_: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for a in fixtures() {
        let b = conjugate_symbol(&a);
        for n in -32..=32 {
            worst = worst.max((b.fourier_coefficient(n) - a.fourier_coefficient(-n).conj()).norm());
        }
        for t in [-2.5, -0.3, 0.7, 3.0] {
            worst = worst.max((b.eval(t) - a.eval(t).conj()).norm());
        }
    }
    Ok((worst, 1e-14, "coefficients and values of the conjugate symbol".into()))
}

fn l2_equals_sup(ctx: &Ctx) -> Measure {
    let l2 = SpaceSpec::lebesgue(2.0)?;
    let mut worst = 0.0f64;
    for lit in ["trigpoly: 0, 1, 0, 1, 0.5", "hat(1, pi)", "step(0, pi, 1)"] {
        let a: Symbol = lit.parse()?;
        let s = a.sup_norm();
        let lower = multiplier_norm_lower_with(&a, &l2, 512, &ctx.opts)?.lower;
        if lower > s * (1.0 + 1e-6) {
            return Ok((f64::INFINITY, 0.02, format!("{lit}: lower {lower} exceeds sup {s}")));
        }
        worst = worst.max((s - lower) / s);
    }
    Ok((worst, 0.02, "relative gap of the ℓ² lower bound to ‖a‖_∞ at N = 512".into()))
}

fn sweep_monotone(ctx: &Ctx) -> Measure {
    let a: Symbol = "hat(1, pi)".parse()?;
    let sw = multiplier_norm_sweep(&a, &spec("lp(3)+power(0.2)"), &[16, 32, 64, 128], &ctx.opts)?;
    let worst = sw.windows(2).map(|w| w[0].lower - w[1].lower).fold(0.0, f64::max);
    Ok((worst, 0.0, "warm-started sweep is nondecreasing in N".into()))
}

fn shift_norm(ctx: &Ctx) -> Measure {
    let shift = Symbol::exponential(1);
    let mut worst = 0.0f64;
    for (s, gamma) in [("lp(2)+power(0.3)", 0.3), ("lp(3)+power(0.3)", 0.3), ("lp(1.5)+power(-0.4)", -0.4)] {
        let n = 64i64;
        let w = Weight::power(gamma, Domain::FullLine);
        let exact = (-n..n).map(|k| w.value(k + 1) / w.value(k)).fold(0.0, f64::max);
        let lower = multiplier_norm_lower_with(&shift, &spec(s), n as usize, &ctx.opts)?.lower;
        worst = worst.max((lower - exact).abs() / exact);
    }
    Ok((worst, 1e-9, "shift norm on weighted ℓ^p against the window sup of w_{k+1}/w_k".into()))
}

fn conjugate_duality(ctx: &Ctx) -> Measure {
    let mut worst = 0.0f64;
    for lit in ["trigpoly: 0, 1, 0, 1, 0.5", "hat(1, pi)", "step(0, pi, 1)"] {
        let a: Symbol = lit.parse()?;
        let x = multiplier_norm_lower_with(&a, &spec("lp(3)"), 256, &ctx.opts)?.lower;
        let y = multiplier_norm_lower_with(&conjugate_symbol(&a), &spec("lp(1.5)"), 256, &ctx.opts)?.lower;
        worst = worst.max((x - y).abs() / x.max(y));
    }
    Ok((worst, 0.03, "a on ℓ^3 against ā on ℓ^1.5 at N = 256".into()))
}

fn diagonal_interpolation(ctx: &Ctx) -> Measure {
    let mut rng = stream_rng(ctx.seed, 1500);
    let d: Vec<C64> = (0..12).map(|_| C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
    let exact = d.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let m = DenseMatrix::diagonal(&d);
    let mut worst = 0.0f64;
    for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let v = lp_operator_norm(&m, SpaceKind::LebesgueP { p }, &ctx.opts)?.value;
        worst = worst.max((v - exact).abs() / exact);
    }
    Ok((worst, 1e-12, "diagonal operators have norm max|d| on every ℓ^p".into()))
}

fn lower_below_upper(ctx: &Ctx) -> Measure {
    let s = spec("lp(3)+power(0.2)");
    let fx = parse_fixtures(&super::calibrate::default_fixture_literals())?;
    let entry = calibrate_space(&s, &fx, 64, &ctx.opts)?;
    let cal = crate::laurent::UpperCalibration {
        stechkin: Some(entry.constant),
        stechkin_dual: None,
    };
    let mut worst = f64::NEG_INFINITY;
    for (_, a) in &fx {
        let lower = multiplier_norm_lower_with(a, &s, 64, &ctx.opts)?.lower;
        let upper = multiplier_norm_upper(a, &s, &cal)?.upper.unwrap_or(f64::INFINITY);
        worst = worst.max(lower / upper - 1.0);
    }
    Ok((worst.max(0.0), ctx.tol, format!("calibrated constant {}", entry.constant)))
}

fn determinism(ctx: &Ctx) -> Measure {
    let cfg = ExperimentConfig {
        sections: vec![16],
        degrees: vec![1, 4],
        seed: ctx.seed,
        restarts: Some(2),
        iterations: Some(40),
        space: Some("lp(3)+power(0.2)".into()),
        ..ExperimentConfig::default()
    };
    let a = run_fejer_convergence(&cfg)?.render(Format::Csv)?;
    let b = run_fejer_convergence(&cfg)?.render(Format::Csv)?;
    Ok(((a != b) as u8 as f64, 0.0, "two identical Fejér runs render byte-identical CSV".into()))
}
