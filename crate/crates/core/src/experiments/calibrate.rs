//! Working values of the Stechkin constant `c` in `‖a‖_M ≤ c (‖a‖_∞ + V(a))`.
//!
//! The constant is calibrated per space as the largest observed ratio
//! `lower(a) / (‖a‖_∞ + V(a))` over a fixture family, so it never decreases
//! when fixtures are added.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::report::{Report, ReportRow, Tag};
use crate::error::{Error, Result};
use crate::laurent::{multiplier_norm_lower_with, LowerOptions, UpperCalibration};
use crate::spaces::SpaceSpec;
use crate::symbols::Symbol;

/// Bounded-variation fixtures: a constant, the shift, a trigonometric
/// polynomial, a tent and a jump.
pub const DEFAULT_FIXTURES: &[&str] = &[
    "const(1)",
    "trigpoly: 0, 0, 1",
    "trigpoly: 0, 1, 0, 1, 0.5",
    "hat(1, pi)",
    "step(0, pi, 1)",
];

pub const DEFAULT_SPACES: &[&str] = &["lp(2)", "lp(3)+power(0.2)", "lp(1.5)+power(0.2)", "lp(2)+power(0.3)"];

pub const DEFAULT_SECTION: usize = 256;
pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRatio {
    pub symbol: String,
    /// Lower bound for `‖a‖_M` at the calibration section.
    pub lower: f64,
    pub sup: f64,
    pub variation: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub space: String,
    pub constant: f64,
    /// Fixture attaining the constant.
    pub attained_by: String,
    pub section: usize,
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub fixtures: Vec<FixtureRatio>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub entries: Vec<CalibrationEntry>,
}

impl CalibrationRecord {
    pub fn constant(&self, spec: &SpaceSpec) -> Option<f64> {
        let label = spec.label();
        self.entries.iter().find(|e| e.space == label).map(|e| e.constant)
    }

    /// Primal and (when calibrated) associate-space constants for `spec`.
    pub fn upper_calibration(&self, spec: &SpaceSpec) -> UpperCalibration {
        UpperCalibration {
            stechkin: self.constant(spec),
            stechkin_dual: spec.associate().and_then(|d| self.constant(&d)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("calibration record: {e}")))
    }

    /// One row per (space, fixture), with the calibrated constant repeated.
    pub fn to_report(&self) -> Report {
        let mut report = Report::new("calibrate");
        for e in &self.entries {
            for f in &e.fixtures {
                report.push(
                    ReportRow::new()
                        .param("space", e.space.as_str())
                        .param("symbol", f.symbol.as_str())
                        .param("section", e.section)
                        .measured("sup", Tag::Exact, f.sup)
                        .measured("variation", Tag::Exact, f.variation)
                        .measured("lower_bound", Tag::Lower, f.lower)
                        .measured("ratio", Tag::Lower, f.ratio)
                        .measured("constant", Tag::Lower, e.constant)
                        .measured("stechkin_upper", Tag::CalibratedUpper, e.constant * (f.sup + f.variation)),
                );
            }
        }
        report
    }
}

/// Calibrates one space on `fixtures` (label, symbol) at section `n`.
pub fn calibrate_space(spec: &SpaceSpec, fixtures: &[(String, Symbol)], n: usize, opts: &LowerOptions) -> Result<CalibrationEntry> {
    if fixtures.is_empty() {
        return Err(Error::Config("calibration needs at least one fixture".into()));
    }
    let rows = fixtures
        .par_iter()
        .map(|(label, a)| {
            let lower = multiplier_norm_lower_with(a, spec, n, opts)?.lower;
            let sup = a.sup_norm();
            let variation = a.total_variation();
            let denom = sup + variation;
            let ratio = if denom > 0.0 { lower / denom } else { 0.0 };
            Ok(FixtureRatio {
                symbol: label.clone(),
                lower,
                sup,
                variation,
                ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio).then(b.0.cmp(&a.0)))
        .map(|(_, r)| r)
        .expect("nonempty fixtures");
    Ok(CalibrationEntry {
        space: spec.label(),
        constant: best.ratio,
        attained_by: best.symbol.clone(),
        section: n,
        restarts: opts.restarts,
        iterations: opts.iterations,
        seed: opts.seed,
        fixtures: rows,
    })
}

pub(crate) fn lower_options(cfg: &ExperimentConfig) -> LowerOptions {
    LowerOptions {
        restarts: cfg.restarts.unwrap_or(DEFAULT_RESTARTS),
        iterations: cfg.iterations.unwrap_or(DEFAULT_ITERATIONS),
        seed: cfg.seed,
        warm_start: None,
    }
}

pub(crate) fn parse_fixtures(literals: &[String]) -> Result<Vec<(String, Symbol)>> {
    literals
        .iter()
        .map(|s| Ok((s.clone(), s.parse::<Symbol>().map_err(|e| Error::Config(e.to_string()))?)))
        .collect()
}

pub(crate) fn default_fixture_literals() -> Vec<String> {
    DEFAULT_FIXTURES.iter().map(|s| s.to_string()).collect()
}

/// Calibrates every configured space at the largest configured section.
pub fn calibrate_constants(cfg: &ExperimentConfig) -> Result<CalibrationRecord> {
    cfg.validate()?;
    let symbols = if cfg.calibrate.symbols.is_empty() {
        default_fixture_literals()
    } else {
        cfg.calibrate.symbols.clone()
    };
    let fixtures = parse_fixtures(&symbols)?;
    let spaces: Vec<SpaceSpec> = if cfg.calibrate.spaces.is_empty() {
        match cfg.space_spec()? {
            Some(s) => vec![s],
            None => DEFAULT_SPACES.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        }
    } else {
        cfg.calibrate.spaces.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let n = *cfg.sections_or(&[DEFAULT_SECTION]).last().expect("nonempty schedule");
    let opts = lower_options(cfg);
    let entries = spaces
        .iter()
        .map(|spec| calibrate_space(spec, &fixtures, n, &opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(CalibrationRecord { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(symbols: &[&str], spaces: &[&str]) -> ExperimentConfig {
        ExperimentConfig {
            sections: vec![32],
            restarts: Some(2),
            iterations: Some(60),
            calibrate: super::super::config::CalibrateSettings {
                symbols: symbols.iter().map(|s| s.to_string()).collect(),
                spaces: spaces.iter().map(|s| s.to_string()).collect(),
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn constants_force_at_least_one() {
        let rec = calibrate_constants(&quick(&["const(1)", "hat(1, pi)"], &["lp(2)"])).unwrap();
        let e = &rec.entries[0];
        assert!(e.constant >= 1.0 - 1e-12);
        assert_eq!(rec.constant(&SpaceSpec::lebesgue(2.0).unwrap()), Some(e.constant));
    }

    #[test]
    fn shift_on_weighted_l2() {
        let rec = calibrate_constants(&quick(&["trigpoly: 0, 0, 1"], &["lp(2)+power(0.3)"])).unwrap();
        let bound = 2f64.powf(0.3) / (1.0 + 2.0 * std::f64::consts::PI);
        assert!(rec.entries[0].constant >= bound * (1.0 - 1e-9), "{}", rec.entries[0].constant);
    }

    #[test]
    fn adding_fixtures_never_decreases_the_constant() {
        let small = calibrate_constants(&quick(&["hat(1, pi)"], &["lp(3)+power(0.2)"])).unwrap();
        let large = calibrate_constants(&quick(&["hat(1, pi)", "step(0, pi, 1)", "trigpoly: 0, 0, 1"], &["lp(3)+power(0.2)"])).unwrap();
        assert!(large.entries[0].constant >= small.entries[0].constant);
    }

    #[test]
    fn record_round_trips_and_guards_bounds() {
        let rec = calibrate_constants(&quick(&["const(2)", "step(0, pi, 1)"], &["lp(3)"])).unwrap();
        assert_eq!(CalibrationRecord::from_json(&rec.to_json().unwrap()).unwrap(), rec);
        let mut report = rec.to_report();
        report.guard_bounds(1e-12);
        assert!(report.passed());
        assert_eq!(report.rows.len(), 2);
    }
}
