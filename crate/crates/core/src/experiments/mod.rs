//! Experiment configuration, runners and report emission.
//!
//! Runners take an [`ExperimentConfig`] and return a [`Report`] whose rows
//! come out in parameter order regardless of how the grid was scheduled, so
//! identical configurations give byte-identical output.

mod calibrate;
mod config;
mod fejer;
mod literals;
mod report;
mod sweeps;
mod verify;

pub use calibrate::{
    calibrate_constants, calibrate_space, CalibrationEntry, CalibrationRecord, FixtureRatio, DEFAULT_FIXTURES,
    DEFAULT_SPACES,
};
pub use config::{
    BoydSettings, CalibrateSettings, ExperimentConfig, ExperimentKind, FejerSettings, VerifySettings, WeightSettings,
};
pub use fejer::{default_endpoints, interpolation_endpoint, run_fejer_convergence, Endpoint};
pub use report::{Field, Format, Report, ReportRow, Tag, Value};
pub use sweeps::{run_boyd_table, run_weight_sweep};
pub use verify::{check_names, run_verification_suite, CheckOutcome, CheckStatus, VerificationSummary};

use std::io::Write;

use crate::error::Result;

/// Result of one experiment run.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Table(Report),
    Verification(VerificationSummary),
    Calibration(CalibrationRecord),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Table(r) => r.passed(),
            Outcome::Verification(v) => v.passed(),
            Outcome::Calibration(_) => true,
        }
    }

    pub fn report(&self) -> Report {
        match self {
            Outcome::Table(r) => r.clone(),
            Outcome::Verification(v) => v.to_report(),
            Outcome::Calibration(c) => c.to_report(),
        }
    }

    /// Calibration records are written as one JSON document in `json` format;
    /// everything else as a table.
    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match (self, format) {
            (Outcome::Calibration(c), Format::Json) => {
                out.write_all(c.to_json()?.as_bytes())?;
                Ok(())
            }
            _ => self.report().write(out, format),
        }
    }
}

/// Runs the experiment `kind`.
pub fn run(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Outcome> {
    Ok(match kind {
        ExperimentKind::Fejer => Outcome::Table(run_fejer_convergence(cfg)?),
        ExperimentKind::Weights => Outcome::Table(run_weight_sweep(cfg)?),
        ExperimentKind::Boyd => Outcome::Table(run_boyd_table(cfg)?),
        ExperimentKind::Verify => Outcome::Verification(run_verification_suite(cfg)?),
        ExperimentKind::Calibrate => Outcome::Calibration(calibrate_constants(cfg)?),
    })
}
