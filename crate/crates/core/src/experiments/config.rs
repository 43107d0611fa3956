//! TOML experiment configuration.
//!
//! Every key is optional; an empty file runs the built-in defaults. Example:
//!
//! ```toml
//! kind = "fejer"
//! symbol = "hat(1, pi)"
//! space = "lp(3)+power(0.2)"
//! sections = [256]             # N schedule, strictly increasing
//! degrees = [1, 2, 4, 8, 16]   # Fejér degrees n, strictly increasing
//! seed = 7
//! tolerance = 1e-6
//!
//! [fejer]
//! delta = 0.1
//!
//! [weights]
//! parameters = [0.1, 0.2, 0.3]
//! exponents = [2.0]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::report::Format;
use crate::error::{Error, Result};
use crate::spaces::SpaceSpec;
use crate::symbols::Symbol;
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Fejer,
    Weights,
    Boyd,
    Verify,
    Calibrate,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Fejer => "fejer",
            ExperimentKind::Weights => "weights",
            ExperimentKind::Boyd => "boyd",
            ExperimentKind::Verify => "verify",
            ExperimentKind::Calibrate => "calibrate",
        }
    }
}

/// Settings of the Fejér convergence run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FejerSettings {
    /// Lower interpolation endpoint; defaults from the space kind.
    pub p: Option<f64>,
    /// Upper interpolation endpoint.
    pub q: Option<f64>,
    /// `|δ|` of the perturbed exponent `p(1+δ)`; its sign follows `p` vs 2. Default 0.1.
    pub delta: Option<f64>,
    /// Interpolation constant between the endpoints. Default 1.
    pub interpolation_constant: Option<f64>,
    /// Stechkin constant of the perturbed spaces; calibrated when absent.
    pub stechkin: Option<f64>,
}

/// Settings of the Muckenhoupt sweep.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightSettings {
    /// `power` sweeps `(1+|k|)^γ`; `exponent` sweeps `w^{1+ε}` of the configured weight.
    pub family: Option<String>,
    /// Values of `γ` or `ε`, strictly increasing.
    pub parameters: Vec<f64>,
    /// Values of `p`, strictly increasing.
    pub exponents: Vec<f64>,
    pub budget: Option<usize>,
    /// Reverse Hölder `δ` grid.
    pub deltas: Vec<f64>,
    pub reverse_holder_cap: Option<f64>,
    /// `p0` of the stability box; rows at `p0` with in-evidence get a box radius.
    pub stability_p: Option<f64>,
    pub stability_steps: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoydSettings {
    pub spaces: Vec<String>,
    pub j_max: Option<usize>,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySettings {
    /// Names (or name prefixes) of checks to run; empty runs all.
    pub checks: Vec<String>,
    /// Adds the asymmetric-weight reflection check, expected to fail.
    pub inject_asymmetric: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrateSettings {
    pub symbols: Vec<String>,
    pub spaces: Vec<String>,
}

/// Top-level configuration shared by all experiment kinds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub symbol: Option<String>,
    pub space: Option<String>,
    /// Weight attached to `space`, if the space literal carries none.
    pub weight: Option<String>,
    /// Section half-widths `N`.
    pub sections: Vec<usize>,
    /// Fejér degrees `n`.
    pub degrees: Vec<usize>,
    pub seed: u64,
    /// Relative slack of consistency checks.
    pub tolerance: Option<f64>,
    pub restarts: Option<usize>,
    pub iterations: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub fejer: FejerSettings,
    pub weights: WeightSettings,
    pub boyd: BoydSettings,
    pub verify: VerifySettings,
    pub calibrate: CalibrateSettings,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn increasing<T: PartialOrd + std::fmt::Debug>(name: &str, xs: &[T]) -> Result<()> {
    match xs.windows(2).find(|w| !(w[0] < w[1])) {
        Some(w) => config_err(format!("{name} must be strictly increasing, found {:?} then {:?}", w[0], w[1])),
        None => Ok(()),
    }
}

fn positive(name: &str, x: Option<f64>) -> Result<()> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => config_err(format!("{name} must be positive and finite, got {v}")),
        _ => Ok(()),
    }
}

fn at_least(name: &str, x: Option<usize>, min: usize) -> Result<()> {
    match x {
        Some(v) if v < min => config_err(format!("{name} must be at least {min}, got {v}")),
        _ => Ok(()),
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    pub const DEFAULT_TOLERANCE: f64 = 1e-6;

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks schedules, tolerances and every literal.
    pub fn validate(&self) -> Result<()> {
        increasing("sections", &self.sections)?;
        increasing("degrees", &self.degrees)?;
        if self.sections.first() == Some(&0) {
            return config_err("section half-widths must be at least 1");
        }
        positive("tolerance", self.tolerance)?;
        at_least("restarts", self.restarts, 0)?;
        at_least("iterations", self.iterations, 1)?;

        let f = &self.fejer;
        positive("fejer.p", f.p)?;
        positive("fejer.q", f.q)?;
        positive("fejer.interpolation_constant", f.interpolation_constant)?;
        positive("fejer.stechkin", f.stechkin)?;
        if let Some(d) = f.delta {
            if !(d > 0.0 && d < 1.0) {
                return config_err(format!("fejer.delta must lie in (0, 1), got {d}"));
            }
        }

        let w = &self.weights;
        increasing("weights.parameters", &w.parameters)?;
        increasing("weights.exponents", &w.exponents)?;
        increasing("weights.deltas", &w.deltas)?;
        increasing("weights.stability_steps", &w.stability_steps)?;
        if let Some(p) = w.exponents.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return config_err(format!("weights.exponents must lie in (1, ∞), got {p}"));
        }
        if let Some(fam) = &w.family {
            if fam != "power" && fam != "exponent" {
                return config_err(format!("weights.family must be 'power' or 'exponent', got '{fam}'"));
            }
        }
        at_least("weights.budget", w.budget, 2)?;
        positive("weights.reverse_holder_cap", w.reverse_holder_cap)?;
        at_least("boyd.j_max", self.boyd.j_max, 8)?;
        at_least("boyd.budget", self.boyd.budget, 8)?;

        if let Some(s) = &self.symbol {
            s.parse::<Symbol>().map_err(as_config)?;
        }
        self.space_spec()?;
        for s in self.boyd.spaces.iter().chain(&self.calibrate.spaces) {
            s.parse::<SpaceSpec>().map_err(as_config)?;
        }
        for s in &self.calibrate.symbols {
            s.parse::<Symbol>().map_err(as_config)?;
        }
        Ok(())
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(Self::DEFAULT_TOLERANCE)
    }

    /// The configured symbol, or `default`.
    pub fn symbol_or(&self, default: &str) -> Result<Symbol> {
        self.symbol.as_deref().unwrap_or(default).parse().map_err(as_config)
    }

    /// The configured space with the separate `weight` key folded in.
    pub fn space_spec(&self) -> Result<Option<SpaceSpec>> {
        let Some(text) = &self.space else {
            if self.weight.is_some() {
                return config_err("'weight' needs a 'space' to attach to");
            }
            return Ok(None);
        };
        let spec: SpaceSpec = text.parse().map_err(as_config)?;
        match &self.weight {
            None => Ok(Some(spec)),
            Some(_) if spec.weight.is_some() => config_err("weight given both in 'space' and 'weight'"),
            Some(w) => Ok(Some(spec.with_weight(w.parse::<Weight>().map_err(as_config)?))),
        }
    }

    pub fn space_or(&self, default: &str) -> Result<SpaceSpec> {
        match self.space_spec()? {
            Some(s) => Ok(s),
            None => default.parse().map_err(as_config),
        }
    }

    /// Configured weight on its own, for the weight sweeps.
    pub fn weight_literal(&self) -> Result<Option<Weight>> {
        if let Some(w) = &self.weight {
            return w.parse().map(Some).map_err(as_config);
        }
        Ok(self.space_spec()?.and_then(|s| s.weight))
    }

    pub fn sections_or(&self, default: &[usize]) -> Vec<usize> {
        if self.sections.is_empty() {
            default.to_vec()
        } else {
            self.sections.clone()
        }
    }

    pub fn degrees_or(&self, default: &[usize]) -> Vec<usize> {
        if self.degrees.is_empty() {
            default.to_vec()
        } else {
            self.degrees.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_valid() {
        let c = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        assert_eq!(c.tolerance(), 1e-6);
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"
kind = "fejer"
symbol = "hat(1, pi)"
space = "lp(3)"
weight = "power(0.2)"
sections = [64, 128]
degrees = [1, 2, 4]
seed = 3
tolerance = 1e-8
format = "json"

[fejer]
delta = 0.05

[weights]
parameters = [0.1, 0.5]
exponents = [2.0, 3.0]
"#;
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        assert_eq!(c.kind, Some(ExperimentKind::Fejer));
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(c.space_spec().unwrap().unwrap().label(), "lp(3)+power(0.2)");
        let again = ExperimentConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "sections = [64, 64]",
            "degrees = [4, 2]",
            "tolerance = 0.0",
            "tolerance = -1.0",
            "space = \"lp(0.5)\"",
            "symbol = \"wave(1)\"",
            "weight = \"power(0.2)\"",
            "space = \"lp(2)+power(1)\"\nweight = \"power(0.2)\"",
            "unknown_key = 1",
            "[fejer]\ndelta = 1.5",
            "[weights]\nexponents = [1.0]",
            "[weights]\nfamily = \"gaussian\"",
        ] {
            let e = ExperimentConfig::from_toml_str(text).unwrap_err();
            assert!(matches!(e, Error::Config(_)), "{text}: {e}");
        }
    }
}
