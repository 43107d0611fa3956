//! Weights on `Z` or `Z_+` and the discrete Muckenhoupt machinery built on them.

mod muckenhoupt;
mod probes;

pub use muckenhoupt::{
    ap_characteristic, ap_membership_verdict, dyadic_ladder, ApCharacteristic, MembershipReport,
    Verdict, VerdictOptions,
};
pub use probes::{
    convexity_region_probe, reverse_holder_probe, stability_probe, ConvexityReport, MidpointCheck,
    RegionPoint, ReverseHolderReport, ReverseHolderRow, StabilityReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Index set a weight lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// `Z_+ = {0, 1, 2, ...}`
    HalfLine,
    /// `Z`
    FullLine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightKind {
    Constant(f64),
    /// `w_k = (1 + |k|)^gamma`.
    Power(f64),
    /// `w_k = values[k - origin]`, extended by the end values outside the table.
    Table { values: Vec<f64>, origin: i64 },
    /// `w_k = base_k^exponent`, evaluated lazily.
    Exponentiated { base: Box<Weight>, exponent: f64 },
}

/// A positive sequence on [`Domain`].
///
/// Evaluation is defined at every integer (half-line weights evaluate through
/// `|k|` or the table's edge value), but operations that care about the
/// domain only ever query indices inside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    kind: WeightKind,
    domain: Domain,
    symmetric: bool,
}

impl Weight {
    pub fn constant(c: f64, domain: Domain) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return domain_err(format!("constant weight must be positive, got {c}"));
        }
        Ok(Self {
            kind: WeightKind::Constant(c),
            domain,
            symmetric: domain == Domain::FullLine,
        })
    }

    pub fn power(gamma: f64, domain: Domain) -> Self {
        assert!(gamma.is_finite(), "power exponent must be finite");
        Self {
            kind: WeightKind::Power(gamma),
            domain,
            symmetric: domain == Domain::FullLine,
        }
    }

    /// Table-backed weight. Half-line tables must start at index 0.
    pub fn table(values: Vec<f64>, origin: i64, domain: Domain) -> Result<Self> {
        if values.is_empty() {
            return domain_err("weight table is empty");
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return domain_err(format!("weight values must be positive and finite, got {v}"));
        }
        if domain == Domain::HalfLine && origin != 0 {
            return domain_err("half-line weight tables start at index 0");
        }
        let last = origin + values.len() as i64 - 1;
        let symmetric = domain == Domain::FullLine
            && last == -origin
            && values.iter().eq(values.iter().rev());
        Ok(Self {
            kind: WeightKind::Table { values, origin },
            domain,
            symmetric,
        })
    }

    /// The weight `w^exponent`.
    pub fn pow(&self, exponent: f64) -> Self {
        Self {
            kind: WeightKind::Exponentiated {
                base: Box::new(self.clone()),
                exponent,
            },
            domain: self.domain,
            symmetric: self.symmetric,
        }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Whether `w_{-k} = w_k` holds for every `k` (always false on `Z_+`).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// True when the weight is identically constant.
    pub fn is_constant(&self) -> bool {
        match &self.kind {
            WeightKind::Constant(_) => true,
            WeightKind::Power(g) => *g == 0.0,
            WeightKind::Table { values, .. } => values.iter().all(|v| *v == values[0]),
            WeightKind::Exponentiated { base, exponent } => *exponent == 0.0 || base.is_constant(),
        }
    }

    pub fn ln_value(&self, k: i64) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => c.ln(),
            WeightKind::Power(g) => {
                if *g == 0.0 {
                    0.0
                } else {
                    g * ((k.unsigned_abs() as f64) + 1.0).ln()
                }
            }
            WeightKind::Table { values, origin } => {
                let i = (k - origin).clamp(0, values.len() as i64 - 1);
                values[i as usize].ln()
            }
            WeightKind::Exponentiated { base, exponent } => {
                if *exponent == 0.0 {
                    0.0
                } else {
                    exponent * base.ln_value(k)
                }
            }
        }
    }

    pub fn value(&self, k: i64) -> f64 {
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::Power(g) => ((k.unsigned_abs() as f64) + 1.0).powf(*g),
            WeightKind::Table { values, origin } => {
                values[(k - origin).clamp(0, values.len() as i64 - 1) as usize]
            }
            WeightKind::Exponentiated { .. } => self.ln_value(k).exp(),
        }
    }

    /// Human-readable literal, parseable by the experiment config reader.
    pub fn label(&self) -> String {
        let body = match &self.kind {
            WeightKind::Constant(c) => format!("const({c})"),
            WeightKind::Power(g) => format!("power({g})"),
            WeightKind::Table { values, origin } => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                format!("table({origin};{})", vs.join(","))
            }
            WeightKind::Exponentiated { base, exponent } => {
                format!("pow({},{exponent})", base.label_body())
            }
        };
        match self.domain {
            Domain::FullLine => body,
            Domain::HalfLine => format!("{body}@half"),
        }
    }

    fn label_body(&self) -> String {
        let l = self.label();
        l.strip_suffix("@half").map(str::to_owned).unwrap_or(l)
    }
}

fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    domain(msg)
}

/// `v_n = w_{|n|}`: the symmetric extension of a half-line weight to `Z`.
pub fn symmetric_extend(w: &Weight) -> Result<Weight> {
    if w.domain != Domain::HalfLine {
        return domain("symmetric extension expects a weight on Z_+");
    }
    let kind = match &w.kind {
        WeightKind::Constant(c) => WeightKind::Constant(*c),
        WeightKind::Power(g) => WeightKind::Power(*g),
        WeightKind::Table { values, .. } => {
            let mut mirrored: Vec<f64> = values[1..].iter().rev().copied().collect();
            mirrored.extend_from_slice(values);
            WeightKind::Table {
                values: mirrored,
                origin: -(values.len() as i64 - 1),
            }
        }
        WeightKind::Exponentiated { base, exponent } => WeightKind::Exponentiated {
            base: Box::new(symmetric_extend(base)?),
            exponent: *exponent,
        },
    };
    Ok(Weight {
        kind,
        domain: Domain::FullLine,
        symmetric: true,
    })
}
