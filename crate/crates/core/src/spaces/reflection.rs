use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SpaceSpec;
use crate::error::{domain, Result};
use crate::numeric::stream_rng;
use crate::sequence::FiniteSequence;
use crate::C64;

const PASS_TOLERANCE: f64 = 1e-10;

/// `(reflect f)_k = f_{-k}`.
pub fn reflect(f: &FiniteSequence) -> FiniteSequence {
    f.reflect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    /// `max |‖Rf‖ - ‖f‖| / max(‖Rf‖, ‖f‖)` over all probes.
    pub max_discrepancy: f64,
    /// Largest ratio `‖Rf‖ / ‖f‖` or its inverse.
    pub max_ratio: f64,
    pub worst: FiniteSequence,
    pub probes: usize,
    pub passed: bool,
}

/// Compares `‖reflect f‖` with `‖f‖` on unit vectors `e_{±1..8}` and on
/// `samples` random sequences.
pub fn reflection_invariance_check(spec: &SpaceSpec, samples: usize, seed: u64) -> Result<ReflectionReport> {
    if samples == 0 {
        return domain("reflection check needs at least one sample");
    }
    let mut probes: Vec<FiniteSequence> = (1..=8).flat_map(|k| [FiniteSequence::unit(k), FiniteSequence::unit(-k)]).collect();
    let mut rng = stream_rng(seed, 0);
    for _ in 0..samples {
        let len = rng.random_range(1..=24usize);
        let offset = rng.random_range(-16..=16i64 - len as i64);
        let vals = (0..len)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        probes.push(FiniteSequence::new(offset, vals));
    }
    let mut report = ReflectionReport {
        max_discrepancy: 0.0,
        max_ratio: 1.0,
        worst: FiniteSequence::zero(),
        probes: probes.len(),
        passed: true,
    };
    for f in probes {
        let a = spec.norm(&f)?;
        let b = spec.norm(&f.reflect())?;
        let top = a.max(b);
        if top == 0.0 {
            continue;
        }
        let d = (a - b).abs() / top;
        report.max_ratio = report.max_ratio.max(top / a.min(b));
        if d > report.max_discrepancy {
            report.max_discrepancy = d;
            report.worst = f;
        }
    }
    report.passed = report.max_discrepancy <= PASS_TOLERANCE;
    Ok(report)
}
