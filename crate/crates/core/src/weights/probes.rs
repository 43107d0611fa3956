//! Reverse Hölder, convexity and stability probes over scanned characteristics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::muckenhoupt::{ap_characteristic, ap_membership_verdict, dyadic_ladder};
use super::{Verdict, VerdictOptions, Weight};
use crate::error::{domain, Result};
use crate::numeric::LogSum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReverseHolderRow {
    pub delta: f64,
    /// `sup_R ((1/m)Σ w^{p(1+δ)})^{1/(1+δ)} / ((1/m)Σ w^p)` over scanned dyadic `R`.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReverseHolderReport {
    pub rows: Vec<ReverseHolderRow>,
    /// Largest grid `δ` whose constant stays below `cap`, with that constant.
    pub best: Option<ReverseHolderRow>,
    pub cap: f64,
}

/// `ln((1/m)Σ_R w^{e})` over the intervals `R`, relative to `w` at the left end.
fn block_ln_means(ln_w: &[f64], start: usize, len: usize, exponent: f64) -> f64 {
    let reference = ln_w[start];
    let mut s = LogSum::new();
    for x in &ln_w[start..start + len] {
        s.push(exponent * (x - reference));
    }
    s.ln_mean()
}

/// Scans the aligned dyadic intervals `[i·2^r, (i+1)·2^r) ⊂ [0, budget)`, `r ≥ 1`,
/// of `Z_+` and reports the reverse Hölder constant for every `δ` in the grid.
pub fn reverse_holder_probe(
    w: &Weight,
    p: f64,
    budget: usize,
    delta_grid: &[f64],
    cap: f64,
) -> Result<ReverseHolderReport> {
    if delta_grid.is_empty() {
        return domain("reverse Hölder probe needs a nonempty δ grid");
    }
    if let Some(d) = delta_grid.iter().find(|d| !(**d > -1.0 && d.is_finite())) {
        return domain(format!("δ must exceed -1, got {d}"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must lie in (1, ∞), got {p}"));
    }
    if budget < 2 {
        return domain("reverse Hölder scan needs budget ≥ 2");
    }
    let ln_w: Vec<f64> = (0..budget as i64).map(|k| w.ln_value(k)).collect();
    let rows: Vec<ReverseHolderRow> = delta_grid
        .par_iter()
        .map(|&delta| {
            let mut constant = 0.0f64;
            let mut len = 2;
            while len <= budget {
                let mut start = 0;
                while start + len <= budget {
                    let num = block_ln_means(&ln_w, start, len, p * (1.0 + delta));
                    let den = block_ln_means(&ln_w, start, len, p);
                    constant = constant.max((num / (1.0 + delta) - den).exp());
                    start += len;
                }
                len *= 2;
            }
            ReverseHolderRow { delta, constant }
        })
        .collect();
    let best = rows
        .iter()
        .filter(|r| r.constant < cap)
        .max_by(|a, b| a.delta.total_cmp(&b.delta))
        .copied();
    Ok(ReverseHolderReport { rows, best, cap })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub p: f64,
    pub delta: f64,
    pub verdict: Verdict,
    /// Scanned characteristic `[w^{δ/p}]_{A_p}` at the probe budget.
    pub characteristic: f64,
}

/// One instance of the convexity inequality
/// `[w^{δ(θ)/p(θ)}]_{A_{p(θ)}} ≤ [w^{δ1/p1}]^{(1-θ)p1/p(θ)} · [w^{δ2/p2}]^{θ p2/p(θ)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MidpointCheck {
    pub first: (f64, f64),
    pub second: (f64, f64),
    pub theta: f64,
    pub midpoint_verdict: Verdict,
    pub lhs: f64,
    pub rhs: f64,
    /// `ln(rhs) - ln(lhs)`; nonnegative when the inequality holds.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub points: Vec<RegionPoint>,
    pub checks: Vec<MidpointCheck>,
    pub min_slack: f64,
}

impl ConvexityReport {
    /// True when every sampled inequality holds up to rounding.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.slack >= -1e-12)
    }
}

const THETAS: [f64; 3] = [0.25, 0.5, 0.75];

/// Samples the region `Γ = {(p, δ) : w^{δ/p} ∈ A_p}` on a grid and checks the
/// characteristic inequality between every pair of in-region points.
///
/// The inequality is evaluated on the same scanned interval family on both
/// sides; it holds interval by interval, so a negative slack signals a bug.
pub fn convexity_region_probe(
    w: &Weight,
    p_grid: &[f64],
    delta_grid: &[f64],
    budget: usize,
    opts: &VerdictOptions,
) -> Result<ConvexityReport> {
    if let Some(p) = p_grid.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
        return domain(format!("p grid must lie in (1, ∞), got {p}"));
    }
    let ladder = dyadic_ladder(budget);
    let classify = |p: f64, delta: f64| -> Result<RegionPoint> {
        let wd = w.pow(delta / p);
        let verdict = ap_membership_verdict(&wd, p, &ladder, opts)?.verdict;
        let characteristic = ap_characteristic(&wd, p, budget, opts.anchor_range)?.value;
        Ok(RegionPoint {
            p,
            delta,
            verdict,
            characteristic,
        })
    };
    let grid: Vec<(f64, f64)> = p_grid
        .iter()
        .flat_map(|&p| delta_grid.iter().map(move |&d| (p, d)))
        .collect();
    let points = grid
        .par_iter()
        .map(|&(p, d)| classify(p, d))
        .collect::<Result<Vec<_>>>()?;

    let inside: Vec<&RegionPoint> = points
        .iter()
        .filter(|pt| pt.verdict == Verdict::InApEvidence)
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in inside.iter().enumerate() {
        for b in &inside[i + 1..] {
            for theta in THETAS {
                pairs.push((*a, *b, theta));
            }
        }
    }
    let checks = pairs
        .par_iter()
        .map(|&(a, b, theta)| {
            let pt = (1.0 - theta) * a.p + theta * b.p;
            let dt = (1.0 - theta) * a.delta + theta * b.delta;
            let mid = classify(pt, dt)?;
            let ln_rhs = (1.0 - theta) * a.p / pt * a.characteristic.ln()
                + theta * b.p / pt * b.characteristic.ln();
            Ok(MidpointCheck {
                first: (a.p, a.delta),
                second: (b.p, b.delta),
                theta,
                midpoint_verdict: mid.verdict,
                lhs: mid.characteristic,
                rhs: ln_rhs.exp(),
                slack: ln_rhs - mid.characteristic.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_slack = checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
    Ok(ConvexityReport {
        points,
        checks,
        min_slack,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub p0: f64,
    pub eps_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    /// `matrix[i][j]`: `w^{1+eps_grid[i]}` received in-evidence for `A_{p_grid[j]}`.
    pub matrix: Vec<Vec<bool>>,
    /// Largest `r` such that every grid cell within `r` steps of `(p0, 0)` is true.
    pub box_radius: usize,
}

impl StabilityReport {
    pub fn nonempty_box(&self) -> bool {
        self.box_radius >= 1
    }
}

/// Tabulates `A_p` evidence for `w^{1+ε}` around `(p0, 0)`.
pub fn stability_probe(
    w: &Weight,
    p0: f64,
    eps_grid: &[f64],
    p_grid: &[f64],
    budget: usize,
    opts: &VerdictOptions,
) -> Result<StabilityReport> {
    let ladder = dyadic_ladder(budget);
    let base = ap_membership_verdict(w, p0, &ladder, opts)?;
    if base.verdict != Verdict::InApEvidence {
        return domain(format!("weight shows no A_p evidence at p0 = {p0}"));
    }
    let i0 = eps_grid
        .iter()
        .position(|e| *e == 0.0)
        .ok_or_else(|| crate::Error::Domain("ε grid must contain 0".into()))?;
    let j0 = p_grid
        .iter()
        .position(|p| *p == p0)
        .ok_or_else(|| crate::Error::Domain("p grid must contain p0".into()))?;
    let cells: Vec<(usize, usize)> = (0..eps_grid.len())
        .flat_map(|i| (0..p_grid.len()).map(move |j| (i, j)))
        .collect();
    let flags = cells
        .par_iter()
        .map(|&(i, j)| {
            let r = ap_membership_verdict(&w.pow(1.0 + eps_grid[i]), p_grid[j], &ladder, opts)?;
            Ok(r.verdict == Verdict::InApEvidence)
        })
        .collect::<Result<Vec<bool>>>()?;
    let matrix: Vec<Vec<bool>> = flags.chunks(p_grid.len()).map(|c| c.to_vec()).collect();

    let mut box_radius = 0;
    'grow: loop {
        let r = box_radius + 1;
        if i0 < r || j0 < r || i0 + r >= eps_grid.len() || j0 + r >= p_grid.len() {
            break;
        }
        for row in &matrix[i0 - r..=i0 + r] {
            if !row[j0 - r..=j0 + r].iter().all(|&b| b) {
                break 'grow;
            }
        }
        box_radius = r;
    }
    Ok(StabilityReport {
        p0,
        eps_grid: eps_grid.to_vec(),
        p_grid: p_grid.to_vec(),
        matrix,
        box_radius,
    })
}
