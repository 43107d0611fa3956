//! Lower bounds for the discrete Muckenhoupt characteristic
//!
//! `[w]_{A_p} = sup_J (1/m(J)) (Σ_J w^p)^{1/p} (Σ_J w^{-q})^{1/q}`
//!
//! by scanning a finite, budget-nested family of intervals.

use serde::{Deserialize, Serialize};

use super::{Domain, Weight};
use crate::error::{domain, Result};
use crate::numeric::LogSum;

/// Intervals of length up to this are scanned exhaustively near the origin.
const EXHAUSTIVE_LENGTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApCharacteristic {
    /// Maximum over the scanned intervals; a lower bound for `[w]_{A_p}`.
    pub value: f64,
    pub p: f64,
    pub budget: usize,
    pub attaining_interval: (i64, i64),
    /// `(b, value restricted to the intervals admitted at budget b)` for dyadic `b ≤ budget`.
    pub growth_trace: Vec<(usize, f64)>,
}

/// Ladder of trace budgets: powers of two below `budget`, then `budget` itself.
fn trace_budgets(budget: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut b = 1;
    while b < budget {
        out.push(b);
        b *= 2;
    }
    out.push(budget);
    out
}

/// Powers of two from `budget / 64` (at least 1) up to `budget`.
pub fn dyadic_ladder(budget: usize) -> Vec<usize> {
    let top = budget.max(2).next_power_of_two();
    let mut b = (top / 64).max(1);
    let mut out = Vec::new();
    while b <= top {
        out.push(b);
        b *= 2;
    }
    out
}

struct Scan<'a> {
    ln_w: Vec<f64>,
    base: i64,
    p: f64,
    q: f64,
    levels: &'a [usize],
    best: Vec<(f64, (i64, i64))>,
}

impl Scan<'_> {
    fn ln_w(&self, k: i64) -> f64 {
        self.ln_w[(k - self.base) as usize]
    }

    fn value(&self, a: &LogSum, b: &LogSum) -> f64 {
        (a.ln_mean() / self.p + b.ln_mean() / self.q).exp()
    }

    fn record(&mut self, required: usize, value: f64, interval: (i64, i64)) {
        let level = self.levels.partition_point(|&b| b < required);
        if level < self.best.len() && value > self.best[level].0 {
            self.best[level] = (value, interval);
        }
    }

    /// Walks `start, start + step, ...` for up to `max_len` points, calling
    /// `at(len, end, value)` after every push.
    fn walk(&mut self, start: i64, step: i64, max_len: usize, mut at: impl FnMut(&mut Self, usize, i64, f64)) {
        let reference = self.ln_w(start);
        let mut a = LogSum::new();
        let mut b = LogSum::new();
        for len in 1..=max_len {
            let k = start + step * (len as i64 - 1);
            let x = self.ln_w(k) - reference;
            a.push(self.p * x);
            b.push(-self.q * x);
            let v = self.value(&a, &b);
            at(self, len, k, v);
        }
    }
}

/// Scans intervals `J` with `m(J) ≤ budget` and returns the largest averaged
/// product, a certified lower bound for `[w]_{A_p}`.
///
/// The scanned family is every interval of length at most 64 inside
/// `[-anchor_range, anchor_range]` (clipped to `Z_+` for half-line weights),
/// plus dyadic lengths `2^r ≤ budget` starting or ending at the anchors
/// `0, ±2^s` (`2^s ≤ budget/2`), plus centred dyadic intervals. The family
/// grows with the budget, so the value is nondecreasing in it.
pub fn ap_characteristic(
    w: &Weight,
    p: f64,
    budget: usize,
    anchor_range: usize,
) -> Result<ApCharacteristic> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("A_p needs 1 < p < ∞, got {p}"));
    }
    if budget == 0 {
        return domain("budget must be at least 1");
    }
    let q = p / (p - 1.0);
    let full = w.domain() == Domain::FullLine;
    let reach = (anchor_range.max(budget / 2 + budget)) as i64;
    let base = if full { -reach } else { 0 };
    let ln_w: Vec<f64> = (base..=reach).map(|k| w.ln_value(k)).collect();
    let levels = trace_budgets(budget);
    let mut scan = Scan {
        ln_w,
        base,
        p,
        q,
        levels: &levels,
        best: vec![(0.0, (0, 0)); levels.len()],
    };

    let anchor = anchor_range as i64;
    let lo = if full { -anchor } else { 0 };
    let short = EXHAUSTIVE_LENGTH.min(budget);
    for l in lo..=anchor {
        let max_len = short.min((anchor - l + 1) as usize);
        scan.walk(l, 1, max_len, |s, len, end, v| s.record(len, v, (l, end)));
    }

    let mut anchors = vec![0i64];
    let mut s = 1usize;
    while 2 * s <= budget {
        anchors.push(s as i64);
        if full {
            anchors.push(-(s as i64));
        }
        s *= 2;
    }
    for &a in &anchors {
        let need = 2 * a.unsigned_abs() as usize;
        scan.walk(a, 1, budget, |s, len, end, v| {
            if len.is_power_of_two() {
                s.record(len.max(need), v, (a, end));
            }
        });
        let backward = if full { budget } else { budget.min(a as usize + 1) };
        scan.walk(a, -1, backward, |s, len, start, v| {
            if len.is_power_of_two() {
                s.record(len.max(need), v, (start, a));
            }
        });
    }
    if full {
        let mut len = 2usize;
        while len <= budget {
            let start = -(len as i64 / 2);
            scan.walk(start, 1, len, |s, l, end, v| {
                if l == len {
                    s.record(len, v, (start, end));
                }
            });
            len *= 2;
        }
    }

    let mut trace = Vec::with_capacity(levels.len());
    let mut running = (0.0f64, (0i64, 0i64));
    for (b, best) in levels.iter().zip(&scan.best) {
        if best.0 > running.0 {
            running = *best;
        }
        trace.push((*b, running.0));
    }
    Ok(ApCharacteristic {
        value: running.0,
        p,
        budget,
        attaining_interval: running.1,
        growth_trace: trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    InApEvidence,
    NotInApEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::InApEvidence => "in",
            Verdict::NotInApEvidence => "not-in",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Thresholds on the relative growth of the characteristic per budget doubling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictOptions {
    pub plateau_tolerance: f64,
    pub divergence_threshold: f64,
    pub anchor_range: usize,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self {
            plateau_tolerance: 0.05,
            divergence_threshold: 0.08,
            anchor_range: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub trace: Vec<(usize, f64)>,
    /// Relative growth per doubling over the last step of the trace.
    pub final_growth: f64,
}

/// Numerical evidence for or against `w ∈ A_p`, read off the growth of the
/// scanned characteristic over the final budget doubling.
pub fn ap_membership_verdict(
    w: &Weight,
    p: f64,
    budgets: &[usize],
    opts: &VerdictOptions,
) -> Result<MembershipReport> {
    if budgets.len() < 2 {
        return domain("membership verdict needs at least two budgets");
    }
    if budgets.windows(2).any(|b| b[0] >= b[1]) {
        return domain("budgets must be strictly increasing");
    }
    let top = ap_characteristic(w, p, *budgets.last().unwrap(), opts.anchor_range)?;
    let mut trace = Vec::with_capacity(budgets.len());
    for &b in budgets {
        let value = match top.growth_trace.iter().find(|(tb, _)| *tb == b) {
            Some((_, v)) => *v,
            None => ap_characteristic(w, p, b, opts.anchor_range)?.value,
        };
        trace.push((b, value));
    }
    let (b0, v0) = trace[trace.len() - 2];
    let (b1, v1) = trace[trace.len() - 1];
    let doublings = (b1 as f64 / b0 as f64).log2();
    let final_growth = (v1 / v0).powf(1.0 / doublings) - 1.0;
    let verdict = if final_growth < opts.plateau_tolerance {
        Verdict::InApEvidence
    } else if final_growth > opts.divergence_threshold {
        Verdict::NotInApEvidence
    } else {
        Verdict::Inconclusive
    };
    Ok(MembershipReport {
        verdict,
        trace,
        final_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct evaluation of the averaged product on one interval.
    fn interval_oracle(w: &Weight, p: f64, l: i64, n: i64) -> f64 {
        let q = p / (p - 1.0);
        let m = (n - l + 1) as f64;
        let a: f64 = (l..=n).map(|k| w.value(k).powf(p)).sum();
        let b: f64 = (l..=n).map(|k| w.value(k).powf(-q)).sum();
        a.powf(1.0 / p) * b.powf(1.0 / q) / m
    }

    #[test]
    fn constant_weight_is_exactly_one() {
        for c in [0.3, 1.0, 5.0, 1e6] {
            for p in [1.2, 2.0, 3.7] {
                let w = Weight::constant(c, Domain::FullLine).unwrap();
                let r = ap_characteristic(&w, p, 1 << 10, 32).unwrap();
                assert_eq!(r.value, 1.0);
                assert!(r.growth_trace.iter().all(|(_, v)| *v == 1.0));
            }
        }
    }

    #[test]
    fn single_point_interval_is_one() {
        let w = Weight::power(0.7, Domain::FullLine);
        let r = ap_characteristic(&w, 2.0, 1, 0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.attaining_interval, (0, 0));
    }

    #[test]
    fn rejects_p_at_most_one() {
        let w = Weight::power(0.1, Domain::FullLine);
        assert!(ap_characteristic(&w, 1.0, 8, 4).is_err());
        assert!(ap_characteristic(&w, 0.5, 8, 4).is_err());
    }

    #[test]
    fn attaining_interval_matches_oracle() {
        let w = Weight::power(0.3, Domain::FullLine);
        let r = ap_characteristic(&w, 2.0, 1 << 12, 64).unwrap();
        let (l, n) = r.attaining_interval;
        assert!(((n - l + 1) as usize) <= r.budget);
        let direct = interval_oracle(&w, 2.0, l, n);
        assert!((direct - r.value).abs() < 1e-10 * r.value);
    }

    #[test]
    fn power_03_plateaus() {
        // Frozen from the direct interval oracle over the same family.
        let w = Weight::power(0.3, Domain::FullLine);
        let r = ap_characteristic(&w, 2.0, 1 << 12, 64).unwrap();
        let oracle = interval_oracle(&w, 2.0, -2048, 2047);
        assert!(r.value >= oracle - 1e-12);
        assert!((r.value - 1.3280).abs() < 5e-4, "value {}", r.value);
        let trace = &r.growth_trace;
        let last = trace[trace.len() - 1].1 / trace[trace.len() - 2].1 - 1.0;
        assert!(last < 0.01);
    }

    #[test]
    fn survives_extreme_exponents() {
        let w = Weight::power(20.0, Domain::FullLine);
        let r = ap_characteristic(&w, 2.0, 1 << 8, 16).unwrap();
        assert!(r.value.is_finite() && r.value > 1.0);
    }

    #[test]
    fn power_weights_are_classified() {
        let ladder = dyadic_ladder(1 << 12);
        let opts = VerdictOptions::default();
        let r4 = ap_membership_verdict(&Weight::power(0.4, Domain::FullLine), 2.0, &ladder, &opts).unwrap();
        assert_eq!(r4.verdict, Verdict::InApEvidence);
        let r6 = ap_membership_verdict(&Weight::power(0.6, Domain::FullLine), 2.0, &ladder, &opts).unwrap();
        assert_eq!(r6.verdict, Verdict::NotInApEvidence);
        let c = ap_membership_verdict(&Weight::constant(5.0, Domain::FullLine).unwrap(), 3.0, &ladder, &opts).unwrap();
        assert_eq!(c.verdict, Verdict::InApEvidence);
        assert!(c.trace.iter().all(|(_, v)| *v == 1.0));
    }

    #[test]
    fn verdict_rejects_unsorted_budgets() {
        let w = Weight::power(0.1, Domain::FullLine);
        assert!(ap_membership_verdict(&w, 2.0, &[8, 4], &VerdictOptions::default()).is_err());
    }

    #[test]
    fn symmetric_extension_dominates_half_line() {
        // Every interval scanned for w on Z_+ is also scanned for v on Z.
        let w = Weight::table((0..300).map(|k| 1.0 + ((k as f64) * 0.37).sin().abs()).collect(), 0, Domain::HalfLine).unwrap();
        let v = super::super::symmetric_extend(&w).unwrap();
        for p in [1.5, 2.0, 4.0] {
            let half = ap_characteristic(&w, p, 256, 64).unwrap();
            let full = ap_characteristic(&v, p, 256, 64).unwrap();
            assert!(full.value >= half.value);
            // Shared intervals [l, n] ⊂ Z_+ carry identical values.
            for (l, n) in [(0i64, 0i64), (0, 5), (3, 40), (0, 63)] {
                assert_eq!(interval_oracle(&v, p, l, n), interval_oracle(&w, p, l, n));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn scale_invariance(values in prop::collection::vec(0.05f64..20.0, 8..64), c in 1e-3f64..1e3, p in 1.1f64..5.0) {
            let w = Weight::table(values.clone(), -4, Domain::FullLine).unwrap();
            let cw = Weight::table(values.iter().map(|v| v * c).collect(), -4, Domain::FullLine).unwrap();
            let a = ap_characteristic(&w, p, 128, 40).unwrap().value;
            let b = ap_characteristic(&cw, p, 128, 40).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * a, "{} vs {}", a, b);
        }

        #[test]
        fn nondecreasing_in_budget(gamma in -0.9f64..0.9, p in 1.2f64..4.0) {
            let w = Weight::power(gamma, Domain::FullLine);
            let mut prev = 0.0;
            for b in [1usize, 2, 4, 8, 16, 32, 64, 128, 256] {
                let v = ap_characteristic(&w, p, b, 16).unwrap().value;
                prop_assert!(v >= prev);
                prev = v;
            }
        }
    }
}
