//! Small numerical helpers shared across modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Streaming `log Σ exp(x_i)` with a running shift.
///
/// When every pushed exponent is equal the accumulator counts exactly, so
/// averages of constant data come out as exactly 1.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LogSum {
    shift: f64,
    acc: f64,
    count: usize,
}

impl LogSum {
    pub(crate) fn new() -> Self {
        Self {
            shift: f64::NEG_INFINITY,
            acc: 0.0,
            count: 0,
        }
    }

    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        if self.acc == 0.0 {
            self.shift = x;
            self.acc = 1.0;
        } else if x > self.shift {
            self.acc = self.acc * (self.shift - x).exp() + 1.0;
            self.shift = x;
        } else {
            self.acc += (x - self.shift).exp();
        }
    }

    /// `log((1/m) Σ exp(x_i))` over the `m` pushed terms.
    pub(crate) fn ln_mean(&self) -> f64 {
        self.shift + (self.acc / self.count as f64).ln()
    }
}

/// Golden-section maximisation of `f` on `[lo, hi]`; returns `(argmax, max)`.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let (mut best_x, mut best) = if fc > fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    (best_x, best)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination (1 for an exact line).
    pub r_squared: f64,
    pub points: usize,
}

pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    LinearFit {
        slope,
        intercept,
        r_squared,
        points: xs.len(),
    }
}

/// Deterministic per-stream generator: one seed, independent streams per task.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Reduces an angle to `[-π, π)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t >= PI {
        -PI
    } else {
        t
    }
}
