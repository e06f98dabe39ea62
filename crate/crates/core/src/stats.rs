//! Binomial confidence intervals.

use serde::Serialize;

/// Two-sided standard normal quantile for 95% coverage.
pub const Z95: f64 = 1.959964;
/// Two-sided standard normal quantile for 99% coverage.
pub const Z99: f64 = 2.575829;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> Interval {
    if trials == 0 {
        return Interval { estimate: 0.0, lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval { estimate: p, lo: (centre - half).max(0.0), hi: (centre + half).min(1.0) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_value() {
        // 10 of 100 at 95%: [0.0552, 0.1744]
        let w = wilson(10, 100, Z95);
        assert!((w.lo - 0.05523).abs() < 1e-4);
        assert!((w.hi - 0.17437).abs() < 1e-4);
        let all = wilson(100, 100, Z95);
        assert_eq!(all.hi, 1.0);
        assert!(all.lo > 0.96);
    }
}
