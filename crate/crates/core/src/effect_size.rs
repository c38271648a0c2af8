//! Effect-size metrics and the conversions from test statistics to them,
//! plus the conventional small/medium/large benchmark values.
//!
//! Conversions return magnitudes: an effect size here carries no
//! direction, matching how the reference tables report them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five supported metrics. Cramér's V carries its `dfs` (the smaller
/// table dimension minus one) as part of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EsMetric {
    /// Point-biserial correlation r.
    R,
    /// Cohen's d for a two-group mean difference.
    D,
    /// Cohen's w for goodness-of-fit.
    W,
    /// Cramér's V with its degrees of freedom.
    V { dfs: u64 },
    /// Cohen's f for one-way ANOVA.
    F,
}

impl fmt::Display for EsMetric {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsMetric::R => write!(fmt, "r"),
            EsMetric::D => write!(fmt, "d"),
            EsMetric::W => write!(fmt, "w"),
            EsMetric::V { dfs } => write!(fmt, "V({dfs})"),
            EsMetric::F => write!(fmt, "f"),
        }
    }
}

impl EsMetric {
    /// r, w, and V are bounded by 1; d and f are not.
    pub fn bounded_by_one(&self) -> bool {
        matches!(self, EsMetric::R | EsMetric::W | EsMetric::V { .. })
    }
}

/// A nonnegative effect-size magnitude tagged with its metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    metric: EsMetric,
    value: f64,
}

impl EffectSize {
    pub fn new(metric: EsMetric, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::domain(format!(
                "effect size must be a nonnegative finite number, got {value}"
            )));
        }
        if metric.bounded_by_one() && value > 1.0 {
            return Err(Error::domain(format!(
                "{metric} cannot exceed 1, got {value}"
            )));
        }
        if let EsMetric::V { dfs } = metric
            && dfs < 1
        {
            return Err(Error::domain("V requires dfs >= 1"));
        }
        Ok(EffectSize { metric, value })
    }

    pub fn metric(&self) -> EsMetric {
        self.metric
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl fmt::Display for EffectSize {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "{} = {:.4}", self.metric, self.value)
    }
}

/// Conventional small / medium / large values for a metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohenBenchmarks {
    pub metric: EsMetric,
    pub small: f64,
    pub medium: f64,
    pub large: f64,
}

/// The conventional benchmark triple for `metric`.
///
/// r/d/w/f use the standard constants. For V the w constants are scaled
/// by 1/sqrt(dfs) and rounded to three decimals, the resolution at which
/// the reference tables state them.
pub fn benchmarks(metric: EsMetric) -> CohenBenchmarks {
    match metric {
        EsMetric::R => CohenBenchmarks {
            metric,
            small: 0.10,
            medium: 0.30,
            large: 0.50,
        },
        EsMetric::D => CohenBenchmarks {
            metric,
            small: 0.20,
            medium: 0.50,
            large: 0.80,
        },
        EsMetric::W => CohenBenchmarks {
            metric,
            small: 0.10,
            medium: 0.30,
            large: 0.50,
        },
        EsMetric::F => CohenBenchmarks {
            metric,
            small: 0.10,
            medium: 0.25,
            large: 0.40,
        },
        EsMetric::V { dfs } => {
            let scale = |w: f64| round_to(w / (dfs as f64).sqrt(), 3);
            CohenBenchmarks {
                metric,
                small: scale(0.10),
                medium: scale(0.30),
                large: scale(0.50),
            }
        }
    }
}

/// Round half away from zero at `digits` decimals.
pub(crate) fn round_to(x: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (x * scale).round() / scale
}

// Raw conversion values, shared by the validated constructors below and
// by the minimum-N search (which must be able to look at sample sizes so
// small that a bounded metric exceeds 1 there).

pub(crate) fn d_value(t: f64, df: u64) -> f64 {
    (2.0 * t / (df as f64).sqrt()).abs()
}

pub(crate) fn r_value(t: f64, df: u64) -> f64 {
    t.abs() / (t * t + df as f64).sqrt()
}

pub(crate) fn w_value(chi2: f64, n: u64) -> f64 {
    (chi2 / n as f64).sqrt()
}

pub(crate) fn v_value(chi2: f64, n: u64, dfs: u64) -> f64 {
    (chi2 / (n as f64 * dfs as f64)).sqrt()
}

pub(crate) fn f_value(f_stat: f64, dfn: u64, dfd: u64) -> f64 {
    (dfn as f64 * f_stat / dfd as f64).sqrt()
}

/// Cohen's d from a two-sample t statistic: |2t / sqrt(df)|.
pub fn d_from_t(t: f64, df: u64) -> Result<EffectSize> {
    if df < 1 {
        return Err(Error::domain("d_from_t requires df >= 1"));
    }
    if !t.is_finite() {
        return Err(Error::domain("d_from_t requires a finite t"));
    }
    EffectSize::new(EsMetric::D, d_value(t, df))
}

/// Point-biserial r from a t statistic: |t| / sqrt(t^2 + df).
pub fn r_from_t(t: f64, df: u64) -> Result<EffectSize> {
    if df < 1 {
        return Err(Error::domain("r_from_t requires df >= 1"));
    }
    if !t.is_finite() {
        return Err(Error::domain("r_from_t requires a finite t"));
    }
    EffectSize::new(EsMetric::R, r_value(t, df))
}

/// Cohen's w from a goodness-of-fit chi-square: sqrt(chi2 / n).
///
/// Values above 1 (possible only when chi2 > n, i.e. outside the
/// two-cell context) are reported as a domain error, not clamped.
pub fn w_from_chi2(chi2: f64, n: u64) -> Result<EffectSize> {
    if n < 1 {
        return Err(Error::domain("w_from_chi2 requires n >= 1"));
    }
    if !chi2.is_finite() || chi2 < 0.0 {
        return Err(Error::domain("w_from_chi2 requires chi2 >= 0"));
    }
    EffectSize::new(EsMetric::W, w_value(chi2, n))
}

/// Cramér's V from a chi-square: sqrt(chi2 / (n * dfs)).
pub fn v_from_chi2(chi2: f64, n: u64, dfs: u64) -> Result<EffectSize> {
    if n < 1 || dfs < 1 {
        return Err(Error::domain("v_from_chi2 requires n >= 1 and dfs >= 1"));
    }
    if !chi2.is_finite() || chi2 < 0.0 {
        return Err(Error::domain("v_from_chi2 requires chi2 >= 0"));
    }
    EffectSize::new(EsMetric::V { dfs }, v_value(chi2, n, dfs))
}

/// Cohen's f from an F statistic: sqrt(dfn * F / dfd).
pub fn f_from_f_stat(f_stat: f64, dfn: u64, dfd: u64) -> Result<EffectSize> {
    if dfn < 1 || dfd < 1 {
        return Err(Error::domain("f_from_f_stat requires dfn >= 1 and dfd >= 1"));
    }
    if !f_stat.is_finite() || f_stat < 0.0 {
        return Err(Error::domain("f_from_f_stat requires F >= 0"));
    }
    EffectSize::new(EsMetric::F, f_value(f_stat, dfn, dfd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, tol: f64) -> bool {
        (got - want).abs() <= tol
    }

    #[test]
    fn d_from_t_reference_rows() {
        assert!(close(d_from_t(1.6787, 46).unwrap().value(), 0.4950, 5e-5));
        assert!(close(d_from_t(2.349, 162).unwrap().value(), 0.369, 5e-3));
        assert_eq!(d_from_t(0.0, 12).unwrap().value(), 0.0);
        assert!(d_from_t(1.0, 0).is_err());
    }

    #[test]
    fn r_from_t_reference_rows() {
        assert!(close(r_from_t(1.6514, 270).unwrap().value(), 0.1000, 5e-5));
        assert!(close(r_from_t(1.8257, 10).unwrap().value(), 0.5000, 5e-4));
        assert_eq!(r_from_t(0.0, 50).unwrap().value(), 0.0);
        assert!(r_from_t(1.0, 0).is_err());
    }

    #[test]
    fn w_from_chi2_reference_rows() {
        assert!(close(w_from_chi2(3.8415, 43).unwrap().value(), 0.2989, 5e-5));
        assert!(close(w_from_chi2(2.69, 271).unwrap().value(), 0.10, 5e-3));
        assert_eq!(w_from_chi2(0.0, 7).unwrap().value(), 0.0);
        assert!(w_from_chi2(1.0, 0).is_err());
        // chi2 > n has no valid w
        assert!(w_from_chi2(50.0, 10).is_err());
    }

    #[test]
    fn v_from_chi2_reference_rows() {
        assert!(close(v_from_chi2(5.9915, 67, 2).unwrap().value(), 0.2115, 5e-5));
        assert!(close(v_from_chi2(9.4877, 106, 4).unwrap().value(), 0.1496, 5e-5));
        assert_eq!(v_from_chi2(0.0, 10, 3).unwrap().value(), 0.0);
        assert!(v_from_chi2(1.0, 0, 2).is_err());
        assert!(v_from_chi2(1.0, 5, 0).is_err());
    }

    #[test]
    fn f_from_f_stat_reference_rows() {
        assert!(close(f_from_f_stat(3.0882, 2, 99).unwrap().value(), 0.2498, 5e-5));
        assert!(close(f_from_f_stat(2.2638, 5, 182).unwrap().value(), 0.2494, 5e-5));
        assert_eq!(f_from_f_stat(0.0, 3, 30).unwrap().value(), 0.0);
        assert!(f_from_f_stat(1.0, 0, 5).is_err());
        assert!(f_from_f_stat(1.0, 5, 0).is_err());
    }

    #[test]
    fn w_equals_v_times_sqrt_dfs() {
        for (chi2, n, dfs) in [(5.9915, 67u64, 2u64), (7.8147, 32, 3), (11.07, 124, 5)] {
            let w = w_from_chi2(chi2, n).unwrap().value();
            let v = v_from_chi2(chi2, n, dfs).unwrap().value();
            assert!((w - v * (dfs as f64).sqrt()).abs() <= 1e-15);
        }
    }

    #[test]
    fn exact_defining_identities() {
        // r^2 = t^2/(t^2+df) and d = 2t/sqrt(df) hold independently
        let (t, df) = (2.17, 31u64);
        let r = r_from_t(t, df).unwrap().value();
        assert!(close(r * r, t * t / (t * t + df as f64), 1e-15));
        let d = d_from_t(t, df).unwrap().value();
        assert!(close(d, 2.0 * t / (df as f64).sqrt(), 1e-15));
    }

    #[test]
    fn benchmark_constants() {
        let d = benchmarks(EsMetric::D);
        assert_eq!((d.small, d.medium, d.large), (0.20, 0.50, 0.80));
        let f = benchmarks(EsMetric::F);
        assert_eq!((f.small, f.medium, f.large), (0.10, 0.25, 0.40));
        let r = benchmarks(EsMetric::R);
        assert_eq!((r.small, r.medium, r.large), (0.10, 0.30, 0.50));
        let w = benchmarks(EsMetric::W);
        assert_eq!((w.small, w.medium, w.large), (0.10, 0.30, 0.50));
        // V scales w by 1/sqrt(dfs), at 3 decimals
        let v3 = benchmarks(EsMetric::V { dfs: 3 });
        assert_eq!((v3.small, v3.medium, v3.large), (0.058, 0.173, 0.289));
        for m in [
            EsMetric::R,
            EsMetric::D,
            EsMetric::W,
            EsMetric::V { dfs: 4 },
            EsMetric::F,
        ] {
            let b = benchmarks(m);
            assert!(b.small < b.medium && b.medium < b.large);
        }
    }

    #[test]
    fn effect_size_validation() {
        assert!(EffectSize::new(EsMetric::R, 1.2).is_err());
        assert!(EffectSize::new(EsMetric::W, -0.1).is_err());
        assert!(EffectSize::new(EsMetric::D, 1.7).is_ok());
        assert!(EffectSize::new(EsMetric::V { dfs: 0 }, 0.3).is_err());
        assert!(EffectSize::new(EsMetric::F, f64::NAN).is_err());
    }
}
