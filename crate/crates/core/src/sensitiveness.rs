//! Minimum-sample-size estimation from a minimum effect size, the
//! a-priori effect size at a fixed N, and post-hoc sensitiveness.
//!
//! The minimum effect size (MES) a test of significance can return as
//! significant at sample size N is the effect-size image of the critical
//! value. It decreases strictly in N, so the smallest N whose MES covers
//! a target can be found by exponential bracketing plus binary search.
//!
//! A target counts as captured when the achieved MES, rounded half away
//! from zero at four decimals, does not exceed the target. Four decimals
//! is the resolution of the reference tables this crate reproduces;
//! comparing at that resolution is what makes their boundary rows land
//! on the tabulated N.

use serde::{Deserialize, Serialize};

use crate::central::DistributionParams;
use crate::effect_size::{self, EffectSize, EsMetric};
use crate::error::{Error, Result};

/// Resolution (in decimal digits) at which achieved and target effect
/// sizes are compared by the solver.
pub const ES_DECIMALS: u32 = 4;

const MAX_N: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tails {
    One,
    Two,
}

/// The statistical test under analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    /// Two-sample t test for independent groups, equal allocation.
    TTwoSample,
    /// Point-biserial correlation, tested through the same t distribution.
    PointBiserialR,
    /// Chi-square goodness-of-fit with fixed df.
    Chi2Gof { df: u64 },
    /// One-way ANOVA with k groups.
    OneWayF { groups: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    family: TestFamily,
    tails: Tails,
    sig: f64,
}

impl TestSpec {
    /// Significance level used when none is given.
    pub const DEFAULT_SIG: f64 = 0.05;

    /// Build a spec. `tails` only applies to the t families; chi-square
    /// and F are inherently one-tailed and ignore it.
    pub fn new(family: TestFamily, tails: Tails, sig: f64) -> Result<Self> {
        if !sig.is_finite() || sig <= 0.0 || sig > 0.5 {
            return Err(Error::spec(format!(
                "significance level must be in (0, 0.5], got {sig}"
            )));
        }
        match family {
            TestFamily::Chi2Gof { df } => {
                if df < 1 {
                    return Err(Error::spec("chi-square goodness-of-fit requires df >= 1"));
                }
            }
            TestFamily::OneWayF { groups } if groups < 2 => {
                return Err(Error::spec("one-way ANOVA requires at least 2 groups"));
            }
            _ => {}
        }
        let tails = match family {
            TestFamily::TTwoSample | TestFamily::PointBiserialR => tails,
            _ => Tails::One,
        };
        Ok(TestSpec { family, tails, sig })
    }

    pub fn t_two_sample(tails: Tails, sig: f64) -> Result<Self> {
        Self::new(TestFamily::TTwoSample, tails, sig)
    }

    pub fn point_biserial(tails: Tails, sig: f64) -> Result<Self> {
        Self::new(TestFamily::PointBiserialR, tails, sig)
    }

    pub fn chi2_gof(df: u64, sig: f64) -> Result<Self> {
        Self::new(TestFamily::Chi2Gof { df }, Tails::One, sig)
    }

    pub fn one_way_f(groups: u64, sig: f64) -> Result<Self> {
        Self::new(TestFamily::OneWayF { groups }, Tails::One, sig)
    }

    pub fn family(&self) -> TestFamily {
        self.family
    }

    pub fn tails(&self) -> Tails {
        self.tails
    }

    pub fn sig(&self) -> f64 {
        self.sig
    }

    /// Smallest total N with a valid (positive-df) null distribution.
    pub fn n_floor(&self) -> u64 {
        match self.family {
            TestFamily::TTwoSample | TestFamily::PointBiserialR => 3,
            TestFamily::Chi2Gof { .. } => 1,
            TestFamily::OneWayF { groups } => groups + 1,
        }
    }

    /// The null distribution of the test statistic at total sample size n.
    pub fn null_distribution(&self, n: u64) -> Result<DistributionParams> {
        let floor = self.n_floor();
        if n < floor {
            return Err(Error::domain(format!(
                "N = {n} is below the df floor; this test needs N >= {floor}"
            )));
        }
        match self.family {
            TestFamily::TTwoSample | TestFamily::PointBiserialR => {
                DistributionParams::student_t(n - 2)
            }
            TestFamily::Chi2Gof { df } => DistributionParams::chi_square(df),
            TestFamily::OneWayF { groups } => {
                DistributionParams::fisher_f(groups - 1, n - groups)
            }
        }
    }

    /// The metric a plain analysis of this family reports.
    pub fn default_metric(&self) -> EsMetric {
        match self.family {
            TestFamily::TTwoSample => EsMetric::D,
            TestFamily::PointBiserialR => EsMetric::R,
            TestFamily::Chi2Gof { .. } => EsMetric::W,
            TestFamily::OneWayF { .. } => EsMetric::F,
        }
    }

    /// d and r pair with the t families; w and V (with matching dfs) with
    /// chi-square; f with one-way ANOVA.
    pub fn metric_compatible(&self, metric: EsMetric) -> bool {
        match self.family {
            TestFamily::TTwoSample | TestFamily::PointBiserialR => {
                matches!(metric, EsMetric::D | EsMetric::R)
            }
            TestFamily::Chi2Gof { df } => match metric {
                EsMetric::W => true,
                EsMetric::V { dfs } => dfs == df,
                _ => false,
            },
            TestFamily::OneWayF { .. } => matches!(metric, EsMetric::F),
        }
    }

    /// Critical value of the null distribution at this spec's level.
    pub fn critical_value(&self, n: u64) -> Result<f64> {
        let dist = self.null_distribution(n)?;
        let p = match self.tails {
            Tails::One => 1.0 - self.sig,
            Tails::Two => 1.0 - self.sig / 2.0,
        };
        dist.quantile(p)
    }
}

/// Critical value and minimum effect size at one exact N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MesAtN {
    pub n: u64,
    pub critical_value: f64,
    pub mes: EffectSize,
    pub df: DistributionParams,
}

/// The effect size that sits exactly at the significance cut-off for
/// sample size `n`, expressed in `metric`.
pub fn mes_at_n(spec: &TestSpec, n: u64, metric: EsMetric) -> Result<MesAtN> {
    if !spec.metric_compatible(metric) {
        return Err(Error::spec(format!(
            "metric {metric} does not apply to {:?}",
            spec.family()
        )));
    }
    let df = spec.null_distribution(n)?;
    let cv = spec.critical_value(n)?;
    let mes = match (spec.family(), metric) {
        (TestFamily::TTwoSample | TestFamily::PointBiserialR, EsMetric::D) => {
            effect_size::d_from_t(cv, n - 2)?
        }
        (TestFamily::TTwoSample | TestFamily::PointBiserialR, EsMetric::R) => {
            effect_size::r_from_t(cv, n - 2)?
        }
        (TestFamily::Chi2Gof { .. }, EsMetric::W) => effect_size::w_from_chi2(cv, n)?,
        (TestFamily::Chi2Gof { df }, EsMetric::V { .. }) => {
            effect_size::v_from_chi2(cv, n, df)?
        }
        (TestFamily::OneWayF { groups }, EsMetric::F) => {
            effect_size::f_from_f_stat(cv, groups - 1, n - groups)?
        }
        _ => unreachable!("compatibility checked above"),
    };
    Ok(MesAtN {
        n,
        critical_value: cv,
        mes,
        df,
    })
}

/// Result of the minimum-N search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivenessResult {
    /// Smallest total sample size whose MES covers the target.
    pub n_min: u64,
    /// Critical test statistic at `n_min`.
    pub critical_value: f64,
    /// MES actually achieved at `n_min` (at or just under the target).
    pub achieved_mes: EffectSize,
    /// Null distribution at `n_min`, carrying the df tuple.
    pub df: DistributionParams,
    /// The df floor already satisfied the target; no search happened.
    pub at_df_floor: bool,
    /// False when a two-group design cannot split `n_min` into equal
    /// groups (odd total).
    pub equal_split_possible: bool,
}

/// The solver's capture rule: `achieved`, rounded half away from zero at
/// [`ES_DECIMALS`] decimals, does not exceed `target` at the same
/// resolution.
pub fn meets_target(achieved: f64, target: f64) -> bool {
    let scale = 10f64.powi(ES_DECIMALS as i32);
    ((achieved * scale).round() as i64) <= ((target * scale).round() as i64)
}

/// MES at N as a bare number. Unlike [`mes_at_n`] this stays defined at
/// sample sizes so small that a bounded metric exceeds 1; the search
/// needs those values to know the target is simply not met yet.
fn raw_mes(spec: &TestSpec, n: u64, metric: EsMetric) -> Result<f64> {
    let cv = spec.critical_value(n)?;
    Ok(match (spec.family(), metric) {
        (TestFamily::TTwoSample | TestFamily::PointBiserialR, EsMetric::D) => {
            effect_size::d_value(cv, n - 2)
        }
        (TestFamily::TTwoSample | TestFamily::PointBiserialR, EsMetric::R) => {
            effect_size::r_value(cv, n - 2)
        }
        (TestFamily::Chi2Gof { .. }, EsMetric::W) => effect_size::w_value(cv, n),
        (TestFamily::Chi2Gof { df }, EsMetric::V { .. }) => effect_size::v_value(cv, n, df),
        (TestFamily::OneWayF { groups }, EsMetric::F) => {
            effect_size::f_value(cv, groups - 1, n - groups)
        }
        _ => unreachable!("compatibility checked by callers"),
    })
}

/// Smallest N at which `target` becomes statistically significant.
pub fn min_sample_size(spec: &TestSpec, target: &EffectSize) -> Result<SensitivenessResult> {
    if !spec.metric_compatible(target.metric()) {
        return Err(Error::spec(format!(
            "metric {} does not apply to {:?}",
            target.metric(),
            spec.family()
        )));
    }
    if target.value() <= 0.0 {
        return Err(Error::spec("target effect size must be positive"));
    }

    let metric = target.metric();
    let goal = target.value();
    let floor = spec.n_floor();

    let hits = |n: u64| -> Result<bool> { Ok(meets_target(raw_mes(spec, n, metric)?, goal)) };

    let at_df_floor = hits(floor)?;
    let n_min = if at_df_floor {
        floor
    } else {
        // exponential bracket, then binary search for the first capture
        let mut hi = floor.max(1) * 2;
        while !hits(hi)? {
            hi *= 2;
            if hi > MAX_N {
                return Err(Error::NonConvergence {
                    what: "minimum sample size bracket",
                    iterations: 40,
                });
            }
        }
        let mut lo = hi / 2; // known miss (or floor)
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if hits(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let critical_value = spec.critical_value(n_min)?;
    let raw = raw_mes(spec, n_min, metric)?;
    // The capture rule admits values within half a rounding quantum of
    // the target, so a bounded metric can land a hair above 1.0 when the
    // target is 1.0 itself; clamp that dust away.
    let value = if metric.bounded_by_one() { raw.min(1.0) } else { raw };
    let achieved_mes = EffectSize::new(metric, value)?;
    let equal_split_possible = match spec.family() {
        TestFamily::TTwoSample => n_min % 2 == 0,
        _ => true,
    };
    Ok(SensitivenessResult {
        n_min,
        critical_value,
        achieved_mes,
        df: spec.null_distribution(n_min)?,
        at_df_floor,
        equal_split_possible,
    })
}

/// Post-hoc sensitiveness: 100 · (n_actual / n_min − 1). Positive values
/// indicate over-sensitiveness, negative under-sensitiveness.
pub fn post_hoc_sensitiveness(n_actual: u64, n_min: u64) -> Result<f64> {
    if n_min == 0 {
        return Err(Error::domain("post-hoc sensitiveness requires n_min >= 1"));
    }
    Ok(100.0 * (n_actual as f64 / n_min as f64 - 1.0))
}
