//! Neyman-Pearson power baseline: power of a test at a given N against a
//! known population effect size, and the minimum N reaching a target power.
//!
//! Noncentrality conventions: for the t families delta = d·sqrt(n1·n2/N)
//! with n1 = ceil(N/2), n2 = floor(N/2) (r is first mapped to
//! d = 2r/sqrt(1−r²)); chi-square uses lambda = N·w²; one-way ANOVA uses
//! lambda = N·f².
//!
//! The minimum-N search steps over sample sizes that admit equal group
//! allocation (even N for two-sample t, multiples of k for k-group
//! ANOVA); correlation and goodness-of-fit designs step over every N.
//! Group-based power tools size per-group n and report the total, and the
//! reference tables this crate reproduces follow that convention.

use serde::{Deserialize, Serialize};

use crate::effect_size::{EffectSize, EsMetric};
use crate::error::{Error, Result};
use crate::noncentral::{Noncentrality, noncentral_cdf};
use crate::sensitiveness::{Tails, TestFamily, TestSpec};

const MAX_N: u64 = 1 << 40;

/// A power analysis: the test, the population effect size assumed under
/// the alternative, and the power being sought.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub test: TestSpec,
    pub population_es: EffectSize,
    pub target_power: f64,
}

impl PowerSpec {
    pub fn new(test: TestSpec, population_es: EffectSize, target_power: f64) -> Result<Self> {
        if !test.metric_compatible(population_es.metric()) {
            return Err(Error::spec(format!(
                "metric {} does not apply to {:?}",
                population_es.metric(),
                test.family()
            )));
        }
        if !target_power.is_finite() || target_power <= 0.0 || target_power >= 1.0 {
            return Err(Error::spec(format!(
                "target power must lie strictly between 0 and 1, got {target_power}"
            )));
        }
        Ok(PowerSpec {
            test,
            population_es,
            target_power,
        })
    }

    /// Effect size as Cohen's d, for the t families.
    fn as_d(&self) -> Result<f64> {
        match self.population_es.metric() {
            EsMetric::D => Ok(self.population_es.value()),
            EsMetric::R => {
                let r = self.population_es.value();
                if r >= 1.0 {
                    return Err(Error::domain("r = 1 has no d equivalent"));
                }
                Ok(2.0 * r / (1.0 - r * r).sqrt())
            }
            m => Err(Error::spec(format!("{m} is not a t-family metric"))),
        }
    }

    /// Effect size as Cohen's w, for chi-square.
    fn as_w(&self) -> Result<f64> {
        match self.population_es.metric() {
            EsMetric::W => Ok(self.population_es.value()),
            EsMetric::V { dfs } => Ok(self.population_es.value() * (dfs as f64).sqrt()),
            m => Err(Error::spec(format!("{m} is not a chi-square metric"))),
        }
    }
}

/// P(reject | population effect of `spec`) at total sample size n.
pub fn power_at_n(spec: &PowerSpec, n: u64) -> Result<f64> {
    let dist = spec.test.null_distribution(n)?;
    let alpha = spec.test.sig();

    match spec.test.family() {
        TestFamily::TTwoSample | TestFamily::PointBiserialR => {
            let d = spec.as_d()?;
            let n1 = n.div_ceil(2) as f64;
            let n2 = (n / 2) as f64;
            let delta = Noncentrality(d * (n1 * n2 / n as f64).sqrt());
            match spec.test.tails() {
                Tails::One => {
                    let crit = dist.quantile(1.0 - alpha)?;
                    Ok(1.0 - noncentral_cdf(&dist, delta, crit)?)
                }
                Tails::Two => {
                    let crit = dist.quantile(1.0 - alpha / 2.0)?;
                    let upper = 1.0 - noncentral_cdf(&dist, delta, crit)?;
                    let lower = noncentral_cdf(&dist, delta, -crit)?;
                    Ok(upper + lower)
                }
            }
        }
        TestFamily::Chi2Gof { .. } => {
            let w = spec.as_w()?;
            let lambda = Noncentrality(n as f64 * w * w);
            let crit = dist.quantile(1.0 - alpha)?;
            Ok(1.0 - noncentral_cdf(&dist, lambda, crit)?)
        }
        TestFamily::OneWayF { .. } => {
            let f = spec.population_es.value();
            let lambda = Noncentrality(n as f64 * f * f);
            let crit = dist.quantile(1.0 - alpha)?;
            Ok(1.0 - noncentral_cdf(&dist, lambda, crit)?)
        }
    }
}

/// Step between candidate sample sizes: designs that allocate equal
/// groups only admit totals divisible by the group count.
fn allocation_step(family: TestFamily) -> u64 {
    match family {
        TestFamily::TTwoSample => 2,
        TestFamily::OneWayF { groups } => groups,
        TestFamily::PointBiserialR | TestFamily::Chi2Gof { .. } => 1,
    }
}

/// Smallest admissible N with power >= the spec's target.
pub fn min_n_for_power(spec: &PowerSpec) -> Result<u64> {
    if spec.population_es.value() <= 0.0 {
        return Err(Error::spec(
            "population effect size must be positive to search for power",
        ));
    }
    let step = allocation_step(spec.test.family());
    let floor = spec.test.n_floor().div_ceil(step) * step;

    // Search over lattice indices m where N = m * step.
    let power_at = |m: u64| -> Result<f64> { power_at_n(spec, m * step) };
    let m_floor = floor / step;

    if power_at(m_floor)? >= spec.target_power {
        return Ok(floor);
    }
    let mut hi = m_floor * 2;
    while power_at(hi)? < spec.target_power {
        hi *= 2;
        if hi * step > MAX_N {
            return Err(Error::NonConvergence {
                what: "minimum power sample size bracket",
                iterations: 40,
            });
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if power_at(mid)? >= spec.target_power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi * step)
}
