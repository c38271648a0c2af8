//! Pooled-variance two-sample t test, one-tailed in the direction
//! group B > group A, with the 2t/sqrt(df) effect size used for capture
//! decisions.

use serde::{Deserialize, Serialize};

use crate::central::DistributionParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: u64,
    /// P(T >= t): the tail toward group B exceeding group A.
    pub p_one_tailed: f64,
    /// 2t / sqrt(df), signed; negative when group B fell below group A.
    pub d: f64,
}

fn mean_and_ss(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, ss)
}

/// Pooled-variance t test of group B against group A.
pub fn two_sample_t(group_a: &[f64], group_b: &[f64]) -> Result<TTestResult> {
    if group_a.len() < 2 || group_b.len() < 2 {
        return Err(Error::domain(format!(
            "two_sample_t needs at least 2 observations per group, got {} and {}",
            group_a.len(),
            group_b.len()
        )));
    }
    let (n_a, n_b) = (group_a.len() as f64, group_b.len() as f64);
    let (mean_a, ss_a) = mean_and_ss(group_a);
    let (mean_b, ss_b) = mean_and_ss(group_b);

    let df = group_a.len() as u64 + group_b.len() as u64 - 2;
    let pooled_var = (ss_a + ss_b) / df as f64;
    if pooled_var <= 0.0 {
        return Err(Error::Degenerate(
            "zero pooled variance; the t statistic is undefined".into(),
        ));
    }

    let se = (pooled_var * (1.0 / n_a + 1.0 / n_b)).sqrt();
    let t = (mean_b - mean_a) / se;
    let p_one_tailed = 1.0 - DistributionParams::student_t(df)?.cdf(t)?;
    let d = 2.0 * t / (df as f64).sqrt();

    Ok(TTestResult {
        t,
        df,
        p_one_tailed,
        d,
    })
}
