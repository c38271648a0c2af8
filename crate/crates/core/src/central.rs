//! Central Student t, chi-square, and Fisher F distributions: CDF and
//! quantile, built on the regularized incomplete beta/gamma functions.
//!
//! Degrees of freedom are integers throughout; a fractional df has no use
//! in this crate and is rejected at the type boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Tolerance on the CDF residual of a quantile: |cdf(x) − p| <= this.
pub const QUANTILE_CDF_TOL: f64 = 1e-10;

/// Relative bound on the final Newton step; |f/f'| estimates the distance
/// to the root, so this caps the error in x itself.
const QUANTILE_X_RTOL: f64 = 1e-12;

const QUANTILE_MAX_ITER: usize = 256;

/// A central test distribution together with its degrees of freedom.
///
/// Only the fields a family actually uses exist on its variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionParams {
    StudentT { df: u64 },
    ChiSquare { df: u64 },
    FisherF { df1: u64, df2: u64 },
}

impl DistributionParams {
    pub fn student_t(df: u64) -> Result<Self> {
        if df < 1 {
            return Err(Error::domain("Student t requires df >= 1"));
        }
        Ok(DistributionParams::StudentT { df })
    }

    pub fn chi_square(df: u64) -> Result<Self> {
        if df < 1 {
            return Err(Error::domain("chi-square requires df >= 1"));
        }
        Ok(DistributionParams::ChiSquare { df })
    }

    pub fn fisher_f(df1: u64, df2: u64) -> Result<Self> {
        if df1 < 1 || df2 < 1 {
            return Err(Error::domain("F requires df1 >= 1 and df2 >= 1"));
        }
        Ok(DistributionParams::FisherF { df1, df2 })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DistributionParams::StudentT { df } | DistributionParams::ChiSquare { df } => {
                if df < 1 {
                    return Err(Error::domain("df must be >= 1"));
                }
            }
            DistributionParams::FisherF { df1, df2 } => {
                if df1 < 1 || df2 < 1 {
                    return Err(Error::domain("df1 and df2 must be >= 1"));
                }
            }
        }
        Ok(())
    }

    /// Smallest value in the support (used as the lower bracket wall).
    fn support_min(&self) -> f64 {
        match self {
            DistributionParams::StudentT { .. } => f64::NEG_INFINITY,
            _ => 0.0,
        }
    }

    /// Cumulative probability P(X <= x).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if x.is_nan() {
            return Err(Error::domain("cdf input must not be NaN"));
        }
        match *self {
            DistributionParams::StudentT { df } => {
                if x == f64::NEG_INFINITY {
                    return Ok(0.0);
                }
                if x == f64::INFINITY {
                    return Ok(1.0);
                }
                if x == 0.0 {
                    return Ok(0.5);
                }
                let df_f = df as f64;
                // Half-tail mapping: P(|T| > |x|) = I_u(df/2, 1/2).
                let u = df_f / (df_f + x * x);
                let half_tail = 0.5 * special::reg_inc_beta(0.5 * df_f, 0.5, u)?;
                Ok(if x > 0.0 { 1.0 - half_tail } else { half_tail })
            }
            DistributionParams::ChiSquare { df } => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                if x == f64::INFINITY {
                    return Ok(1.0);
                }
                special::reg_inc_gamma_lower(0.5 * df as f64, 0.5 * x)
            }
            DistributionParams::FisherF { df1, df2 } => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                if x == f64::INFINITY {
                    return Ok(1.0);
                }
                let (d1, d2) = (df1 as f64, df2 as f64);
                let u = d1 * x / (d1 * x + d2);
                special::reg_inc_beta(0.5 * d1, 0.5 * d2, u)
            }
        }
    }

    /// Density, used internally for Newton refinement of the quantile.
    pub(crate) fn density(&self, x: f64) -> f64 {
        match *self {
            DistributionParams::StudentT { df } => {
                let v = df as f64;
                let ln_pdf = -special::ln_beta(0.5 * v, 0.5)
                    - 0.5 * v.ln()
                    - 0.5 * (v + 1.0) * (x * x / v).ln_1p();
                ln_pdf.exp()
            }
            DistributionParams::ChiSquare { df } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let k = 0.5 * df as f64;
                let ln_pdf = (k - 1.0) * x.ln()
                    - 0.5 * x
                    - k * std::f64::consts::LN_2
                    - special::ln_gamma(k).unwrap_or(f64::INFINITY);
                ln_pdf.exp()
            }
            DistributionParams::FisherF { df1, df2 } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let (d1, d2) = (df1 as f64, df2 as f64);
                let ln_pdf = 0.5 * (d1 * (d1 * x).ln() + d2 * d2.ln()
                    - (d1 + d2) * (d1 * x + d2).ln())
                    - x.ln()
                    - special::ln_beta(0.5 * d1, 0.5 * d2);
                ln_pdf.exp()
            }
        }
    }

    /// Quantile: the x with |cdf(x) − p| <= [`QUANTILE_CDF_TOL`], found by
    /// exponential bracket growth from an initial guess followed by
    /// safeguarded Newton/bisection. Monotone in p.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::domain(format!(
                "quantile requires 0 < p < 1, got {p}"
            )));
        }

        let (mut lo, mut hi) = self.bracket(p)?;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..QUANTILE_MAX_ITER {
            let f = self.cdf(x)? - p;
            if f > 0.0 {
                hi = x;
            } else if f < 0.0 {
                lo = x;
            } else {
                return Ok(x);
            }

            let d = self.density(x);
            if d.is_finite() && d > 0.0 {
                let step = f / d;
                // relative in x so tiny quantiles stay sharp, with an
                // absolute floor so roots at or near zero can terminate
                let x_tol = (QUANTILE_X_RTOL * x.abs()).max(1e-15);
                if f.abs() <= QUANTILE_CDF_TOL && step.abs() <= x_tol {
                    return Ok(x);
                }
                let newton = x - step;
                if newton > lo && newton < hi {
                    x = newton;
                    continue;
                }
            }
            if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
                // Bracket collapsed to adjacent floats; nothing tighter exists.
                return Ok(x);
            }
            x = 0.5 * (lo + hi);
        }
        Err(Error::NonConvergence {
            what: "quantile iteration",
            iterations: QUANTILE_MAX_ITER,
        })
    }

    /// Initial bracket [lo, hi] with cdf(lo) <= p <= cdf(hi).
    fn bracket(&self, p: f64) -> Result<(f64, f64)> {
        let guess = self.quantile_guess(p);
        let floor = self.support_min();

        let mut hi = if guess.is_finite() && guess > floor {
            guess.max(1e-8)
        } else {
            1.0
        };
        let mut grow = hi.abs().max(1.0);
        let mut iter = 0usize;
        while self.cdf(hi)? < p {
            hi += grow;
            grow *= 2.0;
            iter += 1;
            if iter > 200 {
                return Err(Error::NonConvergence {
                    what: "quantile upper bracket",
                    iterations: iter,
                });
            }
        }

        let mut lo = match self {
            DistributionParams::StudentT { .. } => -hi.abs().max(1.0),
            _ => 0.0,
        };
        if matches!(self, DistributionParams::StudentT { .. }) {
            let mut grow = lo.abs().max(1.0);
            let mut iter = 0usize;
            while self.cdf(lo)? > p {
                lo -= grow;
                grow *= 2.0;
                iter += 1;
                if iter > 200 {
                    return Err(Error::NonConvergence {
                        what: "quantile lower bracket",
                        iterations: iter,
                    });
                }
            }
        }
        Ok((lo, hi))
    }

    /// Cheap starting point for the bracket; correctness does not depend
    /// on its quality.
    fn quantile_guess(&self, p: f64) -> f64 {
        let z = probit_approx(p);
        match *self {
            DistributionParams::StudentT { df } => {
                let v = df as f64;
                // One Cornish-Fisher term beyond the normal limit.
                z + (z * z * z + z) / (4.0 * v)
            }
            DistributionParams::ChiSquare { df } => {
                let v = df as f64;
                // Wilson-Hilferty cube approximation.
                let t = 1.0 - 2.0 / (9.0 * v) + z * (2.0 / (9.0 * v)).sqrt();
                (v * t * t * t).max(1e-8)
            }
            DistributionParams::FisherF { .. } => 1.0,
        }
    }
}

/// Acklam's rational approximation to the standard normal quantile.
/// Only used to seed brackets; ~1e-9 accuracy is far more than needed.
#[allow(clippy::excessive_precision)]
fn probit_approx(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239e0,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838e0,
        -2.549732539343734e0,
        4.374664141464968e0,
        2.938163982698783e0,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996e0,
        3.754408661907416e0,
    ];
    const P_LOW: f64 = 0.02425;

    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -probit_approx(1.0 - p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, tol: f64) -> bool {
        (got - want).abs() <= tol
    }

    #[test]
    fn constructors_reject_zero_df() {
        assert!(DistributionParams::student_t(0).is_err());
        assert!(DistributionParams::chi_square(0).is_err());
        assert!(DistributionParams::fisher_f(0, 5).is_err());
        assert!(DistributionParams::fisher_f(2, 0).is_err());
    }

    #[test]
    fn cdf_reference_values() {
        let t = DistributionParams::student_t(270).unwrap();
        assert!(close(t.cdf(1.6514).unwrap(), 0.950090262782, 1e-10));
        let x2 = DistributionParams::chi_square(1).unwrap();
        assert!(close(x2.cdf(3.8415).unwrap(), 0.950001227929, 1e-10));
        let f = DistributionParams::fisher_f(2, 99).unwrap();
        assert!(close(f.cdf(3.0882).unwrap(), 0.949998135031, 1e-10));
        // scipy spot values further from the tables
        let t7 = DistributionParams::student_t(7).unwrap();
        assert!(close(t7.cdf(-2.5).unwrap(), 0.020496109292876, 1e-12));
        let f10 = DistributionParams::fisher_f(10, 10).unwrap();
        assert!(close(f10.cdf(1.0).unwrap(), 0.5, 1e-12));
    }

    #[test]
    fn student_t_is_cauchy_at_df_1() {
        let t1 = DistributionParams::student_t(1).unwrap();
        let got = t1.cdf(0.5).unwrap();
        let want = 0.5 + (0.5f64).atan() / std::f64::consts::PI;
        assert!(close(got, want, 1e-13));
    }

    #[test]
    fn chi_square_df2_is_exponential() {
        let x2 = DistributionParams::chi_square(2).unwrap();
        for x in [0.1f64, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let want = 1.0 - (-x / 2.0).exp();
            assert!(
                close(x2.cdf(x).unwrap(), want, 1e-12),
                "chi2(2) at {x}: {} vs {want}",
                x2.cdf(x).unwrap()
            );
        }
    }

    #[test]
    fn cdf_handles_boundaries() {
        let t = DistributionParams::student_t(5).unwrap();
        assert_eq!(t.cdf(f64::NEG_INFINITY).unwrap(), 0.0);
        assert_eq!(t.cdf(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(t.cdf(0.0).unwrap(), 0.5);
        let x2 = DistributionParams::chi_square(3).unwrap();
        assert_eq!(x2.cdf(-4.0).unwrap(), 0.0);
        let f = DistributionParams::fisher_f(3, 9).unwrap();
        assert_eq!(f.cdf(-0.1).unwrap(), 0.0);
        assert!(t.cdf(f64::NAN).is_err());
    }

    #[test]
    fn quantile_reference_values() {
        let t28 = DistributionParams::student_t(28).unwrap();
        assert!(close(t28.quantile(0.95).unwrap(), 1.7011309343, 5e-4));
        let t162 = DistributionParams::student_t(162).unwrap();
        assert!(close(t162.quantile(0.99).unwrap(), 2.3495863842, 5e-3));
        let x5 = DistributionParams::chi_square(5).unwrap();
        assert!(close(x5.quantile(0.95).unwrap(), 11.0704976935, 5e-4));
        // tighter checks against scipy
        let t270 = DistributionParams::student_t(270).unwrap();
        assert!(close(t270.quantile(0.95).unwrap(), 1.6505167479, 1e-8));
        let f = DistributionParams::fisher_f(2, 99).unwrap();
        assert!(close(f.quantile(0.95).unwrap(), 3.0882396257, 1e-8));
        let f2 = DistributionParams::fisher_f(1, 387).unwrap();
        assert!(close(f2.quantile(0.95).unwrap(), 3.8655994409, 1e-8));
        let x1000 = DistributionParams::chi_square(1000).unwrap();
        assert!(close(x1000.quantile(0.95).unwrap(), 1074.6794488034, 1e-6));
    }

    #[test]
    fn quantile_residual_meets_contract() {
        for params in [
            DistributionParams::student_t(1).unwrap(),
            DistributionParams::student_t(46).unwrap(),
            DistributionParams::chi_square(1).unwrap(),
            DistributionParams::chi_square(270).unwrap(),
            DistributionParams::fisher_f(1, 1).unwrap(),
            DistributionParams::fisher_f(5, 182).unwrap(),
        ] {
            for p in [0.0005, 0.01, 0.2, 0.5, 0.8, 0.95, 0.99, 0.9995] {
                let x = params.quantile(p).unwrap();
                let back = params.cdf(x).unwrap();
                assert!(
                    (back - p).abs() <= QUANTILE_CDF_TOL,
                    "{params:?} p={p}: residual {:.3e}",
                    (back - p).abs()
                );
            }
        }
    }

    #[test]
    fn quantile_monotone_in_p() {
        let params = DistributionParams::student_t(9).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 1..40 {
            let q = params.quantile(i as f64 / 40.0).unwrap();
            assert!(q > prev);
            prev = q;
        }
    }

    #[test]
    fn quantile_rejects_out_of_range_p() {
        let t = DistributionParams::student_t(4).unwrap();
        for p in [0.0, 1.0, -0.2, 1.7, f64::NAN] {
            assert!(matches!(t.quantile(p), Err(Error::Domain(_))), "p={p}");
        }
    }
}
