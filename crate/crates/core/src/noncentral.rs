//! Noncentral t, chi-square, and F CDFs, used by the power baseline.
//!
//! Chi-square and F are Poisson mixtures of their central counterparts;
//! t uses the series representation over incomplete beta functions. All
//! three expand from the modal Poisson index in both directions until the
//! remaining mass is below 1e-14, capped at [`MAX_TERMS`] terms; hitting
//! the cap is a reported numeric error.

use serde::{Deserialize, Serialize};

use crate::central::DistributionParams;
use crate::error::{Error, Result};
use crate::special;

/// Series cap. Stable for noncentrality several hundreds large, far
/// beyond anything the solvers in this crate produce.
pub const MAX_TERMS: usize = 10_000;

/// Poisson mass left uncovered when the series is truncated.
const MASS_TOL: f64 = 1e-14;

/// Noncentrality parameter: delta for the t family (any sign), lambda
/// (>= 0) for chi-square and F.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Noncentrality(pub f64);

impl From<f64> for Noncentrality {
    fn from(v: f64) -> Self {
        Noncentrality(v)
    }
}

/// CDF of the noncentral counterpart of `params` at `x`.
///
/// With zero noncentrality this agrees with the central CDF to 1e-9
/// or better (exactly, for t and chi-square).
pub fn noncentral_cdf(params: &DistributionParams, nc: Noncentrality, x: f64) -> Result<f64> {
    let Noncentrality(nc) = nc;
    if !nc.is_finite() {
        return Err(Error::domain("noncentrality must be finite"));
    }
    if x.is_nan() {
        return Err(Error::domain("cdf input must not be NaN"));
    }
    match *params {
        DistributionParams::StudentT { df } => {
            DistributionParams::student_t(df)?;
            noncentral_t_cdf(df as f64, nc, x)
        }
        DistributionParams::ChiSquare { df } => {
            DistributionParams::chi_square(df)?;
            if nc < 0.0 {
                return Err(Error::domain("noncentral chi-square requires lambda >= 0"));
            }
            if x <= 0.0 {
                return Ok(0.0);
            }
            if nc == 0.0 {
                return params.cdf(x);
            }
            poisson_mixture(nc, GammaLadder::new(0.5 * df as f64, 0.5 * x)?)
        }
        DistributionParams::FisherF { df1, df2 } => {
            DistributionParams::fisher_f(df1, df2)?;
            if nc < 0.0 {
                return Err(Error::domain("noncentral F requires lambda >= 0"));
            }
            if x <= 0.0 {
                return Ok(0.0);
            }
            if nc == 0.0 {
                return params.cdf(x);
            }
            let (d1, d2) = (df1 as f64, df2 as f64);
            let y = d1 * x / (d1 * x + d2);
            poisson_mixture(nc, BetaLadder::new(0.5 * d1, 0.5 * d2, y)?)
        }
    }
}

/// A family of central-CDF values C(j), j = 0, 1, ..., that can be walked
/// up and down by single steps from a seed index.
trait TermLadder {
    /// Value C(j0) and the state needed to step from it.
    fn seed(&mut self, j0: usize) -> Result<()>;
    fn value(&self) -> f64;
    /// Move the ladder from j to j+1.
    fn step_up(&mut self);
    /// Move the ladder from j to j-1 (never called at j = 0).
    fn step_down(&mut self);
    fn clone_state(&self) -> Self;
}

/// P(a + j, x) walked via P(a+1, x) = P(a, x) − x^a e^{−x} / Γ(a+1).
struct GammaLadder {
    a0: f64,
    x: f64,
    j: f64,
    value: f64,
    /// d(j) = x^(a0+j) e^(−x) / Γ(a0+j+1), the decrement from j to j+1
    dec: f64,
}

impl GammaLadder {
    fn new(a0: f64, x: f64) -> Result<Self> {
        Ok(GammaLadder {
            a0,
            x,
            j: 0.0,
            value: 0.0,
            dec: 0.0,
        })
    }
}

impl TermLadder for GammaLadder {
    fn seed(&mut self, j0: usize) -> Result<()> {
        self.j = j0 as f64;
        let a = self.a0 + self.j;
        self.value = special::reg_inc_gamma_lower(a, self.x)?;
        self.dec =
            (a * self.x.ln() - self.x - special::ln_gamma(a + 1.0)?).exp();
        Ok(())
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn step_up(&mut self) {
        self.value = (self.value - self.dec).max(0.0);
        self.j += 1.0;
        self.dec *= self.x / (self.a0 + self.j);
    }

    fn step_down(&mut self) {
        self.j -= 1.0;
        self.dec *= (self.a0 + self.j + 1.0) / self.x;
        self.value = (self.value + self.dec).min(1.0);
    }

    fn clone_state(&self) -> Self {
        GammaLadder { ..*self }
    }
}

/// I_y(a + j, b) walked via I_y(a+1, b) = I_y(a, b) − T(a) with
/// T(a) = y^a (1−y)^b / (a B(a, b)).
struct BetaLadder {
    a0: f64,
    b: f64,
    y: f64,
    j: f64,
    value: f64,
    /// T(a0 + j), the decrement from j to j+1
    dec: f64,
}

impl BetaLadder {
    fn new(a0: f64, b: f64, y: f64) -> Result<Self> {
        Ok(BetaLadder {
            a0,
            b,
            y,
            j: 0.0,
            value: 0.0,
            dec: 0.0,
        })
    }
}

impl TermLadder for BetaLadder {
    fn seed(&mut self, j0: usize) -> Result<()> {
        self.j = j0 as f64;
        let a = self.a0 + self.j;
        self.value = special::reg_inc_beta(a, self.b, self.y)?;
        self.dec = (a * self.y.ln() + self.b * (-self.y).ln_1p()
            - special::ln_beta(a, self.b))
        .exp()
            / a;
        Ok(())
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn step_up(&mut self) {
        self.value = (self.value - self.dec).max(0.0);
        let a = self.a0 + self.j;
        // T(a) = Γ(a+b) y^a (1−y)^b / (Γ(a+1) Γ(b)), so T(a+1)/T(a) = y(a+b)/(a+1).
        self.dec *= self.y * (a + self.b) / (a + 1.0);
        self.j += 1.0;
    }

    fn step_down(&mut self) {
        self.j -= 1.0;
        let a = self.a0 + self.j;
        self.dec *= (a + 1.0) / (self.y * (a + self.b));
        self.value = (self.value + self.dec).min(1.0);
    }

    fn clone_state(&self) -> Self {
        BetaLadder { ..*self }
    }
}

/// Sum over j of pois(j; lambda/2) · C(j), expanding from the modal index
/// until the uncovered Poisson mass is below [`MASS_TOL`].
fn poisson_mixture<L: TermLadder>(lambda: f64, mut ladder: L) -> Result<f64> {
    let half = 0.5 * lambda;
    let j0 = half.floor() as usize;

    // pois(j0; half) via logs to survive large lambda
    let w0 = (-half + (j0 as f64) * half.ln() - special::ln_gamma(j0 as f64 + 1.0)?).exp();

    ladder.seed(j0)?;
    let mut down = ladder.clone_state();

    let mut acc = w0 * ladder.value();
    let mut covered = w0;

    let mut w_up = w0;
    let mut j_up = j0;
    let mut w_down = w0;
    let mut j_down = j0;
    let mut terms = 1usize;

    while 1.0 - covered > MASS_TOL {
        if terms >= MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "noncentral Poisson mixture",
                iterations: MAX_TERMS,
            });
        }
        // step up (always possible)
        j_up += 1;
        w_up *= half / j_up as f64;
        ladder.step_up();
        acc += w_up * ladder.value();
        covered += w_up;
        terms += 1;

        if j_down > 0 {
            w_down *= j_down as f64 / half;
            j_down -= 1;
            down.step_down();
            acc += w_down * down.value();
            covered += w_down;
            terms += 1;
        }

        // Rounding can leave `covered` a few ulps shy of 1; once both
        // flanks have underflowed nothing more can arrive.
        if w_up < 1e-18 && (j_down == 0 || w_down < 1e-18) {
            break;
        }
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// Noncentral t CDF via the incomplete-beta series.
///
/// For x >= 0:
///   F(x; df, delta) = Phi(−delta) + (1/2) Σ_j [ p_j I_y(j+1/2, df/2)
///                                             + q_j I_y(j+1,   df/2) ]
/// with y = x²/(x²+df), p_j the Poisson(delta²/2) masses and
/// q_j = e^(−delta²/2) (delta²/2)^j delta / (sqrt(2) Γ(j+3/2)).
/// For x < 0 the reflection F(x; delta) = 1 − F(−x; −delta) applies.
fn noncentral_t_cdf(df: f64, delta: f64, x: f64) -> Result<f64> {
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x < 0.0 {
        return Ok(1.0 - noncentral_t_cdf(df, -delta, -x)?);
    }

    let phi = special::normal_cdf(-delta)?;
    if x == 0.0 {
        return Ok(phi);
    }
    let y = x * x / (x * x + df);
    let half_d2 = 0.5 * delta * delta;

    if half_d2 == 0.0 {
        // q_j vanish; the p-series collapses to the central half-tail.
        let i = special::reg_inc_beta(0.5, 0.5 * df, y)?;
        return Ok((phi + 0.5 * i).clamp(0.0, 1.0));
    }

    let j0 = half_d2.floor() as usize;
    let ln_w0 = -half_d2 + (j0 as f64) * half_d2.ln();
    let p0 = (ln_w0 - special::ln_gamma(j0 as f64 + 1.0)?).exp();
    let q0 = (ln_w0 - special::ln_gamma(j0 as f64 + 1.5)?).exp() * delta
        / std::f64::consts::SQRT_2;

    let mut p_ladder = BetaLadder::new(0.5, 0.5 * df, y)?;
    p_ladder.seed(j0)?;
    let mut p_down = p_ladder.clone_state();
    let mut q_ladder = BetaLadder::new(1.0, 0.5 * df, y)?;
    q_ladder.seed(j0)?;
    let mut q_down = q_ladder.clone_state();

    let mut acc = p0 * p_ladder.value() + q0 * q_ladder.value();
    let mut p_covered = p0;

    let (mut p_up, mut q_up, mut j_up) = (p0, q0, j0);
    let (mut p_dn, mut q_dn, mut j_dn) = (p0, q0, j0);
    let mut terms = 1usize;

    // The p_j are a Poisson mass function; the |q_j| decay at the same
    // geometric rate, so covering the p-mass bounds both tails.
    while 1.0 - p_covered > MASS_TOL {
        if terms >= MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "noncentral t series",
                iterations: MAX_TERMS,
            });
        }
        j_up += 1;
        p_up *= half_d2 / j_up as f64;
        q_up *= half_d2 / (j_up as f64 + 0.5);
        p_ladder.step_up();
        q_ladder.step_up();
        acc += p_up * p_ladder.value() + q_up * q_ladder.value();
        p_covered += p_up;
        terms += 1;

        if j_dn > 0 {
            p_dn *= j_dn as f64 / half_d2;
            q_dn *= (j_dn as f64 + 0.5) / half_d2;
            j_dn -= 1;
            p_down.step_down();
            q_down.step_down();
            acc += p_dn * p_down.value() + q_dn * q_down.value();
            p_covered += p_dn;
            terms += 1;
        }

        if p_up < 1e-18 && (j_dn == 0 || p_dn < 1e-18) {
            break;
        }
    }

    Ok((phi + 0.5 * acc).clamp(0.0, 1.0))
}
