//! Beta-distribution special functions: log-gamma, density, regularized
//! incomplete beta (CDF) and its inverse.
//!
//! Everything here is a pure function of its arguments. Iteration budgets are
//! fixed; running out of iterations is an error, never a silent approximation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Maximum continued-fraction terms for the incomplete beta.
pub const CF_MAX_ITER: usize = 200;
/// Maximum combined Newton/bisection steps for the quantile.
pub const QUANTILE_MAX_ITER: usize = 100;

const CF_EPS: f64 = 1e-15;
const CF_TINY: f64 = 1e-300;
/// Quantile stops early once |cdf(x) - q| falls below this.
const QUANTILE_TARGET: f64 = 1e-12;
/// Accepted residual when the bracket has collapsed to adjacent floats.
const QUANTILE_ACCEPT: f64 = 1e-9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Shape parameters of a beta distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_shape("alpha", alpha)?;
        check_shape("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        beta_pdf(*self, x)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        beta_cdf(*self, x)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        beta_quantile(*self, q)
    }

    /// Symmetric interval holding `mass` of the distribution.
    pub fn central_interval(&self, mass: f64) -> Result<(f64, f64)> {
        if !(mass > 0.0 && mass < 1.0) {
            return Err(Error::Domain {
                name: "mass",
                value: mass,
                domain: "(0, 1)",
            });
        }
        let tail = 0.5 * (1.0 - mass);
        Ok((self.quantile(tail)?, self.quantile(1.0 - tail)?))
    }
}

fn check_shape(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: v,
            domain: "(0, inf)",
        })
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            domain: "[0, 1]",
        })
    }
}

/// Natural log of the gamma function for `x > 0`.
///
/// Lanczos (g = 7) below 10, Stirling's series with five correction terms
/// above; both are accurate to a few ulps of the result.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "(0, inf)",
        });
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    if x >= 10.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 360.0
                        - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series;
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// ln B(a, b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    check_shape("a", a)?;
    check_shape("b", b)?;
    Ok(ln_beta_unchecked(a, b))
}

fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b)
}

/// Beta density at `x`.
pub fn beta_pdf(p: BetaParams, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    let (a, b) = (p.alpha, p.beta);
    if x == 0.0 || x == 1.0 {
        // the exponent on the vanishing factor decides 0, finite or infinite
        let e = if x == 0.0 { a } else { b };
        return Ok(if e < 1.0 {
            f64::INFINITY
        } else if e == 1.0 {
            (-ln_beta_unchecked(a, b)).exp()
        } else {
            0.0
        });
    }
    let log_density = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta_unchecked(a, b);
    Ok(log_density.exp())
}

/// Regularized incomplete beta I_x(alpha, beta).
pub fn beta_cdf(p: BetaParams, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let (a, b) = (p.alpha, p.beta);
    // prefix x^a (1-x)^b / B(a,b), shared by both branches
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta_unchecked(a, b);
    let front = ln_front.exp();
    let value = if x <= (a + 1.0) / (a + b + 2.0) {
        front * incbeta_cf(a, b, x)? / a
    } else {
        1.0 - front * incbeta_cf(b, a, 1.0 - x)? / b
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Continued fraction for the incomplete beta, modified Lentz evaluation.
fn incbeta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        // even step
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // odd step
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete beta continued fraction",
        iterations: CF_MAX_ITER,
    })
}

/// Inverse of [`beta_cdf`]: the `x` with `I_x(alpha, beta) = q`.
///
/// Newton steps from a normal-approximation seed, kept inside a shrinking
/// bracket; a bisection step replaces any Newton step that leaves the
/// bracket or fails to halve it.
pub fn beta_quantile(p: BetaParams, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain {
            name: "q",
            value: q,
            domain: "(0, 1)",
        });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x = initial_guess(p, q);
    let mut best = (f64::INFINITY, x);
    let mut step = 1.0_f64;
    let mut prev_step = 1.0_f64;

    for _ in 0..QUANTILE_MAX_ITER {
        let resid = beta_cdf(p, x)? - q;
        if resid.abs() < best.0 {
            best = (resid.abs(), x);
        }
        if resid.abs() <= QUANTILE_TARGET {
            return Ok(x);
        }
        if resid < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // bracket is down to adjacent floats
            break;
        }

        let density = beta_pdf(p, x)?;
        let newton = x - resid / density;
        // Newton must land inside the bracket and shrink the step at least
        // geometrically; otherwise bisect.
        let newton_ok = density.is_finite()
            && density > 0.0
            && newton > lo
            && newton < hi
            && (2.0 * resid).abs() <= (prev_step * density).abs();
        prev_step = step;
        if newton_ok {
            step = (x - newton).abs();
            x = newton;
        } else {
            step = 0.5 * (hi - lo);
            x = mid;
        }
    }

    if best.0 <= QUANTILE_ACCEPT {
        Ok(best.1)
    } else {
        Err(Error::NoConvergence {
            routine: "beta quantile",
            iterations: QUANTILE_MAX_ITER,
        })
    }
}

fn initial_guess(p: BetaParams, q: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let s = a + b;
    let mean = a / s;
    let sd = (a * b / (s * s * (s + 1.0))).sqrt();
    let guess = mean + std_normal_quantile(q) * sd;
    if guess > 0.0 && guess < 1.0 {
        guess
    } else {
        mean
    }
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error about 1e-9). Used only to seed Newton.
pub(crate) fn std_normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

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
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
