//! Special functions: gamma, generalized binomial coefficients, Bessel
//! J_nu and I_nu for real nu > -1, generalized Laguerre polynomials, and
//! incomplete gamma functions.
//!
//! All evaluations are pure and reentrant.

use crate::error::{Error, Result};
use crate::fx;

/// A finite real parameter (an order nu, a Laguerre superscript, or a
/// differintegration order).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(value: f64) -> Result<RealOrder> {
        if value.is_finite() {
            Ok(RealOrder(value))
        } else {
            Err(Error::Domain("order must be finite"))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    s
}

/// Gamma(x) for x > 0.
fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // lift once: Gamma(x) = Gamma(x+1)/x
        return gamma_pos(x + 1.0) / x;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    fx::sqrt(core::f64::consts::TAU) * fx::powf(t, z + 0.5) * fx::exp(-t) * lanczos_sum(z)
}

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma(x + 1.0) - fx::ln(x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * fx::ln(core::f64::consts::TAU) + (z + 0.5) * fx::ln(t) - t + fx::ln(lanczos_sum(z))
}

fn is_nonpositive_integer(c: f64) -> bool {
    c <= 0.0 && c == fx::floor(c)
}

/// The Gamma function on the real line minus its poles.
///
/// Negative non-integer arguments are computed by the lifting recursion
/// `Gamma(c) = Gamma(c + [-c] + 1) / (c (c+1) ... (c + [-c]))`.
pub fn gamma(c: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::GammaPole);
    }
    if c > 0.0 {
        return Ok(gamma_pos(c));
    }
    let k = fx::floor(-c) as i64; // [-c]
    let mut denom = 1.0;
    let mut w = c;
    for _ in 0..=k {
        denom *= w;
        w += 1.0;
    }
    Ok(gamma_pos(w) / denom)
}

/// 1 / Gamma(c): entire, zero at the poles of Gamma.
pub fn gamma_recip(c: f64) -> f64 {
    if is_nonpositive_integer(c) {
        return 0.0;
    }
    match gamma(c) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Generalized binomial coefficient `C(n + alpha, n)` for integer `n` and
/// real `alpha`, as the finite product `prod_{i=1..n} (alpha + i) / i`.
///
/// The product reproduces every case of the piecewise definition: it is 1
/// at n = 0, vanishes for n < 0 by convention, vanishes when a factor
/// `alpha + i` is exactly zero (alpha a negative integer with
/// n + alpha >= 0), and otherwise equals the Gamma-ratio value.
pub fn gen_binomial(n: i64, alpha: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 1..=n {
        acc *= (alpha + i as f64) / i as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Bessel functions
// ---------------------------------------------------------------------------

/// Crossover from the power series to the Hankel asymptotic expansion.
const BESSEL_ASYMPTOTIC_Z: f64 = 30.0;
const SERIES_MAX_TERMS: usize = 500;

fn bessel_series(nu: f64, z: f64, sign: f64) -> Result<f64> {
    // sum_l sign^l (z/2)^{2l+nu} / (l! Gamma(nu+l+1))
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let w = 0.25 * z * z;
    let mut term = fx::powf(0.5 * z, nu) * gamma_recip(nu + 1.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for l in 1..SERIES_MAX_TERMS {
        let lf = l as f64;
        term *= sign * w / (lf * (nu + lf));
        sum += term;
        let mag = fx::abs(term);
        if mag < 1e-17 * fx::abs(sum) && mag < prev {
            return Ok(sum);
        }
        prev = mag;
    }
    Err(Error::Convergence("bessel series"))
}

/// Alternating series cancels roughly e^z of precision; above this the
/// normalized sum is accumulated in double-double.
const J_SERIES_DD_Z: f64 = 5.0;

fn bessel_j_series_dd(nu: f64, z: f64) -> Result<f64> {
    use crate::dd::{Dd, ONE};
    let w = Dd::from(0.5 * z).mul(Dd::from(0.5 * z));
    let nu_dd = Dd::from(nu);
    let mut term = ONE;
    let mut sum = ONE;
    for l in 1..SERIES_MAX_TERMS {
        let lf = l as f64;
        // keep each factor exact in dd: rounding l*(nu+l) once per term
        // feeds the alternating-sum cancellation
        term = term.mul(w).div(Dd::from(lf)).div(nu_dd.add(Dd::from(lf))).neg();
        sum = sum.add(term);
        if term.abs().hi < 1e-34 * sum.abs().hi + 1e-320 {
            let prefactor = fx::powf(0.5 * z, nu) * gamma_recip(nu + 1.0);
            return Ok(prefactor * sum.to_f64());
        }
    }
    Err(Error::Convergence("bessel series"))
}

/// Hankel asymptotic coefficients a_k(nu) = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k).
fn hankel_pq(nu: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut ak = 1.0;
    let mut best = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        ak *= (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * z);
        let mag = fx::abs(ak);
        if mag > best {
            break;
        }
        best = mag;
        let quarter = k % 4;
        match quarter {
            0 => p += ak,
            1 => q += ak,
            2 => p -= ak,
            _ => q -= ak,
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// Bessel function of the first kind J_nu(z) for nu > -1, z >= 0.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if nu <= -1.0 {
        return Err(Error::Domain("bessel_j requires nu > -1"));
    }
    if z < 0.0 {
        return Err(Error::Domain("bessel_j requires z >= 0"));
    }
    if z <= J_SERIES_DD_Z {
        return bessel_series(nu, z, -1.0);
    }
    if z <= BESSEL_ASYMPTOTIC_Z {
        return bessel_j_series_dd(nu, z);
    }
    let (p, q) = hankel_pq(nu, z);
    let omega = z - (0.5 * nu + 0.25) * core::f64::consts::PI;
    Ok(fx::sqrt(2.0 / (core::f64::consts::PI * z)) * (p * fx::cos(omega) - q * fx::sin(omega)))
}

/// d/dz J_nu(z), via J_nu' = (nu/z) J_nu - J_{nu+1}.
pub fn bessel_j_prime(nu: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::Domain("bessel_j_prime requires z > 0"));
    }
    Ok((nu / z) * bessel_j(nu, z)? - bessel_j(nu + 1.0, z)?)
}

/// Modified Bessel function I_nu(z) for nu > -1, z >= 0.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    Ok(bessel_i_scaled(nu, z)? * fx::exp(z))
}

/// Exponentially scaled modified Bessel function `e^{-z} I_nu(z)`.
///
/// This is the form consumed by the transition densities, where the
/// exponential factor cancels against Gaussian weights.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    if nu <= -1.0 {
        return Err(Error::Domain("bessel_i requires nu > -1"));
    }
    if z < 0.0 {
        return Err(Error::Domain("bessel_i requires z >= 0"));
    }
    if z <= BESSEL_ASYMPTOTIC_Z {
        return Ok(bessel_series(nu, z, 1.0)? * fx::exp(-z));
    }
    // e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut ak = 1.0;
    let mut best = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        ak *= -(mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * z);
        if fx::abs(ak) > best {
            break;
        }
        best = fx::abs(ak);
        sum += ak;
        if fx::abs(ak) < 1e-17 {
            break;
        }
    }
    Ok(sum / fx::sqrt(core::f64::consts::TAU * z))
}

// ---------------------------------------------------------------------------
// Laguerre polynomials
// ---------------------------------------------------------------------------

/// Generalized Laguerre polynomial L_j^alpha(x), any real alpha.
///
/// Evaluated by the three-term recurrence, which is an identity of the
/// polynomial family `L_j^alpha(x) = sum_l (-1)^l C(j+alpha, j-l) x^l / l!`
/// for every real alpha and is stable where the explicit sum cancels.
pub fn laguerre(j: u32, alpha: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if j == 0 {
        return p0;
    }
    let mut p1 = 1.0 + alpha - x;
    for k in 1..j {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// All of L_0^alpha(x) ... L_n^alpha(x) in one recurrence pass.
pub fn laguerre_all(n: usize, alpha: f64, x: f64) -> alloc::vec::Vec<f64> {
    let mut out = alloc::vec::Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + alpha - x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(p2);
    }
    out
}

// ---------------------------------------------------------------------------
// Incomplete gamma functions
// ---------------------------------------------------------------------------

/// Lower incomplete gamma `gamma(c, y) = int_0^y e^{-x} x^{c-1} dx`, c > 0.
pub fn incomplete_gamma_lower(c: f64, y: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Domain("incomplete gamma requires c > 0"));
    }
    if y < 0.0 {
        return Err(Error::Domain("incomplete gamma requires y >= 0"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y < c + 1.0 {
        // gamma(c,y) = y^c e^{-y} sum_n y^n / (c (c+1) ... (c+n))
        let mut term = 1.0 / c;
        let mut sum = term;
        for n in 1..SERIES_MAX_TERMS {
            term *= y / (c + n as f64);
            sum += term;
            if fx::abs(term) < 1e-17 * fx::abs(sum) {
                return Ok(sum * fx::powf(y, c) * fx::exp(-y));
            }
        }
        Err(Error::Convergence("incomplete gamma series"))
    } else {
        Ok(gamma(c)? - incomplete_gamma_upper(c, y)?)
    }
}

/// Upper incomplete gamma `Gamma(c, y) = int_y^infinity e^{-x} x^{c-1} dx`.
pub fn incomplete_gamma_upper(c: f64, y: f64) -> Result<f64> {
    if y < 0.0 {
        return Err(Error::Domain("incomplete gamma requires y >= 0"));
    }
    if y == 0.0 {
        return gamma(c);
    }
    if y < c + 1.0 {
        return Ok(gamma(c)? - incomplete_gamma_lower(c, y)?);
    }
    // Lentz continued fraction for Gamma(c,y) / (y^c e^{-y})
    let tiny = 1e-300;
    let mut b = y + 1.0 - c;
    let mut cc = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..SERIES_MAX_TERMS {
        let an = -(i as f64) * (i as f64 - c);
        b += 2.0;
        d = an * d + b;
        if fx::abs(d) < tiny {
            d = tiny;
        }
        cc = b + an / cc;
        if fx::abs(cc) < tiny {
            cc = tiny;
        }
        d = 1.0 / d;
        let delta = d * cc;
        h *= delta;
        if fx::abs(delta - 1.0) < 1e-16 {
            return Ok(fx::exp(-y + c * fx::ln(y)) * h);
        }
    }
    Err(Error::Convergence("incomplete gamma continued fraction"))
}
