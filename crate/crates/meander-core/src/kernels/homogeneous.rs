//! The temporally homogeneous space-time Bessel kernel reached by shifting
//! all observation times to minus infinity with fixed differences.
//!
//! ```text
//!            | int_0^1  J_nu(2 sqrt(th x)) J_nu(2 sqrt(th y)) e^{2(s-t)th} dth,  s > t
//! S(s,x;t,y) | [J_nu(2 sqrt x) sqrt y J'_nu(2 sqrt y) - (x <-> y)] / (x - y),    s = t
//!            | -int_1^inf J_nu(2 sqrt(th x)) J_nu(2 sqrt(th y)) e^{2(s-t)th} dth, s < t
//! ```
//!
//! The equal-time branch is the hard-edge Bessel kernel; its diagonal is
//! `(1 - nu^2/(4x)) J_nu(2 sqrt x)^2 + J'_nu(2 sqrt x)^2`.

use crate::error::{Error, Result};
use crate::fx;
use crate::quad;
use crate::specfun::{bessel_j, bessel_j_prime};

/// Evaluate the homogeneous kernel at `(s, x; t, y)`, any real `s, t`.
pub fn homogeneous_kernel(nu: f64, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(Error::Domain("nu must satisfy nu > -1"));
    }
    if x < 0.0 || y < 0.0 {
        return Err(Error::Domain("coordinates must be nonnegative"));
    }
    if s > t {
        // finite oscillatory integral over (0, 1]
        quad::adaptive(
            |theta| {
                if theta <= 0.0 {
                    return 0.0;
                }
                bessel_j(nu, 2.0 * fx::sqrt(theta * x)).unwrap_or(f64::NAN)
                    * bessel_j(nu, 2.0 * fx::sqrt(theta * y)).unwrap_or(f64::NAN)
                    * fx::exp(2.0 * (s - t) * theta)
            },
            0.0,
            1.0,
            1e-13,
            1e-11,
        )
    } else if s < t {
        // exponentially damped tail over [1, inf)
        let cutoff = 1.0 + 45.0 / (2.0 * (t - s));
        let v = quad::adaptive(
            |theta| {
                bessel_j(nu, 2.0 * fx::sqrt(theta * x)).unwrap_or(f64::NAN)
                    * bessel_j(nu, 2.0 * fx::sqrt(theta * y)).unwrap_or(f64::NAN)
                    * fx::exp(2.0 * (s - t) * theta)
            },
            1.0,
            cutoff,
            1e-13,
            1e-11,
        )?;
        Ok(-v)
    } else {
        equal_time(nu, x, y)
    }
}

/// The equal-time (hard-edge) branch in closed form, with the removable
/// `x = y` singularity resolved by the derivative limit.
fn equal_time(nu: f64, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 || y == 0.0 {
        return Err(Error::Domain("equal-time branch needs x, y > 0"));
    }
    let rel = fx::abs(x - y) / x.max(y);
    if rel > 1e-6 {
        let jx = bessel_j(nu, 2.0 * fx::sqrt(x))?;
        let jy = bessel_j(nu, 2.0 * fx::sqrt(y))?;
        let jpx = bessel_j_prime(nu, 2.0 * fx::sqrt(x))?;
        let jpy = bessel_j_prime(nu, 2.0 * fx::sqrt(y))?;
        return Ok((jx * fx::sqrt(y) * jpy - jy * fx::sqrt(x) * jpx) / (x - y));
    }
    // diagonal limit; first-order accurate in (x - y)
    let z = 0.5 * (x + y);
    let j = bessel_j(nu, 2.0 * fx::sqrt(z))?;
    let jp = bessel_j_prime(nu, 2.0 * fx::sqrt(z))?;
    Ok((1.0 - nu * nu / (4.0 * z)) * j * j + jp * jp)
}
