//! Scaling-limit kernel elements for the infinite system.
//!
//! For shifted times `s, t < 0` and squared coordinates `x, y >= 0`:
//!
//! ```text
//! D(s,x;t,y) = -1/(4 (xy)^{k/2}) int_0^1 th^{1-k}
//!                [ jt^{(-b-1)}(th,1,x,-s) jt^{(-b)}(th,1,y,-t) - (x,s <-> y,t) ] dth
//! I(s,x;t,y) = -(xy)^{k/2} int_1^inf th^{k-1}
//!                [ Tail(th,x,s) jh^{(b+1)}(th,1,y,t) - jh^{(b+1)}(th,1,x,s) Tail(th,y,t) ] dth
//! S(s,x;t,y) = (x/y)^{k/2}/2 int_0^1
//!                [ jh^{(b+1)}(th,1,x,s) jt^{(-b-1)}(th,1,y,-t)
//!                  - { a jt^{(-b-1)}(th,1,y,-t) - jt^{(-b)}(th,1,y,-t) } Tail(th,x,s) ] dth
//! S~ = S - 1_{s<t} (y/x)^{b/2} G,   G(s,x;t,y) = int_0^inf J J e^{2(s-t)th} dth
//! ```
//!
//! with `jt = jtilde`, `jh = jhat`, `Tail(th,x,s) = int_1^inf xi^a jh^{(b+1)}(th,xi,x,s) dxi`,
//! `a = nu - kappa/2` and `b = nu - kappa`.

use crate::differint::{jhat_diff, jhat_tail_integral, jtilde_diff, DifferintOrder, JTildeArgs};
use crate::error::{Error, Result};
use crate::fx;
use crate::quad;
use crate::specfun::{bessel_i_scaled, bessel_j};

use super::KernelBlock;

/// Evaluator for the scaling-limit kernel at fixed `(nu, kappa)`.
#[derive(Debug, Clone, Copy)]
pub struct InfiniteKernel {
    pub nu: f64,
    pub kappa: f64,
    pub a_frak: f64,
    pub b_frak: f64,
}

impl InfiniteKernel {
    pub fn new(nu: f64, kappa: f64) -> Result<InfiniteKernel> {
        if !(nu > -1.0) {
            return Err(Error::Domain("nu must satisfy nu > -1"));
        }
        if !(0.0..2.0 * (nu + 1.0)).contains(&kappa) {
            return Err(Error::Domain("kappa must satisfy 0 <= kappa < 2(nu+1)"));
        }
        Ok(InfiniteKernel {
            nu,
            kappa,
            a_frak: nu - kappa / 2.0,
            b_frak: nu - kappa,
        })
    }

    fn order(&self, c: f64) -> DifferintOrder {
        DifferintOrder::new(c).expect("kernel orders lie in (-3, 2)")
    }

    fn jt(&self, c: f64, theta: f64, x: f64, minus_s: f64) -> Result<f64> {
        jtilde_diff(
            self.nu,
            self.order(c),
            JTildeArgs {
                theta,
                eta: 1.0,
                x,
                s: minus_s,
            },
        )
    }

    fn jh(&self, c: f64, theta: f64, x: f64, s: f64) -> Result<f64> {
        jhat_diff(
            self.nu,
            self.order(c),
            JTildeArgs {
                theta,
                eta: 1.0,
                x,
                s,
            },
        )
    }

    fn tail(&self, theta: f64, x: f64, s: f64) -> Result<f64> {
        jhat_tail_integral(
            self.nu,
            self.a_frak,
            self.order(self.b_frak + 1.0),
            theta,
            x,
            s,
        )
    }

    /// The antisymmetric `D` element; requires `s, t < 0`.
    pub fn d_entry(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        if !(s < 0.0 && t < 0.0) {
            return Err(Error::Domain("D requires shifted times s, t < 0"));
        }
        // integrand ~ theta^{1 + 2a} near zero
        let sigma = 1.0 + 2.0 * self.a_frak;
        if sigma <= -1.0 {
            return Err(Error::NonIntegrable("D integrand exponent"));
        }
        let cb = -self.b_frak - 1.0;
        let v = quad::with_origin_exponent(
            |theta| {
                let e = fx::powf(theta, 1.0 - self.kappa);
                let t1 = self.jt(cb, theta, x, -s).unwrap_or(f64::NAN);
                let t2 = self.jt(cb + 1.0, theta, y, -t).unwrap_or(f64::NAN);
                let t3 = self.jt(cb + 1.0, theta, x, -s).unwrap_or(f64::NAN);
                let t4 = self.jt(cb, theta, y, -t).unwrap_or(f64::NAN);
                e * (t1 * t2 - t3 * t4)
            },
            1.0,
            sigma,
            1e-11,
            1e-9,
        )?;
        Ok(-v / (4.0 * fx::powf(x * y, self.kappa / 2.0)))
    }

    /// The antisymmetric `I~` element; requires `s, t < 0`.
    ///
    /// The overall sign follows the finite-N convention validated against
    /// the brute-force pair density (the finite elements converge onto
    /// this element with matching sign).
    pub fn i_entry(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        if !(s < 0.0 && t < 0.0) {
            return Err(Error::Domain("I~ requires shifted times s, t < 0"));
        }
        let cb = self.b_frak + 1.0;
        // overall decay e^{2(s+t) theta}
        let cutoff = 1.0 + 50.0 / (2.0 * (s + t).abs());
        let v = quad::adaptive(
            |theta| {
                if theta <= 1.0 {
                    return 0.0;
                }
                let e = fx::powf(theta, self.kappa - 1.0);
                let t1 = self.tail(theta, x, s).unwrap_or(f64::NAN);
                let t2 = self.jh(cb, theta, y, t).unwrap_or(f64::NAN);
                let t3 = self.jh(cb, theta, x, s).unwrap_or(f64::NAN);
                let t4 = self.tail(theta, y, t).unwrap_or(f64::NAN);
                e * (t1 * t2 - t3 * t4)
            },
            1.0,
            cutoff,
            1e-12,
            1e-9,
        )?;
        Ok(fx::powf(x * y, self.kappa / 2.0) * v)
    }

    /// The `S` element (no kernel subtraction); requires `s < 0`, `t < 0`.
    pub fn s_entry(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        if !(s < 0.0 && t < 0.0) {
            return Err(Error::Domain("S requires shifted times s, t < 0"));
        }
        let sigma = self.a_frak.min(2.0 * self.a_frak + 1.0);
        if sigma <= -1.0 {
            return Err(Error::NonIntegrable("S integrand exponent"));
        }
        let cb = -self.b_frak - 1.0;
        let v = quad::with_origin_exponent(
            |theta| {
                let jh1 = self.jh(self.b_frak + 1.0, theta, x, s).unwrap_or(f64::NAN);
                let jt1 = self.jt(cb, theta, y, -t).unwrap_or(f64::NAN);
                let jt2 = self.jt(cb + 1.0, theta, y, -t).unwrap_or(f64::NAN);
                let tl = self.tail(theta, x, s).unwrap_or(f64::NAN);
                jh1 * jt1 - (self.a_frak * jt1 - jt2) * tl
            },
            1.0,
            sigma,
            1e-11,
            1e-9,
        )?;
        Ok(0.5 * fx::powf(x / y, self.kappa / 2.0) * v)
    }

    /// `G(s,x;t,y) = int_0^inf J_nu(2 sqrt(th x)) J_nu(2 sqrt(th y)) e^{2(s-t)th} dth`
    /// in closed form: it is the modified-Bessel heat kernel
    /// `e^{-(x+y)/(2(t-s))} I_nu(sqrt(xy)/(t-s)) / (2(t-s))`. Symmetric in
    /// `(x, y)` and a function of `t - s` only.
    pub fn g_entry(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        let dt = t - s;
        if !(dt > 0.0) {
            return Err(Error::Domain("G requires s < t"));
        }
        let sx = fx::sqrt(x);
        let sy = fx::sqrt(y);
        Ok(fx::exp(-(sx - sy) * (sx - sy) / (2.0 * dt)) / (2.0 * dt)
            * bessel_i_scaled(self.nu, sx * sy / dt)?)
    }

    /// `G` by direct quadrature of the defining oscillatory integral
    /// (cross-check route).
    pub fn g_entry_quadrature(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        let dt = t - s;
        if !(dt > 0.0) {
            return Err(Error::Domain("G requires s < t"));
        }
        let cutoff = 50.0 / (2.0 * dt);
        quad::adaptive(
            |theta| {
                if theta <= 0.0 {
                    return 0.0;
                }
                bessel_j(self.nu, 2.0 * fx::sqrt(theta * x)).unwrap_or(f64::NAN)
                    * bessel_j(self.nu, 2.0 * fx::sqrt(theta * y)).unwrap_or(f64::NAN)
                    * fx::exp(-2.0 * dt * theta)
            },
            0.0,
            cutoff,
            1e-12,
            1e-10,
        )
    }

    /// `S~(s,x;t,y) = S(s,x;t,y) - 1_{s<t} (y/x)^{b/2} G(s,x;t,y)`.
    pub fn s_tilde_entry(&self, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
        let mut v = self.s_entry(s, x, t, y)?;
        if s < t {
            v -= fx::powf(y / x, self.b_frak / 2.0) * self.g_entry(s, x, t, y)?;
        }
        Ok(v)
    }

    /// The assembled 2x2 block at `((s, x), (t, y))`.
    pub fn block(&self, s: f64, x: f64, t: f64, y: f64) -> Result<KernelBlock> {
        Ok(KernelBlock {
            d: self.d_entry(s, x, t, y)?,
            s_fwd: self.s_tilde_entry(s, x, t, y)?,
            s_bwd: self.s_tilde_entry(t, y, s, x)?,
            i: self.i_entry(s, x, t, y)?,
        })
    }
}
