//! Exact finite-N kernel elements.
//!
//! Everything is assembled from two families of normalized functions per
//! space-time point `(m, x)`:
//!
//! ```text
//! rhat_k(m, x)   = k! / (2 Gamma(k+1+2a)) T^nu / t_m^{nu+1} x^a
//!                  e^{(t_m/(2T) - 1) x / c_m} sum_j alpha_{k,j} L_j^nu(x/c_m) chi_m^j
//! phihat_k(m, x) = (T^{-nu}/2) (t_m/c_m)^{nu+1} x^{kappa/2} e^{-t_m x/(2 T c_m)}
//!                  sum_j <Q_k, L_j>* Lhat_j(x/c_m)
//! ```
//!
//! in terms of which the kernel elements are exactly
//!
//! ```text
//! D^{mn}(x,y)  = T^{-2a}  sum_{l < N/2} (Gamma(2l+1+2a)/(2l)!) [rr']
//! S^{mn}(x,y)  =          sum_{l < N/2}                       [pr']
//! I~^{mn}(x,y) = T^{2nu-kappa... see below} sum_{l >= N/2}    [pp']
//! S~^{mn}      = S^{mn} - 1_{m<n} ptilde(t_n - t_m, y|x)
//! ```
//!
//! The `phihat` series over `j` converges geometrically in `chi_m^{-1}`;
//! at the horizon slice (`chi = 1`) the closed incomplete-gamma forms of
//! the partially integrated `F`/`G` polynomials take over.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fx;
use crate::meander::{ptilde, ModelParams, TimeGrid};
use crate::quad;
use crate::skeworth::SkewBasis;
use crate::specfun::{gamma_recip, incomplete_gamma_lower, laguerre_all, ln_gamma};

use super::KernelBlock;

/// Normalized per-point values `rhat_k` and `phihat_k`, `k = 0..=cap`.
#[derive(Debug, Clone)]
pub struct PointData {
    pub m: usize,
    pub x: f64,
    pub rhat: Vec<f64>,
    pub phihat: Vec<f64>,
}

/// Evaluator for the finite-N kernel elements on a fixed grid.
pub struct FiniteKernel {
    pub params: ModelParams,
    pub grid: TimeGrid,
    pub basis: SkewBasis,
    /// highest polynomial index carried by the caches
    pub degree_cap: usize,
    /// `Gamma(2l+1+2a)/(2l)!` for the `D` sum
    g_even: Vec<f64>,
    /// `(2l+1)!/Gamma(2l+2+2a)` for the `I~` sum
    h_odd: Vec<f64>,
    /// `(2l+1)/(2l+1+2a)`: the exact weight of the odd term in the `S` sum
    /// (the normalized pair is asymmetric in the index parity)
    s_ratio: Vec<f64>,
}

impl FiniteKernel {
    /// `degree_cap` defaults to `2N`; the `I~` tail may need more at
    /// late interior times (values of `chi_m` near 1).
    pub fn new(params: ModelParams, grid: TimeGrid, degree_cap: Option<usize>) -> Result<FiniteKernel> {
        if params.n_particles % 2 != 0 {
            return Err(Error::Unsupported("finite kernels need even N"));
        }
        let cap = degree_cap.unwrap_or(2 * params.n_particles).max(params.n_particles + 2);
        let chi_max = grid.chi(0);
        if (cap as f64 + 2.0) * fx::ln(chi_max) > 600.0 {
            return Err(Error::Unsupported(
                "first observation time too early for this degree cap",
            ));
        }
        let basis = SkewBasis::new(&params, cap + 2);
        let two_a = 2.0 * params.a_frak;
        let mut g_even = Vec::with_capacity(cap / 2 + 1);
        let mut h_odd = Vec::with_capacity(cap / 2 + 1);
        let mut s_ratio = Vec::with_capacity(cap / 2 + 1);
        for l in 0..=(cap / 2) {
            let lf = 2.0 * l as f64;
            g_even.push(fx::exp(ln_gamma(lf + 1.0 + two_a) - ln_gamma(lf + 1.0)));
            h_odd.push(fx::exp(ln_gamma(lf + 2.0) - ln_gamma(lf + 2.0 + two_a)));
            s_ratio.push((lf + 1.0) / (lf + 1.0 + two_a));
        }
        Ok(FiniteKernel {
            params,
            grid,
            basis,
            degree_cap: cap,
            g_even,
            h_odd,
            s_ratio,
        })
    }

    fn n_half(&self) -> usize {
        self.params.n_particles / 2
    }

    /// `rhat_k(m, x)` for all `k <= degree_cap`.
    pub fn rhat_all(&self, m: usize, x: f64) -> Vec<f64> {
        let p = &self.params;
        let cap = self.degree_cap;
        let cm = self.grid.c_scale(m);
        let chi = self.grid.chi(m);
        let tm = self.grid.time(m);
        let t = p.horizon;
        // L_j(x/c_m) chi^j
        let ls = laguerre_all(cap, p.nu, x / cm);
        let mut lt = Vec::with_capacity(cap + 1);
        let mut chi_pow = 1.0;
        for l in ls {
            lt.push(l * chi_pow);
            chi_pow *= chi;
        }
        // E_k = sum_j C(k-j+b, k-j) L~_j
        let mut e = vec![0.0; cap + 1];
        for (k, ek) in e.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, ltj) in lt.iter().enumerate().take(k + 1) {
                s += self.basis.gamma_b(k - j) * ltj;
            }
            *ek = s;
        }
        // point prefactor (T^nu / t_m^{nu+1}) x^a e^{(t_m/2T - 1) x/c_m} / 2
        let ln_pref = p.nu * fx::ln(t) - (p.nu + 1.0) * fx::ln(tm)
            + p.a_frak * fx::ln(x)
            + (tm / (2.0 * t) - 1.0) * x / cm
            - core::f64::consts::LN_2;
        let pref = fx::exp(ln_pref);
        // k!/Gamma(k+1+2a) as a running ratio
        let two_a = 2.0 * p.a_frak;
        let mut ratio = gamma_recip(1.0 + two_a);
        let mut out = Vec::with_capacity(cap + 1);
        for (k, &ek) in e.iter().enumerate() {
            let kf = k as f64;
            if k > 0 {
                ratio *= kf / (kf + two_a);
            }
            let sum = if k % 2 == 0 {
                ek
            } else {
                (kf + two_a) / kf * (if k >= 2 { e[k - 2] } else { 0.0 }) - ek
            };
            out.push(pref * ratio * sum);
        }
        out
    }

    /// `phihat_k(m, x)` for all `k <= degree_cap`.
    pub fn phihat_all(&self, m: usize, x: f64) -> Result<Vec<f64>> {
        let chi = self.grid.chi(m);
        if chi > 1.0 + 1e-3 {
            self.phihat_series(m, x)
        } else {
            self.phihat_horizon(m, x)
        }
    }

    /// Geometric-series route, `chi_m > 1`.
    fn phihat_series(&self, m: usize, x: f64) -> Result<Vec<f64>> {
        let p = &self.params;
        let cap = self.degree_cap;
        let cm = self.grid.c_scale(m);
        let chi = self.grid.chi(m);
        let tm = self.grid.time(m);
        let t = p.horizon;
        // series length: chi^{-j} below 1e-18 relative
        let extra = (44.0 / fx::ln(chi)).min(2.0e5) as usize + 8;
        let jmax = cap + 1 + extra;
        let ls = laguerre_all(jmax, p.nu, x / cm);
        // Lhat_j = Gamma(j+1)/Gamma(j+1+nu) L_j chi^{-j}
        let mut lhat = Vec::with_capacity(jmax + 1);
        let mut ratio = gamma_recip(1.0 + p.nu);
        let mut chi_pow = 1.0;
        for (j, &lj) in ls.iter().enumerate() {
            if j > 0 {
                let jf = j as f64;
                ratio *= jf / (jf + p.nu);
                chi_pow /= chi;
            }
            lhat.push(ratio * lj * chi_pow);
        }
        // Lambda_p = sum_{d >= 0} C(d - b - 2, d) Lhat_{p+d}, carried past the
        // cap so the suffix sums below are complete
        let pmax = (cap + 1 + extra).min(jmax);
        let mut lambda = vec![0.0; pmax + 1];
        let gamma_bm: Vec<f64> = {
            // C(d - b - 2, d) ~ d^{-b-2}; build the run once
            let mut v = Vec::with_capacity(jmax + 1);
            v.push(1.0);
            for d in 1..=jmax {
                let df = d as f64;
                v.push(v[d - 1] * (-p.b_frak - 2.0 + df) / df);
            }
            v
        };
        for (pidx, lam) in lambda.iter_mut().enumerate() {
            let mut s = 0.0;
            for d in 0..=(jmax - pidx) {
                s += gamma_bm[d] * lhat[pidx + d];
            }
            *lam = s;
        }
        // suffix sums W_l = sum_{r >= l+1} b(1, 2r-1) Lambda_{2r-1}
        let rtop = (pmax + 1) / 2;
        let mut b1v = Vec::with_capacity(rtop + 2);
        b1v.push(1.0);
        for r in 1..=rtop + 1 {
            let i = (2 * r - 1) as f64;
            b1v.push(b1v[r - 1] * (i + 2.0 * p.a_frak) / i);
        }
        let mut w = vec![0.0; rtop + 2];
        for l in (0..rtop).rev() {
            let r = l + 1;
            let contrib = if 2 * r - 1 <= pmax {
                b1v[r] * lambda[2 * r - 1]
            } else {
                0.0
            };
            w[l] = w[l + 1] + contrib;
        }
        let ln_pref = -p.nu * fx::ln(t) + (p.nu + 1.0) * (fx::ln(tm) - fx::ln(cm))
            + p.kappa / 2.0 * fx::ln(x)
            - tm * x / (2.0 * t * cm)
            - core::f64::consts::LN_2;
        let pref = fx::exp(ln_pref);
        let mut out = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let l = k / 2;
            let v = if k % 2 == 0 {
                // r*_l sum_j beta_{j, 2l+1} Lhat_j = -r*_l W_l / b(1, 2l+1)
                -self.basis.rstar(l) * w[l] / self.basis.b1(l + 1)
            } else {
                // -r*_l sum_j beta_{j, 2l} Lhat_j = -r*_l Lambda_{2l}
                -self.basis.rstar(l) * lambda[2 * l]
            };
            out.push(pref * v);
        }
        Ok(out)
    }

    /// Horizon-slice route (`chi_m = 1`): the `eta`-sums collapse to `Q_k`
    /// and the partial integrals have closed incomplete-gamma forms,
    ///
    /// ```text
    /// phihat_k = (T^{kappa/2 - nu} / 2) [2 I_k(x/T) - I_k(inf)]
    /// ```
    fn phihat_horizon(&self, m: usize, x: f64) -> Result<Vec<f64>> {
        let p = &self.params;
        if self.grid.chi(m) > 1.0 + 1e-9 {
            return Err(Error::Unsupported("horizon route requires chi = 1"));
        }
        let cap = self.degree_cap;
        let a = p.a_frak;
        let two_a = 2.0 * a;
        let t = p.horizon;
        let z = x / t;
        let ls = laguerre_all(cap + 1, two_a, z);
        // W_j(z) = L_j^{2a} - ((j+2a)/j) L_{j-1}^{2a}
        let wpoly = |j: usize| ls[j] - (j as f64 + two_a) / j as f64 * ls[j - 1];
        let weight = fx::exp(-0.5 * z) * fx::powf(z, a);
        let gamma_inc = incomplete_gamma_lower(a + 1.0, z / 2.0)?;
        let gamma_full = crate::specfun::gamma(a + 1.0)?;
        // binomials C(l + a, l)
        let lmax = cap / 2 + 1;
        let mut cl = Vec::with_capacity(lmax + 1);
        cl.push(1.0);
        for l in 1..=lmax {
            cl.push(cl[l - 1] * (a + l as f64) / l as f64);
        }
        let pref = 0.5 * fx::powf(t, p.kappa / 2.0 - p.nu);
        let mut out = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let (ik, ik_inf) = if k % 2 == 0 {
                let l = k / 2;
                let mut tail = 0.0;
                for r in 0..l {
                    tail += wpoly(2 * l - 2 * r) / cl[l - r];
                }
                (
                    fx::powf(2.0, a + 1.0) * cl[l] * gamma_inc - 2.0 * weight * cl[l] * tail,
                    fx::powf(2.0, a + 1.0) * cl[l] * gamma_full,
                )
            } else {
                (2.0 * weight * wpoly(k), 0.0)
            };
            out.push(pref * (2.0 * ik - ik_inf));
        }
        Ok(out)
    }

    /// Per-point cache of `rhat` and `phihat`.
    pub fn point(&self, m: usize, x: f64) -> Result<PointData> {
        Ok(PointData {
            m,
            x,
            rhat: self.rhat_all(m, x),
            phihat: self.phihat_all(m, x)?,
        })
    }

    /// `D^{mn}(x, y)`.
    pub fn d_entry(&self, a: &PointData, b: &PointData) -> f64 {
        let t2a = fx::powf(self.params.horizon, -2.0 * self.params.a_frak);
        let mut s = 0.0;
        for l in 0..self.n_half() {
            s += self.g_even[l]
                * (a.rhat[2 * l] * b.rhat[2 * l + 1] - a.rhat[2 * l + 1] * b.rhat[2 * l]);
        }
        t2a * s
    }

    /// `S^{mn}(x, y)` (no kernel subtraction).
    pub fn s_entry(&self, a: &PointData, b: &PointData) -> f64 {
        let mut s = 0.0;
        for l in 0..self.n_half() {
            s += a.phihat[2 * l] * b.rhat[2 * l + 1]
                - self.s_ratio[l] * a.phihat[2 * l + 1] * b.rhat[2 * l];
        }
        s
    }

    /// `S~^{mn}(x, y) = S^{mn}(x, y) - 1_{m<n} ptilde(t_n - t_m, y|x)`.
    pub fn s_tilde_entry(&self, a: &PointData, b: &PointData) -> Result<f64> {
        let mut v = self.s_entry(a, b);
        if a.m < b.m {
            v -= ptilde(
                &self.params,
                self.grid.time(b.m) - self.grid.time(a.m),
                a.x,
                b.x,
            )?;
        }
        Ok(v)
    }

    /// `I~^{mn}(x, y)` by the tail sum over `l >= N/2`, with a geometric
    /// remainder estimate from the last terms.
    ///
    /// The sign convention is fixed by the operator identity behind
    /// [`Self::i_entry_complement`] and verified against the brute-force
    /// two-point density: the tail enters with a plus.
    pub fn i_entry_tail(&self, a: &PointData, b: &PointData) -> Result<f64> {
        let scale = fx::powf(self.params.horizon, self.params.kappa + 2.0 * self.params.b_frak);
        let mut s = 0.0;
        let mut last = f64::INFINITY;
        let mut settled = 0;
        let lmax = self.degree_cap / 2;
        if self.n_half() > lmax {
            return Err(Error::Unsupported("degree cap below N"));
        }
        for l in self.n_half()..lmax {
            let term = self.h_odd[l]
                * (a.phihat[2 * l] * b.phihat[2 * l + 1] - a.phihat[2 * l + 1] * b.phihat[2 * l]);
            s += term;
            let mag = fx::abs(term);
            if mag <= 1e-14 * fx::abs(s).max(1e-290) {
                settled += 1;
                if settled >= 5 {
                    // certify the remainder by the last geometric ratios
                    let ratio = (mag / last.max(1e-300)).min(0.9);
                    let bound = mag * ratio / (1.0 - ratio);
                    if bound <= 1e-12 * fx::abs(s).max(1e-290) {
                        return Ok(scale * s);
                    }
                }
            } else {
                settled = 0;
            }
            last = mag;
        }
        Err(Error::Convergence("I~ tail did not settle within the degree cap"))
    }

    /// `I~^{mn}(x, y)` by the complement route: the explicit sign-kernel
    /// double integral minus the head sum over `l < N/2`,
    ///
    /// ```text
    /// I~ = P(x, y) - sum_{l<N/2} (1/r_l)[phi phi' - phi' phi],
    /// P(x, y) = int int ptilde(T-t_m, w|x) sgn(z-w) ptilde(T-t_n, z|y) dw dz.
    /// ```
    ///
    /// Robust at the horizon slice where the tail sum has no geometric
    /// decay.
    pub fn i_entry_complement(&self, a: &PointData, b: &PointData) -> Result<f64> {
        let scale = fx::powf(self.params.horizon, self.params.kappa + 2.0 * self.params.b_frak);
        let mut head = 0.0;
        for l in 0..self.n_half() {
            head += self.h_odd[l]
                * (a.phihat[2 * l] * b.phihat[2 * l + 1] - a.phihat[2 * l + 1] * b.phihat[2 * l]);
        }
        Ok(self.sign_kernel(a.m, a.x, b.m, b.x)? - scale * head)
    }

    /// `I~`: tail route when it certifies, complement route otherwise.
    pub fn i_entry(&self, a: &PointData, b: &PointData) -> Result<f64> {
        let chi_a = self.grid.chi(a.m);
        let chi_b = self.grid.chi(b.m);
        if chi_a > 1.0 + 1e-3 && chi_b > 1.0 + 1e-3 {
            if let Ok(v) = self.i_entry_tail(a, b) {
                return Ok(v);
            }
        }
        self.i_entry_complement(a, b)
    }

    /// `P(x, y)` of [`Self::i_entry_complement`].
    fn sign_kernel(&self, m: usize, x: f64, n: usize, y: f64) -> Result<f64> {
        let p = &self.params;
        let tau_m = p.horizon - self.grid.time(m);
        let tau_n = p.horizon - self.grid.time(n);
        if tau_m == 0.0 && tau_n == 0.0 {
            return Ok(if y > x {
                1.0
            } else if y < x {
                -1.0
            } else {
                0.0
            });
        }
        if tau_m == 0.0 {
            // P = int sgn(z - x) ptilde(tau_n, z|y) dz
            return self.signed_mass(tau_n, y, x);
        }
        if tau_n == 0.0 {
            // P = int ptilde(tau_m, w|x) sgn(y - w) dw = -[signed mass]
            return Ok(-self.signed_mass(tau_m, x, y)?);
        }
        let hi = self.support_bound(tau_m.max(tau_n), x.max(y));
        quad::adaptive(
            |w| {
                if w <= 0.0 {
                    return 0.0;
                }
                let pw = ptilde(p, tau_m, x, w).unwrap_or(0.0);
                if pw == 0.0 {
                    return 0.0;
                }
                pw * self.signed_mass(tau_n, y, w).unwrap_or(f64::NAN)
            },
            0.0,
            hi,
            1e-10,
            1e-9,
        )
    }

    /// `int sgn(z - w0) ptilde(tau, z|y) dz = mass - 2 cdf(w0)`.
    fn signed_mass(&self, tau: f64, y: f64, w0: f64) -> Result<f64> {
        let p = &self.params;
        let mass = if y == 0.0 {
            fx::exp(
                ln_gamma(p.a_frak + 1.0) - ln_gamma(p.nu + 1.0)
                    - p.kappa / 2.0 * fx::ln(2.0 * tau),
            )
        } else {
            fx::powf(y, p.kappa / 2.0)
                * crate::meander::weighted_mass(p.nu, p.kappa, tau, fx::sqrt(y))?
        };
        let cdf = quad::with_origin_exponent(
            |z| ptilde(p, tau, y, z).unwrap_or(0.0),
            w0,
            p.a_frak,
            1e-11,
            1e-10,
        )?;
        Ok(mass - 2.0 * cdf)
    }

    fn support_bound(&self, tau: f64, xy: f64) -> f64 {
        fx::powi(fx::sqrt(xy) + 8.0 * fx::sqrt(tau.max(self.grid.time(0))), 2) + 40.0 * tau
    }

    /// The assembled 2x2 block at `((m, x), (n, y))`.
    pub fn block(&self, m: usize, x: f64, n: usize, y: f64) -> Result<KernelBlock> {
        let a = self.point(m, x)?;
        let b = self.point(n, y)?;
        self.block_from_points(&a, &b)
    }

    /// Block from cached point data.
    pub fn block_from_points(&self, a: &PointData, b: &PointData) -> Result<KernelBlock> {
        Ok(KernelBlock {
            d: self.d_entry(a, b),
            s_fwd: self.s_tilde_entry(a, b)?,
            s_bwd: self.s_tilde_entry(b, a)?,
            i: self.i_entry(a, b)?,
        })
    }

    /// Plain-scale `R_i^{(m)}(x)`; may overflow for large `i`.
    pub fn r_im(&self, i: usize, m: usize, x: f64) -> f64 {
        let p = &self.params;
        let rhat = self.rhat_all(m, x);
        let ln = ln_gamma(i as f64 + 1.0 + 2.0 * p.a_frak)
            - p.nu * (core::f64::consts::LN_2 + fx::ln(p.horizon))
            - ln_gamma(p.nu + 1.0)
            + i as f64 * (fx::ln(self.grid.c_scale(0)) - fx::ln(self.grid.chi(0)));
        rhat[i] * fx::exp(ln)
    }

    /// Plain-scale `Phi_i^{(m)}(x)`; may overflow for large `i`.
    pub fn phi_im(&self, i: usize, m: usize, x: f64) -> Result<f64> {
        let p = &self.params;
        let phihat = self.phihat_all(m, x)?;
        let ln = ln_gamma(i as f64 + 1.0)
            - p.nu * core::f64::consts::LN_2
            + p.b_frak * fx::ln(p.horizon)
            - ln_gamma(p.nu + 1.0)
            + i as f64 * (fx::ln(self.grid.c_scale(0)) - fx::ln(self.grid.chi(0)));
        Ok(phihat[i] * fx::exp(ln))
    }
}
