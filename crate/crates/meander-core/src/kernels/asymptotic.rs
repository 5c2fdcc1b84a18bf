//! Convergence validators: finite-N quantities against their scaling
//! limits at `T = N`, and the drift of the shifted-time kernel onto the
//! temporally homogeneous one.

use alloc::string::String;
use alloc::vec::Vec;

use crate::differint::{jhat_diff, jhat_tail_integral, jtilde_diff, DifferintOrder, JTildeArgs};
use crate::error::{Error, Result};
use crate::fx;
use crate::meander::{ptilde, ModelParams, TimeGrid};
use crate::specfun::{gen_binomial, laguerre_all};

use super::finite::FiniteKernel;
use super::homogeneous::homogeneous_kernel;
use super::infinite::InfiniteKernel;

/// Which finite-N quantity to compare with its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceMode {
    /// even-index normalized polynomial transforms `rhat_{2l}`
    REven,
    /// odd-index `N rhat_{2l+1}`
    ROdd,
    /// even-index `phihat_{2l}`
    PhiEven,
    /// odd-index `N phihat_{2l+1}`
    PhiOdd,
    /// the one-step kernel against the damped Bessel cross integral
    Ptilde,
    /// binomial-weighted Laguerre partial sums at negative integer order
    I2lc(i32),
}

impl ConvergenceMode {
    pub fn name(&self) -> String {
        match self {
            ConvergenceMode::REven => String::from("R_even"),
            ConvergenceMode::ROdd => String::from("R_odd"),
            ConvergenceMode::PhiEven => String::from("Phi_even"),
            ConvergenceMode::PhiOdd => String::from("Phi_odd"),
            ConvergenceMode::Ptilde => String::from("ptilde"),
            ConvergenceMode::I2lc(c) => {
                let mut s = String::from("I2lc(");
                s.push_str(itoa(*c).as_str());
                s.push(')');
                s
            }
        }
    }
}

fn itoa(v: i32) -> String {
    let mut s = String::new();
    let mut v = v;
    if v < 0 {
        s.push('-');
        v = -v;
    }
    let mut digits = Vec::new();
    loop {
        digits.push(b'0' + (v % 10) as u8);
        v /= 10;
        if v == 0 {
            break;
        }
    }
    for d in digits.iter().rev() {
        s.push(*d as char);
    }
    s
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub n: usize,
    pub finite: f64,
    pub limit: f64,
    pub rel_err: f64,
}

/// A convergence report: the per-N rows and the pass verdict
/// (monotonically shrinking error, final below the threshold).
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub name: String,
    pub rows: Vec<ConvergenceRow>,
    pub decreasing: bool,
    pub final_rel_err: f64,
    pub pass: bool,
}

impl ConvergenceReport {
    fn from_rows(name: String, rows: Vec<ConvergenceRow>, threshold: f64) -> ConvergenceReport {
        let mut decreasing = true;
        for w in rows.windows(2) {
            if w[1].rel_err >= w[0].rel_err {
                decreasing = false;
            }
        }
        let final_rel_err = rows.last().map(|r| r.rel_err).unwrap_or(f64::NAN);
        let flat_small = rows.iter().all(|r| r.rel_err < 1e-4);
        let pass = (decreasing || flat_small) && final_rel_err < threshold;
        ConvergenceReport {
            name,
            rows,
            decreasing,
            final_rel_err,
            pass,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Evaluate one mode over the list of particle counts at `T = N`, with the
/// observation point `x` and shifted times `(s_m, s_n)` (only `s_m` is used
/// by the single-time modes).
pub fn validate_mode(
    nu: f64,
    kappa: f64,
    mode: ConvergenceMode,
    theta: f64,
    x: f64,
    s_m: f64,
    s_n: f64,
    n_list: &[usize],
) -> Result<ConvergenceReport> {
    if !(s_m < 0.0 && s_m < s_n && s_n < 0.0) {
        return Err(Error::Domain("shifted times must satisfy s_m < s_n < 0"));
    }
    let a_frak = nu - kappa / 2.0;
    let b_frak = nu - kappa;
    let mut rows = Vec::new();
    for &n in n_list {
        let t = n as f64;
        let p = ModelParams::new(nu, kappa, ((n + 1) / 2) * 2, t)?;
        let grid = TimeGrid::new(&[t + s_m, t + s_n, t], t)?;
        let (finite, limit) = match mode {
            ConvergenceMode::REven => {
                let l = (fx::round(t * theta / 2.0) as usize).max(1);
                let te = 2.0 * l as f64 / t;
                let k = FiniteKernel::new(p, grid, Some(2 * l + 2))?;
                let fin = k.rhat_all(0, x)[2 * l];
                let lim = fx::powf(te, 1.0 - nu) * fx::powf(x, -kappa / 2.0) / 2.0
                    * jtilde_diff(
                        nu,
                        DifferintOrder::new(-b_frak - 1.0)?,
                        JTildeArgs::new(te, 1.0, x, -s_m)?,
                    )?;
                (fin, lim)
            }
            ConvergenceMode::ROdd => {
                let l = fx::round((t * theta - 1.0) / 2.0).max(0.0) as usize;
                let te = (2 * l + 1) as f64 / t;
                let k = FiniteKernel::new(p, grid, Some(2 * l + 2))?;
                let fin = t * k.rhat_all(0, x)[2 * l + 1];
                let jm1 = jtilde_diff(
                    nu,
                    DifferintOrder::new(-b_frak - 1.0)?,
                    JTildeArgs::new(te, 1.0, x, -s_m)?,
                )?;
                let j0 = jtilde_diff(
                    nu,
                    DifferintOrder::new(-b_frak)?,
                    JTildeArgs::new(te, 1.0, x, -s_m)?,
                )?;
                let lim = fx::powf(te, -nu) * fx::powf(x, -kappa / 2.0) * (a_frak * jm1 - j0);
                (fin, lim)
            }
            ConvergenceMode::PhiEven => {
                let l = (fx::round(t * theta / 2.0) as usize).max(1);
                let te = 2.0 * l as f64 / t;
                let k = FiniteKernel::new(p, grid, Some(2 * l + 2))?;
                let fin = k.phihat_all(0, x)?[2 * l];
                let lim = -fx::powf(te, nu)
                    * fx::powf(x, kappa / 2.0)
                    * jhat_tail_integral(
                        nu,
                        a_frak,
                        DifferintOrder::new(b_frak + 1.0)?,
                        te,
                        x,
                        s_m,
                    )?;
                (fin, lim)
            }
            ConvergenceMode::PhiOdd => {
                let l = fx::round((t * theta - 1.0) / 2.0).max(0.0) as usize;
                let te = (2 * l + 1) as f64 / t;
                let k = FiniteKernel::new(p, grid, Some(2 * l + 2))?;
                let fin = t * k.phihat_all(0, x)?[2 * l + 1];
                let lim = -2.0 * fx::powf(te, nu - 1.0)
                    * fx::powf(x, kappa / 2.0)
                    * jhat_diff(
                        nu,
                        DifferintOrder::new(b_frak + 1.0)?,
                        JTildeArgs::new(te, 1.0, x, s_m)?,
                    )?;
                (fin, lim)
            }
            ConvergenceMode::Ptilde => {
                let y = x * 2.0;
                let fin = ptilde(&p, s_n - s_m, x, y)?;
                let ik = InfiniteKernel::new(nu, kappa)?;
                let lim = fx::powf(y / x, b_frak / 2.0)
                    * ik.g_entry_quadrature(s_m, x, s_n, y)?;
                (fin, lim)
            }
            ConvergenceMode::I2lc(c) => {
                if c >= 0 {
                    return Err(Error::Domain("I2lc needs a negative integer order"));
                }
                let l = (fx::round(t * theta / 2.0) as usize).max(1);
                let te = 2.0 * l as f64 / t;
                let chi1 = grid.chi(0);
                let ls = laguerre_all(2 * l, nu, x / t);
                let mut fin = 0.0;
                for pterm in 0..=(-c - 1) as usize {
                    let coeff = gen_binomial(pterm as i64, c as f64);
                    let j = 2 * l - pterm;
                    fin += coeff * ls[j] * fx::powi(chi1, j as i32);
                }
                let lim = fx::powf(t * te, c as f64 + nu + 1.0)
                    * fx::powf(te * x, -nu)
                    * jtilde_diff(
                        nu,
                        DifferintOrder::new(-(c as f64) - 1.0)?,
                        JTildeArgs::new(te, 1.0, x, -s_m)?,
                    )?;
                (fin, lim)
            }
        };
        rows.push(ConvergenceRow {
            n,
            finite,
            limit,
            rel_err: rel(finite, limit),
        });
    }
    Ok(ConvergenceReport::from_rows(mode.name(), rows, 0.05))
}

/// Compare the finite kernel elements `D`, `S~`, `I~` against the limit
/// kernel at `T = N`, `t = N + s`.
pub fn kernel_convergence(
    nu: f64,
    kappa: f64,
    s_m: f64,
    s_n: f64,
    x: f64,
    y: f64,
    n_list: &[usize],
) -> Result<Vec<ConvergenceReport>> {
    if !(s_m < s_n && s_n < 0.0) {
        return Err(Error::Domain("shifted times must satisfy s_m < s_n < 0"));
    }
    let ik = InfiniteKernel::new(nu, kappa)?;
    let d_lim = ik.d_entry(s_m, x, s_n, y)?;
    let s_lim = ik.s_tilde_entry(s_m, x, s_n, y)?;
    let i_lim = ik.i_entry(s_m, x, s_n, y)?;
    let mut d_rows = Vec::new();
    let mut s_rows = Vec::new();
    let mut i_rows = Vec::new();
    for &n in n_list {
        let t = n as f64;
        let p = ModelParams::new(nu, kappa, n, t)?;
        let grid = TimeGrid::new(&[t + s_m, t + s_n, t], t)?;
        // I~ tail: terms shrink like (chi_m chi_n)^{-2l}, chi - 1 ~ 2|s|/N
        let decay = fx::ln(grid.chi(0)) + fx::ln(grid.chi(1));
        let extra = (40.0 / (2.0 * decay)).min(4.0e5) as usize + 16;
        let k = FiniteKernel::new(p, grid, Some(n + 2 * extra))?;
        let a = k.point(0, x)?;
        let b = k.point(1, y)?;
        let d_fin = k.d_entry(&a, &b);
        let s_fin = k.s_tilde_entry(&a, &b)?;
        let i_fin = k.i_entry(&a, &b)?;
        d_rows.push(ConvergenceRow {
            n,
            finite: d_fin,
            limit: d_lim,
            rel_err: rel(d_fin, d_lim),
        });
        s_rows.push(ConvergenceRow {
            n,
            finite: s_fin,
            limit: s_lim,
            rel_err: rel(s_fin, s_lim),
        });
        i_rows.push(ConvergenceRow {
            n,
            finite: i_fin,
            limit: i_lim,
            rel_err: rel(i_fin, i_lim),
        });
    }
    Ok(alloc::vec![
        ConvergenceReport::from_rows(String::from("D"), d_rows, 0.05),
        ConvergenceReport::from_rows(String::from("S~"), s_rows, 0.05),
        ConvergenceReport::from_rows(String::from("I~"), i_rows, 0.05),
    ])
}

/// Report for the temporally homogeneous limit: `|D * I~|` along shifts,
/// and the drift of `S~` onto the homogeneous kernel.
#[derive(Debug, Clone)]
pub struct HomogeneousLimitReport {
    pub shifts: Vec<f64>,
    pub d_times_i: Vec<f64>,
    pub s_tilde_err: Vec<f64>,
    pub product_decreasing: bool,
    pub final_s_err: f64,
}

/// Slide both times to `-infinity` with the difference `delta` fixed:
/// `D * I~` must decay to zero and `(x/y)^{b/2} S~` must approach the
/// homogeneous kernel.
pub fn homogeneous_limit_check(
    nu: f64,
    kappa: f64,
    delta: f64,
    x: f64,
    y: f64,
    shifts: &[f64],
) -> Result<HomogeneousLimitReport> {
    if !(delta > 0.0) {
        return Err(Error::Domain("delta must be positive"));
    }
    let ik = InfiniteKernel::new(nu, kappa)?;
    let b_frak = nu - kappa;
    let mut d_times_i = Vec::new();
    let mut s_tilde_err = Vec::new();
    for &shift in shifts {
        if !(shift < 0.0 && shift + delta < 0.0) {
            return Err(Error::Domain("shifts must keep both times negative"));
        }
        let (s, t) = (shift, shift + delta);
        let d = ik.d_entry(s, x, t, y)?;
        let i = ik.i_entry(s, x, t, y)?;
        d_times_i.push(fx::abs(d * i));
        let s_tilde = ik.s_tilde_entry(s, x, t, y)?;
        let gauge = fx::powf(x / y, b_frak / 2.0);
        let hom = homogeneous_kernel(nu, s, x, t, y)?;
        s_tilde_err.push(fx::abs(gauge * s_tilde - hom));
    }
    let mut product_decreasing = true;
    for w in d_times_i.windows(2) {
        if w[1] >= w[0] {
            product_decreasing = false;
        }
    }
    let final_s_err = *s_tilde_err.last().unwrap_or(&f64::NAN);
    Ok(HomogeneousLimitReport {
        shifts: shifts.to_vec(),
        d_times_i,
        s_tilde_err,
        product_decreasing,
        final_s_err,
    })
}
