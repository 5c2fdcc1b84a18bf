//! Transition densities of (squared) generalized meanders and the
//! Karlin-McGregor determinant densities of their non-colliding systems.
//!
//! The base diffusion is the `2(nu+1)`-dimensional Bessel process with
//! density `G(t; y|x)`. The generalized meander on `[0, T]` is its
//! space-time transform by the weight
//! `h(t, x) = int_0^inf G(T-t; y|x) y^{-kappa} dy`, admissible for
//! `kappa in [0, 2(nu+1))`. Squaring the coordinate gives the process whose
//! non-colliding systems have Pfaffian correlation functions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fx;
use crate::linalg::Dense;
use crate::quad;
use crate::specfun::{bessel_i_scaled, gamma, gamma_recip, laguerre_all, ln_gamma};

/// Model parameters `(nu, kappa)` with the derived exponents
/// `a_frak = nu - kappa/2` and `b_frak = nu - kappa`, particle count and
/// horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub nu: f64,
    pub kappa: f64,
    pub a_frak: f64,
    pub b_frak: f64,
    pub n_particles: usize,
    pub horizon: f64,
}

impl ModelParams {
    /// Parameters for the Pfaffian machinery; `n_particles` must be even.
    pub fn new(nu: f64, kappa: f64, n_particles: usize, horizon: f64) -> Result<ModelParams> {
        let p = ModelParams::with_any_n(nu, kappa, n_particles, horizon)?;
        if n_particles % 2 != 0 {
            return Err(Error::Unsupported("particle count must be even"));
        }
        Ok(p)
    }

    /// Parameters without the evenness restriction, for the determinant
    /// densities and the path simulator (N = 1, 3 are meaningful there).
    pub fn with_any_n(nu: f64, kappa: f64, n_particles: usize, horizon: f64) -> Result<ModelParams> {
        if !(nu > -1.0) || !nu.is_finite() {
            return Err(Error::Domain("nu must satisfy nu > -1"));
        }
        if !(0.0..2.0 * (nu + 1.0)).contains(&kappa) {
            return Err(Error::Domain("kappa must satisfy 0 <= kappa < 2(nu+1)"));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Domain("horizon must be positive"));
        }
        if n_particles == 0 {
            return Err(Error::Domain("particle count must be positive"));
        }
        Ok(ModelParams {
            nu,
            kappa,
            a_frak: nu - kappa / 2.0,
            b_frak: nu - kappa,
            n_particles,
            horizon,
        })
    }
}

/// Observation times `t_1 < ... < t_{M+1} = T` with the shifted times
/// `s_m = t_m - T` and the derived scales `c_m = t_m (2T - t_m) / T`,
/// `chi_m = (2T - t_m) / t_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub times: Vec<f64>,
    pub horizon: f64,
}

impl TimeGrid {
    pub fn new(times: &[f64], horizon: f64) -> Result<TimeGrid> {
        if times.is_empty() {
            return Err(Error::Domain("time grid must be nonempty"));
        }
        let mut prev = 0.0;
        for &t in times {
            if !(t > prev) {
                return Err(Error::Domain("times must be strictly increasing and positive"));
            }
            prev = t;
        }
        if (times[times.len() - 1] - horizon).abs() > 1e-12 * horizon {
            return Err(Error::Domain("last observation time must equal the horizon"));
        }
        Ok(TimeGrid {
            times: times.to_vec(),
            horizon,
        })
    }

    /// Number of interior times (observation count minus one).
    pub fn m_intermediate(&self) -> usize {
        self.times.len() - 1
    }

    #[inline]
    pub fn time(&self, m: usize) -> f64 {
        self.times[m]
    }

    /// `s_m = t_m - T <= 0`.
    #[inline]
    pub fn shifted(&self, m: usize) -> f64 {
        self.times[m] - self.horizon
    }

    /// Spatial spread scale `c_m = t_m (2T - t_m) / T`.
    #[inline]
    pub fn c_scale(&self, m: usize) -> f64 {
        let t = self.times[m];
        t * (2.0 * self.horizon - t) / self.horizon
    }

    /// Temporal factor `chi_m = (2T - t_m) / t_m >= 1`.
    #[inline]
    pub fn chi(&self, m: usize) -> f64 {
        let t = self.times[m];
        (2.0 * self.horizon - t) / t
    }
}

/// A strictly increasing configuration in the closed positive half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    pub fn new(points: &[f64]) -> Result<Configuration> {
        if points.is_empty() {
            return Err(Error::Domain("configuration must be nonempty"));
        }
        let mut prev = -1.0;
        for &x in points {
            if !(x >= 0.0 && x > prev) {
                return Err(Error::Domain(
                    "configuration must be nonnegative and strictly increasing",
                ));
            }
            prev = x;
        }
        Ok(Configuration {
            points: points.to_vec(),
        })
    }

    #[inline]
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------
// One-particle densities
// ---------------------------------------------------------------------------

/// Bessel process transition density `G(t; y|x)` in dimension `2(nu+1)`.
pub fn bessel_density(nu: f64, t: f64, x: f64, y: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain("bessel_density requires t > 0"));
    }
    if x < 0.0 || y < 0.0 {
        return Err(Error::Domain("bessel_density requires x, y >= 0"));
    }
    if x == 0.0 {
        // y^{2nu+1} e^{-y^2/2t} / (2^nu Gamma(nu+1) t^{nu+1})
        if y == 0.0 {
            return Ok(if nu > -0.5 { 0.0 } else { f64::INFINITY });
        }
        let ln = (2.0 * nu + 1.0) * fx::ln(y) - y * y / (2.0 * t)
            - nu * core::f64::consts::LN_2
            - ln_gamma(nu + 1.0)
            - (nu + 1.0) * fx::ln(t);
        return Ok(fx::exp(ln));
    }
    if y == 0.0 {
        return Ok(if nu < 0.0 { f64::INFINITY } else { 0.0 });
    }
    // (y^{nu+1}/x^nu) (1/t) e^{-(x-y)^2/2t} [e^{-xy/t} I_nu(xy/t)]
    let scaled = bessel_i_scaled(nu, x * y / t)?;
    Ok(fx::powf(y, nu + 1.0) * fx::powf(x, -nu) / t
        * fx::exp(-(x - y) * (x - y) / (2.0 * t))
        * scaled)
}

/// Kummer confluent series `M(a; b; z)` for `b > 0`, `z >= 0` (all terms
/// positive), with the large-`z` asymptotic branch.
fn kummer_m_scaled(a: f64, b: f64, z: f64) -> f64 {
    // returns e^{-z} M(a; b; z)
    if z > 600.0 {
        // e^{-z} M(a,b,z) ~ (Gamma(b)/Gamma(a)) z^{a-b} sum_k (b-a)_k (1-a)_k / (k! z^k)
        let mut s = 1.0;
        let mut term = 1.0;
        for k in 0..6 {
            let kf = k as f64;
            term *= (b - a + kf) * (1.0 - a + kf) / ((kf + 1.0) * z);
            s += term;
        }
        return fx::exp(ln_gamma(b) - ln_gamma(a) + (a - b) * fx::ln(z)) * s;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..1000 {
        let mf = m as f64;
        term *= (a + mf) * z / ((b + mf) * (mf + 1.0));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum * fx::exp(-z)
}

/// `int_0^inf G(tau; y|x) y^{-kappa} dy` in closed confluent form
/// `(2 tau)^{-kappa/2} (Gamma(a+1)/Gamma(nu+1)) e^{-w} M(a+1; nu+1; w)`
/// with `a = nu - kappa/2` and `w = x^2 / (2 tau)`.
pub fn weighted_mass(nu: f64, kappa: f64, tau: f64, x: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain("weighted mass requires tau > 0"));
    }
    if kappa == 0.0 {
        return Ok(1.0);
    }
    let a = nu - kappa / 2.0;
    let w = x * x / (2.0 * tau);
    let ratio = fx::exp(ln_gamma(a + 1.0) - ln_gamma(nu + 1.0));
    Ok(fx::powf(2.0 * tau, -kappa / 2.0) * ratio * kummer_m_scaled(a + 1.0, nu + 1.0, w))
}

/// The meander weight `h(t, x) = int_0^inf G(T-t; y|x) y^{-kappa} dy`;
/// equals `x^{-kappa}` at `t = T`.
pub fn h_weight(p: &ModelParams, t: f64, x: f64) -> Result<f64> {
    if t > p.horizon {
        return Err(Error::Domain("h weight requires t <= horizon"));
    }
    if x < 0.0 {
        return Err(Error::Domain("h weight requires x >= 0"));
    }
    if p.kappa == 0.0 {
        return Ok(1.0);
    }
    let tau = p.horizon - t;
    if tau == 0.0 {
        return Ok(fx::powf(x, -p.kappa));
    }
    weighted_mass(p.nu, p.kappa, tau, x)
}

/// The defining integral of [`h_weight`] by quadrature, with the `y^{-kappa}`
/// endpoint singularity removed by a power substitution. Cross-check route.
pub fn h_weight_quadrature(p: &ModelParams, t: f64, x: f64) -> Result<f64> {
    let tau = p.horizon - t;
    if !(tau > 0.0) {
        return Err(Error::Domain("quadrature route requires t < horizon"));
    }
    let sigma = if x == 0.0 {
        2.0 * p.nu + 1.0 - p.kappa
    } else {
        p.nu + 1.0 - p.kappa
    };
    let head = quad::with_origin_exponent(
        |y| bessel_density(p.nu, tau, x, y).unwrap_or(0.0) * fx::powf(y, -p.kappa),
        1.0,
        sigma,
        1e-12,
        1e-11,
    )?;
    let tail = quad::semi_infinite(
        |y| bessel_density(p.nu, tau, x, y).unwrap_or(0.0) * fx::powf(y, -p.kappa),
        1.0,
        1e-12,
        1e-11,
    )?;
    Ok(head + tail)
}

/// Transition density of the generalized meander on `[0, T]`.
///
/// For `x > 0` this is the space-time transform
/// `G(t-s; y|x) h(t, y) / h(s, x)`; from the origin at `s = 0` the
/// normalizing constant is `Gamma(nu+1)/Gamma(nu+1-kappa/2) (2T)^{kappa/2}`.
pub fn meander_density(p: &ModelParams, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    if !(0.0 <= s && s <= t && t <= p.horizon) {
        return Err(Error::Domain("meander density requires 0 <= s <= t <= T"));
    }
    if x == 0.0 && s == 0.0 {
        let c = gamma(p.nu + 1.0)? / gamma(p.nu + 1.0 - p.kappa / 2.0)?
            * fx::powf(2.0 * p.horizon, p.kappa / 2.0);
        return Ok(c * bessel_density(p.nu, t, 0.0, y)? * h_weight(p, t, y)?);
    }
    if x <= 0.0 {
        return Err(Error::Domain("meander density requires x > 0 for s > 0"));
    }
    if t == s {
        return Err(Error::Domain("meander density requires t > s"));
    }
    Ok(bessel_density(p.nu, t - s, x, y)? * h_weight(p, t, y)? / h_weight(p, s, x)?)
}

/// Transition density of the squared generalized meander,
/// `p(s, x; t, y) = G_T(s, sqrt x; t, sqrt y) / (2 sqrt y)`.
pub fn squared_meander_density(p: &ModelParams, s: f64, x: f64, t: f64, y: f64) -> Result<f64> {
    if y < 0.0 || x < 0.0 {
        return Err(Error::Domain("squared meander requires x, y >= 0"));
    }
    Ok(meander_density(p, s, fx::sqrt(x), t, fx::sqrt(y))? * 0.5 / fx::sqrt(y))
}

/// The weighted one-step kernel of the squared system,
///
/// ```text
/// ptilde(dt, y|x) = e^{-(x+y)/(2 dt)} / (2 dt) (y/x)^{b_frak/2} I_nu(sqrt(xy)/dt),  x > 0,
/// ptilde(dt, y|0) = y^{a_frak} e^{-y/(2 dt)} / (2^{nu+1} Gamma(nu+1) dt^{nu+1}).
/// ```
///
/// For `kappa = 0` it is the squared-Bessel transition density; in general
/// it is the Karlin-McGregor building block after the determinant weights
/// telescope, and satisfies the Chapman-Kolmogorov equation.
pub fn ptilde(p: &ModelParams, dt: f64, x: f64, y: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::Domain("ptilde requires dt > 0"));
    }
    if x < 0.0 || y < 0.0 {
        return Err(Error::Domain("ptilde requires x, y >= 0"));
    }
    if x == 0.0 {
        if y == 0.0 {
            return Ok(if p.a_frak > 0.0 { 0.0 } else { f64::INFINITY });
        }
        let ln = p.a_frak * fx::ln(y) - y / (2.0 * dt)
            - (p.nu + 1.0) * (core::f64::consts::LN_2 + fx::ln(dt))
            - ln_gamma(p.nu + 1.0);
        return Ok(fx::exp(ln));
    }
    if y == 0.0 {
        return Ok(if p.b_frak < 0.0 {
            f64::INFINITY
        } else if p.b_frak > 0.0 {
            0.0
        } else {
            fx::exp(-x / (2.0 * dt)) / (2.0 * dt) * gamma_recip(p.nu + 1.0)
        });
    }
    let sx = fx::sqrt(x);
    let sy = fx::sqrt(y);
    let scaled = bessel_i_scaled(p.nu, sx * sy / dt)?;
    Ok(fx::exp(-(sx - sy) * (sx - sy) / (2.0 * dt)) / (2.0 * dt)
        * fx::powf(y / x, p.b_frak / 2.0)
        * scaled)
}

/// Laguerre-series route for `ptilde` at scaled coordinates:
/// `ptilde(t_n - t_m, c_n eta | c_m xi)` as the expansion
/// whose `j`-th term carries `(chi_n/chi_m)^j L_j(xi) L_j(eta)`.
pub fn ptilde_laguerre_series(
    p: &ModelParams,
    grid: &TimeGrid,
    m: usize,
    n: usize,
    xi: f64,
    eta: f64,
    terms: usize,
) -> Result<f64> {
    if n <= m {
        return Err(Error::Domain("series route requires t_n > t_m"));
    }
    let (tm, tn) = (grid.time(m), grid.time(n));
    let (cm, cn) = (grid.c_scale(m), grid.c_scale(n));
    let r = grid.chi(n) / grid.chi(m);
    let t2 = p.horizon * 2.0;
    let lx = laguerre_all(terms, p.nu, xi);
    let ly = laguerre_all(terms, p.nu, eta);
    let mut sum = 0.0;
    let mut rj = 1.0;
    let mut ratio = gamma_recip(1.0 + p.nu) * gamma(1.0).unwrap(); // Gamma(j+1)/Gamma(j+1+nu) at j=0
    for j in 0..=terms {
        sum += ratio * rj * lx[j] * ly[j];
        rj *= r;
        let jf = j as f64;
        ratio *= (jf + 1.0) / (jf + 1.0 + p.nu);
    }
    let pref = fx::powf(tm / tn, p.nu + 1.0)
        * fx::powf(cm, -p.a_frak - 1.0)
        * fx::powf(xi, p.kappa / 2.0)
        * fx::powf(cn * eta, p.a_frak)
        * fx::exp(-(tm / t2) * xi - (1.0 - tn / t2) * eta);
    Ok(pref * sum)
}

// ---------------------------------------------------------------------------
// Non-colliding determinant densities
// ---------------------------------------------------------------------------

/// Karlin-McGregor determinant `det[G(dt; y_k | x_j)]` of the Bessel
/// one-step kernel over a pair of ordered configurations.
pub fn km_determinant_bessel(
    nu: f64,
    dt: f64,
    from: &Configuration,
    to: &Configuration,
) -> Result<f64> {
    if from.len() != to.len() {
        return Err(Error::Domain("configuration sizes must match"));
    }
    let n = from.len();
    let mut m = Dense::zeros(n);
    for (j, &x) in from.points().iter().enumerate() {
        for (k, &y) in to.points().iter().enumerate() {
            m.set(j, k, bessel_density(nu, dt, x, y)?);
        }
    }
    Ok(m.determinant())
}

/// Karlin-McGregor determinant of the meander one-step kernel.
pub fn km_determinant(
    p: &ModelParams,
    s: f64,
    from: &Configuration,
    t: f64,
    to: &Configuration,
) -> Result<f64> {
    if from.len() != to.len() {
        return Err(Error::Domain("configuration sizes must match"));
    }
    let n = from.len();
    let mut m = Dense::zeros(n);
    for (j, &x) in from.points().iter().enumerate() {
        for (k, &y) in to.points().iter().enumerate() {
            m.set(j, k, meander_density(p, s, x, t, y)?);
        }
    }
    Ok(m.determinant())
}

/// The normalization constant of the from-the-origin density:
///
/// ```text
/// C(t) = T^{(N+kappa-1)N/2} t^{-(N-1)N} / 2^{N(N-kappa-1)/2}
///        * prod_{j=1..N} Gamma(nu+1) Gamma(1/2) / (Gamma(j/2) Gamma((j+1+2nu-kappa)/2))
/// ```
pub fn origin_constant(p: &ModelParams, t: f64) -> Result<f64> {
    let n = p.n_particles as f64;
    let mut ln = (n + p.kappa - 1.0) * n / 2.0 * fx::ln(p.horizon)
        - (n - 1.0) * n * fx::ln(t)
        - n * (n - p.kappa - 1.0) / 2.0 * core::f64::consts::LN_2;
    for j in 1..=p.n_particles {
        let jf = j as f64;
        ln += ln_gamma(p.nu + 1.0) + ln_gamma(0.5)
            - ln_gamma(jf / 2.0)
            - ln_gamma((jf + 1.0 + 2.0 * p.nu - p.kappa) / 2.0);
    }
    Ok(fx::exp(ln))
}

/// `int_{ordered cone} det[G(t; z_k | x_j)] prod z_j^{-kappa} dz` for
/// `N <= 3`, by nested adaptive quadrature (the `N = 1` case has the same
/// closed confluent form as the meander weight).
pub fn ordered_weighted_mass(p: &ModelParams, t: f64, from: &Configuration) -> Result<f64> {
    let n = from.len();
    let pts = from.points();
    let kappa = p.kappa;
    let nu = p.nu;
    match n {
        1 => {
            // same integral as the meander weight at shifted time
            let q = ModelParams::with_any_n(nu, kappa, 1, t)?;
            h_weight(&q, 0.0, pts[0])
        }
        2 | 3 => {
            let density = |zs: &[f64]| -> f64 {
                let mut m = Dense::zeros(n);
                for j in 0..n {
                    for k in 0..n {
                        m.set(j, k, bessel_density(nu, t, pts[j], zs[k]).unwrap_or(0.0));
                    }
                }
                let mut w = m.determinant();
                for &z in zs {
                    w *= fx::powf(z, -kappa);
                }
                w
            };
            let scale = fx::sqrt(t) * 8.0 + pts[n - 1] * 2.0;
            let sigma = (if pts[0] == 0.0 { 2.0 * nu + 1.0 } else { nu + 1.0 }) - kappa;
            if n == 2 {
                quad::semi_infinite(
                    |z2| {
                        quad::with_origin_exponent(
                            |z1| density(&[z1, z2]),
                            z2.min(scale),
                            sigma,
                            1e-11,
                            1e-9,
                        )
                        .unwrap_or(0.0)
                    },
                    0.0,
                    1e-10,
                    1e-8,
                )
            } else {
                quad::semi_infinite(
                    |z3| {
                        quad::adaptive(
                            |z2| {
                                quad::with_origin_exponent(
                                    |z1| density(&[z1, z2, z3]),
                                    z2.min(scale),
                                    sigma,
                                    1e-10,
                                    1e-8,
                                )
                                .unwrap_or(0.0)
                            },
                            0.0,
                            z3,
                            1e-10,
                            1e-8,
                        )
                        .unwrap_or(0.0)
                    },
                    0.0,
                    1e-9,
                    1e-7,
                )
            }
        }
        _ => Err(Error::Unsupported(
            "ordered cone quadrature capped at 3 particles",
        )),
    }
}

/// Density at time `t` of the non-colliding system started at the origin
/// (original, non-squared coordinates):
///
/// ```text
/// g(0, 0; t, y) = C(t) prod_j G(t; y_j|0) prod_{j<k} (y_k^2 - y_j^2) * mass(T - t, y)
/// ```
///
/// Supported for `N <= 3` (the mass factor needs the cone quadrature).
pub fn initial_density(p: &ModelParams, t: f64, config: &Configuration) -> Result<f64> {
    if config.len() != p.n_particles {
        return Err(Error::Domain("configuration size must equal N"));
    }
    if !(t > 0.0 && t <= p.horizon) {
        return Err(Error::Domain("time must lie in (0, T]"));
    }
    let pts = config.points();
    let mut v = origin_constant(p, t)?;
    for &y in pts {
        v *= bessel_density(p.nu, t, 0.0, y)?;
    }
    for j in 0..pts.len() {
        for k in j + 1..pts.len() {
            v *= pts[k] * pts[k] - pts[j] * pts[j];
        }
    }
    if t == p.horizon {
        for &y in pts {
            v *= fx::powf(y, -p.kappa);
        }
        return Ok(v);
    }
    Ok(v * ordered_weighted_mass(p, p.horizon - t, config)?)
}

/// Product of differences `prod_{i<j} (y_j - y_i)`.
pub fn vandermonde(points: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            v *= points[j] - points[i];
        }
    }
    v
}

/// Multitime density of the squared non-colliding system over the full grid
/// (`N` points at every observation time, the last being the horizon):
///
/// ```text
/// C(t_1) h_N(y^(1)) sgn(h_N(y^(M+1))) prod_k ptilde(t_1, y_k^(1)|0)
///   prod_m det[ ptilde(t_{m+1}-t_m, y_j^(m+1) | y_k^(m)) ]
/// ```
pub fn multitime_density(p: &ModelParams, grid: &TimeGrid, configs: &[Vec<f64>]) -> Result<f64> {
    let n = p.n_particles;
    if configs.len() != grid.times.len() {
        return Err(Error::Domain("one configuration per observation time"));
    }
    for c in configs {
        if c.len() != n {
            return Err(Error::Domain("configuration size must equal N"));
        }
    }
    let mut v = origin_constant(p, grid.time(0))? * vandermonde(&configs[0]);
    let last = &configs[configs.len() - 1];
    let sgn = vandermonde(last);
    v *= if sgn > 0.0 {
        1.0
    } else if sgn < 0.0 {
        -1.0
    } else {
        0.0
    };
    for &y in &configs[0] {
        v *= ptilde(p, grid.time(0), 0.0, y)?;
    }
    for m in 0..grid.times.len() - 1 {
        let dt = grid.time(m + 1) - grid.time(m);
        let mut mat = Dense::zeros(n);
        for j in 0..n {
            for k in 0..n {
                mat.set(j, k, ptilde(p, dt, configs[m][k], configs[m + 1][j])?);
            }
        }
        v *= mat.determinant();
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * b.abs().max(1.0),
            "{a} vs {b} (tol {tol})"
        );
    }

    fn params(nu: f64, kappa: f64) -> ModelParams {
        ModelParams::with_any_n(nu, kappa, 1, 1.0).unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(ModelParams::new(0.5, 0.0, 2, 1.0).is_ok());
        assert!(ModelParams::new(0.5, 3.0, 2, 1.0).is_err()); // kappa = 2(nu+1)is out
        assert!(ModelParams::new(-1.0, 0.0, 2, 1.0).is_err());
        assert!(ModelParams::new(0.5, 1.0, 3, 1.0).is_err()); // odd N
        assert!(ModelParams::with_any_n(0.5, 1.0, 3, 1.0).is_ok());
        assert!(TimeGrid::new(&[0.5, 1.0], 1.0).is_ok());
        assert!(TimeGrid::new(&[0.5, 0.4, 1.0], 1.0).is_err());
        assert!(TimeGrid::new(&[0.5, 0.9], 1.0).is_err());
        assert!(Configuration::new(&[0.0, 1.0, 2.0]).is_ok());
        assert!(Configuration::new(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn time_grid_scales() {
        let g = TimeGrid::new(&[0.5, 2.0], 2.0).unwrap();
        // chi_{M+1} = 1, c_{M+1} = T
        close(g.chi(1), 1.0, 1e-15);
        close(g.c_scale(1), 2.0, 1e-15);
        close(g.shifted(1), 0.0, 1e-15);
        close(g.chi(0), (4.0 - 0.5) / 0.5, 1e-15);
        close(g.c_scale(0), 0.5 * 3.5 / 2.0, 1e-15);
    }

    #[test]
    fn bessel_density_normalization_grid() {
        for &nu in &[-0.5, 0.0, 0.5, 1.5] {
            for &t in &[0.3, 1.0, 2.5] {
                for &x in &[0.0, 0.4, 1.7] {
                    let mass = quad::semi_infinite(
                        |y| bessel_density(nu, t, x, y).unwrap(),
                        0.0,
                        1e-11,
                        1e-11,
                    )
                    .unwrap();
                    close(mass, 1.0, 1e-9);
                }
            }
        }
    }

    #[test]
    fn bessel_density_half_from_origin() {
        // nu = 1/2: G = y^2 e^{-y^2/2t} / (2^{1/2} Gamma(3/2) t^{3/2})
        let (t, y): (f64, f64) = (0.7, 1.3);
        let want = y * y * (-y * y / (2.0 * t)).exp()
            / (2.0_f64.sqrt() * gamma(1.5).unwrap() * t.powf(1.5));
        close(bessel_density(0.5, t, 0.0, y).unwrap(), want, 1e-13);
    }

    #[test]
    fn bessel_chapman_kolmogorov() {
        let (nu, s, t, x, y) = (0.7, 0.4, 0.9, 0.8, 1.9);
        let conv = quad::semi_infinite(
            |z| {
                bessel_density(nu, s, x, z).unwrap() * bessel_density(nu, t, z, y).unwrap()
            },
            0.0,
            1e-11,
            1e-10,
        )
        .unwrap();
        close(conv, bessel_density(nu, s + t, x, y).unwrap(), 1e-7);
    }

    #[test]
    fn h_weight_special_values() {
        // kappa = 0 -> identically 1
        let p0 = params(0.7, 0.0);
        close(h_weight(&p0, 0.3, 1.1).unwrap(), 1.0, 1e-15);
        // t = T -> x^{-kappa}
        let p = params(0.5, 1.0);
        close(h_weight(&p, 1.0, 2.0).unwrap(), 0.5, 1e-13);
        // x = 0, t = 0: Gamma(nu+1-kappa/2)/Gamma(nu+1) (2T)^{-kappa/2}
        let want = gamma(1.0).unwrap() / gamma(1.5).unwrap() * (2.0_f64).powf(-0.5);
        close(h_weight(&p, 0.0, 0.0).unwrap(), want, 1e-13);
    }

    #[test]
    fn h_weight_matches_quadrature() {
        for &(nu, kappa) in &[(0.5, 1.0), (0.3, 0.8), (1.2, 2.6)] {
            let p = ModelParams::with_any_n(nu, kappa, 1, 2.0).unwrap();
            for &t in &[0.0, 0.9, 1.7] {
                for &x in &[0.0, 0.6, 2.1] {
                    let closed = h_weight(&p, t, x).unwrap();
                    let qr = h_weight_quadrature(&p, t, x).unwrap();
                    close(qr, closed, 1e-8);
                }
            }
        }
    }

    #[test]
    fn h_transform_consistency() {
        // G_T(s,x;t,y) h(s,x) = G(t-s; y|x) h(t,y)
        let p = params(0.8, 1.4);
        let (s, x, t, y) = (0.2, 0.9, 0.7, 1.4);
        let lhs = meander_density(&p, s, x, t, y).unwrap() * h_weight(&p, s, x).unwrap();
        let rhs = bessel_density(p.nu, t - s, x, y).unwrap() * h_weight(&p, t, y).unwrap();
        close(lhs, rhs, 1e-10);
    }

    #[test]
    fn meander_density_normalization() {
        for &(nu, kappa) in &[(0.5, 1.0), (0.5, 0.0), (1.0, 2.5)] {
            let p = ModelParams::with_any_n(nu, kappa, 1, 1.0).unwrap();
            for &t in &[0.4, 1.0] {
                let mass = quad::semi_infinite(
                    |y| meander_density(&p, 0.0, 0.0, t, y).unwrap(),
                    0.0,
                    1e-11,
                    1e-10,
                )
                .unwrap();
                close(mass, 1.0, 1e-8);
            }
        }
    }

    #[test]
    fn meander_density_reduces_to_bessel_at_kappa_zero() {
        let p = params(0.7, 0.0);
        let (s, x, t, y) = (0.1, 0.5, 0.8, 1.2);
        close(
            meander_density(&p, s, x, t, y).unwrap(),
            bessel_density(0.7, t - s, x, y).unwrap(),
            1e-14,
        );
    }

    #[test]
    fn brownian_meander_end_density() {
        // (nu, kappa) = (1/2, 1): end-time density y e^{-y^2/2T} / T
        let p = ModelParams::with_any_n(0.5, 1.0, 1, 2.0).unwrap();
        for &y in &[0.3, 1.0, 2.4] {
            let want = y * (-y * y / (2.0 * p.horizon)).exp() / p.horizon;
            close(meander_density(&p, 0.0, 0.0, p.horizon, y).unwrap(), want, 1e-12);
        }
    }

    #[test]
    fn squared_meander_change_of_variables() {
        let p = params(0.5, 1.0);
        let mass = quad::semi_infinite(
            |y| squared_meander_density(&p, 0.0, 0.0, 0.6, y).unwrap(),
            0.0,
            1e-11,
            1e-10,
        )
        .unwrap();
        close(mass, 1.0, 1e-8);
        // monotone tail
        assert!(squared_meander_density(&p, 0.0, 0.0, 0.6, 60.0).unwrap() < 1e-12);
    }

    #[test]
    fn squared_meander_kappa_zero_is_squared_bessel() {
        // nu = 0, kappa = 0: 2-dimensional squared Bessel,
        // p(t, y|x) = e^{-(x+y)/2t} I_0(sqrt(xy)/t) / (2t)
        let p = params(0.0, 0.0);
        let (t, x, y): (f64, f64, f64) = (0.4, 0.9, 1.7);
        let wantexp = -(x + y) / (2.0 * t);
        let want = wantexp.exp() * crate::specfun::bessel_i(0.0, (x * y).sqrt() / t).unwrap()
            / (2.0 * t);
        close(squared_meander_density(&p, 0.0, x, t, y).unwrap(), want, 1e-12);
        close(ptilde(&p, t, x, y).unwrap(), want, 1e-12);
    }

    #[test]
    fn ptilde_is_weighted_squared_meander() {
        // ptilde(dt, y|x) = G(dt, sqrt y| sqrt x) (sqrt y/sqrt x)^{-kappa} / (2 sqrt y)
        let p = params(0.8, 1.2);
        let (dt, x, y): (f64, f64, f64) = (0.5, 1.1, 2.3);
        let g = bessel_density(p.nu, dt, x.sqrt(), y.sqrt()).unwrap();
        let want = g * (y.sqrt() / x.sqrt()).powf(-p.kappa) * 0.5 / y.sqrt();
        close(ptilde(&p, dt, x, y).unwrap(), want, 1e-12);
    }

    #[test]
    fn ptilde_mass_and_chapman_kolmogorov() {
        // kappa = 0: probability kernel
        let p0 = params(0.7, 0.0);
        let mass = quad::semi_infinite(|y| ptilde(&p0, 0.6, 1.2, y).unwrap(), 0.0, 1e-11, 1e-10)
            .unwrap();
        close(mass, 1.0, 1e-9);
        // general kappa: Chapman-Kolmogorov
        let p = params(0.5, 1.0);
        let (x, z) = (0.8, 1.6);
        let conv = quad::semi_infinite(
            |y| ptilde(&p, 0.3, x, y).unwrap() * ptilde(&p, 0.45, y, z).unwrap(),
            0.0,
            1e-11,
            1e-10,
        )
        .unwrap();
        close(conv, ptilde(&p, 0.75, x, z).unwrap(), 1e-7);
    }

    #[test]
    fn ptilde_laguerre_expansion() {
        let p = ModelParams::with_any_n(0.6, 0.9, 2, 2.0).unwrap();
        let grid = TimeGrid::new(&[0.7, 1.3, 2.0], 2.0).unwrap();
        for &(xi, eta) in &[(0.3, 0.5), (2.0, 1.0), (7.5, 9.0), (10.0, 3.3)] {
            let direct = ptilde(
                &p,
                grid.time(1) - grid.time(0),
                grid.c_scale(0) * xi,
                grid.c_scale(1) * eta,
            )
            .unwrap();
            let series = ptilde_laguerre_series(&p, &grid, 0, 1, xi, eta, 80).unwrap();
            assert!(
                (series - direct).abs() <= 1e-8 * direct.abs().max(1e-10),
                "expansion at ({xi},{eta}): {series} vs {direct}"
            );
        }
    }

    #[test]
    fn km_determinant_basic_properties() {
        let p = ModelParams::with_any_n(0.5, 1.0, 2, 1.0).unwrap();
        let from = Configuration::new(&[0.4, 1.0]).unwrap();
        let to = Configuration::new(&[0.5, 1.2]).unwrap();
        let d = km_determinant(&p, 0.2, &from, 0.8, &to).unwrap();
        assert!(d > 0.0);
        // N = 1 reduces to the single kernel
        let f1 = Configuration::new(&[0.4]).unwrap();
        let t1 = Configuration::new(&[0.9]).unwrap();
        close(
            km_determinant(&p, 0.2, &f1, 0.8, &t1).unwrap(),
            meander_density(&p, 0.2, 0.4, 0.8, 0.9).unwrap(),
            1e-14,
        );
        // coincident target points: determinant vanishes
        let mut m = Dense::zeros(2);
        for (j, &x) in from.points().iter().enumerate() {
            for (k, &y) in [0.7, 0.7].iter().enumerate() {
                m.set(j, k, meander_density(&p, 0.2, x, 0.8, y).unwrap());
            }
        }
        assert!(m.determinant().abs() < 1e-14);
        // exchange antisymmetry in the 2x2 case
        let swapped = Dense::from_fn(2, |j, k| {
            let ys = [1.2, 0.5];
            meander_density(&p, 0.2, from.points()[j], 0.8, ys[k]).unwrap()
        });
        close(swapped.determinant(), -d, 1e-12);
    }

    #[test]
    fn initial_density_single_particle_mass() {
        let p = ModelParams::with_any_n(0.5, 1.0, 1, 1.0).unwrap();
        let t = 0.6;
        let mass = quad::semi_infinite(
            |y| {
                if y <= 0.0 {
                    return 0.0;
                }
                initial_density(&p, t, &Configuration::new(&[y]).unwrap()).unwrap()
            },
            0.0,
            1e-10,
            1e-9,
        )
        .unwrap();
        close(mass, 1.0, 1e-8);
    }

    #[test]
    fn initial_density_two_particle_mass() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let t = 0.5;
        let mass = quad::semi_infinite(
            |y2| {
                if y2 <= 0.0 {
                    return 0.0;
                }
                quad::adaptive(
                    |y1| {
                        if y1 <= 0.0 || y1 >= y2 {
                            return 0.0;
                        }
                        initial_density(&p, t, &Configuration::new(&[y1, y2]).unwrap())
                            .unwrap()
                    },
                    0.0,
                    y2,
                    1e-9,
                    1e-7,
                )
                .unwrap_or(0.0)
            },
            0.0,
            1e-8,
            1e-6,
        )
        .unwrap();
        close(mass, 1.0, 2e-6);
    }

    #[test]
    fn initial_density_vanishes_at_coincidence() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        // approach equal points: the difference factor kills the density
        let v = initial_density(&p, 0.5, &Configuration::new(&[0.9, 0.9 + 1e-9]).unwrap())
            .unwrap();
        assert!(v.abs() < 1e-6);
    }

    #[test]
    fn multitime_density_marginalizes_to_single_time() {
        // integrating out the horizon slice recovers the squared version of
        // the single-time density
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[0.5, 1.0], 1.0).unwrap();
        let y1 = [0.35, 1.4];
        let lhs = quad::semi_infinite(
            |b| {
                if b <= 0.0 {
                    return 0.0;
                }
                quad::adaptive(
                    |a| {
                        multitime_density(&p, &grid, &[y1.to_vec(), alloc::vec![a, b]])
                            .unwrap_or(0.0)
                    },
                    0.0,
                    b,
                    1e-10,
                    1e-8,
                )
                .unwrap_or(0.0)
            },
            0.0,
            1e-9,
            1e-7,
        )
        .unwrap();
        // single-time density of the squared system at t_1 via the
        // original-coordinate route
        let xs = Configuration::new(&[y1[0].sqrt(), y1[1].sqrt()]).unwrap();
        let rhs = initial_density(&p, 0.5, &xs).unwrap() / (4.0 * y1[0].sqrt() * y1[1].sqrt());
        close(lhs, rhs, 2e-6);
    }

    #[test]
    fn multitime_density_positive_on_ordered_configs() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[0.4, 0.7, 1.0], 1.0).unwrap();
        for &(a, b) in &[(0.2, 0.9), (0.5, 2.0), (1.1, 3.0)] {
            let v = multitime_density(
                &p,
                &grid,
                &[
                    alloc::vec![a, b],
                    alloc::vec![a * 1.1, b * 1.1,],
                    alloc::vec![a * 0.9, b * 1.2],
                ],
            )
            .unwrap();
            assert!(v > 0.0, "density should be positive, got {v}");
        }
    }

    #[test]
    fn km_bessel_depends_on_time_differences_only() {
        // at kappa = 0 the one-step determinants are functions of the
        // time difference alone
        let from = Configuration::new(&[0.4, 1.0]).unwrap();
        let to = Configuration::new(&[0.5, 1.2]).unwrap();
        let a = km_determinant_bessel(0.7, 0.45, &from, &to).unwrap();
        // the meander kernel at kappa = 0 reduces to the same determinant
        // whatever the absolute times and horizon
        for &(s, horizon) in &[(0.1, 1.0), (0.3, 2.0), (1.0, 5.0)] {
            let p = ModelParams::with_any_n(0.7, 0.0, 2, horizon).unwrap();
            let b = km_determinant(&p, s, &from, s + 0.45, &to).unwrap();
            close(b, a, 1e-12);
        }
    }

    #[test]
    fn multitime_reduces_to_initial_at_horizon_only() {
        // M = 0: a single observation at T
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[1.0], 1.0).unwrap();
        let ys = [0.4, 1.5];
        let got = multitime_density(&p, &grid, &[ys.to_vec()]).unwrap();
        let xs = Configuration::new(&[ys[0].sqrt(), ys[1].sqrt()]).unwrap();
        let want = initial_density(&p, 1.0, &xs).unwrap() / (4.0 * ys[0].sqrt() * ys[1].sqrt());
        close(got, want, 1e-9);
    }
}
