//! Skew-orthogonal Laguerre machinery.
//!
//! Working under the weight `e^{-w/2} w^{a_frak}` on the ordered quadrant,
//! the elementary skew-symmetric inner product
//!
//! ```text
//! <f, g>* = int_0^inf dw e^{-w/2} w^a int_0^w dz e^{-z/2} z^a (f(z) g(w) - f(w) g(z))
//! ```
//!
//! pairs the polynomial families
//!
//! ```text
//! F_k = sum_{n<=k} L_n^{2a},   G_k = -F_k + ((k+2a)/k) F_{k-2},
//! W_k = L_k^{2a} - ((k+2a)/k) L_{k-1}^{2a}
//! ```
//!
//! into a skew-orthogonal system `<F_{2q}, G_{2l+1}>* = r*_q delta_{ql}`
//! with `r*_q = 4 Gamma(2q+2a+2) / (2q+1)!`. Expanding over `L_j^{nu}` with
//! the triangular coefficient tables `alpha` (and inverse `beta`) produces
//! the monic polynomials `R_k` that are skew-orthogonal under the full
//! two-time inner product of the non-colliding system.
//!
//! Inner products of polynomials are computed from exact monomial moments
//! carried in double-double precision; high-degree skew products cancel far
//! beyond f64.

use alloc::vec;
use alloc::vec::Vec;

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::fx;
use crate::meander::{ModelParams, TimeGrid};
use crate::quad;
use crate::specfun::{gen_binomial, incomplete_gamma_lower, laguerre_all, ln_gamma};

/// Which polynomial family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolySpec {
    /// `F_k`, defined for `k >= 0`.
    F(usize),
    /// `G_k`, defined for `k >= 1`.
    G(usize),
    /// `W_k`, defined for `k >= 1`.
    W(usize),
    /// `Q_{2l} = F_{2l}`, `Q_{2l+1} = G_{2l+1}`.
    Q(usize),
    /// Monic `R_k` (needs the time grid scales `c_1`, `chi_1`).
    R(usize),
    /// Laguerre `L_j^{nu}` at the model's `nu`.
    L(usize),
}

/// Precomputed coefficient tables for one `(nu, kappa)` pair.
#[derive(Debug, Clone)]
pub struct SkewBasis {
    pub nu: f64,
    pub kappa: f64,
    pub a_frak: f64,
    pub b_frak: f64,
    pub degree_cap: usize,
    /// `C(d + b_frak, d)` for the even alpha rows.
    gamma_b: Vec<f64>,
    /// `C(d - b_frak - 2, d)` for the even beta columns.
    gamma_bm: Vec<f64>,
    /// cumulative products `b(1, 2r-1) = prod_{odd i <= 2r-1} (i + 2 a_frak)/i`;
    /// entry 0 is the empty product.
    b1: Vec<f64>,
    /// `r*_q = 4 Gamma(2q + 2 a_frak + 2) / (2q+1)!`
    rstar: Vec<f64>,
}

impl SkewBasis {
    pub fn new(p: &ModelParams, degree_cap: usize) -> SkewBasis {
        let b = p.b_frak;
        let a = p.a_frak;
        let kmax = degree_cap + 2;
        let mut gamma_b = Vec::with_capacity(kmax + 1);
        let mut gamma_bm = Vec::with_capacity(kmax + 1);
        gamma_b.push(1.0);
        gamma_bm.push(1.0);
        for d in 1..=kmax {
            let df = d as f64;
            gamma_b.push(gamma_b[d - 1] * (b + df) / df);
            gamma_bm.push(gamma_bm[d - 1] * (-b - 2.0 + df) / df);
        }
        let rmax = degree_cap / 2 + 2;
        let mut b1 = Vec::with_capacity(rmax + 1);
        b1.push(1.0);
        for r in 1..=rmax {
            let i = (2 * r - 1) as f64;
            b1.push(b1[r - 1] * (i + 2.0 * a) / i);
        }
        let mut rstar = Vec::with_capacity(rmax + 1);
        for q in 0..=rmax {
            let qf = q as f64;
            rstar.push(4.0 * fx::exp(ln_gamma(2.0 * qf + 2.0 * a + 2.0) - ln_gamma(2.0 * qf + 2.0)));
        }
        SkewBasis {
            nu: p.nu,
            kappa: p.kappa,
            a_frak: a,
            b_frak: b,
            degree_cap,
            gamma_b,
            gamma_bm,
            b1,
            rstar,
        }
    }

    /// Expansion coefficient `alpha_{k,j}` of `Q_k` over `L_j^{nu}`:
    /// `C(k-j+b, k-j)` on even rows, the two-term combination on odd rows.
    pub fn alpha(&self, k: usize, j: usize) -> f64 {
        if j > k {
            return 0.0;
        }
        let d = k - j;
        if k % 2 == 0 {
            self.gamma_b[d]
        } else {
            let head = if d >= 2 { self.gamma_b[d - 2] } else { 0.0 };
            (k as f64 + 2.0 * self.a_frak) / k as f64 * head - self.gamma_b[d]
        }
    }

    /// One full `alpha` row.
    pub fn alpha_row(&self, k: usize) -> Vec<f64> {
        (0..=k).map(|j| self.alpha(k, j)).collect()
    }

    /// `C(d + b_frak, d)` lookup used by convolution-style row sums.
    #[inline]
    pub fn gamma_b(&self, d: usize) -> f64 {
        self.gamma_b[d]
    }

    /// Inverse-expansion coefficient `beta_{j,k}` with `L_j^{nu} = sum_k beta_{j,k} Q_k`.
    pub fn beta(&self, j: usize, k: usize) -> f64 {
        if j < k {
            return 0.0;
        }
        if k % 2 == 0 {
            if j - k < self.gamma_bm.len() {
                self.gamma_bm[j - k]
            } else {
                gen_binomial((j - k) as i64, -self.b_frak - 2.0)
            }
        } else {
            // -sum_r b(k+2, 2r-1) C(j - 2r - b - 1, j - 2r + 1)
            let b1_at = |r: usize| -> f64 {
                if r < self.b1.len() {
                    return self.b1[r];
                }
                let mut v = self.b1[self.b1.len() - 1];
                for rr in self.b1.len()..=r {
                    let i = (2 * rr - 1) as f64;
                    v *= (i + 2.0 * self.a_frak) / i;
                }
                v
            };
            let base = b1_at((k + 1) / 2);
            let mut s = 0.0;
            for r in (k + 1) / 2..=(j + 1) / 2 {
                let n = j as i64 - 2 * r as i64 + 1;
                s += b1_at(r) / base * gen_binomial(n, -self.b_frak - 2.0);
            }
            -s
        }
    }

    /// `r*_q` of the elementary skew-orthogonality.
    #[inline]
    pub fn rstar(&self, q: usize) -> f64 {
        self.rstar[q]
    }

    /// Cumulative odd product `b(1, 2r-1)`.
    #[inline]
    pub fn b1(&self, r: usize) -> f64 {
        self.b1[r]
    }

    /// `ln r_q` of the full skew-orthogonality at the given grid,
    /// `r_q = 2^{-2 nu} T^{-kappa} (t_1^2/T)^{4q+1} (2q)! Gamma(2q+2+2a) / Gamma(nu+1)^2`.
    pub fn ln_r_full(&self, grid: &TimeGrid, q: usize) -> f64 {
        let t1 = grid.time(0);
        let t = grid.horizon;
        let qf = q as f64;
        -2.0 * self.nu * core::f64::consts::LN_2 - self.kappa * fx::ln(t)
            + (4.0 * qf + 1.0) * (2.0 * fx::ln(t1) - fx::ln(t))
            + ln_gamma(2.0 * qf + 1.0)
            + ln_gamma(2.0 * qf + 2.0 + 2.0 * self.a_frak)
            - 2.0 * ln_gamma(self.nu + 1.0)
    }

    /// Evaluate one of the polynomial families at `x`. `R` needs the grid
    /// for its `c_1`, `chi_1` scaling.
    pub fn poly_eval(&self, spec: PolySpec, grid: Option<&TimeGrid>, x: f64) -> Result<f64> {
        let two_a = 2.0 * self.a_frak;
        match spec {
            PolySpec::F(k) => {
                let ls = laguerre_all(k, two_a, x);
                Ok(ls.iter().sum())
            }
            PolySpec::G(k) => {
                if k == 0 {
                    return Err(Error::Domain("G is defined for k >= 1"));
                }
                let ls = laguerre_all(k, two_a, x);
                let f_k: f64 = ls.iter().sum();
                let f_km2: f64 = if k >= 2 { ls[..k - 1].iter().sum() } else { 0.0 };
                Ok(-f_k + (k as f64 + two_a) / k as f64 * f_km2)
            }
            PolySpec::W(k) => {
                if k == 0 {
                    return Err(Error::Domain("W is defined for k >= 1"));
                }
                let ls = laguerre_all(k, two_a, x);
                Ok(ls[k] - (k as f64 + two_a) / k as f64 * ls[k - 1])
            }
            PolySpec::Q(k) => {
                if k % 2 == 0 {
                    self.poly_eval(PolySpec::F(k), grid, x)
                } else {
                    self.poly_eval(PolySpec::G(k), grid, x)
                }
            }
            PolySpec::L(j) => Ok(crate::specfun::laguerre(j as u32, self.nu, x)),
            PolySpec::R(k) => {
                let grid = grid.ok_or(Error::Domain("R needs a time grid"))?;
                let c1 = grid.c_scale(0);
                let chi1 = grid.chi(0);
                let ls = laguerre_all(k, self.nu, x / c1);
                let mut s = 0.0;
                let mut chi_pow = 1.0;
                for (j, lj) in ls.iter().enumerate() {
                    s += self.alpha(k, j) * lj * chi_pow;
                    chi_pow *= chi1;
                }
                let mut pref = 1.0;
                for i in 1..=k {
                    pref *= i as f64 * c1 / chi1;
                }
                Ok(pref * s)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact polynomial inner products (double-double)
// ---------------------------------------------------------------------------

/// A polynomial with double-double monomial coefficients.
#[derive(Debug, Clone)]
pub struct DdPoly(pub Vec<Dd>);

impl DdPoly {
    pub fn zero(deg: usize) -> DdPoly {
        DdPoly(vec![dd::ZERO; deg + 1])
    }

    pub fn from_f64(coeffs: &[f64]) -> DdPoly {
        DdPoly(coeffs.iter().map(|&c| Dd::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn add_scaled(&mut self, other: &DdPoly, s: Dd) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), dd::ZERO);
        }
        for (i, &c) in other.0.iter().enumerate() {
            self.0[i] = self.0[i].add(c.mul(s));
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let xd = Dd::from(x);
        let mut acc = dd::ZERO;
        for &c in self.0.iter().rev() {
            acc = acc.mul(xd).add(c);
        }
        acc.to_f64()
    }

    /// `L_n^{alpha}` as exact dd monomial coefficients.
    pub fn laguerre(n: usize, alpha: f64) -> DdPoly {
        let a = Dd::from(alpha);
        let mut coeffs = vec![dd::ZERO; n + 1];
        let mut fact = dd::ONE;
        for (l, c) in coeffs.iter_mut().enumerate() {
            if l > 0 {
                fact = fact.mul(Dd::from(l as f64));
            }
            let mut v = dd::gen_binomial((n - l) as i64, a.add(Dd::from(l as f64))).div(fact);
            if l % 2 == 1 {
                v = v.neg();
            }
            *c = v;
        }
        DdPoly(coeffs)
    }

    /// `F_k = sum_{n<=k} L_n^{2a}`.
    pub fn f_poly(k: usize, two_a: f64) -> DdPoly {
        let mut p = DdPoly::zero(k);
        for n in 0..=k {
            p.add_scaled(&DdPoly::laguerre(n, two_a), dd::ONE);
        }
        p
    }

    /// `G_k = -F_k + ((k+2a)/k) F_{k-2}` for `k >= 1`.
    pub fn g_poly(k: usize, two_a: f64) -> DdPoly {
        let mut p = DdPoly::zero(k);
        p.add_scaled(&DdPoly::f_poly(k, two_a), dd::ONE.neg());
        if k >= 2 {
            let s = Dd::from(k as f64).add(Dd::from(two_a)).div(Dd::from(k as f64));
            p.add_scaled(&DdPoly::f_poly(k - 2, two_a), s);
        }
        p
    }

    /// `W_k = L_k^{2a} - ((k+2a)/k) L_{k-1}^{2a}` for `k >= 1`.
    pub fn w_poly(k: usize, two_a: f64) -> DdPoly {
        let mut p = DdPoly::zero(k);
        p.add_scaled(&DdPoly::laguerre(k, two_a), dd::ONE);
        let s = Dd::from(k as f64)
            .add(Dd::from(two_a))
            .div(Dd::from(k as f64))
            .neg();
        p.add_scaled(&DdPoly::laguerre(k - 1, two_a), s);
        p
    }

    /// `Q_k` (`F` even, `G` odd).
    pub fn q_poly(k: usize, two_a: f64) -> DdPoly {
        if k % 2 == 0 {
            DdPoly::f_poly(k, two_a)
        } else {
            DdPoly::g_poly(k, two_a)
        }
    }

    /// Monic `R_k` for the given basis and grid.
    pub fn r_poly(basis: &SkewBasis, grid: &TimeGrid, k: usize) -> DdPoly {
        let c1 = Dd::from(grid.c_scale(0));
        let chi1 = Dd::from(grid.chi(0));
        let mut p = DdPoly::zero(k);
        let mut chi_pow = dd::ONE;
        for j in 0..=k {
            // alpha_{k,j} chi^j L_j^{nu}(x / c_1)
            let lj = DdPoly::laguerre(j, basis.nu);
            let mut scaled = DdPoly::zero(j);
            let mut cinv = dd::ONE;
            for (i, &c) in lj.0.iter().enumerate() {
                scaled.0[i] = c.mul(cinv);
                cinv = cinv.div(c1);
            }
            p.add_scaled(&scaled, Dd::from(basis.alpha(k, j)).mul(chi_pow));
            chi_pow = chi_pow.mul(chi1);
        }
        let mut pref = dd::ONE;
        for i in 1..=k {
            pref = pref.mul(Dd::from(i as f64)).mul(c1).div(chi1);
        }
        let mut out = DdPoly::zero(k);
        out.add_scaled(&p, pref);
        out
    }
}

/// Exact monomial moment table for the elementary skew product:
/// `V(i,j) = int_0^inf dw e^{-w/2} w^{a+j} int_0^w dz e^{-z/2} z^{a+i} dz`
/// and `<x^i, x^j>* = V(i,j) - V(j,i)`.
pub struct MomentTable {
    pub a_frak: f64,
    v: Vec<Vec<Dd>>,
}

impl MomentTable {
    /// Build moments for monomial degrees up to `deg`. Each
    /// `V(i,j) = Gamma(2a+i+j+2)/(a+i+1) * 2F1(1, 2a+i+j+2; a+i+2; 1/2)`,
    /// an all-positive series evaluated in double-double.
    pub fn new(a_frak: f64, deg: usize) -> MomentTable {
        let mut v = Vec::with_capacity(deg + 1);
        for i in 0..=deg {
            let mut row = Vec::with_capacity(deg + 1);
            for j in 0..=deg {
                row.push(Self::v_entry(a_frak, i, j));
            }
            v.push(row);
        }
        MomentTable { a_frak, v }
    }

    fn v_entry(a: f64, i: usize, j: usize) -> Dd {
        // assemble the shifted arguments inside dd: rounding them to f64
        // feeds straight into the cancellation of high-degree products
        let big_a = Dd::from(2.0 * a).add(Dd::from((i + j) as f64 + 2.0));
        let big_b = Dd::from(a).add(Dd::from(i as f64 + 2.0));
        // 2F1(1, A; B; 1/2)
        let mut term = dd::ONE;
        let mut sum = dd::ONE;
        let half = Dd::from(0.5);
        for m in 0..3000 {
            let mf = Dd::from(m as f64);
            term = term.mul(big_a.add(mf)).div(big_b.add(mf)).mul(half);
            sum = sum.add(term);
            if term.hi <= 1e-34 * sum.hi {
                break;
            }
        }
        dd::gamma_pos(big_a)
            .div(Dd::from(a).add(Dd::from(i as f64 + 1.0)))
            .mul(sum)
    }

    /// Raw `V(i, j)` moment (mainly for diagnostics and tests).
    pub fn v_probe(&self, i: usize, j: usize) -> Dd {
        self.v[i][j]
    }

    /// `<f, g>*` over dd coefficient vectors.
    pub fn skew_inner(&self, f: &DdPoly, g: &DdPoly) -> Dd {
        let mut s = dd::ZERO;
        for (i, &fi) in f.0.iter().enumerate() {
            for (j, &gj) in g.0.iter().enumerate() {
                let vij = self.v[i][j].sub(self.v[j][i]);
                s = s.add(fi.mul(gj).mul(vij));
            }
        }
        s
    }

    /// Symmetric inner product `(f, g) = int_0^inf e^{-x} x^{2a} f g dx`
    /// from the exact moments `Gamma(2a + n + 1)`.
    pub fn symmetric_inner(&self, f: &DdPoly, g: &DdPoly) -> Dd {
        let deg = f.degree() + g.degree();
        let mut moments = Vec::with_capacity(deg + 1);
        let two_a = Dd::from(2.0 * self.a_frak);
        moments.push(dd::gamma_pos(two_a.add(dd::ONE)));
        for n in 1..=deg {
            let prev = moments[n - 1];
            moments.push(prev.mul(two_a.add(Dd::from(n as f64))));
        }
        let mut s = dd::ZERO;
        for (i, &fi) in f.0.iter().enumerate() {
            for (j, &gj) in g.0.iter().enumerate() {
                s = s.add(fi.mul(gj).mul(moments[i + j]));
            }
        }
        s
    }
}

/// Elementary skew inner product of two polynomials given by monomial
/// coefficients, via the exact moment table.
pub fn skew_inner_elementary(f: &DdPoly, g: &DdPoly, a_frak: f64) -> f64 {
    let table = MomentTable::new(a_frak, f.degree().max(g.degree()));
    table.skew_inner(f, g).to_f64()
}

/// Quadrature witness for the elementary skew product (ordered 2-d domain).
pub fn skew_inner_elementary_quadrature(f: &DdPoly, g: &DdPoly, a_frak: f64) -> Result<f64> {
    let kernel = |z: f64, w: f64| {
        fx::exp(-0.5 * (z + w)) * fx::powf(z * w, a_frak) * (f.eval(z) * g.eval(w) - f.eval(w) * g.eval(z))
    };
    let deg = (f.degree() + g.degree()) as f64;
    let hi = 40.0 + 6.0 * deg;
    quad::adaptive(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            quad::with_origin_exponent(|z| kernel(z, w), w, a_frak, 1e-11, 1e-10)
                .unwrap_or(0.0)
        },
        0.0,
        hi,
        1e-10,
        1e-9,
    )
}

/// The full two-time skew inner product through the Laguerre-expansion
/// reduction: with `fhat` the coefficients of `f(c_1 u)` over `L_j^{nu}(u)`,
///
/// ```text
/// <f, g> = 2^{-2nu-2} T^{-kappa} / Gamma(nu+1)^2
///          * sum_{j,k} chi_1^{-j-k} fhat_j ghat_k <L_j^nu, L_k^nu>*
/// ```
pub fn skew_inner_full(
    f: &DdPoly,
    g: &DdPoly,
    basis: &SkewBasis,
    grid: &TimeGrid,
) -> Result<f64> {
    let fhat = laguerre_expand(f, grid.c_scale(0), basis.nu);
    let ghat = laguerre_expand(g, grid.c_scale(0), basis.nu);
    let deg = fhat.len().max(ghat.len()) - 1;
    let table = MomentTable::new(basis.a_frak, deg);
    let lag: Vec<DdPoly> = (0..=deg).map(|j| DdPoly::laguerre(j, basis.nu)).collect();
    let chi1 = Dd::from(grid.chi(0));
    let mut s = dd::ZERO;
    for (j, &fj) in fhat.iter().enumerate() {
        for (k, &gk) in ghat.iter().enumerate() {
            let pair = table.skew_inner(&lag[j], &lag[k]);
            let weight = chi1.powi(-((j + k) as i32));
            s = s.add(fj.mul(gk).mul(pair).mul(weight));
        }
    }
    let ln_c = -(2.0 * basis.nu + 2.0) * core::f64::consts::LN_2
        - basis.kappa * fx::ln(grid.horizon)
        - 2.0 * ln_gamma(basis.nu + 1.0);
    Ok(s.to_f64() * fx::exp(ln_c))
}

/// Expand `f(c_1 u)` over `L_j^{nu}(u)` using
/// `u^n = n! sum_j (-1)^j C(n+nu, n-j) L_j^{nu}(u)`.
fn laguerre_expand(f: &DdPoly, c1: f64, nu: f64) -> Vec<Dd> {
    let deg = f.degree();
    let nu_dd = Dd::from(nu);
    let mut out = vec![dd::ZERO; deg + 1];
    let c1d = Dd::from(c1);
    let mut c1n = dd::ONE;
    let mut fact = dd::ONE;
    for n in 0..=deg {
        if n > 0 {
            c1n = c1n.mul(c1d);
            fact = fact.mul(Dd::from(n as f64));
        }
        let scale = f.0[n].mul(c1n).mul(fact);
        for (j, o) in out.iter_mut().enumerate().take(n + 1) {
            let mut c = dd::gen_binomial((n - j) as i64, nu_dd.add(Dd::from(j as f64)));
            if j % 2 == 1 {
                c = c.neg();
            }
            *o = o.add(scale.mul(c));
        }
    }
    out
}

/// The definitional route for the full inner product: the ordered two-time
/// double integral with the evolved one-point functions
/// `A_f(z) = int_0^inf ptilde(t_1, x|0) f(x) ptilde(T - t_1, z|x) dx`.
/// Slow; used as an independent oracle at small parameters.
pub fn skew_inner_full_quadrature(
    f: &DdPoly,
    g: &DdPoly,
    p: &ModelParams,
    grid: &TimeGrid,
) -> Result<f64> {
    let t1 = grid.time(0);
    let tau = grid.horizon - t1;
    let evolve = |poly: &DdPoly, z: f64| -> f64 {
        quad::semi_infinite(
            |x| {
                let w0 = crate::meander::ptilde(p, t1, 0.0, x).unwrap_or(0.0);
                if w0 == 0.0 {
                    return 0.0;
                }
                w0 * poly.eval(x) * crate::meander::ptilde(p, tau, x, z).unwrap_or(0.0)
            },
            0.0,
            1e-11,
            1e-9,
        )
        .unwrap_or(0.0)
    };
    // cache A_f, A_g on a shared Gauss grid per outer point is overkill
    // here; directly integrate over the ordered cone
    let hi = 30.0 * grid.horizon * (1.0 + (f.degree() + g.degree()) as f64);
    quad::adaptive(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            let fw = evolve(f, w);
            let gw = evolve(g, w);
            quad::adaptive(
                |z| {
                    let fz = evolve(f, z);
                    let gz = evolve(g, z);
                    fz * gw - fw * gz
                },
                0.0,
                w,
                1e-9,
                1e-7,
            )
            .unwrap_or(0.0)
        },
        0.0,
        hi,
        1e-8,
        1e-6,
    )
}

/// Both sides of the half-line partial integral of `G_j`:
/// `int_0^z e^{-x/2} x^a G_j(x) dx  =  2 e^{-z/2} z^a W_j(z)`.
pub fn g_partial_integral(basis: &SkewBasis, j: usize, z: f64) -> Result<(f64, f64)> {
    if j == 0 {
        return Err(Error::Domain("G branch needs j >= 1"));
    }
    let lhs = if z == 0.0 {
        0.0
    } else {
        quad::with_origin_exponent(
            |x| {
                fx::exp(-0.5 * x)
                    * fx::powf(x, basis.a_frak)
                    * basis.poly_eval(PolySpec::G(j), None, x).unwrap_or(f64::NAN)
            },
            z,
            basis.a_frak,
            1e-12,
            1e-11,
        )?
    };
    let rhs = if z == 0.0 {
        0.0
    } else {
        2.0 * fx::exp(-0.5 * z)
            * fx::powf(z, basis.a_frak)
            * basis.poly_eval(PolySpec::W(j), None, z)?
    };
    Ok((lhs, rhs))
}

/// Both sides of the half-line partial integral of `F_{2l}`:
///
/// ```text
/// int_0^z e^{-x/2} x^a F_{2l}(x) dx
///   = 2^{a+1} C(l+a, l) gamma_inc(a+1, z/2)
///     - 2 e^{-z/2} z^a C(l+a, l) sum_{r<l} C(l-r+a, l-r)^{-1} W_{2l-2r}(z)
/// ```
pub fn f_partial_integral(basis: &SkewBasis, l: usize, z: f64) -> Result<(f64, f64)> {
    let a = basis.a_frak;
    let lhs = if z == 0.0 {
        0.0
    } else {
        quad::with_origin_exponent(
            |x| {
                fx::exp(-0.5 * x)
                    * fx::powf(x, a)
                    * basis.poly_eval(PolySpec::F(2 * l), None, x).unwrap_or(f64::NAN)
            },
            z,
            a,
            1e-12,
            1e-11,
        )?
    };
    let cl = gen_binomial(l as i64, a);
    let mut rhs = fx::powf(2.0, a + 1.0) * cl * incomplete_gamma_lower(a + 1.0, z / 2.0)?;
    if z > 0.0 {
        let mut tail = 0.0;
        for r in 0..l {
            tail += basis.poly_eval(PolySpec::W(2 * l - 2 * r), None, z)?
                / gen_binomial((l - r) as i64, a);
        }
        rhs -= 2.0 * fx::exp(-0.5 * z) * fx::powf(z, a) * cl * tail;
    }
    Ok((lhs, rhs))
}
