//! Self-checking validation suites.
//!
//! Each suite runs a curated set of identity and cross-route checks on
//! default parameters and reports one record per check. The CLI renders
//! the records as JSON; the acceptance test suite runs the heavyweight
//! versions at their stated tolerances.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::differint::{
    jhat_diff, jhat_diff_quadrature, jtilde, jtilde_diff, rl_left, DifferintOrder, JTildeArgs,
    WithOriginExponent,
};
use crate::error::Result;
use crate::fx;
use crate::kernels::{
    homogeneous_kernel, kernel_convergence, validate_mode, ConvergenceMode, FiniteKernel,
    InfiniteKernel,
};
use crate::meander::{
    bessel_density, h_weight, h_weight_quadrature, meander_density, multitime_density, ptilde,
    ptilde_laguerre_series, ModelParams, TimeGrid,
};
use crate::pfaffian::{
    correlation, fredholm_determinant, fredholm_pfaffian, pfaffian, pfaffian_householder,
    ChiInterval, CorrelationMode, CorrelationRequest, SkewMatrix,
};
use crate::quad;
use crate::simulate::{ks_distance, simulate_paths, Scheme};
use crate::skeworth::{
    f_partial_integral, g_partial_integral, skew_inner_full, DdPoly, MomentTable, SkewBasis,
};
use crate::specfun::{bessel_j, gamma, gen_binomial, incomplete_gamma_lower, laguerre, ln_gamma};

/// One validation record.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub detail: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn abs(name: &str, detail: &str, measured: f64, expected: f64, tol: f64) -> Check {
        Check {
            name: String::from(name),
            detail: String::from(detail),
            measured,
            expected,
            tolerance: tol,
            pass: (measured - expected).abs() <= tol,
        }
    }

    fn rel(name: &str, detail: &str, measured: f64, expected: f64, tol: f64) -> Check {
        Check {
            name: String::from(name),
            detail: String::from(detail),
            measured,
            expected,
            tolerance: tol,
            pass: (measured - expected).abs() <= tol * expected.abs().max(1e-300),
        }
    }

    fn flag(name: &str, detail: &str, pass: bool) -> Check {
        Check {
            name: String::from(name),
            detail: String::from(detail),
            measured: if pass { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            pass,
        }
    }
}

/// A suite report.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Available suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Differint,
    Meander,
    Skeworth,
    Kernels,
    Pfaffian,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Specfun,
        Suite::Differint,
        Suite::Meander,
        Suite::Skeworth,
        Suite::Kernels,
        Suite::Pfaffian,
        Suite::Asymptotics,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Differint => "differint",
            Suite::Meander => "meander",
            Suite::Skeworth => "skeworth",
            Suite::Kernels => "kernels",
            Suite::Pfaffian => "pfaffian",
            Suite::Asymptotics => "asymptotics",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|u| u.name() == s)
    }
}

/// Run one suite.
pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Specfun => specfun_checks()?,
        Suite::Differint => differint_checks()?,
        Suite::Meander => meander_checks()?,
        Suite::Skeworth => skeworth_checks()?,
        Suite::Kernels => kernels_checks()?,
        Suite::Pfaffian => pfaffian_checks()?,
        Suite::Asymptotics => asymptotics_checks()?,
    };
    Ok(SuiteReport {
        suite: String::from(suite.name()),
        checks,
    })
}

fn specfun_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    out.push(Check::rel(
        "gamma_half",
        "Gamma(1/2) = sqrt(pi)",
        gamma(0.5)?,
        fx::sqrt(core::f64::consts::PI),
        1e-13,
    ));
    out.push(Check::rel(
        "gamma_negative_recursion",
        "Gamma(-1/2) by the lifting recursion",
        gamma(-0.5)?,
        -2.0 * fx::sqrt(core::f64::consts::PI),
        1e-12,
    ));
    let mut worst = 0.0_f64;
    for &beta in &[-2.5, -1.0, 0.0, 0.618, 2.25, 7.5] {
        for n in -5..=40_i64 {
            let lhs = gen_binomial(n, beta - n as f64);
            let rhs = gen_binomial(n, beta - 1.0 - n as f64) + gen_binomial(n - 1, beta - n as f64);
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        }
    }
    out.push(Check::abs(
        "binomial_pascal_identity",
        "C(b, n) = C(b-1, n) + C(b-1, n-1) over integer n and a real grid",
        worst,
        0.0,
        1e-12,
    ));
    out.push(Check::abs(
        "bessel_j_half_zero",
        "J_{1/2}(pi) = 0 by the closed sine form",
        bessel_j(0.5, core::f64::consts::PI)?,
        0.0,
        1e-12,
    ));
    let orth = quad::semi_infinite(
        |x| {
            let l = laguerre(2, 0.0, x);
            l * l * fx::exp(-x)
        },
        0.0,
        1e-12,
        1e-11,
    )?;
    out.push(Check::rel(
        "laguerre_orthonormality",
        "int L_2 L_2 e^{-x} dx = 1 under quadrature",
        orth,
        1.0,
        1e-10,
    ));
    out.push(Check::rel(
        "incomplete_gamma_by_parts",
        "gamma(2, 1) = 1 - 2/e",
        incomplete_gamma_lower(2.0, 1.0)?,
        1.0 - 2.0 * fx::exp(-1.0),
        1e-12,
    ));
    Ok(out)
}

fn differint_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut worst = 0.0_f64;
    for &p in &[1.0, 2.0, 2.5] {
        for &c in &[-1.5, -0.5, 0.5] {
            let f = move |y: f64| fx::powf(y, p);
            let x = 1.7;
            let got = rl_left(&f, DifferintOrder::new(c)?, x)?;
            let want = gamma(p + 1.0)? / gamma(p - c + 1.0)? * fx::powf(x, p - c);
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    out.push(Check::abs(
        "fractional_power_rule",
        "left differintegral of y^p against the closed power rule",
        worst,
        0.0,
        1e-8,
    ));
    let nu = 0.6;
    let (theta, x, s) = (0.9, 1.4, -0.8);
    let mut worst = 0.0_f64;
    for &c in &[-1.5, -0.5, 0.5] {
        let f = WithOriginExponent(
            move |eta: f64| jtilde(nu, JTildeArgs { theta, eta, x, s }),
            nu,
        );
        let by_operator = rl_left(&f, DifferintOrder::new(c)?, 1.0)?;
        let closed = jtilde_diff(nu, DifferintOrder::new(c)?, JTildeArgs::new(theta, 1.0, x, s)?)?;
        worst = worst.max((by_operator - closed).abs() / closed.abs().max(1e-12));
    }
    out.push(Check::abs(
        "jtilde_diff_vs_operator",
        "term-wise differintegral of the scaled Bessel family against the generic operator",
        worst,
        0.0,
        1e-8,
    ));
    let mut worst = 0.0_f64;
    for &c in &[-0.5, 0.5, 1.5] {
        let a = JTildeArgs::new(0.9, 1.3, 1.4, -0.8)?;
        let fast = jhat_diff(nu, DifferintOrder::new(c)?, a)?;
        let slow = jhat_diff_quadrature(nu, DifferintOrder::new(c)?, a)?;
        worst = worst.max((fast - slow).abs() / slow.abs().max(1e-12));
    }
    out.push(Check::abs(
        "jhat_diff_vs_tail_quadrature",
        "closed right differintegral against its defining tail integral",
        worst,
        0.0,
        1e-8,
    ));
    out.push(Check::flag(
        "jhat_decay_guard",
        "right differintegral rejects nonnegative drift arguments",
        jhat_diff(nu, DifferintOrder::new(0.5)?, JTildeArgs::new(1.0, 1.0, 1.0, 0.2)?).is_err(),
    ));
    Ok(out)
}

fn meander_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mass = quad::semi_infinite(
        |y| bessel_density(0.5, 0.7, 0.9, y).unwrap_or(0.0),
        0.0,
        1e-11,
        1e-10,
    )?;
    out.push(Check::rel(
        "bessel_density_mass",
        "transition density integrates to one",
        mass,
        1.0,
        1e-9,
    ));
    let p = ModelParams::with_any_n(0.5, 1.0, 1, 1.0)?;
    let mass = quad::semi_infinite(
        |y| meander_density(&p, 0.0, 0.0, 0.6, y).unwrap_or(0.0),
        0.0,
        1e-11,
        1e-10,
    )?;
    out.push(Check::rel(
        "meander_density_mass",
        "space-time transformed density integrates to one",
        mass,
        1.0,
        1e-8,
    ));
    let closed = h_weight(&p, 0.4, 1.1)?;
    let qr = h_weight_quadrature(&p, 0.4, 1.1)?;
    out.push(Check::rel(
        "h_weight_dual_route",
        "confluent closed form of the weight against direct quadrature",
        qr,
        closed,
        1e-8,
    ));
    let (x, z) = (0.8, 1.6);
    let conv = quad::semi_infinite(
        |y| ptilde(&p, 0.3, x, y).unwrap_or(0.0) * ptilde(&p, 0.45, y, z).unwrap_or(0.0),
        0.0,
        1e-11,
        1e-10,
    )?;
    out.push(Check::rel(
        "ptilde_chapman_kolmogorov",
        "one-step kernels compose over an intermediate integration",
        conv,
        ptilde(&p, 0.75, x, z)?,
        1e-7,
    ));
    let p2 = ModelParams::with_any_n(0.6, 0.9, 2, 2.0)?;
    let grid = TimeGrid::new(&[0.7, 1.3, 2.0], 2.0)?;
    let direct = ptilde(
        &p2,
        grid.time(1) - grid.time(0),
        grid.c_scale(0) * 2.0,
        grid.c_scale(1) * 1.0,
    )?;
    let series = ptilde_laguerre_series(&p2, &grid, 0, 1, 2.0, 1.0, 80)?;
    out.push(Check::rel(
        "ptilde_laguerre_expansion",
        "80-term product expansion against the closed kernel",
        series,
        direct,
        1e-8,
    ));
    let pm = ModelParams::with_any_n(0.5, 1.0, 1, 2.0)?;
    let y = 1.0;
    out.push(Check::rel(
        "end_time_density_closed_form",
        "half-order unit-drift case: end density y e^{-y^2/2T}/T",
        meander_density(&pm, 0.0, 0.0, 2.0, y)?,
        y * fx::exp(-y * y / 4.0) / 2.0,
        1e-12,
    ));
    Ok(out)
}

fn skeworth_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // skew-orthogonality delta matrix
    let mut worst = 0.0_f64;
    for &a_frak in &[-0.4, 0.0, 0.5, 1.3] {
        let two_a = 2.0 * a_frak;
        let qmax = 8;
        let table = MomentTable::new(a_frak, 2 * qmax + 2);
        let rstar = |q: usize| {
            4.0 * fx::exp(ln_gamma(2.0 * q as f64 + two_a + 2.0) - ln_gamma(2.0 * q as f64 + 2.0))
        };
        let rmax = (0..=qmax).map(rstar).fold(0.0, f64::max);
        for q in 0..=qmax {
            let f = DdPoly::f_poly(2 * q, two_a);
            for l in 0..=qmax {
                let g = DdPoly::g_poly(2 * l + 1, two_a);
                let got = table.skew_inner(&f, &g).to_f64();
                let want = if q == l { rstar(q) } else { 0.0 };
                worst = worst.max((got - want).abs() / rmax);
            }
        }
    }
    out.push(Check::abs(
        "skew_orthogonality_delta_matrix",
        "paired polynomial families produce r*_q delta_{ql} under the ordered two-point weight",
        worst,
        0.0,
        1e-8,
    ));
    // inverse coefficient tables
    let mut worst = 0.0_f64;
    for &(nu, kappa) in &[(0.0, 0.0), (1.0, 1.0), (0.5, 1.0), (-0.5, 0.0)] {
        let p = ModelParams::with_any_n(nu, kappa, 2, 4.0)?;
        let b = SkewBasis::new(&p, 44);
        for i in 0..=40_usize {
            for k in 0..=40_usize {
                let mut s = 0.0;
                for j in k..=i {
                    s += b.alpha(i, j) * b.beta(j, k);
                }
                let want = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((s - want).abs());
            }
        }
    }
    out.push(Check::abs(
        "alpha_beta_inverse",
        "expansion and inverse-expansion tables multiply to the identity on the degree-40 triangle",
        worst,
        0.0,
        1e-9,
    ));
    // half-line partial integrals
    let mut worst = 0.0_f64;
    for &a_frak in &[-0.4, 0.0, 1.0] {
        let p = ModelParams::with_any_n(1.5, 2.0 * (1.5 - a_frak), 2, 4.0)?;
        let b = SkewBasis::new(&p, 16);
        for j in 1..=6_usize {
            for &z in &[0.5, 2.0, 8.0] {
                let (lhs, rhs) = g_partial_integral(&b, j, z)?;
                worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
                if j <= 3 {
                    let (lhs, rhs) = f_partial_integral(&b, j, z)?;
                    worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
                }
            }
        }
    }
    out.push(Check::abs(
        "partial_integral_identities",
        "half-line integrals of the paired polynomials against incomplete-gamma closed forms",
        worst,
        0.0,
        1e-8,
    ));
    // full inner product and normalization ratio
    let p = ModelParams::new(0.5, 1.0, 4, 4.0)?;
    let grid = TimeGrid::new(&[1.0, 4.0], 4.0)?;
    let b = SkewBasis::new(&p, 24);
    let r0 = DdPoly::r_poly(&b, &grid, 0);
    let r1 = DdPoly::r_poly(&b, &grid, 1);
    let measured = skew_inner_full(&r0, &r1, &b, &grid)?;
    out.push(Check::rel(
        "r_normalization_ratio",
        "measured <R_0, R_1> against the closed normalization constant",
        measured,
        fx::exp(b.ln_r_full(&grid, 0)),
        1e-8,
    ));
    let r2 = DdPoly::r_poly(&b, &grid, 2);
    out.push(Check::abs(
        "r_even_even_vanishes",
        "<R_0, R_2> = 0 under the full inner product",
        skew_inner_full(&r0, &r2, &b, &grid)? / fx::exp(b.ln_r_full(&grid, 0)),
        0.0,
        1e-6,
    ));
    Ok(out)
}

fn kernels_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // parameters keep a_frak away from zero so the parity-dependent sum
    // weights are exercised
    let p = ModelParams::new(1.0, 0.6, 2, 1.0)?;
    let grid = TimeGrid::new(&[0.5, 1.0], 1.0)?;
    let k = FiniteKernel::new(p.clone(), grid.clone(), Some(16))?;
    // one-point mass
    let mass = quad::semi_infinite(
        |y| {
            if y <= 0.0 {
                return 0.0;
            }
            let pt = k.point(0, y).unwrap();
            k.s_entry(&pt, &pt)
        },
        0.0,
        1e-9,
        1e-8,
    )?;
    out.push(Check::rel(
        "one_point_mass",
        "diagonal kernel element integrates to the particle count",
        mass,
        2.0,
        1e-4,
    ));
    // brute-force pair density
    let req = CorrelationRequest {
        mode: CorrelationMode::Finite {
            params: p.clone(),
            grid: grid.clone(),
            degree_cap: Some(16),
        },
        points: alloc::vec![alloc::vec![0.4, 1.3], alloc::vec![0.6, 1.8]],
    };
    let got = correlation(&req)?.value;
    let want = multitime_density(&p, &grid, &[alloc::vec![0.4, 1.3], alloc::vec![0.6, 1.8]])?;
    debug_assert!(want > 0.0);
    out.push(Check::rel(
        "pair_correlation_vs_density",
        "assembled Pfaffian against the determinant density over two times",
        got,
        want,
        1e-3,
    ));
    // single-integral reduction of the order -1 differintegral
    let mut worst = 0.0_f64;
    for &nu in &[0.0, 1.0, 2.0] {
        for &theta in &[0.4, 1.0] {
            let (x, s) = (1.8, -0.9);
            let got = jtilde_diff(nu, DifferintOrder::new(-1.0)?, JTildeArgs::new(theta, 1.0, x, s)?)?;
            let want = quad::with_origin_exponent(
                |u| {
                    fx::powf(u, nu / 2.0)
                        * bessel_j(nu, 2.0 * fx::sqrt(u * x)).unwrap_or(f64::NAN)
                        * fx::exp(2.0 * s * u)
                },
                theta,
                nu / 2.0,
                1e-13,
                1e-12,
            )? * fx::powf(x, nu / 2.0)
                / theta;
            worst = worst.max((got - want).abs() / want.abs().max(1e-12));
        }
    }
    out.push(Check::abs(
        "order_minus_one_reduction",
        "integer-order differintegral against its single-integral form at whole kappa = nu",
        worst,
        0.0,
        1e-8,
    ));
    // limit kernel structure
    let ik = InfiniteKernel::new(0.5, 1.0)?;
    out.push(Check::abs(
        "limit_d_diagonal",
        "antisymmetric limit element vanishes at equal arguments",
        ik.d_entry(-1.0, 1.3, -1.0, 1.3)?,
        0.0,
        1e-12,
    ));
    let g1 = ik.g_entry(-2.0, 0.7, -1.0, 1.8)?;
    let g2 = ik.g_entry_quadrature(-2.0, 0.7, -1.0, 1.8)?;
    out.push(Check::rel(
        "damped_cross_integral_dual_route",
        "closed heat-kernel form of the damped Bessel cross integral against quadrature",
        g2,
        g1,
        1e-9,
    ));
    // homogeneous diagonal
    let x = 1.0;
    let v = homogeneous_kernel(0.0, -2.0, x, -2.0, x)?;
    let j0 = bessel_j(0.0, 2.0 * fx::sqrt(x))?;
    let j1 = bessel_j(1.0, 2.0 * fx::sqrt(x))?;
    out.push(Check::rel(
        "homogeneous_hard_edge_diagonal",
        "equal-time diagonal against the squared Bessel pair",
        v,
        j0 * j0 + j1 * j1,
        1e-12,
    ));
    Ok(out)
}

fn pfaffian_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // xorshift randoms
    let mut state = 0x6a09e667f3bcc909_u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut worst = 0.0_f64;
    for order in (2..=40).step_by(2) {
        for _ in 0..5 {
            let m = SkewMatrix::from_upper(order, |_, _| next())?;
            let pf = pfaffian(&m);
            let det = m.to_dense().determinant();
            worst = worst.max((pf * pf - det).abs() / det.abs().max(1e-12));
        }
    }
    out.push(Check::abs(
        "pfaffian_squares_to_determinant",
        "Pf(A)^2 = det(A) over random skew matrices of orders 2..40",
        worst,
        0.0,
        1e-10,
    ));
    let m = SkewMatrix::from_upper(12, |i, j| if j == i + 1 && i % 2 == 0 { 1.0 } else { 0.0 })?;
    out.push(Check::abs(
        "symplectic_block_value",
        "block-diagonal symplectic form has Pfaffian exactly one",
        pfaffian(&m),
        1.0,
        0.0,
    ));
    let m = SkewMatrix::from_upper(10, |_, _| next())?;
    out.push(Check::rel(
        "householder_route",
        "tridiagonalization route against the elimination route",
        pfaffian_householder(&m),
        pfaffian(&m),
        1e-9,
    ));
    let p = ModelParams::new(0.5, 1.0, 2, 1.0)?;
    let grid = TimeGrid::new(&[0.5, 1.0], 1.0)?;
    let k = FiniteKernel::new(p, grid, Some(16))?;
    let chis = [
        ChiInterval {
            time_index: 0,
            lo: 0.0,
            hi: 2.0,
            value: -0.8,
        },
        ChiInterval {
            time_index: 1,
            lo: 0.5,
            hi: 3.0,
            value: -0.3,
        },
    ];
    let pf = fredholm_pfaffian(&k, &chis, 8)?;
    let det = fredholm_determinant(&k, &chis, 8)?;
    out.push(Check::rel(
        "fredholm_square_identity",
        "discretized Fredholm Pfaffian squared against the matching determinant",
        pf * pf,
        det,
        1e-8,
    ));
    out.push(Check::abs(
        "fredholm_empty_test_function",
        "zero test function gives exactly one",
        fredholm_pfaffian(&k, &[], 8)?,
        1.0,
        0.0,
    ));
    Ok(out)
}

fn asymptotics_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let ns = [40_usize, 80];
    for mode in [
        ConvergenceMode::REven,
        ConvergenceMode::ROdd,
        ConvergenceMode::PhiEven,
        ConvergenceMode::PhiOdd,
        ConvergenceMode::I2lc(-1),
    ] {
        let rep = validate_mode(1.0, 1.0, mode, 0.5, 1.0, -2.0, -1.0, &ns)?;
        out.push(Check::flag(
            rep.name.as_str(),
            "finite-N transform drifts onto its scaling limit",
            rep.rows.last().map(|r| r.rel_err < 0.25).unwrap_or(false)
                && (rep.decreasing || rep.final_rel_err < 1e-4),
        ));
    }
    let rep = validate_mode(
        0.5,
        1.0,
        ConvergenceMode::Ptilde,
        0.5,
        1.0,
        -2.0,
        -1.0,
        &ns,
    )?;
    out.push(Check::abs(
        "ptilde_limit_identity",
        "one-step kernel against the damped Bessel cross integral",
        rep.final_rel_err,
        0.0,
        1e-6,
    ));
    let reps = kernel_convergence(0.5, 1.0, -2.0, -1.0, 1.0, 2.0, &[16, 32])?;
    for rep in reps {
        out.push(Check::flag(
            rep.name.as_str(),
            "finite kernel element approaches the limit element",
            rep.rows[1].rel_err < rep.rows[0].rel_err || rep.final_rel_err < 1e-4,
        ));
    }
    let hom = crate::kernels::homogeneous_limit_check(0.5, 1.0, 0.7, 1.0, 2.0, &[-4.0, -8.0])?;
    out.push(Check::flag(
        "homogeneous_product_decay",
        "product of the off kernels decays along synchronized shifts",
        hom.product_decreasing,
    ));
    out.push(Check::abs(
        "homogeneous_s_drift",
        "gauge-fixed kernel element near the homogeneous kernel at shift -8",
        hom.final_s_err,
        0.0,
        2e-3,
    ));
    Ok(out)
}

/// Monte Carlo cross-check (separate because of its runtime): KS distance
/// between the exact sampler's marginal and the density CDF.
pub fn monte_carlo_check(nu: f64, kappa: f64, n_paths: u64, seed: u64) -> Result<Check> {
    let p = ModelParams::with_any_n(nu, kappa, 1, 1.0)?;
    let paths = simulate_paths(&p, Scheme::Exact1Particle, n_paths, 1, seed)?;
    let mut finals: Vec<f64> = paths.iter().map(|pa| pa.states[1][0]).collect();
    let cdf = |y: f64| {
        quad::adaptive(
            |z| meander_density(&p, 0.0, 0.0, 1.0, z).unwrap_or(0.0),
            0.0,
            y,
            1e-10,
            1e-9,
        )
        .unwrap_or(f64::NAN)
    };
    let d = ks_distance(&mut finals, cdf);
    Ok(Check {
        name: format!("ks_exact_sampler_nu{nu}_kappa{kappa}"),
        detail: String::from("KS distance between sampled marginal and density CDF"),
        measured: d,
        expected: 0.0,
        tolerance: 0.01,
        pass: d < 0.01,
    })
}

/// Admissibility guard used by the front end.
pub fn check_admissible(nu: f64, kappa: f64, n: usize, horizon: f64) -> Result<()> {
    ModelParams::with_any_n(nu, kappa, n.max(1), horizon).map(|_| ())
}

/// Convenience: run several suites, stopping at configuration errors but
/// collecting check failures.
pub fn run_suites(suites: &[Suite]) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s)).collect()
}
