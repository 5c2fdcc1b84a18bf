//! Pfaffians, correlation functions, and discretized Fredholm functionals.
//!
//! The Pfaffian of an even-order skew-symmetric matrix is computed by
//! Parlett-Reid-style congruence elimination with greatest-magnitude
//! pivoting; a Householder tridiagonalization variant serves as an
//! independent cross-check. Multitime correlation functions are Pfaffians
//! of block matrices assembled from the kernel modules, and multitime
//! characteristic functions are discretized Fredholm Pfaffians on
//! Gauss-Legendre nodes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fx;
use crate::kernels::{FiniteKernel, InfiniteKernel, PointData};
use crate::linalg::Dense;
use crate::meander::{ModelParams, TimeGrid};
use crate::quad;

/// A dense skew-symmetric matrix of even order; construction mirrors the
/// upper triangle so antisymmetry is exact.
#[derive(Debug, Clone)]
pub struct SkewMatrix {
    pub order: usize,
    a: Vec<f64>,
}

impl SkewMatrix {
    /// Build from the strict upper triangle: `f(i, j)` for `i < j`.
    pub fn from_upper<F: FnMut(usize, usize) -> f64>(order: usize, mut f: F) -> Result<SkewMatrix> {
        if order % 2 != 0 {
            return Err(Error::OddOrder);
        }
        let mut a = alloc::vec![0.0; order * order];
        for i in 0..order {
            for j in i + 1..order {
                let v = f(i, j);
                a[i * order + j] = v;
                a[j * order + i] = -v;
            }
        }
        Ok(SkewMatrix { order, a })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.order + j]
    }

    pub fn to_dense(&self) -> Dense {
        Dense {
            n: self.order,
            a: self.a.clone(),
        }
    }
}

/// Outcome of a Pfaffian elimination: sign, log-magnitude, and a pivot
/// condition estimate.
#[derive(Debug, Clone, Copy)]
pub struct PfaffianValue {
    pub sign: f64,
    pub ln_abs: f64,
    /// max |pivot| / min |pivot| over the elimination
    pub condition: f64,
}

impl PfaffianValue {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * fx::exp(self.ln_abs)
        }
    }
}

/// Pfaffian by congruence elimination with greatest-magnitude pivoting.
///
/// After zeroing row `k` beyond position `k+1` by adding multiples of
/// row/column `k+1`, the Pfaffian factors as `a[k][k+1]` times the
/// Pfaffian of the trailing block. Signs of the row/column transpositions
/// are tracked; magnitudes accumulate in log space so large orders cannot
/// overflow.
pub fn pfaffian_log(m: &SkewMatrix) -> PfaffianValue {
    let n = m.order;
    let mut a = m.a.clone();
    let mut sign = 1.0;
    let mut ln_abs = 0.0;
    let mut max_piv = 0.0_f64;
    let mut min_piv = f64::INFINITY;
    let mut k = 0;
    while k + 1 < n {
        // pivot: the largest entry of row k beyond the diagonal
        let mut p = k + 1;
        let mut best = fx::abs(a[k * n + k + 1]);
        for i in k + 2..n {
            let v = fx::abs(a[k * n + i]);
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return PfaffianValue {
                sign: 0.0,
                ln_abs: f64::NEG_INFINITY,
                condition: f64::INFINITY,
            };
        }
        if p != k + 1 {
            for j in 0..n {
                a.swap((k + 1) * n + j, p * n + j);
            }
            for i in 0..n {
                a.swap(i * n + k + 1, i * n + p);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k + 1];
        sign *= if pivot > 0.0 { 1.0 } else { -1.0 };
        ln_abs += fx::ln(fx::abs(pivot));
        max_piv = max_piv.max(fx::abs(pivot));
        min_piv = min_piv.min(fx::abs(pivot));
        // congruence: col_j -= mu_j col_{k+1}, row_j -= mu_j row_{k+1}
        for j in k + 2..n {
            let mu = a[k * n + j] / pivot;
            if mu == 0.0 {
                continue;
            }
            for i in 0..n {
                a[i * n + j] -= mu * a[i * n + k + 1];
            }
            for i in 0..n {
                a[j * n + i] -= mu * a[(k + 1) * n + i];
            }
        }
        k += 2;
    }
    PfaffianValue {
        sign,
        ln_abs,
        condition: max_piv / min_piv,
    }
}

/// Pfaffian as a plain double, `Pf(A)^2 = det(A)`.
pub fn pfaffian(m: &SkewMatrix) -> f64 {
    pfaffian_log(m).value()
}

/// Pfaffian through skew-symmetric Householder tridiagonalization
/// (independent cross-check; each applied reflector flips the sign).
pub fn pfaffian_householder(m: &SkewMatrix) -> f64 {
    let n = m.order;
    let mut a = m.a.clone();
    let mut det_q = 1.0;
    for k in 0..n.saturating_sub(2) {
        // reflect column k below the subdiagonal onto e_{k+1}
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[i * n + k] * a[i * n + k];
        }
        let norm = fx::sqrt(norm2);
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v = alloc::vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = a[i * n + k];
        }
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        det_q = -det_q;
        // A <- H A H with H = I - 2 v v^T / (v^T v)
        let scale = 2.0 / vnorm2;
        // w = A v
        let mut w = alloc::vec![0.0; n];
        for (i, wi) in w.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, vj) in v.iter().enumerate() {
                s += a[i * n + j] * vj;
            }
            *wi = s;
        }
        // A <- A - scale (w v^T - v w^T) + scale^2 (v^T w) v v^T; v^T w = 0 for skew A
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] -= scale * (w[i] * v[j] - v[i] * w[j]);
            }
        }
    }
    let mut pf = det_q;
    let mut k = 0;
    while k + 1 < n {
        pf *= a[k * n + k + 1];
        k += 2;
    }
    pf
}

// ---------------------------------------------------------------------------
// Correlation functions
// ---------------------------------------------------------------------------

/// Which system a correlation request addresses.
pub enum CorrelationMode {
    /// Finite-N system on a time grid.
    Finite {
        params: ModelParams,
        grid: TimeGrid,
        degree_cap: Option<usize>,
    },
    /// Scaling limit at shifted times `s_1 < ... < s_M < 0`.
    Infinite { nu: f64, kappa: f64, times: Vec<f64> },
}

/// A multitime correlation request: one point set per observation time.
pub struct CorrelationRequest {
    pub mode: CorrelationMode,
    pub points: Vec<Vec<f64>>,
}

/// The result: correlation value, block count, and the Pfaffian pivot
/// condition estimate.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationResult {
    pub value: f64,
    pub blocks: usize,
    pub condition_estimate: f64,
}

/// Evaluate the multitime correlation function as the Pfaffian of the
/// assembled block matrix.
pub fn correlation(req: &CorrelationRequest) -> Result<CorrelationResult> {
    // flatten (time, point) pairs; a slice may be empty (its particle
    // count is integrated out and contributes no blocks)
    let mut labels = Vec::new();
    for (m, pts) in req.points.iter().enumerate() {
        for &y in pts {
            if y < 0.0 {
                return Err(Error::Domain("points must be nonnegative"));
            }
            labels.push((m, y));
        }
    }
    if labels.is_empty() {
        return Err(Error::Domain("correlation request needs at least one point"));
    }
    let k = labels.len();
    let mut blocks: Vec<Vec<crate::kernels::KernelBlock>> = Vec::with_capacity(k);
    match &req.mode {
        CorrelationMode::Finite {
            params,
            grid,
            degree_cap,
        } => {
            if req.points.len() != grid.times.len() {
                return Err(Error::Domain("one point set per observation time"));
            }
            let kernel = FiniteKernel::new(params.clone(), grid.clone(), *degree_cap)?;
            let cached: Vec<PointData> = labels
                .iter()
                .map(|&(m, y)| kernel.point(m, y))
                .collect::<Result<_>>()?;
            for a in &cached {
                let mut row = Vec::with_capacity(k);
                for b in &cached {
                    row.push(kernel.block_from_points(a, b)?);
                }
                blocks.push(row);
            }
        }
        CorrelationMode::Infinite { nu, kappa, times } => {
            if req.points.len() != times.len() {
                return Err(Error::Domain("one point set per shifted time"));
            }
            let mut prev = f64::NEG_INFINITY;
            for &s in times {
                if !(s < 0.0 && s > prev) {
                    return Err(Error::Domain(
                        "shifted times must be strictly increasing and negative",
                    ));
                }
                prev = s;
            }
            let kernel = InfiniteKernel::new(*nu, *kappa)?;
            for &(m, ya) in &labels {
                let mut row = Vec::with_capacity(k);
                for &(n, yb) in &labels {
                    row.push(kernel.block(times[m], ya, times[n], yb)?);
                }
                blocks.push(row);
            }
        }
    }
    let m = SkewMatrix::from_upper(2 * k, |r, c| {
        let (bi, ri) = (r / 2, r % 2);
        let (bj, rj) = (c / 2, c % 2);
        blocks[bi][bj].as_matrix()[ri][rj]
    })?;
    let pf = pfaffian_log(&m);
    Ok(CorrelationResult {
        value: pf.value(),
        blocks: k,
        condition_estimate: pf.condition,
    })
}

// ---------------------------------------------------------------------------
// Discretized Fredholm Pfaffian / determinant
// ---------------------------------------------------------------------------

/// A constant test-function weight on an interval of one time slice:
/// `chi_m(y) = value` for `y in [lo, hi]`, zero elsewhere.
#[derive(Debug, Clone, Copy)]
pub struct ChiInterval {
    pub time_index: usize,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

/// Nystrom discretization of the Fredholm Pfaffian
/// `PF(J delta + sqrt(chi) A sqrt(chi))` on `nodes` Gauss-Legendre points
/// per interval. All `chi` values must share one sign (the signed square
/// root is then a uniform factor and the discretized matrix stays
/// skew-symmetric).
pub fn fredholm_pfaffian(
    kernel: &FiniteKernel,
    chis: &[ChiInterval],
    nodes: usize,
) -> Result<f64> {
    let disc = discretize(kernel, chis, nodes)?;
    if disc.is_empty() {
        return Ok(1.0);
    }
    let sigma = disc.sigma;
    let k = disc.points.len();
    let m = SkewMatrix::from_upper(2 * k, |r, c| {
        let (bi, ri) = (r / 2, r % 2);
        let (bj, rj) = (c / 2, c % 2);
        let base = if bi == bj && ri == 0 && rj == 1 { 1.0 } else { 0.0 };
        base + sigma * disc.weights[bi] * disc.weights[bj] * disc.blocks[bi][bj].as_matrix()[ri][rj]
    })?;
    Ok(pfaffian(&m))
}

/// The matching discretized Fredholm determinant of the squared
/// characteristic function: `Det(I + [[S~, I~], [D, S~^T]] chi)`.
pub fn fredholm_determinant(
    kernel: &FiniteKernel,
    chis: &[ChiInterval],
    nodes: usize,
) -> Result<f64> {
    let disc = discretize(kernel, chis, nodes)?;
    if disc.is_empty() {
        return Ok(1.0);
    }
    let k = disc.points.len();
    let mut m = Dense::from_fn(2 * k, |r, c| if r == c { 1.0 } else { 0.0 });
    for i in 0..k {
        for j in 0..k {
            let b = &disc.blocks[i][j];
            let w = disc.sigma * disc.weights[j] * disc.weights[j];
            // [[S~(i,j), I~(i,j)], [D(i,j), S~(j,i)]] chi_j
            m.a[(2 * i) * 2 * k + 2 * j] += b.s_fwd * w;
            m.a[(2 * i) * 2 * k + 2 * j + 1] += b.i * w;
            m.a[(2 * i + 1) * 2 * k + 2 * j] += b.d * w;
            m.a[(2 * i + 1) * 2 * k + 2 * j + 1] += b.s_bwd * w;
        }
    }
    Ok(m.determinant())
}

struct Discretization {
    sigma: f64,
    points: Vec<(usize, f64)>,
    weights: Vec<f64>,
    blocks: Vec<Vec<crate::kernels::KernelBlock>>,
}

impl Discretization {
    fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn discretize(kernel: &FiniteKernel, chis: &[ChiInterval], nodes: usize) -> Result<Discretization> {
    let mut sigma = 0.0;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for chi in chis {
        if chi.value == 0.0 {
            continue;
        }
        if chi.time_index >= kernel.grid.times.len() {
            return Err(Error::Domain("chi interval outside the time grid"));
        }
        if !(chi.hi > chi.lo && chi.lo >= 0.0) {
            return Err(Error::Domain("chi interval must be ordered and nonnegative"));
        }
        let s = if chi.value > 0.0 { 1.0 } else { -1.0 };
        if sigma == 0.0 {
            sigma = s;
        } else if sigma != s {
            return Err(Error::Unsupported(
                "mixed-sign test functions break the skew discretization",
            ));
        }
        let (xs, ws) = quad::gauss_legendre_on(nodes, chi.lo, chi.hi);
        for (x, w) in xs.iter().zip(&ws) {
            points.push((chi.time_index, *x));
            weights.push(fx::sqrt(w * fx::abs(chi.value)));
        }
    }
    let mut blocks = Vec::with_capacity(points.len());
    let cached: Vec<PointData> = points
        .iter()
        .map(|&(m, y)| kernel.point(m, y))
        .collect::<Result<_>>()?;
    for a in &cached {
        let mut row = Vec::with_capacity(points.len());
        for b in &cached {
            row.push(kernel.block_from_points(a, b)?);
        }
        blocks.push(row);
    }
    Ok(Discretization {
        sigma,
        points,
        weights,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::multitime_density;

    fn close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * b.abs().max(1.0),
            "{a} vs {b} (tol {tol})"
        );
    }

    /// xorshift for reproducible random matrices
    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        }
    }

    #[test]
    fn pfaffian_small_orders() {
        let m2 = SkewMatrix::from_upper(2, |_, _| 3.7).unwrap();
        close(pfaffian(&m2), 3.7, 1e-15);
        // 4x4: a12 a34 - a13 a24 + a14 a23
        let vals = [[0.0, 1.2, -0.7, 2.1], [0.0, 0.0, 0.4, -1.5], [0.0; 4], [0.0; 4]];
        let m4 = SkewMatrix::from_upper(4, |i, j| {
            if i == 2 && j == 3 {
                0.9
            } else {
                vals[i][j]
            }
        })
        .unwrap();
        let want = 1.2 * 0.9 - (-0.7) * (-1.5) + 2.1 * 0.4;
        close(pfaffian(&m4), want, 1e-14);
        assert!(SkewMatrix::from_upper(3, |_, _| 1.0).is_err());
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let mut rng = Rng(0x9e3779b97f4a7c15);
        for order in (2..=40).step_by(2) {
            for _ in 0..10 {
                let m = SkewMatrix::from_upper(order, |_, _| rng.next()).unwrap();
                let pf = pfaffian(&m);
                let det = m.to_dense().determinant();
                assert!(
                    (pf * pf - det).abs() <= 1e-10 * det.abs().max(1e-12),
                    "order {order}: pf^2 = {} vs det = {det}",
                    pf * pf
                );
            }
        }
    }

    #[test]
    fn pfaffian_of_symplectic_blocks_is_one() {
        for half in [1_usize, 3, 10, 31] {
            let m = SkewMatrix::from_upper(2 * half, |i, j| {
                if j == i + 1 && i % 2 == 0 {
                    1.0
                } else {
                    0.0
                }
            })
            .unwrap();
            assert_eq!(pfaffian(&m), 1.0);
        }
    }

    #[test]
    fn householder_route_agrees() {
        let mut rng = Rng(0x2545f4914f6cdd1d);
        for order in [2_usize, 6, 12, 20] {
            for _ in 0..5 {
                let m = SkewMatrix::from_upper(order, |_, _| rng.next()).unwrap();
                let a = pfaffian(&m);
                let b = pfaffian_householder(&m);
                close(b, a, 1e-9);
            }
        }
    }

    #[test]
    fn permutation_congruence_tracks_sign() {
        // Pf(P A P^T) = det(P) Pf(A) for a transposition of indices
        let mut rng = Rng(0xdeadbeefcafe1234);
        let m = SkewMatrix::from_upper(6, |_, _| rng.next()).unwrap();
        let pf = pfaffian(&m);
        // swap labels 1 and 4
        let perm = [0usize, 4, 2, 3, 1, 5];
        let swapped = SkewMatrix::from_upper(6, |i, j| {
            let (pi, pj) = (perm[i], perm[j]);
            if pi < pj {
                m.get(pi, pj)
            } else {
                -m.get(pj, pi)
            }
        })
        .unwrap();
        close(pfaffian(&swapped), -pf, 1e-12);
    }

    #[test]
    fn log_form_handles_large_orders() {
        let mut rng = Rng(0x0123456789abcdef);
        let m = SkewMatrix::from_upper(80, |_, _| rng.next() * 3.0).unwrap();
        let pf = pfaffian_log(&m);
        assert!(pf.ln_abs.is_finite());
        assert!(pf.condition.is_finite());
        // compare against the determinant in log space: 2 ln|pf| = ln|det|
        let det = m.to_dense().determinant();
        assert!((2.0 * pf.ln_abs - det.abs().ln()).abs() < 1e-8);
    }

    fn finite_request(
        params: &ModelParams,
        grid: &TimeGrid,
        pts: &[Vec<f64>],
        cap: usize,
    ) -> CorrelationRequest {
        CorrelationRequest {
            mode: CorrelationMode::Finite {
                params: params.clone(),
                grid: grid.clone(),
                degree_cap: Some(cap),
            },
            points: pts.to_vec(),
        }
    }

    #[test]
    fn one_point_correlation_is_kernel_diagonal() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[0.5, 1.0], 1.0).unwrap();
        let k = FiniteKernel::new(p.clone(), grid.clone(), Some(16)).unwrap();
        for m in 0..2 {
            for &y in &[0.4, 1.3] {
                let req = CorrelationRequest {
                    mode: CorrelationMode::Finite {
                        params: p.clone(),
                        grid: grid.clone(),
                        degree_cap: Some(16),
                    },
                    points: if m == 0 {
                        alloc::vec![alloc::vec![y], alloc::vec![]]
                    } else {
                        alloc::vec![alloc::vec![], alloc::vec![y]]
                    },
                };
                let got = correlation(&req).unwrap().value;
                let pt = k.point(m, y).unwrap();
                let rho1 = k.s_tilde_entry(&pt, &pt).unwrap();
                close(got, rho1, 1e-12);
                assert!(rho1 >= 0.0);
            }
        }
    }

    #[test]
    fn coincident_points_collapse_the_pfaffian() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[1.0], 1.0).unwrap();
        let req = finite_request(&p, &grid, &[alloc::vec![0.8, 0.8 + 1e-12]], 16);
        let r = correlation(&req).unwrap();
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn pair_correlation_matches_brute_force_both_times() {
        // N = 2, M = 1: the full-configuration correlation at (t_1, T) is
        // the multitime density itself
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[0.5, 1.0], 1.0).unwrap();
        for &(a, b, c, d) in &[(0.3, 1.1, 0.5, 1.6), (0.8, 2.0, 0.4, 2.4)] {
            let req = finite_request(&p, &grid, &[alloc::vec![a, b], alloc::vec![c, d]], 20);
            let got = correlation(&req).unwrap().value;
            let want = multitime_density(&p, &grid, &[alloc::vec![a, b], alloc::vec![c, d]])
                .unwrap();
            assert!(
                (got - want).abs() <= 1e-3 * want.abs().max(1e-10),
                "pair correlation {got} vs density {want}"
            );
        }
    }

    #[test]
    fn fredholm_pfaffian_of_zero_chi_is_one() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[1.0], 1.0).unwrap();
        let k = FiniteKernel::new(p, grid, Some(16)).unwrap();
        assert_eq!(fredholm_pfaffian(&k, &[], 10).unwrap(), 1.0);
    }

    #[test]
    fn fredholm_pfaffian_squares_to_determinant() {
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[0.5, 1.0], 1.0).unwrap();
        let k = FiniteKernel::new(p, grid, Some(16)).unwrap();
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
        let pf = fredholm_pfaffian(&k, &chis, 8).unwrap();
        let det = fredholm_determinant(&k, &chis, 8).unwrap();
        close(pf * pf, det, 1e-8);
    }

    #[test]
    fn gap_probability_matches_correlation_expansion() {
        // N = 2, single time: the expansion terminates,
        // PF = 1 - int_0^B rho_1 + (1/2) int int_{[0,B]^2} rho_2
        let p = ModelParams::new(0.5, 1.0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(&[1.0], 1.0).unwrap();
        let k = FiniteKernel::new(p.clone(), grid.clone(), Some(16)).unwrap();
        let bound = 0.9;
        let chi = [ChiInterval {
            time_index: 0,
            lo: 0.0,
            hi: bound,
            value: -1.0,
        }];
        let pf = fredholm_pfaffian(&k, &chi, 24).unwrap();
        let rho1 = |y: f64| {
            let pt = k.point(0, y).unwrap();
            k.s_tilde_entry(&pt, &pt).unwrap()
        };
        let rho2 = |y1: f64, y2: f64| {
            correlation(&finite_request(&p, &grid, &[alloc::vec![y1, y2]], 16))
                .unwrap()
                .value
        };
        let i1 = quad::adaptive(|y| if y <= 0.0 { 0.0 } else { rho1(y) }, 0.0, bound, 1e-9, 1e-8)
            .unwrap();
        let i2 = quad::adaptive(
            |y1| {
                if y1 <= 0.0 {
                    return 0.0;
                }
                quad::adaptive(|y2| if y2 <= 0.0 { 0.0 } else { rho2(y1, y2) }, 0.0, bound, 1e-8, 1e-7)
                    .unwrap()
            },
            0.0,
            bound,
            1e-8,
            1e-7,
        )
        .unwrap();
        let expansion = 1.0 - i1 + 0.5 * i2;
        close(pf, expansion, 1e-3);
        // a gap probability lies in (0, 1)
        assert!(pf > 0.0 && pf < 1.0);
    }
}
