//! Adaptive Gauss-Kronrod quadrature and Gauss-Legendre rules.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fx;

/// 21-point Kronrod nodes (positive half, descending).
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
/// 10-point Gauss weights embedded in the 21-point rule.
const WG21: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
/// 21-point Kronrod weights.
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Single Gauss-Kronrod 21 panel: returns (integral, error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK21[10];
    let mut res_g = 0.0;
    let mut res_abs = fx::abs(res_k);
    let mut fv = [0.0_f64; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = half * XGK21[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        res_k += WGK21[j] * (f1 + f2);
        res_abs += WGK21[j] * (fx::abs(f1) + fx::abs(f2));
        if j % 2 == 1 {
            res_g += WG21[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK21[10] * fx::abs(fc - mean);
    for j in 0..10 {
        res_asc += WGK21[j] * (fx::abs(fv[j] - mean) + fx::abs(fv[20 - j] - mean));
    }
    let mut err = fx::abs((res_k - res_g) * half);
    res_asc *= fx::abs(half);
    res_abs *= fx::abs(half);
    if res_asc != 0.0 && err != 0.0 {
        let scale = fx::powf(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (res_k * half, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Bisects the worst panel until `abs_tol + rel_tol * |I|` is met.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        error: e,
    });
    let mut total_v = v;
    let mut total_e = e;
    for _ in 0..2000 {
        if total_e <= abs_tol + rel_tol * fx::abs(total_v) {
            return Ok(total_v);
        }
        let worst = heap.pop().ok_or(Error::Convergence("empty panel heap"))?;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept what we have.
            total_e -= worst.error;
            total_v += 0.0;
            if heap.is_empty() {
                return Ok(total_v);
            }
            continue;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        total_v += v1 + v2 - worst.value;
        total_e += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    if total_e <= 1e3 * (abs_tol + rel_tol * fx::abs(total_v)) {
        // Slightly out of tolerance after the panel budget; still usable.
        Ok(total_v)
    } else {
        Err(Error::Convergence("adaptive quadrature stalled"))
    }
}

/// Integrate `f` over `[a, infinity)` assuming super-polynomial decay.
///
/// Windows of doubling width are added until the increment is negligible.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = 1.0_f64.max(fx::abs(a) * 0.5);
    let mut stagnant = 0;
    for _ in 0..60 {
        let hi = lo + width;
        let piece = adaptive(&f, lo, hi, abs_tol * 0.25, rel_tol * 0.25)?;
        total += piece;
        if fx::abs(piece) <= 0.5 * (abs_tol + rel_tol * fx::abs(total)) {
            stagnant += 1;
            if stagnant >= 2 {
                return Ok(total);
            }
        } else {
            stagnant = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::Decay("tail integral did not settle"))
}

/// Integrate `f` over `[0, b]` where `f(x) ~ x^sigma g(x)` near zero with
/// smooth `g` and `sigma > -1`. Substitutes `x = u^{1/(sigma+1)}` so the
/// transformed integrand is bounded at the origin.
pub fn with_origin_exponent<F: Fn(f64) -> f64>(
    f: F,
    b: f64,
    sigma: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if sigma <= -1.0 {
        return Err(Error::NonIntegrable("endpoint exponent <= -1"));
    }
    if sigma >= 0.0 {
        return adaptive(f, 0.0, b, abs_tol, rel_tol);
    }
    let p = 1.0 / (sigma + 1.0);
    // int_0^b f = p * int_0^{b^{1/p}} f(u^p) u^{p-1} du, and u^{p-1} x^sigma is O(1).
    let ub = fx::powf(b, 1.0 / p);
    adaptive(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = fx::powf(u, p);
            p * f(x) * fx::powf(u, p - 1.0)
        },
        0.0,
        ub,
        abs_tol,
        rel_tol,
    )
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = fx::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if fx::abs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes.push(x);
        weights.push(w);
    }
    // Mirror to the full rule, ascending.
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in (0..m).rev() {
        xs.push(-nodes[i]);
        ws.push(weights[i]);
    }
    let skip = n % 2; // center node already included for odd n
    for i in skip..m {
        xs.push(nodes[i]);
        ws.push(weights[i]);
    }
    (xs, ws)
}

/// Map a Gauss-Legendre rule onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (
        xs.iter().map(|x| c + h * x).collect(),
        ws.iter().map(|w| w * h).collect(),
    )
}
