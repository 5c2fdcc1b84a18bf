//! Double-double arithmetic (~31 significant digits).
//!
//! Used internally where ordered-domain polynomial moments cancel beyond
//! f64 range, and by test oracles that need extended-precision reference
//! values. Not a general-purpose API.

use crate::fx;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
pub const LN2: Dd = Dd {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};
pub const PI: Dd = Dd {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};
/// ln(2*pi)/2
pub const LN_2PI_OVER_2: Dd = Dd {
    hi: 0.9189385332046728,
    lo: -3.8782941580672414e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, fx::mul_add(a, b, -p))
}

impl Dd {
    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_ratio(num: i64, den: i64) -> Dd {
        Dd::from(num as f64).div(Dd::from(den as f64))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from(k))
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.scale(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.scale(q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from(q3))
    }

    pub fn recip(self) -> Dd {
        ONE.div(self)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return ZERO;
        }
        let y = fx::sqrt(self.hi);
        let yd = Dd::from(y);
        // One Newton step: y + (a - y^2) / (2y)
        yd.add(self.sub(yd.mul(yd)).div(yd.scale(2.0)))
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return ONE;
        }
        let mut base = if n > 0 { self } else { self.recip() };
        let mut e = n.unsigned_abs();
        let mut acc = ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// exp with range reduction by ln 2 and a Taylor tail.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return ZERO;
        }
        let k = fx::round(self.hi / LN2.hi);
        let r = self.sub(LN2.scale(k));
        let mut term = ONE;
        let mut sum = ONE;
        for n in 1..40 {
            term = term.mul(r).div(Dd::from(n as f64));
            sum = sum.add(term);
            if fx::abs(term.hi) < 1e-35 * fx::abs(sum.hi) {
                break;
            }
        }
        // * 2^k, exact
        let p = fx::powi(2.0, k as i32);
        Dd {
            hi: sum.hi * p,
            lo: sum.lo * p,
        }
    }

    /// ln via one Newton refinement of the f64 logarithm.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y = Dd::from(fx::ln(self.hi));
        // y + (x * exp(-y) - 1)
        y.add(self.mul(y.neg().exp()).sub(ONE))
    }

    pub fn powf(self, e: Dd) -> Dd {
        self.ln().mul(e).exp()
    }

    #[inline]
    pub fn lt(self, other: Dd) -> bool {
        self.hi < other.hi || (self.hi == other.hi && self.lo < other.lo)
    }
}

// ---------------------------------------------------------------------------
// Extended-precision special functions (oracle grade).
// ---------------------------------------------------------------------------

/// Bernoulli coefficients B_{2n} / (2n (2n-1)) for the Stirling series, n = 1..15.
fn stirling_coeff(n: usize) -> Dd {
    const B2N: [(i64, i64); 15] = [
        (1, 6),
        (-1, 30),
        (1, 42),
        (-1, 30),
        (5, 66),
        (-691, 2730),
        (7, 6),
        (-3617, 510),
        (43867, 798),
        (-174611, 330),
        (854513, 138),
        (-236364091, 2730),
        (8553103, 6),
        (-23749461029, 870),
        (8615841276005, 14322),
    ];
    let (num, den) = B2N[n - 1];
    let m = (2 * n * (2 * n - 1)) as i64;
    Dd::from_ratio(num, den * m)
}

/// ln Gamma(z) for z > 0 via argument shift and the Stirling series.
pub fn lgamma(z: Dd) -> Dd {
    debug_assert!(z.hi > 0.0);
    let mut shift = ONE;
    let mut w = z;
    while w.hi < 32.0 {
        shift = shift.mul(w);
        w = w.add(ONE);
    }
    // (w - 1/2) ln w - w + ln(2 pi)/2 + sum B_{2n} / (2n(2n-1) w^{2n-1})
    let lnw = w.ln();
    let mut s = w.sub(Dd::from(0.5)).mul(lnw).sub(w).add(LN_2PI_OVER_2);
    let winv2 = w.recip().mul(w.recip());
    let mut wpow = w.recip();
    for n in 1..=15 {
        s = s.add(stirling_coeff(n).mul(wpow));
        wpow = wpow.mul(winv2);
    }
    s.sub(shift.ln())
}

/// Gamma(z) for z > 0.
pub fn gamma_pos(z: Dd) -> Dd {
    lgamma(z).exp()
}

/// Gamma(z) for any non-pole z, using downward recursion for z < 0.
pub fn gamma(z: Dd) -> Dd {
    if z.hi > 0.0 {
        return gamma_pos(z);
    }
    // Gamma(z) = Gamma(z + k) / (z (z+1) ... (z+k-1)), k lifts z above 0.
    let k = crate::fx::floor(-z.hi) as i32 + 1;
    let mut denom = ONE;
    let mut w = z;
    for _ in 0..k {
        denom = denom.mul(w);
        w = w.add(ONE);
    }
    gamma_pos(w).div(denom)
}

/// Generalized binomial coefficient C(n + alpha, n) = prod_{i=1..n} (alpha + i)/i,
/// zero for negative n.
pub fn gen_binomial(n: i64, alpha: Dd) -> Dd {
    if n < 0 {
        return ZERO;
    }
    let mut acc = ONE;
    for i in 1..=n {
        acc = acc.mul(alpha.add(Dd::from(i as f64))).div(Dd::from(i as f64));
    }
    acc
}

/// Bessel J_nu(z) by the defining power series (oracle; nu > -1, moderate z).
pub fn bessel_j(nu: f64, z: f64) -> Dd {
    bessel_series(nu, z, true)
}

/// Modified Bessel I_nu(z) by the defining power series (oracle).
pub fn bessel_i(nu: f64, z: f64) -> Dd {
    bessel_series(nu, z, false)
}

fn bessel_series(nu: f64, z: f64, alternating: bool) -> Dd {
    if z == 0.0 {
        return if nu == 0.0 { ONE } else { ZERO };
    }
    let half = Dd::from(z).scale(0.5);
    let w = half.mul(half);
    let nu_dd = Dd::from(nu);
    // leading (z/2)^nu / Gamma(nu+1)
    let mut term = half.powf(nu_dd).div(gamma_pos(nu_dd.add(ONE)));
    let mut sum = term;
    for l in 1..400 {
        let ld = Dd::from(l as f64);
        term = term.mul(w).div(ld).div(nu_dd.add(ld));
        if alternating {
            term = term.neg();
        }
        sum = sum.add(term);
        if term.abs().hi < 1e-34 * sum.abs().hi + 1e-320 {
            break;
        }
    }
    sum
}

/// Laguerre polynomial L_j^alpha(x) by the explicit binomial sum (oracle).
pub fn laguerre(j: u32, alpha: f64, x: f64) -> Dd {
    let alpha = Dd::from(alpha);
    let mut sum = ZERO;
    let mut xpow = ONE;
    let mut fact = ONE;
    for l in 0..=j {
        if l > 0 {
            xpow = xpow.mul(Dd::from(x));
            fact = fact.mul(Dd::from(l as f64));
        }
        let c = gen_binomial((j - l) as i64, alpha.add(Dd::from(l as f64)));
        let mut t = c.mul(xpow).div(fact);
        if l % 2 == 1 {
            t = t.neg();
        }
        sum = sum.add(t);
    }
    sum
}
