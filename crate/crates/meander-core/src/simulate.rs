//! Path simulation for cross-validation of the densities.
//!
//! Two schemes:
//!
//! - `SdeEuler` (`kappa = 0` only): Euler-Maruyama for the non-colliding
//!   Bessel system
//!   `dX_i = dB_i + [ (2nu+1)/(2X_i) + sum_{j!=i} (1/(X_i-X_j) + 1/(X_i+X_j)) ] dt`,
//!   with the `1/x` drift handled by an implicit drift-split step (the
//!   update solves its quadratic exactly, keeping paths positive),
//!   reflection at the origin for `nu = -1/2`, and collision-rejection
//!   substepping.
//! - `Exact1Particle` (N = 1, any admissible `kappa`): a Markov chain
//!   through the exact meander transition kernel, sampling each step by
//!   numeric inverse-CDF.
//!
//! Every path draws from its own ChaCha stream derived from
//! `(seed, path index)`, so results do not depend on scheduling or on how
//! paths are partitioned across workers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::fx;
use crate::meander::{meander_density, ModelParams};
use crate::quad;

/// Simulation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SdeEuler,
    Exact1Particle,
}

/// One simulated path: states at `times[k]`, each a sorted N-vector.
#[derive(Debug, Clone)]
pub struct SamplePath {
    pub path_id: u64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

fn path_rng(seed: u64, path_id: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(path_id.wrapping_add(1));
    rng
}

fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn normal_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // Box-Muller on open-interval uniforms
    let u1 = (uniform(rng)).max(1e-300);
    let u2 = uniform(rng);
    let r = fx::sqrt(-2.0 * fx::ln(u1));
    let a = core::f64::consts::TAU * u2;
    (r * fx::cos(a), r * fx::sin(a))
}

/// Simulate `n_paths` paths observed at `n_steps` equal time steps up to
/// the horizon. Identical `(seed, path range)` inputs give identical
/// output regardless of partitioning.
pub fn simulate_paths(
    p: &ModelParams,
    scheme: Scheme,
    n_paths: u64,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<SamplePath>> {
    simulate_path_range(p, scheme, 0, n_paths, n_steps, seed)
}

/// The work behind [`simulate_paths`] for a contiguous range of path ids;
/// workers may split ranges freely.
pub fn simulate_path_range(
    p: &ModelParams,
    scheme: Scheme,
    first_path: u64,
    count: u64,
    n_steps: usize,
    seed: u64,
) -> Result<Vec<SamplePath>> {
    if n_steps == 0 {
        return Err(Error::Domain("need at least one step"));
    }
    match scheme {
        Scheme::SdeEuler => {
            if p.kappa != 0.0 {
                return Err(Error::Unsupported(
                    "the Euler scheme covers the kappa = 0 system only",
                ));
            }
            (first_path..first_path + count)
                .map(|id| euler_path(p, id, n_steps, seed))
                .collect()
        }
        Scheme::Exact1Particle => {
            if p.n_particles != 1 {
                return Err(Error::Unsupported("exact sampling is single-particle"));
            }
            let mut cache: BTreeMap<(usize, u64), InverseCdf> = BTreeMap::new();
            (first_path..first_path + count)
                .map(|id| exact_path(p, id, n_steps, seed, &mut cache))
                .collect()
        }
    }
}

const EULER_SUBSTEPS_PER_OBS: usize = 64;
const MAX_HALVINGS: u32 = 22;

fn euler_path(p: &ModelParams, path_id: u64, n_steps: usize, seed: u64) -> Result<SamplePath> {
    let n = p.n_particles;
    let mut rng = path_rng(seed, path_id);
    let dt_obs = p.horizon / n_steps as f64;
    let mut x = alloc::vec![0.0_f64; n];
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(x.clone());
    let mut started = false;
    for step in 0..n_steps {
        let sub = EULER_SUBSTEPS_PER_OBS;
        let h = dt_obs / sub as f64;
        for _ in 0..sub {
            if !started {
                // every particle leaves the origin by one exact-in-law
                // single-particle move, then gets ordered
                for xi in x.iter_mut() {
                    *xi = bessel_step(p.nu, *xi, h, &mut rng);
                }
                x.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                started = true;
                continue;
            }
            interacting_step(p.nu, &mut x, h, &mut rng, 0)?;
        }
        times.push(dt_obs * (step + 1) as f64);
        states.push(x.clone());
    }
    Ok(SamplePath {
        path_id,
        times,
        states,
    })
}

/// One implicit drift-split move of a lone Bessel coordinate.
fn bessel_step(nu: f64, x: f64, h: f64, rng: &mut ChaCha12Rng) -> f64 {
    let (g, _) = normal_pair(rng);
    let dw = g * fx::sqrt(h);
    if nu <= -0.5 {
        // reflecting wall; the radial drift vanishes at nu = -1/2
        let drift = if nu > -0.5 && x > 0.0 {
            (2.0 * nu + 1.0) / (2.0 * x) * h
        } else {
            0.0
        };
        return fx::abs(x + dw + drift);
    }
    // x' solves x' = x + dw + (2nu+1) h / (2 x'), the positive root
    let b = x + dw;
    0.5 * (b + fx::sqrt(b * b + 2.0 * (2.0 * nu + 1.0) * h))
}

fn interacting_step(
    nu: f64,
    x: &mut [f64],
    h: f64,
    rng: &mut ChaCha12Rng,
    depth: u32,
) -> Result<()> {
    let n = x.len();
    let mut gs = Vec::with_capacity(n);
    for _ in 0..n {
        let (g, _) = normal_pair(rng);
        gs.push(g);
    }
    let attempt = |h: f64, gs: &[f64], x: &[f64]| -> Vec<f64> {
        let sqh = fx::sqrt(h);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut drift = 0.0;
            for j in 0..n {
                if j != i {
                    drift += 1.0 / (x[i] - x[j]) + 1.0 / (x[i] + x[j]);
                }
            }
            let b = x[i] + gs[i] * sqh + drift * h;
            let next = if nu > -0.5 {
                0.5 * (b + fx::sqrt(b * b + 2.0 * (2.0 * nu + 1.0) * h))
            } else {
                fx::abs(b)
            };
            out.push(next);
        }
        out
    };
    let proposal = attempt(h, &gs, x);
    let ordered = proposal.windows(2).all(|w| w[0] < w[1]);
    if ordered {
        x.copy_from_slice(&proposal);
        return Ok(());
    }
    if depth >= MAX_HALVINGS {
        return Err(Error::Convergence(
            "particle ordering kept inverting at the minimum substep",
        ));
    }
    // redo this move as two half steps with fresh noise
    interacting_step(nu, x, h / 2.0, rng, depth + 1)?;
    interacting_step(nu, x, h / 2.0, rng, depth + 1)
}

/// Tabulated inverse CDF of one transition kernel.
struct InverseCdf {
    ys: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdf {
    fn build<F: Fn(f64) -> f64>(density: F) -> Result<InverseCdf> {
        // find an upper bound capturing all but ~1e-12 of the mass
        let mut hi = 1.0;
        let mut total;
        loop {
            total = quad::adaptive(&density, 0.0, hi, 1e-11, 1e-10)?;
            let tail = quad::adaptive(&density, hi, 2.0 * hi, 1e-12, 1e-10)?;
            if tail < 1e-12 && total > 0.5 {
                break;
            }
            hi *= 2.0;
            if hi > 1e9 {
                return Err(Error::Decay("transition density has no usable bound"));
            }
        }
        total += quad::adaptive(&density, hi, 2.0 * hi, 1e-12, 1e-10)?;
        let cells = 2048;
        let mut ys = Vec::with_capacity(cells + 1);
        let mut cdf = Vec::with_capacity(cells + 1);
        ys.push(0.0);
        cdf.push(0.0);
        let mut acc = 0.0;
        let step = hi / cells as f64;
        for c in 0..cells {
            let a = step * c as f64;
            let b = a + step;
            // Simpson on one cell; the density is smooth
            let s = (density(a) + 4.0 * density(0.5 * (a + b)) + density(b)) * step / 6.0;
            acc += s;
            ys.push(b);
            cdf.push((acc / total).min(1.0));
        }
        Ok(InverseCdf { ys, cdf })
    }

    fn sample(&self, u: f64) -> f64 {
        // binary search + linear interpolation
        let mut lo = 0;
        let mut hi = self.cdf.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf[mid] < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (c0, c1) = (self.cdf[lo], self.cdf[hi]);
        if c1 <= c0 {
            return self.ys[hi];
        }
        let t = (u - c0) / (c1 - c0);
        self.ys[lo] + t * (self.ys[hi] - self.ys[lo])
    }
}

fn exact_path(
    p: &ModelParams,
    path_id: u64,
    n_steps: usize,
    seed: u64,
    cache: &mut BTreeMap<(usize, u64), InverseCdf>,
) -> Result<SamplePath> {
    let mut rng = path_rng(seed, path_id);
    let dt = p.horizon / n_steps as f64;
    let mut x = 0.0_f64;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(alloc::vec![0.0]);
    for step in 0..n_steps {
        let s = dt * step as f64;
        let t = dt * (step + 1) as f64;
        let key = (step, x.to_bits());
        if !cache.contains_key(&key) {
            let (pp, xs) = (p.clone(), x);
            let sampler = InverseCdf::build(move |y| {
                if y <= 0.0 {
                    return 0.0;
                }
                meander_density(&pp, s, xs, t, y).unwrap_or(0.0)
            })?;
            cache.insert(key, sampler);
        }
        let u = uniform(&mut rng);
        x = cache.get(&key).expect("just inserted").sample(u);
        times.push(t);
        states.push(alloc::vec![x]);
    }
    Ok(SamplePath {
        path_id,
        times,
        states,
    })
}

/// Kolmogorov-Smirnov distance between a sample and a reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max(fx::abs((i + 1) as f64 / n - f));
        d = d.max(fx::abs(i as f64 / n - f));
    }
    d
}
