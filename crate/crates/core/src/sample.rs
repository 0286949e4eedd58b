//! Seeded sampling helpers shared by the check suites and tests. The
//! generator is pinned (ChaCha8) so identical seeds give identical streams
//! on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex point with modulus log-uniform in `[r_min, r_max]`, uniform
/// angle. Log-uniform keeps wide ranges like `[1e-1, 1e6]` honest.
pub fn complex_log_uniform(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> Complex64 {
    let r = if r_min == r_max {
        r_min
    } else {
        (rng.gen_range(r_min.ln()..r_max.ln())).exp()
    };
    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::new(r * t.cos(), r * t.sin())
}

pub fn complex_vector(rng: &mut ChaCha8Rng, dim: usize, r_min: f64, r_max: f64) -> Vec<Complex64> {
    (0..dim).map(|_| complex_log_uniform(rng, r_min, r_max)).collect()
}

/// Uniform box sample `[lo, hi]^2` per complex coordinate.
pub fn complex_box(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
        .collect()
}

/// Nonnegative vector with entries uniform in `[0, max]`.
pub fn nonneg_vector(rng: &mut ChaCha8Rng, dim: usize, max: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(0.0..max)).collect()
}

/// Point on the unit torus (all moduli 1).
pub fn torus_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::new(t.cos(), t.sin())
        })
        .collect()
}
