//! Seeded sampling helpers shared by the planted generators and the
//! randomized oracle-agreement suites. All draws are defined directly on the
//! ChaCha8 word stream so results are bit-identical across platforms.

pub use rand_chacha::rand_core::{RngCore, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// Uniform draw in [0, 1) using 53 random bits.
pub fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// One standard normal draw per call, consuming exactly two uniforms
/// (Box–Muller; the second output is discarded, never cached).
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = loop {
        let u = uniform01(rng);
        if u > 0.0 {
            break u;
        }
    };
    let u2 = uniform01(rng);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Poisson draw by Knuth's product-of-uniforms method; fine for small rates.
pub fn poisson(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    let threshold = (-rate).exp();
    let mut k = 0u64;
    let mut product = 1.0;
    loop {
        product *= uniform01(rng);
        if product <= threshold {
            return k as f64;
        }
        k += 1;
    }
}
