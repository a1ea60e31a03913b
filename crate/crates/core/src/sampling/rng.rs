use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// SplitMix64 output finalizer; a bijection on `u64`.
#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit key for stream `stream` of master seed `seed`. For a fixed seed the
/// map `stream → key` is injective, so distinct streams never share a state.
pub fn stream_key(seed: u64, stream: u64) -> u64 {
    splitmix64_mix(seed ^ splitmix64_mix(stream.wrapping_add(GOLDEN_GAMMA)))
}

/// Seeded pseudorandom stream: xoshiro256++ whose 256-bit state is expanded
/// by SplitMix64 from [`stream_key`]`(seed, stream)`.
///
/// Uniforms are `(next_u64 >> 11) · 2⁻⁵³` and normals come from the Marsaglia
/// polar method, returning the two variates of each accepted pair in order.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: Xoshiro256PlusPlus,
    spare_normal: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            seed,
            stream,
            inner: Xoshiro256PlusPlus::seed_from_u64(stream_key(seed, stream)),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One standard normal variate.
    #[inline]
    pub fn std_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    pub fn fill_std_normal(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.std_normal();
        }
    }
}
