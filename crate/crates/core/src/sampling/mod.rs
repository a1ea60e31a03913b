//! Reproducible random streams and the samplers built on them: Ginibre
//! matrices, Haar frames, positive polar parts and symmetric Gaussian
//! matrices.

mod rng;
mod samplers;

pub use rng::{splitmix64_mix, stream_key, RngStream};
pub use samplers::{
    sample_gauss_symmetric, sample_ginibre, sample_ginibre_into, sample_polar, sample_posdef_part,
    sample_stiefel, MAX_RETRIES,
};
