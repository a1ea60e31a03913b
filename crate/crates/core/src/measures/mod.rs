//! Closed-form constants and densities, all in the log domain: log-gamma,
//! the Stiefel volume `D_{n,k}`, the constant `C_{n,k}`, the polar Jacobian
//! density and Gaussian determinant moments.

mod constants;
mod density;
mod gamma;

pub use constants::{bp_constant_c, gaussian_det_moment, stiefel_log_volume, Constants, Variant};
pub use density::{bp_log_density, gaussian_polar_log_density, DensityParams, JacobianDensity};
pub use gamma::log_gamma;
pub(crate) use gamma::log_gamma_unchecked;
