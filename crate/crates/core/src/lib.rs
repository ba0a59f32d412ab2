//! Forward spectral analysis of Sturm-Liouville operators whose equation
//! involves the solution's values at fixed interior points.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, which is what the tolerances are sized for.

pub mod charfn;
pub mod cli;
pub mod config;
pub mod contour;
pub mod entire;
pub mod error;
pub mod instability;
pub mod linalg;
pub mod model;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod spectrum;

pub use charfn::{char_closed, char_det, char_green, ghat, ghat_at_zero, Method};
pub use contour::{count_zeros_disk, ZeroCount};
pub use entire::{cartwright_product, effective_support_width, function_type, indicator, zero_density};
pub use error::{Error, Result};
pub use instability::{
    corollary_bound, l2_norm_real_axis, parseval_bound, plancherel_polya_check, sine_type_interpolate, theorem32_bound,
};
pub use model::{fourier_coefficients, paley_wiener_transform, potential_from_samples, Interpolation, Profile};
pub use scalar::Real;
pub use spectrum::{match_spectra, real_eigenvalues, shooting_eigenvalues, SpectrumMethod};

pub type C64 = num_complex::Complex<f64>;
pub type Potential = model::Potential<f64>;
pub type ProblemConfig = model::ProblemConfig<f64>;
pub type FourierCoefficients = model::FourierCoefficients<f64>;
pub type CharacteristicFunction = charfn::CharacteristicFunction<f64>;
pub type GhatFunction = charfn::GhatFunction<f64>;
pub type Spectrum = spectrum::Spectrum<f64>;
pub type ZeroSet = entire::ZeroSet<f64>;
pub type BoundReport = instability::BoundReport<f64>;
pub type CorollaryReport = instability::CorollaryReport<f64>;
