//! Symplectic Wigner distribution in the linear canonical transform domain
//! (SWDL), its classical special cases, uncertainty-product machinery and a
//! Radon-transform detector for linear frequency-modulated signals.

pub mod axis;
pub mod detect;
pub mod error;
pub mod interp;
pub mod lct;
pub mod moments;
pub mod quadrature;
pub mod signals;
pub mod symplectic;
pub mod tfd;

pub use axis::Axis;
pub use detect::{Comparison, RadonMap, RateAmplitude};
pub use error::{Error, Result};
pub use lct::{kernel, lct_fast, lct_inverse, lct_quadrature, FastLct, Kernel, LctResult};
pub use moments::{BoundReport, MomentReport, SignalClass};
pub use num_complex::Complex64;
pub use signals::{sample, ChirpForm, GaussianChirpParams, SampledSignal, Signal};
pub use symplectic::{Mat2, SymplecticMatrix};
pub use tfd::{Distribution, Method, TFGrid};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
