//! Heat kernel of the modular surface SL₂(ℤ)\ℍ based at i, built by spectral
//! synthesis over Maass cusp forms, the constant form and Eisenstein series,
//! and checked against the classical periodization of the hyperbolic-plane
//! heat kernel.
//!
//! The spectral side lives on a discretized parameter space
//! ([`spectral_model::SpectralGrid`]); coefficient vectors on it
//! ([`sobolev::CoeffFn`]) carry the weighted L² Sobolev norms, the generator
//! and the heat semigroup ([`heat`]). Physical-side values come from
//! [`synthesis`], with [`oracle`] as the independent check.

pub mod automorphic;
pub mod checks;
pub mod cli;
pub mod error;
pub mod fundamental_domain;
pub mod heat;
pub mod oracle;
pub mod quadrature;
pub mod sobolev;
pub mod spectral_model;
pub mod synthesis;

pub use automorphic::HPoint;
pub use error::{DataError, GridError, HeatError, SpecialFunctionError};
pub use sobolev::CoeffFn;
pub use spectral_model::{GridConfig, SobolevIndex, SpectralGrid, SpectralKind, SpectralPoint};
