//! Symplectic linear algebra: symplectic spectra, Williamson normal forms,
//! Schur-complement shadows of ellipsoids, and inscribed symplectic balls in
//! orthogonal projections of symplectic balls.

pub mod balls;
pub mod error;
pub mod harness;
pub mod matcore;
pub mod projection;
pub mod sampling;
pub mod symplectic;

pub use error::{Error, Result};
pub use matcore::{Matrix, Tolerance};
