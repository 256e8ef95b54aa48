//! Partial integrals of products of Jacobi polynomials.
//!
//! The integral `∫_x^1 P_n(t) P_m(t) w(t) dt` with `w(t) = (1-t)^α (1+t)^β` has a
//! closed form in terms of the augmented Wronskian
//! `φ_n(m; x) = P_m(x) P_n'(x) - P_n(x) P_m'(x)`:
//!
//! ```text
//! ∫_x^1 P_n P_m w dt = w(x) (1 - x²) φ_n(m; x) / (n(n+α+β+1) - m(m+α+β+1))
//! ```
//!
//! This crate evaluates that closed form, checks it against an endpoint-regularised
//! adaptive Gauss–Legendre oracle, and provides the leading-order large-`n`
//! asymptotics of both the polynomials and the partial integrals.
//!
//! ```
//! use jacobi_wronskian::{integrals, JacobiParams};
//!
//! let legendre = JacobiParams::new(0.0, 0.0)?;
//! let closed = integrals::partial_integral_jacobi_closed(legendre, 2, 0, 0.5)?;
//! assert!((closed.value - 3.0 / 16.0).abs() < 1e-15);
//! # Ok::<(), jacobi_wronskian::Error>(())
//! ```

mod compensated;
mod error;

pub mod asymptotics;
pub mod integrals;
pub mod polyeval;
pub mod quadrature;

pub use error::{Error, Result};
pub use polyeval::{JacobiParams, Recurrence, WronskianValue};
