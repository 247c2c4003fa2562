//! Parabolic cylinder functions for complex parameter and argument.
//!
//! `U(a,z)`, `V(a,z)` solve `w'' - (z²/4 + a) w = 0`; `E±(a,x)`, `E`, `E*`
//! and `W` solve `u'' + (x²/4 - a) u = 0`. Every function is evaluated from a
//! Laplace integral in the variable `y = z²` (or `s = x²`), normalized by a
//! reciprocal gamma factor so that it is entire in the parameter. Divergent
//! endpoint integrals are Hadamard finite parts; the integral for `V` sits on
//! a Borel-plane branch cut and is the balanced average of the two
//! neighbouring rays. The left half-plane is reached through closed-form
//! connection matrices.
//!
//! ```
//! use num_complex::Complex64;
//! use pcf_core::{weber_uv, EvalConfig};
//!
//! let cfg = EvalConfig::default();
//! let u = weber_uv::u(Complex64::new(-0.5, 0.0), Complex64::new(2.0, 0.0), &cfg).unwrap();
//! assert!((u.value.re - (-1.0f64).exp()).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod finite_part;
pub mod gamma;
pub mod grid;
pub mod quadrature;
pub mod types;
pub mod verify;
pub mod weber_e;
pub mod weber_uv;

pub use error::{PcfError, Result};
pub use types::{EvalConfig, EvalResult, PathFlag, PathFlags};

pub use num_complex::Complex64;
