//! Numerical calculus checks built from first principles.
//!
//! * [`legendre`]: Legendre polynomials by Gram–Schmidt and by recurrence, and their roots.
//! * [`quadrature`]: Gauss–Legendre rules, 1-D integration, tensor-product boxes.
//! * [`diffcheck`]: finite differences and verification of hand-derived
//!   derivatives and antiderivatives.
//! * [`solvers`]: Newton and secant solvers for `f(x) = c`.
//! * [`cordic`]: sine and cosine by shift-and-add rotations.
//! * [`expr`]: the expression language used to enter functions.
//! * [`tables`]: text files of cached rules.
//!
//! ```
//! use calcverify::quadrature::integrate_1d;
//!
//! let v = integrate_1d(|x| x * x, 0.0, 2.0, 2).unwrap();
//! assert!((v - 8.0 / 3.0).abs() < 1e-14);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cordic;
mod dd;
pub mod diffcheck;
pub mod error;
pub mod expr;
pub mod legendre;
pub mod numfmt;
pub mod quadrature;
pub mod solvers;
pub mod tables;

pub use cordic::{cordic_sincos, cordic_table, CordicTable, SinCos};
pub use diffcheck::{AntiderivativeReport, DerivativeReport, Verdict};
pub use error::{Error, Result};
pub use expr::{parse, EvalError, Expr, ParseError};
pub use legendre::{Polynomial, RootSet};
pub use quadrature::{gauss_rule, integrate_1d, integrate_box, IntegrationBox, QuadratureRule};
pub use solvers::{SolveOptions, SolveResult};
pub use tables::RuleTable;
