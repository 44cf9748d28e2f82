//! Error-bounded evaluation of polygamma functions and numerical
//! verification of complete monotonicity for the family
//! `f_{m,n}(x) = [ψ⁽ᵐ⁾(x)]² + ψ⁽ⁿ⁾(x)` on `(0, ∞)`.
//!
//! Every numeric answer is an [`EvalResult`]: a value with a bound on its
//! absolute error. Verdicts (signs, monotonic directions, inequalities) are
//! only asserted when the relevant quantity clears that bound.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod cm_engine;
pub mod error;
pub mod eval;
pub mod exec;
pub mod grid;
pub mod inequalities;
pub mod kernels;
pub mod polygamma;
pub mod quadrature;

pub use error::{Error, Result};
pub use eval::{ErrorSum, EvalResult};
pub use exec::Execution;
pub use polygamma::{PolyOrder, PrecisionConfig};
