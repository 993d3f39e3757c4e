//! Exact q-Appell, 2-iterated q-Appell and mixed q-special polynomials.
//!
//! Every polynomial is built twice, once from q-exponential series and once
//! from a determinant, over exact rationals for a fixed `0 < q < 1`. Zeros are
//! located numerically and classified, and the published numeric tables for
//! `q = 1/2` can be audited with [`verify`].
//!
//! ```
//! use qappell::{families::{iterate2, Builtin}, qcore::QContext};
//!
//! let ctx = QContext::parse("1/2").unwrap();
//! let b = Builtin::Bernoulli.into();
//! let p = iterate2(&b, &b, &ctx, 4, 3).unwrap();
//! assert_eq!(p.to_string(), "x^3 - 7/3x^2 + 3/2x - 8/45");
//! ```

#[cfg(doctest)]
mod book;
pub mod cli;
pub mod determinant;
pub mod error;
pub mod families;
pub mod poly;
pub mod published;
pub mod qcore;
pub mod qseries;
pub mod rat;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use poly::QPoly;
pub use qcore::QContext;
pub use qseries::ESeq;
pub use rat::Rat;
