//! Chapters of the guide in `book/`, compiled here so that `cargo test --doc`
//! runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/q-arithmetic.md")]
pub mod q_arithmetic {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}
#[doc = include_str!("../../../book/src/iterated.md")]
pub mod iterated {}
#[doc = include_str!("../../../book/src/determinants.md")]
pub mod determinants {}
#[doc = include_str!("../../../book/src/zeros.md")]
pub mod zeros {}
#[doc = include_str!("../../../book/src/auditing.md")]
pub mod auditing {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
