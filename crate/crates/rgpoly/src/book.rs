//! The user guide's code listings, compiled and run by `cargo test --doc`.
//!
//! mdBook does not execute Rust snippets itself, so each chapter is pulled
//! in as a doc comment here; a listing that drifts from the library breaks
//! the build. One module per chapter keeps failures attributable.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/arithmetic.md")]
pub mod arithmetic {}

#[doc = include_str!("../../../book/src/recursion.md")]
pub mod recursion {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/enumeration.md")]
pub mod enumeration {}

#[doc = include_str!("../../../book/src/crosschecks.md")]
pub mod crosschecks {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
