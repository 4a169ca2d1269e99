//! The user guide from `book/`, compiled here so its examples run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/potentials.md")]
pub mod potentials {}
#[doc = include_str!("../../../book/src/jost.md")]
pub mod jost {}
#[doc = include_str!("../../../book/src/determinant.md")]
pub mod determinant {}
#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}
#[doc = include_str!("../../../book/src/traces.md")]
pub mod traces {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
