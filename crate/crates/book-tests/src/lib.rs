//! Compiles and runs every Rust snippet of the guide in `book/` as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}

#[doc = include_str!("../../../book/src/receivers.md")]
pub mod receivers {}

#[doc = include_str!("../../../book/src/fuzzy.md")]
pub mod fuzzy {}

#[doc = include_str!("../../../book/src/rl.md")]
pub mod rl {}

#[doc = include_str!("../../../book/src/training.md")]
pub mod training {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
