//! The guide's chapters, compiled so that their Rust listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/images.md")]
pub mod images {}

#[doc = include_str!("../../../book/src/degradation.md")]
pub mod degradation {}

#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}

#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
