//! The guide in `book/`, with every snippet run as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/topics_and_kb.md")]
pub mod topics_and_kb {}

#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}

#[doc = include_str!("../../../book/src/communities.md")]
pub mod communities {}

#[doc = include_str!("../../../book/src/bootstrapping.md")]
pub mod bootstrapping {}

#[doc = include_str!("../../../book/src/replay.md")]
pub mod replay {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
