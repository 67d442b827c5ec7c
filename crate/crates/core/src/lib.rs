//! An ontology-backed recommender for research papers.
//!
//! The pieces, bottom-up:
//!
//! - [`topic`]: backslash-separated topic paths and the topic forest.
//! - [`kb`]: a typed knowledge base of people, publications, projects and
//!   events, loaded from JSON lines.
//! - [`classify`]: Porter-stemmed term vectors and a boosted IBk classifier.
//! - [`profile`]: time-decayed interest profiles from browsing logs.
//! - [`recommend`]: top-topic recommendations from a classified paper database.
//! - [`cop`]: communities of practice by spreading activation over the
//!   knowledge base.
//! - [`bootstrap`]: cold-start profiles for new systems and new users.
//! - [`harness`]: weekly log replay and precision / error-rate metrics.
//!
//! ```
//! use ontorec::topic::TopicPath;
//!
//! let t: TopicPath = "AI \\ Agents".parse().unwrap();
//! assert_eq!(t.to_string(), "AI\\Agents");
//! assert_eq!(t.prefix().unwrap().to_string(), "AI");
//! ```

pub mod bootstrap;
pub mod classify;
pub mod cop;
mod error;
pub mod harness;
pub mod kb;
pub mod profile;
pub mod recommend;
pub mod synthetic;
pub mod topic;

pub use error::{Error, ErrorClass, Result};
pub use kb::{load_kb, KnowledgeBase};
pub use profile::{compute_profile, InterestProfile};
pub use topic::{TopicForest, TopicPath};
