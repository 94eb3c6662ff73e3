//! Executable metatheory for Classical Processes (CP) and Hypersequent
//! Classical Processes (HCP).
//!
//! The crate parses and prints both dialects, typechecks them into explicit
//! derivation trees, decides structural congruence, reduces processes, and
//! relates the two calculi: the embedding of CP into HCP, operational
//! correspondence in both directions, disentanglement of HCP derivations
//! into CP derivations, and internalisation of (hyper-)environments as
//! single formulas. The [`harness`] module generates well-typed processes
//! and checks the metatheory on them.

pub mod bridge;
pub mod congruence;
pub mod cp;
pub mod env;
pub mod harness;
pub mod hcp;
pub mod name;
pub mod reduction;
pub mod surface;
pub mod translate;
pub mod typecheck;
pub mod types;

pub use cp::CpTerm;
pub use env::{Env, HyperEnv};
pub use hcp::HcpTerm;
pub use name::Name;
pub use translate::cp_to_hcp;
pub use types::Type;
