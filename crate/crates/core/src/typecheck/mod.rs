//! Typecheckers for CP (single sequents) and HCP (hyper-environments).

mod cp;
mod derivation;
mod error;
mod hcp;

pub use cp::{check_cp, revalidate_cp};
pub use derivation::{CpDerivation, HcpDerivation, Rule, Tree};
pub use error::{TypeError, TypeErrorKind};
pub use hcp::{
    check_hcp, check_hcp_all, check_hcp_at, check_hcp_with, revalidate_hcp, CheckOptions,
};

#[cfg(test)]
mod tests;
