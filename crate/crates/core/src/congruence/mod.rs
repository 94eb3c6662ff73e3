//! Structural congruence: prenex forms, a decision procedure for `≡`, and
//! single-step axiom rewriting.
//!
//! CP axioms: link symmetry, `ν`-commutativity (which flips the cut
//! annotation, since the left branch holds the annotated endpoint) and cut
//! associativity. HCP axioms: link symmetry, the monoid laws of `|` with
//! unit `0`, commutativity of restrictions and scope extrusion. Both also
//! identify `new x:A` with `new x:~A` in HCP, because a restriction binds
//! both endpoints and the annotation only fixes which is which.

mod equiv;
mod prenex;
mod rewrite;

pub use equiv::{equiv_cp, equiv_hcp};
pub use prenex::{prenex_cp, prenex_hcp, CpBinder, CpPrenex, HcpBinder, HcpPrenex};
pub use rewrite::{rewrites_cp, rewrites_hcp};

pub(crate) use prenex::neg_name;
