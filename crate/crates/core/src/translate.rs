//! The homomorphic embedding of CP terms into HCP.

use crate::cp::CpTerm;
use crate::hcp::HcpTerm;

/// Breaks CP's compound constructors into HCP primitives: a cut becomes a
/// restriction over a parallel composition, output gains an explicit parallel
/// continuation, and halting becomes a unit output followed by the inert
/// process.
pub fn cp_to_hcp(t: &CpTerm) -> HcpTerm {
    match t {
        CpTerm::Link(x, y) => HcpTerm::Link(x.clone(), y.clone()),
        CpTerm::Cut(x, ty, p, q) => HcpTerm::new_(
            x.clone(),
            ty.clone(),
            HcpTerm::par(cp_to_hcp(p), cp_to_hcp(q)),
        ),
        CpTerm::Send(x, y, p, q) => HcpTerm::out(
            x.clone(),
            y.clone(),
            HcpTerm::par(cp_to_hcp(p), cp_to_hcp(q)),
        ),
        CpTerm::Recv(x, y, p) => HcpTerm::input(x.clone(), y.clone(), cp_to_hcp(p)),
        CpTerm::Halt(x) => HcpTerm::out_unit(x.clone(), HcpTerm::Inert),
        CpTerm::Wait(x, p) => HcpTerm::in_unit(x.clone(), cp_to_hcp(p)),
        CpTerm::Inl(x, p) => HcpTerm::inl(x.clone(), cp_to_hcp(p)),
        CpTerm::Inr(x, p) => HcpTerm::inr(x.clone(), cp_to_hcp(p)),
        CpTerm::Case(x, p, q) => HcpTerm::case(x.clone(), cp_to_hcp(p), cp_to_hcp(q)),
        CpTerm::Absurd(x) => HcpTerm::Absurd(x.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Type;

    #[test]
    fn clauses() {
        assert_eq!(cp_to_hcp(&CpTerm::link("x", "y")), HcpTerm::link("x", "y"));
        assert_eq!(
            cp_to_hcp(&CpTerm::halt("x")),
            HcpTerm::out_unit("x", HcpTerm::Inert)
        );
        let cut = CpTerm::cut(
            "x",
            Type::One,
            CpTerm::halt("x"),
            CpTerm::wait("x", CpTerm::halt("w")),
        );
        assert_eq!(
            cp_to_hcp(&cut),
            HcpTerm::new_(
                "x",
                Type::One,
                HcpTerm::par(
                    HcpTerm::out_unit("x", HcpTerm::Inert),
                    HcpTerm::in_unit("x", HcpTerm::out_unit("w", HcpTerm::Inert)),
                ),
            )
        );
    }
}
