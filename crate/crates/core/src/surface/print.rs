use std::fmt;

use crate::cp::CpTerm;
use crate::hcp::HcpTerm;

impl fmt::Display for CpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CpTerm::Link(x, y) => write!(f, "{x}<->{y}"),
            CpTerm::Cut(x, ty, p, q) => write!(f, "new {x}:{ty} ({p} | {q})"),
            CpTerm::Send(x, y, p, q) => write!(f, "{x}[{y}].({p} | {q})"),
            CpTerm::Recv(x, y, p) => write!(f, "{x}({y}).{p}"),
            CpTerm::Halt(x) => write!(f, "{x}[].0"),
            CpTerm::Wait(x, p) => write!(f, "{x}().{p}"),
            CpTerm::Inl(x, p) => write!(f, "{x}!inl.{p}"),
            CpTerm::Inr(x, p) => write!(f, "{x}!inr.{p}"),
            CpTerm::Case(x, p, q) => write!(f, "{x}?{{inl: {p}; inr: {q}}}"),
            CpTerm::Absurd(x) => write!(f, "{x}?{{}}"),
        }
    }
}

impl fmt::Display for HcpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HcpTerm::Link(x, y) => write!(f, "{x}<->{y}"),
            HcpTerm::Inert => f.write_str("0"),
            HcpTerm::New(x, ty, p) => write!(f, "new {x}:{ty}. {p}"),
            HcpTerm::Par(p, q) => {
                // The right spine prints flat, matching how `(P | Q | R)` parses.
                write!(f, "({p}")?;
                let mut rest = &**q;
                while let HcpTerm::Par(a, b) = rest {
                    write!(f, " | {a}")?;
                    rest = b;
                }
                write!(f, " | {rest})")
            }
            HcpTerm::Out(x, y, p) => write!(f, "{x}[{y}].{p}"),
            HcpTerm::In(x, y, p) => write!(f, "{x}({y}).{p}"),
            HcpTerm::OutUnit(x, p) => write!(f, "{x}[].{p}"),
            HcpTerm::InUnit(x, p) => write!(f, "{x}().{p}"),
            HcpTerm::Inl(x, p) => write!(f, "{x}!inl.{p}"),
            HcpTerm::Inr(x, p) => write!(f, "{x}!inr.{p}"),
            HcpTerm::Case(x, p, q) => write!(f, "{x}?{{inl: {p}; inr: {q}}}"),
            HcpTerm::Absurd(x) => write!(f, "{x}?{{}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::surface::{parse_cp, parse_hcp};

    #[test]
    fn cp_round_trip() {
        for src in [
            "new x:1 (x[].0 | x().w[].0)",
            "x[y].(y<->a | x?{inl: x[].0; inr: x?{}})",
            "x(y).y!inr.new z:(1 + bot) * top (z<->y | w[].0)",
        ] {
            let t = parse_cp(src).unwrap();
            assert_eq!(t.to_string(), src);
            assert_eq!(parse_cp(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn hcp_round_trip() {
        for src in [
            "new x:bot. (x().x[].0 | 0)",
            "((a[].0 | b[].0) | c[].0 | d().0)",
            "x[y].(y[].0 | x[].0)",
        ] {
            let t = parse_hcp(src).unwrap();
            assert_eq!(t.to_string(), src);
        }
    }
}
