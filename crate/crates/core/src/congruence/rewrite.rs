use crate::cp::CpTerm;
use crate::hcp::HcpTerm;

/// Every term reachable from `t` by one congruence axiom applied in either
/// direction at any position.
pub fn rewrites_cp(t: &CpTerm) -> Vec<CpTerm> {
    let mut out = root_cp(t);
    let b = Box::new;
    match t {
        CpTerm::Link(..) | CpTerm::Halt(_) | CpTerm::Absurd(_) => {}
        CpTerm::Cut(x, a, p, q) => {
            out.extend(
                rewrites_cp(p)
                    .into_iter()
                    .map(|p2| CpTerm::Cut(x.clone(), a.clone(), b(p2), q.clone())),
            );
            out.extend(
                rewrites_cp(q)
                    .into_iter()
                    .map(|q2| CpTerm::Cut(x.clone(), a.clone(), p.clone(), b(q2))),
            );
        }
        CpTerm::Send(x, y, p, q) => {
            out.extend(
                rewrites_cp(p)
                    .into_iter()
                    .map(|p2| CpTerm::Send(x.clone(), y.clone(), b(p2), q.clone())),
            );
            out.extend(
                rewrites_cp(q)
                    .into_iter()
                    .map(|q2| CpTerm::Send(x.clone(), y.clone(), p.clone(), b(q2))),
            );
        }
        CpTerm::Recv(x, y, p) => {
            out.extend(
                rewrites_cp(p)
                    .into_iter()
                    .map(|p2| CpTerm::Recv(x.clone(), y.clone(), b(p2))),
            );
        }
        CpTerm::Wait(x, p) => out.extend(
            rewrites_cp(p)
                .into_iter()
                .map(|p2| CpTerm::Wait(x.clone(), b(p2))),
        ),
        CpTerm::Inl(x, p) => out.extend(
            rewrites_cp(p)
                .into_iter()
                .map(|p2| CpTerm::Inl(x.clone(), b(p2))),
        ),
        CpTerm::Inr(x, p) => out.extend(
            rewrites_cp(p)
                .into_iter()
                .map(|p2| CpTerm::Inr(x.clone(), b(p2))),
        ),
        CpTerm::Case(x, p, q) => {
            out.extend(
                rewrites_cp(p)
                    .into_iter()
                    .map(|p2| CpTerm::Case(x.clone(), b(p2), q.clone())),
            );
            out.extend(
                rewrites_cp(q)
                    .into_iter()
                    .map(|q2| CpTerm::Case(x.clone(), p.clone(), b(q2))),
            );
        }
    }
    out
}

fn root_cp(t: &CpTerm) -> Vec<CpTerm> {
    let mut out = Vec::new();
    match t {
        CpTerm::Link(x, y) => out.push(CpTerm::link(y.clone(), x.clone())),
        CpTerm::Cut(x, a, p, q) => {
            out.push(CpTerm::cut(
                x.clone(),
                a.dual(),
                (**q).clone(),
                (**p).clone(),
            ));
            // new x (P | new y (Q | R))  ≡  new y (new x (P | Q) | R)
            // An endpoint that no side mentions is held by a `⊤`, which must
            // stay on the side the endpoint moves to.
            if let CpTerm::Cut(y, bty, q1, r) = &**q {
                if x != y && !r.is_free(x) && !p.is_free(y) && (q1.is_free(x) || q1.absorbs()) {
                    let inner = CpTerm::cut(x.clone(), a.clone(), (**p).clone(), (**q1).clone());
                    out.push(CpTerm::cut(y.clone(), bty.clone(), inner, (**r).clone()));
                }
            }
            if let CpTerm::Cut(y, bty, p1, q1) = &**p {
                // Here the outer cut is on `x` = the right-hand form's `y`.
                if x != y && !q.is_free(y) && !p1.is_free(x) && (q1.is_free(x) || q1.absorbs()) {
                    let inner = CpTerm::cut(x.clone(), a.clone(), (**q1).clone(), (**q).clone());
                    out.push(CpTerm::cut(y.clone(), bty.clone(), (**p1).clone(), inner));
                }
            }
        }
        _ => {}
    }
    out
}

pub fn rewrites_hcp(t: &HcpTerm) -> Vec<HcpTerm> {
    let mut out = root_hcp(t);
    let b = Box::new;
    match t {
        HcpTerm::Link(..) | HcpTerm::Inert | HcpTerm::Absurd(_) => {}
        HcpTerm::New(x, a, p) => {
            out.extend(
                rewrites_hcp(p)
                    .into_iter()
                    .map(|p2| HcpTerm::New(x.clone(), a.clone(), b(p2))),
            );
        }
        HcpTerm::Par(p, q) => {
            out.extend(
                rewrites_hcp(p)
                    .into_iter()
                    .map(|p2| HcpTerm::Par(b(p2), q.clone())),
            );
            out.extend(
                rewrites_hcp(q)
                    .into_iter()
                    .map(|q2| HcpTerm::Par(p.clone(), b(q2))),
            );
        }
        HcpTerm::Out(x, y, p) => {
            out.extend(
                rewrites_hcp(p)
                    .into_iter()
                    .map(|p2| HcpTerm::Out(x.clone(), y.clone(), b(p2))),
            );
        }
        HcpTerm::In(x, y, p) => {
            out.extend(
                rewrites_hcp(p)
                    .into_iter()
                    .map(|p2| HcpTerm::In(x.clone(), y.clone(), b(p2))),
            );
        }
        HcpTerm::OutUnit(x, p) => out.extend(
            rewrites_hcp(p)
                .into_iter()
                .map(|p2| HcpTerm::OutUnit(x.clone(), b(p2))),
        ),
        HcpTerm::InUnit(x, p) => out.extend(
            rewrites_hcp(p)
                .into_iter()
                .map(|p2| HcpTerm::InUnit(x.clone(), b(p2))),
        ),
        HcpTerm::Inl(x, p) => out.extend(
            rewrites_hcp(p)
                .into_iter()
                .map(|p2| HcpTerm::Inl(x.clone(), b(p2))),
        ),
        HcpTerm::Inr(x, p) => out.extend(
            rewrites_hcp(p)
                .into_iter()
                .map(|p2| HcpTerm::Inr(x.clone(), b(p2))),
        ),
        HcpTerm::Case(x, p, q) => {
            out.extend(
                rewrites_hcp(p)
                    .into_iter()
                    .map(|p2| HcpTerm::Case(x.clone(), b(p2), q.clone())),
            );
            out.extend(
                rewrites_hcp(q)
                    .into_iter()
                    .map(|q2| HcpTerm::Case(x.clone(), p.clone(), b(q2))),
            );
        }
    }
    out
}

/// Root rewrites. The unit law is only applied in the removing direction,
/// which keeps the set finite.
fn root_hcp(t: &HcpTerm) -> Vec<HcpTerm> {
    let mut out = Vec::new();
    match t {
        HcpTerm::Link(x, y) => out.push(HcpTerm::link(y.clone(), x.clone())),
        HcpTerm::New(x, a, p) => {
            out.push(HcpTerm::new_(x.clone(), a.dual(), (**p).clone()));
            if let HcpTerm::New(y, bty, q) = &**p {
                if x != y {
                    out.push(HcpTerm::new_(
                        y.clone(),
                        bty.clone(),
                        HcpTerm::new_(x.clone(), a.clone(), (**q).clone()),
                    ));
                }
            }
            // A side that may absorb an endpoint of `x` keeps it in scope.
            if let HcpTerm::Par(l, r) = &**p {
                if !l.is_free(x) && !l.absorbs() {
                    out.push(HcpTerm::par(
                        (**l).clone(),
                        HcpTerm::new_(x.clone(), a.clone(), (**r).clone()),
                    ));
                }
                if !r.is_free(x) && !r.absorbs() {
                    out.push(HcpTerm::par(
                        HcpTerm::new_(x.clone(), a.clone(), (**l).clone()),
                        (**r).clone(),
                    ));
                }
            }
        }
        HcpTerm::Par(p, q) => {
            out.push(HcpTerm::par((**q).clone(), (**p).clone()));
            if **q == HcpTerm::Inert {
                out.push((**p).clone());
            }
            if **p == HcpTerm::Inert {
                out.push((**q).clone());
            }
            if let HcpTerm::Par(q1, r) = &**q {
                out.push(HcpTerm::par(
                    HcpTerm::par((**p).clone(), (**q1).clone()),
                    (**r).clone(),
                ));
            }
            if let HcpTerm::Par(p1, q1) = &**p {
                out.push(HcpTerm::par(
                    (**p1).clone(),
                    HcpTerm::par((**q1).clone(), (**q).clone()),
                ));
            }
            // Scope extrusion, right to left.
            if let HcpTerm::New(x, a, r) = &**q {
                let (x2, r2) = apart(x, r, p);
                out.push(HcpTerm::new_(
                    x2,
                    a.clone(),
                    HcpTerm::par((**p).clone(), r2),
                ));
            }
            if let HcpTerm::New(x, a, l) = &**p {
                let (x2, l2) = apart(x, l, q);
                out.push(HcpTerm::new_(
                    x2,
                    a.clone(),
                    HcpTerm::par(l2, (**q).clone()),
                ));
            }
        }
        _ => {}
    }
    out
}

/// Renames the binder `x` of `body` away from the free names of `other`.
fn apart(x: &crate::name::Name, body: &HcpTerm, other: &HcpTerm) -> (crate::name::Name, HcpTerm) {
    if !other.is_free(x) {
        return (x.clone(), body.clone());
    }
    let x2 = x.fresh(|n| other.is_free(n) || body.is_free(n));
    (x2.clone(), body.substitute(&x2, x))
}
