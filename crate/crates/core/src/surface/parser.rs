use super::lexer::{tokenize, Tok};
use super::{ParseError, Pos};
use crate::cp::CpTerm;
use crate::env::Env;
use crate::hcp::HcpTerm;
use crate::name::Name;
use crate::types::Type;

pub(crate) struct Parser {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(src)?,
            idx: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.idx].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    pub(crate) fn unexpected(&self, what: &str) -> ParseError {
        ParseError::syntax(
            self.pos(),
            format!("{what}, found {}", self.peek().describe()),
        )
    }

    pub(crate) fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::new(s))
            }
            _ => Err(self.unexpected("expected a channel name")),
        }
    }

    pub(crate) fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }

    // Types: `~` binds tightest, then {*, par}, then {+, &}; binary operators
    // associate to the right and may not be mixed at one level.

    pub(crate) fn ty(&mut self) -> PResult<Type> {
        self.additive().map(|(t, _)| t)
    }

    fn additive(&mut self) -> PResult<(Type, Option<Tok>)> {
        let (left, _) = self.multiplicative()?;
        let op = match self.peek() {
            Tok::Plus | Tok::Amp => self.bump(),
            _ => return Ok((left, None)),
        };
        let pos = self.pos();
        let (right, right_op) = self.additive()?;
        if right_op.as_ref().is_some_and(|r| *r != op) {
            return Err(ParseError::syntax(
                pos,
                "cannot mix `+` and `&` without parentheses",
            ));
        }
        let ty = if op == Tok::Plus {
            Type::plus(left, right)
        } else {
            Type::with(left, right)
        };
        Ok((ty, Some(op)))
    }

    fn multiplicative(&mut self) -> PResult<(Type, Option<Tok>)> {
        let left = self.unary()?;
        let op = match self.peek() {
            Tok::Star | Tok::ParKw => self.bump(),
            _ => return Ok((left, None)),
        };
        let pos = self.pos();
        let (right, right_op) = self.multiplicative()?;
        if right_op.as_ref().is_some_and(|r| *r != op) {
            return Err(ParseError::syntax(
                pos,
                "cannot mix `*` and `par` without parentheses",
            ));
        }
        let ty = if op == Tok::Star {
            Type::tensor(left, right)
        } else {
            Type::par(left, right)
        };
        Ok((ty, Some(op)))
    }

    fn unary(&mut self) -> PResult<Type> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(self.unary()?.dual())
            }
            Tok::One => {
                self.bump();
                Ok(Type::One)
            }
            Tok::Zero => {
                self.bump();
                Ok(Type::Zero)
            }
            Tok::BotKw => {
                self.bump();
                Ok(Type::Bot)
            }
            Tok::TopKw => {
                self.bump();
                Ok(Type::Top)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("expected a type")),
        }
    }

    /// `x:A, y:B, ...`, possibly empty; stops before `=` or end of input.
    pub(crate) fn env(&mut self) -> PResult<Env> {
        let mut env = Env::new();
        if matches!(self.peek(), Tok::Eq | Tok::Eof) {
            return Ok(env);
        }
        loop {
            let pos = self.pos();
            let x = self.name()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            if env.insert(x.clone(), ty).is_some() {
                return Err(ParseError::syntax(
                    pos,
                    format!("name `{x}` declared twice"),
                ));
            }
            if !self.eat(&Tok::Comma) {
                return Ok(env);
            }
        }
    }

    pub(crate) fn cp_term(&mut self) -> PResult<CpTerm> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::New => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                if *self.peek() == Tok::Dot {
                    return Err(ParseError::dialect(
                        self.pos(),
                        "restriction `new x:A. P` is HCP syntax; a CP cut is `new x:A (P | Q)`",
                    ));
                }
                let (p, q) = self.cp_pair()?;
                Ok(CpTerm::cut(x, ty, p, q))
            }
            Tok::Zero => Err(ParseError::dialect(pos, "the inert process `0` is HCP syntax")),
            Tok::LParen => Err(ParseError::dialect(
                pos,
                "a bare parallel composition `(P | Q)` is HCP syntax; CP composes only under a cut or an output",
            )),
            Tok::Ident(_) => {
                let x = self.name()?;
                self.cp_action(x)
            }
            _ => Err(self.unexpected("expected a process")),
        }
    }

    fn cp_pair(&mut self) -> PResult<(CpTerm, CpTerm)> {
        self.expect(Tok::LParen)?;
        let p = self.cp_term()?;
        self.expect(Tok::Bar)?;
        let q = self.cp_term()?;
        if *self.peek() == Tok::Bar {
            return Err(ParseError::dialect(
                self.pos(),
                "CP composes exactly two processes",
            ));
        }
        self.expect(Tok::RParen)?;
        Ok((p, q))
    }

    fn cp_action(&mut self, x: Name) -> PResult<CpTerm> {
        let pos = self.pos();
        match self.bump() {
            Tok::Link => Ok(CpTerm::Link(x, self.name()?)),
            Tok::LBrack => {
                if self.eat(&Tok::RBrack) {
                    self.expect(Tok::Dot)?;
                    if !self.eat(&Tok::Zero) {
                        return Err(ParseError::dialect(
                            self.pos(),
                            "CP halt is written `x[].0`; a continuation after `x[]` is HCP syntax",
                        ));
                    }
                    return Ok(CpTerm::Halt(x));
                }
                let y = self.name()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::Dot)?;
                if *self.peek() != Tok::LParen {
                    return Err(ParseError::dialect(
                        self.pos(),
                        format!("CP output `{x}[{y}]` requires a `(P | Q)` body"),
                    ));
                }
                let (p, q) = self.cp_pair()?;
                Ok(CpTerm::Send(x, y, Box::new(p), Box::new(q)))
            }
            Tok::LParen => {
                if self.eat(&Tok::RParen) {
                    self.expect(Tok::Dot)?;
                    return Ok(CpTerm::wait(x, self.cp_term()?));
                }
                let y = self.name()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(CpTerm::Recv(x, y, Box::new(self.cp_term()?)))
            }
            Tok::Bang => {
                let left = self.selection()?;
                self.expect(Tok::Dot)?;
                let p = self.cp_term()?;
                Ok(if left {
                    CpTerm::inl(x, p)
                } else {
                    CpTerm::inr(x, p)
                })
            }
            Tok::Query => match self.offer_open()? {
                false => Ok(CpTerm::Absurd(x)),
                true => {
                    let p = self.cp_term()?;
                    self.offer_middle()?;
                    let q = self.cp_term()?;
                    self.expect(Tok::RBrace)?;
                    Ok(CpTerm::case(x, p, q))
                }
            },
            other => Err(ParseError::syntax(
                pos,
                format!("expected an action on `{x}`, found {}", other.describe()),
            )),
        }
    }

    fn selection(&mut self) -> PResult<bool> {
        match self.bump() {
            Tok::Inl => Ok(true),
            Tok::Inr => Ok(false),
            _ => Err(ParseError::syntax(self.pos(), "expected `inl` or `inr`")),
        }
    }

    /// After `?`: returns false for `{}`, true after `{inl:`.
    fn offer_open(&mut self) -> PResult<bool> {
        self.expect(Tok::LBrace)?;
        if self.eat(&Tok::RBrace) {
            return Ok(false);
        }
        self.expect(Tok::Inl)?;
        self.expect(Tok::Colon)?;
        Ok(true)
    }

    fn offer_middle(&mut self) -> PResult<()> {
        self.expect(Tok::Semi)?;
        self.expect(Tok::Inr)?;
        self.expect(Tok::Colon)
    }

    pub(crate) fn hcp_term(&mut self) -> PResult<HcpTerm> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(HcpTerm::Inert)
            }
            Tok::New => {
                self.bump();
                let x = self.name()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                if *self.peek() == Tok::LParen {
                    return Err(ParseError::dialect(
                        self.pos(),
                        "cut `new x:A (P | Q)` is CP syntax; HCP restriction is `new x:A. P`",
                    ));
                }
                self.expect(Tok::Dot)?;
                Ok(HcpTerm::new_(x, ty, self.hcp_term()?))
            }
            Tok::LParen => {
                self.bump();
                let mut parts = vec![self.hcp_term()?];
                while self.eat(&Tok::Bar) {
                    parts.push(self.hcp_term()?);
                }
                self.expect(Tok::RParen)?;
                Ok(HcpTerm::par_all(parts))
            }
            Tok::Ident(_) => {
                let x = self.name()?;
                self.hcp_action(x)
            }
            _ => Err(ParseError::syntax(
                pos,
                format!("expected a process, found {}", self.peek().describe()),
            )),
        }
    }

    fn hcp_action(&mut self, x: Name) -> PResult<HcpTerm> {
        let pos = self.pos();
        match self.bump() {
            Tok::Link => Ok(HcpTerm::Link(x, self.name()?)),
            Tok::LBrack => {
                if self.eat(&Tok::RBrack) {
                    self.expect(Tok::Dot)?;
                    return Ok(HcpTerm::out_unit(x, self.hcp_term()?));
                }
                let y = self.name()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::Dot)?;
                Ok(HcpTerm::Out(x, y, Box::new(self.hcp_term()?)))
            }
            Tok::LParen => {
                if self.eat(&Tok::RParen) {
                    self.expect(Tok::Dot)?;
                    return Ok(HcpTerm::in_unit(x, self.hcp_term()?));
                }
                let y = self.name()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(HcpTerm::In(x, y, Box::new(self.hcp_term()?)))
            }
            Tok::Bang => {
                let left = self.selection()?;
                self.expect(Tok::Dot)?;
                let p = self.hcp_term()?;
                Ok(if left {
                    HcpTerm::inl(x, p)
                } else {
                    HcpTerm::inr(x, p)
                })
            }
            Tok::Query => match self.offer_open()? {
                false => Ok(HcpTerm::Absurd(x)),
                true => {
                    let p = self.hcp_term()?;
                    self.offer_middle()?;
                    let q = self.hcp_term()?;
                    self.expect(Tok::RBrace)?;
                    Ok(HcpTerm::case(x, p, q))
                }
            },
            other => Err(ParseError::syntax(
                pos,
                format!("expected an action on `{x}`, found {}", other.describe()),
            )),
        }
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_env(src: &str) -> Result<Env, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.env()?;
    p.expect_eof()?;
    Ok(e)
}

pub fn parse_cp(src: &str) -> Result<CpTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.cp_term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_hcp(src: &str) -> Result<HcpTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.hcp_term()?;
    p.expect_eof()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::ParseErrorKind;

    #[test]
    fn types() {
        assert_eq!(
            parse_type("1 * bot").unwrap(),
            Type::tensor(Type::One, Type::Bot)
        );
        assert_eq!(
            parse_type("~(1 * bot)").unwrap(),
            Type::par(Type::Bot, Type::One)
        );
        assert_eq!(
            parse_type("~1 * bot").unwrap(),
            Type::tensor(Type::Bot, Type::Bot)
        );
        assert_eq!(
            parse_type("1 * bot * 1").unwrap(),
            Type::tensor(Type::One, Type::tensor(Type::Bot, Type::One))
        );
        assert_eq!(
            parse_type("1 * 1 + top").unwrap(),
            Type::plus(Type::tensor(Type::One, Type::One), Type::Top)
        );
        assert!(parse_type("1 + 1 & top").is_err());
        assert!(parse_type("1 * 1 par 1").is_err());
        assert!(parse_type("(1 + 1) & top").is_ok());
    }

    #[test]
    fn cp_terms() {
        let t = parse_cp("new x:1 (x[].0 | x().w[].0)").unwrap();
        assert_eq!(
            t,
            CpTerm::cut(
                "x",
                Type::One,
                CpTerm::halt("x"),
                CpTerm::wait("x", CpTerm::halt("w"))
            )
        );
        let t = parse_cp("x?{inl: x<->y; inr: x?{}}").unwrap();
        assert_eq!(
            t,
            CpTerm::case("x", CpTerm::link("x", "y"), CpTerm::absurd("x"))
        );
    }

    #[test]
    fn cp_rejects_hcp_constructs() {
        let e = parse_cp("x[y].y[].0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DialectViolation);
        assert!(e.message.contains("(P | Q)"));
        assert_eq!(
            parse_cp("(x[].0 | y[].0)").unwrap_err().kind,
            ParseErrorKind::DialectViolation
        );
        assert_eq!(
            parse_cp("new x:1. 0").unwrap_err().kind,
            ParseErrorKind::DialectViolation
        );
    }

    #[test]
    fn hcp_terms() {
        let t = parse_hcp("new x:bot. (x().x[].0 | 0)").unwrap();
        assert_eq!(
            t,
            HcpTerm::new_(
                "x",
                Type::Bot,
                HcpTerm::par(
                    HcpTerm::in_unit("x", HcpTerm::out_unit("x", HcpTerm::Inert)),
                    HcpTerm::Inert
                )
            )
        );
        assert_eq!(
            parse_hcp("(a[].0 | b[].0 | c[].0)").unwrap(),
            HcpTerm::par(
                HcpTerm::out_unit("a", HcpTerm::Inert),
                HcpTerm::par(
                    HcpTerm::out_unit("b", HcpTerm::Inert),
                    HcpTerm::out_unit("c", HcpTerm::Inert)
                )
            )
        );
        assert_eq!(parse_hcp("(x<->y)").unwrap(), HcpTerm::link("x", "y"));
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_cp("x(y).\n  y?{inl: 0; }").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 11 });
    }
}
