use std::collections::BTreeSet;
use std::fmt;

use super::lexer::Tok;
use super::parser::Parser;
use super::{ParseError, Pos};
use crate::cp::CpTerm;
use crate::env::Env;
use crate::hcp::HcpTerm;

/// The process of a declaration, in the dialect named by its keyword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclBody {
    Cp(CpTerm),
    Hcp(HcpTerm),
}

/// `proc Id : Env = P` or `hproc Id : Env = P`.
///
/// For `hproc` the environment is a flat map; the hyper-partition is
/// inferred by the typechecker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub env: Env,
    pub body: DeclBody,
    /// Position of the declaration keyword.
    pub pos: Pos,
    /// Position of the first token of the process.
    pub body_pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SessionFile {
    pub decls: Vec<Decl>,
}

impl SessionFile {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }
}

pub fn parse_session(src: &str) -> Result<SessionFile, ParseError> {
    let mut p = Parser::new(src)?;
    let mut decls = Vec::new();
    let mut seen = BTreeSet::new();
    while *p.peek() != Tok::Eof {
        let pos = p.pos();
        let hybrid = match p.bump() {
            Tok::Proc => false,
            Tok::HProc => true,
            other => {
                return Err(ParseError::syntax(
                    pos,
                    format!("expected `proc` or `hproc`, found {}", other.describe()),
                ))
            }
        };
        let name_pos = p.pos();
        let name = p.name()?.to_string();
        if !seen.insert(name.clone()) {
            return Err(ParseError::syntax(
                name_pos,
                format!("duplicate declaration `{name}`"),
            ));
        }
        p.expect(Tok::Colon)?;
        let env = p.env()?;
        p.expect(Tok::Eq)?;
        let body_pos = p.pos();
        let body = if hybrid {
            DeclBody::Hcp(p.hcp_term()?)
        } else {
            DeclBody::Cp(p.cp_term()?)
        };
        if !matches!(p.peek(), Tok::Proc | Tok::HProc | Tok::Eof) {
            return Err(p.unexpected("expected the next declaration"));
        }
        decls.push(Decl {
            name,
            env,
            body,
            pos,
            body_pos,
        });
    }
    Ok(SessionFile { decls })
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let env = if self.env.is_empty() {
            String::new()
        } else {
            format!(" {}", self.env)
        };
        match &self.body {
            DeclBody::Cp(t) => write!(f, "proc {} :{env} = {t}", self.name),
            DeclBody::Hcp(t) => write!(f, "hproc {} :{env} = {t}", self.name),
        }
    }
}

impl fmt::Display for SessionFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn print_session(file: &SessionFile) -> String {
    file.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "-- two processes\n\
        proc Main : w:1 =\n  new x:1 (x[].0 | x().w[].0)\n\
        hproc Stuck : =\n  new x:bot. (x().x[].0 | 0) -- rejected later\n";

    #[test]
    fn parses_and_round_trips() {
        let file = parse_session(SRC).unwrap();
        assert_eq!(file.decls.len(), 2);
        assert_eq!(file.decls[0].pos, Pos { line: 2, col: 1 });
        assert_eq!(file.decls[0].body_pos, Pos { line: 3, col: 3 });
        assert!(file.get("Stuck").unwrap().env.is_empty());
        let again = parse_session(&print_session(&file)).unwrap();
        assert_eq!(
            again.decls.iter().map(|d| &d.body).collect::<Vec<_>>(),
            file.decls.iter().map(|d| &d.body).collect::<Vec<_>>()
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = parse_session("proc A : = x[].0\nproc A : = y[].0").unwrap_err();
        assert_eq!(e.pos.line, 2);
    }
}
