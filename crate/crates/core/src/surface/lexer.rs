use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Zero,
    One,
    // keywords
    New,
    Proc,
    HProc,
    Inl,
    Inr,
    ParKw,
    BotKw,
    TopKw,
    // punctuation
    Link,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Dot,
    Colon,
    Semi,
    Comma,
    Bar,
    Star,
    Plus,
    Amp,
    Tilde,
    Bang,
    Query,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Ident(_) => "identifier",
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::New => "new",
            Tok::Proc => "proc",
            Tok::HProc => "hproc",
            Tok::Inl => "inl",
            Tok::Inr => "inr",
            Tok::ParKw => "par",
            Tok::BotKw => "bot",
            Tok::TopKw => "top",
            Tok::Link => "<->",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Amp => "&",
            Tok::Tilde => "~",
            Tok::Bang => "!",
            Tok::Query => "?",
            Tok::Eq => "=",
            Tok::Eof => "end of input",
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '<' {
            if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                out.push((Tok::Link, pos));
                advance(3, &mut i, &mut col);
                continue;
            }
            return Err(ParseError::syntax(pos, "expected `<->`"));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "new" => Tok::New,
                "proc" => Tok::Proc,
                "hproc" => Tok::HProc,
                "inl" => Tok::Inl,
                "inr" => Tok::Inr,
                "par" => Tok::ParKw,
                "bot" => Tok::BotKw,
                "top" => Tok::TopKw,
                _ => Tok::Ident(word),
            };
            out.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match word.as_str() {
                "0" => Tok::Zero,
                "1" => Tok::One,
                _ => {
                    return Err(ParseError::syntax(
                        pos,
                        format!("unexpected literal `{word}`"),
                    ))
                }
            };
            out.push((tok, pos));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '|' => Tok::Bar,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '&' => Tok::Amp,
            '~' => Tok::Tilde,
            '!' => Tok::Bang,
            '?' => Tok::Query,
            '=' => Tok::Eq,
            other => {
                return Err(ParseError::syntax(
                    pos,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push((tok, pos));
        advance(1, &mut i, &mut col);
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("-- hi\n  x<->y").unwrap();
        assert_eq!(toks[0], (Tok::Ident("x".into()), Pos { line: 2, col: 3 }));
        assert_eq!(toks[1].0, Tok::Link);
        assert_eq!(toks[2], (Tok::Ident("y".into()), Pos { line: 2, col: 7 }));
    }
}
