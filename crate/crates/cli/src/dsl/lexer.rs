//! Tokens with source spans. Comments run from `#` to the end of the line.

use super::{Diagnostic, DiagnosticKind, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Eq,
    Dot,
    Arrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(n) => format!("number {n}"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: (usize, usize, usize)) -> Span {
        Span {
            start: start.0,
            end: self.pos,
            line: start.1,
            col: start.2,
        }
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut c = Cursor {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(ch) = c.peek() {
            if ch.is_whitespace() {
                c.bump();
            } else if ch == '#' {
                while c.peek().is_some_and(|ch| ch != '\n') {
                    c.bump();
                }
            } else {
                break;
            }
        }
        let start = (c.pos, c.line, c.col);
        let Some(ch) = c.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                span: c.span_from(start),
            });
            return Ok(out);
        };
        let tok = match ch {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '.' => Tok::Dot,
            '-' if c.peek() == Some('>') => {
                c.bump();
                Tok::Arrow
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match c.bump() {
                        None | Some('\n') => {
                            return Err(Diagnostic::new(
                                DiagnosticKind::SyntaxError,
                                "unterminated string",
                                c.span_from(start),
                            ))
                        }
                        Some('"') => break,
                        Some('\\') => match c.bump() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some('n') => s.push('\n'),
                            _ => {
                                return Err(Diagnostic::new(
                                    DiagnosticKind::SyntaxError,
                                    "unknown escape in string",
                                    c.span_from(start),
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            d if d.is_ascii_digit() => {
                let mut n = d.to_digit(10).unwrap() as u64;
                while let Some(d) = c.peek().and_then(|ch| ch.to_digit(10)) {
                    c.bump();
                    n = n.checked_mul(10).and_then(|n| n.checked_add(d as u64)).ok_or_else(|| {
                        Diagnostic::new(DiagnosticKind::SyntaxError, "number too large", c.span_from(start))
                    })?;
                }
                if c.peek().is_some_and(is_ident_char) {
                    return Err(Diagnostic::new(
                        DiagnosticKind::SyntaxError,
                        "identifiers cannot start with a digit",
                        c.span_from(start),
                    ));
                }
                Tok::Int(n)
            }
            s if is_ident_start(s) => {
                let mut id = String::from(s);
                while let Some(ch) = c.peek().filter(|&ch| is_ident_char(ch)) {
                    c.bump();
                    id.push(ch);
                }
                Tok::Ident(id)
            }
            other => {
                return Err(Diagnostic::new(
                    DiagnosticKind::SyntaxError,
                    format!("unexpected character {other:?}"),
                    c.span_from(start),
                ))
            }
        };
        out.push(Token {
            tok,
            span: c.span_from(start),
        });
    }
}
