//! Recursive-descent parser producing the syntax tree.

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{Diagnostic, DiagnosticKind, Span};

pub fn parse(src: &str) -> Result<SpecAst, Diagnostic> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(SpecAst { items })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

fn join(a: Span, b: Span) -> Span {
    Span { end: b.end, ..a }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(
            DiagnosticKind::SyntaxError,
            format!("expected {expected}, found {}", self.peek().describe()),
            self.span(),
        ))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.peek() == &t {
            Ok(self.bump().span)
        } else {
            self.error(&t.describe())
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => Ok(Name {
                text,
                span: self.bump().span,
            }),
            _ => self.error("an identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            _ => self.error(&format!("`{kw}`")),
        }
    }

    /// Identifier or quoted string.
    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) | Tok::Str(text) => Ok(Name {
                text,
                span: self.bump().span,
            }),
            _ => self.error("a name"),
        }
    }

    /// Element label: identifier, string or non-negative integer.
    fn label(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) | Tok::Str(text) => Ok(Name {
                text,
                span: self.bump().span,
            }),
            Tok::Int(n) => Ok(Name {
                text: n.to_string(),
                span: self.bump().span,
            }),
            _ => self.error("an element label"),
        }
    }

    fn cat_ref(&mut self) -> PResult<CatRef> {
        match self.peek().clone() {
            Tok::Ident(text) => Ok(CatRef::Named(Name {
                text,
                span: self.bump().span,
            })),
            Tok::Str(text) => Ok(CatRef::Fixture(Name {
                text,
                span: self.bump().span,
            })),
            _ => self.error("a category name or quoted fixture name"),
        }
    }

    fn atom(&mut self) -> PResult<Atom> {
        if matches!(self.peek(), Tok::Ident(s) if s == "id") && self.peek2() == &Tok::LParen {
            self.bump();
            self.bump();
            let obj = self.name()?;
            self.expect(Tok::RParen)?;
            return Ok(Atom::Id(obj));
        }
        Ok(Atom::Mor(self.name()?))
    }

    fn path(&mut self) -> PResult<Path> {
        let start = self.span();
        let mut atoms = vec![self.atom()?];
        while self.eat(&Tok::Dot) {
            atoms.push(self.atom()?);
        }
        Ok(Path {
            atoms,
            span: join(start, self.prev_span()),
        })
    }

    /// `item (, item)* ;`, possibly empty when `;` comes first.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(&Tok::Semi) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::Semi) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return self.error("`,` or `;`");
            }
        }
    }

    /// `{ a -> b, ... }`.
    fn label_table(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            let a = self.label()?;
            self.expect(Tok::Arrow)?;
            let b = self.label()?;
            out.push((a, b));
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            if !self.eat(&Tok::Comma) {
                return self.error("`,` or `}`");
            }
        }
    }

    fn section_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_)) && self.peek2() == &Tok::Colon
    }

    /// Equations `p = q;` until the next section or the closing brace.
    fn equations(&mut self) -> PResult<Vec<(Path, Path)>> {
        let mut out = Vec::new();
        while self.peek() != &Tok::RBrace && !self.section_start() {
            let l = self.path()?;
            self.expect(Tok::Eq)?;
            let r = self.path()?;
            self.expect(Tok::Semi)?;
            out.push((l, r));
        }
        Ok(out)
    }

    fn section(&mut self, allowed: &[&str]) -> PResult<Name> {
        let n = self.ident()?;
        if !allowed.contains(&n.text.as_str()) {
            return Err(Diagnostic::new(
                DiagnosticKind::SyntaxError,
                format!("unknown section `{}`; expected one of {}", n.text, allowed.join(", ")),
                n.span,
            ));
        }
        self.expect(Tok::Colon)?;
        Ok(n)
    }

    fn item(&mut self) -> PResult<Item> {
        let start = self.span();
        let kind = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.error("`category`, `functor`, `presheaf`, `map` or `reflection`"),
        };
        let item = match kind.as_str() {
            "category" => Item::Category(self.category(start)?),
            "functor" => Item::Functor(self.functor(start)?),
            "presheaf" => Item::Presheaf(self.presheaf(start)?),
            "map" => Item::Map(self.map(start)?),
            "reflection" => Item::Reflection(self.reflection(start)?),
            _ => return self.error("`category`, `functor`, `presheaf`, `map` or `reflection`"),
        };
        Ok(item)
    }

    fn category(&mut self, start: Span) -> PResult<CategoryDecl> {
        self.keyword("category")?;
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut d = CategoryDecl {
            name,
            objects: Vec::new(),
            morphisms: Vec::new(),
            relations: Vec::new(),
            compose: None,
            close: None,
            span: start,
        };
        while !self.eat(&Tok::RBrace) {
            let sec = self.section(&["objects", "morphisms", "relations", "compose", "close"])?;
            match sec.text.as_str() {
                "objects" => d.objects.extend(self.list(Self::name)?),
                "morphisms" => d.morphisms.extend(self.list(|p| {
                    let m = p.name()?;
                    p.expect(Tok::Colon)?;
                    let a = p.name()?;
                    p.expect(Tok::Arrow)?;
                    let b = p.name()?;
                    Ok((m, a, b))
                })?),
                "relations" => d.relations.extend(self.equations()?),
                "compose" => {
                    let eqs = self.equations()?;
                    d.compose.get_or_insert_with(Vec::new).extend(eqs);
                }
                _ => {
                    let at = self.span();
                    let Tok::Int(n) = *self.peek() else {
                        return self.error("a number");
                    };
                    self.bump();
                    self.expect(Tok::Semi)?;
                    d.close = Some((n, at));
                }
            }
        }
        d.span = join(start, self.prev_span());
        Ok(d)
    }

    fn functor(&mut self, start: Span) -> PResult<FunctorDecl> {
        self.keyword("functor")?;
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let source = self.cat_ref()?;
        self.expect(Tok::Arrow)?;
        let target = self.cat_ref()?;
        self.expect(Tok::LBrace)?;
        let mut d = FunctorDecl {
            name,
            source,
            target,
            objects: Vec::new(),
            morphisms: Vec::new(),
            span: start,
        };
        while !self.eat(&Tok::RBrace) {
            let sec = self.section(&["objects", "morphisms"])?;
            if sec.text == "objects" {
                d.objects.extend(self.list(|p| {
                    let a = p.name()?;
                    p.expect(Tok::Arrow)?;
                    Ok((a, p.name()?))
                })?);
            } else {
                d.morphisms.extend(self.list(|p| {
                    let a = p.path()?;
                    p.expect(Tok::Arrow)?;
                    Ok((a, p.path()?))
                })?);
            }
        }
        d.span = join(start, self.prev_span());
        Ok(d)
    }

    fn presheaf(&mut self, start: Span) -> PResult<PresheafDecl> {
        self.keyword("presheaf")?;
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let base = self.cat_ref()?;
        self.expect(Tok::LBrace)?;
        let mut d = PresheafDecl {
            name,
            base,
            sets: Vec::new(),
            acts: Vec::new(),
            span: start,
        };
        while !self.eat(&Tok::RBrace) {
            match self.peek() {
                Tok::Ident(s) if s == "set" => {
                    self.bump();
                    let obj = self.name()?;
                    self.expect(Tok::Eq)?;
                    self.expect(Tok::LBrace)?;
                    let mut labels = Vec::new();
                    if !self.eat(&Tok::RBrace) {
                        loop {
                            labels.push(self.label()?);
                            if self.eat(&Tok::RBrace) {
                                break;
                            }
                            if !self.eat(&Tok::Comma) {
                                return self.error("`,` or `}`");
                            }
                        }
                    }
                    self.expect(Tok::Semi)?;
                    d.sets.push((obj, labels));
                }
                Tok::Ident(s) if s == "act" => {
                    self.bump();
                    let m = self.path()?;
                    self.expect(Tok::Eq)?;
                    let table = self.label_table()?;
                    self.expect(Tok::Semi)?;
                    d.acts.push((m, table));
                }
                _ => return self.error("`set`, `act` or `}`"),
            }
        }
        d.span = join(start, self.prev_span());
        Ok(d)
    }

    fn map(&mut self, start: Span) -> PResult<MapDecl> {
        self.keyword("map")?;
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let source = self.name()?;
        self.expect(Tok::Arrow)?;
        let target = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut components = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("at")?;
            let obj = self.name()?;
            self.expect(Tok::Eq)?;
            let table = self.label_table()?;
            self.expect(Tok::Semi)?;
            components.push((obj, table));
        }
        Ok(MapDecl {
            name,
            source,
            target,
            components,
            span: join(start, self.prev_span()),
        })
    }

    fn reflection(&mut self, start: Span) -> PResult<ReflectionDecl> {
        self.keyword("reflection")?;
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut d = ReflectionDecl {
            name,
            left: None,
            right: None,
            unit: Vec::new(),
            span: start,
        };
        while !self.eat(&Tok::RBrace) {
            let sec = self.section(&["left", "right", "unit"])?;
            match sec.text.as_str() {
                "left" | "right" => {
                    let n = self.name()?;
                    self.expect(Tok::Semi)?;
                    let slot = if sec.text == "left" { &mut d.left } else { &mut d.right };
                    if slot.is_some() {
                        return Err(Diagnostic::new(
                            DiagnosticKind::DuplicateDefinition,
                            format!("`{}` given twice", sec.text),
                            sec.span,
                        ));
                    }
                    *slot = Some(n);
                }
                _ => d.unit.extend(self.list(|p| {
                    let b = p.name()?;
                    p.expect(Tok::Arrow)?;
                    Ok((b, p.path()?))
                })?),
            }
        }
        d.span = join(start, self.prev_span());
        Ok(d)
    }
}
