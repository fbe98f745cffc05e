//! Syntax tree; every name keeps the span it was read from.

use super::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

/// A category reference: a declared name or a quoted fixture name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatRef {
    Named(Name),
    Fixture(Name),
}

impl CatRef {
    pub fn span(&self) -> Span {
        match self {
            CatRef::Named(n) | CatRef::Fixture(n) => n.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Mor(Name),
    /// `id(X)`.
    Id(Name),
}

/// `g.f` is stored as `[g, f]`: the rightmost atom is applied first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub atoms: Vec<Atom>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: Name,
    pub objects: Vec<Name>,
    pub morphisms: Vec<(Name, Name, Name)>,
    pub relations: Vec<(Path, Path)>,
    /// Present iff a `compose:` section was written, even an empty one.
    pub compose: Option<Vec<(Path, Path)>>,
    pub close: Option<(u64, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: Name,
    pub source: CatRef,
    pub target: CatRef,
    pub objects: Vec<(Name, Name)>,
    pub morphisms: Vec<(Path, Path)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafDecl {
    pub name: Name,
    pub base: CatRef,
    pub sets: Vec<(Name, Vec<Name>)>,
    pub acts: Vec<(Path, Vec<(Name, Name)>)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    pub components: Vec<(Name, Vec<(Name, Name)>)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionDecl {
    pub name: Name,
    pub left: Option<Name>,
    pub right: Option<Name>,
    pub unit: Vec<(Name, Path)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Category(CategoryDecl),
    Functor(FunctorDecl),
    Presheaf(PresheafDecl),
    Map(MapDecl),
    Reflection(ReflectionDecl),
}

impl Item {
    pub fn name(&self) -> &Name {
        match self {
            Item::Category(d) => &d.name,
            Item::Functor(d) => &d.name,
            Item::Presheaf(d) => &d.name,
            Item::Map(d) => &d.name,
            Item::Reflection(d) => &d.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpecAst {
    pub items: Vec<Item>,
}
