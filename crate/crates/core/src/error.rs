use thiserror::Error;

/// A single defect found while validating raw category data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("missing composite {g}.{f}")]
    MissingComposite { g: String, f: String },
    #[error("identity law fails at {morphism} (identity {identity})")]
    BrokenIdentity { identity: String, morphism: String },
    #[error("associativity fails for {h}.({g}.{f})")]
    BrokenAssociativity { h: String, g: String, f: String },
    #[error("dangling reference to {name} ({context})")]
    DanglingReference { name: String, context: String },
    #[error("composite {g}.{f} = {h} has the wrong type")]
    IllTypedComposite { g: String, f: String, h: String },
    #[error("duplicate identifier {0}")]
    Duplicate(String),
    #[error("category has no objects")]
    Empty,
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {}", join(.0))]
    InvalidCategory(Vec<Violation>),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatTrans(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("invalid presheaf map: {0}")]
    InvalidMap(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration budget of {limit} candidates exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("saturation exceeded the bound of {bound} morphisms")]
    SaturationBound { bound: usize },
    #[error("expected a unique map but found {count}: {context}")]
    NonUnique { context: String, count: usize },
    #[error("invalid preorder: {0}")]
    InvalidPreorder(String),
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("malformed witness: {0}")]
    Witness(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
