use thiserror::Error;

/// Every failure the library can report.
///
/// Validation and parse failures name the offending object, arrow or
/// chain so that command-line reports can point at the violating datum.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("missing composite: no entry for {second} ∘ {first}")]
    MissingComposite { second: String, first: String },
    #[error("associativity violated: {h} ∘ ({g} ∘ {f}) ≠ ({h} ∘ {g}) ∘ {f}")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("unit law violated at arrow {arrow}: {detail}")]
    UnitViolation { arrow: String, detail: String },
    #[error("arrow {arrow} has unknown {endpoint} object {object}")]
    DanglingEndpoint {
        arrow: String,
        endpoint: &'static str,
        object: String,
    },
    #[error("duplicate identifier {0}")]
    DuplicateId(String),
    #[error("identifier {0} is reserved for identity arrows")]
    ReservedId(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("composite {second} ∘ {first} is invalid: {detail}")]
    BadComposite {
        second: String,
        first: String,
        detail: String,
    },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("size budget exceeded: {what} ({actual} > {limit})")]
    SizeBudgetExceeded {
        what: String,
        actual: usize,
        limit: usize,
    },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatTrans(String),
    #[error("not a subcategory: {0}")]
    NotASubcategory(String),
    #[error("not a {0}")]
    NotAFibration(&'static str),
    #[error("no {kind} lift of {base_arrow} at {object}")]
    NoLift {
        kind: &'static str,
        base_arrow: String,
        object: String,
    },
    #[error("non-unique filler: {0}")]
    NonUniqueFiller(String),
    #[error("no filler: {0}")]
    NoFiller(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("component at {object} is not invertible: {arrow}")]
    NotInvertible { object: String, arrow: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("not a bi-fibration: {0}")]
    NotBiFibration(String),
    #[error("base category {0} is not connected")]
    BaseNotConnected(String),
    #[error("basepoint mismatch: {0}")]
    BasepointMismatch(String),
    #[error("fiber not preserved: {0}")]
    FiberNotPreserved(String),
    #[error("not a morphism of fibrations: {0}")]
    NotAMorphism(String),
    #[error("parse error in {location}: {detail}")]
    Parse { location: String, detail: String },
    #[error("i/o error on {path}: {detail}")]
    Io { path: String, detail: String },
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, actual: usize, limit: usize) -> Self {
        Error::SizeBudgetExceeded {
            what: what.into(),
            actual,
            limit,
        }
    }

    /// Input and budget errors (as opposed to mathematical outcomes).
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NotAFibration(_)
                | Error::NoLift { .. }
                | Error::NotInvertible { .. }
                | Error::NotBiFibration(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
