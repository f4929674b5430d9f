use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("point lies on an undefined line")]
    UndefinedOnLine,
    #[error("point lies inside the table")]
    InsideTable,
    #[error("point lies on a cell boundary")]
    OnCellBoundary,
    #[error("point is outside the domain")]
    OutsideDomain,
    #[error("vector does not cross the strip")]
    NotCrossing,
    #[error("pinwheel construction is ambiguous: {0}")]
    ConstructionAmbiguous(String),
    #[error("orbit exceeded cap of {0} steps")]
    OrbitCapExceeded(usize),
    #[error("undecided at depth {0}")]
    DepthExceeded(usize),
    #[error("symbol {0} has no assigned vector")]
    MissingSymbol(usize),
    #[error("atlas cells do not tile the region: {0}")]
    AtlasInconsistent(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
