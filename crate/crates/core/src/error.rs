use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:.3e} below threshold at column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("no convergence in {what} after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("accuracy loss: {0}")]
    AccuracyLoss(String),
    #[error("density not positive at x = {0}")]
    NonPositiveDensity(f64),
    #[error("root not bracketed for target {0}")]
    RootNotBracketed(f64),
    #[error("point lies on the cut")]
    OnCut,
    #[error("point coincides with node {0}")]
    AtNode(usize),
    #[error("invalid contour: {0}")]
    ContourInvalid(String),
    #[error("Pade system degenerate")]
    Degenerate,
    #[error("subdiagonal system degenerate: {0}")]
    SubdiagonalDegenerate(String),
    #[error("degree collapse failed: tail ratio {0:.3e}")]
    DegreeCollapseFailed(f64),
    #[error("inconsistent KKT at cell {cell}: violation {violation:.3e}")]
    InconsistentKkt { cell: usize, violation: f64 },
    #[error("argument on a sector boundary")]
    SectorBoundary,
    #[error("point lies on the band")]
    OnBand,
    #[error("ill-conditioned local fit: misfit {0:.3e}")]
    FitIllConditioned(f64),
    #[error("conformal map derivative not positive: {0}")]
    NegativeDerivative(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
