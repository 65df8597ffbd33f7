use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("(0, 0) is not a slope")]
    NotASlope,
    #[error("cannot parse slope {0:?}: expected \"p/q\"")]
    ParseSlope(String),
    #[error("cannot parse group element {0:?}: expected \"[[a,b],[c,d]]\"")]
    ParseMatrix(String),
    #[error("matrix [[{a},{b}],[{c},{d}]] does not have determinant 1")]
    NotUnimodular {
        a: String,
        b: String,
        c: String,
        d: String,
    },
    #[error("endpoints of a cutting sequence must be distinct slopes")]
    IdenticalSlopes,
    #[error("element not reached within word-length search radius {radius}")]
    SearchRadiusExceeded { radius: usize },
    #[error("projection target set is empty")]
    EmptySet,
    #[error("vertex {vertex} out of range for a space with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph: {0}")]
    InvalidGraph(String),
    #[error("convolution needs up to {required} products but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("element with trace {trace} is not hyperbolic")]
    NotHyperbolic { trace: String },
    #[error("elements share their fixed points")]
    DependentPair,
    #[error("cannot shift an empty path")]
    EmptyPath,
    #[error("step distribution: {0}")]
    InvalidDistribution(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
