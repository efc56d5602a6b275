use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid extent: x_min = {x_min} must be below x_max = {x_max}")]
    InvalidExtent { x_min: f64, x_max: f64 },
    #[error("too few points: {0} (at least 9 are needed)")]
    TooFewPoints(usize),
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),
    #[error("unsupported derivative order {0} (1..=4)")]
    UnsupportedOrder(usize),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} must be positive, got {value} at {at}")]
    NonPositive { what: &'static str, at: f64, value: f64 },
    #[error("window violation: {0}")]
    WindowViolation(String),
    #[error("f vanishes at x = {x}")]
    VanishingF { x: f64 },
    #[error("a constant f cannot solve the Painlevé IV equation when m != 0")]
    ConstantF,
    #[error("Painlevé residual {residual:e} exceeds tolerance {tol:e}")]
    PainleveResidualTooLarge { residual: f64, tol: f64 },
    #[error("singular coefficient within reach of the grid at x = {x}")]
    SingularOnGrid { x: f64 },
    #[error("third-order constraint residual {residual:e} exceeds tolerance {tol:e}")]
    ConstraintResidualTooLarge { residual: f64, tol: f64 },
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("f1 + f0 vanishes near (x, t) = ({x}, {t})")]
    VanishingDenominator { x: f64, t: f64 },
    #[error("V2 varies in time by {variation:e}")]
    V2NotStationary { variation: f64 },
    #[error("V2 is not identically zero: first integral off by {residual:e}")]
    V2NotFree { residual: f64 },
    #[error("chi must be real-valued")]
    ComplexChiRejected,

    #[error("operator term of order {0} exceeds the fourth-order limit")]
    ExcessiveOrder(usize),
    #[error("Im F violates the canonicalization constraint by {residual:e}")]
    ImFConstraintViolated { residual: f64 },

    #[error("solution blows up at the start point")]
    BlowUpAtStart,
    #[error("invalid kind: {0}")]
    InvalidKind(String),
    #[error("residual needs derivative order {needed}, source provides {available}")]
    InsufficientDerivativeOrder { needed: usize, available: usize },
    #[error("too many states requested: {0} (at most 20)")]
    TooManyStates(usize),

    #[error("at least 3 snapshots are needed, got {0}")]
    TooFewSnapshots(usize),
    #[error("|V| dt = {product:e} exceeds the stability limit at (x, t) = ({x}, {t})")]
    UnstablePotential { x: f64, t: f64, product: f64 },
    #[error("Fokker-Planck input must be real")]
    ComplexInputForFp,

    #[error("source residual {residual:e} exceeds {limit:e}; the source is not a solution")]
    SourceNotASolution { residual: f64, limit: f64 },
    #[error("test field {0} reaches the unreliable boundary band")]
    TestTouchesBoundary(usize),
    #[error("input norm squared is {0}, expected 1")]
    UnnormalizedInput(f64),
    #[error("grid levels are not nested 2x refinements: {0}")]
    NonNestedGrids(String),
}
