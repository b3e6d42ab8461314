use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the toolkit. Construction errors carry the offending
/// indices so callers can point at the bad entry of their input.
#[derive(Debug, Error)]
pub enum Error {
    // -- distance matrix construction --
    #[error("space must contain at least one point")]
    EmptySpace,
    #[error("row {row} has {len} fields, expected {n}")]
    MatrixNotSquare { row: usize, len: usize, n: usize },
    #[error("distance at ({i},{j}) is not finite: {value}")]
    NonFiniteDistance { i: usize, j: usize, value: f64 },
    #[error("distance at ({i},{j}) is negative: {value}")]
    NegativeDistance { i: usize, j: usize, value: f64 },
    #[error("matrix is asymmetric at ({i},{j}): {a} vs {b}")]
    AsymmetricDistance { i: usize, j: usize, a: f64, b: f64 },
    #[error("nonzero diagonal at {i}: {value}")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("triangle inequality violated at ({i},{j},{k}): excess {excess}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        excess: f64,
    },
    #[error("weight {index} is not strictly positive: {value}")]
    NonpositiveWeight { index: usize, value: f64 },
    #[error("got {actual} weights for {expected} points")]
    WeightCountMismatch { expected: usize, actual: usize },

    // -- graph construction --
    #[error("edge ({u},{v}) has nonpositive length {length}")]
    NonpositiveEdgeLength { u: String, v: String, length: f64 },
    #[error("graph is disconnected: no path from '{from}' to '{to}'")]
    DisconnectedGraph { from: String, to: String },
    #[error("no weight supplied for node '{label}'")]
    MissingNodeWeight { label: String },

    // -- analytic generators --
    #[error("model sphere dimension must be >= 1, got {dim}")]
    InvalidDimension { dim: usize },
    #[error("suspension needs at least 2 latitudes, got {given}")]
    TooFewLatitudes { given: usize },
    #[error("base diameter {diameter} exceeds pi; suspension undefined")]
    BaseDiameterExceedsPi { diameter: f64 },

    // -- quadrature / profile domains --
    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("integration bounds inverted: a = {a} > b = {b}")]
    InvertedInterval { a: f64, b: f64 },

    // -- invariants --
    #[error("point index {index} out of range for {n_points}-point space")]
    PointIndexOutOfRange { index: usize, n_points: usize },
    #[error("space diameter {diameter} exceeds pi; f is only defined on [0, pi]")]
    DiameterExceedsPi { diameter: f64 },
    #[error("function is not strictly monotone near r = {at}")]
    NotStrictlyMonotone { at: f64 },
    #[error("inverse round trip failed at r = {r}: |f^-1(f(r)) - r| = {error}")]
    InverseRoundTrip { r: f64, error: f64 },
    #[error("monotone table needs at least 2 entries")]
    TableTooShort,
    #[error("monotone table abscissae must be strictly increasing inside [0, pi] and cover it")]
    BadTableDomain,
    #[error("decreasing f is not admitted here; the reduction assumes increasing f")]
    DecreasingFunction,
    #[error("unknown function tag '{tag}'")]
    UnknownFunctionTag { tag: String },

    // -- estimation --
    #[error("kernel produced non-finite value {value} at pair ({i},{j})")]
    KernelFailure { i: usize, j: usize, value: f64 },
    #[error("Monte Carlo estimation needs at least 2 samples, got {samples}")]
    TooFewSamples { samples: u64 },

    // -- comparison --
    #[error("radius grid is empty")]
    EmptyRadiusGrid,
    #[error("radius grid not strictly increasing at position {index}")]
    GridNotSorted { index: usize },
    #[error("radius grid value {value} outside (0, pi]")]
    GridValueOutOfRange { value: f64 },

    // -- file I/O --
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot parse '{token}' as a number (line {line})")]
    ParseNumber { line: usize, token: String },
    #[error("malformed line {line}: expected 'u v length' or a single node label")]
    MalformedEdgeLine { line: usize },
}
