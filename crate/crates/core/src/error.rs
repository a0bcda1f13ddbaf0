use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SyzError {
    #[error("non-unit: series has no term below its cutoff")]
    NonUnit,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature did not converge: value {value}, error estimate {error} after {cells} cells")]
    NoConvergence { value: f64, error: f64, cells: usize },

    #[error("inversion failed: {0}")]
    Inversion(String),

    #[error("on removed divisor z = 0")]
    OnRemovedDivisor,

    #[error("degenerate orbit disk at s = 0")]
    DegenerateOrbitDisk,

    #[error("branch tracking failure: radicand winds {0} times on the unit circle")]
    BranchFailure(i64),

    #[error("wall-obstructed pairing: {divisor} on {region}")]
    WallObstructed { divisor: String, region: String },

    #[error("no integral solution: {0}")]
    NoIntegralSolution(String),

    #[error("anchor mismatch: {0}")]
    AnchorMismatch(String),

    #[error("base point (s = {s}, r = {r}) is outside chart region U_{chart}")]
    OutsideRegion { s: f64, r: f64, chart: usize },

    #[error("not an element of G: {0}")]
    NotInGroup(String),

    #[error("outside chart {0}: a coordinate other than x_k, x_(k+1) vanishes")]
    OutsideChart(usize),

    #[error("point lies in the irrelevant locus: {0}")]
    IrrelevantLocus(String),

    #[error("on wall: val(y1) = 0")]
    OnWall,

    #[error("not on surface: {0}")]
    NotOnSurface(String),

    #[error("outside j(B): reconstructed c = {0} is not positive")]
    OutsideImage(f64),

    #[error("outside the analytic domain: sum of j*val(x_j) = {0} is not positive")]
    OutsideDomain(f64),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("configuration degenerate: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, SyzError>;
