use thiserror::Error;

/// Every failure mode reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("profile has negative or non-finite values: {0}")]
    InvalidProfile(String),
    #[error("profile mass {0:e} is not positive")]
    ZeroMass(f64),
    #[error("mollifier width {delta:e} is below two grid spacings ({dv:e})")]
    UnresolvableKernel { delta: f64, dv: f64 },
    #[error("bump width gamma*delta = {width:e} is below two grid spacings ({dv:e})")]
    UnresolvedBump { width: f64, dv: f64 },
    #[error("point or window leaves the velocity grid: {0}")]
    OutOfDomain(String),
    #[error("positivity lost: minimum value {0:e}")]
    PositivityViolated(f64),
    #[error("pole {c} lies outside the open grid interval")]
    PoleOutsideDomain { c: f64 },
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
    #[error("invalid Sobolev spec: {0}")]
    InvalidSpec(String),
    #[error("grids do not match: {0}")]
    GridMismatch(String),
    #[error("degenerate extremum at v = {0}")]
    DegenerateExtremum(f64),
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dispersion root collapsed onto the real axis (Im c = {im_c:e})")]
    RootCollapsedToRealAxis { im_c: f64 },
    #[error("no parameters within the resolvable range reach the target: {0}")]
    TargetNotReachable(String),
    #[error("k = {k} lies in an unstable interval")]
    UnstableMode { k: f64 },
    #[error("dispersion denominator nearly vanishes: min |k^2 - F| = {min:e}")]
    DenominatorNearZero { min: f64 },
    #[error("time step too large: dt*k*v_max = {0}")]
    StepTooLarge(f64),
    #[error("not enough usable points for a fit: {0}")]
    InsufficientPoints(usize),
    #[error("profile is not even about c: deviation {0:e}")]
    NotSymmetric(f64),
    #[error("beta = {0} outside the tabulated energy range")]
    OutOfTabulatedRange(f64),
    #[error("equilibrium is not a center: h'(0) = {0:e}")]
    NotACenter(f64),
    #[error("orbit leaves the potential well: {0}")]
    OrbitEscapesWell(String),
    #[error("could not bracket the target period: {0}")]
    BracketNotFound(String),
    #[error("neutrality violated: relative mass error {0:e}")]
    NeutralityViolated(f64),
    #[error("advection accuracy bound exceeded: {0}")]
    AccuracyBoundExceeded(String),
    #[error("input/output: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
