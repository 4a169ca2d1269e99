use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Bessel order {0} is below -1")]
    InvalidOrder(i32),
    #[error("singular argument z = 0 for an order with a pole at the origin")]
    SingularArgument,
    #[error("lambda = {lambda} is within {radius:e} of the branch point {point}")]
    BranchPoint { lambda: Complex64, point: f64, radius: f64 },
    #[error("real lambda = {0} lies in the gap and needs a rim tag")]
    AmbiguousRim(f64),
    #[error("rim tag given for lambda = {0}, which is not a real point of the gap")]
    IllegalRim(Complex64),
    #[error("2|Im k| gamma = {value:.3} exceeds the validity ceiling {ceiling}")]
    ValidityCeiling { value: f64, ceiling: f64 },
    #[error("coordinate x = {x} outside the admissible range {range}")]
    OutOfRange { x: f64, range: &'static str },
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("integrator failed at x = {x}: {reason}")]
    Integrator { x: f64, reason: &'static str },
    #[error("regular solution start not converged: relative change {0:e} on halving x0")]
    InitAccuracy(f64),
    #[error("wronskian and integral routes disagree: relative difference {0:e}")]
    RouteMismatch(f64),
    #[error("quadrature did not reach tolerance, error estimate {0:e}")]
    Quadrature(f64),
    #[error("lambda = {0} is a zero of the Jost function")]
    Pole(Complex64),
    #[error("phase continuation failed on the segment {a} -> {b}")]
    PhaseContinuation { a: Complex64, b: Complex64 },
    #[error("winding mismatch: parent {parent}, children sum {children}")]
    WindingMismatch { parent: i64, children: i64 },
    #[error("cannot classify gap zero at {0}: rim ratio {1:.3}")]
    Unclassified(f64, f64),
    #[error("extrapolated limit is inconsistent: {0:e}")]
    Extrapolation(f64),
    #[error("{0}")]
    Usage(String),
}
