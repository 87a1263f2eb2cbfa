//! Error types shared across the crate.

use thiserror::Error;

/// Invalid grid construction or grid/data mismatch.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("node count {0} is even; the grid must contain x = 0 as a node")]
    EvenNodeCount(usize),
    #[error("node count {0} is below the minimum of 3")]
    TooFewNodes(usize),
    #[error("half width {0} is not a positive finite number")]
    BadHalfWidth(f64),
    #[error("value count {got} does not match the grid's {expected} nodes")]
    LengthMismatch { got: usize, expected: usize },
    #[error("non-finite value {value} at node {index}")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("function has zero norm and cannot be normalized")]
    ZeroNorm,
    #[error("point-interaction location {0} does not coincide with a grid node")]
    OffGridAtom(f64),
    #[error("convolution kernel has {got} lags but the grid has {expected} nodes")]
    KernelLengthMismatch { got: usize, expected: usize },
}

/// Model parameters outside the admissible ranges.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("coupling alpha = {0} must be a finite number >= 0")]
    BadAlpha(f64),
    #[error("well strength beta = {0} must be a finite number > 0")]
    BadBeta(f64),
    #[error("field strength B = {0} must be a finite number > 1")]
    BadField(f64),
    #[error("the sech profile degenerates at alpha = 0; use the exponential limit profile")]
    DegenerateSech,
}

/// Failures of the constrained minimization loop.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("energy became non-finite at iteration {iteration}; step blow-up")]
    NonFiniteEnergy { iteration: usize },
    #[error("seed profile has zero norm")]
    DegenerateSeed,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Failures in the effective-potential checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EffPotError {
    #[error("grid spacing {spacing} is too coarse for length scale {scale}")]
    GridTooCoarse { spacing: f64, scale: f64 },
    #[error(
        "grid spacing {spacing} under-resolves the magnetic length {magnetic_length}; \
         need at least 8 nodes per magnetic length"
    )]
    UnderResolved { spacing: f64, magnetic_length: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Failures of the expansion-coefficient fit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("fit needs at least 4 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("design matrix is numerically singular; field values too close together")]
    Singular,
}

/// Failures while assembling or minimizing a field-ladder point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LadderError {
    #[error(transparent)]
    EffPot(#[from] EffPotError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Failures of the perturbed-energy computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PerturbError {
    #[error(
        "perturbation size |{eps}| * (atom mass {atom_mass} + sup bound {sup_bound}) \
         exceeds the coercivity budget {budget}; the perturbed functional may be unbounded below"
    )]
    CoercivityGuard {
        eps: f64,
        atom_mass: f64,
        sup_bound: f64,
        budget: f64,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Grid(#[from] GridError),
}
