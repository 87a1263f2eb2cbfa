//! Variational numerics for one-dimensional effective models of a
//! hydrogenic polaron in a strong magnetic field.
//!
//! The crate is organized around one discretization (quadratic nodal
//! elements on a uniform symmetric grid) shared by every model:
//!
//! - [`closedform`]: the folded-sech ground state of the point-pinned
//!   quartic functional, the exact oracle the solvers are tested against.
//! - [`functional`]: assembly of energies ∫f′² − q∫f⁴ ± ∫V f² − Σwᵢf(xᵢ)²
//!   − ∬f²K f² and their nodal gradients.
//! - [`solver`]: projected-gradient minimization on the unit sphere of the
//!   mass norm, with spectral preconditioning and recentering.
//! - [`effpot`]: the averaged transverse Coulomb potentials V_U and V_L,
//!   their window integrals 𝒢 and 𝒟, and the delta-extraction
//!   inequalities that justify replacing them by a point interaction.
//! - [`landau`]: the lowest-Landau-level projection on a transverse plane,
//!   for checking the dimensional reduction directly.
//! - [`asymptotics`]: ladders of field strengths, effective 1D functionals
//!   per rung, trial-state upper bounds, and the (ln B)² expansion fit.
//! - [`perturbation`]: perturbed functionals ℰ₀ − ε∫W|φ|², secant studies
//!   of ε ↦ 𝔢_ε, and density pairings.
//! - [`verify`]: named self-checks over all of the above.
//!
//! Field strengths enter through [`effpot::effective_strength`] and stay
//! finite up to B ≈ 1e300; everything computes in `f64`.

pub mod asymptotics;
pub mod closedform;
pub mod convolve;
pub mod effpot;
pub mod error;
pub mod functional;
pub mod grid;
pub mod landau;
pub mod p2;
pub mod perturbation;
pub mod quad;
pub mod solver;
pub mod verify;

pub use closedform::{pekar_energy_closed, sech_solution, SechSolution};
pub use effpot::{effective_strength, v_lower, v_upper, EULER_GAMMA};
pub use error::{
    EffPotError, FitError, GridError, LadderError, ParamError, PerturbError, SolveError,
};
pub use functional::{EnergySplit, FunctionalSpec, ModelParams};
pub use grid::{Grid1D, GridFn};
pub use solver::{minimize, SeedProfile, SolveOptions, SolveReport};
pub use verify::{run_verification, Fault, VerifyReport};
