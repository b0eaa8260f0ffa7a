//! Root finding on the boundary determinant.

pub mod bracket;
pub mod mode;
pub mod problem;
pub mod sweep;

pub use bracket::{refine_root, scan_brackets, RefineOptions, RootBracket, RootEstimate};
pub use mode::{
    mode_coefficients, nullspace_coefficients, trace_wavefunction, ModeCoefficients, NormConvention, Region,
    WavefunctionSample, WavefunctionTrace,
};
pub use problem::{solve_free_parameter, FreeParameter, ModeRoot, ParameterSet, SolveOptions};
pub use sweep::{sweep_square, BranchPoint, SquareSweep, SweepOptions, SweepRow};
