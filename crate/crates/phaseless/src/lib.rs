//! Multi-window STFT phase retrieval on lattice samples.
//!
//! Signals are finite Hermite expansions; windows are linear combinations of
//! the first two Hermite functions, indexed by vectors `p = (λ, μ) ∈ ℂ²`.
//! Given the spectrogram magnitudes `|V_{g_p} f|` of one signal on a lattice
//! window for a family of at least four windows whose defining vectors do
//! phase retrieval in ℂ², the pipeline in [`reconstruct`] recovers the signal
//! up to a global phase — at lattice density 4 for complex signals and
//! density 2 for real ones.
//!
//! Module map:
//! - [`hermite`]: Hermite functions, Bargmann polynomials, closed-form STFT;
//! - [`frames`]: the ℂ² decision procedure, trilateration, local inversion;
//! - [`lattice`]: shifted lattices, densities, Γ decompositions;
//! - [`reconstruct`]: the sampling → recovery pipeline;
//! - [`oracle`]: slow quadrature and brute-force cross-checks for tests;
//! - [`io`]: the CSV sample-set format.

pub mod frames;
pub mod hermite;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod reconstruct;

pub use frames::{
    ambiguity_pair, canonicalize, does_phase_retrieval, local_solve, trilaterate, CanonicalFrame,
    Decision, DecisionReason, FrameC2, FrameError,
};
pub use hermite::{
    bargmann, eta, fock_norm, fock_shift, hermite_eval, inverse_bargmann, stft_value,
    BargmannPoly, HermiteSignal, WindowSpec,
};
pub use lattice::{
    gamma_decompositions, perelomov_uniqueness, separation_and_density_window, LatticeError,
    PointSet, ShiftedLattice,
};
pub use oracle::{
    ambiguity_search_c2, certificate_polynomial, stft_quadrature, OracleError, QuadRule,
    QuadratureGrid,
};
pub use reconstruct::{
    conjugate_extend, local_recovery, point_budget, reconstruct, reconstruct_real, sample,
    solve_bargmann, solve_bargmann_real, PhaseInvariantData, PhasePoint, ReconstructError,
    ReconstructOptions, ReconstructionReport, SampleSet, SolveOutcome, Status,
};
