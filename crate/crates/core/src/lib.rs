pub mod acceptance;
pub mod continuum;
pub mod dense;
pub mod dicke;
pub mod entanglement;
pub mod error;
pub mod observables;
pub mod scaling;
pub mod spin;
pub mod tridiag;

pub use continuum::{QuarticConstants, QuarticSolution};
pub use dicke::{DickeOracleResult, DickeParams, SystemSize};
pub use entanglement::{BlockRdm, TwoQubitRdm};
pub use error::{Error, Result};
pub use observables::SpinMoments;
pub use scaling::{Observable, PowerLawFit, SweepParams, SweepTable};
pub use spin::{TridiagonalMatrix, UniaxialParams, Wavefunction};
pub use tridiag::SolverConfig;
