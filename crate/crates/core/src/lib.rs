//! Clock and shift operators of the discrete Fourier transform.
//!
//! The crate builds the unitary pair `U` (clock) and `V` (shift) obeying
//! `UV = e^{iΦ} VU`, evaluates the uncertainty relation they satisfy,
//! computes the exact uncertainty frontier from the Harper Hamiltonian, and
//! checks the large-`d` behaviour and the signal-processing identities that
//! follow from the same operators.

pub mod asymptotics;
pub mod error;
pub mod linalg;
pub mod minstates;
pub mod operators;
pub mod signal;
pub mod uncertainty;

pub use asymptotics::{CommutatorSpectrumReport, GaussianState, Histogram, LocalizationParams};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, StateVector};
pub use minstates::{Figure1Row, FrontierCurve, FrontierSample, HarperResult, PhaseFix};
pub use num_complex::Complex64;
pub use operators::{IndexRange, OperatorSet};
pub use signal::{FeasibilityReport, PeriodicSignal, SignalStats, Verdict};
pub use uncertainty::{AuditReport, BoundParams, UncertaintyPoint};
