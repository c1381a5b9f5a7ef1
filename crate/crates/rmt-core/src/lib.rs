//! Numerical toolkit for largest-eigenvalue statistics of the Gaussian
//! ensembles: Airy-kernel resolvent functionals, exact finite-n kernels and
//! their epsilon-operator functionals, hyperbolic closed forms for the
//! GOE/GSE corrections, large-n expansions evaluated term by term, and a
//! Monte-Carlo sampler used as an independent statistical oracle.

pub mod acceptance;
pub mod airy_system;
pub mod asymptotics;
pub mod error;
pub mod finite_n;
pub mod montecarlo;
pub mod operator;
pub mod specfun;

pub use airy_system::AirySystemContext;
pub use asymptotics::{ABPair, ExpansionValue};
pub use error::{Error, Result};
pub use finite_n::{Ensemble, FiniteEnsembleContext};
pub use montecarlo::{Beta, SampleRun};
pub use operator::DiscretizedOperator;
pub use specfun::{MapKind, QuadratureGrid, ScalingParams};
