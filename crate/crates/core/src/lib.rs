//! Sparse-grid generalized polynomial chaos surrogates for operators between
//! function spaces on the torus.
//!
//! The pipeline encodes an input field into coordinates of a parameter
//! cube, interpolates every output coordinate on its own Smolyak grid built
//! from Leja nodes, and decodes the result back into a field. The bundled
//! oracle is a pseudo-spectral solver for a periodic diffusion equation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocate;
pub mod error;
pub mod harness;
pub mod multiindex;
pub mod pde;
pub mod persist;
pub mod smolyak;
pub mod spaces;
pub mod surrogate;
pub mod univariate;

pub use allocate::{AllocationPlan, Variant};
pub use error::{Error, Result};
pub use harness::{Problem, StudyConfig};
pub use multiindex::{DownwardClosedSet, MultiIndex};
pub use pde::{IdentityOperator, Operator, PdeOracle};
pub use smolyak::SmolyakOperator;
pub use spaces::{CubeDomain, FourierBasisSpec, FourierField, WeightSequence};
pub use surrogate::{CandidatePool, ParametricMap, PoolMode, SurrogateModel};
pub use univariate::LejaSequence;
