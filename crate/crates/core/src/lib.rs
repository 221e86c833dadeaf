//! Finite probability theory recast as quantum mechanics over sets.
//!
//! Subsets of a finite universe `U` form the vector space `Z_2^n`. States are
//! nonempty subsets, observables are rational-valued attributes on `U`, and
//! the Born rule reduces to the Laplace-Boole conditional probability
//! `|f⁻¹(r) ∩ S| / |S|`. All probabilities and matrix entries are exact
//! rationals.
//!
//! Modules:
//! - [`gf2`]: universes, subset vectors, GF(2) matrices, orbits.
//! - [`states`]: bases, kets, the ket table, brackets and norms.
//! - [`observables`]: attributes, projectors, Born rule, measurement.
//! - [`partitions`]: refinement, join, distinctions, logical entropy.
//! - [`density`]: density matrices and the measurement superoperator.
//! - [`dynamics`]: non-singular evolution and the two-slit experiment.

pub mod density;
pub mod dynamics;
pub mod error;
pub mod gf2;
pub mod observables;
pub mod partitions;
pub mod rational;
pub mod sampling;
pub mod states;

pub use density::{DensityMatrix, ProjectorMatrix, RationalMatrix};
pub use dynamics::{Dynamics, SlitMode, TwoSlitConfig, TwoSlitResult};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Orbit, SubsetVector, Universe};
pub use observables::{Attribute, LabelDistribution, MeasurementOutcome, Projector};
pub use partitions::{DitSet, Partition, Relation};
pub use rational::Rational;
pub use sampling::SeededRng;
pub use states::{Basis, Ket, KetTable};
