//! Concrete matrix groups over small finite fields and the permutation
//! actions they are certified against.
//!
//! The build path is always the same: write down explicit generators, act on
//! a finite domain (nonzero vectors, projective points, or quadratic forms),
//! and certify the permutation image against a closed-form order before
//! anything downstream is allowed to use the group.

pub mod atlas;
pub mod classical;
pub mod domain;
pub mod elements;
pub mod forms;
pub mod matrix;
pub mod polyf;
pub mod semilinear;
pub mod zoo;

pub use classical::MatGroup;
pub use domain::Domain;
pub use matrix::MatF;
pub use semilinear::SemilinearMap;
pub use zoo::ZooGroup;
