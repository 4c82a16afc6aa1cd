//! Computational engine for spread, uniform spread, fixed-point ratios and
//! probabilistic generation bounds of finite almost simple groups, with
//! empirical verification of class-level consequences of Shintani descent
//! for symplectic groups over small fields.

pub mod conjtab;
pub mod error;
pub mod ffield;
pub mod grpzoo;
pub mod permcore;
pub mod shintani;
pub mod spread;
pub mod subfpr;

pub use error::{Error, Result};
