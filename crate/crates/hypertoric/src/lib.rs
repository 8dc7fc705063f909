//! Deformed hypertoric convolution algebras of polarized arrangements, their
//! standard modules, resolutions and Ext groups, with the cyclic and strands
//! comparisons.

pub mod arrangement;
pub mod convolution;
pub mod cyclic;
pub mod extcalc;
pub mod kzero;
pub mod random;
pub mod stdmod;
pub mod strands;

pub use arrangement::{format_subset, members, ArrangementError, PolarizedArrangement, SignVector, Subset};
