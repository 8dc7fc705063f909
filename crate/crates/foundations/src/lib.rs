//! Exact arithmetic kernels shared by the hypertoric crates.
//!
//! Everything here is deterministic and free of floating point: rationals are
//! arbitrary precision, polynomial coefficients are checked integers, and
//! polyhedral feasibility is decided by Fourier–Motzkin elimination.

pub mod f2;
pub mod fm;
pub mod hilbert;
pub mod laurent;
pub mod modp;
pub mod rational;
pub mod snf;

pub use fm::{fm_feasible, Constraint, LinearSystem, Relation, SystemError};
pub use hilbert::{stanley_reisner_hilbert, HilbertSeries};
pub use laurent::LaurentPoly;
pub use rational::{format_rational, parse_rational, Rational};
pub use snf::{smith_normal_form, Snf, SparseIntMatrix};
