//! Finite, machine-checkable probes of partition regularity for
//! two-variable polynomial patterns over ℚ and ℤ.
//!
//! The pipeline: a [`pattern::Family`] of terms in `x, y` is instantiated on
//! a finite [`window::Window`]; the [`detector`] finds monochromatic
//! instances under a [`coloring::Coloring`]; [`search`] decides whether any
//! coloring avoids the pattern and emits certificates. [`rado`] checks the
//! columns condition for linear systems and [`largeset`] holds finite
//! versions of thick, syndetic, piecewise syndetic and IP-type sets.

pub mod arith;
pub mod coloring;
pub mod detector;
pub mod largeset;
pub mod pattern;
pub mod rado;
pub mod runner;
pub mod search;
pub mod window;

pub use arith::{PolynomialQ, Rational};
pub use coloring::Coloring;
pub use pattern::{Family, FamilyOptions, PatternTerm, Witness};
pub use window::Window;
