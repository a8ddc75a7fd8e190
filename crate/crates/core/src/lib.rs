//! Exact polynomial normal forms and integrability tests for planar vector
//! fields whose leading part is a quadratic Lotka-Volterra system.

pub mod analyzer;
pub mod error;
pub mod family;
pub mod field;
pub mod harness;
pub mod homological;
pub mod linalg;
pub mod lv;
pub mod normal_form;
pub mod poly;
pub mod rational;

pub use error::{Error, Result};
pub use field::{HomoField, PlanarField};
pub use poly::{BiPoly, HomoPoly, Monomial};
pub use rational::Rational;
