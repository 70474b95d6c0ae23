//! Coefficient rings, polynomials, Gröbner bases and algebra presentations.

pub mod coeff;
pub mod groebner;
pub mod poly;
pub mod presentation;

pub use coeff::{CoeffRing, Coefficient};
pub use poly::{Monomial, PolyRing, Polynomial};
pub use presentation::{AlgebraPresentation, RingMap};
