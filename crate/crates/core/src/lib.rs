//! Exact computations with difference algebraic subgroups of GL_n, G_a^n and
//! G_m^n over ℚ, where σ acts as the index shift on coordinates.

pub mod ambient;
pub mod components;
pub mod diff;
pub mod error;
pub mod extended;
pub mod files;
mod groebner;
pub mod hopf;
pub mod ideal;
mod linalg;
pub mod morphisms;
pub mod poly;
pub mod quotients;
pub mod reps;
pub mod text;
pub mod tower;
pub mod univariate;

pub use error::{Error, Result};
pub use extended::Extended;
pub use groebner::MonomialOrder;
pub use ideal::{eliminate, groebner, ideal_equal, krull_dim, normal_form, vecdim, IdealBasis};
pub use poly::{Coord, Monomial, Polynomial, Rational, Space, VarId};
pub use text::{parse_poly, print_poly};
