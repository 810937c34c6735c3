//! Sparse multivariate polynomials, Gröbner bases and ideals.

pub mod groebner;
pub mod homogeneous;
pub mod ideal;
pub mod monomial;
pub mod multipoly;
pub mod text;

pub use groebner::{groebner_basis, is_groebner, normal_form, Budget};
pub use homogeneous::groebner_homogeneous_mod_p;
pub use ideal::{
    dimension_from_leading, groebner_mod_p, groebner_modular, quotient_degree_from_leading,
    reduce_mod_p, Ideal, ModularGroebner,
};
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use multipoly::{MultiPoly, PolyRing};
pub use text::{format_header, format_poly, parse_poly, PolyFile};
