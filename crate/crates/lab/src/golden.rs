//! Reference polynomials for uMPS(2,2,4) and the (3,2,4) subspace, shipped
//! as text files in the polynomial format.

use umps_core::arith::{QuadExt, Rational};
use umps_core::poly::{MultiPoly, PolyFile};

pub const F224: &str = include_str!("../data/f224.txt");
pub const I1: &str = include_str!("../data/I1.txt");
pub const I2: &str = include_str!("../data/I2.txt");
pub const I3: &str = include_str!("../data/I3.txt");
pub const J: &str = include_str!("../data/J.txt");
pub const SUBSPACE_324: &str = include_str!("../data/subspace_324.txt");

/// All golden files by name, as shipped.
pub const FILES: [(&str, &str); 6] = [
    ("f224", F224),
    ("I1", I1),
    ("I2", I2),
    ("I3", I3),
    ("J", J),
    ("subspace_324", SUBSPACE_324),
];

pub fn f224() -> MultiPoly<Rational> {
    let file = PolyFile::<Rational>::parse(F224).expect("golden f224 parses");
    file.polys.into_iter().next().expect("one polynomial")
}

fn rational_file(text: &str) -> PolyFile<Rational> {
    PolyFile::parse(text).expect("golden file parses")
}

fn quad_file(text: &str) -> PolyFile<QuadExt> {
    PolyFile::parse(text).expect("golden file parses")
}

/// Converts a rational file to `ℚ(√2)` coefficients.
fn lift_quad(file: PolyFile<Rational>) -> PolyFile<QuadExt> {
    let zero = QuadExt::from_rational(umps_core::arith::rat_int(0));
    let polys = file
        .polys
        .iter()
        .map(|p| p.map_coeffs(&zero, |c| QuadExt::from_rational(c.clone())))
        .collect();
    PolyFile {
        ring: file.ring,
        polys,
    }
}

/// `f224, I1, I2, I3, J`, all over `ℚ(√2)`.
pub struct Reference224 {
    pub f: MultiPoly<QuadExt>,
    pub i1: PolyFile<QuadExt>,
    pub i2: PolyFile<QuadExt>,
    pub i3: PolyFile<QuadExt>,
    pub j: PolyFile<QuadExt>,
}

pub fn reference_224() -> Reference224 {
    let f = lift_quad(rational_file(F224)).polys.remove(0);
    Reference224 {
        f,
        i1: lift_quad(rational_file(I1)),
        i2: quad_file(I2),
        i3: quad_file(I3),
        j: lift_quad(rational_file(J)),
    }
}

/// The 18 entries of the (3,2,4) subspace: first matrix then second,
/// row-major, as linear forms in six parameters.
pub fn subspace_324() -> PolyFile<Rational> {
    rational_file(SUBSPACE_324)
}
