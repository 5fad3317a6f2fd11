//! Parametrizations of the regular locus of the six singular cubic types,
//! under which collinearity becomes the group relation.
//!
//! | case | curve           | components and maps                                       | collinear iff |
//! |------|-----------------|-----------------------------------------------------------|---------------|
//! | 1a   | x^3+x^2z-y^2z   | t -> (4t(1-t) : 4t(1+t) : (1-t)^3)                        | t1 t2 t3 = 1  |
//! | 1b   | x^3-y^2z        | s -> (s : 1 : s^3)                                        | s1+s2+s3 = 0  |
//! | 2a   | (x^2+y^2-z^2)z  | Q: s -> (1+s^2 : i(1-s^2) : 2s), L: t -> (1-t : i(1+t) : 0) | t = s1 s2     |
//! | 2b   | (x^2-yz)z       | Q: s -> (s : s^2 : 1), L: t -> (1 : t : 0)                | t = s1+s2     |
//! | 3a   | xyz             | (0 : a : 1), (1 : 0 : b), (1 : -c : 0)                    | c = ab        |
//! | 3b   | xy(x-y)         | (0 : 1 : a), (1 : 0 : b), (1 : 1 : c)                     | c = a+b       |
//!
//! The maps for 1a, 2b and 3a differ from the commonly printed ones, which do
//! not satisfy the stated curve or incidence equations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Cubic;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularCase {
    #[serde(rename = "1a")]
    Nodal,
    #[serde(rename = "1b")]
    Cuspidal,
    #[serde(rename = "2a")]
    ConicLineTransverse,
    #[serde(rename = "2b")]
    ConicLineTangent,
    #[serde(rename = "3a")]
    Triangle,
    #[serde(rename = "3b")]
    Concurrent,
}

impl SingularCase {
    pub const ALL: [SingularCase; 6] = [
        SingularCase::Nodal,
        SingularCase::Cuspidal,
        SingularCase::ConicLineTransverse,
        SingularCase::ConicLineTangent,
        SingularCase::Triangle,
        SingularCase::Concurrent,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            SingularCase::Nodal => "1a",
            SingularCase::Cuspidal => "1b",
            SingularCase::ConicLineTransverse => "2a",
            SingularCase::ConicLineTangent => "2b",
            SingularCase::Triangle => "3a",
            SingularCase::Concurrent => "3b",
        }
    }

    /// Multiplicative cases use parameters in `C*`, additive ones in `C`.
    pub fn is_multiplicative(&self) -> bool {
        matches!(
            self,
            SingularCase::Nodal | SingularCase::ConicLineTransverse | SingularCase::Triangle
        )
    }

    /// Number of parametrized components (1 irreducible, 2 conic + line, 3 lines).
    pub fn components(&self) -> usize {
        match self {
            SingularCase::Nodal | SingularCase::Cuspidal => 1,
            SingularCase::ConicLineTransverse | SingularCase::ConicLineTangent => 2,
            SingularCase::Triangle | SingularCase::Concurrent => 3,
        }
    }

    /// Components of the three collinear points produced by [`pairing_third`].
    pub fn triple_components(&self) -> [usize; 3] {
        match self.components() {
            1 => [0, 0, 0],
            2 => [0, 0, 1],
            _ => [0, 1, 2],
        }
    }

    /// Largest root-of-unity order the construction needs (`i` for case 2a).
    pub fn needs_root_of_unity(&self) -> Option<u64> {
        (*self == SingularCase::ConicLineTransverse).then_some(4)
    }
}

impl fmt::Display for SingularCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SingularCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SingularCase::ALL
            .into_iter()
            .find(|c| c.code() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown singular case {s:?}; expected one of 1a 1b 2a 2b 3a 3b")))
    }
}

/// The canonical curve of a case.
pub fn canonical_cubic<F: Field>(f: &F, case: SingularCase) -> Result<Cubic<F::Elem>> {
    let c: [i64; 10] = match case {
        SingularCase::Nodal => [1, 0, 1, 0, 0, 0, 0, -1, 0, 0],
        SingularCase::Cuspidal => [1, 0, 0, 0, 0, 0, 0, -1, 0, 0],
        SingularCase::ConicLineTransverse => [0, 0, 1, 0, 0, 0, 0, 1, 0, -1],
        SingularCase::ConicLineTangent => [0, 0, 1, 0, 0, 0, 0, 0, -1, 0],
        SingularCase::Triangle => [0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        SingularCase::Concurrent => [0, 1, 0, -1, 0, 0, 0, 0, 0, 0],
    };
    Cubic::from_ints(f, &c)
}

fn excluded(what: &str) -> Error {
    Error::InvalidInput(format!("parameter value excluded: {what}"))
}

/// The point of component `component` with parameter `s`.
pub fn singular_param<F: Field>(f: &F, case: SingularCase, component: usize, s: &F::Elem) -> Result<Point<F::Elem>> {
    Point::new(f, singular_coords(f, case, component, s)?).map_err(|_| excluded("the map degenerates"))
}

/// Homogeneous coordinates of [`singular_param`] exactly as the map gives
/// them, before projective normalization.
pub fn singular_coords<F: Field>(f: &F, case: SingularCase, component: usize, s: &F::Elem) -> Result<[F::Elem; 3]> {
    if component >= case.components() {
        return Err(Error::InvalidInput(format!(
            "case {case} has {} components, got component {component}",
            case.components()
        )));
    }
    if case.is_multiplicative() && f.is_zero(s) {
        return Err(excluded("0 is not in the multiplicative group"));
    }
    let one = f.one();
    let i = || f.root_of_unity(4, 1);
    let coords = match (case, component) {
        (SingularCase::Nodal, _) => {
            // (4t(1-t) : 4t(1+t) : (1-t)^3)
            let four_t = f.scale_int(s, 4);
            let a = f.sub(&one, s);
            let b = f.add(&one, s);
            [f.mul(&four_t, &a), f.mul(&four_t, &b), f.pow(&a, 3)]
        }
        (SingularCase::Cuspidal, _) => [s.clone(), one, f.pow(s, 3)],
        (SingularCase::ConicLineTransverse, 0) => {
            let s2 = f.mul(s, s);
            [f.add(&one, &s2), f.mul(&i()?, &f.sub(&one, &s2)), f.scale_int(s, 2)]
        }
        (SingularCase::ConicLineTransverse, _) => {
            [f.sub(&one, s), f.mul(&i()?, &f.add(&one, s)), f.zero()]
        }
        (SingularCase::ConicLineTangent, 0) => [s.clone(), f.mul(s, s), one],
        (SingularCase::ConicLineTangent, _) => [one, s.clone(), f.zero()],
        (SingularCase::Triangle, 0) => [f.zero(), s.clone(), one],
        (SingularCase::Triangle, 1) => [one, f.zero(), s.clone()],
        (SingularCase::Triangle, _) => [one, f.neg(s), f.zero()],
        (SingularCase::Concurrent, 0) => [f.zero(), one, s.clone()],
        (SingularCase::Concurrent, 1) => [one, f.zero(), s.clone()],
        (SingularCase::Concurrent, _) => [one.clone(), one, s.clone()],
    };
    Ok(coords)
}

/// Parameter of the third collinear point given the first two parameters, on
/// the components listed by [`SingularCase::triple_components`].
pub fn pairing_third<F: Field>(f: &F, case: SingularCase, a: &F::Elem, b: &F::Elem) -> Result<F::Elem> {
    Ok(match case {
        SingularCase::Nodal => {
            let ab = f.mul(a, b);
            f.inv(&ab).ok_or_else(|| excluded("0 is not in the multiplicative group"))?
        }
        SingularCase::Cuspidal => f.neg(&f.add(a, b)),
        SingularCase::ConicLineTransverse | SingularCase::Triangle => f.mul(a, b),
        SingularCase::ConicLineTangent | SingularCase::Concurrent => f.add(a, b),
    })
}
