//! Scalar backends.
//!
//! Every geometric object is generic over a [`Field`] context. The context
//! owns the arithmetic and the equality policy; elements are plain data.
//! Two backends exist: [`ApproxComplex`] (double precision complex numbers
//! with a tolerance policy) and [`CyclotomicField`] (exact arithmetic in
//! `Q(zeta_N)`). The type system keeps the two from mixing.

mod approx;
mod cyclotomic;

use std::fmt;

use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use approx::ApproxComplex;
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycloElem, CyclotomicField};

/// Backend tag carried by nets and files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Complex,
    Cyclotomic(u64),
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Complex => write!(f, "complex"),
            Backend::Cyclotomic(n) => write!(f, "cyclotomic({n})"),
        }
    }
}

pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn backend(&self) -> Backend;
    fn is_exact(&self) -> bool;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_ratio(&self, num: i64, den: i64) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_ratio(n, 1)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero (or, in the approximate backend, for a negligible value).
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Structural zero (no tolerance); used to skip work, never to decide.
    fn is_exactly_zero(&self, a: &Self::Elem) -> bool;
    /// Scalar equality with zero.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Scalar equality: exact coefficient equality, or
    /// `|a-b| <= eps * max(1, |a|, |b|)`.
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// Zero test relative to a known magnitude scale (used for determinants
    /// and minors of projective data). Exact backends ignore `scale`.
    fn is_negligible(&self, a: &Self::Elem, scale: f64) -> bool;

    fn to_complex(&self, a: &Self::Elem) -> Complex64;
    /// Inverse of the embedding where it can be decided; exact backends
    /// recognize small rational combinations of `1, zeta` in fields of degree
    /// at most 2 and return `None` otherwise.
    fn from_complex(&self, z: Complex64) -> Option<Self::Elem>;
    fn modulus(&self, a: &Self::Elem) -> f64 {
        self.to_complex(a).norm()
    }

    /// `zeta_order^power`. Exact backends require `order | N`.
    fn root_of_unity(&self, order: u64, power: i64) -> Result<Self::Elem>;

    /// Basis of the right kernel of the `rows.len() x ncols` matrix.
    fn nullspace(&self, rows: &[Vec<Self::Elem>], ncols: usize) -> Vec<Vec<Self::Elem>>;
    fn rank(&self, rows: &[Vec<Self::Elem>], ncols: usize) -> usize {
        ncols - self.nullspace(rows, ncols).len()
    }

    /// A random element of moderate size (small rationals in exact mode).
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// The equality tolerance (zero for exact backends).
    fn tolerance(&self) -> f64;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn scale_int(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_int(k))
    }
}
