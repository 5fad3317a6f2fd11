use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::{Backend, Field};
use crate::error::{Error, Result};
use crate::linalg;

/// Double precision complex numbers with a configurable equality tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxComplex {
    /// Relative equality tolerance.
    pub eps_eq: f64,
    /// Relative singular value threshold for rank decisions.
    pub eps_rank: f64,
}

impl Default for ApproxComplex {
    fn default() -> Self {
        ApproxComplex {
            eps_eq: 1e-9,
            eps_rank: 1e-8,
        }
    }
}

impl ApproxComplex {
    pub fn new(eps_eq: f64, eps_rank: f64) -> Result<Self> {
        if !(eps_eq > 0.0 && eps_rank > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(ApproxComplex { eps_eq, eps_rank })
    }
}

impl Field for ApproxComplex {
    type Elem = Complex64;

    fn backend(&self) -> Backend {
        Backend::Complex
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn from_ratio(&self, num: i64, den: i64) -> Complex64 {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }

    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }

    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }

    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }

    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if a.norm() == 0.0 || !a.is_finite() {
            None
        } else {
            Some(a.inv())
        }
    }

    fn is_exactly_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }

    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.eps_eq
    }

    fn equal(&self, a: &Complex64, b: &Complex64) -> bool {
        let scale = 1f64.max(a.norm()).max(b.norm());
        (a - b).norm() <= self.eps_eq * scale
    }

    fn is_negligible(&self, a: &Complex64, scale: f64) -> bool {
        a.norm() <= self.eps_eq * scale
    }

    fn to_complex(&self, a: &Complex64) -> Complex64 {
        *a
    }

    fn from_complex(&self, z: Complex64) -> Option<Complex64> {
        z.is_finite().then_some(z)
    }

    fn root_of_unity(&self, order: u64, power: i64) -> Result<Complex64> {
        if order == 0 {
            return Err(Error::InvalidInput("root of unity of order 0".into()));
        }
        let k = power.rem_euclid(order as i64) as f64;
        Ok(Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * k / order as f64,
        ))
    }

    fn nullspace(&self, rows: &[Vec<Complex64>], ncols: usize) -> Vec<Vec<Complex64>> {
        linalg::svd_nullspace(rows, ncols, self.eps_rank)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Complex64 {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn tolerance(&self) -> f64 {
        self.eps_eq
    }
}
