use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};

use super::{Backend, Field};
use crate::error::{Error, Result};
use crate::linalg;

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d(x)` by exact division.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of `Q(zeta_N)` in the power basis `1, z, ..., z^(phi-1)`,
/// stored as integer numerators over one positive common denominator in
/// lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloElem {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            return CycloElem {
                num,
                den: BigInt::one(),
            };
        }
        if !g.is_one() && !g.is_zero() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        CycloElem { num, den }
    }

    /// Power basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn from_coeffs(coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        CycloElem::normalized(num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element is the rational number `q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }
}

/// Exact arithmetic in the cyclotomic field `Q(zeta_N)` for a fixed `N`.
#[derive(Clone)]
pub struct CyclotomicField {
    n: u64,
    phi: usize,
    /// `x^e mod Phi_N` for `e` in `0..N`.
    xpow: Arc<Vec<Vec<i64>>>,
}

impl std::fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl CyclotomicField {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > 4096 {
            return Err(Error::InvalidInput(format!(
                "cyclotomic order must lie in 1..=4096, got {n}"
            )));
        }
        let modulus = cyclotomic_polynomial(n);
        let phi = modulus.len() - 1;
        let mut xpow = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            xpow.push(cur.clone());
            // multiply by x and reduce with the monic modulus
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            if top != 0 {
                for (j, nj) in next.iter_mut().enumerate() {
                    *nj -= top * modulus[j];
                }
            }
            cur = next;
        }
        Ok(CyclotomicField {
            n,
            phi,
            xpow: Arc::new(xpow),
        })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn from_rational(&self, q: &BigRational) -> CycloElem {
        let mut num = vec![BigInt::zero(); self.phi];
        num[0] = q.numer().clone();
        CycloElem::normalized(num, q.denom().clone())
    }

    /// Builds an element from power-basis coefficients; the length must be `phi(N)`.
    pub fn element(&self, coeffs: &[BigRational]) -> Result<CycloElem> {
        if coeffs.len() != self.phi {
            return Err(Error::BackendMismatch(format!(
                "expected {} coefficients for Q(zeta_{}), got {}",
                self.phi,
                self.n,
                coeffs.len()
            )));
        }
        Ok(CycloElem::from_coeffs(coeffs))
    }

    fn zeta_power(&self, e: u64) -> CycloElem {
        let row = &self.xpow[(e % self.n) as usize];
        CycloElem::normalized(row.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }
}

impl Field for CyclotomicField {
    type Elem = CycloElem;

    fn backend(&self) -> Backend {
        Backend::Cyclotomic(self.n)
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn zero(&self) -> CycloElem {
        CycloElem {
            num: vec![BigInt::zero(); self.phi],
            den: BigInt::one(),
        }
    }

    fn one(&self) -> CycloElem {
        self.from_ratio(1, 1)
    }

    fn from_ratio(&self, num: i64, den: i64) -> CycloElem {
        let mut v = vec![BigInt::zero(); self.phi];
        v[0] = BigInt::from(num);
        CycloElem::normalized(v, BigInt::from(den))
    }

    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return CycloElem::normalized(num, a.den.clone());
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        CycloElem::normalized(num, &a.den * &b.den)
    }

    fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut prod = vec![BigInt::zero(); 2 * self.phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = prod[..self.phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            let row = &self.xpow[k % self.n as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        CycloElem::normalized(out, &a.den * &b.den)
    }

    fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    fn inv(&self, a: &CycloElem) -> Option<CycloElem> {
        if a.is_zero() {
            return None;
        }
        // Solve (a * s) = 1 through the multiplication-by-a matrix.
        let mut columns = Vec::with_capacity(self.phi);
        for j in 0..self.phi {
            columns.push(self.mul(a, &self.zeta_power(j as u64)).coeffs());
        }
        let matrix: Vec<Vec<BigRational>> = (0..self.phi)
            .map(|i| (0..self.phi).map(|j| columns[j][i].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); self.phi];
        rhs[0] = BigRational::one();
        let sol = linalg::solve_rational(matrix, rhs)?;
        Some(CycloElem::from_coeffs(&sol))
    }

    fn is_exactly_zero(&self, a: &CycloElem) -> bool {
        a.is_zero()
    }

    fn is_zero(&self, a: &CycloElem) -> bool {
        a.is_zero()
    }

    fn equal(&self, a: &CycloElem, b: &CycloElem) -> bool {
        a == b
    }

    fn is_negligible(&self, a: &CycloElem, _scale: f64) -> bool {
        a.is_zero()
    }

    fn to_complex(&self, a: &CycloElem) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let step = 2.0 * std::f64::consts::PI / self.n as f64;
        for (k, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = BigRational::new(c.clone(), a.den.clone())
                .to_f64()
                .unwrap_or(f64::NAN);
            acc += Complex64::from_polar(v, step * k as f64);
        }
        acc
    }

    fn from_complex(&self, z: Complex64) -> Option<CycloElem> {
        let tol = 1e-9 * z.norm().max(1.0);
        match self.degree() {
            1 => {
                if z.im.abs() > tol {
                    return None;
                }
                let (p, q) = recognize_rational(z.re)?;
                Some(self.from_ratio(p, q))
            }
            2 => {
                // z = a + b zeta
                let zeta = self.zeta_power(1);
                let zc = self.to_complex(&zeta);
                let b = z.im / zc.im;
                let a = z.re - b * zc.re;
                let (ap, aq) = recognize_rational(a)?;
                let (bp, bq) = recognize_rational(b)?;
                Some(self.add(&self.from_ratio(ap, aq), &self.mul(&self.from_ratio(bp, bq), &zeta)))
            }
            _ => None,
        }
    }

    fn root_of_unity(&self, order: u64, power: i64) -> Result<CycloElem> {
        if order == 0 || !self.n.is_multiple_of(order) {
            return Err(Error::MissingRootOfUnity {
                n: self.n,
                order,
            });
        }
        let e = power.rem_euclid(order as i64) as u64 * (self.n / order);
        Ok(self.zeta_power(e))
    }

    fn nullspace(&self, rows: &[Vec<CycloElem>], ncols: usize) -> Vec<Vec<CycloElem>> {
        linalg::rref_nullspace(self, rows, ncols)
    }

    fn random(&self, rng: &mut dyn RngCore) -> CycloElem {
        let num = rng.random_range(-9..=9);
        let den = rng.random_range(1..=4);
        self.from_ratio(num, den)
    }

    fn tolerance(&self) -> f64 {
        0.0
    }
}

/// Continued-fraction recognition of a rational with denominator at most 10^5.
fn recognize_rational(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if k1 > 100_000 {
            return None;
        }
        if ((h1 as f64 / k1 as f64) - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some((h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}
