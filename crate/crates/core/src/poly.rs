//! Homogeneous polynomials in `(x, y, z)`.
//!
//! Monomials of degree `d` are ordered lexicographically by exponent triple,
//! highest power of `x` first, then of `y`. For cubics this is
//! `x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::Line;

/// Exponent triples of degree `d` in the fixed order.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Position of an exponent triple in [`monomials`].
pub fn monomial_index(e: [usize; 3]) -> usize {
    let d = e[0] + e[1] + e[2];
    let r = d - e[0];
    r * (r + 1) / 2 + (r - e[1])
}

pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Values of all degree-`d` monomials at a coordinate triple.
pub fn veronese<F: Field>(f: &F, d: usize, p: &[F::Elem; 3]) -> Vec<F::Elem> {
    let pows: Vec<Vec<F::Elem>> = p
        .iter()
        .map(|c| {
            let mut v = vec![f.one()];
            for k in 1..=d {
                let next = f.mul(&v[k - 1], c);
                v.push(next);
            }
            v
        })
        .collect();
    monomials(d)
        .into_iter()
        .map(|[a, b, c]| f.mul(&f.mul(&pows[0][a], &pows[1][b]), &pows[2][c]))
        .collect()
}

/// A ternary form of fixed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Form<E> {
    degree: usize,
    coeffs: Vec<E>,
}

impl<E: Clone> Form<E> {
    pub fn new(degree: usize, coeffs: Vec<E>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::InvalidInput(format!(
                "degree {degree} form needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        Ok(Form { degree, coeffs })
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, degree: usize) -> Self {
        Form {
            degree,
            coeffs: vec![f.zero(); monomial_count(degree)],
        }
    }

    pub fn from_ints<F: Field<Elem = E>>(f: &F, degree: usize, c: &[i64]) -> Result<Self> {
        Self::new(degree, c.iter().map(|&x| f.from_int(x)).collect())
    }

    /// Sparse constructor from `(coefficient, exponents)` terms.
    pub fn from_terms<F: Field<Elem = E>>(f: &F, degree: usize, terms: &[(E, [usize; 3])]) -> Self {
        let mut form = Self::zero(f, degree);
        for (c, e) in terms {
            debug_assert_eq!(e.iter().sum::<usize>(), degree);
            let i = monomial_index(*e);
            form.coeffs[i] = f.add(&form.coeffs[i], c);
        }
        form
    }

    pub fn linear(line: &Line<E>) -> Self {
        Form {
            degree: 1,
            coeffs: line.coords().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> &E {
        &self.coeffs[monomial_index(e)]
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, k: &E) -> Self {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, k)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let d = self.degree + other.degree;
        let mut out = Self::zero(f, d);
        let ma = monomials(self.degree);
        let mb = monomials(other.degree);
        for (ea, ca) in ma.iter().zip(&self.coeffs) {
            if f.is_exactly_zero(ca) {
                continue;
            }
            for (eb, cb) in mb.iter().zip(&other.coeffs) {
                if f.is_exactly_zero(cb) {
                    continue;
                }
                let i = monomial_index([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]);
                out.coeffs[i] = f.add(&out.coeffs[i], &f.mul(ca, cb));
            }
        }
        out
    }

    /// Product of the linear forms of a set of lines.
    pub fn product_of_lines<F: Field<Elem = E>>(f: &F, lines: &[Line<E>]) -> Self {
        let mut acc = Form {
            degree: 0,
            coeffs: vec![f.one()],
        };
        for l in lines {
            acc = acc.mul(f, &Form::linear(l));
        }
        acc
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, p: &[E; 3]) -> E {
        let v = veronese(f, self.degree, p);
        f.sum(v.iter().zip(&self.coeffs).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>().iter())
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn partial<F: Field<Elem = E>>(&self, f: &F, var: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(f, 0);
        }
        let mut out = Self::zero(f, self.degree - 1);
        for (e, c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if e[var] == 0 || f.is_exactly_zero(c) {
                continue;
            }
            let mut e2 = e;
            e2[var] -= 1;
            let i = monomial_index(e2);
            out.coeffs[i] = f.add(&out.coeffs[i], &f.scale_int(c, e[var] as i64));
        }
        out
    }

    pub fn gradient<F: Field<Elem = E>>(&self, f: &F, p: &[E; 3]) -> [E; 3] {
        [
            self.partial(f, 0).eval(f, p),
            self.partial(f, 1).eval(f, p),
            self.partial(f, 2).eval(f, p),
        ]
    }

    /// The form `v -> F(A v)` for a 3x3 matrix `A` given by rows.
    pub fn compose_linear<F: Field<Elem = E>>(&self, f: &F, a: &[[E; 3]; 3]) -> Self {
        let rows: Vec<Self> = a
            .iter()
            .map(|r| Form {
                degree: 1,
                coeffs: r.to_vec(),
            })
            .collect();
        let powers: Vec<Vec<Self>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![Form {
                    degree: 0,
                    coeffs: vec![f.one()],
                }];
                for k in 1..=self.degree {
                    let next = v[k - 1].mul(f, r);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(f, self.degree);
        for (e, c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if f.is_exactly_zero(c) {
                continue;
            }
            let term = powers[0][e[0]].mul(f, &powers[1][e[1]]).mul(f, &powers[2][e[2]]);
            out = out.add(f, &term.scale(f, c));
        }
        out
    }

    /// Coefficients of the binary form `F(s p + t q)`, highest power of `s`
    /// first.
    pub fn restrict_to_line<F: Field<Elem = E>>(&self, f: &F, p: &[E; 3], q: &[E; 3]) -> Vec<E> {
        // each coordinate is the binary linear form p_i s + q_i t
        let lin: Vec<Vec<E>> = (0..3).map(|i| vec![p[i].clone(), q[i].clone()]).collect();
        let mul = |a: &[E], b: &[E]| {
            let mut out = vec![f.zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
            out
        };
        let powers: Vec<Vec<Vec<E>>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![vec![f.one()]];
                for k in 1..=self.degree {
                    let next = mul(&v[k - 1], l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = vec![f.zero(); self.degree + 1];
        for (e, c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if f.is_exactly_zero(c) {
                continue;
            }
            let term = mul(&mul(&powers[0][e[0]], &powers[1][e[1]]), &powers[2][e[2]]);
            for (o, t) in out.iter_mut().zip(&term) {
                *o = f.add(o, &f.mul(t, c));
            }
        }
        out
    }

    pub fn map<G: Field>(&self, g: &G, conv: impl Fn(&E) -> G::Elem) -> Form<G::Elem> {
        let _ = g;
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(conv).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CyclotomicField;

    #[test]
    fn cubic_monomial_order() {
        let m = monomials(3);
        assert_eq!(
            m,
            vec![
                [3, 0, 0],
                [2, 1, 0],
                [2, 0, 1],
                [1, 2, 0],
                [1, 1, 1],
                [1, 0, 2],
                [0, 3, 0],
                [0, 2, 1],
                [0, 1, 2],
                [0, 0, 3]
            ]
        );
        for (i, e) in m.iter().enumerate() {
            assert_eq!(monomial_index(*e), i);
        }
        for d in 0..6 {
            for (i, e) in monomials(d).iter().enumerate() {
                assert_eq!(monomial_index(*e), i);
            }
        }
    }

    #[test]
    fn product_and_derivative() {
        let f = CyclotomicField::new(1).unwrap();
        let x = Line::from_ints(&f, [1, 0, 0]).unwrap();
        let y = Line::from_ints(&f, [0, 1, 0]).unwrap();
        let z = Line::from_ints(&f, [0, 0, 1]).unwrap();
        let xyz = Form::product_of_lines(&f, &[x, y, z]);
        assert_eq!(xyz.coeff([1, 1, 1]), &f.one());
        let dx = xyz.partial(&f, 0);
        assert_eq!(dx.coeff([0, 1, 1]), &f.one());
        let p = [f.from_int(2), f.from_int(3), f.from_int(5)];
        assert_eq!(xyz.eval(&f, &p), f.from_int(30));
    }

    #[test]
    fn restriction_matches_evaluation() {
        let f = CyclotomicField::new(1).unwrap();
        let fermat = Form::from_ints(&f, 3, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let p = [f.from_int(1), f.from_int(2), f.from_int(-1)];
        let q = [f.from_int(0), f.from_int(1), f.from_int(3)];
        let bin = fermat.restrict_to_line(&f, &p, &q);
        // evaluate at s = 2, t = -1
        let (s, t) = (f.from_int(2), f.from_int(-1));
        let pt = [
            f.add(&f.mul(&s, &p[0]), &f.mul(&t, &q[0])),
            f.add(&f.mul(&s, &p[1]), &f.mul(&t, &q[1])),
            f.add(&f.mul(&s, &p[2]), &f.mul(&t, &q[2])),
        ];
        let mut direct = f.zero();
        for (k, c) in bin.iter().enumerate() {
            let term = f.mul(c, &f.mul(&f.pow(&s, (3 - k) as u32), &f.pow(&t, k as u32)));
            direct = f.add(&direct, &term);
        }
        assert_eq!(direct, fermat.eval(&f, &pt));
    }
}
