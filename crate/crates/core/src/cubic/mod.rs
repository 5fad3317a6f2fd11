//! Plane cubics: evaluation, fitting, chords, group laws and classification.

mod algebraic;
mod classify;
mod complete;
mod flex;
pub(crate) mod roots;
mod singular;
mod weierstrass;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{cross, normalize_vec, triple_norm, Line, Point};
use crate::poly::{veronese, Form};

pub use algebraic::{is_algebraic, is_algebraic_with, Algebraicity};
pub use classify::{classify, CubicClass, CubicTag};
pub use complete::{abc_set, complete_set_check, dual_points_of, random_complete_set, t_kl, IndexSet};
pub use flex::flexes;
pub use singular::{canonical_cubic, pairing_third, singular_coords, singular_param, SingularCase};
pub use weierstrass::{weierstrass, EllipticData};

/// Gradient norm, relative to coefficient and point scale, below which a
/// point of the curve counts as singular.
pub const REGULARITY_TOL: f64 = 1e-8;

/// A nonzero ternary cubic form, stored projectively normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Cubic<E> {
    form: Form<E>,
}

impl<E: Clone> Cubic<E> {
    /// Coefficients in the order `x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3`.
    pub fn new<F: Field<Elem = E>>(f: &F, coeffs: Vec<E>) -> Result<Self> {
        if coeffs.len() != 10 {
            return Err(Error::InvalidInput(format!(
                "a cubic has 10 coefficients, got {}",
                coeffs.len()
            )));
        }
        let coeffs = normalize_vec(f, coeffs)
            .map_err(|_| Error::Degenerate("all cubic coefficients are zero".into()))?;
        Ok(Cubic {
            form: Form::new(3, coeffs)?,
        })
    }

    pub fn from_form<F: Field<Elem = E>>(f: &F, form: &Form<E>) -> Result<Self> {
        if form.degree() != 3 {
            return Err(Error::InvalidInput("form is not a cubic".into()));
        }
        Self::new(f, form.coeffs().to_vec())
    }

    pub fn from_ints<F: Field<Elem = E>>(f: &F, c: &[i64]) -> Result<Self> {
        Self::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    /// Product of three lines.
    pub fn from_lines<F: Field<Elem = E>>(f: &F, lines: &[Line<E>; 3]) -> Result<Self> {
        Self::from_form(f, &Form::product_of_lines(f, lines))
    }

    pub fn form(&self) -> &Form<E> {
        &self.form
    }

    pub fn coeffs(&self) -> &[E] {
        self.form.coeffs()
    }

    pub fn evaluate<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> E {
        self.form.eval(f, p.coords())
    }

    pub fn gradient<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> [E; 3] {
        self.form.gradient(f, p.coords())
    }

    fn coeff_norm<F: Field<Elem = E>>(&self, f: &F) -> f64 {
        self.coeffs().iter().map(|c| f.modulus(c)).fold(0.0, f64::max)
    }

    /// `|F(p)| / (|F| |p|^3)`; exact backends report 0 or 1.
    pub fn residual<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> f64 {
        let v = self.evaluate(f, p);
        if f.is_exact() {
            return if f.is_zero(&v) { 0.0 } else { 1.0 };
        }
        f.modulus(&v) / (self.coeff_norm(f) * triple_norm(f, p.coords()).powi(3))
    }

    /// `|grad F(p)| / (|F| |p|^2)`; exact backends report 0 or 1.
    pub fn gradient_size<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> f64 {
        let g = self.gradient(f, p);
        if f.is_exact() {
            return if g.iter().all(|x| f.is_zero(x)) { 0.0 } else { 1.0 };
        }
        triple_norm(f, &g) / (self.coeff_norm(f) * triple_norm(f, p.coords()).powi(2))
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> bool {
        let scale = self.coeff_norm(f) * triple_norm(f, p.coords()).powi(3);
        f.is_negligible(&self.evaluate(f, p), scale)
    }

    /// On the curve with a nonzero gradient.
    pub fn is_regular_point<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> bool {
        self.contains(f, p) && self.gradient_size(f, p) > REGULARITY_TOL
    }

    pub fn tangent_line<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> Result<Line<E>> {
        if !self.is_regular_point(f, p) {
            return Err(Error::NotRegular(crate::net::describe_point(f, p)));
        }
        Line::new(f, self.gradient(f, p))
    }

    /// Matrix of second partial derivatives at `p`.
    pub fn hessian_matrix<F: Field<Elem = E>>(&self, f: &F, p: &Point<E>) -> [[E; 3]; 3] {
        let rows: Vec<[E; 3]> = (0..3)
            .map(|i| self.form.partial(f, i).gradient(f, p.coords()))
            .collect();
        [rows[0].clone(), rows[1].clone(), rows[2].clone()]
    }

    /// Determinant of the matrix of second partials, a cubic form.
    pub fn hessian_form<F: Field<Elem = E>>(&self, f: &F) -> Form<E> {
        let h: Vec<Vec<Form<E>>> = (0..3)
            .map(|i| {
                let di = self.form.partial(f, i);
                (0..3).map(|j| di.partial(f, j)).collect()
            })
            .collect();
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            h[1][a].mul(f, &h[2][b]).sub(f, &h[1][c].mul(f, &h[2][d]))
        };
        h[0][0]
            .mul(f, &minor(1, 2, 2, 1))
            .sub(f, &h[0][1].mul(f, &minor(0, 2, 2, 0)))
            .add(f, &h[0][2].mul(f, &minor(0, 1, 1, 0)))
    }

    /// The cubic `F(A v)`, i.e. the image under the coordinate change `v -> A^{-1} v`.
    pub fn transform<F: Field<Elem = E>>(&self, f: &F, a: &[[E; 3]; 3]) -> Result<Self> {
        Self::from_form(f, &self.form.compose_linear(f, a))
    }

    pub fn to_complex<F: Field<Elem = E>>(&self, f: &F) -> Cubic<Complex64> {
        Cubic {
            form: self.form.map(&crate::field::ApproxComplex::default(), |c| f.to_complex(c)),
        }
    }
}

/// JSON shape of a cubic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubicJson<S> {
    pub coeffs: Vec<S>,
}

/// Basis of the cubics through every point (empty when only the zero form does).
pub fn fit_cubics<F: Field>(f: &F, points: &[Point<F::Elem>]) -> Vec<Cubic<F::Elem>> {
    let rows: Vec<Vec<F::Elem>> = points.iter().map(|p| veronese(f, 3, p.coords())).collect();
    f.nullspace(&rows, 10)
        .into_iter()
        .filter_map(|v| Cubic::new(f, v).ok())
        .collect()
}

/// A point of the tangent line `t` at `p` other than `p`.
fn second_point_on<F: Field>(f: &F, t: &Line<F::Elem>, p: &Point<F::Elem>) -> Result<Point<F::Elem>> {
    let k = (0..3)
        .max_by(|&a, &b| f.modulus(&p.coords()[a]).total_cmp(&f.modulus(&p.coords()[b])))
        .unwrap();
    let mut axis = [f.zero(), f.zero(), f.zero()];
    axis[k] = f.one();
    Point::new(f, cross(f, t.coords(), &axis))
}

/// Third intersection of the line through `p` and `q` (the tangent when they
/// coincide) with the cubic, counted with multiplicity.
pub fn chord<F: Field>(f: &F, c: &Cubic<F::Elem>, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Result<Point<F::Elem>> {
    for x in [p, q] {
        if !c.is_regular_point(f, x) {
            return Err(Error::NotRegular(crate::net::describe_point(f, x)));
        }
    }
    let tangent = p.equals(f, q);
    let q = if tangent {
        second_point_on(f, &c.tangent_line(f, p)?, p)?
    } else {
        q.clone()
    };
    let r = c.form().restrict_to_line(f, p.coords(), q.coords());
    let scale = c.coeff_norm(f) * (triple_norm(f, p.coords()) + triple_norm(f, q.coords())).powi(3);
    // F(sp + tq) = s t (b s + c t) for distinct points, t^2 (c s + d t) along a tangent.
    let (u, v) = if tangent { (&r[3], &r[2]) } else { (&r[2], &r[1]) };
    if f.is_negligible(u, scale) && f.is_negligible(v, scale) {
        return Err(Error::ComponentChord);
    }
    crate::geom::combine(f, u, p, &f.neg(v), &q)
}

/// The chord-tangent group on a cubic with a flex as neutral element.
#[derive(Debug, Clone)]
pub struct CubicGroup<F: Field> {
    field: F,
    cubic: Cubic<F::Elem>,
    zero: Point<F::Elem>,
}

impl<F: Field> CubicGroup<F> {
    pub fn new(field: F, cubic: Cubic<F::Elem>, zero: Point<F::Elem>) -> Result<Self> {
        if !cubic.is_regular_point(&field, &zero) {
            return Err(Error::NotAFlex);
        }
        let t = chord(&field, &cubic, &zero, &zero)?;
        if !t.equals(&field, &zero) {
            return Err(Error::NotAFlex);
        }
        Ok(CubicGroup { field, cubic, zero })
    }

    /// Uses the flex whose last coordinate has the largest relative modulus.
    pub fn with_default_zero(field: F, cubic: Cubic<F::Elem>) -> Result<Self> {
        let fl = flexes(&field, &cubic)?;
        let weight = |p: &Point<F::Elem>| field.modulus(&p.coords()[2]) / triple_norm(&field, p.coords()).max(1e-300);
        let zero = fl
            .into_iter()
            .max_by(|a, b| weight(a).total_cmp(&weight(b)))
            .ok_or_else(|| Error::Numeric("no flex found".into()))?;
        Self::new(field, cubic, zero)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn cubic(&self) -> &Cubic<F::Elem> {
        &self.cubic
    }

    pub fn zero(&self) -> &Point<F::Elem> {
        &self.zero
    }

    pub fn add(&self, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Result<Point<F::Elem>> {
        let m = chord(&self.field, &self.cubic, p, q)?;
        chord(&self.field, &self.cubic, &self.zero, &m)
    }

    pub fn neg(&self, p: &Point<F::Elem>) -> Result<Point<F::Elem>> {
        chord(&self.field, &self.cubic, &self.zero, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ApproxComplex, CyclotomicField};
    use crate::geom::{collinear, random_point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FERMAT: [i64; 10] = [1, 0, 0, 0, 0, 0, 1, 0, 0, 1];

    #[test]
    fn evaluation_and_regularity() {
        let f = CyclotomicField::new(1).unwrap();
        let fermat = Cubic::from_ints(&f, &FERMAT).unwrap();
        let p = Point::from_ints(&f, [1, -1, 0]).unwrap();
        assert!(f.is_zero(&fermat.evaluate(&f, &p)));
        let g = fermat.gradient(&f, &p);
        assert_eq!(g, [f.from_int(3), f.from_int(3), f.zero()]);
        assert!(fermat.is_regular_point(&f, &p));

        let o = Point::from_ints(&f, [0, 0, 1]).unwrap();
        let nodal = Cubic::from_ints(&f, &[1, 0, 1, 0, 0, 0, 0, -1, 0, 0]).unwrap();
        assert!(nodal.contains(&f, &o) && !nodal.is_regular_point(&f, &o));
        let cusp = Cubic::from_ints(&f, &[1, 0, 0, 0, 0, 0, 0, -1, 0, 0]).unwrap();
        assert!(cusp.contains(&f, &o) && !cusp.is_regular_point(&f, &o));
    }

    #[test]
    fn fermat_chord_and_flex() {
        let f = CyclotomicField::new(3).unwrap();
        let fermat = Cubic::from_ints(&f, &FERMAT).unwrap();
        let p = Point::from_ints(&f, [1, -1, 0]).unwrap();
        let q = Point::from_ints(&f, [1, 0, -1]).unwrap();
        let r = chord(&f, &fermat, &p, &q).unwrap();
        assert!(r.equals(&f, &Point::from_ints(&f, [0, 1, -1]).unwrap()));
        assert!(chord(&f, &fermat, &p, &p).unwrap().equals(&f, &p));

        let h = fermat.hessian_form(&f);
        let xyz = Form::from_ints(&f, 3, &[0, 0, 0, 0, 216, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(h, xyz);
    }

    #[test]
    fn chord_along_component_errors() {
        let f = CyclotomicField::new(1).unwrap();
        let xyz = Cubic::from_ints(&f, &[0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        let p = Point::from_ints(&f, [0, 1, 1]).unwrap();
        let q = Point::from_ints(&f, [0, 1, 2]).unwrap();
        assert_eq!(chord(&f, &xyz, &p, &q), Err(Error::ComponentChord));
    }

    #[test]
    fn fermat_group_law() {
        let f = CyclotomicField::new(3).unwrap();
        let fermat = Cubic::from_ints(&f, &FERMAT).unwrap();
        let zero = Point::from_ints(&f, [1, -1, 0]).unwrap();
        let g = CubicGroup::new(f.clone(), fermat.clone(), zero.clone()).unwrap();
        let p = Point::from_ints(&f, [1, 0, -1]).unwrap();
        let q = Point::from_ints(&f, [0, 1, -1]).unwrap();
        assert!(g.add(&p, &zero).unwrap().equals(&f, &p));
        assert!(g.add(&p, &g.neg(&p).unwrap()).unwrap().equals(&f, &zero));
        let r = chord(&f, &fermat, &p, &q).unwrap();
        let s = g.add(&g.add(&p, &q).unwrap(), &r).unwrap();
        assert!(s.equals(&f, &zero));
    }

    #[test]
    fn rejects_non_flex_zero() {
        let f = ApproxComplex::default();
        let nodal = Cubic::from_ints(&f, &[1, 0, 1, 0, 0, 0, 0, -1, 0, 0]).unwrap();
        // (-1:0:1) lies on x^3+x^2z-y^2z but is not a flex.
        let p = Point::from_ints(&f, [-1, 0, 1]).unwrap();
        assert!(nodal.is_regular_point(&f, &p));
        assert_eq!(CubicGroup::new(f, nodal, p).unwrap_err(), Error::NotAFlex);
    }

    #[test]
    fn fit_dimension_for_random_points() {
        let f = ApproxComplex::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=10 {
            let pts: Vec<_> = (0..k).map(|_| random_point(&f, &mut rng)).collect();
            assert_eq!(fit_cubics(&f, &pts).len(), 10usize.saturating_sub(k));
        }
    }

    #[test]
    fn chord_symmetry_on_random_smooth_cubic() {
        let f = ApproxComplex::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<_> = (0..9).map(|_| random_point(&f, &mut rng)).collect();
        let c = fit_cubics(&f, &pts).remove(0);
        let r = chord(&f, &c, &pts[0], &pts[1]).unwrap();
        assert!(c.contains(&f, &r));
        assert!(collinear(&f, &pts[0], &pts[1], &r));
        assert!(chord(&f, &c, &pts[1], &pts[0]).unwrap().equals(&f, &r));
        assert!(chord(&f, &c, &pts[0], &r).unwrap().equals(&f, &pts[1]));
    }
}
