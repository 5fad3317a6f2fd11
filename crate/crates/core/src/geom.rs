//! Projective plane primitives over a [`Field`] backend.
//!
//! Points and lines are coordinate triples up to scale. Approximate
//! equality never divides: two triples are equal when all 2x2 minors of the
//! stacked matrix are negligible relative to the product of the row norms.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;

macro_rules! projective_triple {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A ", $what, " of the projective plane, stored normalized.")]
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<E> {
            coords: [E; 3],
        }

        impl<E: Clone> $name<E> {
            /// Normalizes the triple; errors when every coordinate is zero.
            pub fn new<F: Field<Elem = E>>(f: &F, coords: [E; 3]) -> Result<Self> {
                Ok($name {
                    coords: normalize(f, coords)?,
                })
            }

            pub fn coords(&self) -> &[E; 3] {
                &self.coords
            }

            pub fn into_coords(self) -> [E; 3] {
                self.coords
            }

            pub fn from_ints<F: Field<Elem = E>>(f: &F, c: [i64; 3]) -> Result<Self> {
                Self::new(f, [f.from_int(c[0]), f.from_int(c[1]), f.from_int(c[2])])
            }

            /// Same-scale equality under the backend's tolerance policy.
            pub fn equals<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
                triples_equal(f, &self.coords, &other.coords)
            }
        }
    };
}

projective_triple!(Point, "point");
projective_triple!(Line, "line (the coefficients of a linear form)");

fn normalize<F: Field>(f: &F, coords: [F::Elem; 3]) -> Result<[F::Elem; 3]> {
    let v = normalize_vec(f, coords.to_vec())?;
    let [a, b, c]: [F::Elem; 3] = v.try_into().unwrap();
    Ok([a, b, c])
}

/// Projective normalization of a coefficient vector: the last nonzero entry
/// becomes 1 (exact) or the entry of largest modulus becomes 1 (approximate).
pub fn normalize_vec<F: Field>(f: &F, coords: Vec<F::Elem>) -> Result<Vec<F::Elem>> {
    let pivot = if f.is_exact() {
        (0..coords.len()).rev().find(|&i| !f.is_zero(&coords[i]))
    } else {
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in coords.iter().enumerate() {
            let m = f.modulus(c);
            if !m.is_finite() {
                return Err(Error::Numeric("non-finite coordinate".into()));
            }
            if m > 0.0 && best.is_none_or(|(_, b)| m >= b) {
                best = Some((i, m));
            }
        }
        best.map(|(i, _)| i)
    };
    let pivot = pivot.ok_or_else(|| Error::Degenerate("all coordinates are zero".into()))?;
    let inv = f
        .inv(&coords[pivot])
        .ok_or_else(|| Error::Numeric("pivot could not be inverted".into()))?;
    let mut out: Vec<F::Elem> = coords.iter().map(|x| f.mul(x, &inv)).collect();
    out[pivot] = f.one();
    Ok(out)
}

/// Euclidean norm of the complex embedding (1 for exact backends, whose
/// zero tests ignore scale).
pub fn triple_norm<F: Field>(f: &F, t: &[F::Elem; 3]) -> f64 {
    if f.is_exact() {
        return 1.0;
    }
    t.iter().map(|x| f.modulus(x).powi(2)).sum::<f64>().sqrt()
}

pub fn cross<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> [F::Elem; 3] {
    let m = |i: usize, j: usize| f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
    [m(1, 2), m(2, 0), m(0, 1)]
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> F::Elem {
    let t0 = f.mul(&a[0], &b[0]);
    let t1 = f.mul(&a[1], &b[1]);
    let t2 = f.mul(&a[2], &b[2]);
    f.add(&f.add(&t0, &t1), &t2)
}

pub fn det3<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3], c: &[F::Elem; 3]) -> F::Elem {
    dot(f, a, &cross(f, b, c))
}

fn triples_equal<F: Field>(f: &F, a: &[F::Elem; 3], b: &[F::Elem; 3]) -> bool {
    let scale = if f.is_exact() {
        1.0
    } else {
        triple_norm(f, a).max(triple_norm(f, b)).powi(2)
    };
    cross(f, a, b).iter().all(|m| f.is_negligible(m, scale))
}

pub fn incident<F: Field>(f: &F, p: &Point<F::Elem>, l: &Line<F::Elem>) -> bool {
    let v = dot(f, &p.coords, &l.coords);
    f.is_negligible(&v, triple_norm(f, &p.coords) * triple_norm(f, &l.coords))
}

/// The line through two distinct points.
pub fn join<F: Field>(f: &F, p: &Point<F::Elem>, q: &Point<F::Elem>) -> Result<Line<F::Elem>> {
    if p.equals(f, q) {
        return Err(Error::Degenerate("join of equal points".into()));
    }
    Line::new(f, cross(f, &p.coords, &q.coords))
}

/// The intersection point of two distinct lines.
pub fn meet<F: Field>(f: &F, l: &Line<F::Elem>, m: &Line<F::Elem>) -> Result<Point<F::Elem>> {
    if l.equals(f, m) {
        return Err(Error::Degenerate("meet of equal lines".into()));
    }
    Point::new(f, cross(f, &l.coords, &m.coords))
}

pub fn dual_point<E: Clone>(p: &Point<E>) -> Line<E> {
    Line {
        coords: p.coords.clone(),
    }
}

pub fn dual_line<E: Clone>(l: &Line<E>) -> Point<E> {
    Point {
        coords: l.coords.clone(),
    }
}

pub fn collinear<F: Field>(f: &F, p: &Point<F::Elem>, q: &Point<F::Elem>, r: &Point<F::Elem>) -> bool {
    let d = det3(f, &p.coords, &q.coords, &r.coords);
    let scale = triple_norm(f, &p.coords) * triple_norm(f, &q.coords) * triple_norm(f, &r.coords);
    f.is_negligible(&d, scale)
}

pub fn concurrent<F: Field>(f: &F, l: &Line<F::Elem>, m: &Line<F::Elem>, n: &Line<F::Elem>) -> bool {
    collinear(f, &dual_line(l), &dual_line(m), &dual_line(n))
}

/// `|det(p, q, r)| / (|p| |q| |r|)` in the complex embedding.
pub fn det_residual<F: Field>(f: &F, p: &[F::Elem; 3], q: &[F::Elem; 3], r: &[F::Elem; 3]) -> f64 {
    let d = f.modulus(&det3(f, p, q, r));
    let n = |t: &[F::Elem; 3]| t.iter().map(|x| f.modulus(x).powi(2)).sum::<f64>().sqrt();
    d / (n(p) * n(q) * n(r))
}

/// Cross-ratio `cr(p1, p2; p3, p4)` of four collinear points, normalized so
/// that points with affine parameters `0, inf, 1, lambda` give `lambda`.
pub fn cross_ratio<F: Field>(f: &F, pts: [&Point<F::Elem>; 4]) -> Result<F::Elem> {
    let mut distinct: Vec<&Point<F::Elem>> = Vec::new();
    for p in pts {
        if !distinct.iter().any(|q| q.equals(f, p)) {
            distinct.push(p);
        }
    }
    if distinct.len() < 3 {
        return Err(Error::Degenerate(
            "cross-ratio needs at least three distinct points".into(),
        ));
    }
    let line = join(f, distinct[0], distinct[1])?;
    if pts.iter().any(|p| !incident(f, p, &line)) {
        return Err(Error::InvalidInput("cross-ratio of non-collinear points".into()));
    }
    // Project to P^1 by dropping a coordinate on which the line's equation
    // is nonzero; brackets [ij] are the 2x2 minors on the remaining pair.
    let drop = if f.is_exact() {
        (0..3).find(|&i| !f.is_zero(&line.coords[i])).unwrap()
    } else {
        (0..3)
            .max_by(|&a, &b| f.modulus(&line.coords[a]).total_cmp(&f.modulus(&line.coords[b])))
            .unwrap()
    };
    let (u, v) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let bracket = |a: &Point<F::Elem>, b: &Point<F::Elem>| {
        f.sub(
            &f.mul(&a.coords[u], &b.coords[v]),
            &f.mul(&a.coords[v], &b.coords[u]),
        )
    };
    let [p1, p2, p3, p4] = pts;
    let num = f.mul(&bracket(p1, p4), &bracket(p2, p3));
    let den = f.mul(&bracket(p1, p3), &bracket(p2, p4));
    f.div(&num, &den)
        .filter(|_| !f.is_zero(&den))
        .ok_or_else(|| Error::Degenerate("cross-ratio is infinite".into()))
}

pub fn random_point<F: Field>(f: &F, rng: &mut dyn RngCore) -> Point<F::Elem> {
    loop {
        if let Ok(p) = Point::new(f, [f.random(rng), f.random(rng), f.random(rng)]) {
            return p;
        }
    }
}

pub fn random_line<F: Field>(f: &F, rng: &mut dyn RngCore) -> Line<F::Elem> {
    dual_point(&random_point(f, rng))
}

/// The point `s p + t q` on the line through `p` and `q`.
pub fn combine<F: Field>(
    f: &F,
    s: &F::Elem,
    p: &Point<F::Elem>,
    t: &F::Elem,
    q: &Point<F::Elem>,
) -> Result<Point<F::Elem>> {
    let c = |i: usize| f.add(&f.mul(s, &p.coords[i]), &f.mul(t, &q.coords[i]));
    Point::new(f, [c(0), c(1), c(2)])
}

/// A random point on the line through `p` and `q`, distinct from both.
pub fn random_point_on<F: Field>(
    f: &F,
    p: &Point<F::Elem>,
    q: &Point<F::Elem>,
    rng: &mut dyn RngCore,
) -> Point<F::Elem> {
    loop {
        let s = f.random(rng);
        let t = f.random(rng);
        if let Ok(r) = combine(f, &s, p, &t, q) {
            if !r.equals(f, p) && !r.equals(f, q) {
                return r;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ApproxComplex, CyclotomicField};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> CyclotomicField {
        CyclotomicField::new(1).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let f = q();
        let p = Point::from_ints(&f, [0, 0, 1]).unwrap();
        let l = Line::from_ints(&f, [0, 0, 1]).unwrap();
        assert!(!incident(&f, &p, &l));
        let p = Point::from_ints(&f, [1, 1, 1]).unwrap();
        let l = Line::from_ints(&f, [1, -1, 0]).unwrap();
        assert!(incident(&f, &p, &l));

        let f3 = CyclotomicField::new(3).unwrap();
        let z = f3.root_of_unity(3, 1).unwrap();
        let p = Point::new(&f3, [f3.one(), z.clone(), f3.zero()]).unwrap();
        let l = Line::new(&f3, [f3.mul(&z, &z), f3.neg(&z), f3.zero()]).unwrap();
        assert!(incident(&f3, &p, &l));
    }

    #[test]
    fn join_and_meet_examples() {
        let f = q();
        let x = Line::from_ints(&f, [1, 0, 0]).unwrap();
        let y = Line::from_ints(&f, [0, 1, 0]).unwrap();
        assert_eq!(meet(&f, &x, &y).unwrap(), Point::from_ints(&f, [0, 0, 1]).unwrap());
        let e1 = Point::from_ints(&f, [1, 0, 0]).unwrap();
        let e2 = Point::from_ints(&f, [0, 1, 0]).unwrap();
        assert_eq!(join(&f, &e1, &e2).unwrap(), Line::from_ints(&f, [0, 0, 1]).unwrap());
        let l = Line::from_ints(&f, [1, -1, 0]).unwrap();
        let m = Line::from_ints(&f, [1, 0, -1]).unwrap();
        assert_eq!(meet(&f, &l, &m).unwrap(), Point::from_ints(&f, [1, 1, 1]).unwrap());
        assert!(matches!(join(&f, &e1, &e1), Err(Error::Degenerate(_))));
        assert!(matches!(meet(&f, &x, &x), Err(Error::Degenerate(_))));
    }

    #[test]
    fn exact_normalization_makes_last_nonzero_one() {
        let f = q();
        let p = Point::from_ints(&f, [2, 4, 0]).unwrap();
        assert_eq!(p, Point::from_ints(&f, [1, 2, 0]).unwrap());
        assert!(Point::from_ints(&f, [0, 0, 0]).is_err());
    }

    #[test]
    fn approx_equality_is_scale_free() {
        let f = ApproxComplex::default();
        let c = |a: f64, b: f64| Complex64::new(a, b);
        let p = Point::new(&f, [c(1.0, 1.0), c(2.0, 0.0), c(0.5, -0.5)]).unwrap();
        let k = c(-3.0, 7.0);
        let q = Point::new(&f, [c(1.0, 1.0) * k, c(2.0, 0.0) * k, c(0.5, -0.5) * k]).unwrap();
        assert!(p.equals(&f, &q));
    }

    #[test]
    fn collinearity_examples() {
        let f = q();
        let p = |c| Point::from_ints(&f, c).unwrap();
        assert!(collinear(&f, &p([1, 0, 0]), &p([0, 1, 0]), &p([1, 1, 0])));
        assert!(!collinear(&f, &p([1, 0, 0]), &p([0, 1, 0]), &p([0, 0, 1])));
    }

    #[test]
    fn cross_ratio_convention() {
        let f = q();
        // parameters t -> (t : 1 : 0) on the line z = 0, infinity = (1 : 0 : 0)
        let at = |t: i64| Point::from_ints(&f, [t, 1, 0]).unwrap();
        let inf = Point::from_ints(&f, [1, 0, 0]).unwrap();
        let cr = cross_ratio(&f, [&at(0), &inf, &at(1), &at(5)]).unwrap();
        assert_eq!(cr, f.from_int(5));
        let cr = cross_ratio(&f, [&at(0), &inf, &at(1), &at(-1)]).unwrap();
        assert_eq!(cr, f.from_int(-1));
        let off = Point::from_ints(&f, [0, 0, 1]).unwrap();
        assert!(cross_ratio(&f, [&at(0), &inf, &at(1), &off]).is_err());
        assert!(cross_ratio(&f, [&at(0), &at(0), &at(1), &at(1)]).is_err());
    }

    #[test]
    fn duality_is_an_involution_and_preserves_incidence() {
        let f = ApproxComplex::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let p = random_point(&f, &mut rng);
            assert!(dual_line(&dual_point(&p)).equals(&f, &p));
        }
        let fq = q();
        for _ in 0..500 {
            let p = random_point(&fq, &mut rng);
            let l = random_line(&fq, &mut rng);
            assert_eq!(
                incident(&fq, &p, &l),
                incident(&fq, &dual_line(&l), &dual_point(&p))
            );
            let r = random_point(&fq, &mut rng);
            if let Ok(j) = join(&fq, &p, &r) {
                assert!(incident(&fq, &p, &j) && incident(&fq, &r, &j));
                let m = meet(&fq, &j, &l);
                if let Ok(x) = m {
                    assert!(incident(&fq, &x, &l) && incident(&fq, &x, &j));
                }
            }
        }
    }
}
