//! Numerical classification of plane cubics by their singular points.

use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::roots;
use super::Cubic;
use crate::error::{Error, Result};
use crate::field::{ApproxComplex, Field};
use crate::geom::{join, Line, Point};
use crate::poly::{monomial_index, Form};

/// Tolerance for accepting a refined singular point.
const SINGULAR_TOL: f64 = 1e-8;
/// Relative residual for accepting a factorization.
const FACTOR_TOL: f64 = 1e-6;
/// Singular values of the Hessian below this fraction of the largest count as zero.
const RANK_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubicTag {
    Smooth,
    Nodal,
    Cuspidal,
    ConicLineTransverse,
    ConicLineTangent,
    Triangle,
    ConcurrentLines,
    NonReduced,
}

impl fmt::Display for CubicTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CubicTag::Smooth => "smooth",
            CubicTag::Nodal => "nodal",
            CubicTag::Cuspidal => "cuspidal",
            CubicTag::ConicLineTransverse => "conic+line transverse",
            CubicTag::ConicLineTangent => "conic+line tangent",
            CubicTag::Triangle => "triangle",
            CubicTag::ConcurrentLines => "concurrent-lines",
            CubicTag::NonReduced => "non-reduced/other",
        })
    }
}

/// Type of a cubic with its singular points and, for reducible cubics, its factors.
#[derive(Debug, Clone)]
pub struct CubicClass {
    pub tag: CubicTag,
    pub singular_points: Vec<Point<Complex64>>,
    pub components: Option<Vec<Form<Complex64>>>,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn coeff_norm(form: &Form<Complex64>) -> f64 {
    form.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `(a, b(x), c(x))` with `q(x, y, 1) = a y^2 + b(x) y + c(x)`.
fn conic_in_y(q: &Form<Complex64>) -> (roots::Poly, roots::Poly, roots::Poly) {
    let k = |e: [usize; 3]| q.coeffs()[monomial_index(e)];
    (
        vec![k([0, 2, 0])],
        vec![k([0, 1, 1]), k([1, 1, 0])],
        vec![k([0, 0, 2]), k([1, 0, 1]), k([2, 0, 0])],
    )
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    roots::roots(&[c, b, a])
}

fn grad_residual(g: &Form<Complex64>, v: &[Complex64; 3]) -> f64 {
    norm3(&g.gradient(&ApproxComplex::default(), v)) / (coeff_norm(g) * norm3(v).powi(2))
}

/// Damped Gauss-Newton on `grad G(x, y, 1) = 0`.
fn refine(g: &Form<Complex64>, x: Complex64, y: Complex64) -> [Complex64; 3] {
    let f = ApproxComplex::default();
    let mut v = [x, y, c64(1.0, 0.0)];
    let mut res = grad_residual(g, &v);
    let mut lambda = 1e-12;
    let hess: Vec<Form<Complex64>> = (0..3).map(|i| g.partial(&f, i)).collect();
    for _ in 0..30 {
        if res < 1e-15 {
            break;
        }
        let r = g.gradient(&f, &v);
        let jrows: Vec<[Complex64; 3]> = hess.iter().map(|h| h.gradient(&f, &v)).collect();
        // J is 3x2: d(grad_i)/dx, d(grad_i)/dy
        let j = DMatrix::from_fn(3, 2, |i, k| jrows[i][k]);
        let jh = j.adjoint();
        let mut n = &jh * &j;
        let scale = n[(0, 0)].norm().max(n[(1, 1)].norm()).max(1e-300);
        for d in 0..2 {
            n[(d, d)] += c64(lambda * scale, 0.0);
        }
        let rhs = -(&jh * DVector::from_row_slice(&r));
        let Some(step) = n.lu().solve(&rhs) else { break };
        let cand = [v[0] + step[0], v[1] + step[1], v[2]];
        let cres = grad_residual(g, &cand);
        if cres.is_finite() && cres < res {
            v = cand;
            res = cres;
            lambda = (lambda * 0.1).max(1e-15);
        } else {
            lambda *= 100.0;
            if lambda > 1e6 {
                break;
            }
        }
    }
    v
}

fn random_change(rng: &mut ChaCha8Rng) -> [[Complex64; 3]; 3] {
    loop {
        let mut a = [[c64(0.0, 0.0); 3]; 3];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let base = if i == j { 1.0 } else { 0.0 };
                *x = c64(base + rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            }
        }
        let m = Matrix3::from_fn(|i, j| a[i][j]);
        if m.determinant().norm() > 0.2 {
            return a;
        }
    }
}

fn apply(a: &[[Complex64; 3]; 3], v: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [c64(0.0, 0.0); 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    }
    out
}

/// Singular points of a complex cubic; `None` when the singular locus is a curve.
pub(crate) fn singular_points(c: &Cubic<Complex64>) -> Option<Vec<Point<Complex64>>> {
    let f = ApproxComplex::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let a = random_change(&mut rng);
    let g = c.form().compose_linear(&f, &a);
    let partials: Vec<Form<Complex64>> = (0..3).map(|i| g.partial(&f, i)).collect();
    let combo = |rng: &mut ChaCha8Rng| {
        let mut q = Form::zero(&f, 2);
        for p in &partials {
            let w = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            q = q.add(&f, &p.scale(&f, &w));
        }
        q
    };
    let q1 = combo(&mut rng);
    let q2 = combo(&mut rng);
    let (a1, b1, c1) = conic_in_y(&q1);
    let (a2, b2, c2) = conic_in_y(&q2);
    let ac = roots::sub(&roots::mul(&a1, &c2), &roots::mul(&a2, &c1));
    let ab = roots::sub(&roots::mul(&a1, &b2), &roots::mul(&a2, &b1));
    let bc = roots::sub(&roots::mul(&b1, &c2), &roots::mul(&b2, &c1));
    let res = roots::sub(&roots::mul(&ac, &ac), &roots::mul(&ab, &bc));
    let scale = (coeff_norm(&q1) * coeff_norm(&q2)).powi(2);
    if roots::max_abs(&res) <= 1e-10 * scale {
        return None;
    }
    // Cluster means of multiple roots are accurate where the gradient is too
    // flat for residuals to rank candidates, so they take precedence.
    let mut xcands: Vec<(Complex64, usize)> = roots::roots(&res).into_iter().map(|x| (x, 1)).collect();
    xcands.extend(roots::cluster_roots(&res, 1e-3).into_iter().filter(|g| g.1 > 1));

    let mut found: Vec<([Complex64; 3], usize, f64)> = Vec::new();
    for (x, mult) in xcands {
        let mut ys = Vec::new();
        for (a, b, c) in [(&a1, &b1, &c1), (&a2, &b2, &c2)] {
            ys.extend(quadratic_roots(roots::eval(a, x), roots::eval(b, x), roots::eval(c, x)));
        }
        let ys_clustered: Vec<Complex64> = roots::cluster(&ys, 1e-3).into_iter().map(|g| g.0).collect();
        ys.extend(ys_clustered);
        for y in ys {
            let v = refine(&g, x, y);
            let r = grad_residual(&g, &v);
            if r < SINGULAR_TOL {
                found.push((apply(&a, &v), mult, r));
            }
        }
    }
    let loose = ApproxComplex::new(1e-3, 1e-8).unwrap();
    let mut pts: Vec<(Point<Complex64>, usize, f64)> = Vec::new();
    for (v, mult, r) in found {
        let Ok(p) = Point::new(&f, v) else { continue };
        match pts.iter_mut().find(|(q, _, _)| q.equals(&loose, &p)) {
            Some(slot) => {
                if (mult, -r) > (slot.1, -slot.2) {
                    *slot = (p, mult, r);
                }
            }
            None => pts.push((p, mult, r)),
        }
    }
    Some(pts.into_iter().map(|(p, _, _)| p).collect())
}

/// Least-squares quotient `F / L` with its relative residual.
pub(crate) fn divide_by_line(c: &Form<Complex64>, l: &Line<Complex64>) -> (Form<Complex64>, f64) {
    let f = ApproxComplex::default();
    let lin = Form::linear(l);
    let quad_basis: Vec<Form<Complex64>> = (0..6)
        .map(|k| {
            let mut v = vec![c64(0.0, 0.0); 6];
            v[k] = c64(1.0, 0.0);
            Form::new(2, v).unwrap()
        })
        .collect();
    let cols: Vec<Form<Complex64>> = quad_basis.iter().map(|q| lin.mul(&f, q)).collect();
    let m = DMatrix::from_fn(10, 6, |i, j| cols[j].coeffs()[i]);
    let rhs = DVector::from_row_slice(c.coeffs());
    let svd = m.clone().svd(true, true);
    let q = svd.solve(&rhs, 1e-12).unwrap_or_else(|_| DVector::zeros(6));
    let resid = (&m * &q - &rhs).norm() / rhs.norm().max(1e-300);
    (Form::new(2, q.iter().copied().collect()).unwrap(), resid)
}

/// Least squares `l` with `F ~ l * Q` for a fixed conic `Q`.
fn line_for_quotient(c: &Form<Complex64>, q: &Form<Complex64>) -> Option<Line<Complex64>> {
    let f = ApproxComplex::default();
    let cols: Vec<Form<Complex64>> = (0..3)
        .map(|k| {
            let mut v = [c64(0.0, 0.0); 3];
            v[k] = c64(1.0, 0.0);
            Form::new(1, v.to_vec()).unwrap().mul(&f, q)
        })
        .collect();
    let m = DMatrix::from_fn(10, 3, |i, j| cols[j].coeffs()[i]);
    let rhs = DVector::from_row_slice(c.coeffs());
    let l = m.svd(true, true).solve(&rhs, 1e-12).ok()?;
    Line::new(&f, [l[0], l[1], l[2]]).ok()
}

/// Polishes an approximate linear factor `l0` of `F` by alternating least
/// squares on `F = l Q`; returns the line, the conic and the relative residual.
pub(crate) fn factor_line(c: &Form<Complex64>, l0: &Line<Complex64>) -> (Line<Complex64>, Form<Complex64>, f64) {
    let mut l = l0.clone();
    let (mut q, mut r) = divide_by_line(c, &l);
    for _ in 0..50 {
        if r < 1e-14 {
            break;
        }
        let Some(l2) = line_for_quotient(c, &q) else { break };
        let (q2, r2) = divide_by_line(c, &l2);
        if !(r2 < r) {
            break;
        }
        (l, q, r) = (l2, q2, r2);
    }
    (l, q, r)
}

fn hessian_singular_values(c: &Cubic<Complex64>, p: &Point<Complex64>) -> (Vec<f64>, Matrix3<Complex64>) {
    let f = ApproxComplex::default();
    let unit = {
        let n = norm3(p.coords());
        Point::new(&f, p.coords().map(|x| x / n)).unwrap()
    };
    let h = c.hessian_matrix(&f, &unit);
    let m = Matrix3::from_fn(|i, j| h[i][j]);
    let sv = m.svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    (s, m)
}

/// Lines through `p` whose product is the cubic, when the cubic is a cone over `p`.
fn cone_lines(c: &Cubic<Complex64>, p: &Point<Complex64>) -> Option<Vec<Line<Complex64>>> {
    let f = ApproxComplex::default();
    // A line avoiding p: the one dual to the conjugate of p.
    let conj = p.coords().map(|x| x.conj());
    let u = crate::geom::cross(&f, &conj, &[c64(0.3, 0.1), c64(-0.7, 0.2), c64(0.5, -0.4)]);
    let w = crate::geom::cross(&f, &conj, &u);
    let r = c.form().restrict_to_line(&f, &u, &w);
    // r[k] is the coefficient of s^(3-k) t^k; roots in s/t.
    let poly: Vec<Complex64> = r.iter().rev().copied().collect();
    let rs = roots::roots(&poly);
    let mut pts: Vec<[Complex64; 3]> = rs.iter().map(|&s| [0, 1, 2].map(|i| s * u[i] + w[i])).collect();
    while pts.len() < 3 {
        pts.push(u);
    }
    let lines: Option<Vec<Line<Complex64>>> = pts
        .iter()
        .map(|q| Point::new(&f, *q).ok().and_then(|q| join(&f, p, &q).ok()))
        .collect();
    let lines = lines?;
    let prod = Form::product_of_lines(&f, &lines);
    let lambda = {
        let num: Complex64 = prod.coeffs().iter().zip(c.coeffs()).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = prod.coeffs().iter().map(|a| a.norm_sqr()).sum();
        num / den
    };
    let resid = prod
        .coeffs()
        .iter()
        .zip(c.coeffs())
        .map(|(a, b)| (a * lambda - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / c.coeffs().iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (resid < FACTOR_TOL).then_some(lines)
}

fn line_form(l: &Line<Complex64>) -> Form<Complex64> {
    Form::linear(l)
}

/// Classify a cubic. Exact cubics are classified through their complex embedding.
pub fn classify<F: Field>(f: &F, cubic: &Cubic<F::Elem>) -> Result<CubicClass> {
    let g = ApproxComplex::default();
    let c = Cubic::new(&g, cubic.to_complex(f).coeffs().to_vec())?;
    let Some(sing) = singular_points(&c) else {
        return Ok(CubicClass {
            tag: CubicTag::NonReduced,
            singular_points: Vec::new(),
            components: None,
        });
    };
    let class = |tag, components| CubicClass {
        tag,
        singular_points: sing.clone(),
        components,
    };
    Ok(match sing.len() {
        0 => class(CubicTag::Smooth, None),
        1 => {
            let p = &sing[0];
            if let Some(lines) = cone_lines(&c, p) {
                let distinct = (0..3).all(|i| (i + 1..3).all(|j| !lines[i].equals(&g, &lines[j])));
                if !distinct {
                    return Ok(class(CubicTag::NonReduced, None));
                }
                return Ok(class(CubicTag::ConcurrentLines, Some(lines.iter().map(line_form).collect())));
            }
            let (s, h) = hessian_singular_values(&c, p);
            if s[0] <= 0.0 {
                return Err(Error::Numeric("vanishing Hessian at a non-triple point".into()));
            }
            if s[1] > RANK_TOL * s[0] {
                class(CubicTag::Nodal, None)
            } else {
                // Rank one: H = lambda * l l^T; the largest row is proportional to l.
                let row = (0..3)
                    .max_by(|&a, &b| h.row(a).norm().total_cmp(&h.row(b).norm()))
                    .unwrap();
                let l = Line::new(&g, [h[(row, 0)], h[(row, 1)], h[(row, 2)]])?;
                let (l, q, resid) = factor_line(c.form(), &l);
                if resid < FACTOR_TOL {
                    class(CubicTag::ConicLineTangent, Some(vec![line_form(&l), q]))
                } else {
                    class(CubicTag::Cuspidal, None)
                }
            }
        }
        2 => {
            let l = join(&g, &sing[0], &sing[1])?;
            let (l, q, resid) = factor_line(c.form(), &l);
            if resid < FACTOR_TOL {
                class(CubicTag::ConicLineTransverse, Some(vec![line_form(&l), q]))
            } else {
                class(CubicTag::NonReduced, None)
            }
        }
        3 => {
            let lines = [
                join(&g, &sing[1], &sing[2])?,
                join(&g, &sing[0], &sing[2])?,
                join(&g, &sing[0], &sing[1])?,
            ];
            let (_, resid) = divide_by_line(c.form(), &lines[0]);
            if resid < FACTOR_TOL {
                class(CubicTag::Triangle, Some(lines.iter().map(line_form).collect()))
            } else {
                class(CubicTag::NonReduced, None)
            }
        }
        _ => class(CubicTag::NonReduced, None),
    })
}
