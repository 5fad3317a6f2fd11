//! Inflection points: the intersection of a cubic with its Hessian.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{roots, Cubic};
use crate::error::{Error, Result};
use crate::field::{euler_phi, ApproxComplex, Backend, Field};
use crate::geom::Point;
use crate::poly::{monomial_index, Form};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coefficients of `y^k` (k = 0..=3) of `g(x, y, 1)`, each a polynomial in `x`.
fn in_y(g: &Form<Complex64>) -> Vec<roots::Poly> {
    (0..=3)
        .map(|k| (0..=3 - k).map(|i| g.coeffs()[monomial_index([i, k, 3 - i - k])]).collect())
        .collect()
}

fn sylvester_det(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    // Cubics in y with coefficients ascending; rows shift the descending coefficient lists.
    let mut m = DMatrix::<Complex64>::zeros(6, 6);
    for r in 0..3 {
        for k in 0..4 {
            m[(r, r + k)] = a[3 - k];
            m[(r + 3, r + k)] = b[3 - k];
        }
    }
    m.determinant()
}

fn newton2(g: &Form<Complex64>, h: &Form<Complex64>, mut x: Complex64, mut y: Complex64) -> (Complex64, Complex64) {
    let f = ApproxComplex::default();
    let one = c64(1.0, 0.0);
    let size = |x: Complex64, y: Complex64| {
        let v = [x, y, one];
        g.eval(&f, &v).norm() + h.eval(&f, &v).norm()
    };
    for _ in 0..20 {
        let v = [x, y, one];
        let (gv, hv) = (g.eval(&f, &v), h.eval(&f, &v));
        let (gg, hg) = (g.gradient(&f, &v), h.gradient(&f, &v));
        let det = gg[0] * hg[1] - gg[1] * hg[0];
        if det.norm() == 0.0 {
            break;
        }
        let dx = (gv * hg[1] - hv * gg[1]) / det;
        let dy = (gg[0] * hv - hg[0] * gv) / det;
        let (nx, ny) = (x - dx, y - dy);
        if !(nx.is_finite() && ny.is_finite()) || size(nx, ny) >= size(x, y) {
            break;
        }
        x = nx;
        y = ny;
    }
    (x, y)
}

fn numeric_flexes(c: &Cubic<Complex64>) -> Result<Vec<Point<Complex64>>> {
    let f = ApproxComplex::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1E5);
    let a = loop {
        let m: [[Complex64; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                use rand::Rng;
                let base = if i == j { 1.0 } else { 0.0 };
                c64(base + rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
            })
        });
        if Matrix3::from_fn(|i, j| m[i][j]).determinant().norm() > 0.2 {
            break m;
        }
    };
    let g = c.form().compose_linear(&f, &a);
    let gn = g.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
    let g = g.scale(&f, &c64(1.0 / gn, 0.0));
    let h = Cubic::new(&f, g.coeffs().to_vec())?.hessian_form(&f);
    let hn = h.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if hn == 0.0 {
        return Err(Error::InvalidInput("the Hessian vanishes identically".into()));
    }
    let h = h.scale(&f, &c64(1.0 / hn, 0.0));
    let (gy, hy) = (in_y(&g), in_y(&h));

    // Resultant in y has degree <= 9 in x: interpolate at ten roots of unity.
    let n = 10;
    let vals: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64);
            let ga: [Complex64; 4] = std::array::from_fn(|k| roots::eval(&gy[k], x));
            let ha: [Complex64; 4] = std::array::from_fn(|k| roots::eval(&hy[k], x));
            sylvester_det(&ga, &ha)
        })
        .collect();
    let res: Vec<Complex64> = (0..n)
        .map(|k| {
            vals.iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * (j * k) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    let xs = roots::roots(&roots::trim(&res, 1e-12));
    let tight = ApproxComplex::new(1e-6, 1e-8).unwrap();
    let mut out: Vec<Point<Complex64>> = Vec::new();
    for x in xs {
        let gcoef: Vec<Complex64> = (0..4).map(|k| roots::eval(&gy[k], x)).collect();
        let y = roots::roots(&gcoef)
            .into_iter()
            .min_by(|a, b| {
                let hv = |y: Complex64| h.eval(&f, &[x, y, c64(1.0, 0.0)]).norm();
                hv(*a).total_cmp(&hv(*b))
            });
        let Some(y) = y else { continue };
        let (x, y) = newton2(&g, &h, x, y);
        let v = [x, y, c64(1.0, 0.0)];
        let mapped: [Complex64; 3] = std::array::from_fn(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2]);
        let p = Point::new(&f, mapped)?;
        if !out.iter().any(|q| q.equals(&tight, &p)) {
            out.push(p);
        }
    }
    if out.len() != 9 {
        return Err(Error::Numeric(format!("found {} flexes instead of 9", out.len())));
    }
    Ok(out)
}

/// The nine inflection points of a smooth cubic. Exact backends succeed only
/// when `Q(zeta_N)` has degree at most 2 and contains every flex.
pub fn flexes<F: Field>(f: &F, c: &Cubic<F::Elem>) -> Result<Vec<Point<F::Elem>>> {
    let g = ApproxComplex::default();
    let numeric = numeric_flexes(&Cubic::new(&g, c.to_complex(f).coeffs().to_vec())?)?;
    if let Backend::Cyclotomic(n) = f.backend() {
        if euler_phi(n) > 2 {
            return Err(Error::FlexesOutsideField(format!(
                "flex recognition needs a field of degree at most 2, Q(zeta_{n}) has degree {}",
                euler_phi(n)
            )));
        }
    }
    let hess = c.hessian_form(f);
    let mut out = Vec::new();
    for p in numeric {
        let coords = p.coords();
        let pivot = (0..3)
            .rev()
            .find(|&i| coords[i].norm() > 1e-6 * crate::geom::triple_norm(&g, coords))
            .unwrap();
        let scaled = coords.map(|z| z / coords[pivot]);
        let elems: Option<Vec<F::Elem>> = scaled.iter().map(|&z| f.from_complex(z)).collect();
        let point = elems
            .and_then(|v| Point::new(f, [v[0].clone(), v[1].clone(), v[2].clone()]).ok())
            .filter(|q| !f.is_exact() || (f.is_zero(&c.evaluate(f, q)) && f.is_zero(&hess.eval(f, q.coords()))));
        match point {
            Some(q) => out.push(q),
            None => {
                return Err(Error::FlexesOutsideField(format!(
                    "a flex near {} is not in the session field",
                    crate::net::describe_point(&g, &p)
                )))
            }
        }
    }
    Ok(out)
}
