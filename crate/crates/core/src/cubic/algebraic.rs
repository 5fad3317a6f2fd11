//! Whether the dual points of a 3-net lie on a cubic as regular points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{classify, fit_cubics, Cubic, CubicClass};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{collinear, dual_line, join, Line, Point};
use crate::net::{require_verified, Net};
use crate::poly::{monomials, Form};

/// Residual (relative) accepted for a dual point to lie on a candidate cubic.
const FIT_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub enum Algebraicity<E> {
    Yes { cubic: Cubic<E>, class: CubicClass },
    No { diagnostic: String },
}

impl<E> Algebraicity<E> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Algebraicity::Yes { .. })
    }
}

fn accepts<F: Field>(f: &F, c: &Cubic<F::Elem>, pts: &[Point<F::Elem>]) -> bool {
    pts.iter().all(|p| {
        if f.is_exact() {
            c.is_regular_point(f, p)
        } else {
            c.residual(f, p) <= FIT_TOL && c.gradient_size(f, p) > super::REGULARITY_TOL
        }
    })
}

/// The line through a class of dual points, when they are collinear.
fn class_line<F: Field>(f: &F, pts: &[Point<F::Elem>]) -> Option<Line<F::Elem>> {
    let l = join(f, &pts[0], &pts[1]).ok()?;
    pts[2..].iter().all(|p| collinear(f, &pts[0], &pts[1], p)).then_some(l)
}

/// Cubics `P * G` through every point, where `P` is the product of `lines`.
fn fit_with_factor<F: Field>(f: &F, lines: &[Line<F::Elem>], pts: &[Point<F::Elem>]) -> Vec<Cubic<F::Elem>> {
    let p = Form::product_of_lines(f, lines);
    let d = 3 - lines.len();
    let basis: Vec<Form<F::Elem>> = monomials(d)
        .into_iter()
        .map(|e| p.mul(f, &Form::from_terms(f, d, &[(f.one(), e)])))
        .collect();
    if d == 0 {
        return Cubic::from_form(f, &p).into_iter().collect();
    }
    let rows: Vec<Vec<F::Elem>> = pts
        .iter()
        .map(|q| basis.iter().map(|b| b.eval(f, q.coords())).collect())
        .collect();
    f.nullspace(&rows, basis.len())
        .into_iter()
        .filter_map(|v| {
            let mut form = Form::zero(f, 3);
            for (c, b) in v.iter().zip(&basis) {
                form = form.add(f, &b.scale(f, c));
            }
            Cubic::from_form(f, &form).ok()
        })
        .collect()
}

fn random_combination<F: Field>(f: &F, basis: &[Cubic<F::Elem>], rng: &mut ChaCha8Rng) -> Option<Cubic<F::Elem>> {
    let mut form = Form::zero(f, 3);
    for c in basis {
        form = form.add(f, &c.form().scale(f, &f.random(rng)));
    }
    Cubic::from_form(f, &form).ok()
}

/// Searches a solution space: basis vectors first, then random combinations.
fn search<F: Field>(f: &F, basis: &[Cubic<F::Elem>], pts: &[Point<F::Elem>], rng: &mut ChaCha8Rng) -> Option<Cubic<F::Elem>> {
    if let Some(c) = basis.iter().find(|c| accepts(f, c, pts)) {
        return Some(c.clone());
    }
    if basis.len() < 2 {
        return None;
    }
    (0..10)
        .filter_map(|_| random_combination(f, basis, rng))
        .find(|c| accepts(f, c, pts))
}

/// [`is_algebraic_with`] with a fixed seed.
pub fn is_algebraic<F: Field>(net: &Net<F>) -> Result<Algebraicity<F::Elem>> {
    is_algebraic_with(net, 0)
}

/// Decides whether some cubic contains every dual point of the 3-net as a
/// regular point. Cubics containing the lines of collinear dual classes are
/// preferred, so pencil classes yield their linear components.
pub fn is_algebraic_with<F: Field>(net: &Net<F>, seed: u64) -> Result<Algebraicity<F::Elem>> {
    if net.k() != 3 {
        return Err(Error::InvalidInput(format!("expected a 3-net, got {} classes", net.k())));
    }
    require_verified(net)?;
    let f = net.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point<F::Elem>> = net.lines().map(dual_line).collect();
    let class_pts: Vec<Vec<Point<F::Elem>>> = net
        .classes()
        .iter()
        .map(|c| c.iter().map(dual_line).collect())
        .collect();

    let lines: Vec<Line<F::Elem>> = class_pts.iter().filter_map(|c| class_line(f, c)).collect();
    let mut witness = None;
    if !lines.is_empty() {
        witness = search(f, &fit_with_factor(f, &lines, &pts), &pts, &mut rng);
    }
    let basis = fit_cubics(f, &pts);
    if witness.is_none() {
        witness = search(f, &basis, &pts, &mut rng);
    }
    Ok(match witness {
        Some(cubic) => {
            let class = classify(f, &cubic)?;
            Algebraicity::Yes { cubic, class }
        }
        None if basis.is_empty() => Algebraicity::No {
            diagnostic: format!("no cubic passes through the {} dual points", pts.len()),
        },
        None => Algebraicity::No {
            diagnostic: format!(
                "cubics through the dual points form a {}-dimensional space, but none tried contains them all as regular points",
                basis.len()
            ),
        },
    })
}
