//! Canonical nets: pencils, the braid arrangement, the Hesse configuration,
//! torsion cosets on a smooth cubic and cosets on singular cubics.

use num_complex::Complex64;

use crate::cubic::{pairing_third, singular_param, weierstrass, SingularCase};
use crate::error::{Error, Result};
use crate::field::{ApproxComplex, Field};
use crate::geom::{dual_point, Line, Point};
use crate::net::Net;

/// Default lattice parameter for [`torus_net`].
pub const DEFAULT_TAU: Complex64 = Complex64::new(0.23, 1.11);

fn check_order(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("order must be at least 2, got {m}")));
    }
    Ok(())
}

/// The `(3, m)`-net cut out by `x^m - y^m`, `x^m - z^m`, `y^m - z^m`.
///
/// Class 0 is `{x - z^i y}`, class 1 `{x - z^i z}`, class 2 `{y - z^i z}` with
/// `z = zeta_m`; lines `i`, `k`, `j` are concurrent iff `k = i + j (mod m)`.
pub fn pencil_net<F: Field>(f: &F, m: usize) -> Result<Net<F>> {
    check_order(m)?;
    let mut classes: Vec<Vec<_>> = (0..3).map(|_| Vec::with_capacity(m)).collect();
    for i in 0..m {
        let z = f.neg(&f.root_of_unity(m as u64, i as i64)?);
        classes[0].push(Line::new(f, [f.one(), z.clone(), f.zero()])?);
        classes[1].push(Line::new(f, [f.one(), f.zero(), z.clone()])?);
        classes[2].push(Line::new(f, [f.zero(), f.one(), z])?);
    }
    Ok(Net::new(f.clone(), classes))
}

/// The braid arrangement `xyz(x-y)(x-z)(y-z)` as the `(3, 2)`-net
/// `{x, y-z}, {y, x-z}, {z, x-y}`.
pub fn braid_net<F: Field>(f: &F) -> Result<Net<F>> {
    let l = |c: [i64; 3]| Line::from_ints(f, c);
    Ok(Net::new(
        f.clone(),
        vec![
            vec![l([1, 0, 0])?, l([0, 1, -1])?],
            vec![l([0, 1, 0])?, l([1, 0, -1])?],
            vec![l([0, 0, 1])?, l([1, -1, 0])?],
        ],
    ))
}

/// The `(4, 3)`-net of the twelve lines through the flexes of `x^3 + y^3 + z^3`,
/// grouped into the four triangles of the Hesse pencil. Exact backends need `3 | N`.
pub fn hessian_net<F: Field>(f: &F) -> Result<Net<F>> {
    let w = |k: i64| f.root_of_unity(3, k);
    let mut classes = vec![vec![
        Line::from_ints(f, [1, 0, 0])?,
        Line::from_ints(f, [0, 1, 0])?,
        Line::from_ints(f, [0, 0, 1])?,
    ]];
    // x + w^i y + w^j z; the triangles are i + j = c (mod 3).
    for c in 0..3i64 {
        let mut class = Vec::with_capacity(3);
        for i in 0..3 {
            let j = (c - i).rem_euclid(3);
            class.push(Line::new(f, [f.one(), w(i)?, w(j)?])?);
        }
        classes.push(class);
    }
    Ok(Net::new(f.clone(), classes))
}

/// Parameters of [`torus_net`].
#[derive(Debug, Clone, Copy)]
pub struct TorusOptions {
    pub tau: Complex64,
    /// Coset offsets `(alpha, beta)`; the third coset is `-alpha-beta`.
    pub offsets: Option<(Complex64, Complex64)>,
    pub eps_series: f64,
}

impl Default for TorusOptions {
    fn default() -> Self {
        TorusOptions {
            tau: DEFAULT_TAU,
            offsets: None,
            eps_series: 1e-14,
        }
    }
}

/// `(m1, m2)` with `m1 | m2` from a list of invariant factors.
pub fn torus_factors(invariants: &[usize]) -> Result<(usize, usize)> {
    let (m1, m2) = match *invariants {
        [] => return Err(Error::InvalidInput("no invariant factors given".into())),
        [m] => (1, m),
        [m1, m2] => (m1, m2),
        _ => return Err(Error::TooManyInvariantFactors(invariants.len())),
    };
    if m1 == 0 || m2 % m1 != 0 {
        return Err(Error::InvalidInput(format!("invariant factors must divide each other, got {m1} and {m2}")));
    }
    check_order(m1 * m2)?;
    Ok((m1, m2))
}

/// Coordinates `(x, y)` of `d = x + y tau`.
fn lattice_coords(d: Complex64, tau: Complex64) -> (f64, f64) {
    let y = d.im / tau.im;
    (d.re - y * tau.re, y)
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

/// The `(3, m1 m2)`-net realizing `Z_m1 + Z_m2`: three cosets of
/// `H = (1/m2) Z + (tau/m1) Z` on the Weierstrass cubic of `Z + tau Z`,
/// dualized to lines.
///
/// Line `b * m2 + a` of each class is the image of `offset + a/m2 + b tau/m1`.
pub fn torus_net(f: &ApproxComplex, invariants: &[usize], opts: &TorusOptions) -> Result<Net<ApproxComplex>> {
    let (m1, m2) = torus_factors(invariants)?;
    let tau = opts.tau;
    let e = weierstrass(tau, opts.eps_series)?;
    let (alpha, beta) = opts.offsets.unwrap_or_else(|| {
        let m2 = m2 as f64;
        (Complex64::new(1.0 / (7.0 * m2), 0.0), tau / (7.0 * m2) + 1.0 / (11.0 * m2))
    });
    let offsets = [alpha, beta, -alpha - beta];
    for i in 0..3 {
        for j in i + 1..3 {
            let (x, y) = lattice_coords(offsets[i] - offsets[j], tau);
            if near_integer(x * m2 as f64) && near_integer(y * m1 as f64) {
                return Err(Error::CosetCollision(format!(
                    "offsets {} and {} differ by an element of the subgroup",
                    offsets[i], offsets[j]
                )));
            }
        }
    }
    let mut classes = Vec::with_capacity(3);
    let mut all: Vec<Point<Complex64>> = Vec::with_capacity(3 * m1 * m2);
    for off in offsets {
        let mut class = Vec::with_capacity(m1 * m2);
        for b in 0..m1 {
            for a in 0..m2 {
                let z = off + a as f64 / m2 as f64 + tau * (b as f64 / m1 as f64);
                let p = e.pe_map(z)?;
                if all.iter().any(|q| q.equals(f, &p)) {
                    return Err(Error::Numeric(format!("torsion points collide numerically at z = {z}")));
                }
                class.push(dual_point(&p));
                all.push(p);
            }
        }
        classes.push(class);
    }
    Ok(Net::new(*f, classes))
}

/// The `(3, m)`-net of three cosets `u mu_m`, `v mu_m`, `w mu_m` of the
/// `m`-th roots of unity on a singular cubic with multiplicative regular
/// locus, where `w` is the parameter completing `u, v` to a collinear triple.
///
/// Line `j` of a class is the dual of the point with parameter `offset * zeta_m^j`.
/// Default offsets are `u = 2`, `v = 3`.
pub fn singular_cubic_net<F: Field>(
    f: &F,
    case: SingularCase,
    m: usize,
    offsets: Option<(F::Elem, F::Elem)>,
) -> Result<Net<F>> {
    if !case.is_multiplicative() {
        return Err(Error::AdditiveCase(case.code()));
    }
    check_order(m)?;
    let (u, v) = offsets.unwrap_or_else(|| (f.from_int(2), f.from_int(3)));
    let w = pairing_third(f, case, &u, &v)?;
    let reps = [u, v, w];
    let comps = case.triple_components();
    let powers: Vec<F::Elem> = reps.iter().map(|r| f.pow(r, m as u32)).collect();
    for i in 0..3 {
        if f.is_zero(&reps[i]) {
            return Err(Error::InvalidInput("offsets must be nonzero".into()));
        }
        for j in i + 1..3 {
            if comps[i] == comps[j] && f.equal(&powers[i], &powers[j]) {
                return Err(Error::CosetCollision(format!(
                    "cosets {i} and {j} coincide on component {}",
                    comps[i]
                )));
            }
        }
    }
    let mut classes = Vec::with_capacity(3);
    for (rep, comp) in reps.iter().zip(comps) {
        let mut class = Vec::with_capacity(m);
        for j in 0..m {
            let s = f.mul(rep, &f.root_of_unity(m as u64, j as i64)?);
            class.push(dual_point(&singular_param(f, case, comp, &s)?));
        }
        classes.push(class);
    }
    Ok(Net::new(f.clone(), classes))
}
