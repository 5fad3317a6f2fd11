//! Complete sets: nine points on which every cubic through eight passes through the ninth.

use rand::RngCore;

use super::fit_cubics;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{dual_line, meet, random_line, Point};
use crate::net::Net;

/// Decides whether nine points form a complete set: the cubics through any
/// eight of them all pass through the ninth.
pub fn complete_set_check<F: Field>(f: &F, nine: &[Point<F::Elem>]) -> Result<bool> {
    if nine.len() != 9 {
        return Err(Error::InvalidInput(format!("expected 9 points, got {}", nine.len())));
    }
    for i in 0..9 {
        for j in i + 1..9 {
            if nine[i].equals(f, &nine[j]) {
                return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
            }
        }
    }
    let full = fit_cubics(f, nine).len();
    if full > 2 {
        return Err(Error::Inconclusive(format!(
            "the nine points impose only {} conditions on cubics",
            10 - full
        )));
    }
    if full < 2 {
        return Ok(false);
    }
    for skip in 0..9 {
        let octet: Vec<Point<F::Elem>> = nine
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != skip)
            .map(|(_, p)| p.clone())
            .collect();
        let d = fit_cubics(f, &octet).len();
        if d > 2 {
            return Err(Error::Inconclusive(format!(
                "the points other than {skip} impose only {} conditions on cubics",
                10 - d
            )));
        }
    }
    Ok(true)
}

/// The nine intersection points of two random triangles.
pub fn random_complete_set<F: Field>(f: &F, rng: &mut dyn RngCore) -> Result<Vec<Point<F::Elem>>> {
    'retry: for _ in 0..100 {
        let a: Vec<_> = (0..3).map(|_| random_line(f, rng)).collect();
        let b: Vec<_> = (0..3).map(|_| random_line(f, rng)).collect();
        let mut pts: Vec<Point<F::Elem>> = Vec::with_capacity(9);
        for l in &a {
            for m in &b {
                let Ok(p) = meet(f, l, m) else { continue 'retry };
                if pts.iter().any(|q| q.equals(f, &p)) {
                    continue 'retry;
                }
                pts.push(p);
            }
        }
        return Ok(pts);
    }
    Err(Error::Numeric("could not draw two transverse triangles".into()))
}

/// Index sets `{A1 | A2 | A3}` of a 3-net realizing `Z_m`, labelled so that
/// lines `a1, a2, a3` are concurrent iff `a1 + a2 + a3 = 0 (mod m)`.
pub type IndexSet = [[i64; 3]; 3];

/// `{k, k+1, k+2 | l, l+1, l+2 | -k-l-1, -k-l-2, -k-l-3}`; `t_kl(0, 0)` is
/// `{0,1,2 | 0,1,2 | -1,-2,-3}`.
pub fn t_kl(k: i64, l: i64) -> IndexSet {
    [
        [k, k + 1, k + 2],
        [l, l + 1, l + 2],
        [-k - l - 1, -k - l - 2, -k - l - 3],
    ]
}

/// `{a, b, c | a, b, c | -(a+b), -(a+c), -(b+c)}`, complete for distinct `a, b, c`.
pub fn abc_set(a: i64, b: i64, c: i64) -> IndexSet {
    [[a, b, c], [a, b, c], [-(a + b), -(a + c), -(b + c)]]
}

/// Dual points of the lines `labels[i][j]` of class `i`, where `position(i, label)`
/// turns a group label into a line position.
pub fn dual_points_of<F: Field>(
    net: &Net<F>,
    labels: &IndexSet,
    position: impl Fn(usize, i64) -> usize,
) -> Vec<Point<F::Elem>> {
    let mut out = Vec::with_capacity(9);
    for (i, row) in labels.iter().enumerate() {
        for &a in row {
            out.push(dual_line(&net.classes()[i][position(i, a)]));
        }
    }
    out
}
