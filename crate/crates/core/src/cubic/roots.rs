//! Univariate complex polynomials (ascending coefficients) and their roots.

use num_complex::Complex64;

pub(crate) type Poly = Vec<Complex64>;

pub(crate) fn eval(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

pub(crate) fn mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn sub(a: &[Complex64], b: &[Complex64]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).copied().unwrap_or_default() - b.get(i).copied().unwrap_or_default()
        })
        .collect()
}

pub(crate) fn max_abs(p: &[Complex64]) -> f64 {
    p.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Drops trailing high-degree coefficients below `rel * max|c|`.
pub(crate) fn trim(p: &[Complex64], rel: f64) -> Poly {
    let scale = max_abs(p);
    let mut n = p.len();
    while n > 0 && p[n - 1].norm() <= rel * scale {
        n -= 1;
    }
    p[..n].to_vec()
}

/// All roots by Aberth-Ehrlich iteration, followed by Newton polishing.
pub(crate) fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trim(p, 1e-14);
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Poly = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let deriv: Poly = (1..=n).map(|k| monic[k] * k as f64).collect();
    // Fujiwara-style bound for the initial circle.
    let radius = (0..n)
        .map(|k| monic[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = eval(&monic, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / eval(&deriv, z[i]);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = eval(&deriv, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(&monic, *r) / d;
            let cand = *r - step;
            if cand.is_finite() && eval(&monic, cand).norm() < eval(&monic, *r).norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    z
}

/// Groups roots closer than `tol * max(1, |r|)` and replaces each group by
/// its mean (the mean of a multiple-root cluster is far more accurate than
/// its members). Returns `(mean, multiplicity)`.
pub(crate) fn cluster(rs: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &r in rs {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|&x| (x - r).norm() <= tol * x.norm().max(r.norm()).max(1.0)))
        {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            (g.iter().sum::<Complex64>() / n as f64, n)
        })
        .collect()
}

fn derivative(p: &[Complex64]) -> Poly {
    (1..p.len()).map(|k| p[k] * k as f64).collect()
}

/// [`cluster`] for the roots of `p`, with each `k`-fold mean polished by Newton
/// steps on `p^(k-1)`, of which it is a simple root.
pub(crate) fn cluster_roots(p: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let p = trim(p, 1e-14);
    let mut groups = cluster(&roots(&p), tol);
    for (r, k) in groups.iter_mut() {
        if *k < 2 {
            continue;
        }
        let mut d = p.clone();
        for _ in 1..*k {
            d = derivative(&d);
        }
        let dd = derivative(&d);
        for _ in 0..8 {
            let den = eval(&dd, *r);
            if den.norm() == 0.0 {
                break;
            }
            let cand = *r - eval(&d, *r) / den;
            if cand.is_finite() && eval(&d, cand).norm() < eval(&d, *r).norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    groups
}
