//! Kernels and ranks for the two backends, plus the small exact helpers the
//! resonance computations need.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::field::Field;

/// Right kernel of a complex matrix by SVD.
///
/// Columns are equilibrated to unit norm first (the kernel is mapped back
/// through the same diagonal scaling); singular values at most
/// `eps_rank * sigma_max` count as zero.
pub fn svd_nullspace(rows: &[Vec<Complex64>], ncols: usize, eps_rank: f64) -> Vec<Vec<Complex64>> {
    let (scaled, scale) = equilibrate(rows, ncols, eps_rank.sqrt());
    let Some((sigma, vt)) = full_svd(&scaled, ncols) else {
        return identity_basis(ncols);
    };
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return identity_basis(ncols);
    }
    let thr = eps_rank * smax;
    let mut basis = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s <= thr {
            let v: Vec<Complex64> = (0..ncols).map(|j| vt[(k, j)].conj() * scale[j]).collect();
            basis.push(v);
        }
    }
    basis
}

/// Singular values (descending) of a complex matrix after column equilibration.
pub fn equilibrated_singular_values(rows: &[Vec<Complex64>], ncols: usize) -> Vec<f64> {
    let (scaled, _) = equilibrate(rows, ncols, 1e-4);
    match full_svd(&scaled, ncols) {
        Some((mut s, _)) => {
            s.sort_by(|a, b| b.total_cmp(a));
            s
        }
        None => vec![0.0; ncols],
    }
}

fn identity_basis(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[i] = Complex64::new(1.0, 0.0);
            v
        })
        .collect()
}

/// Scales each column to unit norm; norms below `floor` times the largest
/// are clamped so roundoff-sized columns stay small.
fn equilibrate(rows: &[Vec<Complex64>], ncols: usize, floor: f64) -> (Vec<Vec<Complex64>>, Vec<f64>) {
    let norms: Vec<f64> = (0..ncols)
        .map(|j| rows.iter().map(|r| r[j].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let min_norm = norms.iter().cloned().fold(0.0, f64::max) * floor;
    let scale: Vec<f64> = norms
        .iter()
        .map(|&n| if n > 0.0 { 1.0 / n.max(min_norm) } else { 1.0 })
        .collect();
    let scaled = rows
        .iter()
        .map(|r| r.iter().zip(&scale).map(|(x, s)| x * s).collect())
        .collect();
    (scaled, scale)
}

/// Singular values and the full `ncols x ncols` factor `V^H`; rows are zero
/// padded so nalgebra returns a square right factor.
fn full_svd(rows: &[Vec<Complex64>], ncols: usize) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    if ncols == 0 {
        return None;
    }
    let nrows = rows.len().max(ncols);
    let mut m = DMatrix::<Complex64>::zeros(nrows, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t?;
    Some((svd.singular_values.iter().cloned().collect(), vt))
}

/// Right kernel by Gauss-Jordan elimination over an arbitrary field context.
pub fn rref_nullspace<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&m[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solves a square rational system; `None` when singular.
pub fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for j in c..n {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..n {
                    let t = &factor * &a[c][j];
                    a[i][j] -= t;
                }
                let t = &factor * &b[c];
                b[i] -= t;
            }
        }
    }
    Some(b)
}

/// Characteristic polynomial `det(t I - A)` of an integer matrix, constant
/// term first, by the Faddeev-LeVerrier recursion in exact arithmetic.
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigRational> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::from_integer(BigInt::from(1));
    // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let cprev = coeffs[n - k + 1].clone();
        let mut next = mat_mul(&am, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &cprev;
        }
        mk = next;
        let amk = mat_mul(&am, &mk);
        let tr: BigRational = (0..n).map(|i| amk[i][i].clone()).fold(BigRational::zero(), |s, x| s + x);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Positive semidefiniteness and nullity of a symmetric integer matrix,
/// decided exactly from the signs of its characteristic polynomial: all
/// eigenvalues are nonnegative iff `(-1)^(n-k) c_k >= 0` for every `k`, and
/// the nullity is the multiplicity of the root zero.
pub fn psd_nullity_exact(a: &[Vec<i64>]) -> (bool, usize) {
    let n = a.len();
    let cp = char_poly(a);
    let psd = cp.iter().enumerate().all(|(k, c)| {
        let sign_flip = (n - k) % 2 == 1;
        let v = if sign_flip { -c.clone() } else { c.clone() };
        !v.is_negative()
    });
    let nullity = cp.iter().position(|c| !c.is_zero()).unwrap_or(n);
    (psd, nullity)
}

/// Floating point counterpart of [`psd_nullity_exact`] on the
/// unit-normalized matrix.
pub fn psd_nullity_eigen(a: &[Vec<i64>], tol: f64) -> (bool, usize) {
    let n = a.len();
    if n == 0 {
        return (true, 0);
    }
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.unsigned_abs() as f64)
        .fold(0.0, f64::max);
    let scale = if scale == 0.0 { 1.0 } else { scale };
    let m = DMatrix::<f64>::from_fn(n, n, |i, j| a[i][j] as f64 / scale);
    let eig = m.symmetric_eigen();
    let psd = eig.eigenvalues.iter().all(|&l| l >= -tol);
    let nullity = eig.eigenvalues.iter().filter(|l| l.abs() <= tol).count();
    (psd, nullity)
}
