//! Incidence data of a net as seen by the resonance varieties of its
//! arrangement: the matrix `Q = J^t J - E`, its affine blocks, the component
//! `V` of class-constant vectors and `dim H^1` of the Orlik-Solomon algebra.
//!
//! Conventions: `A^1` of the projective arrangement is `C^n / (e_1 + ... + e_n)`,
//! represented by sum-zero vectors. `H^1(A, a)` is computed in the Orlik-Solomon
//! algebra of the cone, where it agrees with the projective one for sum-zero `a`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{incident, meet, Line, Point};
use crate::net::{require_verified, Net};

/// Absolute eigenvalue tolerance on a block scaled to unit max-entry.
const EIG_TOL: f64 = 1e-9;

/// A point where at least two lines meet, with the lines through it.
#[derive(Debug, Clone)]
pub struct Flat<E> {
    pub point: Point<E>,
    pub lines: Vec<usize>,
}

impl<E> Flat<E> {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

/// Lines of `P^2` with their rank-2 flats.
#[derive(Debug, Clone)]
pub struct Arrangement<F: Field> {
    field: F,
    lines: Vec<Line<F::Elem>>,
    flats: Vec<Flat<F::Elem>>,
}

impl<F: Field> Arrangement<F> {
    pub fn new(field: F, lines: Vec<Line<F::Elem>>) -> Result<Self> {
        let f = &field;
        let mut flats: Vec<Flat<F::Elem>> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].equals(f, &lines[j]) {
                    return Err(Error::InvalidInput(format!("lines {i} and {j} coincide")));
                }
                if flats.iter().any(|x| x.lines.contains(&i) && x.lines.contains(&j)) {
                    continue;
                }
                let p = meet(f, &lines[i], &lines[j])?;
                let through = (0..lines.len()).filter(|&k| incident(f, &p, &lines[k])).collect();
                flats.push(Flat { point: p, lines: through });
            }
        }
        Ok(Arrangement { field, lines, flats })
    }

    pub fn from_net(net: &Net<F>) -> Result<Self> {
        Arrangement::new(net.field().clone(), net.lines().cloned().collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lines(&self) -> &[Line<F::Elem>] {
        &self.lines
    }

    pub fn flats(&self) -> &[Flat<F::Elem>] {
        &self.flats
    }

    pub fn n(&self) -> usize {
        self.lines.len()
    }
}

/// `J[x][l] = 1` iff point `x` lies on line `l`.
pub fn incidence_matrix<F: Field>(f: &F, points: &[Point<F::Elem>], lines: &[Line<F::Elem>]) -> Vec<Vec<u8>> {
    points
        .iter()
        .map(|p| lines.iter().map(|l| u8::from(incident(f, p, l))).collect())
        .collect()
}

/// An indecomposable block of `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub lines: Vec<usize>,
    pub psd: bool,
    pub nullity: usize,
    /// Positive semidefinite with a nontrivial kernel.
    pub affine: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceData {
    #[serde(rename = "J")]
    pub j: Vec<Vec<u8>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    pub blocks: Vec<Block>,
    pub affine_blocks: usize,
    /// Every point of `X` lies on a line of every affine block.
    pub covers_all: bool,
}

impl ResonanceData {
    /// At least `k + 2` affine blocks, covering every point.
    pub fn supports_component(&self, k: usize) -> bool {
        self.affine_blocks >= k + 2 && self.covers_all
    }
}

/// `Q = J^t J - E`, accumulated point by point.
pub fn q_matrix(j: &[Vec<u8>], n: usize) -> Vec<Vec<i64>> {
    let mut q = vec![vec![-1i64; n]; n];
    for row in j {
        let on: Vec<usize> = (0..n).filter(|&l| row[l] != 0).collect();
        for &a in &on {
            for &b in &on {
                q[a][b] += 1;
            }
        }
    }
    q
}

fn components(q: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = q.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in 0..n {
                if !seen[b] && q[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Coefficients `c_0..c_n` of `det(t I - A)` (Faddeev-LeVerrier; every
/// division is exact over the integers).
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let a: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::from(1);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

/// `(psd, nullity)` of a symmetric integer matrix from the signs of its
/// characteristic polynomial.
fn psd_exact(a: &[Vec<i64>]) -> (bool, usize) {
    let c = char_poly(a);
    let n = a.len();
    let nullity = c.iter().position(|x| !x.is_zero()).unwrap_or(n);
    // all roots >= 0 iff the coefficients alternate in sign
    let psd = (0..=n).all(|i| {
        let want_neg = (n - i) % 2 == 1;
        c[i].is_zero() || (c[i].is_negative() == want_neg)
    });
    (psd, nullity)
}

fn psd_numeric(a: &[Vec<i64>]) -> (bool, usize) {
    let n = a.len();
    let scale = a.iter().flatten().map(|x| x.abs()).max().unwrap_or(0).max(1) as f64;
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j] as f64 / scale);
    let ev = m.symmetric_eigenvalues();
    let psd = ev.iter().all(|&e| e >= -EIG_TOL);
    let nullity = ev.iter().filter(|e| e.abs() <= EIG_TOL).count();
    (psd, nullity)
}

/// `Q`, its indecomposable blocks and their affine-type verdicts. `exact`
/// selects the characteristic-polynomial test over the eigenvalue test.
pub fn q_blocks(j: &[Vec<u8>], n: usize, exact: bool) -> ResonanceData {
    let q = q_matrix(j, n);
    let blocks: Vec<Block> = components(&q)
        .into_iter()
        .map(|lines| {
            let sub: Vec<Vec<i64>> = lines.iter().map(|&a| lines.iter().map(|&b| q[a][b]).collect()).collect();
            let (psd, nullity) = if exact { psd_exact(&sub) } else { psd_numeric(&sub) };
            Block {
                lines,
                psd,
                nullity,
                affine: psd && nullity >= 1,
            }
        })
        .collect();
    let affine: Vec<&Block> = blocks.iter().filter(|b| b.affine).collect();
    let covers_all = j
        .iter()
        .all(|row| affine.iter().all(|b| b.lines.iter().any(|&l| row[l] != 0)));
    ResonanceData {
        j: j.to_vec(),
        q,
        affine_blocks: affine.len(),
        blocks,
        covers_all,
    }
}

/// [`q_blocks`] for a verified net with `X` its point set.
pub fn net_resonance<F: Field>(net: &Net<F>) -> Result<ResonanceData> {
    let pts = require_verified(net)?;
    let lines: Vec<Line<F::Elem>> = net.lines().cloned().collect();
    let j = incidence_matrix(net.field(), &pts, &lines);
    Ok(q_blocks(&j, lines.len(), net.field().is_exact()))
}

/// Class-constant sum-zero vectors, in the class-by-class line order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentV {
    pub basis: Vec<Vec<i64>>,
}

impl ComponentV {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum c_i b_i` for scalars `c`.
    pub fn combine<F: Field>(&self, f: &F, c: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.basis.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| {
                self.basis
                    .iter()
                    .zip(c)
                    .fold(f.zero(), |acc, (b, x)| f.add(&acc, &f.scale_int(x, b[i])))
            })
            .collect()
    }
}

/// Basis `e_{A_0} - e_{A_c}`, `c = 1..k-1`, of the essential component of a verified net.
pub fn essential_component<F: Field>(net: &Net<F>) -> Result<ComponentV> {
    require_verified(net)?;
    let sizes: Vec<usize> = net.classes().iter().map(Vec::len).collect();
    let n: usize = sizes.iter().sum();
    let start = |c: usize| sizes[..c].iter().sum::<usize>();
    let basis = (1..sizes.len())
        .map(|c| {
            let mut v = vec![0i64; n];
            v[..sizes[0]].iter_mut().for_each(|x| *x = 1);
            v[start(c)..start(c) + sizes[c]].iter_mut().for_each(|x| *x = -1);
            v
        })
        .collect();
    Ok(ComponentV { basis })
}

/// `dim H^1(A, a)` in degrees `<= 2` of the Orlik-Solomon algebra.
///
/// `a` is first reduced modulo `e_1 + ... + e_n` to its sum-zero representative.
pub fn os_h1_dim<F: Field>(arr: &Arrangement<F>, a: &[F::Elem]) -> Result<usize> {
    let f = arr.field();
    let n = arr.n();
    if a.len() != n {
        return Err(Error::InvalidInput(format!("vector has length {}, arrangement has {n} lines", a.len())));
    }
    let mean = f.div(&f.sum(a), &f.from_int(n as i64)).expect("n > 0");
    let a: Vec<F::Elem> = a.iter().map(|x| f.sub(x, &mean)).collect();
    if a.iter().all(|x| f.is_zero(x)) {
        return Err(Error::InvalidInput("the vector is zero modulo e_1 + ... + e_n".into()));
    }
    // A^2 = sum over flats of span{e_p0 e_pj}; e_pi e_pj = e_p0 e_pj - e_p0 e_pi.
    let rows_total: usize = arr.flats.iter().map(|x| x.multiplicity() - 1).sum();
    let mut rows = vec![vec![f.zero(); n]; rows_total];
    let mut base = 0;
    for flat in &arr.flats {
        let ls = &flat.lines;
        // coefficient vector of e_{ls[u]} e_{ls[v]} over row indices base + (j - 1)
        let mut add = |u: usize, v: usize, col: usize, coef: &F::Elem| {
            if u == v {
                return;
            }
            let (u, v, coef) = if u < v { (u, v, coef.clone()) } else { (v, u, f.neg(coef)) };
            let r = &mut rows;
            if u == 0 {
                let row = base + v - 1;
                r[row][col] = f.add(&r[row][col], &coef);
            } else {
                let rv = base + v - 1;
                let ru = base + u - 1;
                r[rv][col] = f.add(&r[rv][col], &coef);
                r[ru][col] = f.sub(&r[ru][col], &coef);
            }
        };
        // a ^ e_{ls[v]} = sum_u a_{ls[u]} e_{ls[u]} e_{ls[v]}, column ls[v]
        for v in 0..ls.len() {
            for u in 0..ls.len() {
                add(u, v, ls[v], &a[ls[u]]);
            }
        }
        base += ls.len() - 1;
    }
    let kernel = f.nullspace(&rows, n).len();
    Ok(kernel.saturating_sub(1))
}
