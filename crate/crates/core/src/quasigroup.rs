//! Latin squares of 3-nets, loops, and abelian group identification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{incident, meet};
use crate::net::{require_verified, Net};

/// The pairing of a 3-net: `table[i][j]` is the symbol (third-class line) through
/// the meet of row line `i` and column line `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinSquare {
    pub m: usize,
    pub table: Vec<Vec<usize>>,
    pub labels: Labels,
}

/// Positions of the lines of each class used for rows, columns and symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub symbols: Vec<usize>,
}

impl Labels {
    pub fn identity(m: usize) -> Self {
        Labels {
            rows: (0..m).collect(),
            cols: (0..m).collect(),
            symbols: (0..m).collect(),
        }
    }
}

fn is_permutation(v: &[usize], m: usize) -> bool {
    let mut seen = vec![false; m];
    v.len() == m
        && v.iter().all(|&x| {
            if x >= m || seen[x] {
                false
            } else {
                seen[x] = true;
                true
            }
        })
}

fn check_latin(table: &[Vec<usize>]) -> Result<usize> {
    let m = table.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if !is_permutation(row, m) {
            return Err(Error::InvalidInput(format!("row {i} is not a permutation of 0..{m}")));
        }
    }
    for j in 0..m {
        let col: Vec<usize> = table.iter().map(|r| r[j]).collect();
        if !is_permutation(&col, m) {
            return Err(Error::InvalidInput(format!("column {j} is not a permutation of 0..{m}")));
        }
    }
    Ok(m)
}

impl LatinSquare {
    /// Validates `table` and attaches identity labels.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let m = check_latin(&table)?;
        Ok(LatinSquare {
            m,
            table,
            labels: Labels::identity(m),
        })
    }

    pub fn with_labels(table: Vec<Vec<usize>>, labels: Labels) -> Result<Self> {
        let m = check_latin(&table)?;
        for v in [&labels.rows, &labels.cols, &labels.symbols] {
            if !is_permutation(v, m) {
                return Err(Error::InvalidInput("labels must be permutations of 0..m".into()));
            }
        }
        Ok(LatinSquare { m, table, labels })
    }
}

/// A Latin square whose row 0 and column 0 are the identity permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Loop {
    pub m: usize,
    pub table: Vec<Vec<usize>>,
}

impl Loop {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let m = check_latin(&table)?;
        for i in 0..m {
            if table[0][i] != i || table[i][0] != i {
                return Err(Error::InvalidInput("0 is not a two-sided identity".into()));
            }
        }
        Ok(Loop { m, table })
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_associative(&self) -> bool {
        let t = &self.table;
        (0..self.m).all(|a| {
            (0..self.m).all(|b| {
                let ab = t[a][b];
                (0..self.m).all(|c| t[ab][c] == t[a][t[b][c]])
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.m).all(|a| (a + 1..self.m).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Order of `a` (assumes power associativity, true in groups).
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.table[x][a];
            n += 1;
            if n > self.m {
                break;
            }
        }
        n
    }
}

/// Cayley table of `Z_{d1} + ... + Z_{ds}` in mixed radix order.
pub fn abelian_group_table(factors: &[usize]) -> Vec<Vec<usize>> {
    let m: usize = factors.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = Vec::with_capacity(factors.len());
        for &f in factors.iter().rev() {
            d.push(x % f);
            x /= f;
        }
        d.reverse();
        d
    };
    let compose = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (&x, &f)| acc * f + x);
    (0..m)
        .map(|a| {
            let da = digits(a);
            (0..m)
                .map(|b| {
                    let s: Vec<usize> = digits(b)
                        .iter()
                        .zip(&da)
                        .zip(factors)
                        .map(|((x, y), f)| (x + y) % f)
                        .collect();
                    compose(&s)
                })
                .collect()
        })
        .collect()
}

/// Structure verdict of a loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GroupId {
    AbelianGroup { invariant_factors: Vec<usize> },
    NonabelianGroup,
    NotAGroup,
}

impl GroupId {
    pub fn is_group(&self) -> bool {
        !matches!(self, GroupId::NotAGroup)
    }
}

impl std::fmt::Display for GroupId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupId::AbelianGroup { invariant_factors } => {
                let parts: Vec<String> = invariant_factors.iter().map(|d| format!("Z{d}")).collect();
                if parts.is_empty() {
                    write!(f, "abelian group (trivial)")
                } else {
                    write!(f, "abelian group {}", parts.join(" + "))
                }
            }
            GroupId::NonabelianGroup => write!(f, "nonabelian group"),
            GroupId::NotAGroup => write!(f, "not a group"),
        }
    }
}

/// Pairing of a verified 3-net. `orderings` gives, per class, the line positions
/// used for rows, columns and symbols; `None` keeps file order.
pub fn latin_from_net<F: Field>(net: &Net<F>, orderings: Option<&Labels>) -> Result<LatinSquare> {
    if net.k() != 3 {
        return Err(Error::InvalidInput(format!("expected a 3-net, got {} classes", net.k())));
    }
    require_verified(net)?;
    let f = net.field();
    let cls = net.classes();
    let m = cls[0].len();
    let labels = match orderings {
        Some(l) => {
            for v in [&l.rows, &l.cols, &l.symbols] {
                if !is_permutation(v, m) {
                    return Err(Error::InvalidInput("orderings must be permutations of 0..m".into()));
                }
            }
            l.clone()
        }
        None => Labels::identity(m),
    };
    let mut table = vec![vec![0; m]; m];
    for (i, &ri) in labels.rows.iter().enumerate() {
        for (j, &cj) in labels.cols.iter().enumerate() {
            let p = meet(f, &cls[0][ri], &cls[1][cj])?;
            let k = labels
                .symbols
                .iter()
                .position(|&s| incident(f, &p, &cls[2][s]))
                .ok_or_else(|| Error::Numeric("no third-class line through a meet point".into()))?;
            table[i][j] = k;
        }
    }
    LatinSquare::with_labels(table, labels)
}

/// Principal isotope at `(r0, c0)`, relabeled so its identity is 0.
pub fn normalize_to_loop(ls: &LatinSquare, r0: usize, c0: usize) -> Result<Loop> {
    let m = ls.m;
    if r0 >= m || c0 >= m {
        return Err(Error::InvalidInput("isotope base out of range".into()));
    }
    let t = &ls.table;
    // row_of[x]: row where column c0 shows x; col_of[y]: column where row r0 shows y.
    let mut row_of = vec![0; m];
    let mut col_of = vec![0; m];
    for r in 0..m {
        row_of[t[r][c0]] = r;
    }
    for c in 0..m {
        col_of[t[r0][c]] = c;
    }
    let e = t[r0][c0];
    let relabel = |s: usize| {
        if s == e {
            0
        } else if s == 0 {
            e
        } else {
            s
        }
    };
    let mut table = vec![vec![0; m]; m];
    for x in 0..m {
        for y in 0..m {
            table[relabel(x)][relabel(y)] = relabel(t[row_of[x]][col_of[y]]);
        }
    }
    Loop::new(table)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// Invariant factors `d1 | d2 | ... | ds` of an abelian group given by its element orders.
fn invariant_factors(orders: &[usize]) -> Vec<usize> {
    let m = orders.len();
    let mut factors: Vec<usize> = Vec::new();
    for p in prime_factors(m) {
        // |G[p^k]| = p^(sum_i min(lambda_i, k)); successive differences give the conjugate partition.
        let mut conj = Vec::new();
        let mut prev = 0u32;
        let mut pk = 1usize;
        loop {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count();
            let e = count.ilog(p);
            if e == prev {
                break;
            }
            conj.push((e - prev) as usize);
            prev = e;
        }
        // conj[k] = #{i : lambda_i > k}; lambda sorted decreasing.
        let parts = conj.first().copied().unwrap_or(0);
        let lambda: Vec<u32> = (0..parts)
            .map(|i| conj.iter().filter(|&&c| c > i).count() as u32)
            .collect();
        if factors.len() < lambda.len() {
            let pad = lambda.len() - factors.len();
            factors.splice(0..0, std::iter::repeat_n(1, pad));
        }
        let s = factors.len();
        for (i, &l) in lambda.iter().enumerate() {
            factors[s - 1 - i] *= p.pow(l);
        }
    }
    factors
}

/// Exhaustive associativity and commutativity scan, then invariant factors.
pub fn group_identify(lp: &Loop) -> GroupId {
    if !lp.is_associative() {
        return GroupId::NotAGroup;
    }
    if !lp.is_commutative() {
        return GroupId::NonabelianGroup;
    }
    let orders: Vec<usize> = (0..lp.m).map(|a| lp.element_order(a)).collect();
    GroupId::AbelianGroup {
        invariant_factors: invariant_factors(&orders),
    }
}

/// Partition a group-realizing 3-net into the subnets cut out by the cosets of
/// `subgroup` (elements of the loop normalized at `(0, 0)`).
pub fn coset_subnets<F: Field>(net: &Net<F>, ls: &LatinSquare, subgroup: &[usize]) -> Result<Vec<Net<F>>> {
    let lp = normalize_to_loop(ls, 0, 0)?;
    if !lp.is_associative() {
        return Err(Error::NotAGroup);
    }
    let m = lp.m;
    let mut h: Vec<usize> = subgroup.to_vec();
    h.sort_unstable();
    h.dedup();
    if h.is_empty() || h.iter().any(|&x| x >= m) || !h.contains(&0) {
        return Err(Error::SubgroupNotClosed);
    }
    if !h.iter().all(|&a| h.iter().all(|&b| h.binary_search(&lp.op(a, b)).is_ok())) {
        return Err(Error::SubgroupNotClosed);
    }
    let e = ls.table[0][0];
    let relabel = |s: usize| {
        if s == e {
            0
        } else if s == 0 {
            e
        } else {
            s
        }
    };
    let row_elem: Vec<usize> = (0..m).map(|i| relabel(ls.table[i][0])).collect();
    let col_elem: Vec<usize> = (0..m).map(|j| relabel(ls.table[0][j])).collect();
    let sym_elem: Vec<usize> = (0..m).map(relabel).collect();

    // Left cosets aH for rows, right cosets Hb for columns; symbols fill aHb.
    let cosets = |left: bool| -> Vec<Vec<usize>> {
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for a in 0..m {
            if seen[a] {
                continue;
            }
            let c: Vec<usize> = h.iter().map(|&x| if left { lp.op(a, x) } else { lp.op(x, a) }).collect();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    };
    let left = cosets(true);
    let right = cosets(false);
    let mut out = Vec::new();
    for a in &left {
        for b in &right {
            let mut syms: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| lp.op(x, y)).collect();
            syms.sort_unstable();
            syms.dedup();
            let pick = |elems: &[usize], table: &[usize], labels: &[usize]| -> Vec<usize> {
                (0..m).filter(|&i| elems.contains(&table[i])).map(|i| labels[i]).collect()
            };
            let picks = vec![
                pick(a, &row_elem, &ls.labels.rows),
                pick(b, &col_elem, &ls.labels.cols),
                pick(&syms, &sym_elem, &ls.labels.symbols),
            ];
            out.push(net.select(&picks));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CyclotomicField;
    use crate::geom::Line;
    use crate::net::verify_net;

    fn pencil(m: u64) -> Net<CyclotomicField> {
        let f = CyclotomicField::new(m).unwrap();
        let z = |k: u64| f.root_of_unity(m, k as i64).unwrap();
        let mk = |c: [_; 3]| Line::new(&f, c).unwrap();
        let classes = vec![
            (0..m).map(|i| mk([f.one(), f.neg(&z(i)), f.zero()])).collect(),
            (0..m).map(|j| mk([f.one(), f.zero(), f.neg(&z(j))])).collect(),
            (0..m).map(|k| mk([f.zero(), f.one(), f.neg(&z(k))])).collect(),
        ];
        Net::new(f, classes)
    }

    fn braid() -> Net<CyclotomicField> {
        let f = CyclotomicField::new(1).unwrap();
        let l = |c| Line::from_ints(&f, c).unwrap();
        Net::new(
            f.clone(),
            vec![
                vec![l([1, 0, 0]), l([0, 1, -1])],
                vec![l([0, 1, 0]), l([1, 0, -1])],
                vec![l([0, 0, 1]), l([1, -1, 0])],
            ],
        )
    }

    const NONASSOC5: [[usize; 5]; 5] = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ];

    #[test]
    fn braid_square() {
        let ls = latin_from_net(&braid(), None).unwrap();
        assert_eq!(ls.table, vec![vec![1, 0], vec![0, 1]]);
        let lp = normalize_to_loop(&ls, 0, 0).unwrap();
        assert_eq!(lp.table, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(group_identify(&lp), GroupId::AbelianGroup { invariant_factors: vec![2] });
    }

    #[test]
    fn pencil_square_is_difference_table() {
        for m in [3u64, 4, 5] {
            let ls = latin_from_net(&pencil(m), None).unwrap();
            let m = m as usize;
            for i in 0..m {
                for j in 0..m {
                    assert_eq!(ls.table[i][j], (j + m - i) % m);
                }
            }
        }
        let lp = normalize_to_loop(&latin_from_net(&pencil(4), None).unwrap(), 0, 0).unwrap();
        assert_eq!(group_identify(&lp), GroupId::AbelianGroup { invariant_factors: vec![4] });
    }

    #[test]
    fn klein_four() {
        let lp = Loop::new(abelian_group_table(&[2, 2])).unwrap();
        assert_eq!(group_identify(&lp), GroupId::AbelianGroup { invariant_factors: vec![2, 2] });
    }

    #[test]
    fn smallest_nonassociative_loop() {
        let lp = Loop::new(NONASSOC5.iter().map(|r| r.to_vec()).collect()).unwrap();
        assert_eq!(group_identify(&lp), GroupId::NotAGroup);
    }

    #[test]
    fn nonabelian_s3() {
        // S3 as permutations of {0,1,2}, composed left to right.
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([b[a[0]], b[a[1]], b[a[2]]])).collect())
            .collect();
        let lp = Loop::new(table).unwrap();
        assert_eq!(group_identify(&lp), GroupId::NonabelianGroup);
    }

    #[test]
    fn invariant_factors_of_products() {
        for (fs, want) in [
            (vec![6], vec![6]),
            (vec![2, 3], vec![6]),
            (vec![2, 4], vec![2, 4]),
            (vec![4, 2], vec![2, 4]),
            (vec![2, 2, 2], vec![2, 2, 2]),
            (vec![3, 6], vec![3, 6]),
            (vec![1], vec![]),
        ] {
            let lp = Loop::new(abelian_group_table(&fs)).unwrap();
            assert_eq!(group_identify(&lp), GroupId::AbelianGroup { invariant_factors: want });
        }
    }

    #[test]
    fn isotopes_of_groups_keep_invariants() {
        for fs in [vec![6], vec![2, 4]] {
            let ls = LatinSquare::new(abelian_group_table(&fs)).unwrap();
            let want = group_identify(&normalize_to_loop(&ls, 0, 0).unwrap());
            for r0 in 0..ls.m {
                for c0 in 0..ls.m {
                    assert_eq!(group_identify(&normalize_to_loop(&ls, r0, c0).unwrap()), want);
                }
            }
        }
    }

    #[test]
    fn loop_normalization_structure() {
        let ls = LatinSquare::new(NONASSOC5.iter().map(|r| r.iter().map(|x| (x + 2) % 5).collect()).collect()).unwrap();
        for (r0, c0) in [(0, 0), (2, 3), (4, 1)] {
            let lp = normalize_to_loop(&ls, r0, c0).unwrap();
            assert!((0..5).all(|i| lp.table[0][i] == i && lp.table[i][0] == i));
        }
    }

    #[test]
    fn rejects_non_latin() {
        assert!(LatinSquare::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(LatinSquare::new(vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(Loop::new(vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn coset_partitions_of_pencils() {
        let net = pencil(6);
        let ls = latin_from_net(&net, None).unwrap();
        let subs = coset_subnets(&net, &ls, &[0, 3]).unwrap();
        assert_eq!(subs.len(), 9);
        for s in &subs {
            let r = verify_net(s).unwrap();
            assert!(r.ok, "{:?}", r.violations);
            assert_eq!(r.m, 2);
        }
        assert!(matches!(coset_subnets(&net, &ls, &[0, 1]), Err(Error::SubgroupNotClosed)));

        let full = coset_subnets(&net, &ls, &(0..6).collect::<Vec<_>>()).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].classes(), net.classes());

        let net4 = pencil(4);
        let ls4 = latin_from_net(&net4, None).unwrap();
        assert_eq!(coset_subnets(&net4, &ls4, &[0, 2]).unwrap().len(), 4);
    }

    #[test]
    fn shuffled_orderings() {
        let net = pencil(5);
        let labels = Labels {
            rows: vec![3, 1, 4, 0, 2],
            cols: vec![2, 0, 1, 4, 3],
            symbols: vec![4, 3, 2, 1, 0],
        };
        let ls = latin_from_net(&net, Some(&labels)).unwrap();
        let lp = normalize_to_loop(&ls, 1, 2).unwrap();
        assert_eq!(group_identify(&lp), GroupId::AbelianGroup { invariant_factors: vec![5] });
        assert_eq!(coset_subnets(&net, &ls, &[0]).unwrap().len(), 25);
    }
}
