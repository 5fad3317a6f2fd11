//! Nets of lines: the axioms, class profiles, the Euler-characteristic
//! feasibility bound and the pencil of split curves.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{self, Line, Point};
use crate::poly::Form;

/// `k` classes of lines and, optionally, a claimed point set.
#[derive(Debug, Clone)]
pub struct Net<F: Field> {
    field: F,
    classes: Vec<Vec<Line<F::Elem>>>,
    points: Option<Vec<Point<F::Elem>>>,
}

impl<F: Field> Net<F> {
    pub fn new(field: F, classes: Vec<Vec<Line<F::Elem>>>) -> Self {
        Net {
            field,
            classes,
            points: None,
        }
    }

    /// Attaches a claimed point set; `verify_net` cross-checks it.
    pub fn with_points(mut self, points: Vec<Point<F::Elem>>) -> Self {
        self.points = Some(points);
        self
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn classes(&self) -> &[Vec<Line<F::Elem>>] {
        &self.classes
    }

    pub fn input_points(&self) -> Option<&[Point<F::Elem>]> {
        self.points.as_deref()
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// All lines, class by class.
    pub fn lines(&self) -> impl Iterator<Item = &Line<F::Elem>> {
        self.classes.iter().flatten()
    }

    pub fn line_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// The sub-net on a selection of line indices per class.
    pub fn select(&self, picks: &[Vec<usize>]) -> Net<F> {
        let classes = picks
            .iter()
            .zip(&self.classes)
            .map(|(idx, class)| idx.iter().map(|&i| class[i].clone()).collect())
            .collect();
        Net::new(self.field.clone(), classes)
    }
}

/// One failed axiom or count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateLine {
        first: (usize, usize),
        second: (usize, usize),
    },
    UnequalClassSizes {
        sizes: Vec<usize>,
    },
    TrivialOrder {
        m: usize,
    },
    /// A point of the set lies on `found` lines of `class` instead of one.
    PointCover {
        point: String,
        class: usize,
        found: usize,
    },
    PointCount {
        expected: usize,
        found: usize,
    },
    LineMeets {
        class: usize,
        line: usize,
        expected: usize,
        found: usize,
    },
    /// A claimed point that is not a cross-class intersection.
    ExtraInputPoint {
        point: String,
    },
    /// A cross-class intersection missing from the claimed points.
    MissingInputPoint {
        point: String,
    },
}

impl Violation {
    /// Which clause of the net definition the finding belongs to.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::DuplicateLine { .. } => "distinct lines",
            Violation::UnequalClassSizes { .. } => "equal class sizes",
            Violation::TrivialOrder { .. } => "nontrivial order",
            Violation::PointCover { .. } => "(ii)",
            Violation::PointCount { .. } => "|X| = m^2",
            Violation::LineMeets { .. } => "|l meet X| = m",
            Violation::ExtraInputPoint { .. } | Violation::MissingInputPoint { .. } => "(i)",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLine { first, second } => write!(
                f,
                "line {} of class {} repeats line {} of class {}",
                second.1, second.0, first.1, first.0
            ),
            Violation::UnequalClassSizes { sizes } => write!(f, "class sizes differ: {sizes:?}"),
            Violation::TrivialOrder { m } => write!(f, "order m = {m} is trivial"),
            Violation::PointCover { point, class, found } => write!(
                f,
                "axiom (ii): point {point} lies on {found} lines of class {class}"
            ),
            Violation::PointCount { expected, found } => {
                write!(f, "expected {expected} points, found {found}")
            }
            Violation::LineMeets {
                class,
                line,
                expected,
                found,
            } => write!(
                f,
                "line {line} of class {class} meets the point set {found} times, expected {expected}"
            ),
            Violation::ExtraInputPoint { point } => {
                write!(f, "axiom (i): given point {point} is not a cross-class intersection")
            }
            Violation::MissingInputPoint { point } => {
                write!(f, "axiom (i): intersection {point} is missing from the given points")
            }
        }
    }
}

/// Outcome of [`verify_net`]. `ok` holds iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    pub ok: bool,
    pub k: usize,
    pub m: usize,
    /// Number of classes that are pencils.
    pub r: usize,
    pub points: usize,
    pub violations: Vec<Violation>,
    /// Within-class intersections that coincide with a point of the set.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Accept order `m = 1` (a pencil with its base point).
    pub allow_trivial: bool,
}

pub fn describe_point<F: Field>(f: &F, p: &Point<F::Elem>) -> String {
    let c: Vec<String> = p
        .coords()
        .iter()
        .map(|x| {
            let z = f.to_complex(x);
            if z.im.abs() < 1e-12 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect();
    format!("({})", c.join(" : "))
}

fn find_duplicates<F: Field>(net: &Net<F>) -> Vec<Violation> {
    let f = &net.field;
    let flat: Vec<((usize, usize), &Line<F::Elem>)> = net
        .classes
        .iter()
        .enumerate()
        .flat_map(|(c, ls)| ls.iter().enumerate().map(move |(i, l)| ((c, i), l)))
        .collect();
    let mut out = Vec::new();
    for a in 0..flat.len() {
        for b in (a + 1)..flat.len() {
            if flat[a].1.equals(f, flat[b].1) {
                out.push(Violation::DuplicateLine {
                    first: flat[a].0,
                    second: flat[b].0,
                });
            }
        }
    }
    out
}

fn push_unique<F: Field>(f: &F, set: &mut Vec<Point<F::Elem>>, p: Point<F::Elem>) {
    if !set.iter().any(|q| q.equals(f, &p)) {
        set.push(p);
    }
}

/// All intersection points of lines from different classes, deduplicated.
pub fn compute_points<F: Field>(net: &Net<F>) -> Result<Vec<Point<F::Elem>>> {
    if let Some(Violation::DuplicateLine { first, second }) = find_duplicates(net).first() {
        return Err(Error::InvalidInput(format!(
            "duplicate lines {first:?} and {second:?}"
        )));
    }
    let f = &net.field;
    let mut points = Vec::new();
    for (i, ci) in net.classes.iter().enumerate() {
        for cj in &net.classes[i + 1..] {
            for l in ci {
                for m in cj {
                    push_unique(f, &mut points, geom::meet(f, l, m)?);
                }
            }
        }
    }
    Ok(points)
}

/// Checks the net axioms and fills in `k`, `m`, `r`.
pub fn verify_net<F: Field>(net: &Net<F>) -> Result<NetReport> {
    verify_net_with(net, VerifyOptions::default())
}

pub fn verify_net_with<F: Field>(net: &Net<F>, opts: VerifyOptions) -> Result<NetReport> {
    let f = &net.field;
    let k = net.k();
    if k < 3 && !(opts.allow_trivial && k >= 1) {
        return Err(Error::InvalidInput(format!("a net needs at least 3 classes, got {k}")));
    }
    if net.classes.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("every class must be nonempty".into()));
    }

    let mut violations = find_duplicates(net);
    let sizes: Vec<usize> = net.classes.iter().map(Vec::len).collect();
    let m = sizes[0];
    if sizes.iter().any(|&s| s != m) {
        violations.push(Violation::UnequalClassSizes {
            sizes: sizes.clone(),
        });
    }
    if m <= 1 && !opts.allow_trivial {
        violations.push(Violation::TrivialOrder { m });
    }
    if !violations.is_empty()
        && violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateLine { .. }))
    {
        return Ok(NetReport {
            ok: false,
            k,
            m,
            r: 0,
            points: 0,
            violations,
            warnings: Vec::new(),
        });
    }

    let points = if k >= 2 {
        compute_points(net)?
    } else {
        // trivial one-class case: the pencil base
        let mut pts = Vec::new();
        let class = &net.classes[0];
        if class.len() >= 2 {
            push_unique(f, &mut pts, geom::meet(f, &class[0], &class[1])?);
        }
        pts
    };

    if let Some(given) = &net.points {
        for p in given {
            if !points.iter().any(|q| q.equals(f, p)) {
                violations.push(Violation::ExtraInputPoint {
                    point: describe_point(f, p),
                });
            }
        }
        for q in &points {
            if !given.iter().any(|p| p.equals(f, q)) {
                violations.push(Violation::MissingInputPoint {
                    point: describe_point(f, q),
                });
            }
        }
    }

    // (ii): every point on exactly one line of every class
    for p in &points {
        for (c, class) in net.classes.iter().enumerate() {
            let found = class.iter().filter(|l| geom::incident(f, p, l)).count();
            if found != 1 {
                violations.push(Violation::PointCover {
                    point: describe_point(f, p),
                    class: c,
                    found,
                });
            }
        }
    }

    if points.len() != m * m {
        violations.push(Violation::PointCount {
            expected: m * m,
            found: points.len(),
        });
    }

    for (c, class) in net.classes.iter().enumerate() {
        for (i, l) in class.iter().enumerate() {
            let found = points.iter().filter(|p| geom::incident(f, p, l)).count();
            if found != m {
                violations.push(Violation::LineMeets {
                    class: c,
                    line: i,
                    expected: m,
                    found,
                });
            }
        }
    }

    let mut warnings = Vec::new();
    for (c, class) in net.classes.iter().enumerate() {
        for a in 0..class.len() {
            for b in (a + 1)..class.len() {
                let x = geom::meet(f, &class[a], &class[b])?;
                if points.iter().any(|p| p.equals(f, &x)) {
                    warnings.push(format!(
                        "lines {a} and {b} of class {c} meet at {}, a point of the set",
                        describe_point(f, &x)
                    ));
                }
            }
        }
    }

    let r = net
        .classes
        .iter()
        .filter(|cl| cl.len() >= 2)
        .filter(|cl| matches!(class_profile(f, cl), Ok(ClassProfile::Pencil(_))))
        .count();

    Ok(NetReport {
        ok: violations.is_empty(),
        k,
        m,
        r,
        points: points.len(),
        violations,
        warnings,
    })
}

/// Runs [`verify_net`] and returns the point set, or an error naming the
/// first violation.
pub fn require_verified<F: Field>(net: &Net<F>) -> Result<Vec<Point<F::Elem>>> {
    let report = verify_net(net)?;
    if !report.ok {
        return Err(Error::UnverifiedNet(report.violations[0].to_string()));
    }
    compute_points(net)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassProfile<E> {
    Pencil(Point<E>),
    GeneralPosition,
    Other,
}

impl<E> ClassProfile<E> {
    pub fn name(&self) -> &'static str {
        match self {
            ClassProfile::Pencil(_) => "pencil",
            ClassProfile::GeneralPosition => "general-position",
            ClassProfile::Other => "other",
        }
    }
}

/// Pencil when all lines pass through one point, general position when the
/// pairwise intersections are pairwise distinct.
pub fn class_profile<F: Field>(f: &F, lines: &[Line<F::Elem>]) -> Result<ClassProfile<F::Elem>> {
    if lines.len() < 2 {
        return Err(Error::InvalidInput("a class profile needs at least two lines".into()));
    }
    let base = geom::meet(f, &lines[0], &lines[1])?;
    if lines.iter().all(|l| geom::incident(f, &base, l)) {
        return Ok(ClassProfile::Pencil(base));
    }
    let mut meets: Vec<Point<F::Elem>> = Vec::new();
    for a in 0..lines.len() {
        for b in (a + 1)..lines.len() {
            let x = geom::meet(f, &lines[a], &lines[b])?;
            if meets.iter().any(|p| p.equals(f, &x)) {
                return Ok(ClassProfile::Other);
            }
            meets.push(x);
        }
    }
    Ok(ClassProfile::GeneralPosition)
}

/// Verdict of the `(k, m, r)` bound `k <= 6(m-1)/m - r(m-2)/m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub lhs: i64,
    /// The right-hand side as an exact fraction.
    #[serde(serialize_with = "ser_ratio")]
    pub rhs: Ratio<i64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Euler-characteristic bound on `(k, m)` when `r` classes are pencils.
pub fn euler_feasible(k: i64, m: i64, r: i64) -> Result<Feasibility> {
    if k < 3 || m < 2 || r < 0 || r > k {
        return Err(Error::InvalidInput(format!(
            "need k >= 3, m >= 2, 0 <= r <= k; got k={k}, m={m}, r={r}"
        )));
    }
    let rhs = Ratio::new(6 * (m - 1), m) - Ratio::new(r * (m - 2), m);
    Ok(Feasibility {
        feasible: Ratio::from_integer(k) <= rhs,
        lhs: k,
        rhs,
    })
}

/// The split curves `g_i = prod_j alpha_ij` all lie in the pencil spanned
/// by the first two: the stacked coefficient matrix has rank 2.
pub fn verify_split_pencil<F: Field>(net: &Net<F>) -> Result<bool> {
    let f = &net.field;
    let k = net.k();
    let m = net.classes.first().map_or(0, Vec::len);
    if k < 3 || m < 1 || net.classes.iter().any(|c| c.len() != m) {
        return Err(Error::UnverifiedNet(
            "need at least 3 classes of one common size".into(),
        ));
    }
    let rows: Vec<Vec<F::Elem>> = net
        .classes
        .iter()
        .map(|class| Form::product_of_lines(f, class).coeffs().to_vec())
        .collect();
    let ncols = rows[0].len();
    Ok(f.rank(&rows, ncols) == 2)
}
