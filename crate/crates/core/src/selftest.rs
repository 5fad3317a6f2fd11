//! Randomized property suites over the geometric and cubic machinery.

use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::cubic::{
    complete_set_check, pairing_third, random_complete_set, singular_coords, weierstrass, EllipticData, SingularCase,
};
use crate::error::Result;
use crate::field::{ApproxComplex, Field};
use crate::geom::{cross_ratio, det3, det_residual, join, meet, random_point, random_point_on, Point};

/// Residual below which a determinant counts as zero in the approximate backend.
pub const CONCURRENCY_TOL: f64 = 1e-8;
/// Residual below which a cubic group relation counts as satisfied.
pub const RELATION_TOL: f64 = 1e-9;
/// Absolute bound on the Weierstrass identity defect.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Residual a perturbed relation must exceed.
pub const SEPARATION_TOL: f64 = 1e-4;
/// Size of the parameter perturbation.
pub const PERTURBATION: f64 = 1e-3;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest residual where an identity should hold.
    pub max_residual: f64,
    /// Smallest residual where it should fail, if the suite checks that.
    pub min_separation: Option<f64>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            trials: 0,
            failures: 0,
            max_residual: 0.0,
            min_separation: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }

    fn holds<F: Field>(&mut self, f: &F, value: &F::Elem, residual: f64, tol: f64) -> bool {
        self.max_residual = self.max_residual.max(residual);
        if f.is_exact() {
            f.is_zero(value)
        } else {
            residual < tol
        }
    }

    fn separated<F: Field>(&mut self, f: &F, value: &F::Elem, residual: f64) -> bool {
        self.min_separation = Some(self.min_separation.map_or(residual, |s| s.min(residual)));
        if f.is_exact() {
            !f.is_zero(value)
        } else {
            residual > SEPARATION_TOL
        }
    }

    fn record(&mut self, ok: bool) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

/// The three lines `a2 a3`, `b1 b2`, `c1 c2` of the configuration
/// `a1 a2 b1 b2 b3`, `c1 = a1b1 ^ a2b3`, `c3 = a1b3 ^ a2b1`, `a3` on `b2c3`,
/// `c2 = a1b2 ^ a3b3` are concurrent.
pub fn concurrency_suite<F: Field>(f: &F, trials: usize, rng: &mut dyn RngCore) -> SuiteReport {
    let mut rep = SuiteReport::new("concurrency");
    let mut attempts = 0;
    while rep.trials < trials && attempts < 20 * trials {
        attempts += 1;
        let Ok(lines) = concurrency_configuration(f, rng) else { continue };
        let d = det3(f, lines[0].coords(), lines[1].coords(), lines[2].coords());
        let r = det_residual(f, lines[0].coords(), lines[1].coords(), lines[2].coords());
        let ok = rep.holds(f, &d, r, CONCURRENCY_TOL);
        rep.record(ok);
    }
    rep
}

fn concurrency_configuration<F: Field>(f: &F, rng: &mut dyn RngCore) -> Result<[crate::geom::Line<F::Elem>; 3]> {
    let [a1, a2, b1, b2, b3] = [(); 5].map(|_| random_point(f, rng));
    let c1 = meet(f, &join(f, &a1, &b1)?, &join(f, &a2, &b3)?)?;
    let c3 = meet(f, &join(f, &a1, &b3)?, &join(f, &a2, &b1)?)?;
    let a3 = random_point_on(f, &b2, &c3, rng);
    let c2 = meet(f, &join(f, &a1, &b2)?, &join(f, &a3, &b3)?)?;
    let pts = [&a1, &a2, &a3, &b1, &b2, &b3, &c1, &c2, &c3];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].equals(f, pts[j]) {
                return Err(crate::error::Error::Degenerate("coincident points".into()));
            }
        }
    }
    Ok([join(f, &a2, &a3)?, join(f, &b1, &b2)?, join(f, &c1, &c2)?])
}

/// For a quadrangle `a1 b1 b2 a2` with diagonal points `c1 = a1b1 ^ a2b2` and
/// `c2 = a1b2 ^ a2b1`, the line `c1c2` meets `a1a2` and `b1b2` in a pair
/// harmonic to `c1, c2`.
pub fn harmonic_suite<F: Field>(f: &F, trials: usize, rng: &mut dyn RngCore) -> SuiteReport {
    let mut rep = SuiteReport::new("harmonic");
    let mut attempts = 0;
    let minus_one = f.from_int(-1);
    while rep.trials < trials && attempts < 20 * trials {
        attempts += 1;
        let Ok(cr) = harmonic_configuration(f, rng) else { continue };
        let diff = f.sub(&cr, &minus_one);
        let r = f.modulus(&diff);
        let ok = rep.holds(f, &diff, r, CONCURRENCY_TOL);
        rep.record(ok);
    }
    rep
}

fn harmonic_configuration<F: Field>(f: &F, rng: &mut dyn RngCore) -> Result<F::Elem> {
    let [a1, b1, b2, a2] = [(); 4].map(|_| random_point(f, rng));
    let c1 = meet(f, &join(f, &a1, &b1)?, &join(f, &a2, &b2)?)?;
    let c2 = meet(f, &join(f, &a1, &b2)?, &join(f, &a2, &b1)?)?;
    let diag = join(f, &c1, &c2)?;
    let x1 = meet(f, &diag, &join(f, &a1, &a2)?)?;
    let x2 = meet(f, &diag, &join(f, &b1, &b2)?)?;
    cross_ratio(f, [&c1, &c2, &x1, &x2])
}

/// Random complete sets pass the complete-set check and random nine-point
/// sets fail it.
pub fn complete_set_suite<F: Field>(f: &F, trials: usize, rng: &mut dyn RngCore) -> SuiteReport {
    let mut rep = SuiteReport::new("complete sets");
    for _ in 0..trials {
        let ok = random_complete_set(f, rng).and_then(|pts| complete_set_check(f, &pts)).unwrap_or(false);
        rep.record(ok);
        let pts: Vec<Point<F::Elem>> = (0..9).map(|_| random_point(f, rng)).collect();
        rep.record(matches!(complete_set_check(f, &pts), Ok(false)));
    }
    rep
}

/// A random parameter of a case: nonzero of modulus in `[1/2, 2]` for the
/// multiplicative cases.
fn random_parameter<F: Field>(f: &F, case: SingularCase, rng: &mut dyn RngCore) -> F::Elem {
    loop {
        let s = if f.is_exact() {
            f.random(rng)
        } else {
            let z = if case.is_multiplicative() {
                Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU))
            } else {
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
            };
            f.from_complex(z).expect("the complex backend represents every number")
        };
        if !(case.is_multiplicative() && f.is_zero(&s)) {
            return s;
        }
    }
}

/// Parameters on one component closer than this are redrawn, so that the
/// three points are well apart.
pub const PARAMETER_SEPARATION: f64 = 0.25;

/// Collinearity of three parametrized points of a singular cubic holds exactly
/// when the third parameter is the group-law partner of the first two. The
/// residual is `|det|` of the coordinates as the parametrization gives them.
pub fn group_law_suite<F: Field>(f: &F, case: SingularCase, trials: usize, rng: &mut dyn RngCore) -> SuiteReport {
    let mut rep = SuiteReport::new(format!("group law {case}"));
    let comps = case.triple_components();
    let eps = f.from_ratio(1, 1000);
    let mut attempts = 0;
    while rep.trials < trials && attempts < 20 * trials {
        attempts += 1;
        let a = random_parameter(f, case, rng);
        let b = random_parameter(f, case, rng);
        let Ok(c) = pairing_third(f, case, &a, &b) else { continue };
        let params = [&a, &b, &c];
        let crowded = (0..3).any(|i| {
            (i + 1..3).any(|j| {
                comps[i] == comps[j] && f.modulus(&f.sub(params[i], params[j])) < PARAMETER_SEPARATION
            })
        });
        if crowded {
            continue;
        }
        let c_off = f.add(&c, &eps);
        let pts = (
            singular_coords(f, case, comps[0], &a),
            singular_coords(f, case, comps[1], &b),
            singular_coords(f, case, comps[2], &c),
            singular_coords(f, case, comps[2], &c_off),
        );
        let (Ok(p), Ok(q), Ok(r), Ok(r_off)) = pts else { continue };
        let d = det3(f, &p, &q, &r);
        let holds = rep.holds(f, &d, f.modulus(&d), RELATION_TOL);
        let d_off = det3(f, &p, &q, &r_off);
        let separated = rep.separated(f, &d_off, f.modulus(&d_off));
        rep.record(holds && separated);
    }
    rep
}

/// The Weierstrass identity at random `z` at least [`PARAMETER_SEPARATION`]
/// from the lattice, by its absolute defect.
pub fn weierstrass_identity_suite(e: &EllipticData, trials: usize, tol: f64, rng: &mut dyn RngCore) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("weierstrass identity");
    while rep.trials < trials {
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if e.lattice_distance(z) < PARAMETER_SEPARATION {
            continue;
        }
        let r = e.identity_defect(z)?;
        rep.max_residual = rep.max_residual.max(r);
        rep.record(r < tol);
    }
    Ok(rep)
}

/// `(P(z1) : P'(z1) : 1)`, ... are collinear when `z1 + z2 + z3` is a period,
/// and not when the third argument is moved off by the perturbation. The
/// arguments are kept [`PARAMETER_SEPARATION`] away from the lattice and
/// from each other modulo the lattice.
pub fn weierstrass_collinearity_suite(e: &EllipticData, trials: usize, rng: &mut dyn RngCore) -> Result<SuiteReport> {
    let f = ApproxComplex::default();
    let mut rep = SuiteReport::new("weierstrass collinearity");
    let one = Complex64::new(1.0, 0.0);
    let mut attempts = 0;
    while rep.trials < trials && attempts < 20 * trials {
        attempts += 1;
        let mut z = || one * rng.random_range(-2.0..2.0) + e.tau * rng.random_range(-2.0..2.0);
        let (z1, z2, shift) = (z(), z(), z());
        // z3 = -z1 - z2 up to a random period
        let period = one * shift.re.round() + e.tau * (shift.im / e.tau.im).round();
        let zs = [z1, z2, period - z1 - z2];
        let crowded = zs.iter().any(|&z| e.lattice_distance(z) < PARAMETER_SEPARATION)
            || (0..3).any(|i| (i + 1..3).any(|j| e.lattice_distance(zs[i] - zs[j]) < PARAMETER_SEPARATION));
        if crowded {
            continue;
        }
        let mut pts = Vec::with_capacity(4);
        for w in [zs[0], zs[1], zs[2], zs[2] + PERTURBATION] {
            let Some((p, dp)) = e.pe_values(w)? else { break };
            pts.push([p, dp, one]);
        }
        if pts.len() < 4 {
            continue;
        }
        let d = det3(&f, &pts[0], &pts[1], &pts[2]);
        let holds = rep.holds(&f, &d, d.norm(), RELATION_TOL);
        let d_off = det3(&f, &pts[0], &pts[1], &pts[3]);
        let separated = rep.separated(&f, &d_off, d_off.norm());
        rep.record(holds && separated);
    }
    Ok(rep)
}

/// Every suite, in both backends where they apply; `approx` and `eps_series`
/// configure the complex backend and the lattice series.
pub fn run_all(approx: &ApproxComplex, eps_series: f64, trials: usize, rng: &mut dyn RngCore) -> Result<Vec<SuiteReport>> {
    let approx = *approx;
    let exact = crate::field::CyclotomicField::new(4)?;
    let mut out = Vec::new();
    let tag = |mut r: SuiteReport, backend: &str| {
        r.name = format!("{} ({backend})", r.name);
        r
    };
    out.push(tag(concurrency_suite(&approx, trials, rng), "complex"));
    out.push(tag(concurrency_suite(&exact, trials, rng), "exact"));
    out.push(tag(harmonic_suite(&approx, trials, rng), "complex"));
    out.push(tag(harmonic_suite(&exact, trials, rng), "exact"));
    out.push(tag(complete_set_suite(&approx, trials, rng), "complex"));
    for case in SingularCase::ALL {
        out.push(tag(group_law_suite(&approx, case, trials, rng), "complex"));
        out.push(tag(group_law_suite(&exact, case, trials, rng), "exact"));
    }
    let e = weierstrass(crate::construct::DEFAULT_TAU, eps_series)?;
    out.push(weierstrass_identity_suite(&e, trials, IDENTITY_TOL, rng)?);
    out.push(weierstrass_collinearity_suite(&e, trials, rng)?);
    Ok(out)
}
