//! Weierstrass uniformization `C / (Z + tau Z) -> {y^2 z = 4x^3 - g2 x z^2 - g3 z^3}`.
//!
//! Evaluation always happens at a reduced modulus: `tau` is moved into the
//! fundamental domain (so `|q| <= exp(-pi sqrt 3)`) and `Z + tau Z = lambda (Z + tau' Z)`,
//! whence `P(z) = lambda^-2 P'(z / lambda)`, `P'(z) = lambda^-3 P''(z / lambda)`,
//! `g2 = lambda^-4 g2'` and `g3 = lambda^-6 g3'`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Cubic;
use crate::error::{Error, Result};
use crate::field::ApproxComplex;
use crate::geom::Point;

const MAX_TERMS: usize = 10_000;

/// A lattice `Z + tau Z` with its invariants and Weierstrass cubic.
#[derive(Debug, Clone)]
pub struct EllipticData {
    pub tau: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    pub curve: Cubic<Complex64>,
    eps_series: f64,
    lambda: Complex64,
    tau_reduced: Complex64,
    q: Complex64,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_pi_i() -> Complex64 {
    c64(0.0, 2.0 * PI)
}

/// `(tau', lambda)` with `tau'` in the fundamental domain and
/// `Z + tau Z = lambda (Z + tau' Z)`.
fn reduce_modulus(tau: Complex64) -> (Complex64, Complex64) {
    let (mut w1, mut w2) = (c64(1.0, 0.0), tau);
    for _ in 0..1000 {
        let t = w2 / w1;
        let n = t.re.round();
        w2 -= w1 * n;
        let t = w2 / w1;
        if t.norm() < 1.0 - 1e-15 {
            (w1, w2) = (w2, -w1);
        } else {
            break;
        }
    }
    (w2 / w1, w1)
}

fn sum_series(eps: f64, mut term: impl FnMut(usize) -> Complex64) -> Result<Complex64> {
    let mut acc = c64(0.0, 0.0);
    for n in 1..=MAX_TERMS {
        let t = term(n);
        acc += t;
        if t.norm() < eps * acc.norm().max(1.0) {
            return Ok(acc);
        }
    }
    Err(Error::Numeric("q-series did not converge".into()))
}

impl EllipticData {
    pub fn eps_series(&self) -> f64 {
        self.eps_series
    }

    /// Image of `z` on the curve; lattice points map to `(0 : 1 : 0)`.
    pub fn pe_map(&self, z: Complex64) -> Result<Point<Complex64>> {
        let f = ApproxComplex::default();
        match self.pe_values(z)? {
            None => Point::new(&f, [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]),
            Some((p, dp)) => Point::new(&f, [p, dp, c64(1.0, 0.0)]),
        }
    }

    /// `(P(z), P'(z))`, or `None` at a lattice point.
    pub fn pe_values(&self, z: Complex64) -> Result<Option<(Complex64, Complex64)>> {
        if !z.is_finite() {
            return Err(Error::InvalidInput("non-finite argument".into()));
        }
        let w = self.reduce(z);
        if w.norm() < 1e-12 {
            return Ok(None);
        }
        let (p, dp) = self.pe_reduced(w)?;
        Ok(Some((p * self.lambda.powi(-2), dp * self.lambda.powi(-3))))
    }

    /// `z / lambda` moved near the origin by periods of the reduced lattice.
    fn reduce(&self, z: Complex64) -> Complex64 {
        let mut w = z / self.lambda;
        let t = self.tau_reduced;
        w -= t * (w.im / t.im).round();
        w -= c64(w.re.round(), 0.0);
        w
    }

    /// Distance from `z` to the lattice `Z + tau Z`.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let w = self.reduce(z);
        let t = self.tau_reduced;
        let mut best = f64::MAX;
        for a in -1..=1 {
            for b in -1..=1 {
                best = best.min((w - t * b as f64 - a as f64).norm());
            }
        }
        best * self.lambda.norm()
    }

    /// `(P(w), P'(w))` for the lattice `Z + tau' Z`.
    fn pe_reduced(&self, w: Complex64) -> Result<(Complex64, Complex64)> {
        let q = self.q;
        let u = (two_pi_i() * w).exp();
        let ui = u.inv();
        let one = c64(1.0, 0.0);
        let head_p = u / (one - u).powi(2);
        let head_dp = u * (one + u) / (one - u).powi(3);
        let mut qn = one;
        let mut qn_d = one;
        let sp = sum_series(self.eps_series, |_| {
            qn *= q;
            let a = qn * u;
            let b = qn * ui;
            a / (one - a).powi(2) + b / (one - b).powi(2) - qn * 2.0 / (one - qn).powi(2)
        })?;
        let sdp = sum_series(self.eps_series, |_| {
            qn_d *= q;
            let a = qn_d * u;
            let b = qn_d * ui;
            a * (one + a) / (one - a).powi(3) - b * (one + b) / (one - b).powi(3)
        })?;
        let k = two_pi_i();
        Ok((
            k * k * (c64(1.0 / 12.0, 0.0) + head_p + sp),
            k * k * k * (head_dp + sdp),
        ))
    }

    /// `|P'^2 - (4P^3 - g2 P - g3)|` at `z` (zero at lattice points).
    pub fn identity_defect(&self, z: Complex64) -> Result<f64> {
        Ok(match self.pe_values(z)? {
            None => 0.0,
            Some((p, dp)) => (dp * dp - (p * p * p * 4.0 - self.g2 * p - self.g3)).norm(),
        })
    }

    /// Relative residual of `P'^2 = 4P^3 - g2 P - g3` at `z`.
    pub fn identity_residual(&self, z: Complex64) -> Result<f64> {
        let p = self.pe_map(z)?;
        Ok(self.curve.residual(&ApproxComplex::default(), &p))
    }
}

/// Invariants and curve of the lattice `Z + tau Z`.
pub fn weierstrass(tau: Complex64, eps_series: f64) -> Result<EllipticData> {
    if !(tau.im > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidInput("tau must lie in the upper half-plane".into()));
    }
    if !(eps_series > 0.0 && eps_series < 1.0) {
        return Err(Error::InvalidInput("series tolerance must lie in (0, 1)".into()));
    }
    let (tr, lambda) = reduce_modulus(tau);
    let q = (two_pi_i() * tr).exp();
    if q.norm() > 0.9 {
        return Err(Error::Numeric("modulus reduction failed".into()));
    }
    let one = c64(1.0, 0.0);
    let lambert = |k: i32| {
        let mut qn = one;
        sum_series(eps_series, move |n| {
            qn *= q;
            qn * (n as f64).powi(k) / (one - qn)
        })
    };
    let e4 = one + lambert(3)? * 240.0;
    let e6 = one - lambert(5)? * 504.0;
    let g2 = e4 * (4.0 * PI.powi(4) / 3.0) * lambda.powi(-4);
    let g3 = e6 * (8.0 * PI.powi(6) / 27.0) * lambda.powi(-6);
    let disc = g2.powi(3) - g3 * g3 * 27.0;
    if disc.norm() <= 1e-12 * (g2.norm().powi(3) + 27.0 * g3.norm_sqr()) {
        return Err(Error::Numeric("singular Weierstrass curve".into()));
    }
    let f = ApproxComplex::default();
    // 4x^3 - g2 x z^2 - g3 z^3 - y^2 z
    let zero = c64(0.0, 0.0);
    let curve = Cubic::new(
        &f,
        vec![c64(4.0, 0.0), zero, zero, zero, zero, -g2, zero, -one, zero, -g3],
    )?;
    Ok(EllipticData {
        tau,
        g2,
        g3,
        curve,
        eps_series,
        lambda,
        tau_reduced: tr,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::geom::{collinear, det_residual};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tau() -> Complex64 {
        c64(0.23, 1.11)
    }

    #[test]
    fn square_lattice_invariants() {
        // g3 vanishes for the square lattice, g2 for the hexagonal one.
        let e = weierstrass(c64(0.0, 1.0), 1e-14).unwrap();
        assert!(e.g3.norm() < 1e-9 * e.g2.norm());
        let e = weierstrass(c64(-0.5, 3f64.sqrt() / 2.0), 1e-14).unwrap();
        assert!(e.g2.norm() < 1e-9 * e.g3.norm());
    }

    #[test]
    fn half_period_is_two_torsion() {
        let e = weierstrass(tau(), 1e-14).unwrap();
        let p = e.pe_map(c64(0.5, 0.0)).unwrap();
        assert!(p.coords()[1].norm() < 1e-9 * p.coords()[0].norm().max(1.0));
        assert!(e.pe_map(c64(0.0, 0.0)).unwrap().equals(
            &ApproxComplex::default(),
            &Point::new(&ApproxComplex::default(), [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap()
        ));
        assert!(e.pe_map(tau() + 1.0).unwrap().coords()[2].norm() < 1e-12);
    }

    #[test]
    fn collinear_when_sum_is_a_period() {
        let e = weierstrass(tau(), 1e-14).unwrap();
        let f = ApproxComplex::default();
        let pts: Vec<_> = [0.2, 0.4, 0.4].iter().map(|&x| e.pe_map(c64(x, 0.0)).unwrap()).collect();
        assert!(det_residual(&f, pts[0].coords(), pts[1].coords(), pts[2].coords()) < 1e-8);
        let zs = [c64(0.1, 0.3), c64(0.37, -0.8), -c64(0.47, -0.5) + tau()];
        let qs: Vec<_> = zs.iter().map(|&z| e.pe_map(z).unwrap()).collect();
        assert!(det_residual(&f, qs[0].coords(), qs[1].coords(), qs[2].coords()) < 1e-8);
        let off = e.pe_map(c64(0.41, 0.0)).unwrap();
        assert!(!collinear(&f, &pts[0], &pts[1], &off));
    }

    #[test]
    fn points_lie_on_the_curve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in [tau(), c64(3.7, 0.2), c64(-0.4, 0.9)] {
            let e = weierstrass(t, 1e-14).unwrap();
            for _ in 0..100 {
                let z = c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                assert!(e.identity_residual(z).unwrap() < 1e-9, "tau={t} z={z}");
            }
        }
    }

    #[test]
    fn periodicity_and_flex_at_infinity() {
        let e = weierstrass(c64(3.7, 0.2), 1e-14).unwrap();
        let f = ApproxComplex::default();
        let z = c64(0.31, 0.07);
        let a = e.pe_map(z).unwrap();
        let b = e.pe_map(z + e.tau * 2.0 - 3.0).unwrap();
        assert!(a.equals(&ApproxComplex::new(1e-7, 1e-8).unwrap(), &b));
        let inf = Point::new(&f, [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(e.curve.is_regular_point(&f, &inf));
        assert!(f.is_zero(&e.curve.evaluate(&f, &inf)));
    }

    #[test]
    fn lattice_distance() {
        let e = weierstrass(tau(), 1e-14).unwrap();
        assert!(e.lattice_distance(tau() * 3.0 - 2.0) < 1e-12);
        assert!((e.lattice_distance(c64(0.1, 0.0) + tau()) - 0.1).abs() < 1e-12);
        assert!(e.pe_values(tau()).unwrap().is_none());
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(weierstrass(c64(0.0, -1.0), 1e-14).is_err());
    }
}
