//! Numerical zeros of exact polynomials.
//!
//! Simultaneous Weierstrass (Durand-Kerner) iteration from a fixed circle of
//! starting points, followed by a few Newton steps per root. Everything is
//! deterministic: the same polynomial always yields bit-identical roots.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::rat::{to_f64, Rat};

/// Angular offset of the starting points, breaks symmetry for real
/// coefficients.
const START_ANGLE: f64 = 0.4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Stop once every update is below this (relative to `max(1, |z|)`).
    pub tol: f64,
    pub max_sweeps: usize,
    pub newton_steps: usize,
    /// A root is real when `|im| < real_tol * max(1, |re|)`.
    pub real_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-13,
            max_sweeps: 500,
            newton_steps: 3,
            real_tol: 1e-8,
        }
    }
}

/// A polynomial with double coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly(pub Vec<f64>);

impl FloatPoly {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for &c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Monic double approximation of `p`: divided by the leading coefficient
/// exactly, then rounded to nearest.
pub fn to_float(p: &QPoly) -> Result<FloatPoly> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?;
    Ok(FloatPoly(
        p.coeffs().iter().map(|c| to_f64(&(c / lead))).collect(),
    ))
}

/// Zeros of a polynomial with their residuals and a real/complex split.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    /// All roots: reals ascending, then conjugate pairs (positive imaginary
    /// part first) ordered by real part.
    pub roots: Vec<Complex64>,
    /// `|p(root)|` for each entry of `roots`, with `p` the monic float form.
    pub residuals: Vec<f64>,
    pub real_tol: f64,
    pub real: Vec<f64>,
    pub complex: Vec<Complex64>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &r| m.max(r))
    }
}

pub fn find_roots(p: &QPoly, opts: &RootOptions) -> Result<RootSet> {
    let fp = to_float(p)?;
    let degree = fp.degree();
    if degree == 0 {
        return Err(Error::Domain("a constant has no roots to find".into()));
    }
    let mut z = initial_points(&fp);
    let mut sweeps = 0;
    let mut last_update = f64::INFINITY;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        last_update = weierstrass_sweep(&fp, &mut z);
        if last_update < opts.tol {
            break;
        }
    }
    for root in z.iter_mut() {
        newton_polish(&fp, root, opts.newton_steps);
    }
    let residuals: Vec<f64> = z.iter().map(|&r| fp.eval(r).norm()).collect();
    if last_update >= opts.tol {
        return Err(Error::NoConvergence {
            sweeps,
            last_update,
            best: z,
            residuals,
        });
    }
    let raw = RootSet {
        roots: z,
        residuals,
        real_tol: opts.real_tol,
        real: Vec::new(),
        complex: Vec::new(),
    };
    classify(&raw, opts.real_tol)
}

fn initial_points(fp: &FloatPoly) -> Vec<Complex64> {
    let degree = fp.degree();
    let lead = fp.0[degree].abs();
    let radius = 1.0 + fp.0[..degree].iter().fold(0.0f64, |m, c| m.max(c.abs())) / lead;
    (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + START_ANGLE;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// One in-place sweep; returns the largest relative update.
fn weierstrass_sweep(fp: &FloatPoly, z: &mut [Complex64]) -> f64 {
    let lead = fp.0[fp.degree()];
    let mut max_update = 0.0f64;
    for i in 0..z.len() {
        let zi = z[i];
        let denom = z
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Complex64::new(lead, 0.0), |acc, (_, &zj)| acc * (zi - zj));
        let value = fp.eval(zi);
        if value == Complex64::zero() {
            continue;
        }
        let mut delta = value / denom;
        if !delta.is_finite() {
            // coincident iterates: nudge apart deterministically
            delta = Complex64::new(1e-8, 1e-8) * (1.0 + zi.norm());
        }
        z[i] = zi - delta;
        max_update = max_update.max(delta.norm() / zi.norm().max(1.0));
    }
    max_update
}

fn newton_polish(fp: &FloatPoly, root: &mut Complex64, steps: usize) {
    for _ in 0..steps {
        let (p, dp) = fp.eval_with_derivative(*root);
        if dp == Complex64::zero() {
            return;
        }
        let step = p / dp;
        if !step.is_finite() {
            return;
        }
        let candidate = *root - step;
        // accept only steps that do not increase the residual
        if fp.eval(candidate).norm() <= p.norm() {
            *root = candidate;
        } else {
            return;
        }
    }
}

/// Splits roots into real (sorted ascending, imaginary part forced to zero)
/// and conjugate pairs. An unpaired complex root is an error.
pub fn classify(rs: &RootSet, real_tol: f64) -> Result<RootSet> {
    let mut real = Vec::new();
    let mut complex = Vec::new();
    let mut real_res = Vec::new();
    let mut complex_res = Vec::new();
    for (&z, &r) in rs.roots.iter().zip(&rs.residuals) {
        if z.im.abs() < real_tol * z.re.abs().max(1.0) {
            real.push((z.re, r));
        } else {
            complex.push((z, r));
        }
    }
    real.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut upper: Vec<(Complex64, f64)> = complex
        .iter()
        .copied()
        .filter(|(z, _)| z.im > 0.0)
        .collect();
    let mut lower: Vec<(Complex64, f64)> = complex
        .iter()
        .copied()
        .filter(|(z, _)| z.im < 0.0)
        .collect();
    if upper.len() != lower.len() {
        return Err(Error::Classification(format!(
            "{} roots above the real axis but {} below",
            upper.len(),
            lower.len()
        )));
    }
    upper.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let pair_tol = 1e-6;
    let mut paired = Vec::with_capacity(complex.len());
    for (z, r) in upper {
        let target = z.conj();
        let (idx, dist) = lower
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (i, (w - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("counts match");
        if dist > pair_tol * z.norm().max(1.0) {
            return Err(Error::Classification(format!(
                "root {z} has no conjugate partner (closest is {dist:e} away)"
            )));
        }
        let (w, rw) = lower.swap_remove(idx);
        paired.push((z, r));
        paired.push((w, rw));
        complex_res.push(r);
        complex_res.push(rw);
    }

    let mut roots: Vec<Complex64> = real.iter().map(|&(x, _)| Complex64::new(x, 0.0)).collect();
    real_res.extend(real.iter().map(|&(_, r)| r));
    roots.extend(paired.iter().map(|&(z, _)| z));
    let residuals = real_res.into_iter().chain(complex_res).collect();
    Ok(RootSet {
        roots,
        residuals,
        real_tol,
        real: real.into_iter().map(|(x, _)| x).collect(),
        complex: paired.into_iter().map(|(z, _)| z).collect(),
    })
}

/// Deviations of the root sum and product from `-a_(n-1)/a_n` and
/// `(-1)^n a_0/a_n`.
pub fn vieta_residuals(p: &QPoly, rs: &RootSet) -> Result<(f64, f64)> {
    let fp = to_float(p)?;
    let n = fp.degree();
    let sum: Complex64 = rs.roots.iter().sum();
    let product: Complex64 = rs.roots.iter().product();
    let expected_sum = -fp.0[n - 1];
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let expected_product = sign * fp.0[0];
    Ok((
        (sum - expected_sum).norm(),
        (product - expected_product).norm(),
    ))
}

/// Exact values at `steps` equally spaced rational abscissae in
/// `[xmin, xmax]`, endpoints included.
pub fn sample(p: &QPoly, xmin: &Rat, xmax: &Rat, steps: usize) -> Result<Vec<(Rat, Rat)>> {
    if steps < 2 {
        return Err(Error::Domain("sampling needs at least 2 steps".into()));
    }
    if xmin >= xmax {
        return Err(Error::Domain(format!("empty interval [{xmin}, {xmax}]")));
    }
    let width = xmax - xmin;
    let intervals = Rat::from_integer((steps - 1).into());
    Ok((0..steps)
        .map(|i| {
            let x = xmin + &width * Rat::from_integer(i.into()) / &intervals;
            let y = p.eval(&x);
            (x, y)
        })
        .collect())
}

/// Count check: real + complex = degree.
pub fn count_identity_holds(rs: &RootSet) -> bool {
    rs.real.len() + rs.complex.len() == rs.degree()
}

/// Residual bound `|p(root)| < 1e-9 (1 + max|coef|)` on the monic form.
pub fn residuals_within_bound(p: &QPoly, rs: &RootSet) -> Result<bool> {
    let fp = to_float(p)?;
    let bound = 1e-9 * (1.0 + fp.max_abs_coeff());
    Ok(rs.residuals.iter().all(|&r| r < bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn p(c: &[(i64, i64)]) -> QPoly {
        QPoly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn roots(c: &[(i64, i64)]) -> RootSet {
        find_roots(&p(c), &RootOptions::default()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 5e-5
    }

    #[test]
    fn to_float_examples() {
        let fp = to_float(&p(&[(-4, 3), (1, 1)])).unwrap();
        assert_eq!(fp.0, vec![-4.0 / 3.0, 1.0]);
        assert_eq!(to_float(&p(&[(5, 1)])).unwrap().degree(), 0);
        let fp = to_float(&p(&[(6, 7), (-2, 1), (1, 1)])).unwrap();
        assert_eq!(fp.0, vec![6.0 / 7.0, -2.0, 1.0]);
        assert_eq!(to_float(&QPoly::zero()), Err(Error::ZeroPolynomial));
        // leading coefficient normalised
        assert_eq!(to_float(&p(&[(1, 1), (2, 1)])).unwrap().0, vec![0.5, 1.0]);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(find_roots(&p(&[(3, 1)]), &RootOptions::default()).is_err());
    }

    #[test]
    fn iterated_bernoulli_zeros() {
        let r1 = roots(&[(-4, 3), (1, 1)]);
        assert_eq!(r1.real.len(), 1);
        assert!(r1.complex.is_empty());
        assert!(close(r1.real[0], 1.3333));

        let r2 = roots(&[(6, 7), (-2, 1), (1, 1)]);
        let exact = [1.0 - (1.0f64 / 7.0).sqrt(), 1.0 + (1.0f64 / 7.0).sqrt()];
        assert!((r2.real[0] - exact[0]).abs() < 1e-14);
        assert!((r2.real[1] - exact[1]).abs() < 1e-14);
        assert!(close(r2.real[0], 0.6220) && close(r2.real[1], 1.3780));

        let b3 = p(&[(-8, 45), (3, 2), (-7, 3), (1, 1)]);
        let r3 = find_roots(&b3, &RootOptions::default()).unwrap();
        for (got, want) in r3.real.iter().zip([0.1522, 0.9446, 1.2365]) {
            assert!(close(*got, want), "{got} vs {want}");
        }
        let (s, pr) = vieta_residuals(&b3, &r3).unwrap();
        assert!(s < 1e-9 && pr < 1e-9);
        let total: f64 = r3.real.iter().sum();
        assert!((total - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let b4 = p(&[(-221, 7812), (-1, 3), (15, 8), (-5, 2), (1, 1)]);
        let r = find_roots(&b4, &RootOptions::default()).unwrap();
        assert_eq!(r.real.len(), 2);
        assert!(close(r.real[0], -0.0617) && close(r.real[1], 0.3823));
        assert_eq!(r.complex.len(), 2);
        assert!(close(r.complex[0].re, 1.0897) && close(r.complex[0].im, 0.1112));
        assert!((r.complex[1] - r.complex[0].conj()).norm() < 1e-12);
        assert!(count_identity_holds(&r));

        // the printed q-Bernoulli-Genocchi cubic: one real, one conjugate pair
        let bg3 = p(&[(21, 70), (-5, 12), (-7, 12), (1, 1)]);
        let r = find_roots(&bg3, &RootOptions::default()).unwrap();
        assert_eq!(r.real.len(), 1);
        assert!(close(r.real[0], -0.6795));
        assert!(close(r.complex[0].re, 0.6314) && close(r.complex[0].im, 0.2068));

        let lin = roots(&[(1, 6), (1, 1)]);
        assert_eq!((lin.real.len(), lin.complex.len()), (1, 0));
    }

    #[test]
    fn classify_rejects_unpaired() {
        let rs = RootSet {
            roots: vec![Complex64::new(1.0, 0.5), Complex64::new(2.0, -0.5)],
            residuals: vec![0.0, 0.0],
            real_tol: 1e-8,
            real: vec![],
            complex: vec![],
        };
        assert!(matches!(classify(&rs, 1e-8), Err(Error::Classification(_))));
        let rs = RootSet {
            roots: vec![Complex64::new(1.0, 0.5)],
            residuals: vec![0.0],
            ..rs
        };
        assert!(matches!(classify(&rs, 1e-8), Err(Error::Classification(_))));
    }

    #[test]
    fn relative_real_tolerance() {
        let rs = RootSet {
            roots: vec![Complex64::new(3.0, 2e-8), Complex64::new(0.1, 2e-8)],
            residuals: vec![0.0, 0.0],
            real_tol: 1e-8,
            real: vec![],
            complex: vec![],
        };
        // |im| = 2e-8 < 1e-8 * 3 counts as real at |re| = 3, not at 0.1
        assert!(matches!(classify(&rs, 1e-8), Err(Error::Classification(_))));
        let rs = RootSet {
            roots: vec![Complex64::new(3.0, 2e-8)],
            residuals: vec![0.0],
            ..rs
        };
        assert_eq!(classify(&rs, 1e-8).unwrap().real, vec![3.0]);
    }

    #[test]
    fn sweep_cap_reports_non_convergence() {
        let q = p(&[(-221, 7812), (-1, 3), (15, 8), (-5, 2), (1, 1)]);
        let opts = RootOptions {
            max_sweeps: 2,
            ..RootOptions::default()
        };
        match find_roots(&q, &opts) {
            Err(Error::NoConvergence {
                best,
                residuals,
                sweeps,
                ..
            }) => {
                assert_eq!(sweeps, 2);
                assert_eq!(best.len(), 4);
                assert_eq!(residuals.len(), 4);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn double_root_is_not_merged() {
        // (x - 1)^2 (x + 2)
        let q = p(&[(2, 1), (-3, 1), (0, 1), (1, 1)]);
        let r = find_roots(&q, &RootOptions::default()).unwrap();
        assert_eq!(r.degree(), 3);
        assert_eq!(r.real.len(), 3);
        assert!((r.real[1] - 1.0).abs() < 1e-7 && (r.real[2] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn deterministic() {
        let q = p(&[(358499, 31248), (-65, 16), (-905, 96), (5, 4), (1, 1)]);
        let a = find_roots(&q, &RootOptions::default()).unwrap();
        let b = find_roots(&q, &RootOptions::default()).unwrap();
        assert_eq!(
            a.roots
                .iter()
                .map(|z| (z.re.to_bits(), z.im.to_bits()))
                .collect::<Vec<_>>(),
            b.roots
                .iter()
                .map(|z| (z.re.to_bits(), z.im.to_bits()))
                .collect::<Vec<_>>()
        );
        assert!(residuals_within_bound(&q, &a).unwrap());
    }

    #[test]
    fn sample_examples() {
        let x = QPoly::monomial(1);
        assert_eq!(
            sample(&x, &int(0), &int(1), 2).unwrap(),
            vec![(int(0), int(0)), (int(1), int(1))]
        );
        let b2 = p(&[(6, 7), (-2, 1), (1, 1)]);
        let rows = sample(&b2, &int(0), &int(2), 3).unwrap();
        assert_eq!(rows[1], (int(1), rat(-1, 7)));
        assert!(sample(&x, &int(1), &int(0), 3).is_err());
        assert!(sample(&x, &int(0), &int(1), 1).is_err());
    }

    #[test]
    fn sample_near_root_is_small() {
        // root 1/6 of x - 1/6 is hit exactly with 7 points on [0, 1]
        let lin = p(&[(-1, 6), (1, 1)]);
        let rows = sample(&lin, &int(0), &int(1), 7).unwrap();
        assert!(rows[1].1.is_zero());
        let r = roots(&[(-1, 6), (1, 1)]);
        let value = to_f64(&lin.eval(&rows[1].0));
        assert!(value.abs() < 1e-12 && (r.real[0] - 1.0 / 6.0).abs() < 1e-15);
    }
}
