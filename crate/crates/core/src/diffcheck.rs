//! Finite-difference derivatives and checks of hand-derived calculus.
//!
//! A derivative `f'` worked out by hand is compared against the secant slope
//! of `f` at the same point; an antiderivative `F` is compared through
//! `F(b) − F(a)` against a Gauss–Legendre value of `∫ₐᵇ f`.

use crate::error::{Error, Result};
use crate::quadrature::integrate_1d;

/// Step used by [`verify_derivative`] when the caller has no preference.
pub const DEFAULT_STEP: f64 = 1e-4;
pub const DEFAULT_TOL_ABS: f64 = 1e-6;
pub const DEFAULT_TOL_REL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Outcome of comparing an analytic derivative with a central difference.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeReport {
    pub point: f64,
    pub h: f64,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_diff: f64,
    /// `abs_diff / max(|analytic|, 1)`
    pub rel_diff: f64,
    pub verdict: Verdict,
}

impl DerivativeReport {
    pub fn new(
        point: f64,
        h: f64,
        analytic: f64,
        numeric: f64,
        tol_abs: f64,
        tol_rel: f64,
    ) -> Self {
        let abs_diff = (analytic - numeric).abs();
        let rel_diff = abs_diff / analytic.abs().max(1.0);
        let verdict = if abs_diff <= tol_abs || rel_diff <= tol_rel {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        DerivativeReport {
            point,
            h,
            analytic,
            numeric,
            abs_diff,
            rel_diff,
            verdict,
        }
    }
}

/// Outcome of checking `F(b) − F(a)` against quadrature of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiderivativeReport {
    pub a: f64,
    pub b: f64,
    pub ftc_value: f64,
    pub quad_value: f64,
    pub n: usize,
    pub abs_diff: f64,
    pub verdict: Verdict,
}

fn eval_finite<F: FnMut(f64) -> f64>(f: &mut F, x: f64, what: &str) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric(format!("{what} is {v} at x = {x}")))
    }
}

/// Slope of the chord through `(a−h, f(a−h))` and `(a+h, f(a+h))`.
pub fn central_diff<F: FnMut(f64) -> f64>(mut f: F, a: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let hi = eval_finite(&mut f, a + h, "function")?;
    let lo = eval_finite(&mut f, a - h, "function")?;
    Ok((hi - lo) / (2.0 * h))
}

/// `(f(a+h) − f(a)) / h`; a negative `h` gives the left-hand secant.
///
/// Comparing `h > 0` against `h < 0` exposes kinks (`|x|` at 0) and jumps.
pub fn one_sided_diff<F: FnMut(f64) -> f64>(mut f: F, a: f64, h: f64) -> Result<f64> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::Domain(format!(
            "step must be finite and nonzero, got {h}"
        )));
    }
    let base = eval_finite(&mut f, a, "function")?;
    let bumped = eval_finite(&mut f, a + h, "function")?;
    Ok((bumped - base) / h)
}

pub fn verify_derivative<F, D>(
    f: F,
    mut fprime: D,
    a: f64,
    h: f64,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<DerivativeReport>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let numeric = central_diff(f, a, h)?;
    let analytic = eval_finite(&mut fprime, a, "derivative")?;
    Ok(DerivativeReport::new(
        a, h, analytic, numeric, tol_abs, tol_rel,
    ))
}

pub fn verify_antiderivative<F, G>(
    f: F,
    mut antiderivative: G,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> Result<AntiderivativeReport>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    let quad_value = integrate_1d(f, a, b, n)?;
    let upper = eval_finite(&mut antiderivative, b, "antiderivative")?;
    let lower = eval_finite(&mut antiderivative, a, "antiderivative")?;
    let ftc_value = upper - lower;
    let abs_diff = (ftc_value - quad_value).abs();
    Ok(AntiderivativeReport {
        a,
        b,
        ftc_value,
        quad_value,
        n,
        abs_diff,
        verdict: if abs_diff <= tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}

/// Forward-difference gradient sharing one base evaluation: `d + 1` calls to `f`.
pub fn gradient<F>(mut f: F, point: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> f64,
{
    if point.is_empty() {
        return Err(Error::Domain(
            "gradient needs at least one coordinate".into(),
        ));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let base = f(point);
    if !base.is_finite() {
        return Err(Error::Numeric(format!(
            "function is {base} at base point {point:?}"
        )));
    }
    let mut probe = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for k in 0..point.len() {
        probe[k] = point[k] + h;
        let v = f(&probe);
        if !v.is_finite() {
            return Err(Error::Numeric(format!(
                "function is {v} after bumping coordinate {k} to {}",
                probe[k]
            )));
        }
        probe[k] = point[k];
        grad.push((v - base) / h);
    }
    Ok(grad)
}

/// Gradient dotted with the unit vector along `direction`.
pub fn directional_derivative<F>(f: F, point: &[f64], direction: &[f64], h: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    if direction.len() != point.len() {
        return Err(Error::Domain(format!(
            "direction has {} components, point has {}",
            direction.len(),
            point.len()
        )));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Domain(
            "direction must have nonzero finite length".into(),
        ));
    }
    let grad = gradient(f, point, h)?;
    Ok(grad
        .iter()
        .zip(direction)
        .map(|(g, v)| g * (v / norm))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rational(x: f64) -> f64 {
        (x - 2.0) / (x * x + 4.0)
    }

    fn rational_prime(x: f64) -> f64 {
        let d = x * x + 4.0;
        (d - 2.0 * x * (x - 2.0)) / (d * d)
    }

    #[test]
    fn central_examples() {
        assert_eq!(central_diff(|x| x * x, 3.0, 0.5).unwrap(), 6.0);
        assert_eq!(central_diff(f64::abs, 0.0, 1e-3).unwrap(), 0.0);
        assert_abs_diff_eq!(
            central_diff(rational, 2.0, 1e-4).unwrap(),
            0.125,
            epsilon = 1e-9
        );
    }

    #[test]
    fn one_sided_examples() {
        assert_abs_diff_eq!(one_sided_diff(f64::abs, 0.0, 1e-6).unwrap(), 1.0);
        assert_abs_diff_eq!(one_sided_diff(f64::abs, 0.0, -1e-6).unwrap(), -1.0);
        assert_abs_diff_eq!(one_sided_diff(|x| x, 3.7, 0.25).unwrap(), 1.0);
        let step = |x: f64| if x < 0.0 { 0.0 } else { 1.0 };
        assert_abs_diff_eq!(
            one_sided_diff(step, 0.0, -1e-6).unwrap(),
            1e6,
            epsilon = 1e-3
        );
    }

    #[test]
    fn step_errors() {
        assert!(matches!(
            central_diff(|x| x, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            central_diff(|x| x, 0.0, -1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            one_sided_diff(|x| x, 0.0, 0.0),
            Err(Error::Domain(_))
        ));
        let err = central_diff(|x| 1.0 / (x - 1.0), 0.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("x = 1"), "{err}");
    }

    #[test]
    fn derivative_reports() {
        let r = verify_derivative(
            rational,
            rational_prime,
            2.0,
            1e-4,
            DEFAULT_TOL_ABS,
            DEFAULT_TOL_REL,
        )
        .unwrap();
        assert!(r.verdict.passed());
        assert!(r.abs_diff > 1e-11 && r.abs_diff < 1e-9);

        let r = verify_derivative(|x| x.powi(3), |x| 3.0 * x * x, 1.0, 1e-5, 1e-6, 1e-6).unwrap();
        assert!(r.abs_diff <= 1e-9 && r.verdict.passed());

        let r = verify_derivative(|x| x.powi(3), |x| 2.0 * x * x, 1.0, 1e-5, 1e-6, 1e-6).unwrap();
        assert_abs_diff_eq!(r.abs_diff, 1.0, epsilon = 1e-6);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn rel_diff_uses_unit_floor() {
        let r = DerivativeReport::new(0.0, 1e-4, 0.0, 1e-3, 0.0, 0.0);
        assert_eq!(r.rel_diff, 1e-3);
        let r = DerivativeReport::new(0.0, 1e-4, 10.0, 11.0, 0.0, 0.2);
        assert_eq!(r.rel_diff, 0.1);
        assert!(r.verdict.passed());
    }

    #[test]
    fn antiderivative_reports() {
        let r = verify_antiderivative(|x| 2.0 * x, |x| x * x, 0.0, 3.0, 5, 1e-10).unwrap();
        assert_abs_diff_eq!(r.ftc_value, 9.0);
        assert_abs_diff_eq!(r.quad_value, 9.0, epsilon = 1e-13);
        assert!(r.verdict.passed());

        let r = verify_antiderivative(|x| 1.0 / x, f64::ln, 1.0, 2.0, 10, 1e-10).unwrap();
        assert!(r.abs_diff <= 1e-10 && r.verdict.passed());

        let r = verify_antiderivative(|x| 1.0 / x, |x| x.ln() + x, 1.0, 2.0, 10, 1e-10).unwrap();
        assert_abs_diff_eq!(r.abs_diff, 1.0, epsilon = 1e-9);
        assert_eq!(r.verdict, Verdict::Fail);

        assert!(verify_antiderivative(|x| x, |x| x, 2.0, 1.0, 5, 1e-10).is_err());
    }

    #[test]
    fn gradient_examples() {
        let g = gradient(|p| p[0] + 2.0 * p[1], &[0.3, -1.2], 1e-3).unwrap();
        assert_abs_diff_eq!(g[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1], 2.0, epsilon = 1e-12);

        let h = 1e-6;
        let g = gradient(|p| p[0] * p[0], &[3.0], h).unwrap();
        assert_abs_diff_eq!(g[0], 6.0 + h, epsilon = 1e-8);

        let g = gradient(|p| p[0] * p[1], &[2.0, 5.0], 1e-7).unwrap();
        assert_abs_diff_eq!(g[0], 5.0, epsilon = 1e-6);
        assert_abs_diff_eq!(g[1], 2.0, epsilon = 1e-6);
    }

    #[test]
    fn gradient_errors_name_the_coordinate() {
        let err = gradient(|p| 1.0 / (p[1] - 1.0), &[0.0, 0.5], 0.5).unwrap_err();
        assert!(err.to_string().contains("coordinate 1"), "{err}");
        assert!(gradient(|_| 0.0, &[], 1e-3).is_err());
    }

    #[test]
    fn directional_examples() {
        let d = directional_derivative(|p| p[0] + p[1], &[0.0, 0.0], &[1.0, 1.0], 1e-4).unwrap();
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-6);
        let d = directional_derivative(|_| 4.0, &[1.0, 2.0], &[3.0, -1.0], 1e-4).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-12);
        let d = directional_derivative(|p| p[0] * p[0], &[1.0], &[-1.0], 1e-6).unwrap();
        assert_abs_diff_eq!(d, -2.0, epsilon = 1e-5);
        assert!(matches!(
            directional_derivative(|p| p[0], &[1.0], &[0.0], 1e-4),
            Err(Error::Domain(_))
        ));
    }
}
