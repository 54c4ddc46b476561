//! Scalar equation solving: find `x` with `f(x) = c`.
//!
//! Both solvers work on the residual `r(x) = f(x) − c`, so solving
//! `f(x) = c` and `f(x) − c = 0` produce the same iterates bit for bit.
//! Divergence is reported through `converged = false`; no bracketing or
//! step damping is applied.

use crate::diffcheck::central_diff;
use crate::error::{Error, Result};

/// Step for the central-difference derivative when Newton has no analytic one.
pub const NEWTON_FD_STEP: f64 = 1e-7;

/// Derivatives (or secant slopes) smaller than this stop the iteration.
pub const FLAT_SLOPE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_iters: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveResult {
    pub root: f64,
    /// `|f(root) − c|`
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_options(opts: &SolveOptions) -> Result<()> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    Ok(())
}

fn residual_at<F: FnMut(f64) -> f64>(f: &mut F, c: f64, x: f64) -> Result<f64> {
    let r = f(x) - c;
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Numeric(format!(
            "function is not finite at iterate x = {x}"
        )))
    }
}

/// Newton's method `x ← x − (f(x) − c) / f'(x)`.
///
/// Without `fprime` the derivative is a central difference of the residual
/// with step [`NEWTON_FD_STEP`].
pub fn newton_solve<F>(
    mut f: F,
    mut fprime: Option<&mut dyn FnMut(f64) -> f64>,
    c: f64,
    x0: f64,
    opts: SolveOptions,
) -> Result<SolveResult>
where
    F: FnMut(f64) -> f64,
{
    check_options(&opts)?;
    if !x0.is_finite() {
        return Err(Error::Domain(format!("starting point {x0} is not finite")));
    }
    let mut x = x0;
    let mut iterations = 0;
    loop {
        let r = residual_at(&mut f, c, x)?;
        if r.abs() <= opts.tol || iterations == opts.max_iters {
            return Ok(SolveResult {
                root: x,
                residual: r.abs(),
                iterations,
                converged: r.abs() <= opts.tol,
            });
        }
        let slope = match fprime.as_mut() {
            Some(d) => d(x),
            None => central_diff(|t| f(t) - c, x, NEWTON_FD_STEP)?,
        };
        if !(slope.abs() >= FLAT_SLOPE) {
            return Err(Error::Numeric(format!(
                "derivative {slope:e} is flat at iterate x = {x}"
            )));
        }
        x -= r / slope;
        iterations += 1;
        if !x.is_finite() {
            return Err(Error::Numeric(format!(
                "iterate {iterations} is not finite"
            )));
        }
    }
}

/// Secant method seeded with two distinct points.
pub fn secant_solve<F>(
    mut f: F,
    c: f64,
    x0: f64,
    x1: f64,
    opts: SolveOptions,
) -> Result<SolveResult>
where
    F: FnMut(f64) -> f64,
{
    check_options(&opts)?;
    if !(x0.is_finite() && x1.is_finite()) || x0 == x1 {
        return Err(Error::Domain(format!(
            "secant needs two distinct finite starting points, got {x0} and {x1}"
        )));
    }
    let (mut x_prev, mut x) = (x0, x1);
    let mut r_prev = residual_at(&mut f, c, x_prev)?;
    let mut iterations = 0;
    loop {
        let r = residual_at(&mut f, c, x)?;
        if r.abs() <= opts.tol || iterations == opts.max_iters {
            return Ok(SolveResult {
                root: x,
                residual: r.abs(),
                iterations,
                converged: r.abs() <= opts.tol,
            });
        }
        let slope = (r - r_prev) / (x - x_prev);
        if !(slope.abs() >= FLAT_SLOPE) {
            return Err(Error::Numeric(format!(
                "secant slope {slope:e} is flat between x = {x_prev} and x = {x}"
            )));
        }
        let next = x - r / slope;
        iterations += 1;
        if !next.is_finite() {
            return Err(Error::Numeric(format!(
                "iterate {iterations} is not finite"
            )));
        }
        (x_prev, r_prev, x) = (x, r, next);
    }
}
