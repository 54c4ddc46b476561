//! Gauss–Legendre rules and the integrators built on them.
//!
//! An `n`-point rule places its nodes at the roots of `P_n` and is exact for
//! every polynomial of degree `≤ 2n − 1`. Weights come from the closed form
//! `w_i = 2 / ((1 − x_i²) P_n'(x_i)²)`; [`gauss_weights_linear_system`]
//! recovers them independently by solving the moment equations
//! `Σ_j w_j x_j^i = ∫₋₁¹ x^i dx` for `i < n`.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::legendre::{self, monomial_moment};

/// Largest rule [`gauss_rule`] builds.
pub const MAX_POINTS: usize = 64;

/// Largest system [`gauss_weights_linear_system`] accepts; the Vandermonde
/// matrix is too ill-conditioned to be useful beyond this.
pub const LINEAR_SYSTEM_MAX_POINTS: usize = 20;

/// Largest dimension [`integrate_box`] accepts.
pub const MAX_DIMS: usize = 3;

const INVARIANT_TOL: f64 = 1e-12;

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds a rule from stored nodes and weights, rejecting anything that
    /// fails [`QuadratureRule::validate`].
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let rule = QuadratureRule { nodes, weights };
        rule.validate()?;
        Ok(rule)
    }

    /// Checks the structural invariants every Gauss–Legendre rule satisfies:
    /// ascending interior nodes, positive symmetric weights, and exactness on
    /// `1` and `x`.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        let fail = |invariant: String| Err(Error::InvariantViolation { n, invariant });

        if n == 0 {
            return fail("rule has no nodes".into());
        }
        if self.weights.len() != n {
            return fail(format!("{} weights for {n} nodes", self.weights.len()));
        }
        if let Some(x) = self.nodes.iter().find(|x| !(x.abs() < 1.0)) {
            return fail(format!("node {x} outside (-1, 1)"));
        }
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return fail("nodes not strictly ascending".into());
        }
        if let Some(w) = self.weights.iter().find(|w| !(**w > 0.0)) {
            return fail(format!("weight {w} is not positive"));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 2.0).abs() > INVARIANT_TOL {
            return fail(format!("weights sum to {sum}, expected 2"));
        }
        let first_moment: f64 = self
            .weights
            .iter()
            .zip(&self.nodes)
            .map(|(w, x)| w * x)
            .sum();
        if first_moment.abs() > INVARIANT_TOL {
            return fail(format!("sum of weight*node is {first_moment}, expected 0"));
        }
        for i in 0..n / 2 {
            let (lo, hi) = (self.weights[i], self.weights[n - 1 - i]);
            if (lo - hi).abs() > INVARIANT_TOL {
                return fail(format!(
                    "weights not symmetric: w[{i}]={lo}, w[{}]={hi}",
                    n - 1 - i
                ));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫ₐᵇ f` through the affine map `u = (b−a)x/2 + (b+a)/2`.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        check_interval(a, b)?;
        let half = (b - a) / 2.0;
        let mid = (b + a) / 2.0;
        let mut acc = 0.0;
        for (x, w) in self.iter() {
            let u = half * x + mid;
            let fu = f(u);
            if !fu.is_finite() {
                return Err(Error::Numeric(format!("integrand is {fu} at node u = {u}")));
            }
            // Jacobian applied per term: on [-1, 1] this is the same
            // arithmetic as integrating the pre-scaled integrand.
            acc += w * (half * fu);
        }
        Ok(acc)
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a >= b {
        return Err(Error::Domain(format!(
            "lower bound {a} must be below upper bound {b}"
        )));
    }
    Ok(())
}

/// The `n`-point Gauss–Legendre rule, `1 ≤ n ≤ 64`.
pub fn gauss_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::Capability(format!(
            "Gauss rules are available for 1 <= n <= {MAX_POINTS}, got {n}"
        )));
    }
    let nodes = legendre::roots(n)?.into_vec();
    let mut weights = vec![0.0; n];
    // Positive half, mirrored so the weights are symmetric by construction.
    // The formula is evaluated in double-double at the refined root; in plain
    // f64 the rounding of the node alone costs a few ulp.
    for i in n / 2..n {
        let x = legendre::refine_root(n, nodes[i]);
        let (_, dp) = legendre::eval_with_derivative_dd(n, x);
        let w = (Dd::from(2.0) / ((Dd::from(1.0) - x * x) * dp * dp)).to_f64();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    QuadratureRule::from_parts(nodes, weights)
}

/// Weights making the rule on `nodes` exact for `1, x, …, x^{n−1}`.
///
/// Solves `V w = m` with `V[i][j] = nodes[j]^i` and `m[i] = ∫₋₁¹ x^i dx` by
/// Gaussian elimination with partial pivoting. The nodes need not be Gauss
/// nodes: `{-1, 0, 1}` gives Simpson's weights `{1/3, 4/3, 1/3}`.
pub fn gauss_weights_linear_system(nodes: &[f64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::Domain("no nodes given".into()));
    }
    if n > LINEAR_SYSTEM_MAX_POINTS {
        return Err(Error::Capability(format!(
            "moment system limited to n <= {LINEAR_SYSTEM_MAX_POINTS}, got {n}"
        )));
    }
    if let Some(x) = nodes.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("node {x} is not finite")));
    }

    // Augmented matrix, row i = [x_0^i … x_{n-1}^i | m_i].
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = nodes.iter().map(|&x| x.powi(i as i32)).collect();
            row.push(monomial_moment(i));
            row
        })
        .collect();

    let scale = rows
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap_or(col);
        if rows[pivot][col].abs() <= 1e-14 * scale {
            return Err(Error::Numeric(format!(
                "moment system is singular (column {col}); nodes must be distinct"
            )));
        }
        rows.swap(col, pivot);
        for r in col + 1..n {
            let factor = rows[r][col] / rows[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = rows.split_at_mut(r);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
        }
    }

    let mut w = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| rows[r][c] * w[c]).sum();
        w[r] = (rows[r][n] - tail) / rows[r][r];
    }
    Ok(w)
}

/// `∫ₐᵇ f` with the `n`-point rule.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    check_interval(a, b)?;
    gauss_rule(n)?.integrate(f, a, b)
}

/// Axis-aligned box `[lo₁, hi₁] × … × [lo_d, hi_d]` with `1 ≤ d ≤ 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl IntegrationBox {
    pub fn new(bounds: &[(f64, f64)]) -> Result<Self> {
        if bounds.is_empty() || bounds.len() > MAX_DIMS {
            return Err(Error::Capability(format!(
                "boxes have 1 to {MAX_DIMS} dimensions, got {}",
                bounds.len()
            )));
        }
        for &(lo, hi) in bounds {
            check_interval(lo, hi)?;
        }
        Ok(IntegrationBox {
            lo: bounds.iter().map(|b| b.0).collect(),
            hi: bounds.iter().map(|b| b.1).collect(),
        })
    }

    pub fn dims(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
}

/// Tensor-product Gauss rule over a box, `n` points per axis.
pub fn integrate_box<F>(f: F, domain: &IntegrationBox, n: usize) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    integrate_box_with(f, domain, &gauss_rule(n)?)
}

/// [`integrate_box`] with a prebuilt rule, e.g. one loaded from a table.
pub fn integrate_box_with<F>(
    mut f: F,
    domain: &IntegrationBox,
    rule: &QuadratureRule,
) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = rule.n();
    let d = domain.dims();
    let half: Vec<f64> = (0..d)
        .map(|k| (domain.hi[k] - domain.lo[k]) / 2.0)
        .collect();
    let mid: Vec<f64> = (0..d)
        .map(|k| (domain.hi[k] + domain.lo[k]) / 2.0)
        .collect();
    let jacobian: f64 = half.iter().product();

    let mut index = vec![0usize; d];
    let mut point = vec![0.0; d];
    let mut acc = 0.0;
    loop {
        let mut weight = 1.0;
        for k in 0..d {
            point[k] = half[k] * rule.nodes[index[k]] + mid[k];
            weight *= rule.weights[index[k]];
        }
        let value = f(&point);
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "integrand is {value} at node {point:?}"
            )));
        }
        acc += weight * value;

        // Odometer over n^d index tuples, last axis fastest.
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(jacobian * acc);
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < n {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// One line of a [`convergence_table`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: f64,
    pub abs_error: f64,
}

/// Integrates `f` over `[a, b]` at each order and reports the error against `reference`.
pub fn convergence_table<F>(
    mut f: F,
    a: f64,
    b: f64,
    orders: &[usize],
    reference: f64,
) -> Result<Vec<ConvergenceRow>>
where
    F: FnMut(f64) -> f64,
{
    if orders.is_empty() {
        return Err(Error::Domain("no orders given".into()));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("orders must be strictly ascending".into()));
    }
    orders
        .iter()
        .map(|&n| {
            let value = integrate_1d(&mut f, a, b, n)?;
            Ok(ConvergenceRow {
                n,
                value,
                abs_error: (value - reference).abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn one_point_rule() {
        let r = gauss_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_eq!(r.weights(), &[2.0]);
    }

    #[test]
    fn two_and_three_point_rules() {
        let r2 = gauss_rule(2).unwrap();
        assert_abs_diff_eq!(r2.nodes()[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        for w in r2.weights() {
            assert_abs_diff_eq!(*w, 1.0, epsilon = 1e-15);
        }
        let r3 = gauss_rule(3).unwrap();
        assert_abs_diff_eq!(r3.nodes()[2], 0.6f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r3.weights()[0], 5.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r3.weights()[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r3.weights()[2], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn rule_size_limits() {
        assert!(matches!(gauss_rule(0), Err(Error::Capability(_))));
        assert!(matches!(gauss_rule(65), Err(Error::Capability(_))));
        assert!(gauss_rule(64).is_ok());
    }

    #[test]
    fn moment_system_examples() {
        let w = gauss_weights_linear_system(&[-1.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(w[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 1.0 / 3.0, epsilon = 1e-15);

        assert_eq!(gauss_weights_linear_system(&[0.0]).unwrap(), vec![2.0]);

        let s = 1.0 / 3f64.sqrt();
        let w = gauss_weights_linear_system(&[-s, s]).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn moment_system_rejects_repeated_nodes() {
        assert!(matches!(
            gauss_weights_linear_system(&[-0.5, 0.2, 0.2]),
            Err(Error::Numeric(_))
        ));
        assert!(matches!(
            gauss_weights_linear_system(&[0.0; 21]),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn one_dimensional_examples() {
        assert_abs_diff_eq!(
            integrate_1d(|x| x.powi(5), -1.0, 1.0, 3).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            integrate_1d(|x| x * x, 0.0, 2.0, 2).unwrap(),
            8.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn interval_errors() {
        assert!(matches!(
            integrate_1d(|x| x, 1.0, 1.0, 3),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            integrate_1d(|x| x, 2.0, 1.0, 3),
            Err(Error::Domain(_))
        ));
        // n = 3 puts a node at 0.
        let err = integrate_1d(|x| 1.0 / x, -1.0, 1.0, 3).unwrap_err();
        assert!(
            matches!(err, Error::Numeric(ref m) if m.contains("u = 0")),
            "{err}"
        );
    }

    #[test]
    fn box_examples() {
        let unit = IntegrationBox::new(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(integrate_box(|_| 1.0, &unit, 1).unwrap(), 1.0);
        assert_abs_diff_eq!(
            integrate_box(|p| p[0] * p[1], &unit, 2).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        let sym = IntegrationBox::new(&[(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(
            integrate_box(|p| p[0] * p[0] + p[1] * p[1], &sym, 2).unwrap(),
            8.0 / 3.0,
            epsilon = 1e-14
        );
        let cube = IntegrationBox::new(&[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]).unwrap();
        assert_abs_diff_eq!(
            integrate_box(|p| p[0] * p[1] * p[2], &cube, 2).unwrap(),
            0.5 * 2.0 * 4.5,
            epsilon = 1e-13
        );
    }

    #[test]
    fn box_validation() {
        assert!(IntegrationBox::new(&[]).is_err());
        assert!(IntegrationBox::new(&[(0.0, 1.0); 4]).is_err());
        assert!(IntegrationBox::new(&[(0.0, 1.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn convergence_examples() {
        let reference = std::f64::consts::E - 1.0 / std::f64::consts::E;
        let rows = convergence_table(f64::exp, -1.0, 1.0, &[2, 4, 8], reference).unwrap();
        assert!(rows[0].abs_error > rows[1].abs_error);
        assert!(rows[1].abs_error > rows[2].abs_error || rows[2].abs_error == 0.0);

        let rows = convergence_table(|x| x.powi(3), -1.0, 1.0, &[2], 0.0).unwrap();
        assert!(rows[0].abs_error <= 1e-14);

        let rows = convergence_table(|x| 1.0 / x.sqrt(), 0.0, 1.0, &[10, 20, 40], 2.0).unwrap();
        assert_abs_diff_eq!(rows[2].abs_error, 0.0215, epsilon = 5e-4);
        assert!(rows.windows(2).all(|w| w[0].abs_error > w[1].abs_error));

        assert!(convergence_table(|x| x, 0.0, 1.0, &[], 0.5).is_err());
        assert!(convergence_table(|x| x, 0.0, 1.0, &[4, 2], 0.5).is_err());
    }

    #[test]
    fn validation_catches_bad_rules() {
        assert!(QuadratureRule::from_parts(vec![0.0], vec![3.0]).is_err());
        assert!(QuadratureRule::from_parts(vec![-0.5, 0.5], vec![0.5, 1.5]).is_err());
        assert!(QuadratureRule::from_parts(vec![0.5, -0.5], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::from_parts(vec![-1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(QuadratureRule::from_parts(vec![-0.5, 0.5], vec![1.0, 1.0]).is_ok());
    }
}
