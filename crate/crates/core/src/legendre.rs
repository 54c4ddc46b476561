//! Legendre polynomials on `[-1, 1]`, built two independent ways.
//!
//! [`gram_schmidt`] orthogonalizes the monomials `1, x, x², …` under the
//! inner product `∫₋₁¹ p q dx` and rescales each result so that `P_k(1) = 1`.
//! The inner products are exact monomial moments evaluated in rational
//! arithmetic, so the route involves no quadrature and no rounding until the
//! final conversion to `f64`.
//!
//! [`recurrence`] uses the three-term recurrence
//! `(k+1) P_{k+1} = (2k+1) x P_k − k P_{k−1}` and serves as the oracle for
//! the Gram–Schmidt route (and vice versa).
//!
//! Roots are found by Newton's method on the recurrence evaluation, which
//! stays accurate at degrees where monomial coefficients are useless.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Highest degree accepted by [`gram_schmidt`].
pub const GRAM_SCHMIDT_MAX_DEGREE: usize = 64;

/// Newton iteration budget per root in [`roots`].
pub const ROOT_MAX_ITERS: usize = 100;

/// `∫₋₁¹ x^m dx`.
pub fn monomial_moment(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        2.0 / (m as f64 + 1.0)
    } else {
        0.0
    }
}

/// Dense polynomial in the monomial basis; `coeffs[i]` multiplies `x^i`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    /// `∫₋₁¹ p(x) dx`, from the exact monomial moments.
    pub fn integral_over_unit_interval(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * monomial_moment(i))
            .sum()
    }

    /// `∫₋₁¹ p(x) q(x) dx`, computed from coefficients without quadrature.
    pub fn inner(&self, other: &Polynomial) -> f64 {
        let mut acc = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc += a * b * monomial_moment(i + j);
            }
        }
        acc
    }

    /// Polynomial long division: returns `(quotient, remainder)` with
    /// `deg(remainder) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let d = divisor
            .degree()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lead = divisor.coeffs[d];
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![0.0; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = rem[k + d] / lead;
            quot[k] = q;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= q * c;
            }
            rem[k + d] = 0.0;
        }
        rem.truncate(d);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Mul<f64> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: f64) -> Polynomial {
        self.scale(rhs)
    }
}

/// Exact rational polynomial used only inside the Gram–Schmidt route.
type ExactPoly = Vec<BigRational>;

fn exact_moment(m: usize) -> BigRational {
    if m.is_multiple_of(2) {
        BigRational::new(BigInt::from(2), BigInt::from(m + 1))
    } else {
        BigRational::zero()
    }
}

fn exact_inner(p: &ExactPoly, q: &ExactPoly) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() && (i + j) % 2 == 0 {
                acc += a * b * exact_moment(i + j);
            }
        }
    }
    acc
}

/// `P_0 … P_n` by Gram–Schmidt on the monomial basis, normalized by `P_k(1) = 1`.
///
/// Fails with a capability error for `n > GRAM_SCHMIDT_MAX_DEGREE`; use
/// [`recurrence`] beyond that.
pub fn gram_schmidt(n: usize) -> Result<Vec<Polynomial>> {
    if n > GRAM_SCHMIDT_MAX_DEGREE {
        return Err(Error::Capability(format!(
            "Gram-Schmidt construction supports degree <= {GRAM_SCHMIDT_MAX_DEGREE}, got {n}; \
             use the recurrence route"
        )));
    }

    // Orthogonal (monic) basis and the squared norms of its members.
    let mut basis: Vec<ExactPoly> = Vec::with_capacity(n + 1);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v: ExactPoly = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        let xk = v.clone();
        for (p, norm) in basis.iter().zip(&norms) {
            let proj = exact_inner(&xk, p) / norm;
            if proj.is_zero() {
                continue;
            }
            for (vi, pi) in v.iter_mut().zip(p) {
                *vi -= &proj * pi;
            }
        }
        norms.push(exact_inner(&v, &v));
        basis.push(v);
    }

    Ok(basis
        .into_iter()
        .map(|p| {
            let at_one: BigRational = p.iter().sum();
            Polynomial::new(
                p.iter()
                    .map(|c| (c / &at_one).to_f64().unwrap_or(f64::NAN))
                    .collect(),
            )
        })
        .collect())
}

/// `P_0 … P_n` from the three-term recurrence.
pub fn recurrence(n: usize) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::new(vec![1.0])];
    if n >= 1 {
        out.push(Polynomial::monomial(1));
    }
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (i, &c) in out[k].coeffs.iter().enumerate() {
            next[i + 1] += (2.0 * kf + 1.0) * c;
        }
        for (i, &c) in out[k - 1].coeffs.iter().enumerate() {
            next[i] -= kf * c;
        }
        for c in &mut next {
            *c /= kf + 1.0;
        }
        out.push(Polynomial::new(next));
    }
    out
}

/// `(P_n(x), P_n'(x))` evaluated by the recurrence, without forming coefficients.
pub fn eval_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let nf = n as f64;
    let deriv = if x.abs() == 1.0 {
        // P_n'(±1) = (±1)^(n-1) n(n+1)/2
        let sign = if x < 0.0 && n.is_multiple_of(2) {
            -1.0
        } else {
            1.0
        };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * cur - prev) / (x * x - 1.0)
    };
    (cur, deriv)
}

/// `(P_n(x), P_n'(x))` in double-double arithmetic, for `|x| < 1`.
pub(crate) fn eval_with_derivative_dd(n: usize, x: Dd) -> (Dd, Dd) {
    if n == 0 {
        return (Dd::from(1.0), Dd::from(0.0));
    }
    let mut prev = Dd::from(1.0);
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = (Dd::from(2.0 * kf + 1.0) * x * cur - Dd::from(kf) * prev) / Dd::from(kf + 1.0);
        prev = cur;
        cur = next;
    }
    let deriv = Dd::from(n as f64) * (x * cur - prev) / (x * x - Dd::from(1.0));
    (cur, deriv)
}

/// One Newton step in double-double from a root that is already accurate in
/// `f64`; the result is the root to roughly 30 digits.
pub(crate) fn refine_root(n: usize, x: f64) -> Dd {
    let x = Dd::from(x);
    let (p, dp) = eval_with_derivative_dd(n, x);
    x - p / dp
}

/// Sorted, distinct points strictly inside `(-1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<f64>,
}

impl RootSet {
    pub fn new(roots: Vec<f64>) -> Result<Self> {
        if let Some(r) = roots.iter().find(|r| !(r.abs() < 1.0)) {
            return Err(Error::Domain(format!("root {r} is not inside (-1, 1)")));
        }
        if let Some(w) = roots.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "roots must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(RootSet { roots })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.roots
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.roots
    }
}

/// The `n` roots of `P_n`, ascending.
///
/// Only the positive half is computed (Newton from the guesses
/// `cos(π(4k−1)/(4n+2))`, finished with one extended-precision step so each
/// root is the nearest `f64`); the negative half is its mirror image and the
/// middle root of an odd-degree polynomial is exactly zero.
pub fn roots(n: usize) -> Result<RootSet> {
    if n == 0 {
        return Err(Error::Domain("P_0 has no roots; n must be >= 1".into()));
    }
    let half = n / 2;
    let mut positive = Vec::with_capacity(half);
    for k in 1..=half {
        let guess = (std::f64::consts::PI * (4 * k - 1) as f64 / (4 * n + 2) as f64).cos();
        positive.push(refine_root(n, newton_root(n, guess)?).to_f64());
    }
    // Guesses (and roots) come out descending.
    let mut all: Vec<f64> = positive.iter().map(|r| -r).collect();
    if n % 2 == 1 {
        all.push(0.0);
    }
    all.extend(positive.iter().rev());
    RootSet::new(all)
}

fn newton_root(n: usize, guess: f64) -> Result<f64> {
    let mut x = guess;
    for _ in 0..ROOT_MAX_ITERS {
        let (p, dp) = eval_with_derivative(n, x);
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= 4e-16 {
            return Ok(x);
        }
    }
    Err(Error::Numeric(format!(
        "Newton iteration for a root of P_{n} from initial guess {guess} did not converge \
         in {ROOT_MAX_ITERS} iterations"
    )))
}
