//! Circular CORDIC in rotation mode.
//!
//! Each step rotates `(x, y)` by `±arctan(2^{−k})` using only a halving by
//! `2^k`, an addition and a subtraction:
//!
//! ```text
//! x ← x ∓ y·2^{−k}
//! y ← y ± x·2^{−k}
//! z ← z ∓ arctan(2^{−k})
//! ```
//!
//! The sign is chosen to drive the residual angle `z` to zero. Pseudo-rotations
//! stretch the vector by `√(1 + 2^{−2k})`, so the start vector is `(gain, 0)`
//! with the reciprocal of the accumulated stretch already folded in.
//!
//! The iteration is generic over [`ShiftAdd`], which has no multiplication;
//! the loop cannot multiply even by accident.

use std::f64::consts::PI;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

pub const DEFAULT_ITERS: usize = 40;
pub const MAX_ITERS: usize = 60;

/// Arguments beyond this magnitude are rejected; reducing them modulo π
/// leaves too few significant bits.
pub const MAX_ARGUMENT: f64 = 1e15;

// π split so that PI_HI + PI_LO carries ~107 bits.
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Values the rotation loop can operate on: add, subtract, negate, and
/// scale by a power of two.
pub trait ShiftAdd: Copy + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    /// `self · 2^{−k}`
    fn shift_down(self, k: u32) -> Self;
}

impl ShiftAdd for f64 {
    fn shift_down(self, k: u32) -> f64 {
        let bits = self.to_bits();
        let exponent = ((bits >> 52) & 0x7ff) as u32;
        if exponent > k && exponent != 0x7ff {
            // Normal result: subtract k from the biased exponent.
            f64::from_bits(bits - (u64::from(k) << 52))
        } else if self == 0.0 || !self.is_finite() {
            self
        } else {
            // Result is subnormal; no exponent field left to adjust.
            self / 2f64.powi(k as i32)
        }
    }
}

/// Precomputed elementary angles and gain for a `K`-step rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct CordicTable {
    angles: Vec<f64>,
    gain: f64,
}

impl CordicTable {
    pub fn new(iters: usize) -> Result<Self> {
        if iters == 0 || iters > MAX_ITERS {
            return Err(Error::Capability(format!(
                "CORDIC supports 1 to {MAX_ITERS} iterations, got {iters}"
            )));
        }
        let angles = (0..iters).map(|k| 2f64.powi(-(k as i32)).atan()).collect();
        let gain = (0..iters)
            .map(|k| 1.0 / (1.0 + 4f64.powi(-(k as i32))).sqrt())
            .product();
        Ok(CordicTable { angles, gain })
    }

    pub fn iters(&self) -> usize {
        self.angles.len()
    }

    /// `angles[k] = arctan(2^{−k})`
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `Π_k 1/√(1 + 2^{−2k})`
    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn sin_cos(&self, theta: f64) -> Result<SinCos> {
        cordic_sincos(theta, self)
    }
}

impl Default for CordicTable {
    fn default() -> Self {
        CordicTable::new(DEFAULT_ITERS).expect("default iteration count is in range")
    }
}

pub fn cordic_table(iters: usize) -> Result<CordicTable> {
    CordicTable::new(iters)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinCos {
    pub sin: f64,
    pub cos: f64,
}

/// Runs the rotation loop from `(x, y)` through residual angle `z`.
pub fn rotate<T: ShiftAdd>(mut x: T, mut y: T, mut z: f64, angles: &[f64]) -> (T, T) {
    for (k, &angle) in angles.iter().enumerate() {
        let k = k as u32;
        let (dx, dy) = (y.shift_down(k), x.shift_down(k));
        if z >= 0.0 {
            x = x - dx;
            y = y + dy;
            z -= angle;
        } else {
            x = x + dx;
            y = y - dy;
            z += angle;
        }
    }
    (x, y)
}

/// Folds `theta` into `[−π/2, π/2]`; returns the reduced angle and whether
/// the result must be negated (odd multiple of π removed).
fn reduce(theta: f64) -> (f64, bool) {
    let k = (theta / PI).round();
    let r = (-k).mul_add(PI, theta);
    let r = (-k).mul_add(PI_LO, r);
    (r, k % 2.0 != 0.0)
}

/// Sine and cosine of `theta` (radians) by CORDIC.
pub fn cordic_sincos(theta: f64, table: &CordicTable) -> Result<SinCos> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("angle {theta} is not finite")));
    }
    if theta.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "angle {theta:e} exceeds the range-reduction limit {MAX_ARGUMENT:e}"
        )));
    }
    let (r, flip) = reduce(theta);
    let (x, y) = rotate(table.gain, 0.0, r, &table.angles);
    Ok(if flip {
        SinCos { sin: -y, cos: -x }
    } else {
        SinCos { sin: y, cos: x }
    })
}
