//! Fixed workloads shared by the criterion benches.

/// A smooth, non-polynomial integrand on the unit cube.
pub fn smooth_3d(p: &[f64]) -> f64 {
    (p[0] * p[1]).exp() * (1.0 + p[2] * p[2]).recip()
}

/// `count` angles spread evenly over `[-limit, limit]`.
pub fn angle_sweep(count: usize, limit: f64) -> Vec<f64> {
    assert!(count >= 2);
    (0..count)
        .map(|i| -limit + 2.0 * limit * i as f64 / (count - 1) as f64)
        .collect()
}

/// Expressions of increasing size over `x`.
pub const EXPRESSIONS: [&str; 3] = [
    "x^2 + 1",
    "(x - 2)/(x^2 + 4)",
    "sin(x)*exp(-x^2/2) + ln(1 + abs(x))*sqrt(x^2 + 3) - tan(x/7)^3",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_hits_both_ends() {
        let a = angle_sweep(5, 2.0);
        assert_eq!(a, [-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn expressions_parse() {
        for e in EXPRESSIONS {
            calcverify::parse(e, &["x"]).unwrap();
        }
    }
}
