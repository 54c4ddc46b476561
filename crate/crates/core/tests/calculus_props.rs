use std::cell::{Cell, RefCell};

use calcverify::diffcheck::{
    central_diff, directional_derivative, gradient, one_sided_diff, DerivativeReport, Verdict,
};
use calcverify::solvers::{newton_solve, secant_solve, SolveOptions};
use proptest::prelude::*;

#[test]
fn central_is_second_order_one_sided_first_order() {
    let c1 = (central_diff(f64::exp, 0.0, 1e-2).unwrap() - 1.0).abs();
    let c2 = (central_diff(f64::exp, 0.0, 1e-3).unwrap() - 1.0).abs();
    let ratio = c1 / c2;
    assert!((80.0..=120.0).contains(&ratio), "central ratio {ratio}");

    let o1 = (one_sided_diff(f64::exp, 0.0, 1e-2).unwrap() - 1.0).abs();
    let o2 = (one_sided_diff(f64::exp, 0.0, 1e-3).unwrap() - 1.0).abs();
    let ratio = o1 / o2;
    assert!((8.0..=12.0).contains(&ratio), "one-sided ratio {ratio}");
}

#[test]
fn gradient_uses_d_plus_one_evaluations() {
    for d in 1..=6 {
        let calls = Cell::new(0);
        let point: Vec<f64> = (0..d).map(|i| i as f64 * 0.3).collect();
        let f = |p: &[f64]| {
            calls.set(calls.get() + 1);
            p.iter().map(|x| x * x).sum::<f64>()
        };
        let g = gradient(f, &point, 1e-6).unwrap();
        assert_eq!(g.len(), d);
        assert_eq!(calls.get(), d + 1);
    }
}

proptest! {
    #[test]
    fn central_difference_exact_on_quadratics(
        c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0,
        a in 1e-6f64..=1.0, h in 1e-3f64..=1.0,
    ) {
        let q = |x: f64| c0 + c1 * x + c2 * x * x;
        let exact = c1 + 2.0 * c2 * a;
        let got = central_diff(q, a, h).unwrap();
        prop_assert!((got - exact).abs() <= 1e-10 * exact.abs().max(1.0));
    }

    #[test]
    fn report_fields_are_consistent(
        analytic in -1e3f64..1e3, numeric in -1e3f64..1e3,
        tol_abs in 0.0f64..1.0, tol_rel in 0.0f64..1.0,
    ) {
        let r = DerivativeReport::new(0.5, 1e-4, analytic, numeric, tol_abs, tol_rel);
        prop_assert_eq!(r.abs_diff, (analytic - numeric).abs());
        prop_assert_eq!(r.rel_diff, r.abs_diff / analytic.abs().max(1.0));
        let pass = r.abs_diff <= tol_abs || r.rel_diff <= tol_rel;
        prop_assert_eq!(r.verdict == Verdict::Pass, pass);
    }

    #[test]
    fn direction_scale_does_not_matter(
        v in prop::array::uniform3(-3.0f64..3.0),
        c in 1e-3f64..1e3,
        p in prop::array::uniform3(-2.0f64..2.0),
    ) {
        prop_assume!(v.iter().map(|x| x * x).sum::<f64>() > 1e-6);
        let f = |x: &[f64]| x[0] * x[1] + (x[2]).sin();
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let d1 = directional_derivative(f, &p, &v, 1e-5).unwrap();
        let d2 = directional_derivative(f, &p, &scaled, 1e-5).unwrap();
        prop_assert!((d1 - d2).abs() <= 1e-12);
    }

    #[test]
    fn converged_roots_recheck(c in -50.0f64..50.0, x0 in -5.0f64..5.0) {
        let f = |x: f64| x * x * x + x;
        let opts = SolveOptions::default();
        let r = newton_solve(f, None, c, x0, opts).unwrap();
        if r.converged {
            prop_assert!((f(r.root) - c).abs() <= opts.tol);
        }
        prop_assert!(r.iterations <= opts.max_iters);
        let s = secant_solve(f, c, x0, x0 + 0.5, opts);
        if let Ok(s) = s {
            if s.converged {
                prop_assert!((f(s.root) - c).abs() <= opts.tol);
            }
        }
    }
}

#[test]
fn newton_converges_quadratically() {
    let residuals = RefCell::new(Vec::new());
    let f = |x: f64| {
        let r = x * x - 2.0;
        residuals.borrow_mut().push(r.abs());
        r
    };
    let mut d = |x: f64| 2.0 * x;
    let opts = SolveOptions {
        tol: 1e-15,
        max_iters: 20,
    };
    let res = newton_solve(f, Some(&mut d), 0.0, 2.0, opts).unwrap();
    assert!(res.converged);
    let r = residuals.into_inner();
    for w in r.windows(2) {
        // Past the rounding floor of x^2 - 2 near 2, residuals are noise.
        if w[0] < 0.1 && w[1] > 4.0 * f64::EPSILON {
            assert!(w[1] <= w[0] * w[0], "{} then {}", w[0], w[1]);
        }
    }
}

fn trace_newton(c: f64, shift: bool, analytic: bool) -> Vec<u64> {
    let xs = RefCell::new(Vec::new());
    let base = |x: f64| x.powi(3) - 2.0 * x + 0.5;
    let f = |x: f64| {
        xs.borrow_mut().push(x.to_bits());
        if shift {
            base(x) - c
        } else {
            base(x)
        }
    };
    let mut d = |x: f64| 3.0 * x * x - 2.0;
    let target = if shift { 0.0 } else { c };
    let fprime: Option<&mut dyn FnMut(f64) -> f64> = if analytic { Some(&mut d) } else { None };
    newton_solve(f, fprime, target, 1.7, SolveOptions::default()).unwrap();
    xs.into_inner()
}

fn trace_secant(c: f64, shift: bool) -> Vec<u64> {
    let xs = RefCell::new(Vec::new());
    let f = |x: f64| {
        xs.borrow_mut().push(x.to_bits());
        let v = x.powi(3) - 2.0 * x + 0.5;
        if shift {
            v - c
        } else {
            v
        }
    };
    secant_solve(
        f,
        if shift { 0.0 } else { c },
        1.5,
        2.0,
        SolveOptions::default(),
    )
    .unwrap();
    xs.into_inner()
}

#[test]
fn shifting_the_target_gives_identical_iterates() {
    for c in [0.0, 1.25, -0.3, 7.0] {
        assert_eq!(trace_newton(c, false, true), trace_newton(c, true, true));
        assert_eq!(trace_newton(c, false, false), trace_newton(c, true, false));
        assert_eq!(trace_secant(c, false), trace_secant(c, true));
    }
}
