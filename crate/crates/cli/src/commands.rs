use std::cell::RefCell;
use std::path::Path;

use calcverify::diffcheck;
use calcverify::quadrature::{integrate_box_with, IntegrationBox};
use calcverify::solvers::{newton_solve, secant_solve, SolveOptions, SolveResult};
use calcverify::tables::{format_rule, get_or_build};
use calcverify::{
    cordic_sincos, gauss_rule, parse, CordicTable, Error, EvalError, Expr, ParseError,
};
use calcverify::{QuadratureRule, Verdict};
use log::warn;

use crate::output::{Mode, Report};

pub const USAGE_EXIT: u8 = 2;
pub const FAIL_EXIT: u8 = 1;

/// Successful run: text for stdout and an exit status (0 pass, 1 fail).
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    fn new(output: String, passed: bool) -> Self {
        Outcome {
            output,
            code: if passed { 0 } else { FAIL_EXIT },
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse {
        what: &'static str,
        source: String,
        error: ParseError,
    },
    Eval {
        context: String,
        source: String,
        error: EvalError,
        code: u8,
    },
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Eval { code, .. } => *code,
            Failure::Core(Error::Numeric(_)) => FAIL_EXIT,
            _ => USAGE_EXIT,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse { .. } => "parse",
            Failure::Eval { .. } => "evaluation",
            Failure::Core(Error::Numeric(_)) => "numeric",
            Failure::Core(Error::Capability(_)) => "capability",
            Failure::Core(Error::Domain(_)) => "domain",
            Failure::Core(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Parse { what, error, .. } => format!("cannot parse {what}: {error}"),
            Failure::Eval { context, error, .. } => format!("{context}: {error}"),
            Failure::Core(e) => e.to_string(),
        }
    }

    pub fn render(&self, mode: Mode) -> String {
        if mode == Mode::Json {
            let mut r = Report::new()
                .str("error", self.kind())
                .str("message", self.message());
            match self {
                Failure::Parse { error, .. } => r = r.int("offset", error.offset),
                Failure::Eval { error, .. } => r = r.int("offset", error.offset),
                _ => {}
            }
            return r.render(mode);
        }
        match self {
            Failure::Parse {
                what,
                source,
                error,
            } => {
                format!("error: cannot parse {what}\n{}\n", error.render(source))
            }
            Failure::Eval {
                context,
                source,
                error,
                ..
            } => format!("error: {context}\n{}\n", error.render(source)),
            other => format!("error: {}\n", other.message()),
        }
    }
}

/// A parsed expression that remembers the first evaluation error it hit,
/// so failures reported by the numerical core can point back into the source.
struct Compiled<'a> {
    expr: Expr,
    source: &'a str,
    first_error: RefCell<Option<EvalError>>,
}

impl<'a> Compiled<'a> {
    fn new<S: AsRef<str>>(
        what: &'static str,
        source: &'a str,
        vars: &[S],
    ) -> Result<Self, Failure> {
        let expr = parse(source, vars).map_err(|error| Failure::Parse {
            what,
            source: source.to_string(),
            error,
        })?;
        Ok(Compiled {
            expr,
            source,
            first_error: RefCell::new(None),
        })
    }

    fn call(&self, xs: &[f64]) -> f64 {
        self.expr.eval(xs).unwrap_or_else(|e| {
            self.first_error.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    }

    fn call1(&self, x: f64) -> f64 {
        self.call(&[x])
    }

    /// Attaches the recorded evaluation error, if any, to a core failure.
    fn explain(&self, err: Error, code: u8) -> Failure {
        match self.first_error.borrow_mut().take() {
            Some(error) => Failure::Eval {
                context: err.to_string(),
                source: self.source.to_string(),
                error,
                code,
            },
            None => Failure::Core(err),
        }
    }
}

fn explain_either(a: &Compiled, b: &Compiled, err: Error) -> Failure {
    if a.first_error.borrow().is_some() {
        a.explain(err, USAGE_EXIT)
    } else {
        b.explain(err, USAGE_EXIT)
    }
}

fn parse_number(what: &str, text: &str) -> Result<f64, Failure> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Failure::Usage(format!("{what} '{text}' is not a number")))
}

fn load_rule(cache: Option<&Path>, n: usize) -> Result<QuadratureRule, Failure> {
    let Some(path) = cache else {
        return Ok(gauss_rule(n)?);
    };
    match get_or_build(path, n) {
        Ok(rule) => Ok(rule),
        Err(e @ Error::Io { .. }) => {
            warn!("rule cache unavailable ({e}); building the rule in memory");
            Ok(gauss_rule(n)?)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn integrate(
    source: &str,
    axes: &[String],
    n: usize,
    cache: Option<&Path>,
    mode: Mode,
) -> Result<Outcome, Failure> {
    if axes.is_empty() || !axes.len().is_multiple_of(3) {
        return Err(Failure::Usage(
            "integration axes are given as VAR LO HI triples, e.g. `x 0 1`".into(),
        ));
    }
    let mut vars = Vec::new();
    let mut bounds = Vec::new();
    for triple in axes.chunks(3) {
        vars.push(triple[0].as_str());
        bounds.push((
            parse_number("lower bound", &triple[1])?,
            parse_number("upper bound", &triple[2])?,
        ));
    }
    let f = Compiled::new("integrand", source, &vars)?;
    let domain = IntegrationBox::new(&bounds)?;
    let rule = load_rule(cache, n)?;
    let value = if domain.dims() == 1 {
        rule.integrate(|x| f.call1(x), bounds[0].0, bounds[0].1)
    } else {
        integrate_box_with(|p| f.call(p), &domain, &rule)
    }
    .map_err(|e| f.explain(e, USAGE_EXIT))?;
    let report = Report::new()
        .num("value", value)
        .int("n", n)
        .int("dims", domain.dims());
    Ok(Outcome::new(report.render(mode), true))
}

pub struct DiffcheckArgs<'a> {
    pub f: &'a str,
    pub fprime: &'a str,
    pub var: &'a str,
    pub point: f64,
    pub h: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

pub fn diffcheck(args: &DiffcheckArgs, mode: Mode) -> Result<Outcome, Failure> {
    let f = Compiled::new("function", args.f, &[args.var])?;
    let d = Compiled::new("derivative", args.fprime, &[args.var])?;
    let r = diffcheck::verify_derivative(
        |x| f.call1(x),
        |x| d.call1(x),
        args.point,
        args.h,
        args.tol_abs,
        args.tol_rel,
    )
    .map_err(|e| explain_either(&f, &d, e))?;
    let report = Report::new()
        .num("point", r.point)
        .num("h", r.h)
        .num("analytic", r.analytic)
        .num("numeric", r.numeric)
        .num("abs_diff", r.abs_diff)
        .num("rel_diff", r.rel_diff)
        .str("verdict", r.verdict.as_str());
    Ok(Outcome::new(
        report.render(mode),
        r.verdict == Verdict::Pass,
    ))
}

pub struct AntiderivArgs<'a> {
    pub f: &'a str,
    pub antiderivative: &'a str,
    pub var: &'a str,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub tol: f64,
}

pub fn antideriv(args: &AntiderivArgs, mode: Mode) -> Result<Outcome, Failure> {
    let f = Compiled::new("integrand", args.f, &[args.var])?;
    let big_f = Compiled::new("antiderivative", args.antiderivative, &[args.var])?;
    let r = diffcheck::verify_antiderivative(
        |x| f.call1(x),
        |x| big_f.call1(x),
        args.a,
        args.b,
        args.n,
        args.tol,
    )
    .map_err(|e| explain_either(&f, &big_f, e))?;
    let report = Report::new()
        .num("a", r.a)
        .num("b", r.b)
        .num("ftc_value", r.ftc_value)
        .num("quad_value", r.quad_value)
        .int("n", r.n)
        .num("abs_diff", r.abs_diff)
        .str("verdict", r.verdict.as_str());
    Ok(Outcome::new(
        report.render(mode),
        r.verdict == Verdict::Pass,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Newton,
    Secant,
}

pub struct SolveArgs<'a> {
    pub f: &'a str,
    pub derivative: Option<&'a str>,
    pub var: &'a str,
    pub c: f64,
    pub method: Method,
    pub x0: f64,
    pub x1: Option<f64>,
    pub opts: SolveOptions,
}

pub fn solve(args: &SolveArgs, mode: Mode) -> Result<Outcome, Failure> {
    let f = Compiled::new("function", args.f, &[args.var])?;
    let d = args
        .derivative
        .map(|src| Compiled::new("derivative", src, &[args.var]))
        .transpose()?;
    let result: calcverify::Result<SolveResult> = match args.method {
        Method::Newton => {
            let mut slope = |x: f64| d.as_ref().map_or(f64::NAN, |d| d.call1(x));
            let fprime: Option<&mut dyn FnMut(f64) -> f64> =
                if d.is_some() { Some(&mut slope) } else { None };
            newton_solve(|x| f.call1(x), fprime, args.c, args.x0, args.opts)
        }
        Method::Secant => {
            let x1 = args.x1.unwrap_or(args.x0 + 1.0);
            secant_solve(|x| f.call1(x), args.c, args.x0, x1, args.opts)
        }
    };
    // Iterates wandering outside the expression's domain is a solver failure.
    let r = result.map_err(|e| match &d {
        Some(d) if f.first_error.borrow().is_none() => d.explain(e, FAIL_EXIT),
        _ => f.explain(e, FAIL_EXIT),
    })?;
    let method = match args.method {
        Method::Newton => "newton",
        Method::Secant => "secant",
    };
    let report = Report::new()
        .str("method", method)
        .num("root", r.root)
        .num("residual", r.residual)
        .int("iterations", r.iterations)
        .bool("converged", r.converged);
    Ok(Outcome::new(report.render(mode), r.converged))
}

pub fn nodes(n: usize, mode: Mode) -> Result<Outcome, Failure> {
    let rule = gauss_rule(n)?;
    let output = match mode {
        Mode::Plain => format_rule(&rule),
        Mode::Json => Report::new()
            .int("n", n)
            .nums("nodes", rule.nodes())
            .nums("weights", rule.weights())
            .render(mode),
    };
    Ok(Outcome::new(output, true))
}

pub fn cordic(theta: f64, iters: usize, mode: Mode) -> Result<Outcome, Failure> {
    let table = CordicTable::new(iters)?;
    let sc = cordic_sincos(theta, &table)?;
    let (ref_sin, ref_cos) = theta.sin_cos();
    let report = Report::new()
        .num("theta", theta)
        .int("iters", iters)
        .num("sin", sc.sin)
        .num("cos", sc.cos)
        .num("ref_sin", ref_sin)
        .num("ref_cos", ref_cos)
        .num("sin_err", (sc.sin - ref_sin).abs())
        .num("cos_err", (sc.cos - ref_cos).abs());
    Ok(Outcome::new(report.render(mode), true))
}
