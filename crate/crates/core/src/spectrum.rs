//! Topological spectra: solving `f(p) = n` for one free parameter.
//!
//! The invariant `f` is any function of the free parameter, typically a
//! characteristic-class integral of a configuration built at that
//! parameter. Roots are located by a uniform scan for sign changes and
//! refined by bisection, which tolerates the small noise quadrature puts
//! on `f`.

use std::fmt;
use std::sync::Arc;

use crate::calculus::{Integral, QuadratureSpec};
use crate::configurations::{oscillator_config, reissner_nordstrom_config, BlackHoleParams};
use crate::error::{Error, Result};
use crate::real::Real;

/// Number of roots for a single `n` above which a warning is attached.
pub const AMBIGUITY_LIMIT: usize = 10;

/// An invariant value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub value: T,
    pub err: T,
    pub converged: bool,
}

impl<T: Real> Sample<T> {
    /// A value known without quadrature error.
    pub fn exact(value: T) -> Self {
        Self {
            value,
            err: T::zero(),
            converged: true,
        }
    }
}

impl<T: Real> From<Integral<T>> for Sample<T> {
    fn from(i: Integral<T>) -> Self {
        Self {
            value: i.value,
            err: i.err,
            converged: i.converged,
        }
    }
}

type InvariantFn<T> = Arc<dyn Fn(T) -> Result<Sample<T>> + Send + Sync>;

/// The condition `f(p) = n` (or `|f(p)| = n`) over an integer range.
#[derive(Clone)]
pub struct SpectrumProblem<T> {
    invariant: InvariantFn<T>,
    pub free_param: String,
    pub interval: (T, T),
    pub n_range: (i64, i64),
    pub use_abs: bool,
    pub scan_points: usize,
    /// Bracket width at which bisection stops.
    pub root_tol: f64,
    /// Largest accepted `|f - n|`.
    pub residual_tol: f64,
}

impl<T: Real> SpectrumProblem<T> {
    pub fn new(
        free_param: impl Into<String>,
        interval: (T, T),
        n_range: (i64, i64),
        invariant: impl Fn(T) -> Result<Sample<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        let p = Self {
            invariant: Arc::new(invariant),
            free_param: free_param.into(),
            interval,
            n_range,
            use_abs: true,
            scan_points: 512,
            root_tol: 1e-12,
            residual_tol: 1e-9,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_use_abs(mut self, use_abs: bool) -> Self {
        self.use_abs = use_abs;
        self
    }

    pub fn with_scan_points(mut self, n: usize) -> Result<Self> {
        self.scan_points = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_root_tol(mut self, tol: f64) -> Result<Self> {
        self.root_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_residual_tol(mut self, tol: f64) -> Result<Self> {
        self.residual_tol = tol;
        self.validate()?;
        Ok(self)
    }

    /// Structural checks. Admissibility of the interval itself is checked
    /// when the endpoints are evaluated.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!(
                "search interval [{lo}, {hi}] for `{}` must satisfy lower < upper",
                self.free_param
            )));
        }
        if self.n_range.0 > self.n_range.1 {
            return Err(Error::invalid(format!(
                "n range [{}, {}] is empty",
                self.n_range.0, self.n_range.1
            )));
        }
        if self.scan_points < 2 {
            return Err(Error::invalid("scan needs at least 2 points"));
        }
        if !(self.root_tol > 0.0 && self.residual_tol > 0.0) {
            return Err(Error::invalid(
                "root and residual tolerances must be positive",
            ));
        }
        Ok(())
    }

    pub fn evaluate(&self, p: T) -> Result<Sample<T>> {
        let s = (self.invariant)(p)?;
        if !s.value.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                point: vec![p.as_f64()],
            });
        }
        Ok(s)
    }

    fn grid(&self, count: usize) -> Vec<T> {
        let (lo, hi) = self.interval;
        let last = count - 1;
        (0..count)
            .map(|i| {
                if i == last {
                    hi
                } else {
                    lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(last)
                }
            })
            .collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for SpectrumProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectrumProblem")
            .field("free_param", &self.free_param)
            .field("interval", &self.interval)
            .field("n_range", &self.n_range)
            .field("use_abs", &self.use_abs)
            .field("scan_points", &self.scan_points)
            .field("root_tol", &self.root_tol)
            .field("residual_tol", &self.residual_tol)
            .finish()
    }
}

/// Direction of a monotonic run of the invariant curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Flat,
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::Flat => "flat",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow<T> {
    pub param: T,
    pub sample: Option<Sample<T>>,
    /// Error kind when the invariant could not be evaluated here.
    pub error: Option<String>,
}

/// Rows `first..=last` over which the curve moves in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub first: usize,
    pub last: usize,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    pub rows: Vec<CurveRow<T>>,
    pub segments: Vec<Segment>,
}

/// The invariant on a uniform grid, with monotonic runs marked.
///
/// Points where evaluation fails are kept as flagged rows and split the
/// segments around them.
pub fn invariant_curve<T: Real>(problem: &SpectrumProblem<T>, grid: usize) -> Result<Curve<T>> {
    problem.validate()?;
    if grid < 2 {
        return Err(Error::invalid("curve grid needs at least 2 points"));
    }
    let rows: Vec<CurveRow<T>> = problem
        .grid(grid)
        .into_iter()
        .map(|param| match problem.evaluate(param) {
            Ok(s) => CurveRow {
                param,
                sample: Some(s),
                error: None,
            },
            Err(e) => CurveRow {
                param,
                sample: None,
                error: Some(e.kind().to_string()),
            },
        })
        .collect();
    let segments = monotonic_segments(&rows, problem.residual_tol);
    Ok(Curve { rows, segments })
}

fn monotonic_segments<T: Real>(rows: &[CurveRow<T>], flat_tol: f64) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    let mut open: Option<Segment> = None;
    for i in 1..rows.len() {
        let (Some(a), Some(b)) = (rows[i - 1].sample, rows[i].sample) else {
            out.extend(open.take());
            continue;
        };
        let d = (b.value - a.value).as_f64();
        let trend = if d.abs() <= flat_tol {
            Trend::Flat
        } else if d > 0.0 {
            Trend::Increasing
        } else {
            Trend::Decreasing
        };
        match open.as_mut() {
            Some(s) if s.trend == trend && s.last == i - 1 => s.last = i,
            _ => {
                out.extend(open.take());
                open = Some(Segment {
                    first: i - 1,
                    last: i,
                    trend,
                });
            }
        }
    }
    out.extend(open);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow<T> {
    pub n: i64,
    pub param: T,
    /// Signed invariant at `param`.
    pub value: T,
    /// `|f| - n` (or `f - n` without `use_abs`).
    pub residual: T,
    pub quad_err: T,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable<T> {
    pub free_param: String,
    pub rows: Vec<SpectrumRow<T>>,
    /// Set when no level in the range has a root.
    pub no_roots: bool,
    pub warnings: Vec<String>,
    /// Scan points where the invariant could not be evaluated.
    pub scan_failures: usize,
    /// Scan points whose quadrature missed its tolerance.
    pub unconverged: usize,
}

impl<T: Real> SpectrumTable<T> {
    pub fn max_residual(&self) -> T {
        self.rows
            .iter()
            .map(|r| r.residual.abs())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Solves `f(p) = n` for every `n` in range.
///
/// Sign changes of `f - n` (and `-f - n` with `use_abs`) between scan
/// points are bisected to `root_tol`; scan points and interval ends where
/// `|f - n| ≤ residual_tol` already are accepted directly, which catches
/// roots the curve only touches (such as `n = 0` at an extremal end).
/// Rows are sorted by `n`, then by parameter.
pub fn solve_spectrum<T: Real>(problem: &SpectrumProblem<T>) -> Result<SpectrumTable<T>> {
    problem.validate()?;
    let xs = problem.grid(problem.scan_points);
    let mut scan: Vec<Option<Sample<T>>> = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        match problem.evaluate(x) {
            Ok(s) => scan.push(Some(s)),
            Err(e @ Error::InvalidParameter(_)) if i == 0 || i == xs.len() - 1 => {
                return Err(Error::invalid(format!(
                    "search interval for `{}` leaves the admissible range: {e}",
                    problem.free_param
                )))
            }
            Err(_) => scan.push(None),
        }
    }
    let scan_failures = scan.iter().filter(|s| s.is_none()).count();
    let unconverged = scan.iter().flatten().filter(|s| !s.converged).count();

    let tol = problem.residual_tol;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for n in problem.n_range.0..=problem.n_range.1 {
        let signs: &[i8] = match (problem.use_abs, n) {
            (true, n) if n < 0 => &[],
            (true, 0) | (false, _) => &[1],
            (true, _) => &[1, -1],
        };
        let target = T::from_i64(n).expect("level representable in scalar type");
        let mut found: Vec<SpectrumRow<T>> = Vec::new();
        for &s in signs {
            let sign = if s > 0 { T::one() } else { -T::one() };
            let g = |v: T| sign * v - target;
            let make_row = |x: T, smp: Sample<T>| SpectrumRow {
                n,
                param: x,
                value: smp.value,
                residual: g(smp.value),
                quad_err: smp.err,
                converged: smp.converged,
            };
            for (i, smp) in scan.iter().enumerate() {
                let Some(a) = smp else { continue };
                if g(a.value).abs().as_f64() <= tol {
                    found.push(make_row(xs[i], *a));
                    continue;
                }
                let Some(b) = scan.get(i + 1).copied().flatten() else {
                    continue;
                };
                let (ga, gb) = (g(a.value), g(b.value));
                if gb.abs().as_f64() <= tol || (ga > T::zero()) == (gb > T::zero()) {
                    continue;
                }
                match bisect(problem, &g, (xs[i], *a), (xs[i + 1], b)) {
                    Ok((x, smp)) if g(smp.value).abs().as_f64() <= tol => found.push(make_row(x, smp)),
                    Ok((x, smp)) => warnings.push(format!(
                        "n = {n}: bracket near {} = {} converged with residual {:e} (discontinuity?)",
                        problem.free_param,
                        x,
                        g(smp.value).as_f64()
                    )),
                    Err(e) => warnings.push(format!(
                        "n = {n}: bisection near {} = {} failed: {e}",
                        problem.free_param, xs[i]
                    )),
                }
            }
        }
        found.sort_by(|a, b| a.param.partial_cmp(&b.param).expect("finite parameters"));
        found.dedup_by(|b, a| (b.param - a.param).abs().as_f64() <= 4.0 * problem.root_tol);
        if found.len() > AMBIGUITY_LIMIT {
            warnings.push(format!(
                "BracketAmbiguity: {} roots for n = {n}; the invariant oscillates on the scan grid",
                found.len()
            ));
        }
        rows.extend(found);
    }
    Ok(SpectrumTable {
        free_param: problem.free_param.clone(),
        no_roots: rows.is_empty(),
        rows,
        warnings,
        scan_failures,
        unconverged,
    })
}

/// Bisection on a bracket with `g` of opposite signs at the ends; returns
/// the end with the smaller residual once the bracket is below `root_tol`.
fn bisect<T: Real>(
    problem: &SpectrumProblem<T>,
    g: &impl Fn(T) -> T,
    mut a: (T, Sample<T>),
    mut b: (T, Sample<T>),
) -> Result<(T, Sample<T>)> {
    let tol = T::lit(problem.root_tol);
    let two = T::lit(2.0);
    let a_positive = g(a.1.value) > T::zero();
    while b.0 - a.0 > tol {
        let mid = (a.0 + b.0) / two;
        if mid <= a.0 || mid >= b.0 {
            break;
        }
        let s = problem.evaluate(mid)?;
        let gm = g(s.value);
        if gm == T::zero() {
            return Ok((mid, s));
        }
        if (gm > T::zero()) == a_positive {
            a = (mid, s);
        } else {
            b = (mid, s);
        }
    }
    Ok(if g(a.1.value).abs() <= g(b.1.value).abs() {
        a
    } else {
        b
    })
}

/// `(2π/L) ∫ e` of the single-oscillator Jacobi metric over
/// `[0, q0] × [0, L]`, at default quadrature.
///
/// Equals `k q0 / (2E - k q0²)` for every mass. The sign follows the
/// sphere-positive orientation; spectra compare `|f|` by default.
pub fn oscillator_invariant_normalized<T: Real>(
    m: T,
    k: T,
    energy: T,
    l: T,
    q0: T,
) -> Result<Integral<T>> {
    oscillator_invariant_normalized_with(m, k, energy, l, q0, &QuadratureSpec::default())
}

pub fn oscillator_invariant_normalized_with<T: Real>(
    m: T,
    k: T,
    energy: T,
    l: T,
    q0: T,
    quad: &QuadratureSpec,
) -> Result<Integral<T>> {
    if !(k > T::zero()) {
        return Err(Error::invalid(format!(
            "spring constant must be positive, got {k}"
        )));
    }
    let cfg = oscillator_config(m, k, T::zero(), energy, q0, l)?;
    Ok(cfg.spectrum_invariant(quad)?.integral)
}

/// Closed form `k q0 / (2E - k q0²)` of the normalized oscillator invariant.
pub fn oscillator_closed_form(k: f64, energy: f64, q0: f64) -> f64 {
    k * q0 / (2.0 * energy - k * q0 * q0)
}

/// Chern integral of the Reissner–Nordström potential over the default
/// cycle, at default quadrature; `2 sqrt(m² - e²) / (|e| r₀)`.
pub fn rn_chern_invariant<T: Real>(p: BlackHoleParams<T>) -> Result<Integral<T>> {
    rn_chern_invariant_with(p, &QuadratureSpec::default())
}

pub fn rn_chern_invariant_with<T: Real>(
    p: BlackHoleParams<T>,
    quad: &QuadratureSpec,
) -> Result<Integral<T>> {
    let r = reissner_nordstrom_config(p)?.default_invariant(quad)?;
    Ok(r.integral)
}

/// Horizon area spectrum `4π e² A0 [n/2 + sqrt(1 + n²/4)]²`.
pub fn area_spectrum<T: Real>(e: T, n: i64, a0: T) -> Result<T> {
    if !(a0 > T::zero() && a0.is_finite()) {
        return Err(Error::invalid(format!("A0 must be positive, got {a0}")));
    }
    if !(e != T::zero() && e.is_finite()) {
        return Err(Error::invalid("charge must be non-zero"));
    }
    if n < 0 {
        return Err(Error::invalid(format!(
            "level must be non-negative, got {n}"
        )));
    }
    let half_n = T::from_i64(n).expect("level representable") / T::lit(2.0);
    let bracket = half_n + (T::one() + half_n * half_n).sqrt();
    Ok(T::lit(4.0) * T::PI() * e * e * a0 * bracket * bracket)
}

/// Area `4π r₊²` of the outer horizon of a non-rotating black hole.
pub fn horizon_area<T: Real>(m: T, e: T) -> Result<T> {
    let (rp, _) = BlackHoleParams::new(m, e, T::zero(), T::one())?.horizons();
    Ok(T::lit(4.0) * T::PI() * rp * rp)
}
