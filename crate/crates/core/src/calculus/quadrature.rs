//! Tensor-product Gauss–Legendre quadrature with refinement.
//!
//! Node order is axis-major: the first axis is the outermost loop and the
//! last axis varies fastest. The grid is cut into slabs along the first
//! axis; every slab is summed in node order with a compensated
//! accumulator and the slab totals are then reduced in slab order. The
//! result is bit-identical however many workers evaluate the slabs.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::real::{CompensatedSum, Real};

use super::chart::Chart;
use super::forms::PFormField;

/// Environment variable capping the number of quadrature workers.
pub const THREADS_ENV: &str = "TOPOSPEC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    GaussLegendreTensor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub points_per_axis: usize,
    pub refinement_levels: usize,
    pub convergence_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussLegendreTensor,
            points_per_axis: 64,
            refinement_levels: 3,
            convergence_tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::invalid("points_per_axis must be >= 2"));
        }
        if self.refinement_levels < 1 {
            return Err(Error::invalid("refinement_levels must be >= 1"));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(Error::invalid("convergence_tol must be non-negative"));
        }
        Ok(())
    }

    /// Points per axis at every level, coarsest first.
    ///
    /// A single-level spec is preceded by a half-resolution pass so an
    /// error estimate always exists.
    pub fn level_points(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.refinement_levels)
            .map(|k| self.points_per_axis << k)
            .collect();
        if self.refinement_levels == 1 {
            pts.insert(0, (self.points_per_axis / 2).max(2));
        }
        pts
    }

    pub fn finest_points(&self) -> usize {
        self.points_per_axis << (self.refinement_levels - 1)
    }
}

/// Result of a refined quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct Integral<T> {
    /// Value at the finest level.
    pub value: T,
    /// |finest - previous level|.
    pub err: T,
    pub converged: bool,
    pub levels: Vec<T>,
}

impl<T: Real> Integral<T> {
    /// Turns a non-converged result into [`Error::NoConvergence`].
    pub fn require_converged(self, tol: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                value: self.value.as_f64(),
                err: self.err.as_f64(),
                tol,
            })
        }
    }

    pub fn scale(mut self, s: T) -> Self {
        self.value = self.value * s;
        self.err = self.err * s.abs();
        for v in &mut self.levels {
            *v = *v * s;
        }
        self
    }

    /// Sum of two integrals over disjoint pieces; error estimates add.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            err: self.err + other.err,
            converged: self.converged && other.converged,
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn worker_pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n: usize = std::env::var(THREADS_ENV).ok()?.trim().parse().ok()?;
        if n <= 1 {
            return None;
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
    })
    .as_ref()
}

struct Grid<T> {
    nodes: Vec<Vec<T>>,
    weights: Vec<Vec<T>>,
}

impl<T: Real> Grid<T> {
    fn new(bounds: &[(T, T)], n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        let two = T::lit(2.0);
        let mut nodes = Vec::with_capacity(bounds.len());
        let mut weights = Vec::with_capacity(bounds.len());
        for &(lo, hi) in bounds {
            let half = (hi - lo) / two;
            let mid = (hi + lo) / two;
            nodes.push(x.iter().map(|&t| mid + half * T::lit(t)).collect());
            weights.push(w.iter().map(|&t| half * T::lit(t)).collect());
        }
        Self { nodes, weights }
    }

    /// Compensated sum over the slab with first-axis index `i0`.
    /// Returns the slab total and the number of nodes inside the region.
    fn slab<F>(
        &self,
        i0: usize,
        f: &F,
        region: Option<&super::chart::Region<T>>,
    ) -> Result<(T, usize)>
    where
        F: Fn(&[T]) -> Result<T> + Sync,
    {
        let dim = self.nodes.len();
        let n = self.nodes[0].len();
        let mut idx = vec![0usize; dim];
        idx[0] = i0;
        let mut point: Vec<T> = (0..dim).map(|a| self.nodes[a][idx[a]]).collect();
        let mut acc = CompensatedSum::new();
        let mut inside = 0usize;
        loop {
            if region.is_none_or(|r| r(&point)) {
                let mut w = T::one();
                for (weights, &i) in self.weights.iter().zip(&idx) {
                    w = w * weights[i];
                }
                acc.add(w * f(&point)?);
                inside += 1;
            }
            // odometer over axes 1.., last axis fastest
            let mut a = dim;
            loop {
                if a == 1 {
                    return Ok((acc.value(), inside));
                }
                a -= 1;
                idx[a] += 1;
                if idx[a] < n {
                    point[a] = self.nodes[a][idx[a]];
                    break;
                }
                idx[a] = 0;
                point[a] = self.nodes[a][0];
            }
        }
    }
}

fn single_level<T, F>(
    f: &F,
    bounds: &[(T, T)],
    region: Option<&super::chart::Region<T>>,
    n: usize,
) -> Result<T>
where
    T: Real,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    let grid = Grid::new(bounds, n);
    let slabs: Vec<Result<(T, usize)>> = match worker_pool() {
        Some(pool) => pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| grid.slab(i, f, region))
                .collect()
        }),
        None => (0..n).map(|i| grid.slab(i, f, region)).collect(),
    };
    let mut acc = CompensatedSum::new();
    let mut inside = 0;
    for s in slabs {
        let (v, k) = s?;
        acc.add(v);
        inside += k;
    }
    if inside == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(acc.value())
}

/// Integrates a scalar function over a coordinate box with optional
/// indicator masking.
pub fn integrate_scalar<T, F>(
    f: F,
    bounds: &[(T, T)],
    region: Option<&super::chart::Region<T>>,
    quad: &QuadratureSpec,
) -> Result<Integral<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    quad.validate()?;
    if bounds.is_empty() {
        return Err(Error::invalid("cannot integrate over zero axes"));
    }
    let levels = quad
        .level_points()
        .into_iter()
        .map(|n| single_level(&f, bounds, region, n))
        .collect::<Result<Vec<T>>>()?;
    let value = levels[levels.len() - 1];
    let err = (value - levels[levels.len() - 2]).abs();
    let converged = err.as_f64() <= quad.convergence_tol;
    Ok(Integral {
        value,
        err,
        converged,
        levels,
    })
}

/// Integrates a top-degree form over a chart.
///
/// Nodes rejected by the chart's region predicate contribute zero. The
/// sign of the result follows the chart orientation.
pub fn integrate<T: Real>(
    density: &PFormField<T>,
    chart: &Chart<T>,
    quad: &QuadratureSpec,
) -> Result<Integral<T>> {
    if density.dim() != chart.dim() || density.degree() != chart.dim() {
        return Err(Error::mismatch(format!(
            "density is a {}-form on {} axes, chart has {} axes",
            density.degree(),
            density.dim(),
            chart.dim()
        )));
    }
    let sign = chart.orientation_sign();
    let f = |x: &[T]| Ok(density.components(x)?[0]);
    Ok(integrate_scalar(f, chart.bounds(), chart.region(), quad)?.scale(sign))
}
