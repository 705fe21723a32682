//! Characteristic-class densities and their integrals.
//!
//! Normalizations: `e = Ω_12 / 2π`, `c_1 = F / 2π`,
//! `p_1 = -tr(Ω ∧ Ω) / 8π²`. Integrals over closed surfaces are then
//! integers; integrals over bounded pieces of open manifolds are
//! returned as plain real numbers.

use std::fmt;

use crate::calculus::{
    integrate, integrate_scalar, multi_indices, Chart, Form, Integral, PFormField, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::frame::{coframe_from_metric, curvature, spin_connection, Curvature, MetricSpec};
use crate::gauge::FieldStrength;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Euler2,
    Chern1,
    Pontrjagin1,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Euler2 => "euler2",
            ClassKind::Chern1 => "chern1",
            ClassKind::Pontrjagin1 => "pontrjagin1",
        }
    }

    pub fn cycle_dim(self) -> usize {
        match self {
            ClassKind::Euler2 | ClassKind::Chern1 => 2,
            ClassKind::Pontrjagin1 => 4,
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClassKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler2" => Ok(ClassKind::Euler2),
            "chern1" => Ok(ClassKind::Chern1),
            "pontrjagin1" => Ok(ClassKind::Pontrjagin1),
            other => Err(Error::invalid(format!(
                "unknown characteristic class `{other}`"
            ))),
        }
    }
}

/// A characteristic-class density ready for quadrature.
#[derive(Clone, Debug)]
pub struct ClassDensity<T> {
    pub kind: ClassKind,
    pub form: PFormField<T>,
}

impl<T: Real> ClassDensity<T> {
    pub fn cycle_dim(&self) -> usize {
        self.kind.cycle_dim()
    }

    /// The same density with every component multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            kind: self.kind,
            form: self
                .form
                .map(move |v| v.into_iter().map(|c| c * s).collect()),
        }
    }
}

/// Euler density `Ω_12 / 2π` of a 2D Riemannian metric.
///
/// Equals `K sqrt(det g) / 2π dq¹ ∧ dq²`; the round sphere integrates to +2.
pub fn euler_density_2d<T: Real>(m: &MetricSpec<T>) -> Result<ClassDensity<T>> {
    if m.dim() != 2 {
        return Err(Error::mismatch(format!(
            "euler2 needs a 2D metric, got {}D",
            m.dim()
        )));
    }
    if !m.is_riemannian() {
        return Err(Error::invalid("euler2 needs a Riemannian metric"));
    }
    let om = curvature(&spin_connection(&coframe_from_metric(m)?)?)?;
    let two_pi = T::TAU();
    let mut form = PFormField::new(2, 2, move |x| {
        let o = om.eval(x)?;
        Ok(vec![o.get(0, 1).coeffs()[0] / two_pi])
    })?;
    if let Some(s) = m.support() {
        form = form.with_support(s);
    }
    Ok(ClassDensity {
        kind: ClassKind::Euler2,
        form,
    })
}

/// First Chern density `F / 2π` on patch 0.
pub fn chern1_density<T: Real>(f: &FieldStrength<T>) -> Result<ClassDensity<T>> {
    chern1_density_on(f, 0)
}

/// First Chern density `F / 2π` on the given patch.
pub fn chern1_density_on<T: Real>(f: &FieldStrength<T>, patch: usize) -> Result<ClassDensity<T>> {
    if patch >= f.len() {
        return Err(Error::invalid(format!(
            "field strength has no patch {patch}"
        )));
    }
    let inv = T::one() / T::TAU();
    Ok(ClassDensity {
        kind: ClassKind::Chern1,
        form: f
            .field(patch)
            .map(move |v| v.into_iter().map(|c| c * inv).collect()),
    })
}

/// First Pontrjagin density `-tr(Ω ∧ Ω) / 8π²`.
///
/// With lowered frame indices this is `Σ_{a<b} η_aa η_bb Ω_ab ∧ Ω_ab / 4π²`.
pub fn pontrjagin1_density<T: Real>(om: &Curvature<T>) -> Result<ClassDensity<T>> {
    let n = om.dim();
    if n < 4 {
        return Err(Error::DimensionTooLow {
            dim: n,
            required: 4,
        });
    }
    let curv = om.clone();
    let norm = T::one() / (T::lit(4.0) * T::PI() * T::PI());
    let eta = om.signature().to_vec();
    let form = PFormField::new(n, 4, move |x| {
        let o = curv.eval(x)?;
        let mut acc = Form::zero(n, 4);
        for pair in multi_indices(n, 2) {
            let (a, b) = (pair[0], pair[1]);
            let w = o.get(a, b);
            acc = acc.add(&w.wedge(&w)?.scale(eta[a] * eta[b]))?;
        }
        Ok(acc.scale(norm).into_coeffs())
    })?;
    Ok(ClassDensity {
        kind: ClassKind::Pontrjagin1,
        form,
    })
}

/// Coordinate-aligned cycle: `axes` span it (their order fixes the
/// orientation), every other coordinate is held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleSpec<T> {
    pub axes: Vec<usize>,
    pub fixed: Vec<(usize, T)>,
    pub bounds: Vec<(T, T)>,
}

impl<T: Real> CycleSpec<T> {
    pub fn new(axes: Vec<usize>, fixed: Vec<(usize, T)>, bounds: Vec<(T, T)>) -> Result<Self> {
        let c = Self {
            axes,
            fixed,
            bounds,
        };
        c.validate(None)?;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.axes.len() + self.fixed.len()
    }

    /// Structural checks, plus containment when the ambient chart is known.
    pub fn validate(&self, chart: Option<&Chart<T>>) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::invalid("cycle needs at least one axis"));
        }
        if self.bounds.len() != self.axes.len() {
            return Err(Error::invalid("cycle needs one interval per axis"));
        }
        let n = self.ambient_dim();
        let mut seen = vec![false; n];
        for &a in self.axes.iter().chain(self.fixed.iter().map(|(a, _)| a)) {
            if a >= n || seen[a] {
                return Err(Error::invalid(
                    "cycle axes and fixed coordinates must cover each ambient axis exactly once",
                ));
            }
            seen[a] = true;
        }
        for &(lo, hi) in &self.bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!(
                    "cycle interval [{lo}, {hi}] must satisfy lower < upper"
                )));
            }
        }
        if let Some(chart) = chart {
            if chart.dim() != n {
                return Err(Error::mismatch("cycle and chart dimensions differ"));
            }
            let cb = chart.bounds();
            for (&a, &(lo, hi)) in self.axes.iter().zip(&self.bounds) {
                if lo < cb[a].0 || hi > cb[a].1 {
                    return Err(Error::invalid(format!(
                        "cycle interval on axis {a} leaves the chart"
                    )));
                }
            }
            for &(a, v) in &self.fixed {
                if v < cb[a].0 || v > cb[a].1 {
                    return Err(Error::invalid(format!(
                        "fixed coordinate on axis {a} leaves the chart"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Ambient point for cycle parameters `u`.
    pub fn embed(&self, u: &[T]) -> Vec<T> {
        let mut x = vec![T::zero(); self.ambient_dim()];
        for (&a, &v) in self.axes.iter().zip(u) {
            x[a] = v;
        }
        for &(a, v) in &self.fixed {
            x[a] = v;
        }
        x
    }
}

/// Where a density is integrated.
#[derive(Debug, Clone, Copy)]
pub enum Domain<'a, T> {
    Chart(&'a Chart<T>),
    Cycle(&'a CycleSpec<T>),
}

/// Integral of a class density over a chart or a coordinate cycle.
///
/// No integrality is imposed here.
pub fn integrate_class<T: Real>(
    d: &ClassDensity<T>,
    domain: Domain<'_, T>,
    quad: &QuadratureSpec,
) -> Result<Integral<T>> {
    match domain {
        Domain::Chart(chart) => {
            if chart.dim() != d.cycle_dim() {
                return Err(Error::mismatch(format!(
                    "{} integrates over {}-dimensional surfaces, chart has {} axes",
                    d.kind,
                    d.cycle_dim(),
                    chart.dim()
                )));
            }
            integrate(&d.form, chart, quad)
        }
        Domain::Cycle(cycle) => {
            cycle.validate(None)?;
            if cycle.dim() != d.cycle_dim() {
                return Err(Error::mismatch(format!(
                    "{} integrates over {}-dimensional cycles, cycle spans {} axes",
                    d.kind,
                    d.cycle_dim(),
                    cycle.dim()
                )));
            }
            if cycle.ambient_dim() != d.form.dim() {
                return Err(Error::mismatch(
                    "cycle ambient dimension differs from the density's chart",
                ));
            }
            let axes = cycle.axes.clone();
            let f = |u: &[T]| {
                let x = cycle.embed(u);
                Ok(d.form.eval(&x)?.get(&axes))
            };
            integrate_scalar(f, &cycle.bounds, None, quad)
        }
    }
}
