//! Catalog of classical configurations and bundle-dimension bookkeeping.
//!
//! A configuration bundles a base manifold (charts, optionally a metric),
//! a structure group and, for gauge fields, a U(1) connection. Every
//! descriptor knows how to integrate the characteristic classes that make
//! sense for it, over its default cycle or a caller-supplied one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound;
use std::str::FromStr;

use crate::calculus::{Chart, Integral, PFormField, QuadratureSpec};
use crate::charclass::{
    chern1_density_on, euler_density_2d, integrate_class, pontrjagin1_density, ClassKind,
    CycleSpec, Domain,
};
use crate::error::{Error, Result};
use crate::frame::{coframe_from_metric, curvature, spin_connection, MetricSpec};
use crate::gauge::{field_strength, GaugeConnection, GaugePatch, Transition};
use crate::jacobi::{jacobi_metric, oscillator_system, turning_value, AllowedRegion};
use crate::real::Real;

/// Coordinate margin kept away from the poles of a sphere chart.
pub const POLE_MARGIN: f64 = 1e-4;

/// Structure group of a principal bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    /// Compact rotation group SO(k).
    SO(usize),
    /// Pseudo-orthogonal group SO(p, q).
    SOpq(usize, usize),
    U(usize),
    SU(usize),
    Product(Vec<Group>),
}

impl Group {
    /// Dimension of the group manifold.
    pub fn dim(&self) -> usize {
        match self {
            Group::SO(k) => k * k.saturating_sub(1) / 2,
            Group::SOpq(p, q) => {
                let n = p + q;
                n * n.saturating_sub(1) / 2
            }
            Group::U(k) => k * k,
            Group::SU(k) => (k * k).saturating_sub(1),
            Group::Product(gs) => gs.iter().map(Group::dim).sum(),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::SO(k) => write!(f, "SO({k})"),
            Group::SOpq(p, q) => write!(f, "SO({p},{q})"),
            Group::U(k) => write!(f, "U({k})"),
            Group::SU(k) => write!(f, "SU({k})"),
            Group::Product(gs) => {
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    /// Parses `SO(3)`, `SO(1,3)`, `U(1)`, `SU(2)` and products joined by
    /// `x`, `×` or `*`, e.g. `U(1)xSU(2)xSU(3)`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(s.to_string());
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(unknown());
        }
        let factors: Vec<&str> = cleaned.split(['x', '×', '*']).collect();
        let parse_factor = |t: &str| -> Result<Group> {
            let open = t.find('(').ok_or_else(unknown)?;
            let inner = t[open..]
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(unknown)?;
            let args = inner
                .split(',')
                .map(|a| a.parse::<usize>().map_err(|_| unknown()))
                .collect::<Result<Vec<_>>>()?;
            match (t[..open].to_ascii_uppercase().as_str(), args.as_slice()) {
                ("SO", &[k]) if k >= 1 => Ok(Group::SO(k)),
                ("SO", &[p, q]) if p + q >= 1 => Ok(Group::SOpq(p, q)),
                ("U", &[k]) if k >= 1 => Ok(Group::U(k)),
                ("SU", &[k]) if k >= 1 => Ok(Group::SU(k)),
                _ => Err(unknown()),
            }
        };
        let mut groups = factors
            .into_iter()
            .map(parse_factor)
            .collect::<Result<Vec<_>>>()?;
        Ok(if groups.len() == 1 {
            groups.pop().expect("one factor")
        } else {
            Group::Product(groups)
        })
    }
}

/// Declared range of one configuration parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: Bound<f64>,
    pub max: Bound<f64>,
    pub integer: bool,
    pub doc: &'static str,
}

impl ParamSpec {
    const fn real(name: &'static str, min: Bound<f64>, max: Bound<f64>, doc: &'static str) -> Self {
        Self {
            name,
            min,
            max,
            integer: false,
            doc,
        }
    }

    const fn int(name: &'static str, min: f64, max: f64, doc: &'static str) -> Self {
        Self {
            name,
            min: Bound::Included(min),
            max: Bound::Included(max),
            integer: true,
            doc,
        }
    }

    pub fn check(&self, v: f64) -> Result<()> {
        let fail = || {
            Error::invalid(format!(
                "parameter `{}` = {v} outside its admissible range {}",
                self.name,
                self.range_string()
            ))
        };
        if !v.is_finite() {
            return Err(fail());
        }
        let lo_ok = match self.min {
            Bound::Included(lo) => v >= lo,
            Bound::Excluded(lo) => v > lo,
            Bound::Unbounded => true,
        };
        let hi_ok = match self.max {
            Bound::Included(hi) => v <= hi,
            Bound::Excluded(hi) => v < hi,
            Bound::Unbounded => true,
        };
        if !(lo_ok && hi_ok) || (self.integer && v.fract() != 0.0) {
            return Err(fail());
        }
        Ok(())
    }

    /// Interval notation, e.g. `(0, inf)` or `[2, 8]`.
    pub fn range_string(&self) -> String {
        let lo = match self.min {
            Bound::Included(v) => format!("[{v}"),
            Bound::Excluded(v) => format!("({v}"),
            Bound::Unbounded => "(-inf".to_string(),
        };
        let hi = match self.max {
            Bound::Included(v) => format!("{v}]"),
            Bound::Excluded(v) => format!("{v})"),
            Bound::Unbounded => "inf)".to_string(),
        };
        let kind = if self.integer { " integer" } else { "" };
        format!("{lo}, {hi}{kind}")
    }
}

/// Static description of a catalog entry, used by `topospec list`.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub base_dim: &'static str,
    pub group: &'static str,
    pub classes: &'static [ClassKind],
    pub params: &'static [ParamSpec],
}

const POSITIVE: Bound<f64> = Bound::Excluded(0.0);
const NON_NEGATIVE: Bound<f64> = Bound::Included(0.0);
const UNBOUNDED: Bound<f64> = Bound::Unbounded;

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "sphere",
        summary: "round 2-sphere of radius R (Gauss-Bonnet oracle)",
        base_dim: "2",
        group: "SO(2)",
        classes: &[ClassKind::Euler2],
        params: &[ParamSpec::real("R", POSITIVE, UNBOUNDED, "radius")],
    },
    CatalogEntry {
        name: "flat",
        summary: "Euclidean cube [0,L]^n (vanishing-curvature control)",
        base_dim: "n",
        group: "SO(n)",
        classes: &[ClassKind::Euler2, ClassKind::Pontrjagin1],
        params: &[
            ParamSpec::real("L", POSITIVE, UNBOUNDED, "edge length"),
            ParamSpec::int("n", 2.0, 4.0, "dimension"),
        ],
    },
    CatalogEntry {
        name: "monopole",
        summary: "Dirac monopole of strength g on two charts of S^2",
        base_dim: "2",
        group: "U(1)",
        classes: &[ClassKind::Chern1],
        params: &[ParamSpec::real(
            "g",
            UNBOUNDED,
            UNBOUNDED,
            "monopole strength, non-zero",
        )],
    },
    CatalogEntry {
        name: "oscillator",
        summary: "two oscillators V = (k1 q1^2 + k2 q2^2)/2 via the Jacobi metric on [0,q0]x[0,L]",
        base_dim: "2",
        group: "SO(2)",
        classes: &[ClassKind::Euler2],
        params: &[
            ParamSpec::real("m", POSITIVE, UNBOUNDED, "mass"),
            ParamSpec::real("k1", NON_NEGATIVE, UNBOUNDED, "first spring constant"),
            ParamSpec::real("k2", NON_NEGATIVE, UNBOUNDED, "second spring constant"),
            ParamSpec::real("E", POSITIVE, UNBOUNDED, "energy"),
            ParamSpec::real(
                "q0",
                POSITIVE,
                UNBOUNDED,
                "strip width, below the q1 turning point",
            ),
            ParamSpec::real("L", POSITIVE, UNBOUNDED, "strip length along q2"),
        ],
    },
    CatalogEntry {
        name: "reissner_nordstrom",
        summary: "electromagnetic potential -(e/r) dt of a charged black hole on the (t,r) chart",
        base_dim: "2",
        group: "U(1)",
        classes: &[ClassKind::Chern1],
        params: &[
            ParamSpec::real("m", POSITIVE, UNBOUNDED, "mass"),
            ParamSpec::real("e", UNBOUNDED, UNBOUNDED, "charge, non-zero, |e| <= m"),
            ParamSpec::real(
                "r0",
                POSITIVE,
                UNBOUNDED,
                "integration constant; time period 2pi/r0",
            ),
        ],
    },
    CatalogEntry {
        name: "kerr_newman",
        summary: "electromagnetic potential of a rotating charged black hole on (t,r,theta,phi)",
        base_dim: "4",
        group: "U(1)",
        classes: &[ClassKind::Chern1],
        params: &[
            ParamSpec::real("m", POSITIVE, UNBOUNDED, "mass"),
            ParamSpec::real("e", UNBOUNDED, UNBOUNDED, "charge, non-zero"),
            ParamSpec::real(
                "a",
                NON_NEGATIVE,
                UNBOUNDED,
                "specific angular momentum, m^2 >= e^2 + a^2",
            ),
            ParamSpec::real(
                "r0",
                POSITIVE,
                UNBOUNDED,
                "integration constant; time period 2pi/r0",
            ),
        ],
    },
    CatalogEntry {
        name: "gravity",
        summary: "frame bundle of a 4D spacetime (dimension counting only)",
        base_dim: "4",
        group: "SO(1,3)",
        classes: &[],
        params: &[],
    },
    CatalogEntry {
        name: "yang_mills",
        summary: "SU(k) gauge field on Minkowski space (dimension counting only)",
        base_dim: "4",
        group: "SU(k)",
        classes: &[],
        params: &[ParamSpec::int("k", 2.0, 64.0, "rank")],
    },
    CatalogEntry {
        name: "standard_model",
        summary: "U(1)xSU(2)xSU(3) gauge fields on Minkowski space (dimension counting only)",
        base_dim: "4",
        group: "U(1)xSU(2)xSU(3)",
        classes: &[],
        params: &[],
    },
];

/// Every catalog entry with its parameter schema.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::invalid(format!("unknown configuration `{name}`")))
}

/// Builds a catalog configuration from named parameters.
///
/// Every declared parameter is required, undeclared ones are rejected and
/// values are range-checked before the specific constructor runs.
pub fn build<T: Real>(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<ConfigurationDescriptor<T>> {
    let entry = lookup(name)?;
    for key in params.keys() {
        if !entry.params.iter().any(|p| p.name == key) {
            return Err(Error::invalid(format!(
                "configuration `{name}` has no parameter `{key}`"
            )));
        }
    }
    let mut v = BTreeMap::new();
    for p in entry.params {
        let x = *params.get(p.name).ok_or_else(|| {
            Error::invalid(format!(
                "configuration `{name}` requires parameter `{}`",
                p.name
            ))
        })?;
        p.check(x)?;
        v.insert(p.name, x);
    }
    let t = |k: &str| T::lit(v[k]);
    match name {
        "sphere" => sphere_config(t("R")),
        "flat" => flat_config(t("L"), v["n"] as usize),
        "monopole" => monopole_config(t("g")),
        "oscillator" => oscillator_config(t("m"), t("k1"), t("k2"), t("E"), t("q0"), t("L")),
        "reissner_nordstrom" => {
            reissner_nordstrom_config(BlackHoleParams::new(t("m"), t("e"), T::zero(), t("r0"))?)
        }
        "kerr_newman" => kerr_newman_config(BlackHoleParams::new(t("m"), t("e"), t("a"), t("r0"))?),
        "gravity" | "standard_model" => ConfigurationDescriptor::bare(name, 4, entry.group),
        "yang_mills" => ConfigurationDescriptor::bare(name, 4, &format!("SU({})", v["k"] as usize)),
        _ => unreachable!("catalog entry without a builder"),
    }
}

/// Mass, charge, specific angular momentum and integration constant of a
/// charged (possibly rotating) black hole, in geometric units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleParams<T> {
    pub m: T,
    pub e: T,
    pub a: T,
    pub r0: T,
}

impl<T: Real> BlackHoleParams<T> {
    pub fn new(m: T, e: T, a: T, r0: T) -> Result<Self> {
        if ![m, e, a, r0].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("black-hole parameters must be finite"));
        }
        if !(m > T::zero()) {
            return Err(Error::invalid(format!("mass must be positive, got {m}")));
        }
        if !(r0 > T::zero()) {
            return Err(Error::invalid(format!("r0 must be positive, got {r0}")));
        }
        if m * m < e * e + a * a {
            return Err(Error::invalid(format!(
                "naked singularity: m^2 = {} < e^2 + a^2 = {}",
                m * m,
                e * e + a * a
            )));
        }
        Ok(Self { m, e, a, r0 })
    }

    /// Outer and inner horizon radii `m ± sqrt(m² - e² - a²)`.
    ///
    /// The inner radius is computed as `(e² + a²) / r₊`, which keeps the
    /// product identity `r₊ r₋ = e² + a²` exact to rounding.
    pub fn horizons(&self) -> (T, T) {
        let disc = (self.m * self.m - self.e * self.e - self.a * self.a).max(T::zero());
        let rp = self.m + disc.sqrt();
        let rm = (self.e * self.e + self.a * self.a) / rp;
        (rp, rm)
    }

    /// Period `2π / r₀` of the compact time cycle.
    pub fn time_period(&self) -> T {
        T::TAU() / self.r0
    }
}

/// Integral of a class over a configuration, with the zero-width flag for
/// degenerate default cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation<T> {
    pub class: ClassKind,
    pub integral: Integral<T>,
    pub zero_width: bool,
}

/// An immutable, ready-to-integrate classical configuration.
#[derive(Clone, Debug)]
pub struct ConfigurationDescriptor<T> {
    name: String,
    base_dim: usize,
    group: Group,
    params: Vec<(String, f64)>,
    metric: Option<MetricSpec<T>>,
    connection: Option<GaugeConnection<T>>,
    chart: Option<Chart<T>>,
    default_class: Option<ClassKind>,
    default_cycle: Option<CycleSpec<T>>,
    // (patch, piece) decomposition used for chern1 when there is no cycle
    pieces: Vec<(usize, Chart<T>)>,
    euler_correction: T,
    // factor turning the default integral into the spectrum invariant
    spectrum_scale: T,
    horizons: Option<(T, T)>,
    zero_width: bool,
}

impl<T: Real> ConfigurationDescriptor<T> {
    /// Descriptor carrying only a base dimension and a structure group.
    pub fn bare(name: &str, base_dim: usize, group: &str) -> Result<Self> {
        Ok(Self {
            name: name.to_string(),
            base_dim,
            group: group.parse()?,
            params: Vec::new(),
            metric: None,
            connection: None,
            chart: None,
            default_class: None,
            default_cycle: None,
            pieces: Vec::new(),
            euler_correction: T::zero(),
            spectrum_scale: T::one(),
            horizons: None,
            zero_width: false,
        })
    }

    fn with_params(mut self, params: &[(&str, T)]) -> Self {
        self.params = params
            .iter()
            .map(|&(k, v)| (k.to_string(), v.as_f64()))
            .collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn metric(&self) -> Option<&MetricSpec<T>> {
        self.metric.as_ref()
    }

    pub fn connection(&self) -> Option<&GaugeConnection<T>> {
        self.connection.as_ref()
    }

    pub fn chart(&self) -> Option<&Chart<T>> {
        self.chart.as_ref()
    }

    pub fn default_class(&self) -> Option<ClassKind> {
        self.default_class
    }

    pub fn default_cycle(&self) -> Option<&CycleSpec<T>> {
        self.default_cycle.as_ref()
    }

    /// `(r₊, r₋)` for black-hole configurations.
    pub fn horizons(&self) -> Option<(T, T)> {
        self.horizons
    }

    /// True when the default cycle has collapsed (extremal black hole).
    pub fn zero_width(&self) -> bool {
        self.zero_width
    }

    /// Integrates `class` over `cycle`, or over the default domain.
    ///
    /// The default domain is the metric chart for euler2 (plus the analytic
    /// pole-cap correction on spheres) and pontrjagin1, and for chern1 the
    /// default cycle or the chart decomposition of a multi-patch connection.
    pub fn integrate(
        &self,
        class: ClassKind,
        cycle: Option<&CycleSpec<T>>,
        quad: &QuadratureSpec,
    ) -> Result<Evaluation<T>> {
        let ok = |integral| {
            Ok(Evaluation {
                class,
                integral,
                zero_width: false,
            })
        };
        match class {
            ClassKind::Euler2 | ClassKind::Pontrjagin1 => {
                let metric = self.metric.as_ref().ok_or_else(|| {
                    Error::invalid(format!(
                        "configuration `{}` has no metric for {class}",
                        self.name
                    ))
                })?;
                let density = if class == ClassKind::Euler2 {
                    euler_density_2d(metric)?
                } else {
                    pontrjagin1_density(&curvature(&spin_connection(&coframe_from_metric(
                        metric,
                    )?)?)?)?
                };
                match cycle {
                    Some(c) => ok(integrate_class(&density, Domain::Cycle(c), quad)?),
                    None => {
                        let chart = self
                            .chart
                            .as_ref()
                            .expect("metric configurations carry a chart");
                        let mut r = integrate_class(&density, Domain::Chart(chart), quad)?;
                        if class == ClassKind::Euler2 && self.euler_correction != T::zero() {
                            r.value = r.value + self.euler_correction;
                            for v in &mut r.levels {
                                *v = *v + self.euler_correction;
                            }
                        }
                        ok(r)
                    }
                }
            }
            ClassKind::Chern1 => {
                let conn = self.connection.as_ref().ok_or_else(|| {
                    Error::invalid(format!(
                        "configuration `{}` has no gauge connection",
                        self.name
                    ))
                })?;
                let f = field_strength(conn)?;
                if let Some(c) = cycle {
                    return ok(integrate_class(
                        &chern1_density_on(&f, 0)?,
                        Domain::Cycle(c),
                        quad,
                    )?);
                }
                if self.zero_width {
                    let n = quad.level_points().len();
                    return Ok(Evaluation {
                        class,
                        integral: Integral {
                            value: T::zero(),
                            err: T::zero(),
                            converged: true,
                            levels: vec![T::zero(); n],
                        },
                        zero_width: true,
                    });
                }
                if let Some(c) = &self.default_cycle {
                    return ok(integrate_class(
                        &chern1_density_on(&f, 0)?,
                        Domain::Cycle(c),
                        quad,
                    )?);
                }
                let mut total: Option<Integral<T>> = None;
                for (patch, piece) in &self.pieces {
                    let r = integrate_class(
                        &chern1_density_on(&f, *patch)?,
                        Domain::Chart(piece),
                        quad,
                    )?;
                    total = Some(match total {
                        None => r,
                        Some(t) => t.combine(r),
                    });
                }
                let mut total =
                    total.ok_or_else(|| Error::invalid("connection has no integration domain"))?;
                total.converged = total.err.as_f64() <= quad.convergence_tol;
                ok(total)
            }
        }
    }

    /// Integral of the configuration's default class over its default domain.
    pub fn default_invariant(&self, quad: &QuadratureSpec) -> Result<Evaluation<T>> {
        let class = self.default_class.ok_or_else(|| {
            Error::invalid(format!(
                "configuration `{}` has no default class",
                self.name
            ))
        })?;
        self.integrate(class, None, quad)
    }

    /// The quantity whose integrality defines the configuration's spectrum:
    /// the default invariant, normalized per unit strip length for the
    /// oscillator (`2π/L` times the Euler integral).
    pub fn spectrum_invariant(&self, quad: &QuadratureSpec) -> Result<Evaluation<T>> {
        let mut r = self.default_invariant(quad)?;
        if self.spectrum_scale != T::one() {
            r.integral = r.integral.scale(self.spectrum_scale);
        }
        Ok(r)
    }
}

/// `dim P = dim M + dim G`.
pub fn bundle_dimension<T: Real>(cfg: &ConfigurationDescriptor<T>) -> usize {
    cfg.base_dim + cfg.group.dim()
}

/// Round sphere of radius `R` on `θ ∈ [δ, π-δ]`, `φ ∈ [0, 2π]`.
///
/// The two excluded caps contribute `2 (1 - cos δ)` to the Euler integral,
/// which is added analytically.
pub fn sphere_config<T: Real>(r: T) -> Result<ConfigurationDescriptor<T>> {
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::invalid(format!(
            "sphere radius must be positive, got {r}"
        )));
    }
    let delta = T::lit(POLE_MARGIN);
    let pi = T::PI();
    let r2 = r * r;
    let metric =
        MetricSpec::riemannian_diagonal(2, move |x: &[T]| vec![r2, r2 * x[0].sin().powi(2)])?
            .with_support(&[(T::zero(), pi), (-pi, T::lit(3.0) * pi)]);
    let chart = Chart::new(vec![(delta, pi - delta), (T::zero(), T::TAU())])?;
    let mut d = ConfigurationDescriptor::bare("sphere", 2, "SO(2)")?.with_params(&[("R", r)]);
    d.metric = Some(metric);
    d.chart = Some(chart);
    d.default_class = Some(ClassKind::Euler2);
    d.euler_correction = T::lit(2.0) * (T::one() - delta.cos());
    Ok(d)
}

/// Euclidean cube `[0, L]^n`.
pub fn flat_config<T: Real>(l: T, n: usize) -> Result<ConfigurationDescriptor<T>> {
    if !(l > T::zero() && l.is_finite()) {
        return Err(Error::invalid(format!(
            "edge length must be positive, got {l}"
        )));
    }
    if !(2..=4).contains(&n) {
        return Err(Error::invalid(format!(
            "flat configuration supports n in 2..=4, got {n}"
        )));
    }
    let metric = MetricSpec::riemannian_diagonal(n, move |_: &[T]| vec![T::one(); n])?;
    let chart = Chart::new(vec![(T::zero(), l); n])?;
    let mut d = ConfigurationDescriptor::bare("flat", n, &format!("SO({n})"))?
        .with_params(&[("L", l), ("n", T::from_usize_lossy(n))]);
    d.metric = Some(metric);
    d.chart = Some(chart);
    d.default_class = Some(if n == 4 {
        ClassKind::Pontrjagin1
    } else {
        ClassKind::Euler2
    });
    Ok(d)
}

/// Dirac monopole: `A_N = g(1 - cos θ) dφ`, `A_S = -g(1 + cos θ) dφ`,
/// glued by `λ = 2gφ` on the band `θ ∈ [π/3, 2π/3]`.
///
/// The Chern integral is split along the equator, each hemisphere using
/// the potential regular on it.
pub fn monopole_config<T: Real>(g: T) -> Result<ConfigurationDescriptor<T>> {
    if !(g.is_finite() && g != T::zero()) {
        return Err(Error::invalid(format!(
            "monopole strength must be non-zero, got {g}"
        )));
    }
    let pi = T::PI();
    let tau = T::TAU();
    let third = pi / T::lit(3.0);
    let north = GaugePatch {
        name: "north".into(),
        chart: Chart::new(vec![(T::zero(), T::lit(2.0) * third), (T::zero(), tau)])?,
        potential: PFormField::from_fn(2, 1, move |x: &[T]| {
            vec![T::zero(), g * (T::one() - x[0].cos())]
        })?,
    };
    let south = GaugePatch {
        name: "south".into(),
        chart: Chart::new(vec![(third, pi), (T::zero(), tau)])?,
        potential: PFormField::from_fn(2, 1, move |x: &[T]| {
            vec![T::zero(), -g * (T::one() + x[0].cos())]
        })?,
    };
    let two_g = T::lit(2.0) * g;
    let transition = Transition {
        name: "equatorial band".into(),
        overlap: Chart::new(vec![(third, T::lit(2.0) * third), (T::zero(), tau)])?,
        lambda: PFormField::scalar(2, move |x: &[T]| two_g * x[1])?,
    };
    let half = pi / T::lit(2.0);
    let mut d = ConfigurationDescriptor::bare("monopole", 2, "U(1)")?.with_params(&[("g", g)]);
    d.connection = Some(GaugeConnection::two_chart(north, south, transition)?);
    d.chart = Some(Chart::new(vec![(T::zero(), pi), (T::zero(), tau)])?);
    d.pieces = vec![
        (0, Chart::new(vec![(T::zero(), half), (T::zero(), tau)])?),
        (1, Chart::new(vec![(half, pi), (T::zero(), tau)])?),
    ];
    d.default_class = Some(ClassKind::Chern1);
    Ok(d)
}

/// Jacobi metric of two oscillators on the strip `[0, q0] × [0, L]`.
///
/// `q0` must lie strictly inside the turning point along `q1`; where a
/// non-zero `k2` brings the wall into the strip, the chart's region
/// predicate masks the forbidden part.
pub fn oscillator_config<T: Real>(
    m: T,
    k1: T,
    k2: T,
    energy: T,
    q0: T,
    l: T,
) -> Result<ConfigurationDescriptor<T>> {
    let sys = oscillator_system(m, k1, k2, energy)?;
    if !(q0 > T::zero() && q0.is_finite()) {
        return Err(Error::invalid(format!("q0 must be positive, got {q0}")));
    }
    if !(l > T::zero() && l.is_finite()) {
        return Err(Error::invalid(format!("L must be positive, got {l}")));
    }
    match turning_value(&sys, &[T::one(), T::zero()]) {
        Ok(qt) if q0 >= qt => {
            return Err(Error::invalid(format!(
                "q0 = {q0} must stay below the turning value {qt}"
            )))
        }
        Ok(_) | Err(Error::NoTurningPoint) => {}
        Err(e) => return Err(e),
    }
    let bounds = vec![(T::zero(), q0), (T::zero(), l)];
    let region = AllowedRegion::new(&sys, bounds.clone())?;
    let metric = jacobi_metric(&sys)?.with_support(&bounds);
    let mut d = ConfigurationDescriptor::bare("oscillator", 2, "SO(2)")?.with_params(&[
        ("m", m),
        ("k1", k1),
        ("k2", k2),
        ("E", energy),
        ("q0", q0),
        ("L", l),
    ]);
    d.metric = Some(metric);
    d.chart = Some(if k2 > T::zero() {
        region.chart
    } else {
        Chart::new(bounds)?
    });
    d.default_class = Some(ClassKind::Euler2);
    d.spectrum_scale = T::TAU() / l;
    Ok(d)
}

/// Reissner–Nordström potential `A = -(e/r) dt` on the chart `(t, r)`.
///
/// The default cycle runs over `r ∈ [r₋, r₊]` and one time period
/// `t ∈ [0, 2π/r₀]`, oriented `dr ∧ dt`. At extremality the cycle has
/// zero width and is flagged instead of integrated.
pub fn reissner_nordstrom_config<T: Real>(
    p: BlackHoleParams<T>,
) -> Result<ConfigurationDescriptor<T>> {
    let p = BlackHoleParams::new(p.m, p.e, p.a, p.r0)?;
    if p.a != T::zero() {
        return Err(Error::invalid(
            "Reissner-Nordstrom configuration requires a = 0",
        ));
    }
    if p.e == T::zero() {
        return Err(Error::invalid(
            "Reissner-Nordstrom configuration requires e != 0",
        ));
    }
    let (rp, rm) = p.horizons();
    let period = p.time_period();
    let e = p.e;
    let chart = Chart::new(vec![
        (T::zero(), period),
        (rm / T::lit(2.0), rp * T::lit(2.0)),
    ])?;
    let potential = PFormField::from_fn(2, 1, move |x: &[T]| vec![-e / x[1], T::zero()])?;
    let mut d = ConfigurationDescriptor::bare("reissner_nordstrom", 2, "U(1)")?.with_params(&[
        ("m", p.m),
        ("e", p.e),
        ("r0", p.r0),
    ]);
    d.connection = Some(GaugeConnection::single(
        "exterior",
        chart.clone(),
        potential,
    )?);
    d.chart = Some(chart);
    d.horizons = Some((rp, rm));
    d.default_class = Some(ClassKind::Chern1);
    if rp > rm {
        d.default_cycle = Some(CycleSpec::new(
            vec![1, 0],
            vec![],
            vec![(rm, rp), (T::zero(), period)],
        )?);
    } else {
        d.zero_width = true;
    }
    Ok(d)
}

/// Kerr–Newman potential `A = -(e r / Σ)(dt - a sin²θ dφ)`,
/// `Σ = r² + a² cos²θ`, on the chart `(t, r, θ, φ)`.
///
/// The default cycle is the equatorial `(r, t)` surface between the
/// horizons. Its integral is computed and reported; no closed form is
/// asserted for `a ≠ 0`.
pub fn kerr_newman_config<T: Real>(p: BlackHoleParams<T>) -> Result<ConfigurationDescriptor<T>> {
    let p = BlackHoleParams::new(p.m, p.e, p.a, p.r0)?;
    if p.e == T::zero() {
        return Err(Error::invalid("Kerr-Newman configuration requires e != 0"));
    }
    let (rp, rm) = p.horizons();
    let period = p.time_period();
    let (e, a) = (p.e, p.a);
    let pi = T::PI();
    let chart = Chart::new(vec![
        (T::zero(), period),
        (rm / T::lit(2.0), rp * T::lit(2.0)),
        (T::zero(), pi),
        (T::zero(), T::TAU()),
    ])?;
    let potential =
        PFormField::from_fn(4, 1, move |x: &[T]| kerr_newman_potential(e, a, x[1], x[2]))?;
    let mut d = ConfigurationDescriptor::bare("kerr_newman", 4, "U(1)")?.with_params(&[
        ("m", p.m),
        ("e", p.e),
        ("a", p.a),
        ("r0", p.r0),
    ]);
    d.connection = Some(GaugeConnection::single(
        "exterior",
        chart.clone(),
        potential,
    )?);
    d.chart = Some(chart);
    d.horizons = Some((rp, rm));
    d.default_class = Some(ClassKind::Chern1);
    if rp > rm {
        d.default_cycle = Some(CycleSpec::new(
            vec![1, 0],
            vec![(2, pi / T::lit(2.0)), (3, T::zero())],
            vec![(rm, rp), (T::zero(), period)],
        )?);
    } else {
        d.zero_width = true;
    }
    Ok(d)
}

/// Components `(A_t, A_r, A_θ, A_φ)` of the Kerr–Newman potential.
pub fn kerr_newman_potential<T: Real>(e: T, a: T, r: T, theta: T) -> Vec<T> {
    let sigma = r * r + a * a * theta.cos().powi(2);
    let s = e * r / sigma;
    vec![-s, T::zero(), T::zero(), s * a * theta.sin().powi(2)]
}

/// `Σ = r² + a² cos²θ`.
pub fn kerr_newman_sigma<T: Real>(a: T, r: T, theta: T) -> T {
    r * r + a * a * theta.cos().powi(2)
}

/// Closed form of the Reissner–Nordström cycle integral,
/// `2 sqrt(m² - e²) / (|e| r₀)`.
pub fn rn_chern_closed_form(m: f64, e: f64, r0: f64) -> f64 {
    2.0 * (m * m - e * e).max(0.0).sqrt() / (e.abs() * r0)
}

/// Chern number `2g` of the monopole, used as the reference by tests.
pub fn monopole_charge(g: f64) -> f64 {
    2.0 * g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::torsion_residual;
    use crate::gauge::{sample_points, verify_transition};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn quad(n: usize) -> QuadratureSpec {
        QuadratureSpec {
            points_per_axis: n,
            refinement_levels: 2,
            ..Default::default()
        }
    }

    #[test]
    fn group_dimensions() {
        let d = |s: &str| s.parse::<Group>().unwrap().dim();
        assert_eq!(d("SO(1,3)"), 6);
        assert_eq!(d("SO(3)"), 3);
        assert_eq!(d("SO(2)"), 1);
        assert_eq!(d("U(1)"), 1);
        assert_eq!(d("SU(2)"), 3);
        assert_eq!(d("SU(3)"), 8);
        assert_eq!(d("U(1) x SU(2) x SU(3)"), 12);
        assert_eq!(d("U(1)×SU(2)×SU(3)"), 12);
    }

    #[test]
    fn unknown_groups() {
        for s in [
            "",
            "G2",
            "SO()",
            "SO(a)",
            "Sp(2)",
            "SU(3",
            "U(1)xE8(1)",
            "SO(0)",
        ] {
            assert!(
                matches!(s.parse::<Group>(), Err(Error::UnknownGroup(_))),
                "{s}"
            );
        }
    }

    #[test]
    fn group_display_round_trips() {
        for s in ["SO(3)", "SO(1,3)", "U(1)", "SU(3)", "U(1)xSU(2)xSU(3)"] {
            assert_eq!(s.parse::<Group>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn bundle_dimensions_from_the_catalog() {
        let none = BTreeMap::new();
        let gravity = build::<f64>("gravity", &none).unwrap();
        assert_eq!(bundle_dimension(&gravity), 10);
        let ym = build::<f64>("yang_mills", &BTreeMap::from([("k".to_string(), 3.0)])).unwrap();
        assert_eq!(bundle_dimension(&ym), 12);
        let sm = build::<f64>("standard_model", &none).unwrap();
        assert_eq!(bundle_dimension(&sm), 16);
        assert!(matches!(
            ConfigurationDescriptor::<f64>::bare("x", 4, "E8"),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn build_checks_parameters() {
        let p = |kv: &[(&str, f64)]| {
            kv.iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect::<BTreeMap<_, _>>()
        };
        assert!(build::<f64>("sphere", &p(&[("R", 1.0)])).is_ok());
        assert!(build::<f64>("sphere", &p(&[])).is_err());
        assert!(build::<f64>("sphere", &p(&[("R", 1.0), ("S", 2.0)])).is_err());
        assert!(build::<f64>("sphere", &p(&[("R", 0.0)])).is_err());
        assert!(build::<f64>("yang_mills", &p(&[("k", 2.5)])).is_err());
        assert!(build::<f64>("nonesuch", &p(&[])).is_err());
    }

    #[test]
    fn param_ranges_render() {
        let e = lookup("flat").unwrap();
        assert_eq!(e.params[0].range_string(), "(0, inf)");
        assert_eq!(e.params[1].range_string(), "[2, 4] integer");
    }

    #[test]
    fn sphere_rejects_non_positive_radius() {
        assert!(matches!(
            sphere_config(0.0f64),
            Err(Error::InvalidParameter(_))
        ));
        assert!(sphere_config(-1.0f64).is_err());
    }

    #[test]
    fn sphere_euler_characteristic() {
        let s = sphere_config(1.0f64).unwrap();
        let r = s.default_invariant(&quad(32)).unwrap();
        assert_abs_diff_eq!(r.integral.value, 2.0, epsilon = 1e-5);
    }

    #[test]
    fn monopole_rejects_zero_charge() {
        assert!(monopole_config(0.0f64).is_err());
    }

    #[test]
    fn monopole_transition_and_charge() {
        let c = monopole_config(0.5f64).unwrap();
        assert!(verify_transition(c.connection().unwrap(), 64).unwrap().pass);
        let r = c.default_invariant(&quad(24)).unwrap();
        assert_abs_diff_eq!(r.integral.value, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn oscillator_parameter_checks() {
        assert!(oscillator_config(1.0f64, 1.0, 0.0, 1.0, 1.0, 1.0).is_ok());
        assert!(matches!(
            oscillator_config(1.0f64, 1.0, 0.0, 1.0, 1.5, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(oscillator_config(1.0f64, 1.0, 1.0, 1.0, 1.0, 1.0).is_ok());
        assert!(oscillator_config(1.0f64, 1.0, 0.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn reissner_nordstrom_horizons() {
        let c =
            reissner_nordstrom_config(BlackHoleParams::new(1.0, 0.6, 0.0, 1.0).unwrap()).unwrap();
        let (rp, rm) = c.horizons().unwrap();
        assert_abs_diff_eq!(rp, 1.8, epsilon = 1e-15);
        assert_abs_diff_eq!(rm, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(rp * rm, 0.36, epsilon = 1e-12);
    }

    #[test]
    fn reissner_nordstrom_identities_on_a_grid() {
        for m in [0.5f64, 1.0, 3.0, 10.0] {
            for frac in [0.05, 0.3, 0.6, 0.9, 0.999, 1.0] {
                let e = frac * m;
                let p = BlackHoleParams::new(m, e, 0.0, 1.0).unwrap();
                let (rp, rm) = p.horizons();
                assert!((rp * rm - e * e).abs() <= 1e-12 * m * m);
                assert!((rp + rm - 2.0 * m).abs() <= 1e-12 * m);
            }
        }
    }

    #[test]
    fn reissner_nordstrom_invalid_parameters() {
        assert!(BlackHoleParams::new(1.0, 1.2, 0.0, 1.0).is_err());
        assert!(BlackHoleParams::new(1.0, 0.5, 0.0, 0.0).is_err());
        let p = BlackHoleParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(reissner_nordstrom_config(p).is_err());
        let p = BlackHoleParams::new(1.0, 0.5, 0.1, 1.0).unwrap();
        assert!(reissner_nordstrom_config(p).is_err());
    }

    #[test]
    fn reissner_nordstrom_invariant() {
        let c =
            reissner_nordstrom_config(BlackHoleParams::new(1.0, 0.6, 0.0, 1.0).unwrap()).unwrap();
        let r = c.default_invariant(&QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(r.integral.value, 8.0 / 3.0, epsilon = 1e-6);
        assert!(!r.zero_width);
    }

    #[test]
    fn extremal_black_hole_is_flagged() {
        let c =
            reissner_nordstrom_config(BlackHoleParams::new(1.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(c.zero_width());
        let r = c.default_invariant(&quad(8)).unwrap();
        assert_eq!(r.integral.value, 0.0);
        assert!(r.zero_width);
    }

    #[test]
    fn kerr_newman_sigma_and_validity() {
        assert_abs_diff_eq!(
            kerr_newman_sigma(0.3f64, 2.0, PI / 2.0),
            4.0,
            epsilon = 1e-15
        );
        assert!(kerr_newman_config(BlackHoleParams::new(1.0, 0.6, 0.3, 1.0).unwrap()).is_ok());
        assert!(BlackHoleParams::new(1.0, 0.6, 0.9, 1.0).is_err());
    }

    #[test]
    fn kerr_newman_reduces_to_reissner_nordstrom() {
        let p = BlackHoleParams::new(1.0f64, 0.6, 0.0, 1.0).unwrap();
        let kn = kerr_newman_config::<f64>(p).unwrap();
        let f = field_strength(kn.connection().unwrap()).unwrap();
        for x in sample_points(kn.chart().unwrap(), 20) {
            let v = f.field(0).eval(&x).unwrap();
            // F_tr = -e/r² in (t, r) order
            assert_abs_diff_eq!(v.get(&[0, 1]), -0.6 / (x[1] * x[1]), epsilon = 1e-8);
            assert!(v.get(&[2, 3]).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_configurations_are_torsion_free() {
        let configs = [
            sphere_config(1.0f64).unwrap(),
            flat_config(1.0f64, 3).unwrap(),
            oscillator_config(1.0f64, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap(),
        ];
        for c in &configs {
            let cf = coframe_from_metric(c.metric().unwrap()).unwrap();
            let sc = spin_connection(&cf).unwrap();
            for x in sample_points(c.chart().unwrap(), 100) {
                let r = torsion_residual(&cf, &sc, &x).unwrap();
                assert!(r < 1e-5, "{}: torsion {r} at {x:?}", c.name());
            }
        }
    }

    #[test]
    fn gauge_configurations_are_closed() {
        let p = BlackHoleParams::new(1.0f64, 0.6, 0.3, 1.0).unwrap();
        let kn = kerr_newman_config::<f64>(p).unwrap();
        let f = field_strength(kn.connection().unwrap()).unwrap();
        for x in sample_points(kn.chart().unwrap(), 100) {
            let r = f.closure_residual(0, &x).unwrap();
            assert!(r < 1e-4 * (1.0 + 1.0 / x[1].powi(4)), "dF = {r} at {x:?}");
        }
    }

    #[test]
    fn missing_structures_are_reported() {
        let s = sphere_config(1.0f64).unwrap();
        assert!(s.integrate(ClassKind::Chern1, None, &quad(8)).is_err());
        let m = monopole_config(1.0f64).unwrap();
        assert!(m.integrate(ClassKind::Euler2, None, &quad(8)).is_err());
        assert!(matches!(
            s.integrate(ClassKind::Pontrjagin1, None, &quad(8)),
            Err(Error::DimensionTooLow {
                dim: 2,
                required: 4
            })
        ));
    }
}
