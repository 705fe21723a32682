//! Jacobi metric `h = 2(E - V) g` of conservative mechanical systems.

use std::fmt;
use std::sync::Arc;

use crate::calculus::Chart;
use crate::error::{Error, Result};
use crate::frame::MetricSpec;
use crate::real::Real;

/// Default margin: points with `E - V < ε E` are outside the allowed region.
pub const DEFAULT_EPSILON: f64 = 1e-6;

type Potential<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// `L = ½ g_αβ q̇^α q̇^β - V(q)` at fixed energy `E`.
#[derive(Clone)]
pub struct MechanicalSystem<T> {
    dof: usize,
    mass: Vec<T>,
    potential: Potential<T>,
    energy: T,
    epsilon: T,
}

impl<T: Real> MechanicalSystem<T> {
    /// `mass` is the row-major `dof x dof` mass matrix.
    pub fn new(
        mass: Vec<T>,
        potential: impl Fn(&[T]) -> T + Send + Sync + 'static,
        energy: T,
    ) -> Result<Self> {
        let dof = (mass.len() as f64).sqrt().round() as usize;
        if dof == 0 || dof * dof != mass.len() {
            return Err(Error::invalid("mass matrix must be square and non-empty"));
        }
        for i in 0..dof {
            for j in (i + 1)..dof {
                if mass[i * dof + j] != mass[j * dof + i] {
                    return Err(Error::invalid("mass matrix must be symmetric"));
                }
            }
        }
        if !leading_minors_positive(dof, &mass) {
            return Err(Error::invalid("mass matrix must be positive definite"));
        }
        if !(energy.is_finite()) {
            return Err(Error::invalid("energy must be finite"));
        }
        Ok(Self {
            dof,
            mass,
            potential: Arc::new(potential),
            energy,
            epsilon: T::lit(DEFAULT_EPSILON),
        })
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero()) {
            return Err(Error::invalid("epsilon must be non-negative"));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn dof(&self) -> usize {
        self.dof
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn mass_matrix(&self) -> &[T] {
        &self.mass
    }

    pub fn potential(&self, q: &[T]) -> T {
        (self.potential)(q)
    }

    /// `Some(m)` when the mass matrix is `m δ`.
    pub fn isotropic_mass(&self) -> Option<T> {
        let n = self.dof;
        let m = self.mass[0];
        let iso = (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.mass[i * n + j];
                if i == j {
                    v == m
                } else {
                    v == T::zero()
                }
            })
        });
        iso.then_some(m)
    }

    /// Kinetic energy budget `E - V`, checked against the degeneracy wall.
    pub fn kinetic(&self, q: &[T]) -> Result<T> {
        let k = self.energy - self.potential(q);
        if !(k >= self.epsilon * self.energy.abs()) || k <= T::zero() {
            return Err(Error::DegenerateMetric {
                point: q.iter().map(|c| c.as_f64()).collect(),
                reason: format!(
                    "E - V = {} is inside the turning-surface margin",
                    k.as_f64()
                ),
            });
        }
        Ok(k)
    }

    /// Conformal factor `2 m (E - V)` for isotropic mass.
    pub fn conformal_factor(&self, q: &[T]) -> Result<T> {
        let m = self
            .isotropic_mass()
            .ok_or_else(|| Error::invalid("conformal factor needs an isotropic mass matrix"))?;
        Ok(T::lit(2.0) * m * self.kinetic(q)?)
    }
}

impl<T: Real> fmt::Debug for MechanicalSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MechanicalSystem")
            .field("dof", &self.dof)
            .field("mass", &self.mass)
            .field("energy", &self.energy)
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

fn leading_minors_positive<T: Real>(n: usize, m: &[T]) -> bool {
    // Cholesky succeeds iff every leading minor is positive.
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut d = m[j * n + j];
        for k in 0..j {
            d = d - l[j * n + k] * l[j * n + k];
        }
        if !(d > T::zero()) {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut v = m[i * n + j];
            for k in 0..j {
                v = v - l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / d;
        }
    }
    true
}

/// Jacobi metric of a mechanical system.
///
/// Isotropic mass `m δ` yields a conformally flat metric with factor
/// `2 m (E - V)`; any other mass matrix a general symmetric one.
pub fn jacobi_metric<T: Real>(sys: &MechanicalSystem<T>) -> Result<MetricSpec<T>> {
    let n = sys.dof;
    let signature = vec![1i8; n];
    let s = sys.clone();
    match sys.isotropic_mass() {
        Some(_) => MetricSpec::conformally_flat(&signature, move |q| s.conformal_factor(q)),
        None => MetricSpec::general(&signature, move |q| {
            let two_k = T::lit(2.0) * s.kinetic(q)?;
            Ok(s.mass.iter().map(|&g| two_k * g).collect())
        }),
    }
}

/// Two oscillators `V = ½ (k1 q1² + k2 q2²)` of equal mass.
pub fn oscillator_system<T: Real>(m: T, k1: T, k2: T, energy: T) -> Result<MechanicalSystem<T>> {
    if !(m > T::zero()) {
        return Err(Error::invalid(format!("mass must be positive, got {m}")));
    }
    if !(energy > T::zero()) {
        return Err(Error::invalid(format!(
            "energy must be positive, got {energy}"
        )));
    }
    if !(k1 >= T::zero() && k2 >= T::zero()) {
        return Err(Error::invalid("spring constants must be non-negative"));
    }
    let half = T::lit(0.5);
    MechanicalSystem::new(
        vec![m, T::zero(), T::zero(), m],
        move |q| half * (k1 * q[0] * q[0] + k2 * q[1] * q[1]),
        energy,
    )
}

/// Distance from the origin along `direction` at which `V` reaches `E`.
///
/// The ray is bracketed by doubling and the crossing refined by
/// bisection to full floating point resolution.
pub fn turning_value<T: Real>(sys: &MechanicalSystem<T>, direction: &[T]) -> Result<T> {
    if direction.len() != sys.dof {
        return Err(Error::mismatch(
            "direction must have one entry per degree of freedom",
        ));
    }
    let norm = direction.iter().map(|&d| d * d).sum::<T>().sqrt();
    if !(norm > T::zero()) {
        return Err(Error::invalid("direction must be non-zero"));
    }
    let dir: Vec<T> = direction.iter().map(|&d| d / norm).collect();
    let excess = |t: T| {
        let q: Vec<T> = dir.iter().map(|&d| d * t).collect();
        sys.potential(&q) - sys.energy
    };
    if excess(T::zero()) >= T::zero() {
        return Err(Error::invalid("origin is not inside the allowed region"));
    }
    let limit = T::lit(1e12);
    let mut lo = T::zero();
    let mut hi = T::one();
    while excess(hi) < T::zero() {
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > limit {
            return Err(Error::NoTurningPoint);
        }
    }
    loop {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if excess(hi).abs() < excess(lo).abs() {
        hi
    } else {
        lo
    })
}

/// Coordinate box restricted to `E - V ≥ ε E`.
#[derive(Clone, Debug)]
pub struct AllowedRegion<T> {
    pub chart: Chart<T>,
    pub epsilon: T,
}

impl<T: Real> AllowedRegion<T> {
    pub fn new(sys: &MechanicalSystem<T>, bounds: Vec<(T, T)>) -> Result<Self> {
        if bounds.len() != sys.dof {
            return Err(Error::mismatch("bounds must cover every degree of freedom"));
        }
        let s = sys.clone();
        let chart = Chart::new(bounds)?.with_region(move |q| s.kinetic(q).is_ok());
        // Non-empty check on an 8-per-axis grid of cell centres.
        let n = 8usize;
        let total = n.pow(sys.dof as u32);
        let any = (0..total).any(|mut i| {
            let q: Vec<T> = chart
                .bounds()
                .iter()
                .map(|&(lo, hi)| {
                    let k = i % n;
                    i /= n;
                    lo + (hi - lo) * T::lit((k as f64 + 0.5) / n as f64)
                })
                .collect();
            chart.contains(&q)
        });
        if !any {
            return Err(Error::invalid(
                "energy is below the potential on the whole chart",
            ));
        }
        Ok(Self {
            chart,
            epsilon: sys.epsilon,
        })
    }
}
