//! Metric → orthonormal coframe → spin connection → curvature.
//!
//! Conventions: `g = η_ab θ^a ⊗ θ^b` with `θ^a = e^a_μ dx^μ`; the
//! connection solves `dθ^a = -ω^a_b ∧ θ^b` and the curvature is
//! `Ω^a_b = dω^a_b + ω^a_c ∧ ω^c_b`. Frame indices are lowered with η and
//! only `a < b` components are stored. With these conventions the round
//! sphere in `(θ, φ)` has `ω_12 = -cos θ dφ` and `Ω_12 = sin θ dθ ∧ dφ`,
//! so its Euler integral is `+2`.

use std::fmt;
use std::sync::Arc;

use crate::calculus::{
    binomial, multi_indices, partial_derivative_vec, rank, Form, Order, PFormField, Stencil,
};
use crate::error::{Error, Result};
use crate::real::Real;

/// Pivot / eigen-magnitude below which a metric is treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

type VecFn<T> = Arc<dyn Fn(&[T]) -> Result<Vec<T>> + Send + Sync>;
type ScalarFn<T> = Arc<dyn Fn(&[T]) -> Result<T> + Send + Sync>;

#[derive(Clone)]
pub enum MetricKind<T> {
    /// Diagonal entries `g_μμ`.
    Diagonal(VecFn<T>),
    /// Single factor `φ` with `g = φ η`.
    ConformallyFlat(ScalarFn<T>),
    /// Full symmetric matrix, row-major.
    General(VecFn<T>),
}

/// A metric given pointwise, with its declared signature.
#[derive(Clone)]
pub struct MetricSpec<T> {
    dim: usize,
    signature: Vec<T>,
    kind: MetricKind<T>,
    support: Option<Arc<[(T, T)]>>,
}

fn degenerate<T: Real>(x: &[T], reason: impl Into<String>) -> Error {
    Error::DegenerateMetric {
        point: x.iter().map(|c| c.as_f64()).collect(),
        reason: reason.into(),
    }
}

fn check_signature<T: Real>(signature: &[i8]) -> Result<Vec<T>> {
    if signature.is_empty() || signature.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("signature entries must be +1 or -1"));
    }
    Ok(signature.iter().map(|&s| T::lit(s as f64)).collect())
}

impl<T: Real> MetricSpec<T> {
    pub fn diagonal(
        signature: &[i8],
        f: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            kind: MetricKind::Diagonal(Arc::new(f)),
            support: None,
        })
    }

    pub fn conformally_flat(
        signature: &[i8],
        f: impl Fn(&[T]) -> Result<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            kind: MetricKind::ConformallyFlat(Arc::new(f)),
            support: None,
        })
    }

    pub fn general(
        signature: &[i8],
        f: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            kind: MetricKind::General(Arc::new(f)),
            support: None,
        })
    }

    /// Riemannian metric with every η entry +1.
    pub fn riemannian_diagonal(
        dim: usize,
        f: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::diagonal(&vec![1; dim], move |x| Ok(f(x)))
    }

    pub fn with_support(mut self, bounds: &[(T, T)]) -> Self {
        self.support = Some(bounds.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[T] {
        &self.signature
    }

    pub fn kind(&self) -> &MetricKind<T> {
        &self.kind
    }

    pub fn support(&self) -> Option<&[(T, T)]> {
        self.support.as_deref()
    }

    pub fn is_riemannian(&self) -> bool {
        self.signature.iter().all(|&s| s > T::zero())
    }

    /// Full metric matrix at `x`, row-major, after symmetry checks.
    pub fn matrix(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.dim;
        let mut g = vec![T::zero(); n * n];
        match &self.kind {
            MetricKind::Diagonal(f) => {
                let d = f(x)?;
                if d.len() != n {
                    return Err(Error::mismatch("diagonal metric returned wrong length"));
                }
                for i in 0..n {
                    g[i * n + i] = d[i];
                }
            }
            MetricKind::ConformallyFlat(f) => {
                let phi = f(x)?;
                for i in 0..n {
                    g[i * n + i] = phi * self.signature[i];
                }
            }
            MetricKind::General(f) => {
                g = f(x)?;
                if g.len() != n * n {
                    return Err(Error::mismatch("general metric returned wrong length"));
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let (a, b) = (g[i * n + j], g[j * n + i]);
                        let scale = a.abs().max(b.abs()).max(T::one());
                        if (a - b).abs() > T::lit(1e-12) * scale {
                            return Err(degenerate(x, "metric matrix is not symmetric"));
                        }
                    }
                }
            }
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: x.iter().map(|c| c.as_f64()).collect(),
            });
        }
        Ok(g)
    }
}

impl<T: fmt::Debug> fmt::Debug for MetricSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MetricKind::Diagonal(_) => "diagonal",
            MetricKind::ConformallyFlat(_) => "conformally-flat",
            MetricKind::General(_) => "general-symmetric",
        };
        f.debug_struct("MetricSpec")
            .field("dim", &self.dim)
            .field("kind", &kind)
            .field("signature", &self.signature)
            .finish()
    }
}

/// Orthonormal coframe `e^a_μ`, row `a`, column `μ`.
#[derive(Clone)]
pub struct CoFrame<T> {
    dim: usize,
    signature: Vec<T>,
    support: Option<Arc<[(T, T)]>>,
    e: VecFn<T>,
}

impl<T: Real> CoFrame<T> {
    pub fn from_fn(
        signature: &[i8],
        e: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            support: None,
            e: Arc::new(e),
        })
    }

    pub fn with_support(mut self, bounds: &[(T, T)]) -> Self {
        self.support = Some(bounds.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[T] {
        &self.signature
    }

    pub fn support(&self) -> Option<&[(T, T)]> {
        self.support.as_deref()
    }

    pub fn matrix(&self, x: &[T]) -> Result<Vec<T>> {
        let e = (self.e)(x)?;
        if e.len() != self.dim * self.dim {
            return Err(Error::mismatch("coframe returned wrong number of entries"));
        }
        if e.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: x.iter().map(|c| c.as_f64()).collect(),
            });
        }
        Ok(e)
    }

    /// `η_ab e^a_μ e^b_ν`, row-major.
    pub fn reconstruct_metric(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.dim;
        let e = self.matrix(x)?;
        let mut g = vec![T::zero(); n * n];
        for mu in 0..n {
            for nu in 0..n {
                g[mu * n + nu] = (0..n)
                    .map(|a| self.signature[a] * e[a * n + mu] * e[a * n + nu])
                    .sum();
            }
        }
        Ok(g)
    }

    /// The 1-form `θ^a` as a field.
    pub fn theta(&self, a: usize) -> Result<PFormField<T>> {
        let n = self.dim;
        let cf = self.clone();
        Ok(PFormField::new(n, 1, move |x| {
            let e = cf.matrix(x)?;
            Ok(e[a * n..(a + 1) * n].to_vec())
        })?
        .with_support_opt(self.support.clone()))
    }

    /// Applies a constant frame rotation `θ'^a = R^a_b θ^b`.
    pub fn rotated(&self, rotation: Vec<T>) -> Result<Self> {
        let n = self.dim;
        if rotation.len() != n * n {
            return Err(Error::mismatch("rotation must be dim x dim"));
        }
        let inner = self.clone();
        Ok(Self {
            dim: n,
            signature: self.signature.clone(),
            support: self.support.clone(),
            e: Arc::new(move |x| {
                let e = inner.matrix(x)?;
                let mut out = vec![T::zero(); n * n];
                for a in 0..n {
                    for mu in 0..n {
                        out[a * n + mu] = (0..n).map(|b| rotation[a * n + b] * e[b * n + mu]).sum();
                    }
                }
                Ok(out)
            }),
        })
    }
}

impl<T: Real> fmt::Debug for CoFrame<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoFrame")
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

/// Builds the orthonormal coframe of a metric.
///
/// Diagonal and conformal metrics use closed-form roots. General metrics
/// use `g = L D Lᵀ` (unit lower `L`, pivots taken in axis order) and
/// `e = sqrt|D| Lᵀ`; every pivot sign must match the declared signature.
pub fn coframe_from_metric<T: Real>(m: &MetricSpec<T>) -> Result<CoFrame<T>> {
    let n = m.dim;
    let metric = m.clone();
    let thresh = T::lit(DEGENERACY_THRESHOLD);
    let e: VecFn<T> = match &m.kind {
        MetricKind::Diagonal(_) | MetricKind::ConformallyFlat(_) => Arc::new(move |x: &[T]| {
            let g = metric.matrix(x)?;
            let mut e = vec![T::zero(); n * n];
            for i in 0..n {
                let gii = g[i * n + i];
                if gii.abs() < thresh {
                    return Err(degenerate(x, format!("|g_{i}{i}| below threshold")));
                }
                if gii.signum() != metric.signature[i] {
                    return Err(degenerate(x, format!("g_{i}{i} has the wrong sign")));
                }
                e[i * n + i] = gii.abs().sqrt();
            }
            Ok(e)
        }),
        MetricKind::General(_) => Arc::new(move |x: &[T]| {
            let g = metric.matrix(x)?;
            let (l, d) = ldl(n, &g);
            let mut e = vec![T::zero(); n * n];
            for a in 0..n {
                if !(d[a].abs() >= thresh) {
                    return Err(degenerate(x, format!("pivot {a} below threshold")));
                }
                if d[a].signum() != metric.signature[a] {
                    return Err(degenerate(
                        x,
                        format!("pivot {a} contradicts the signature"),
                    ));
                }
                let s = d[a].abs().sqrt();
                for mu in 0..n {
                    e[a * n + mu] = s * l[mu * n + a];
                }
            }
            Ok(e)
        }),
    };
    Ok(CoFrame {
        dim: n,
        signature: m.signature.clone(),
        support: m.support.clone(),
        e,
    })
}

/// Symmetric `L D Lᵀ` without pivoting.
fn ldl<T: Real>(n: usize, g: &[T]) -> (Vec<T>, Vec<T>) {
    let mut l = vec![T::zero(); n * n];
    let mut d = vec![T::zero(); n];
    for j in 0..n {
        let mut dj = g[j * n + j];
        for k in 0..j {
            dj = dj - l[j * n + k] * l[j * n + k] * d[k];
        }
        d[j] = dj;
        l[j * n + j] = T::one();
        for i in (j + 1)..n {
            let mut v = g[i * n + j];
            for k in 0..j {
                v = v - l[i * n + k] * l[j * n + k] * d[k];
            }
            l[i * n + j] = v / dj;
        }
    }
    (l, d)
}

/// Inverse of a small dense matrix by Gauss–Jordan with partial pivoting.
pub(crate) fn invert<T: Real>(n: usize, m: &[T]) -> Option<Vec<T>> {
    let mut a = m.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i * n + col]
                .abs()
                .partial_cmp(&a[j * n + col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot * n + col] == T::zero() || !a[pivot * n + col].is_finite() {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] = a[col * n + k] / p;
            inv[col * n + k] = inv[col * n + k] / p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != T::zero() {
                    for k in 0..n {
                        a[r * n + k] = a[r * n + k] - f * a[col * n + k];
                        inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    rank(n, &[a, b])
}

/// Spin connection 1-forms `ω_ab`, `a < b`, coordinate legs.
///
/// Values are laid out as `[pair][μ]` with pairs in lexicographic order.
#[derive(Clone)]
pub struct SpinConnection<T> {
    dim: usize,
    signature: Vec<T>,
    support: Option<Arc<[(T, T)]>>,
    w: VecFn<T>,
}

/// Connection or curvature components at one point.
#[derive(Clone, PartialEq)]
pub struct AlgebraValued<T> {
    dim: usize,
    degree: usize,
    /// One form per `a < b` pair.
    forms: Vec<Form<T>>,
}

impl<T: fmt::Debug> fmt::Debug for AlgebraValued<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.forms).finish()
    }
}

impl<T: Real> AlgebraValued<T> {
    fn from_flat(dim: usize, degree: usize, flat: Vec<T>) -> Result<Self> {
        let per = binomial(dim, degree);
        let pairs = binomial(dim, 2);
        if flat.len() != per * pairs {
            return Err(Error::mismatch("algebra-valued form has wrong length"));
        }
        let forms = flat
            .chunks(per)
            .map(|c| Form::from_coeffs(dim, degree, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, degree, forms })
    }

    /// `X_ab` with antisymmetry applied: `X_ba = -X_ab`, `X_aa = 0`.
    pub fn get(&self, a: usize, b: usize) -> Form<T> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => self.forms[pair_index(self.dim, a, b)].clone(),
            Greater => self.forms[pair_index(self.dim, b, a)]
                .clone()
                .scale(-T::one()),
            Equal => Form::zero(self.dim, self.degree),
        }
    }

    pub fn max_abs(&self) -> T {
        self.forms.iter().fold(T::zero(), |m, f| m.max(f.max_abs()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl<T: Real> SpinConnection<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[T] {
        &self.signature
    }

    /// Connection from explicit `ω_ab` legs (flat layout `[pair][μ]`).
    pub fn from_fn(
        signature: &[i8],
        w: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            support: None,
            w: Arc::new(w),
        })
    }

    pub fn with_support(mut self, bounds: &[(T, T)]) -> Self {
        self.support = Some(bounds.into());
        self
    }

    fn flat(&self, x: &[T]) -> Result<Vec<T>> {
        let v = (self.w)(x)?;
        if v.len() != binomial(self.dim, 2) * self.dim {
            return Err(Error::mismatch(
                "connection returned wrong number of entries",
            ));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: x.iter().map(|c| c.as_f64()).collect(),
            });
        }
        Ok(v)
    }

    pub fn eval(&self, x: &[T]) -> Result<AlgebraValued<T>> {
        AlgebraValued::from_flat(self.dim, 1, self.flat(x)?)
    }
}

/// Torsion-free, metric-compatible connection of a coframe.
///
/// With `T_abc = η_ad (dθ^d)(E_b, E_c)` the frame components are
/// `ω_abc = ½ (T_abc + T_bca - T_cab)`, then `ω_ab,μ = ω_abc e^c_μ`.
pub fn spin_connection<T: Real>(cf: &CoFrame<T>) -> Result<SpinConnection<T>> {
    spin_connection_with(cf, Order::Four)
}

pub fn spin_connection_with<T: Real>(
    cf: &CoFrame<T>,
    stencil: impl Into<Stencil>,
) -> Result<SpinConnection<T>> {
    let stencil = stencil.into();
    let n = cf.dim;
    let frame = cf.clone();
    let w = move |x: &[T]| -> Result<Vec<T>> {
        let e = frame.matrix(x)?;
        let einv = invert(n, &e).ok_or_else(|| degenerate(x, "coframe is not invertible"))?;
        let f = |y: &[T]| frame.matrix(y);
        // de[λ][a*n+μ] = ∂_λ e^a_μ
        let de = (0..n)
            .map(|lam| partial_derivative_vec(&f, x, lam, stencil, frame.support()))
            .collect::<Result<Vec<_>>>()?;
        let half = T::lit(0.5);
        // t[a][b][c] = η_a (dθ^a)(E_b, E_c); E_b^μ = einv[μ*n+b]
        let mut t = vec![T::zero(); n * n * n];
        for a in 0..n {
            let mut dtheta = vec![T::zero(); n * n];
            for mu in 0..n {
                for nu in 0..n {
                    dtheta[mu * n + nu] = de[mu][a * n + nu] - de[nu][a * n + mu];
                }
            }
            for b in 0..n {
                for c in 0..n {
                    let mut s = T::zero();
                    for mu in 0..n {
                        for nu in 0..n {
                            s = s + einv[mu * n + b] * einv[nu * n + c] * dtheta[mu * n + nu];
                        }
                    }
                    t[(a * n + b) * n + c] = frame.signature[a] * s;
                }
            }
        }
        let tt = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];
        let mut out = Vec::with_capacity(binomial(n, 2) * n);
        for pair in multi_indices(n, 2) {
            let (a, b) = (pair[0], pair[1]);
            let wabc: Vec<T> = (0..n)
                .map(|c| half * (tt(a, b, c) + tt(b, c, a) - tt(c, a, b)))
                .collect();
            for mu in 0..n {
                out.push((0..n).map(|c| wabc[c] * e[c * n + mu]).sum());
            }
        }
        Ok(out)
    };
    Ok(SpinConnection {
        dim: n,
        signature: cf.signature.clone(),
        support: cf.support.clone(),
        w: Arc::new(w),
    })
}

/// Curvature 2-forms `Ω_ab`, `a < b`, coordinate components.
#[derive(Clone)]
pub struct Curvature<T> {
    dim: usize,
    signature: Vec<T>,
    omega: VecFn<T>,
}

impl<T: Real> Curvature<T> {
    /// Curvature from explicit components (flat layout `[pair][μν]`).
    pub fn from_fn(
        signature: &[i8],
        omega: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(Self {
            dim: signature.len(),
            signature: check_signature(signature)?,
            omega: Arc::new(omega),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[T] {
        &self.signature
    }

    pub fn eval(&self, x: &[T]) -> Result<AlgebraValued<T>> {
        let v = (self.omega)(x)?;
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: x.iter().map(|c| c.as_f64()).collect(),
            });
        }
        AlgebraValued::from_flat(self.dim, 2, v)
    }
}

/// `Ω_ab = dω_ab + η_cc ω_ac ∧ ω_cb`.
pub fn curvature<T: Real>(sc: &SpinConnection<T>) -> Result<Curvature<T>> {
    curvature_with(sc, Order::Four)
}

pub fn curvature_with<T: Real>(
    sc: &SpinConnection<T>,
    stencil: impl Into<Stencil>,
) -> Result<Curvature<T>> {
    let stencil = stencil.into();
    let n = sc.dim;
    let conn = sc.clone();
    let omega = move |x: &[T]| -> Result<Vec<T>> {
        let w = conn.eval(x)?;
        let f = |y: &[T]| conn.flat(y);
        let partials = (0..n)
            .map(|lam| partial_derivative_vec(&f, x, lam, stencil, conn.support.as_deref()))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::with_capacity(binomial(n, 2) * binomial(n, 2));
        for pair in multi_indices(n, 2) {
            let (a, b) = (pair[0], pair[1]);
            let p = pair_index(n, a, b);
            let mut omega_ab = Form::zero(n, 2);
            for mn in multi_indices(n, 2) {
                let (mu, nu) = (mn[0], mn[1]);
                // (dω)_μν = ∂_μ ω_ν - ∂_ν ω_μ
                omega_ab.set(&mn, partials[mu][p * n + nu] - partials[nu][p * n + mu]);
            }
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                let term = w.get(a, c).wedge(&w.get(c, b))?.scale(conn.signature[c]);
                omega_ab = omega_ab.add(&term)?;
            }
            out.extend_from_slice(omega_ab.coeffs());
        }
        Ok(out)
    };
    Ok(Curvature {
        dim: n,
        signature: sc.signature.clone(),
        omega: Arc::new(omega),
    })
}

/// Sup-norm of `dθ^a + ω^a_b ∧ θ^b` over all `a` at `x`.
pub fn torsion_residual<T: Real>(cf: &CoFrame<T>, sc: &SpinConnection<T>, x: &[T]) -> Result<T> {
    let n = cf.dim;
    let w = sc.eval(x)?;
    let e = cf.matrix(x)?;
    let mut worst = T::zero();
    for a in 0..n {
        let dtheta = crate::calculus::exterior_derivative(&cf.theta(a)?, x, Order::Four)?;
        let mut acc = dtheta;
        for b in 0..n {
            let theta_b = Form::from_coeffs(n, 1, e[b * n..(b + 1) * n].to_vec())?;
            let term = w.get(a, b).scale(cf.signature[a]).wedge(&theta_b)?;
            acc = acc.add(&term)?;
        }
        worst = worst.max(acc.max_abs());
    }
    Ok(worst)
}

/// Gaussian curvature of a 2D coframe: `Ω_12(E_1, E_2)`.
pub fn gaussian_curvature_from_coframe<T: Real>(cf: &CoFrame<T>, x: &[T]) -> Result<T> {
    if cf.dim != 2 {
        return Err(Error::mismatch("gaussian curvature needs a 2D coframe"));
    }
    let om = curvature(&spin_connection(cf)?)?.eval(x)?;
    let e = cf.matrix(x)?;
    let det = e[0] * e[3] - e[1] * e[2];
    if det.abs() < T::lit(DEGENERACY_THRESHOLD) {
        return Err(degenerate(x, "coframe is not invertible"));
    }
    Ok(om.get(0, 1).coeffs()[0] / det)
}

/// Gaussian curvature of a 2D Riemannian metric at `x`.
pub fn gaussian_curvature_2d<T: Real>(m: &MetricSpec<T>, x: &[T]) -> Result<T> {
    if m.dim != 2 {
        return Err(Error::mismatch("gaussian_curvature_2d needs a 2D metric"));
    }
    if !m.is_riemannian() {
        return Err(Error::invalid(
            "gaussian_curvature_2d needs a Riemannian metric",
        ));
    }
    gaussian_curvature_from_coframe(&coframe_from_metric(m)?, x)
}
