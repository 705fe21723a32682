//! Central finite differences and the exterior derivative.

use crate::error::{Error, Result};
use crate::real::Real;

use super::forms::{multi_indices, rank, Form, PFormField};

/// Accuracy order of a central stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Order {
    Two,
    #[default]
    Four,
    Six,
}

impl Order {
    fn half_width(self) -> usize {
        match self {
            Order::Two => 1,
            Order::Four => 2,
            Order::Six => 3,
        }
    }

    fn base_step<T: Real>(self) -> T {
        match self {
            Order::Two => T::lit(T::STEP_ORDER2),
            Order::Four => T::lit(T::STEP_ORDER4),
            Order::Six => T::lit(T::STEP_ORDER6),
        }
    }
}

/// Stencil order plus a multiplier on the type's base step.
///
/// The default order-4 step balances truncation against roundoff for
/// curvature computed from a numerically differentiated connection, close
/// to a degeneracy wall as well. [`Stencil::fine`] is used for single
/// derivatives of gauge potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub order: Order,
    pub scale: f64,
}

impl Stencil {
    pub const fn new(order: Order) -> Self {
        Self { order, scale: 1.0 }
    }

    pub const fn fine() -> Self {
        Self {
            order: Order::Four,
            scale: 0.8,
        }
    }
}

impl Default for Stencil {
    fn default() -> Self {
        Self::new(Order::Four)
    }
}

impl From<Order> for Stencil {
    fn from(order: Order) -> Self {
        Self::new(order)
    }
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            2 => Ok(Order::Two),
            4 => Ok(Order::Four),
            6 => Ok(Order::Six),
            _ => Err(Error::invalid(format!(
                "stencil order must be 2, 4 or 6, got {v}"
            ))),
        }
    }
}

/// Step for differentiating along `axis` at `x`.
///
/// The base step is relative, `base * max(1, |x_axis|)`. Inside a support
/// box the stencil is additionally kept within half the distance to the
/// nearest face along that axis, so one nested derivative still stays
/// inside the box.
pub fn step<T: Real>(
    x: &[T],
    axis: usize,
    stencil: impl Into<Stencil>,
    support: Option<&[(T, T)]>,
) -> T {
    let stencil = stencil.into();
    let order = stencil.order;
    let base = order.base_step::<T>() * T::lit(stencil.scale);
    let mut h = base * x[axis].abs().max(T::one());
    if let Some(bounds) = support {
        let (lo, hi) = bounds[axis];
        let dist = (x[axis] - lo).min(hi - x[axis]);
        if dist > T::zero() {
            let limit = dist / T::from_usize_lossy(2 * order.half_width());
            let floor = base * T::lit(1e-3);
            h = h.min(limit.max(floor));
        }
    }
    h
}

/// Partial derivative of a vector-valued function along one axis.
pub fn partial_derivative_vec<T: Real>(
    f: &dyn Fn(&[T]) -> Result<Vec<T>>,
    x: &[T],
    axis: usize,
    stencil: impl Into<Stencil>,
    support: Option<&[(T, T)]>,
) -> Result<Vec<T>> {
    let stencil = stencil.into();
    if axis >= x.len() {
        return Err(Error::mismatch(format!(
            "axis {axis} out of range for a {}-dimensional point",
            x.len()
        )));
    }
    let h = step(x, axis, stencil, support);
    let mut p = x.to_vec();
    let mut eval_at = |offset: T| -> Result<Vec<T>> {
        p[axis] = x[axis] + offset;
        let v = f(&p)?;
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: p.iter().map(|c| c.as_f64()).collect(),
            });
        }
        Ok(v)
    };
    let two = T::lit(2.0);
    match stencil.order {
        Order::Two => {
            let fp = eval_at(h)?;
            let fm = eval_at(-h)?;
            Ok(fp
                .iter()
                .zip(&fm)
                .map(|(&a, &b)| (a - b) / (two * h))
                .collect())
        }
        Order::Four => {
            let f1 = eval_at(h)?;
            let fm1 = eval_at(-h)?;
            let f2 = eval_at(two * h)?;
            let fm2 = eval_at(-two * h)?;
            let eight = T::lit(8.0);
            let twelve_h = T::lit(12.0) * h;
            Ok((0..f1.len())
                .map(|i| (eight * (f1[i] - fm1[i]) - (f2[i] - fm2[i])) / twelve_h)
                .collect())
        }
        Order::Six => {
            let three = T::lit(3.0);
            let f1 = eval_at(h)?;
            let fm1 = eval_at(-h)?;
            let f2 = eval_at(two * h)?;
            let fm2 = eval_at(-two * h)?;
            let f3 = eval_at(three * h)?;
            let fm3 = eval_at(-three * h)?;
            let (c1, c2) = (T::lit(45.0), T::lit(9.0));
            let sixty_h = T::lit(60.0) * h;
            Ok((0..f1.len())
                .map(|i| {
                    (c1 * (f1[i] - fm1[i]) - c2 * (f2[i] - fm2[i]) + (f3[i] - fm3[i])) / sixty_h
                })
                .collect())
        }
    }
}

/// Central finite-difference partial derivative of a scalar function.
pub fn partial_derivative<T: Real>(
    f: impl Fn(&[T]) -> T,
    x: &[T],
    axis: usize,
    order: Order,
) -> Result<T> {
    let g = |p: &[T]| Ok(vec![f(p)]);
    Ok(partial_derivative_vec(&g, x, axis, order, None)?[0])
}

/// Components of `dw` at `x`.
pub fn exterior_derivative<T: Real>(
    w: &PFormField<T>,
    x: &[T],
    stencil: impl Into<Stencil>,
) -> Result<Form<T>> {
    let stencil = stencil.into();
    let dim = w.dim();
    let p = w.degree();
    if p >= dim {
        return Err(Error::DegreeOverflow { p, q: 1, dim });
    }
    let f = |y: &[T]| w.components(y);
    let partials = (0..dim)
        .map(|axis| partial_derivative_vec(&f, x, axis, stencil, w.support()))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Form::zero(dim, p + 1);
    let mut face = Vec::with_capacity(p);
    for k in multi_indices(dim, p + 1) {
        let mut acc = T::zero();
        for (i, &axis) in k.iter().enumerate() {
            face.clear();
            face.extend(
                k.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &c)| c),
            );
            let term = partials[axis][rank(dim, &face)];
            acc = if i % 2 == 0 { acc + term } else { acc - term };
        }
        out.set(&k, acc);
    }
    Ok(out)
}

/// The field `dw` with the same support as `w`.
pub fn exterior_derivative_field<T: Real>(
    w: &PFormField<T>,
    stencil: impl Into<Stencil>,
) -> Result<PFormField<T>> {
    let stencil = stencil.into();
    if w.degree() >= w.dim() {
        return Err(Error::DegreeOverflow {
            p: w.degree(),
            q: 1,
            dim: w.dim(),
        });
    }
    let inner = w.clone();
    Ok(PFormField::new(w.dim(), w.degree() + 1, move |x| {
        exterior_derivative(&inner, x, stencil).map(Form::into_coeffs)
    })?
    .with_support_opt(w.support_arc()))
}
