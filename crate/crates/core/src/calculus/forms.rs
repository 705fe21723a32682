//! Differential forms with components on strictly increasing multi-indices.
//!
//! Components of a `p`-form on an `n`-dimensional chart are stored in
//! lexicographic order of the index sets `i_1 < ... < i_p`, so a form
//! has exactly `binomial(n, p)` coefficients.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;

use super::chart::permutation_parity;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All strictly increasing index sets of length `p` drawn from `0..dim`.
pub fn multi_indices(dim: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=(dim - left) {
            cur.push(i);
            rec(i + 1, dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(dim, p));
    if p <= dim {
        rec(0, dim, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

/// Position of a strictly increasing index set in lexicographic order.
pub fn rank(dim: usize, indices: &[usize]) -> usize {
    let p = indices.len();
    let mut r = 0;
    let mut prev = 0;
    for (i, &c) in indices.iter().enumerate() {
        for j in prev..c {
            r += binomial(dim - 1 - j, p - 1 - i);
        }
        prev = c + 1;
    }
    r
}

/// Sorts an index list, returning `None` on repeats and otherwise the
/// sorted list with the sign of the sorting permutation.
pub fn canonical(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, permutation_parity(indices)))
}

/// Pointwise value of a `p`-form.
#[derive(Clone, PartialEq)]
pub struct Form<T> {
    dim: usize,
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Real> Form<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: vec![T::zero(); binomial(dim, degree)],
        }
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<T>) -> Result<Self> {
        if degree > dim {
            return Err(Error::mismatch(format!(
                "degree {degree} exceeds dimension {dim}"
            )));
        }
        if coeffs.len() != binomial(dim, degree) {
            return Err(Error::mismatch(format!(
                "{degree}-form on {dim} axes needs {} coefficients, got {}",
                binomial(dim, degree),
                coeffs.len()
            )));
        }
        Ok(Self {
            dim,
            degree,
            coeffs,
        })
    }

    /// The basis 1-form `dx^axis`.
    pub fn basis1(dim: usize, axis: usize) -> Self {
        let mut f = Self::zero(dim, 1);
        f.coeffs[axis] = T::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Component on an arbitrary index list, antisymmetry applied.
    pub fn get(&self, indices: &[usize]) -> T {
        debug_assert_eq!(indices.len(), self.degree);
        match canonical(indices) {
            None => T::zero(),
            Some((sorted, odd)) => {
                let v = self.coeffs[rank(self.dim, &sorted)];
                if odd {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Sets the component on a strictly increasing index set.
    pub fn set(&mut self, indices: &[usize], value: T) {
        let r = rank(self.dim, indices);
        self.coeffs[r] = value;
    }

    pub fn scale(mut self, s: T) -> Self {
        for c in &mut self.coeffs {
            *c = *c * s;
        }
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.clone().scale(-T::one()))
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, &c| m.max(c.abs()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::mismatch(format!(
                "cannot combine a {}-form on {} axes with a {}-form on {} axes",
                self.degree, self.dim, other.degree, other.dim
            )));
        }
        Ok(())
    }

    /// Exterior product.
    ///
    /// Each output coefficient is a sum over the ways of splitting its index
    /// set between the two factors. Terms are summed in an order that depends
    /// only on the split, not on which factor comes first, so
    /// `u ^ v == (-1)^(pq) v ^ u` holds bit for bit.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::mismatch("wedge factors live on different charts"));
        }
        let (p, q, dim) = (self.degree, other.degree, self.dim);
        if p + q > dim {
            return Err(Error::DegreeOverflow { p, q, dim });
        }
        let n = p + q;
        let full: usize = (1 << n) - 1;
        let mut out = Self::zero(dim, n);
        let mut terms: Vec<(usize, T)> = Vec::with_capacity(1 << n);
        let mut left = Vec::with_capacity(p);
        let mut right = Vec::with_capacity(q);
        let mut order = Vec::with_capacity(n);
        for (slot, k) in multi_indices(dim, n).iter().enumerate() {
            terms.clear();
            for mask in 0..=full {
                if (mask as u32).count_ones() as usize != p {
                    continue;
                }
                left.clear();
                right.clear();
                for (pos, &idx) in k.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(idx);
                    } else {
                        right.push(idx);
                    }
                }
                let a = self.coeffs[rank(dim, &left)];
                let b = other.coeffs[rank(dim, &right)];
                order.clear();
                order.extend_from_slice(&left);
                order.extend_from_slice(&right);
                let term = if permutation_parity(&order) {
                    -(a * b)
                } else {
                    a * b
                };
                // Split key: mask of whichever part holds the lowest index.
                let key = if mask & 1 != 0 { mask } else { full & !mask };
                terms.push((key, term));
            }
            terms.sort_unstable_by_key(|&(key, _)| key);
            out.coeffs[slot] = terms.iter().fold(T::zero(), |s, &(_, t)| s + t);
        }
        Ok(out)
    }
}

impl<T: fmt::Debug> fmt::Debug for Form<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Form(dim={}, p={}, {:?})",
            self.dim, self.degree, self.coeffs
        )
    }
}

type FormFn<T> = dyn Fn(&[T]) -> Result<Vec<T>> + Send + Sync;

/// A `p`-form field: a pure function from points to component arrays.
///
/// `support` is the coordinate box the field is known to be smooth on.
/// Finite-difference stencils shrink near its faces so that nested
/// derivatives never sample outside it.
#[derive(Clone)]
pub struct PFormField<T> {
    dim: usize,
    degree: usize,
    support: Option<Arc<[(T, T)]>>,
    eval: Arc<FormFn<T>>,
}

impl<T: Real> PFormField<T> {
    pub fn new(
        dim: usize,
        degree: usize,
        eval: impl Fn(&[T]) -> Result<Vec<T>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if degree > dim || dim == 0 {
            return Err(Error::mismatch(format!(
                "degree {degree} invalid on {dim} axes"
            )));
        }
        Ok(Self {
            dim,
            degree,
            support: None,
            eval: Arc::new(eval),
        })
    }

    /// Infallible component function.
    pub fn from_fn(
        dim: usize,
        degree: usize,
        f: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(dim, degree, move |x| Ok(f(x)))
    }

    /// A scalar (0-form) field.
    pub fn scalar(dim: usize, f: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Result<Self> {
        Self::from_fn(dim, 0, move |x| vec![f(x)])
    }

    pub fn with_support(mut self, bounds: &[(T, T)]) -> Self {
        self.support = Some(bounds.into());
        self
    }

    pub(crate) fn with_support_opt(mut self, support: Option<Arc<[(T, T)]>>) -> Self {
        self.support = support;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn support(&self) -> Option<&[(T, T)]> {
        self.support.as_deref()
    }

    pub(crate) fn support_arc(&self) -> Option<Arc<[(T, T)]>> {
        self.support.clone()
    }

    /// Evaluates the raw component vector, checking length and finiteness.
    pub fn components(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim {
            return Err(Error::mismatch(format!(
                "point has {} coordinates, field lives on {} axes",
                x.len(),
                self.dim
            )));
        }
        let v = (self.eval)(x)?;
        if v.len() != binomial(self.dim, self.degree) {
            return Err(Error::mismatch(format!(
                "field returned {} components, expected {}",
                v.len(),
                binomial(self.dim, self.degree)
            )));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteEvaluation {
                point: x.iter().map(|c| c.as_f64()).collect(),
            });
        }
        Ok(v)
    }

    pub fn eval(&self, x: &[T]) -> Result<Form<T>> {
        let coeffs = self.components(x)?;
        Ok(Form {
            dim: self.dim,
            degree: self.degree,
            coeffs,
        })
    }

    /// Pointwise image under a component map, keeping degree and support.
    pub fn map(&self, f: impl Fn(Vec<T>) -> Vec<T> + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Self {
            dim: self.dim,
            degree: self.degree,
            support: self.support.clone(),
            eval: Arc::new(move |x| inner.components(x).map(&f)),
        }
    }

    /// Pointwise sum of two fields of equal shape.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(Error::mismatch("cannot add fields of different shape"));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Self {
            dim: self.dim,
            degree: self.degree,
            support: self.support.clone().or_else(|| other.support.clone()),
            eval: Arc::new(move |x| {
                let u = a.components(x)?;
                let v = b.components(x)?;
                Ok(u.into_iter().zip(v).map(|(p, q)| p + q).collect())
            }),
        })
    }
}

impl<T: fmt::Debug> fmt::Debug for PFormField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PFormField")
            .field("dim", &self.dim)
            .field("degree", &self.degree)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

/// Exterior product of two pointwise forms.
pub fn wedge<T: Real>(u: &Form<T>, v: &Form<T>) -> Result<Form<T>> {
    u.wedge(v)
}
