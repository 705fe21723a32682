use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;

/// Predicate restricting a chart's coordinate box.
pub type Region<T> = Arc<dyn Fn(&[T]) -> bool + Send + Sync>;

/// Coordinate box with an optional region predicate and an orientation.
///
/// `orientation` lists the axes in the order that defines the positive
/// volume element; the identity ordering is the default.
#[derive(Clone)]
pub struct Chart<T> {
    bounds: Vec<(T, T)>,
    region: Option<Region<T>>,
    orientation: Vec<usize>,
}

impl<T: Real> Chart<T> {
    pub fn new(bounds: Vec<(T, T)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::invalid("chart needs at least one axis"));
        }
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!(
                    "axis {axis}: interval [{lo}, {hi}] must satisfy lower < upper"
                )));
            }
        }
        let orientation = (0..bounds.len()).collect();
        Ok(Self {
            bounds,
            region: None,
            orientation,
        })
    }

    pub fn with_region(mut self, region: impl Fn(&[T]) -> bool + Send + Sync + 'static) -> Self {
        self.region = Some(Arc::new(region));
        self
    }

    /// Sets the axis ordering of the positive volume element.
    pub fn with_orientation(mut self, order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.dim()];
        if order.len() != self.dim() {
            return Err(Error::mismatch("orientation must list every axis once"));
        }
        for &a in &order {
            if a >= self.dim() || seen[a] {
                return Err(Error::mismatch("orientation must list every axis once"));
            }
            seen[a] = true;
        }
        self.orientation = order;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(T, T)] {
        &self.bounds
    }

    pub fn region(&self) -> Option<&Region<T>> {
        self.region.as_ref()
    }

    pub fn orientation(&self) -> &[usize] {
        &self.orientation
    }

    /// +1 or -1 according to the parity of the orientation permutation.
    pub fn orientation_sign(&self) -> T {
        if permutation_parity(&self.orientation) {
            -T::one()
        } else {
            T::one()
        }
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.bounds)
                .all(|(&v, &(lo, hi))| v >= lo && v <= hi)
            && self.region.as_ref().is_none_or(|r| r(x))
    }

    /// Midpoint of the coordinate box.
    pub fn center(&self) -> Vec<T> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| (lo + hi) / T::lit(2.0))
            .collect()
    }
}

impl<T: fmt::Debug> fmt::Debug for Chart<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("bounds", &self.bounds)
            .field("region", &self.region.is_some())
            .field("orientation", &self.orientation)
            .finish()
    }
}

/// `true` for odd permutations.
pub(crate) fn permutation_parity(perm: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                odd = !odd;
            }
        }
    }
    odd
}
