//! Charts, differential forms, finite differences and quadrature.

mod chart;
mod diff;
mod forms;
mod quadrature;

pub use chart::{Chart, Region};
pub use diff::{
    exterior_derivative, exterior_derivative_field, partial_derivative, partial_derivative_vec,
    step, Order, Stencil,
};
pub use forms::{binomial, canonical, multi_indices, rank, wedge, Form, PFormField};
pub use quadrature::{
    gauss_legendre, integrate, integrate_scalar, Integral, QuadratureSpec, Scheme, THREADS_ENV,
};
