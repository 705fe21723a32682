//! Topological invariants of classical configurations.
//!
//! The pipeline runs metric → coframe → spin connection → curvature for
//! geometric configurations and potential → field strength for U(1) gauge
//! fields, integrates Euler, Chern and Pontrjagin densities with
//! deterministic tensor Gauss–Legendre quadrature, and solves the
//! integrality condition `f(p) = n` for one free parameter.
//!
//! Everything numerical is generic over [`real::Real`] (`f64` and `f32`);
//! the aliases below fix the scalar for the common cases.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod charclass;
pub mod configurations;
pub mod error;
pub mod frame;
pub mod gauge;
pub mod jacobi;
pub mod real;
pub mod spectrum;

pub use error::{Error, Result};
pub use real::Real;

pub type Chart64 = calculus::Chart<f64>;
pub type Chart32 = calculus::Chart<f32>;
pub type Form64 = calculus::Form<f64>;
pub type Form32 = calculus::Form<f32>;
pub type PFormField64 = calculus::PFormField<f64>;
pub type PFormField32 = calculus::PFormField<f32>;
pub type Integral64 = calculus::Integral<f64>;
pub type Integral32 = calculus::Integral<f32>;
pub type MetricSpec64 = frame::MetricSpec<f64>;
pub type MetricSpec32 = frame::MetricSpec<f32>;
pub type CoFrame64 = frame::CoFrame<f64>;
pub type CoFrame32 = frame::CoFrame<f32>;
pub type SpinConnection64 = frame::SpinConnection<f64>;
pub type SpinConnection32 = frame::SpinConnection<f32>;
pub type Curvature64 = frame::Curvature<f64>;
pub type Curvature32 = frame::Curvature<f32>;
pub type GaugeConnection64 = gauge::GaugeConnection<f64>;
pub type GaugeConnection32 = gauge::GaugeConnection<f32>;
pub type FieldStrength64 = gauge::FieldStrength<f64>;
pub type FieldStrength32 = gauge::FieldStrength<f32>;
pub type ClassDensity64 = charclass::ClassDensity<f64>;
pub type ClassDensity32 = charclass::ClassDensity<f32>;
pub type CycleSpec64 = charclass::CycleSpec<f64>;
pub type CycleSpec32 = charclass::CycleSpec<f32>;
pub type Configuration64 = configurations::ConfigurationDescriptor<f64>;
pub type Configuration32 = configurations::ConfigurationDescriptor<f32>;
pub type BlackHoleParams64 = configurations::BlackHoleParams<f64>;
pub type SpectrumProblem64 = spectrum::SpectrumProblem<f64>;
pub type SpectrumTable64 = spectrum::SpectrumTable<f64>;
