//! U(1) connections on one or two charts and their field strengths.
//!
//! Potentials are real 1-forms (the `i` of the Lie algebra is absorbed)
//! and physical constants are set to one.

use crate::calculus::{
    exterior_derivative, exterior_derivative_field, Chart, Order, PFormField, Stencil,
};
use crate::error::{Error, Result};
use crate::real::Real;

/// Residual below which a transition function is accepted.
pub const TRANSITION_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct GaugePatch<T> {
    pub name: String,
    pub chart: Chart<T>,
    pub potential: PFormField<T>,
}

/// Pure-gauge relation `A_first - A_second = dλ` on an overlap.
#[derive(Clone, Debug)]
pub struct Transition<T> {
    pub name: String,
    pub overlap: Chart<T>,
    pub lambda: PFormField<T>,
}

#[derive(Clone, Debug)]
pub struct GaugeConnection<T> {
    patches: Vec<GaugePatch<T>>,
    transition: Option<Transition<T>>,
}

impl<T: Real> GaugeConnection<T> {
    pub fn single(
        name: impl Into<String>,
        chart: Chart<T>,
        potential: PFormField<T>,
    ) -> Result<Self> {
        let patch = GaugePatch {
            name: name.into(),
            chart,
            potential,
        };
        check_patch(&patch)?;
        Ok(Self {
            patches: vec![patch],
            transition: None,
        })
    }

    pub fn two_chart(
        first: GaugePatch<T>,
        second: GaugePatch<T>,
        transition: Transition<T>,
    ) -> Result<Self> {
        check_patch(&first)?;
        check_patch(&second)?;
        if transition.lambda.degree() != 0 || transition.lambda.dim() != first.chart.dim() {
            return Err(Error::mismatch(
                "transition function must be a scalar on the overlap",
            ));
        }
        if transition.overlap.dim() != first.chart.dim() {
            return Err(Error::mismatch(
                "overlap chart dimension differs from the patches",
            ));
        }
        Ok(Self {
            patches: vec![first, second],
            transition: Some(transition),
        })
    }

    pub fn patches(&self) -> &[GaugePatch<T>] {
        &self.patches
    }

    pub fn transition(&self) -> Option<&Transition<T>> {
        self.transition.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.patches[0].chart.dim()
    }

    /// `A → A + dχ` on every patch; the transition is unchanged.
    pub fn gauge_transformed(&self, chi: &PFormField<T>) -> Result<Self> {
        if chi.degree() != 0 || chi.dim() != self.dim() {
            return Err(Error::mismatch("gauge parameter must be a scalar field"));
        }
        let dchi = exterior_derivative_field(chi, Stencil::fine())?;
        let patches = self
            .patches
            .iter()
            .map(|p| {
                Ok(GaugePatch {
                    name: p.name.clone(),
                    chart: p.chart.clone(),
                    potential: p.potential.plus(&dchi)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            patches,
            transition: self.transition.clone(),
        })
    }
}

fn check_patch<T: Real>(p: &GaugePatch<T>) -> Result<()> {
    if p.potential.degree() != 1 || p.potential.dim() != p.chart.dim() {
        return Err(Error::mismatch(format!(
            "potential on patch `{}` must be a 1-form on its chart",
            p.name
        )));
    }
    Ok(())
}

/// `F = dA` on every patch of a connection.
#[derive(Clone, Debug)]
pub struct FieldStrength<T> {
    patches: Vec<(String, Chart<T>, PFormField<T>)>,
}

impl<T: Real> FieldStrength<T> {
    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn field(&self, patch: usize) -> &PFormField<T> {
        &self.patches[patch].2
    }

    pub fn chart(&self, patch: usize) -> &Chart<T> {
        &self.patches[patch].1
    }

    pub fn name(&self, patch: usize) -> &str {
        &self.patches[patch].0
    }

    /// Field strength directly from a 2-form (no potential).
    pub fn from_field(name: impl Into<String>, chart: Chart<T>, f: PFormField<T>) -> Result<Self> {
        if f.degree() != 2 || f.dim() != chart.dim() {
            return Err(Error::mismatch(
                "field strength must be a 2-form on its chart",
            ));
        }
        Ok(Self {
            patches: vec![(name.into(), chart, f)],
        })
    }

    /// Sup-norm of `dF` at `x` on the given patch.
    pub fn closure_residual(&self, patch: usize, x: &[T]) -> Result<T> {
        let f = self.field(patch);
        if f.dim() < 3 {
            return Ok(T::zero());
        }
        Ok(exterior_derivative(f, x, Order::Four)?.max_abs())
    }
}

pub fn field_strength<T: Real>(a: &GaugeConnection<T>) -> Result<FieldStrength<T>> {
    let patches = a
        .patches
        .iter()
        .map(|p| {
            let f = exterior_derivative_field(&p.potential, Stencil::fine())?;
            Ok((p.name.clone(), p.chart.clone(), f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldStrength { patches })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionReport {
    pub samples: usize,
    pub max_residual: f64,
    pub pass: bool,
}

/// Halton point `i` in the unit cube (bases 2, 3, 5, 7, ...).
pub(crate) fn halton(i: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..dim)
        .map(|d| {
            let base = PRIMES[d % PRIMES.len()];
            let (mut f, mut r, mut k) = (1.0, 0.0, i + 1);
            while k > 0 {
                f /= base as f64;
                r += f * (k % base) as f64;
                k /= base;
            }
            r
        })
        .collect()
}

/// Deterministic sample points strictly inside a chart (region honoured).
pub fn sample_points<T: Real>(chart: &Chart<T>, count: usize) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    // inset keeps samples off the faces
    let inset = 0.02;
    while out.len() < count && i < count * 64 {
        let u = halton(i, chart.dim());
        i += 1;
        let p: Vec<T> = u
            .iter()
            .zip(chart.bounds())
            .map(|(&s, &(lo, hi))| lo + (hi - lo) * T::lit(inset + (1.0 - 2.0 * inset) * s))
            .collect();
        if chart.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Checks `A_first - A_second - dλ ≈ 0` on `samples` overlap points.
pub fn verify_transition<T: Real>(
    a: &GaugeConnection<T>,
    samples: usize,
) -> Result<TransitionReport> {
    let tr = a.transition.as_ref().ok_or(Error::MissingTransition)?;
    let (first, second) = (&a.patches[0], &a.patches[1]);
    let lambda = tr.lambda.clone().with_support(tr.overlap.bounds());
    let points = sample_points(&tr.overlap, samples);
    if points.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut worst = 0.0f64;
    for x in &points {
        let an = first.potential.eval(x)?;
        let as_ = second.potential.eval(x)?;
        let dl = exterior_derivative(&lambda, x, Stencil::fine())?;
        let r = an.sub(&as_)?.sub(&dl)?;
        worst = worst.max(r.max_abs().as_f64());
    }
    Ok(TransitionReport {
        samples: points.len(),
        max_residual: worst,
        pass: worst < TRANSITION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn monopole(g: f64, lambda_slope: f64) -> GaugeConnection<f64> {
        let north = GaugePatch {
            name: "north".into(),
            chart: Chart::new(vec![(0.0, 2.0 * PI / 3.0), (0.0, 2.0 * PI)]).unwrap(),
            potential: PFormField::from_fn(2, 1, move |x: &[f64]| {
                vec![0.0, g * (1.0 - x[0].cos())]
            })
            .unwrap(),
        };
        let south = GaugePatch {
            name: "south".into(),
            chart: Chart::new(vec![(PI / 3.0, PI), (0.0, 2.0 * PI)]).unwrap(),
            potential: PFormField::from_fn(2, 1, move |x: &[f64]| {
                vec![0.0, -g * (1.0 + x[0].cos())]
            })
            .unwrap(),
        };
        let tr = Transition {
            name: "equator".into(),
            overlap: Chart::new(vec![(PI / 3.0, 2.0 * PI / 3.0), (0.0, 2.0 * PI)]).unwrap(),
            lambda: PFormField::scalar(2, move |x: &[f64]| lambda_slope * x[1]).unwrap(),
        };
        GaugeConnection::two_chart(north, south, tr).unwrap()
    }

    #[test]
    fn zero_potential_zero_field() {
        let chart = Chart::new(vec![(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]).unwrap();
        let a = GaugeConnection::single(
            "flat",
            chart,
            PFormField::from_fn(3, 1, |_| vec![0.0; 3]).unwrap(),
        )
        .unwrap();
        let f = field_strength(&a).unwrap();
        assert_eq!(f.field(0).eval(&[0.5, 0.5, 0.5]).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn monopole_field_strength() {
        let a = monopole(0.5, 1.0);
        let f = field_strength(&a).unwrap();
        for &th in &[0.4, PI / 2.0, 1.9] {
            let v = f.field(0).eval(&[th, 1.0]).unwrap().coeffs()[0];
            assert_abs_diff_eq!(v, 0.5 * th.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn reissner_nordstrom_field_strength() {
        let e = 0.6;
        let chart = Chart::new(vec![(0.0, 10.0), (0.1, 5.0)]).unwrap();
        let a = GaugeConnection::single(
            "rn",
            chart,
            PFormField::from_fn(2, 1, move |x: &[f64]| vec![-e / x[1], 0.0]).unwrap(),
        )
        .unwrap();
        let f = field_strength(&a).unwrap();
        for &r in &[0.2, 1.0, 1.8] {
            // coefficient on (t, r); F_rt = -F_tr
            let ftr = f.field(0).eval(&[1.0, r]).unwrap().coeffs()[0];
            assert_abs_diff_eq!(-ftr, e / (r * r), epsilon = 1e-8);
        }
    }

    #[test]
    fn monopole_transition_passes() {
        let rep = verify_transition(&monopole(0.5, 1.0), 200).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.samples, 200);
    }

    #[test]
    fn corrupted_transition_fails_with_corruption_size() {
        let rep = verify_transition(&monopole(0.5, 1.0 + 0.01), 50).unwrap();
        assert!(!rep.pass);
        assert_abs_diff_eq!(rep.max_residual, 0.01, epsilon = 1e-8);
    }

    #[test]
    fn identical_charts_have_zero_residual() {
        let chart = Chart::new(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let pot = PFormField::from_fn(2, 1, |x: &[f64]| vec![x[1], x[0] * x[0]]).unwrap();
        let p = |n: &str| GaugePatch {
            name: n.into(),
            chart: chart.clone(),
            potential: pot.clone(),
        };
        let tr = Transition {
            name: "all".into(),
            overlap: chart.clone(),
            lambda: PFormField::scalar(2, |_| 0.0).unwrap(),
        };
        let a = GaugeConnection::two_chart(p("a"), p("b"), tr).unwrap();
        let rep = verify_transition(&a, 20).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn single_chart_has_no_transition() {
        let chart = Chart::new(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let a = GaugeConnection::single(
            "x",
            chart,
            PFormField::from_fn(2, 1, |_| vec![0.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            verify_transition(&a, 10).unwrap_err(),
            Error::MissingTransition
        );
    }

    #[test]
    fn gauge_transformation_leaves_field_unchanged() {
        let a = monopole(1.5, 3.0);
        let chi = PFormField::scalar(2, |x: &[f64]| {
            (x[0] * 1.3).sin() * x[1].cos() + 0.2 * x[0] * x[1]
        })
        .unwrap();
        let b = a.gauge_transformed(&chi).unwrap();
        let fa = field_strength(&a).unwrap();
        let fb = field_strength(&b).unwrap();
        for x in sample_points(&a.patches()[0].chart, 30) {
            let d = fa
                .field(0)
                .eval(&x)
                .unwrap()
                .sub(&fb.field(0).eval(&x).unwrap())
                .unwrap();
            assert!(d.max_abs() < 1e-6);
        }
        assert!(verify_transition(&b, 50).unwrap().pass);
    }

    #[test]
    fn bianchi_identity_in_three_dimensions() {
        let chart = Chart::new(vec![(-1.0, 1.0); 3]).unwrap();
        let pot = PFormField::from_fn(3, 1, |x: &[f64]| {
            vec![x[1] * x[2].sin(), x[0] * x[0] * x[2], (x[0] + x[1]).cos()]
        })
        .unwrap();
        let a = GaugeConnection::single("box", chart.clone(), pot).unwrap();
        let f = field_strength(&a).unwrap();
        for x in sample_points(&chart, 20) {
            assert!(f.closure_residual(0, &x).unwrap() < 1e-6);
        }
    }

    #[test]
    fn halton_points_fill_the_box() {
        let chart = Chart::new(vec![(2.0, 3.0), (-1.0, 0.0)]).unwrap();
        let pts = sample_points(&chart, 100);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| chart.contains(p)));
    }
}
