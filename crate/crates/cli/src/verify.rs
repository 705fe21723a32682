//! The built-in oracle suite behind `topospec verify`.
//!
//! Every check pairs a numerical pipeline with an analytic value and
//! prints one PASS/FAIL line with its residual. Informational lines
//! (INFO) report quantities that have no verified closed form.

use std::f64::consts::PI;
use std::time::Instant;

use topospec_core::calculus::{
    exterior_derivative, exterior_derivative_field, Chart, Order, PFormField, QuadratureSpec,
    Stencil,
};
use topospec_core::charclass::{chern1_density_on, integrate_class, ClassKind, Domain};
use topospec_core::configurations::{
    build, bundle_dimension, flat_config, kerr_newman_config, monopole_config, oscillator_config,
    reissner_nordstrom_config, rn_chern_closed_form, sphere_config, BlackHoleParams,
    ConfigurationDescriptor,
};
use topospec_core::frame::{coframe_from_metric, spin_connection, torsion_residual};
use topospec_core::gauge::{field_strength, sample_points, verify_transition};
use topospec_core::spectrum::{
    area_spectrum, horizon_area, oscillator_closed_form, oscillator_invariant_normalized_with,
    rn_chern_invariant_with, solve_spectrum, Sample, SpectrumProblem,
};
use topospec_core::{Error as CoreError, Result};

use crate::error::{EXIT_FLAGGED, EXIT_VERIFY_FAILED};
use crate::output::c_exp;

type ConfigCase = (&'static str, fn() -> Result<ConfigurationDescriptor<f64>>);
type DimCase = (&'static str, &'static [(&'static str, f64)], usize);

/// Random-point count for pointwise residual checks.
const SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// A quadrature inside this check missed its tolerance.
    pub no_convergence: bool,
    pub seconds: f64,
}

impl Check {
    pub fn line(&self) -> String {
        let nc = if self.no_convergence {
            " [NoConvergence]"
        } else {
            ""
        };
        format!(
            "{}  {}: {}{nc} ({:.2} s)",
            self.status.label(),
            self.name,
            self.detail,
            self.seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count()
    }

    pub fn graded(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status != Status::Info)
            .count()
    }

    pub fn summary(&self) -> String {
        format!("verify: {}/{} passed", self.passed(), self.graded())
    }

    /// 0 when everything passes, 2 when any quadrature was flagged as
    /// unconverged, 14 for other failures.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.no_convergence) {
            EXIT_FLAGGED
        } else if self.passed() == self.graded() {
            0
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}

/// Knobs of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Overrides `points_per_axis` of every quadrature in the suite.
    pub points_per_axis: Option<usize>,
    /// Overrides `refinement_levels` of every quadrature in the suite.
    pub refinement_levels: Option<usize>,
    /// Negative control: negates the Euler integrals.
    pub inject_euler_sign_flip: bool,
}

impl VerifyOptions {
    /// `base` with the overrides applied.
    pub fn quadrature(&self, base: QuadratureSpec) -> QuadratureSpec {
        QuadratureSpec {
            points_per_axis: self.points_per_axis.unwrap_or(base.points_per_axis),
            refinement_levels: self.refinement_levels.unwrap_or(base.refinement_levels),
            ..base
        }
    }
}

/// Outcome of a check body: pass, detail, quadrature unconverged.
struct Verdict {
    pass: bool,
    detail: String,
    no_convergence: bool,
}

impl Verdict {
    fn within(value: f64, expected: f64, tol: f64, converged: bool) -> Self {
        let dev = (value - expected).abs();
        Self {
            pass: dev <= tol,
            detail: format!(
                "value {value:.10} expected {expected:.10} |dev| {} tol {}",
                c_exp(dev, 1),
                c_exp(tol, 0)
            ),
            no_convergence: !converged,
        }
    }

    fn relative(value: f64, expected: f64, tol: f64, converged: bool) -> Self {
        let rel = ((value - expected) / expected).abs();
        Self {
            pass: rel <= tol,
            detail: format!(
                "value {value:.10} expected {expected:.10} rel {} tol {}",
                c_exp(rel, 1),
                c_exp(tol, 0)
            ),
            no_convergence: !converged,
        }
    }

    fn bound(name: &str, residual: f64, tol: f64) -> Self {
        Self {
            pass: residual < tol,
            detail: format!("{name} {} tol {}", c_exp(residual, 1), c_exp(tol, 0)),
            no_convergence: false,
        }
    }
}

fn timed(name: impl Into<String>, body: impl FnOnce() -> Result<Verdict>) -> Check {
    let start = Instant::now();
    let result = body();
    let seconds = start.elapsed().as_secs_f64();
    let name = name.into();
    match result {
        Ok(v) => Check {
            name,
            status: if v.pass { Status::Pass } else { Status::Fail },
            detail: v.detail,
            no_convergence: v.no_convergence,
            seconds,
        },
        Err(e) => Check {
            name,
            status: Status::Fail,
            no_convergence: matches!(e, CoreError::NoConvergence { .. }),
            detail: format!("{}: {e}", e.kind()),
            seconds,
        },
    }
}

fn info(name: impl Into<String>, body: impl FnOnce() -> Result<String>) -> Check {
    let start = Instant::now();
    let detail = body().unwrap_or_else(|e| format!("{}: {e}", e.kind()));
    Check {
        name: name.into(),
        status: Status::Info,
        detail,
        no_convergence: false,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn rn(m: f64, e: f64, r0: f64) -> Result<ConfigurationDescriptor<f64>> {
    reissner_nordstrom_config(BlackHoleParams::new(m, e, 0.0, r0)?)
}

fn kn(m: f64, e: f64, a: f64, r0: f64) -> Result<ConfigurationDescriptor<f64>> {
    kerr_newman_config(BlackHoleParams::new(m, e, a, r0)?)
}

/// Runs every check in a fixed order, handing each to `sink` as it
/// completes.
pub fn run(opts: &VerifyOptions, mut sink: impl FnMut(&Check)) -> Report {
    let mut report = Report::default();
    let mut push = |c: Check| {
        sink(&c);
        report.checks.push(c);
    };
    let default_q = opts.quadrature(QuadratureSpec::default());
    // spectrum solves evaluate the invariant hundreds of times
    let solve_q = opts.quadrature(QuadratureSpec {
        refinement_levels: 2,
        ..QuadratureSpec::default()
    });
    let small_q = opts.quadrature(QuadratureSpec {
        points_per_axis: 4,
        refinement_levels: 2,
        ..QuadratureSpec::default()
    });
    let flip = if opts.inject_euler_sign_flip {
        -1.0
    } else {
        1.0
    };

    for r in [0.5, 1.0, 2.0] {
        push(timed(format!("gauss-bonnet sphere R={r}"), || {
            let i = sphere_config(r)?
                .integrate(ClassKind::Euler2, None, &default_q)?
                .integral;
            Ok(Verdict::within(flip * i.value, 2.0, 1e-5, i.converged))
        }));
    }

    for g in [0.5, 1.0, 1.5, 2.0] {
        push(timed(format!("charge quantization monopole g={g}"), || {
            let i = monopole_config(g)?.default_invariant(&default_q)?.integral;
            Ok(Verdict::within(i.value, 2.0 * g, 1e-7, i.converged))
        }));
    }
    push(timed("monopole transition g=0.5", || {
        let d = monopole_config(0.5)?;
        let r = verify_transition(d.connection().expect("monopole has a connection"), SAMPLES)?;
        Ok(Verdict::bound("max residual", r.max_residual, 1e-8))
    }));

    push(timed("flat euler2 n=2", || {
        let i = flat_config(1.0, 2)?
            .integrate(ClassKind::Euler2, None, &default_q)?
            .integral;
        Ok(Verdict::within(flip * i.value, 0.0, 1e-10, i.converged))
    }));
    push(timed("flat pontrjagin1 n=4", || {
        let i = flat_config(1.0, 4)?
            .integrate(ClassKind::Pontrjagin1, None, &small_q)?
            .integral;
        Ok(Verdict::within(i.value, 0.0, 1e-10, i.converged))
    }));

    push(timed("d(df) = 0", || {
        let f = PFormField::scalar(3, |x: &[f64]| {
            (1.3 * x[0]).sin() * (2.0 * x[1]).cos() + x[0] * x[0] * x[2]
        })?;
        let df = exterior_derivative_field(&f, Stencil::fine())?;
        let chart = Chart::new(vec![(0.0, 1.0); 3])?;
        let mut worst = 0.0f64;
        for x in sample_points(&chart, SAMPLES) {
            worst = worst.max(exterior_derivative(&df, &x, Order::Four)?.max_abs());
        }
        Ok(Verdict::bound("max |ddf|", worst, 1e-6))
    }));

    let torsion_cases: [ConfigCase; 4] = [
        ("sphere R=1", || sphere_config(1.0)),
        ("flat n=3", || flat_config(1.0, 3)),
        ("oscillator k2=0", || {
            oscillator_config(1.0, 1.0, 0.0, 1.0, 1.0, 1.0)
        }),
        ("oscillator k2=1", || {
            oscillator_config(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
        }),
    ];
    for (label, make) in torsion_cases {
        push(timed(format!("torsion-free {label}"), || {
            let d = make()?;
            let metric = d.metric().expect("metric configuration");
            let cf = coframe_from_metric(metric)?;
            let sc = spin_connection(&cf)?;
            let (mut torsion, mut recon) = (0.0f64, 0.0f64);
            for x in sample_points(d.chart().expect("metric chart"), SAMPLES) {
                torsion = torsion.max(torsion_residual(&cf, &sc, &x)?);
                let g = metric.matrix(&x)?;
                let scale = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for (a, b) in cf.reconstruct_metric(&x)?.iter().zip(&g) {
                    recon = recon.max((a - b).abs() / scale);
                }
            }
            let mut v = Verdict::bound("max torsion", torsion, 1e-5);
            v.pass &= recon <= 1e-10;
            v.detail.push_str(&format!(
                ", metric reconstruction rel {} tol 1e-10",
                c_exp(recon, 1)
            ));
            Ok(v)
        }));
    }

    for ratio in [0.3, 0.6, 0.9] {
        for r0 in [0.5, 1.0, 2.0] {
            push(timed(format!("rn chern1 e/m={ratio} r0={r0}"), || {
                let i = rn(1.0, ratio, r0)?.default_invariant(&default_q)?.integral;
                Ok(Verdict::within(
                    i.value,
                    rn_chern_closed_form(1.0, ratio, r0),
                    1e-6,
                    i.converged,
                ))
            }));
        }
    }
    push(timed("rn chern1 extremal e=m", || {
        let ev = rn(1.0, 1.0, 1.0)?.default_invariant(&default_q)?;
        let mut v = Verdict::within(ev.integral.value, 0.0, 0.0, ev.integral.converged);
        v.pass &= ev.zero_width;
        Ok(v)
    }));

    let osc = [
        (1.0, 1.0, 1.0, 1.0),
        (2.0, 3.0, 1.5, 0.6),
        (1.0, 0.5, 2.0, 2.0),
    ];
    for (m, k, e, q0) in osc {
        push(timed(
            format!("oscillator closed form m={m} k={k} E={e} q0={q0}"),
            || {
                let i = oscillator_invariant_normalized_with(m, k, e, 1.0, q0, &default_q)?;
                Ok(Verdict::relative(
                    i.value,
                    oscillator_closed_form(k, e, q0),
                    1e-4,
                    i.converged,
                ))
            },
        ));
    }
    push(timed("oscillator mass independence m=1 vs m=7", || {
        let a = oscillator_invariant_normalized_with(1.0, 1.0, 1.0, 1.0, 1.0, &default_q)?;
        let b = oscillator_invariant_normalized_with(7.0, 1.0, 1.0, 1.0, 1.0, &default_q)?;
        Ok(Verdict::within(
            b.value,
            a.value,
            1e-8,
            a.converged && b.converged,
        ))
    }));

    push(timed("rn spectrum e(n=2) m=1 r0=1", || {
        let q = solve_q;
        let problem = SpectrumProblem::new("e", (0.3, 1.0), (2, 2), move |e| {
            Ok(Sample::from(rn_chern_invariant_with(
                BlackHoleParams::new(1.0, e, 0.0, 1.0)?,
                &q,
            )?))
        })?
        .with_scan_points(64)?;
        let t = solve_spectrum(&problem)?;
        if t.rows.len() != 1 {
            return Ok(Verdict {
                pass: false,
                detail: format!("expected one root, found {}", t.rows.len()),
                no_convergence: t.unconverged > 0,
            });
        }
        let e = t.rows[0].param;
        let mut v = Verdict::within(e, 0.5f64.sqrt(), 1e-9, t.rows[0].converged);
        let algebra = (4.0 * (1.0 - e * e) - 4.0 * e * e).abs();
        v.pass &= algebra <= 1e-8;
        v.detail
            .push_str(&format!(", |4(m²-e²) - n²r0²e²| {}", c_exp(algebra, 1)));
        Ok(v)
    }));

    push(timed("area spectrum from solved mass n=0..10", || {
        let q = solve_q;
        let problem = SpectrumProblem::new("m", (1.0, 6.0), (0, 10), move |m| {
            Ok(Sample::from(rn_chern_invariant_with(
                BlackHoleParams::new(m, 1.0, 0.0, 1.0)?,
                &q,
            )?))
        })?
        .with_scan_points(128)?;
        let t = solve_spectrum(&problem)?;
        let mut worst = 0.0f64;
        let mut pass = true;
        for n in 0..=10i64 {
            let rows: Vec<_> = t.rows.iter().filter(|r| r.n == n).collect();
            if rows.len() != 1 {
                return Ok(Verdict {
                    pass: false,
                    detail: format!("n = {n}: expected one root, found {}", rows.len()),
                    no_convergence: t.unconverged > 0,
                });
            }
            let area: f64 = horizon_area(rows[0].param, 1.0)?;
            let expected = area_spectrum(1.0, n, 1.0)?;
            let rel = ((area - expected) / expected).abs();
            worst = worst.max(rel);
            pass &= if n == 0 {
                (area - 4.0 * PI).abs() <= 1e-12 * 4.0 * PI
            } else {
                rel <= 1e-9
            };
        }
        Ok(Verdict {
            pass,
            detail: format!("max rel {} tol 1e-09 (n=0 tol 1e-12)", c_exp(worst, 1)),
            no_convergence: t.rows.iter().any(|r| !r.converged),
        })
    }));

    push(timed("gauge invariance rn chern1", || {
        let d = rn(1.0, 0.6, 1.0)?;
        let before = d.default_invariant(&default_q)?.integral;
        let chi = PFormField::scalar(2, |x: &[f64]| {
            0.4 * (x[0]).sin() * x[1] * x[1] + 0.1 * x[0] * x[1]
        })?;
        let conn = d
            .connection()
            .expect("rn connection")
            .gauge_transformed(&chi)?;
        let f = field_strength(&conn)?;
        let cycle = d.default_cycle().expect("non-extremal cycle");
        let after = integrate_class(&chern1_density_on(&f, 0)?, Domain::Cycle(cycle), &default_q)?;
        Ok(Verdict::within(
            after.value,
            before.value,
            1e-7,
            before.converged && after.converged,
        ))
    }));
    push(timed(
        "gauge invariance monopole chern1 (north chart)",
        || {
            let d = monopole_config(0.5)?;
            let conn = d.connection().expect("monopole connection");
            let chi = PFormField::scalar(2, |x: &[f64]| {
                0.3 * (2.0 * x[0]).sin() * x[1].cos() + 0.05 * x[1]
            })?;
            let f0 = field_strength(conn)?;
            let f1 = field_strength(&conn.gauge_transformed(&chi)?)?;
            let chart = f0.chart(0);
            let before = integrate_class(
                &chern1_density_on(&f0, 0)?,
                Domain::Chart(chart),
                &default_q,
            )?;
            let after = integrate_class(
                &chern1_density_on(&f1, 0)?,
                Domain::Chart(chart),
                &default_q,
            )?;
            Ok(Verdict::within(
                after.value,
                before.value,
                1e-7,
                before.converged && after.converged,
            ))
        },
    ));

    push(timed(
        "kerr-newman a=1e-6 reduces to reissner-nordstrom",
        || {
            let (m, e) = (1.0, 0.6);
            let k = kn(m, e, 1e-6, 1.0)?;
            let r = rn(m, e, 1.0)?;
            let fk = field_strength(k.connection().expect("kn connection"))?;
            let fr = field_strength(r.connection().expect("rn connection"))?;
            let mut worst = 0.0f64;
            for x in sample_points(k.chart().expect("kn chart"), SAMPLES) {
                let mut diff = fk.field(0).eval(&x)?;
                let rt = diff.get(&[0, 1]) - fr.field(0).eval(&x[..2])?.get(&[0, 1]);
                diff.set(&[0, 1], rt);
                worst = worst.max(diff.max_abs());
            }
            Ok(Verdict::bound("sup |F_KN - F_RN|", worst, 1e-4))
        },
    ));
    push(timed("kerr-newman dF = 0 (a=0.3)", || {
        let k = kn(1.0, 0.6, 0.3, 1.0)?;
        let f = field_strength(k.connection().expect("kn connection"))?;
        let mut worst = 0.0f64;
        for x in sample_points(k.chart().expect("kn chart"), SAMPLES) {
            worst = worst.max(f.closure_residual(0, &x)?);
        }
        Ok(Verdict::bound("max |dF|", worst, 1e-6))
    }));

    let dims: [DimCase; 3] = [
        ("gravity", &[], 10),
        ("yang_mills", &[("k", 3.0)], 12),
        ("standard_model", &[], 16),
    ];
    for (name, params, expected) in dims {
        push(timed(format!("bundle dimension {name}"), || {
            let p = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
            let got = bundle_dimension(&build::<f64>(name, &p)?);
            Ok(Verdict {
                pass: got == expected,
                detail: format!("dim P = {got}, expected {expected}"),
                no_convergence: false,
            })
        }));
    }

    push(info("kerr-newman closed form a=0.3 m=1 e=0.6 r0=1", || {
        let (m, e, a, r0) = (1.0f64, 0.6f64, 0.3f64, 1.0f64);
        let numeric = kn(m, e, a, r0)?
            .default_invariant(&default_q)?
            .integral
            .value;
        let printed = 2.0 * e.powi(3) * (m * m - e * e - a * a).sqrt()
            / (r0 * (e.powi(4) + 4.0 * m * m * a * a));
        Ok(format!(
            "UNVERIFIED: equatorial (r,t) cycle gives {numeric:.6}, the a != 0 closed form gives {printed:.6}; \
             no cycle reproducing the closed form is known"
        ))
    }));

    report
}
