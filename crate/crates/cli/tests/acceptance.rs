//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! residuals and timings indented below it. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topospec_core::calculus::{
    exterior_derivative, exterior_derivative_field, Order, PFormField, QuadratureSpec, Stencil,
};
use topospec_core::charclass::{chern1_density_on, integrate_class, ClassKind, Domain};
use topospec_core::configurations::{
    flat_config, kerr_newman_config, monopole_config, oscillator_config, reissner_nordstrom_config,
    rn_chern_closed_form, sphere_config, BlackHoleParams, ConfigurationDescriptor,
};
use topospec_core::frame::{coframe_from_metric, spin_connection, torsion_residual};
use topospec_core::gauge::{field_strength, verify_transition};
use topospec_core::spectrum::{
    area_spectrum, horizon_area, oscillator_closed_form, oscillator_invariant_normalized_with,
    rn_chern_invariant_with, solve_spectrum, Sample, SpectrumProblem,
};

type Res<T> = Result<T, String>;
type ScalarCase = (&'static str, fn(&[f64]) -> f64);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; every sub-check must hold for the criterion.
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.pass &= ok;
        let mark = if ok { "ok  " } else { "BAD " };
        self.details.push(format!("{mark}{}", detail.into()));
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x7090_5bec)
}

/// Uniform random points inside `bounds`, 2% away from every face.
fn random_points(rng: &mut ChaCha8Rng, bounds: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| lo + (hi - lo) * rng.gen_range(0.02..0.98))
                .collect()
        })
        .collect()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topospec"))
}

fn run_bin(args: &[&str]) -> Res<Output> {
    bin().args(args).output().map_err(e)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> Res<String> {
    let p = dir.join(name);
    std::fs::write(&p, text).map_err(e)?;
    Ok(p.to_string_lossy().into_owned())
}

fn csv_rows(text: &str) -> Res<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(e)?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    Ok((header, rows))
}

fn num(s: &str) -> Res<f64> {
    s.parse().map_err(|_| format!("`{s}` is not a number"))
}

fn c1_gauss_bonnet() -> Res<Outcome> {
    let mut o = Outcome::new();
    let q = QuadratureSpec::default();
    for r in [0.5, 1.0, 2.0] {
        let t = Instant::now();
        let i = sphere_config::<f64>(r)
            .map_err(e)?
            .integrate(ClassKind::Euler2, None, &q)
            .map_err(e)?
            .integral;
        let secs = t.elapsed().as_secs_f64();
        let dev = (i.value - 2.0).abs();
        o.check(
            dev <= 1e-5,
            format!("R={r}: euler2 = {:.9}, |dev| {dev:.1e} (tol 1e-5)", i.value),
        );
        o.check(secs < 2.0, format!("R={r}: {secs:.2} s (limit 2 s)"));
    }
    Ok(o)
}

fn c2_charge_quantization() -> Res<Outcome> {
    let mut o = Outcome::new();
    let q = QuadratureSpec::default();
    for g in [0.5, 1.0, 1.5, 2.0] {
        let t = Instant::now();
        let d = monopole_config::<f64>(g).map_err(e)?;
        let i = d.default_invariant(&q).map_err(e)?.integral;
        let tr = verify_transition(d.connection().expect("monopole connection"), 100).map_err(e)?;
        let secs = t.elapsed().as_secs_f64();
        let dev = (i.value - 2.0 * g).abs();
        o.check(
            dev <= 1e-7,
            format!(
                "g={g}: chern1 = {:.12}, |dev| {dev:.1e} (tol 1e-7)",
                i.value
            ),
        );
        o.check(
            tr.pass,
            format!(
                "g={g}: transition residual {:.1e} (tol 1e-8)",
                tr.max_residual
            ),
        );
        o.check(secs < 1.0, format!("g={g}: {secs:.2} s (limit 1 s)"));
    }
    Ok(o)
}

fn c3_oscillator() -> Res<Outcome> {
    let mut o = Outcome::new();
    let q = QuadratureSpec::default();
    let mut worst_rel = 0.0f64;
    let mut worst_mass = 0.0f64;
    let mut slowest = 0.0f64;
    for (m, k, energy) in [(1.0f64, 1.0f64, 1.0f64), (2.0, 3.0, 1.5), (1.0, 0.5, 2.0)] {
        let turning = (2.0 * energy / k).sqrt();
        for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let q0 = frac * turning;
            let t = Instant::now();
            let i = oscillator_invariant_normalized_with(m, k, energy, 1.0, q0, &q).map_err(e)?;
            slowest = slowest.max(t.elapsed().as_secs_f64());
            let exact = oscillator_closed_form(k, energy, q0);
            let rel = ((i.value - exact) / exact).abs();
            worst_rel = worst_rel.max(rel);
            o.check(
                rel <= 1e-4,
                format!(
                    "(m,k,E)=({m},{k},{energy}) q0={q0:.6}: f = {:.10} vs kq0/(2E-kq0²) = {exact:.10}, rel {rel:.1e}",
                    i.value
                ),
            );
            let other =
                oscillator_invariant_normalized_with(5.0 * m, k, energy, 1.0, q0, &q).map_err(e)?;
            worst_mass = worst_mass.max((other.value - i.value).abs());
        }
    }
    o.check(
        worst_rel <= 1e-4,
        format!("max rel error {worst_rel:.1e} (tol 1e-4)"),
    );
    o.check(
        worst_mass <= 1e-8,
        format!("mass independence m -> 5m: max |dev| {worst_mass:.1e} (tol 1e-8)"),
    );
    o.check(
        slowest < 5.0,
        format!("slowest point {slowest:.2} s (limit 5 s)"),
    );
    o.details.push(
        "    sign: the invariant is +kq0/(2E-kq0²) in the sphere-positive orientation".into(),
    );
    Ok(o)
}

/// Criterion 4 through the CLI: the spectrum task writes a CSV that is
/// then checked against the quadratic.
fn c4_oscillator_spectrum(dir: &Path) -> Res<Outcome> {
    let mut o = Outcome::new();
    let cfg = write_config(
        dir,
        "osc.toml",
        r#"
task = "spectrum"
[configuration]
name = "oscillator"
params = { m = 1.0, k1 = 1.0, k2 = 0.0, E = 1.0, L = 1.0 }
[spectrum]
free_param = "q0"
interval = [0.001, 1.414]
n_min = 1
n_max = 5
scan_points = 32
[quadrature]
points_per_axis = 32
refinement_levels = 2
[output]
path = "osc.csv"
format = "csv"
"#,
    )?;
    let t = Instant::now();
    let out = run_bin(&["run", &cfg])?;
    o.details.push(format!(
        "    topospec run: {:.1} s, `{}`",
        t.elapsed().as_secs_f64(),
        stdout(&out).trim()
    ));
    o.check(
        out.status.code() == Some(0),
        format!("exit status {:?}", out.status.code()),
    );
    let (header, rows) = csv_rows(&std::fs::read_to_string(dir.join("osc.csv")).map_err(e)?)?;
    o.check(
        header[..2] == ["n", "param_value"],
        format!("header {header:?}"),
    );
    o.check(rows.len() == 5, format!("{} rows", rows.len()));
    for row in &rows {
        let n = num(&row[0])?;
        let q0 = num(&row[1])?;
        let quad = n * q0 * q0 + q0 - 2.0 * n;
        o.check(
            quad.abs() <= 1e-8 && q0 < 2f64.sqrt(),
            format!(
                "n={n}: q0 = {q0:.12}, |n q0² + q0 - 2n| = {:.1e} (tol 1e-8), < sqrt 2",
                quad.abs()
            ),
        );
        if n == 1.0 {
            o.check(
                (q0 - 1.0).abs() <= 1e-9,
                format!("n=1 root |q0 - 1| = {:.1e} (tol 1e-9)", (q0 - 1.0).abs()),
            );
        }
    }
    Ok(o)
}

fn c5_reissner_nordstrom() -> Res<Outcome> {
    let mut o = Outcome::new();
    let q = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for ratio in [0.3, 0.6, 0.9] {
        for r0 in [0.5, 1.0, 2.0] {
            let m = 1.0;
            let i = rn_chern_invariant_with(
                BlackHoleParams::new(m, ratio * m, 0.0, r0).map_err(e)?,
                &q,
            )
            .map_err(e)?;
            let dev = (i.value - rn_chern_closed_form(m, ratio * m, r0)).abs();
            worst = worst.max(dev);
            o.check(
                dev <= 1e-6,
                format!(
                    "e/m={ratio} r0={r0}: chern1 = {:.10}, |dev| {dev:.1e}",
                    i.value
                ),
            );
        }
    }
    o.check(
        worst <= 1e-6,
        format!("3x3 grid max |dev| {worst:.1e} (tol 1e-6)"),
    );

    let solve_q = QuadratureSpec {
        refinement_levels: 2,
        ..QuadratureSpec::default()
    };
    let p = SpectrumProblem::new("e", (0.3, 1.0), (2, 2), move |ch| {
        Ok(Sample::from(rn_chern_invariant_with(
            BlackHoleParams::new(1.0, ch, 0.0, 1.0)?,
            &solve_q,
        )?))
    })
    .map_err(e)?
    .with_scan_points(64)
    .map_err(e)?;
    let t = Instant::now();
    let table = solve_spectrum(&p).map_err(e)?;
    o.check(
        table.rows.len() == 1,
        format!(
            "n=2: {} root(s) in {:.1} s",
            table.rows.len(),
            t.elapsed().as_secs_f64()
        ),
    );
    if let Some(r) = table.rows.first() {
        let dev = (r.param - 0.5f64.sqrt()).abs();
        o.check(
            dev <= 1e-9,
            format!(
                "n=2: e = {:.15}, |e - 1/sqrt 2| = {dev:.1e} (tol 1e-9)",
                r.param
            ),
        );
        let alg = (4.0 * (1.0 - r.param * r.param) - 4.0 * r.param * r.param).abs();
        o.check(
            alg <= 1e-8,
            format!("n=2: |4(m²-e²) - n²r0²e²| = {alg:.1e} (tol 1e-8)"),
        );
    }
    Ok(o)
}

fn c6_area_spectrum() -> Res<Outcome> {
    let mut o = Outcome::new();
    let q = QuadratureSpec {
        refinement_levels: 2,
        ..QuadratureSpec::default()
    };
    let p = SpectrumProblem::new("m", (1.0, 6.0), (0, 10), move |m| {
        Ok(Sample::from(rn_chern_invariant_with(
            BlackHoleParams::new(m, 1.0, 0.0, 1.0)?,
            &q,
        )?))
    })
    .map_err(e)?
    .with_scan_points(128)
    .map_err(e)?;
    let t = Instant::now();
    let table = solve_spectrum(&p).map_err(e)?;
    o.details.push(format!(
        "    mass solve n=0..10: {:.1} s",
        t.elapsed().as_secs_f64()
    ));
    for n in 0..=10i64 {
        let rows: Vec<_> = table.rows.iter().filter(|r| r.n == n).collect();
        if rows.len() != 1 {
            o.check(false, format!("n={n}: {} roots", rows.len()));
            continue;
        }
        let area: f64 = horizon_area(rows[0].param, 1.0).map_err(e)?;
        let expected = area_spectrum(1.0, n, 1.0).map_err(e)?;
        let rel = ((area - expected) / expected).abs();
        if n == 0 {
            let dev = (area - 4.0 * PI).abs();
            o.check(
                dev <= 1e-12,
                format!("n=0: area = {area:.15}, |area - 4πe²| = {dev:.1e} (tol 1e-12)"),
            );
        } else {
            o.check(
                rel <= 1e-9,
                format!(
                    "n={n}: m = {:.12}, area rel err {rel:.1e} (tol 1e-9)",
                    rows[0].param
                ),
            );
        }
    }
    Ok(o)
}

fn rn(m: f64, ch: f64, r0: f64) -> Res<ConfigurationDescriptor<f64>> {
    reissner_nordstrom_config(BlackHoleParams::new(m, ch, 0.0, r0).map_err(e)?).map_err(e)
}

fn c7_kerr_newman(verify_stdout: &str) -> Res<Outcome> {
    let mut o = Outcome::new();
    let (m, ch) = (1.0, 0.6);
    let kn = kerr_newman_config(BlackHoleParams::new(m, ch, 1e-6, 1.0).map_err(e)?).map_err(e)?;
    let rn = rn(m, ch, 1.0)?;
    let fk = field_strength(kn.connection().expect("kn connection")).map_err(e)?;
    let fr = field_strength(rn.connection().expect("rn connection")).map_err(e)?;
    let mut worst = 0.0f64;
    for x in random_points(&mut rng(), kn.chart().expect("kn chart").bounds(), 100) {
        let mut diff = fk.field(0).eval(&x).map_err(e)?;
        let rt = diff.get(&[0, 1]) - fr.field(0).eval(&x[..2]).map_err(e)?.get(&[0, 1]);
        diff.set(&[0, 1], rt);
        worst = worst.max(diff.max_abs());
    }
    o.check(
        worst < 1e-4,
        format!("a=1e-6: sup |F_KN - F_RN| over 100 random points = {worst:.1e} (tol 1e-4)"),
    );
    let line = verify_stdout.lines().find(|l| l.contains("UNVERIFIED"));
    o.check(
        line.is_some_and(|l| l.starts_with("INFO")),
        format!(
            "verify reports `{}`",
            line.unwrap_or("<no UNVERIFIED line>")
        ),
    );
    Ok(o)
}

fn c8_properties(dir: &Path, verify_out: &Output, verify_secs: f64) -> Res<Outcome> {
    let mut o = Outcome::new();
    let mut rng = rng();

    // d∘d = 0 at random interior points
    let fields: [ScalarCase; 3] = [
        ("sin(1.3x)cos(2y) + x²z", |x| {
            (1.3 * x[0]).sin() * (2.0 * x[1]).cos() + x[0] * x[0] * x[2]
        }),
        ("exp(xy) z", |x| (x[0] * x[1]).exp() * x[2]),
        ("1/(1 + x² + y² + z²)", |x| {
            1.0 / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
        }),
    ];
    for (label, f) in fields {
        let df = exterior_derivative_field(&PFormField::scalar(3, f).map_err(e)?, Stencil::fine())
            .map_err(e)?;
        let mut worst = 0.0f64;
        for x in random_points(&mut rng, &[(-1.0, 1.0); 3], 100) {
            worst = worst.max(
                exterior_derivative(&df, &x, Order::Four)
                    .map_err(e)?
                    .max_abs(),
            );
        }
        o.check(
            worst < 1e-6,
            format!("d(df) for f = {label}: {worst:.1e} (tol 1e-6)"),
        );
    }

    // torsion-free residual for every metric configuration
    let metric_cfgs: Vec<(&str, ConfigurationDescriptor<f64>)> = vec![
        ("sphere R=1", sphere_config(1.0).map_err(e)?),
        ("flat n=2", flat_config(1.0, 2).map_err(e)?),
        ("flat n=3", flat_config(1.0, 3).map_err(e)?),
        ("flat n=4", flat_config(1.0, 4).map_err(e)?),
        (
            "oscillator k2=0",
            oscillator_config(1.0, 1.0, 0.0, 1.0, 1.0, 1.0).map_err(e)?,
        ),
        (
            "oscillator k2=1",
            oscillator_config(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).map_err(e)?,
        ),
    ];
    for (label, d) in &metric_cfgs {
        let chart = d.chart().expect("metric chart");
        let cf = coframe_from_metric(d.metric().expect("metric")).map_err(e)?;
        let sc = spin_connection(&cf).map_err(e)?;
        let mut worst = 0.0f64;
        let mut used = 0;
        for x in random_points(&mut rng, chart.bounds(), 400) {
            if used == 100 {
                break;
            }
            if !chart.contains(&x) {
                continue;
            }
            used += 1;
            worst = worst.max(torsion_residual(&cf, &sc, &x).map_err(e)?);
        }
        o.check(
            worst < 1e-5 && used == 100,
            format!("torsion {label}: {worst:.1e} over {used} points (tol 1e-5)"),
        );
    }

    // gauge invariance of the Chern integral
    let q = QuadratureSpec::default();
    let d = rn(1.0, 0.6, 1.0)?;
    let before = d.default_invariant(&q).map_err(e)?.integral.value;
    let chi = PFormField::scalar(2, |x: &[f64]| {
        0.4 * x[0].sin() * x[1] * x[1] + 0.1 * x[0] * x[1]
    })
    .map_err(e)?;
    let f = field_strength(
        &d.connection()
            .expect("rn connection")
            .gauge_transformed(&chi)
            .map_err(e)?,
    )
    .map_err(e)?;
    let after = integrate_class(
        &chern1_density_on(&f, 0).map_err(e)?,
        Domain::Cycle(d.default_cycle().expect("cycle")),
        &q,
    )
    .map_err(e)?
    .value;
    let dev = (after - before).abs();
    o.check(
        dev < 1e-7,
        format!("gauge invariance RN chern1 under A + dχ: |dev| {dev:.1e} (tol 1e-7)"),
    );

    // pontrjagin1 of flat space
    let small = QuadratureSpec {
        points_per_axis: 4,
        refinement_levels: 2,
        ..QuadratureSpec::default()
    };
    let p1: f64 = flat_config(1.0, 4)
        .map_err(e)?
        .integrate(ClassKind::Pontrjagin1, None, &small)
        .map_err(e)?
        .integral
        .value;
    o.check(p1.abs() < 1e-12, format!("pontrjagin1 flat n=4: {p1:e}"));

    // determinism: byte-identical output files from repeated runs
    for (name, text) in [
        (
            "det_monopole.toml",
            "task = \"integrate\"\n[configuration]\nname = \"monopole\"\nparams = { g = 0.5 }\n[integrate]\nclass = \"chern1\"\n[output]\npath = \"det_monopole.json\"\nformat = \"json\"\n",
        ),
        (
            "det_sweep.toml",
            "[configuration]\nname = \"reissner_nordstrom\"\nparams = { m = 1.0 }\n[sweep.grid.e]\nmin = 0.2\nmax = 0.8\nsteps = 4\n[sweep.grid.r0]\nmin = 0.5\nmax = 2.0\nsteps = 3\n[output]\npath = \"det_sweep.csv\"\n",
        ),
    ] {
        let cfg = write_config(dir, name, text)?;
        let out_name = if name.contains("monopole") { "det_monopole.json" } else { "det_sweep.csv" };
        let mut files = Vec::new();
        for _ in 0..2 {
            let r = run_bin(&["run", &cfg])?;
            if r.status.code() != Some(0) {
                return Err(format!("{name}: exit {:?}", r.status.code()));
            }
            files.push(std::fs::read(dir.join(out_name)).map_err(e)?);
        }
        o.check(files[0] == files[1], format!("{out_name}: two runs byte-identical ({} bytes)", files[0].len()));
    }

    // CSV round trip: parse every number and render it again
    let text = std::fs::read_to_string(dir.join("det_sweep.csv")).map_err(e)?;
    let (header, rows) = csv_rows(&text)?;
    let mut rewritten = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    rewritten.write_record(&header).map_err(e)?;
    let mut values = 0;
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c.parse::<f64>() {
                Ok(v) => {
                    values += 1;
                    topospec::output::fmt_number(v)
                }
                Err(_) => c.clone(),
            })
            .collect();
        rewritten.write_record(&cells).map_err(e)?;
    }
    let rewritten = String::from_utf8(rewritten.into_inner().map_err(e)?).map_err(e)?;
    o.check(
        rewritten == text,
        format!("CSV round trip of {values} values is exact"),
    );

    // full verify run
    let last = stdout(verify_out)
        .lines()
        .last()
        .unwrap_or_default()
        .to_string();
    o.check(
        verify_out.status.code() == Some(0) && !stdout(verify_out).contains("FAIL"),
        format!(
            "topospec verify: `{last}`, exit {:?}",
            verify_out.status.code()
        ),
    );
    o.check(
        verify_secs < 60.0,
        format!("topospec verify took {verify_secs:.1} s (limit 60 s)"),
    );
    Ok(o)
}

/// The CLI examples and negative controls.
fn cli_examples(dir: &Path) -> Res<Outcome> {
    let mut o = Outcome::new();
    let monopole = "task = \"integrate\"\n[configuration]\nname = \"monopole\"\nparams = { g = 0.5 }\n[integrate]\nclass = \"chern1\"\n";
    let cfg = write_config(dir, "monopole.toml", monopole)?;
    let r = run_bin(&["run", &cfg])?;
    let line = stdout(&r).trim().to_string();
    o.check(
        r.status.code() == Some(0)
            && line.starts_with("chern1 = 1.000000 (err ")
            && line.ends_with(')'),
        format!("monopole g=0.5: `{line}`, exit {:?}", r.status.code()),
    );

    let cfg = write_config(
        dir,
        "typo.toml",
        &format!("{monopole}[quadratur]\npoints_per_axis = 8\n"),
    )?;
    let r = run_bin(&["run", &cfg])?;
    let err = String::from_utf8_lossy(&r.stderr).trim().to_string();
    o.check(
        r.status.code() == Some(1) && err.contains("quadratur") && err.contains("line 7"),
        format!("unknown key: `{err}`, exit {:?}", r.status.code()),
    );

    let cfg = write_config(
        dir,
        "sweep.toml",
        "[configuration]\nname = \"reissner_nordstrom\"\nparams = { m = 1.0, r0 = 1.0 }\n[sweep.grid.e]\nmin = 0.2\nmax = 0.8\nsteps = 4\n",
    )?;
    let r = run_bin(&["sweep", &cfg])?;
    let text = stdout(&r);
    let csv_text: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let (_, rows) = csv_rows(&csv_text)?;
    let row06 = rows.iter().find(|r| r[0] == "0.6");
    let v06 = row06.map(|r| num(&r[1])).transpose()?;
    o.check(
        r.status.code() == Some(0)
            && rows.len() == 4
            && v06.is_some_and(|v| format!("{v:.5}") == "2.66667"),
        format!("RN sweep: {} rows, e=0.6 -> {:?}", rows.len(), v06),
    );

    let r = run_bin(&["verify", "--points-per-axis", "4"])?;
    o.check(
        r.status.code() == Some(2) && stdout(&r).contains("[NoConvergence]"),
        format!("verify --points-per-axis 4: exit {:?}", r.status.code()),
    );
    let r = run_bin(&["verify", "--inject-euler-sign-flip"])?;
    let flipped = stdout(&r)
        .lines()
        .find(|l| l.contains("sphere R=1"))
        .unwrap_or_default()
        .to_string();
    o.check(
        r.status.code() == Some(14)
            && flipped.starts_with("FAIL")
            && flipped.contains("value -2.0000"),
        format!("injected sign flip: `{flipped}`"),
    );

    let r = run_bin(&["dim", "gravity"])?;
    o.check(
        stdout(&r).starts_with("dim(P) = 10"),
        format!("dim gravity: `{}`", stdout(&r).trim()),
    );
    let r = run_bin(&["dim", "yang_mills", "--param", "k=3"])?;
    o.check(
        stdout(&r).starts_with("dim(P) = 12"),
        format!("dim yang_mills k=3: `{}`", stdout(&r).trim()),
    );
    let r = run_bin(&["dim", "standard_model"])?;
    o.check(
        stdout(&r).starts_with("dim(P) = 16"),
        format!("dim standard_model: `{}`", stdout(&r).trim()),
    );
    let r = run_bin(&["list"])?;
    o.check(
        r.status.code() == Some(0) && stdout(&r).contains("reissner_nordstrom"),
        "list prints the catalog",
    );
    Ok(o)
}

fn report(id: &str, title: &str, result: Res<Outcome>) -> bool {
    let (pass, details) = match result {
        Ok(o) => (o.pass, o.details),
        Err(msg) => (false, vec![format!("BAD error: {msg}")]),
    };
    println!("{} [{id}] {title}", if pass { "PASS" } else { "FAIL" });
    for d in details {
        println!("      {d}");
    }
    pass
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let t = Instant::now();
    let verify_out = run_bin(&["verify"]).expect("running topospec verify");
    let verify_secs = t.elapsed().as_secs_f64();

    let results = [
        report("1", "Gauss-Bonnet oracle", c1_gauss_bonnet()),
        report("2", "charge quantization", c2_charge_quantization()),
        report("3", "oscillator closed form", c3_oscillator()),
        report(
            "4",
            "oscillator spectrum solve",
            c4_oscillator_spectrum(dir.path()),
        ),
        report(
            "5",
            "Reissner-Nordstrom closed form",
            c5_reissner_nordstrom(),
        ),
        report("6", "area spectrum consistency", c6_area_spectrum()),
        report(
            "7",
            "Kerr-Newman reduction",
            c7_kerr_newman(&stdout(&verify_out)),
        ),
        report(
            "8",
            "property suites",
            c8_properties(dir.path(), &verify_out, verify_secs),
        ),
        report("cli", "command-line examples", cli_examples(dir.path())),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
