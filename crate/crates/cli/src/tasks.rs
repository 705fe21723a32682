//! Execution of configuration-file tasks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use topospec_core::calculus::QuadratureSpec;
use topospec_core::charclass::ClassKind;
use topospec_core::configurations::{
    build, bundle_dimension, lookup, ConfigurationDescriptor, Group,
};
use topospec_core::spectrum::{invariant_curve, solve_spectrum, Sample, SpectrumProblem};
use topospec_core::Error as CoreError;

use crate::config::{ConfigurationSection, Format, RunConfig, Task};
use crate::error::{CliError, EXIT_FLAGGED};
use crate::output::{c_exp, to_json, Cell, Meta, Table};
use crate::verify::{self, VerifyOptions};

/// Flag raised when a quadrature missed its convergence tolerance.
pub const FLAG_NO_CONVERGENCE: &str = "NoConvergence";
/// Flag raised when a spectrum solve found no root at all.
pub const FLAG_NO_ROOTS: &str = "NoRoots";

/// A completed task, ready to be written and summarized.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub task: &'static str,
    pub summary: String,
    pub table: Table,
    pub meta: Meta,
    /// Extra report lines printed before the summary (verify).
    pub report: Vec<String>,
    /// Non-zero exit forced by the task itself (verify failures).
    pub exit_override: Option<i32>,
}

impl Outcome {
    fn new(task: &'static str, summary: String, table: Table, meta: Meta) -> Self {
        Self {
            task,
            summary,
            table,
            meta,
            report: Vec::new(),
            exit_override: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if let Some(code) = self.exit_override {
            return code;
        }
        let flagged = self
            .meta
            .flags
            .iter()
            .any(|f| f == FLAG_NO_CONVERGENCE || f == FLAG_NO_ROOTS);
        if flagged {
            EXIT_FLAGGED
        } else {
            0
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => to_json(self.task, &self.table, &self.meta),
        }
    }
}

fn meta_for(cfg: Option<&ConfigurationSection>, quad: QuadratureSpec) -> Meta {
    Meta {
        configuration: cfg.map(|c| {
            (
                c.name.clone(),
                c.params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            )
        }),
        quadrature: quad,
        max_residual: None,
        flags: Vec::new(),
        warnings: Vec::new(),
    }
}

fn add_flag(meta: &mut Meta, flag: &str) {
    if !meta.flags.iter().any(|f| f == flag) {
        meta.flags.push(flag.to_string());
    }
}

fn configuration(cfg: &RunConfig) -> &ConfigurationSection {
    cfg.configuration
        .as_ref()
        .expect("configuration presence is checked at parse time")
}

/// Runs the task of a parsed configuration (a `[sweep]` without `task`
/// runs the sweep).
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.task {
        Some(Task::Integrate) => integrate(cfg),
        Some(Task::Spectrum) => spectrum(cfg),
        Some(Task::Curve) => curve(cfg),
        Some(Task::Dim) => {
            let c = configuration(cfg);
            dim(&c.name, &c.params)
        }
        Some(Task::Verify) => {
            let q = cfg.quadrature;
            let opts = VerifyOptions {
                points_per_axis: q.map(|q| q.points_per_axis),
                refinement_levels: q.map(|q| q.refinement_levels),
                ..VerifyOptions::default()
            };
            Ok(verify_outcome(&opts))
        }
        None => sweep(cfg),
    }
}

pub fn integrate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = configuration(cfg);
    let section = cfg.integrate.as_ref().expect("checked at parse time");
    let quad = cfg.quadrature_spec();
    let class: ClassKind = section.class.into();
    let desc = build::<f64>(&c.name, &c.params)?;
    let cycle = section.cycle.as_ref().map(|c| c.to_spec()).transpose()?;
    let ev = desc.integrate(class, cycle.as_ref(), &quad)?;
    let i = &ev.integral;

    let mut meta = meta_for(Some(c), quad);
    if !i.converged {
        add_flag(&mut meta, FLAG_NO_CONVERGENCE);
    }
    if ev.zero_width {
        meta.warnings
            .push("default cycle has zero width (extremal black hole)".into());
    }
    let mut table = Table::new(["class", "value", "quad_err", "converged", "zero_width"]);
    table.push(vec![
        class.name().into(),
        i.value.into(),
        i.err.into(),
        i.converged.into(),
        ev.zero_width.into(),
    ]);
    let summary = format!("{class} = {:.6} (err {})", i.value, c_exp(i.err, 0));
    Ok(Outcome::new("integrate", summary, table, meta))
}

/// The configuration's spectrum invariant as a function of one parameter.
fn invariant_fn(
    c: &ConfigurationSection,
    free: &str,
    quad: QuadratureSpec,
) -> impl Fn(f64) -> topospec_core::Result<Sample<f64>> + Send + Sync + 'static {
    let (name, fixed, free) = (c.name.clone(), c.params.clone(), free.to_string());
    move |p| {
        let mut params = fixed.clone();
        params.insert(free.clone(), p);
        let desc = build::<f64>(&name, &params)?;
        Ok(desc.spectrum_invariant(&quad)?.integral.into())
    }
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = configuration(cfg);
    let s = cfg.spectrum.as_ref().expect("checked at parse time");
    let quad = cfg.quadrature_spec();
    lookup(&c.name)?;
    let problem = SpectrumProblem::new(
        s.free_param.clone(),
        s.interval,
        (s.n_min, s.n_max),
        invariant_fn(c, &s.free_param, quad),
    )?
    .with_use_abs(s.use_abs)
    .with_scan_points(s.scan_points)?
    .with_root_tol(s.root_tol)?
    .with_residual_tol(s.residual_tol)?;
    let result = solve_spectrum(&problem)?;

    let mut meta = meta_for(Some(c), quad);
    meta.max_residual = Some(result.max_residual());
    meta.warnings = result.warnings.clone();
    if result.scan_failures > 0 {
        meta.warnings.push(format!(
            "{} scan points could not be evaluated",
            result.scan_failures
        ));
    }
    if result.unconverged > 0 {
        meta.warnings.push(format!(
            "{} scan points missed the quadrature tolerance",
            result.unconverged
        ));
    }
    if result.no_roots {
        add_flag(&mut meta, FLAG_NO_ROOTS);
    }
    if result.rows.iter().any(|r| !r.converged) {
        add_flag(&mut meta, FLAG_NO_CONVERGENCE);
    }

    let mut table = Table::new([
        "n",
        "param_value",
        "invariant_value",
        "residual",
        "quad_err",
        "converged",
    ]);
    for r in &result.rows {
        table.push(vec![
            r.n.into(),
            r.param.into(),
            r.value.into(),
            r.residual.into(),
            r.quad_err.into(),
            r.converged.into(),
        ]);
    }
    let summary = if result.no_roots {
        format!(
            "spectrum: no roots for {} in [{}, {}], n = {}..{}",
            s.free_param, s.interval.0, s.interval.1, s.n_min, s.n_max
        )
    } else {
        format!(
            "spectrum: {} rows for {}, n = {}..{}, max residual {}",
            result.rows.len(),
            s.free_param,
            s.n_min,
            s.n_max,
            c_exp(result.max_residual(), 1)
        )
    };
    Ok(Outcome::new("spectrum", summary, table, meta))
}

pub fn curve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = configuration(cfg);
    let s = cfg.curve.as_ref().expect("checked at parse time");
    let quad = cfg.quadrature_spec();
    lookup(&c.name)?;
    let problem = SpectrumProblem::new(
        s.free_param.clone(),
        s.interval,
        (0, 0),
        invariant_fn(c, &s.free_param, quad),
    )?;
    let curve = invariant_curve(&problem, s.grid)?;

    let mut meta = meta_for(Some(c), quad);
    let mut table = Table::new([
        "param_value",
        "invariant_value",
        "quad_err",
        "converged",
        "segment",
        "trend",
        "error",
    ]);
    let mut failed = 0;
    for (i, row) in curve.rows.iter().enumerate() {
        let seg = curve
            .segments
            .iter()
            .position(|s| s.first <= i && i <= s.last);
        let (segment, trend) = match seg {
            Some(k) => (Cell::Int(k as i64), curve.segments[k].trend.name().into()),
            None => (Cell::Text(String::new()), Cell::Text(String::new())),
        };
        let (value, err, converged) = match row.sample {
            Some(smp) => {
                if !smp.converged {
                    add_flag(&mut meta, FLAG_NO_CONVERGENCE);
                }
                (
                    Cell::Num(smp.value),
                    Cell::Num(smp.err),
                    Cell::Bool(smp.converged),
                )
            }
            None => {
                failed += 1;
                (Cell::Num(f64::NAN), Cell::Num(f64::NAN), Cell::Bool(false))
            }
        };
        let error = row.error.clone().unwrap_or_default();
        table.push(vec![
            Cell::Num(row.param),
            value,
            err,
            converged,
            segment,
            trend,
            error.into(),
        ]);
    }
    if failed > 0 {
        meta.warnings
            .push(format!("{failed} grid points could not be evaluated"));
    }
    let summary = format!(
        "curve: {} points for {}, {} monotonic segments, {} failed",
        curve.rows.len(),
        s.free_param,
        curve.segments.len(),
        failed
    );
    Ok(Outcome::new("curve", summary, table, meta))
}

/// `(base_dim, group)` of a configuration, from the catalog alone when it
/// has no parameter-dependent shape.
fn shape(name: &str, params: &BTreeMap<String, f64>) -> Result<(usize, Group), CliError> {
    let entry = lookup(name)?;
    if let (Ok(base), Ok(group)) = (
        entry.base_dim.parse::<usize>(),
        entry.group.parse::<Group>(),
    ) {
        return Ok((base, group));
    }
    let desc: ConfigurationDescriptor<f64> = build(name, params)?;
    Ok((desc.base_dim(), desc.group().clone()))
}

pub fn dim(name: &str, params: &BTreeMap<String, f64>) -> Result<Outcome, CliError> {
    let (base, group) = shape(name, params)?;
    let total = match build::<f64>(name, params) {
        Ok(desc) => bundle_dimension(&desc),
        Err(_) => base + group.dim(),
    };
    let mut table = Table::new([
        "configuration",
        "base_dim",
        "group",
        "group_dim",
        "bundle_dim",
    ]);
    table.push(vec![
        name.into(),
        Cell::Int(base as i64),
        group.to_string().into(),
        Cell::Int(group.dim() as i64),
        Cell::Int(total as i64),
    ]);
    let summary = format!("dim(P) = {total} ({base} + dim {group} = {})", group.dim());
    let meta = Meta {
        configuration: Some((
            name.to_string(),
            params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        )),
        quadrature: QuadratureSpec::default(),
        max_residual: None,
        flags: Vec::new(),
        warnings: Vec::new(),
    };
    Ok(Outcome::new("dim", summary, table, meta))
}

/// Full factorial sweep over `[sweep.grid]`; axes in name order, the last
/// axis varying fastest. Row failures are recorded, not fatal.
pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = configuration(cfg);
    let s = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("configuration has no [sweep] section".into()))?;
    let quad = cfg.quadrature_spec();
    lookup(&c.name)?;
    let class: Option<ClassKind> = s.class.map(Into::into);
    let names: Vec<&String> = s.grid.keys().collect();
    let axes: Vec<Vec<f64>> = s.grid.values().map(|a| a.values()).collect();
    if axes.iter().any(Vec::is_empty) {
        return Err(CoreError::InvalidParameter("sweep axes need at least one step".into()).into());
    }

    let mut columns: Vec<String> = names.iter().map(|n| n.to_string()).collect();
    columns.extend(["invariant", "quad_err", "flag"].map(String::from));
    let mut table = Table::new(columns);
    let mut meta = meta_for(Some(c), quad);
    let mut flagged = 0;
    let mut index = vec![0usize; axes.len()];
    loop {
        let point: Vec<f64> = index.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        let mut params = c.params.clone();
        for (n, &v) in names.iter().zip(&point) {
            params.insert(n.to_string(), v);
        }
        let result = build::<f64>(&c.name, &params).and_then(|d| match class {
            Some(k) => d.integrate(k, None, &quad),
            None => d.spectrum_invariant(&quad),
        });
        let mut row: Vec<Cell> = point.iter().map(|&v| Cell::Num(v)).collect();
        match result {
            Ok(ev) => {
                let flag = if ev.zero_width {
                    "ZeroWidthCycle"
                } else if !ev.integral.converged {
                    add_flag(&mut meta, FLAG_NO_CONVERGENCE);
                    FLAG_NO_CONVERGENCE
                } else {
                    ""
                };
                flagged += usize::from(!flag.is_empty());
                row.extend([
                    ev.integral.value.into(),
                    ev.integral.err.into(),
                    flag.into(),
                ]);
            }
            Err(e) => {
                flagged += 1;
                row.extend([Cell::Num(f64::NAN), Cell::Num(f64::NAN), e.kind().into()]);
            }
        }
        table.push(row);
        // odometer increment, last axis fastest
        let mut k = axes.len();
        loop {
            if k == 0 {
                let summary = format!("sweep: {} rows, {flagged} flagged", table.rows.len());
                return Ok(Outcome::new("sweep", summary, table, meta));
            }
            k -= 1;
            index[k] += 1;
            if index[k] < axes[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// The verification suite as a task outcome.
pub fn verify_outcome(opts: &VerifyOptions) -> Outcome {
    let report = verify::run(opts, |_| {});
    let mut table = Table::new(["check", "status", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.clone().into(),
            c.status.label().into(),
            c.detail.clone().into(),
        ]);
    }
    let mut meta = meta_for(None, opts.quadrature(QuadratureSpec::default()));
    if report.checks.iter().any(|c| c.no_convergence) {
        add_flag(&mut meta, FLAG_NO_CONVERGENCE);
    }
    let mut out = Outcome::new("verify", report.summary(), table, meta);
    out.report = report.checks.iter().map(|c| c.line()).collect();
    out.exit_override = Some(report.exit_code());
    out
}

/// Where the output of a configuration file goes; relative paths are
/// resolved against the configuration file's directory.
pub fn output_target(cfg: &RunConfig, config_path: &Path) -> Option<(PathBuf, Format)> {
    cfg.output.as_ref().map(|o| {
        let path = if o.path.is_relative() {
            config_path.parent().unwrap_or(Path::new(".")).join(&o.path)
        } else {
            o.path.clone()
        };
        (path, o.format)
    })
}
