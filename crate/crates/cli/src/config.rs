//! Run configuration files (TOML, strict schema).
//!
//! Unknown keys anywhere in the document are rejected, and every task
//! requires its own section. The only defaults are the documented
//! quadrature and spectrum-solver defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use topospec_core::calculus::{QuadratureSpec, Scheme};
use topospec_core::charclass::{ClassKind, CycleSpec};

/// A configuration file that failed to parse or validate.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("parse error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, " (key `{key}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Integrate,
    Spectrum,
    Curve,
    Verify,
    Dim,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Integrate => "integrate",
            Task::Spectrum => "spectrum",
            Task::Curve => "curve",
            Task::Verify => "verify",
            Task::Dim => "dim",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigurationSection {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSection {
    pub axes: Vec<usize>,
    #[serde(default)]
    pub fixed: Vec<(usize, f64)>,
    pub bounds: Vec<(f64, f64)>,
}

impl CycleSection {
    pub fn to_spec(&self) -> topospec_core::Result<CycleSpec<f64>> {
        CycleSpec::new(self.axes.clone(), self.fixed.clone(), self.bounds.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateSection {
    pub class: ClassName,
    pub cycle: Option<CycleSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassName {
    Euler2,
    Chern1,
    Pontrjagin1,
}

impl From<ClassName> for ClassKind {
    fn from(c: ClassName) -> Self {
        match c {
            ClassName::Euler2 => ClassKind::Euler2,
            ClassName::Chern1 => ClassKind::Chern1,
            ClassName::Pontrjagin1 => ClassKind::Pontrjagin1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub free_param: String,
    pub interval: (f64, f64),
    pub n_min: i64,
    pub n_max: i64,
    #[serde(default = "default_true")]
    pub use_abs: bool,
    #[serde(default = "default_scan_points")]
    pub scan_points: usize,
    #[serde(default = "default_root_tol")]
    pub root_tol: f64,
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub free_param: String,
    pub interval: (f64, f64),
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    /// `steps` equally spaced values from `min` to `max` inclusive (both
    /// ends exact).
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min; self.steps];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| match i {
                0 => self.min,
                i if i == last => self.max,
                i => snap((self.min * (last - i) as f64 + self.max * i as f64) / last as f64),
            })
            .collect()
    }
}

/// Rounds to 15 significant digits so interior grid points print as the
/// decimal the user meant (0.4, not 0.4000000000000001); the change is at
/// most about one unit in the last place.
fn snap(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub class: Option<ClassName>,
    pub grid: BTreeMap<String, GridAxis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(default)]
    pub scheme: SchemeName,
    #[serde(default = "default_points")]
    pub points_per_axis: usize,
    #[serde(default = "default_levels")]
    pub refinement_levels: usize,
    #[serde(default = "default_conv_tol")]
    pub convergence_tol: f64,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        Self {
            scheme: SchemeName::default(),
            points_per_axis: default_points(),
            refinement_levels: default_levels(),
            convergence_tol: default_conv_tol(),
        }
    }
}

impl From<QuadratureSection> for QuadratureSpec {
    fn from(q: QuadratureSection) -> Self {
        QuadratureSpec {
            scheme: match q.scheme {
                SchemeName::GaussLegendreTensor => Scheme::GaussLegendreTensor,
            },
            points_per_axis: q.points_per_axis,
            refinement_levels: q.refinement_levels,
            convergence_tol: q.convergence_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    #[default]
    GaussLegendreTensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

/// A parsed run configuration.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<Task>,
    pub configuration: Option<ConfigurationSection>,
    pub integrate: Option<IntegrateSection>,
    pub spectrum: Option<SpectrumSection>,
    pub curve: Option<CurveSection>,
    pub sweep: Option<SweepSection>,
    pub quadrature: Option<QuadratureSection>,
    pub output: Option<OutputSection>,
}

fn default_true() -> bool {
    true
}
fn default_scan_points() -> usize {
    512
}
fn default_root_tol() -> f64 {
    1e-12
}
fn default_residual_tol() -> f64 {
    1e-9
}
fn default_points() -> usize {
    QuadratureSpec::default().points_per_axis
}
fn default_levels() -> usize {
    QuadratureSpec::default().refinement_levels
}
fn default_conv_tol() -> f64 {
    QuadratureSpec::default().convergence_tol
}

/// 1-based line of a byte offset.
fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// 1-based line where `key` is assigned or opened as a table, if any.
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let t = l.trim_start();
            let header = t.strip_prefix('[').map(|r| r.trim_start_matches('['));
            match header {
                Some(h) => {
                    h.trim_start().starts_with(key)
                        && h[key.len().min(h.len())..]
                            .trim_start()
                            .starts_with([']', '.'])
                }
                None => t
                    .strip_prefix(key)
                    .is_some_and(|r| r.trim_start().starts_with('=')),
            }
        })
        .map(|i| i + 1)
}

/// The key named in a serde message such as "unknown field `x`".
fn key_in_message(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

impl RunConfig {
    /// Parses and structurally validates a configuration document.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let message = e.message().trim().to_string();
            let line = e.span().map(|s| line_of_offset(text, s.start));
            ParseError {
                key: key_in_message(&message),
                line,
                message,
            }
        })?;
        cfg.check_sections(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ParseError> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError {
            key: None,
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    fn check_sections(&self, text: &str) -> Result<(), ParseError> {
        let missing = |key: &str, why: String| ParseError {
            key: Some(key.to_string()),
            line: line_of_key(text, "task"),
            message: why,
        };
        self.check_free_params(text)?;
        let Some(task) = self.task else {
            if self.sweep.is_some() {
                return self.require_configuration(text, "sweep");
            }
            return Err(ParseError {
                key: Some("task".into()),
                line: None,
                message: "missing field `task` (or a [sweep] section)".into(),
            });
        };
        let needs = |present: bool, key: &str| {
            if present {
                Ok(())
            } else {
                Err(missing(
                    key,
                    format!("task `{}` requires a [{key}] section", task.name()),
                ))
            }
        };
        match task {
            Task::Integrate => {
                self.require_configuration(text, task.name())?;
                needs(self.integrate.is_some(), "integrate")?;
            }
            Task::Spectrum => {
                self.require_configuration(text, task.name())?;
                needs(self.spectrum.is_some(), "spectrum")?;
            }
            Task::Curve => {
                self.require_configuration(text, task.name())?;
                needs(self.curve.is_some(), "curve")?;
            }
            Task::Dim => self.require_configuration(text, task.name())?,
            Task::Verify => {}
        }
        // sections that the task would silently ignore are rejected too
        let unused: &[(&str, bool)] = &[
            (
                "integrate",
                self.integrate.is_some() && task != Task::Integrate,
            ),
            (
                "spectrum",
                self.spectrum.is_some() && task != Task::Spectrum,
            ),
            ("curve", self.curve.is_some() && task != Task::Curve),
            ("sweep", self.sweep.is_some()),
        ];
        if let Some((key, _)) = unused.iter().find(|(_, bad)| *bad) {
            return Err(ParseError {
                key: Some(key.to_string()),
                line: line_of_key(text, key),
                message: format!("section [{key}] is not used by task `{}`", task.name()),
            });
        }
        Ok(())
    }

    /// A parameter varied by a spectrum, curve or sweep must not also be
    /// fixed in `[configuration.params]`.
    fn check_free_params(&self, text: &str) -> Result<(), ParseError> {
        let Some(fixed) = self.configuration.as_ref().map(|c| &c.params) else {
            return Ok(());
        };
        let mut varied: Vec<&str> = Vec::new();
        varied.extend(self.spectrum.as_ref().map(|s| s.free_param.as_str()));
        varied.extend(self.curve.as_ref().map(|c| c.free_param.as_str()));
        if let Some(sw) = &self.sweep {
            varied.extend(sw.grid.keys().map(String::as_str));
        }
        match varied.into_iter().find(|k| fixed.contains_key(*k)) {
            Some(k) => Err(ParseError {
                key: Some(k.to_string()),
                line: line_of_key(text, "params").or_else(|| line_of_key(text, k)),
                message: format!("parameter `{k}` is both fixed in [configuration] and varied"),
            }),
            None => Ok(()),
        }
    }

    fn require_configuration(&self, text: &str, what: &str) -> Result<(), ParseError> {
        if self.configuration.is_none() {
            return Err(ParseError {
                key: Some("configuration".into()),
                line: line_of_key(text, "task"),
                message: format!("{what} requires a [configuration] section"),
            });
        }
        Ok(())
    }

    /// The quadrature section, or the documented defaults.
    pub fn quadrature_spec(&self) -> QuadratureSpec {
        self.quadrature.unwrap_or_default().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MONOPOLE: &str = r#"
task = "integrate"

[configuration]
name = "monopole"
params = { g = 0.5 }

[integrate]
class = "chern1"
"#;

    #[test]
    fn parses_a_minimal_integrate_config() {
        let c = RunConfig::parse(MONOPOLE).unwrap();
        assert_eq!(c.task, Some(Task::Integrate));
        assert_eq!(c.configuration.as_ref().unwrap().params["g"], 0.5);
        assert_eq!(c.quadrature_spec(), QuadratureSpec::default());
        assert!(c.output.is_none());
    }

    #[test]
    fn unknown_top_level_key_is_named_with_its_line() {
        let text = format!("{MONOPOLE}\n[quadratur]\npoints_per_axis = 8\n");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("quadratur"));
        assert_eq!(e.line, Some(11));
        assert!(e.to_string().contains("quadratur"));
    }

    #[test]
    fn unknown_nested_key_is_rejected() {
        let text = MONOPOLE.replace("class = \"chern1\"", "class = \"chern1\"\nclas = 2");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("clas"));
        assert_eq!(e.line, Some(10));
    }

    #[test]
    fn missing_task_section_is_reported() {
        let text = MONOPOLE.replace("[integrate]\nclass = \"chern1\"\n", "");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("integrate"));
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn unused_section_is_rejected() {
        let text =
            format!("{MONOPOLE}\n[curve]\nfree_param = \"h\"\ninterval = [0.1, 1.0]\ngrid = 3\n");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("curve"));
        assert_eq!(e.line, Some(11));
    }

    #[test]
    fn bad_enum_value_is_rejected() {
        let text = MONOPOLE.replace("chern1", "chern2");
        let e = RunConfig::parse(&text).unwrap_err();
        assert_eq!(e.line, Some(9));
        assert!(e.message.contains("chern2"));
    }

    #[test]
    fn spectrum_defaults() {
        let text = r#"
task = "spectrum"
[configuration]
name = "oscillator"
params = { m = 1, k1 = 1, k2 = 0, E = 1, L = 1 }
[spectrum]
free_param = "q0"
interval = [0.001, 1.4]
n_min = 1
n_max = 5
"#;
        let c = RunConfig::parse(text).unwrap();
        let s = c.spectrum.unwrap();
        assert!(s.use_abs);
        assert_eq!(s.scan_points, 512);
        assert_eq!(s.root_tol, 1e-12);
        assert_eq!(s.residual_tol, 1e-9);
    }

    #[test]
    fn sweep_grid_values() {
        let a = GridAxis {
            min: 0.2,
            max: 0.8,
            steps: 4,
        };
        let v = a.values();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.2);
        assert_eq!(v[3], 0.8);
        assert_eq!(v[1], 0.4);
        assert_eq!(v[2], 0.6);
        let one = GridAxis {
            min: 0.5,
            max: 0.5,
            steps: 1,
        };
        assert_eq!(one.values(), vec![0.5]);
    }

    #[test]
    fn varied_parameter_may_not_be_fixed() {
        let text = r#"
task = "curve"
[configuration]
name = "monopole"
params = { g = 0.5 }
[curve]
free_param = "g"
interval = [0.1, 1.0]
grid = 3
"#;
        let e = RunConfig::parse(text).unwrap_err();
        assert_eq!(e.key.as_deref(), Some("g"));
        assert_eq!(e.line, Some(5));
    }

    #[test]
    fn sweep_without_task() {
        let text = r#"
[configuration]
name = "reissner_nordstrom"
params = { m = 1, r0 = 1 }
[sweep.grid.e]
min = 0.2
max = 0.8
steps = 4
"#;
        let c = RunConfig::parse(text).unwrap();
        assert!(c.task.is_none());
        assert_eq!(c.sweep.unwrap().grid["e"].steps, 4);
    }

    #[test]
    fn line_lookup() {
        let t = "a = 1\n[b]\nc = 2\n[[d.e]]\n";
        assert_eq!(line_of_key(t, "a"), Some(1));
        assert_eq!(line_of_key(t, "b"), Some(2));
        assert_eq!(line_of_key(t, "c"), Some(3));
        assert_eq!(line_of_key(t, "d"), Some(4));
        assert_eq!(line_of_key(t, "x"), None);
    }
}
