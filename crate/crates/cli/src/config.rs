//! Run configuration: a sectioned TOML file, an optional built-in preset and
//! `--set section.key=value` overrides, resolved into core types.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use swdl_core::moments::SignalClass;
use swdl_core::signals::GaussianChirpParams;
use swdl_core::symplectic::{impulse_residual, lfm_a2, optimal_a1};
use swdl_core::tfd::covering_axes;
use swdl_core::{Axis, ChirpForm, SampledSignal, Signal, SymplecticMatrix};
use toml::{Table, Value};

use crate::error::CliError;

/// The LFM synthesis example: `e^{j(t + t²/2)}` on `[-5, 5]`, 201×201 grid.
pub const FIG1: &str = r#"
[signal]
kind = "lfm"
alpha = 1.0
beta = 0.5
window = [-5.0, 5.0]

[matrices.a1]
entries = [2.0, 2.0, -0.25, 0.25]

[matrices.a2]
entries = [0.0, 0.5, -2.0, 1.0]

[grid]
t = [-5.0, 5.0, 201]
u = [-5.0, 5.0, 201]
slopes = [0.0, 2.0, 101]

[run]
alpha_known = 1.0
"#;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSpec {
    Gaussian {
        #[serde(default)]
        t0: f64,
        #[serde(default = "one")]
        zeta: f64,
        #[serde(default)]
        epsilon: f64,
    },
    GaussExponential {
        #[serde(default)]
        t0: f64,
        #[serde(default = "one")]
        zeta: f64,
        #[serde(default)]
        epsilon: f64,
        omega0: f64,
        #[serde(default)]
        varsigma: f64,
    },
    GaussChirp {
        #[serde(default)]
        t0: f64,
        #[serde(default = "one")]
        zeta: f64,
        #[serde(default)]
        epsilon: f64,
        #[serde(default)]
        omega0: f64,
        #[serde(default)]
        varsigma: f64,
        xi: f64,
        m: u8,
    },
    Lfm {
        alpha: f64,
        beta: f64,
        window: [f64; 2],
    },
    /// `t,re,im` rows on a uniform time lattice.
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    /// `optimal_a1(a, b)`
    Optimal,
    /// Second matrix meeting the impulse condition for rate `beta`.
    Lfm,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub entries: Option<[f64; 4]>,
    pub select: Option<Selector>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub beta: Option<f64>,
    pub b2: Option<f64>,
    pub d2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrices {
    pub a1: MatrixSpec,
    pub a2: MatrixSpec,
}

/// `[lo, hi, n]`
pub type AxisSpec = [f64; 3];

fn default_points() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t: Option<AxisSpec>,
    pub u: Option<AxisSpec>,
    /// Lattice size for axes derived from the support of `W`.
    #[serde(default = "default_points")]
    pub points: usize,
    pub slopes: Option<AxisSpec>,
    pub intercepts: Option<AxisSpec>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { t: None, u: None, points: default_points(), slopes: None, intercepts: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodTag {
    #[default]
    Definition,
    Equivalent,
    Both,
}

fn default_tolerance() -> f64 {
    1e-4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default)]
    pub method: MethodTag,
    /// Largest accepted relative L2 gap between the two paths.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub alpha_known: Option<f64>,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec { method: MethodTag::default(), tolerance: default_tolerance(), alpha_known: None }
    }
}

fn default_class() -> String {
    "complex".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default = "default_class")]
    pub class: String,
    /// Relative slack below which a bound counts as attained.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        BoundsSpec { class: default_class(), tolerance: default_tolerance() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub signal: SignalSpec,
    pub matrices: Matrices,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub bounds: BoundsSpec,
}

fn parse_table(text: &str, origin: &str) -> Result<Table, CliError> {
    text.parse::<Table>().map_err(|e| CliError::Config(format!("{origin}: {e}")))
}

/// Recursively overlays `top` onto `base`.
fn merge(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Applies `section.key=value`; the value is read as TOML, falling back to
/// a bare string.
fn apply_set(table: &mut Table, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set `{assignment}`: expected key=value")))?;
    let value = format!("v = {}", raw.trim())
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.trim().to_string()));
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("--set `{assignment}`: empty key")));
    }
    let mut node = table;
    for k in &keys[..keys.len() - 1] {
        let entry = node.entry(k.to_string()).or_insert_with(|| Value::Table(Table::new()));
        node = match entry {
            Value::Table(t) => t,
            _ => return Err(CliError::Config(format!("--set `{assignment}`: `{k}` is not a section"))),
        };
    }
    node.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

/// Preset, then file, then `--set` overrides.
pub fn load(preset: Option<&str>, path: Option<&Path>, sets: &[String]) -> Result<RunConfig, CliError> {
    let mut table = Table::new();
    if let Some(p) = preset {
        match p {
            "fig1" => merge(&mut table, parse_table(FIG1, "preset fig1")?),
            other => return Err(CliError::Config(format!("unknown preset `{other}`"))),
        }
    }
    if let Some(path) = path {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        merge(&mut table, parse_table(&text, &path.display().to_string())?);
    }
    for s in sets {
        apply_set(&mut table, s)?;
    }
    if table.is_empty() {
        return Err(CliError::Config("no configuration: pass --config or --preset".into()));
    }
    Value::Table(table).try_into::<RunConfig>().map_err(|e| CliError::Config(e.to_string().trim().replace('\n', " ")))
}

fn need(v: Option<f64>, field: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Config(format!("matrices: missing field `{field}`")))
}

fn axis(spec: &AxisSpec, field: &str) -> Result<Axis, CliError> {
    let n = spec[2];
    if !(n >= 1.0 && n.fract() == 0.0) {
        return Err(CliError::Config(format!("grid.{field}: point count must be a positive integer, got {n}")));
    }
    Axis::linspace(spec[0], spec[1], n as usize).map_err(|e| CliError::Config(format!("grid.{field}: {e}")))
}

/// Signal, matrices and grids resolved from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub signal: Signal,
    pub a1: SymplecticMatrix,
    pub a2: SymplecticMatrix,
    pub t: Axis,
    pub u: Axis,
    pub slopes: Axis,
    pub intercepts: Axis,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn signal(&self) -> Result<Signal, CliError> {
        let s = match &self.signal {
            SignalSpec::Gaussian { t0, zeta, epsilon } => Signal::gaussian(*t0, *zeta, *epsilon)?,
            SignalSpec::GaussExponential { t0, zeta, epsilon, omega0, varsigma } => {
                Signal::gauss_exponential(*t0, *zeta, *epsilon, *omega0, *varsigma)?
            }
            SignalSpec::GaussChirp { t0, zeta, epsilon, omega0, varsigma, xi, m } => {
                let form = ChirpForm::from_index(*m)
                    .ok_or_else(|| CliError::Config(format!("signal.m: expected 1 to 4, got {m}")))?;
                let p = GaussianChirpParams { epsilon: *epsilon, varsigma: *varsigma, ..GaussianChirpParams::gaussian(*t0, *zeta) }
                    .with_omega0(*omega0)
                    .with_chirp(*xi, form);
                Signal::gauss_chirp(p)?
            }
            SignalSpec::Lfm { alpha, beta, window } => Signal::lfm(*alpha, *beta).windowed(window[0], window[1]),
            SignalSpec::Csv { path } => {
                let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                Signal::sampled(SampledSignal::read_csv(BufReader::new(file))?)
            }
        };
        Ok(s)
    }

    pub fn a1(&self) -> Result<SymplecticMatrix, CliError> {
        let m = &self.matrices.a1;
        match (m.entries, m.select) {
            (Some([a, b, c, d]), None) => Ok(SymplecticMatrix::new(a, b, c, d)?),
            (None, Some(Selector::Optimal)) => Ok(optimal_a1(need(m.a, "a1.a")?, need(m.b, "a1.b")?)?),
            (None, Some(Selector::Lfm)) => Err(CliError::Config("matrices.a1: `lfm` selects a second matrix".into())),
            _ => Err(CliError::Config("matrices.a1: give exactly one of `entries` or `select`".into())),
        }
    }

    /// The `lfm` selector builds `A2` from the first row of `A1`, which
    /// meets the impulse condition when `A1` is the optimal completion.
    pub fn a2(&self, a1: &SymplecticMatrix) -> Result<SymplecticMatrix, CliError> {
        let m = &self.matrices.a2;
        match (m.entries, m.select) {
            (Some([a, b, c, d]), None) => Ok(SymplecticMatrix::new(a, b, c, d)?),
            (None, Some(Selector::Lfm)) => {
                Ok(lfm_a2(need(m.beta, "a2.beta")?, need(m.b2, "a2.b2")?, m.d2.unwrap_or(1.0), a1.a(), a1.b())?)
            }
            (None, Some(Selector::Optimal)) => Err(CliError::Config("matrices.a2: `optimal` selects a first matrix".into())),
            _ => Err(CliError::Config("matrices.a2: give exactly one of `entries` or `select`".into())),
        }
    }

    pub fn class(&self) -> Result<SignalClass, CliError> {
        self.bounds.class.parse().map_err(|e: swdl_core::Error| CliError::Config(format!("bounds.class: {e}")))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let signal = self.signal()?;
        let a1 = self.a1()?;
        let a2 = self.a2(&a1)?;
        let mut warnings = Vec::new();
        if let (Some(Selector::Lfm), Some(beta)) = (self.matrices.a2.select, self.matrices.a2.beta) {
            let r = impulse_residual(beta, &a1, &a2);
            if r.abs() > 1e-12 {
                warnings.push(format!("impulse condition not met for this A1 (residual {r:e})"));
            }
        }
        let (t, u) = match (&self.grid.t, &self.grid.u) {
            (Some(t), Some(u)) => (axis(t, "t")?, axis(u, "u")?),
            (t, u) => {
                let n = self.grid.points;
                let (ct, cu) = covering_axes(&signal, &a1, &a2, n, n)?;
                (t.as_ref().map(|s| axis(s, "t")).transpose()?.unwrap_or(ct), u.as_ref().map(|s| axis(s, "u")).transpose()?.unwrap_or(cu))
            }
        };
        let slopes = axis(&self.grid.slopes.unwrap_or([0.0, 2.0, 101.0]), "slopes")?;
        let intercepts = match &self.grid.intercepts {
            Some(s) => axis(s, "intercepts")?,
            None => u,
        };
        Ok(Resolved { signal, a1, a2, t, u, slopes, intercepts, warnings })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_resolves() {
        let c = load(Some("fig1"), None, &[]).unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.a1.entries(), [2.0, 2.0, -0.25, 0.25]);
        assert_eq!((r.t.len, r.u.len, r.slopes.len), (201, 201, 101));
        assert_eq!(r.intercepts, r.u);
        assert_eq!(c.run.alpha_known, Some(1.0));
    }

    #[test]
    fn set_overrides() {
        let sets = ["grid.t=[-1, 1, 11]".to_string(), "run.method=both".to_string(), "bounds.class=real".to_string()];
        let c = load(Some("fig1"), None, &sets).unwrap();
        assert_eq!(c.grid.t, Some([-1.0, 1.0, 11.0]));
        assert_eq!(c.run.method, MethodTag::Both);
        assert_eq!(c.class().unwrap(), SignalClass::Real);
    }

    #[test]
    fn unknown_field_is_named() {
        let e = load(Some("fig1"), None, &["signal.gamma=2".to_string()]).unwrap_err();
        assert!(matches!(&e, CliError::Config(m) if m.contains("gamma")), "{e}");
        let e = load(Some("fig2"), None, &[]).unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
        let e = load(None, None, &["bad".to_string()]).unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
    }

    #[test]
    fn selectors() {
        let sets = [
            "matrices.a1={select=\"optimal\", a=2, b=2}".to_string(),
            "matrices.a2={select=\"lfm\", beta=0.5, b2=0.5}".to_string(),
        ];
        let r = load(Some("fig1"), None, &sets).unwrap().resolve().unwrap();
        assert_eq!(r.a1.entries(), [2.0, 2.0, -0.25, 0.25]);
        assert_eq!(r.a2.entries(), [0.0, 0.5, -2.0, 1.0]);
        assert!(r.warnings.is_empty());
        let both = ["matrices.a1.select=\"optimal\"".to_string()];
        assert!(load(Some("fig1"), None, &both).unwrap().a1().is_err());
    }

    #[test]
    fn auto_axes_cover_the_signal() {
        let text = "[signal]\nkind = \"gaussian\"\n[matrices.a1]\nentries = [2, 2, -0.25, 0.25]\n[matrices.a2]\nentries = [0, 0.5, -2, 1]\n[grid]\npoints = 31\n";
        let table = parse_table(text, "inline").unwrap();
        let c: RunConfig = Value::Table(table).try_into().unwrap();
        let r = c.resolve().unwrap();
        assert_eq!((r.t.len, r.u.len), (31, 31));
        assert!(r.t.start < 0.0 && r.t.end() > 0.0);
    }

    #[test]
    fn bad_axis_count() {
        let c = load(Some("fig1"), None, &["grid.t=[-1, 1, 2.5]".to_string()]).unwrap();
        assert!(matches!(c.resolve(), Err(CliError::Config(m)) if m.contains("grid.t")));
    }
}
