//! Text formats: domain and profile records (TOML) and field tables.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use curvlab_core::domain::DomainSpec;
use curvlab_core::geometry::{ChartPoint, ModelSurface};
use curvlab_core::pde::ScalarField;
use curvlab_core::revolution::{RevolutionProfile, ThetaKind};

use crate::error::{CliError, Result};

/// A domain as written in a domain file:
///
/// ```toml
/// label = "my_oval"
/// surface = "hyperbolic"       # sphere | plane | hyperbolic
/// pole = [0.0, 0.0]            # (θ, φ) on the sphere, (x, y) otherwise
/// fourier_cos = [1.0, 0.0, 0.1]
/// fourier_sin = []
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainRecord {
    pub label: String,
    pub surface: String,
    pub pole: [f64; 2],
    pub fourier_cos: Vec<f64>,
    #[serde(default)]
    pub fourier_sin: Vec<f64>,
}

pub fn parse_surface(name: &str) -> Result<ModelSurface> {
    ModelSurface::ALL
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| CliError::config(format!("unknown surface '{name}' (sphere, plane or hyperbolic)")))
}

impl DomainRecord {
    pub fn from_domain(d: &DomainSpec) -> Self {
        Self {
            label: d.label.clone(),
            surface: d.surface.name().into(),
            pole: d.pole.coords(),
            fourier_cos: d.fourier_cos.clone(),
            fourier_sin: d.fourier_sin.clone(),
        }
    }

    pub fn to_domain(&self) -> Result<DomainSpec> {
        let surface = parse_surface(&self.surface)?;
        let pole = ChartPoint::new(surface, self.pole[0], self.pole[1])
            .map_err(|e| CliError::config(format!("pole of '{}': {e}", self.label)))?;
        Ok(DomainSpec::new(surface, pole, self.fourier_cos.clone(), self.fourier_sin.clone(), &self.label)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("domain record: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("domain records always serialise")
    }
}

/// A manifold of revolution as written in a profile file:
///
/// ```toml
/// name = "oblate"
/// n = 2
/// D = 3.141592653589793
/// closed = true
/// theta_kind = "oblate(0.2)"   # sin | id | sinh | fourier_perturbed(c1, c2, ...) | oblate(a)
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRecord {
    pub name: String,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: f64,
    pub closed: bool,
    pub theta_kind: String,
}

impl ProfileRecord {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("profile record: {e}")))
    }

    pub fn from_profile(p: &RevolutionProfile) -> Self {
        Self { name: p.name.clone(), n: p.n, d: p.d, closed: p.closed, theta_kind: p.theta.name() }
    }

    pub fn to_profile(&self) -> Result<RevolutionProfile> {
        let theta = parse_theta_kind(&self.theta_kind)?;
        Ok(RevolutionProfile::new(&self.name, theta, self.n, self.d, self.closed)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profile records always serialise")
    }
}

/// `sin`, `id`, `sinh`, `fourier_perturbed(c1, c2, ...)` or `oblate(a)`.
pub fn parse_theta_kind(s: &str) -> Result<ThetaKind> {
    let s = s.trim();
    let bad = || CliError::config(format!("unknown theta_kind '{s}'"));
    let (head, args) = match s.find('(') {
        Some(i) => {
            let inner = s[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            let args = inner
                .split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(|a| a.parse::<f64>().map_err(|_| CliError::config(format!("bad number '{a}' in theta_kind"))))
                .collect::<Result<Vec<f64>>>()?;
            (s[..i].trim(), Some(args))
        }
        None => (s, None),
    };
    match (head, args) {
        ("sin", None) => Ok(ThetaKind::Sin),
        ("id", None) => Ok(ThetaKind::Id),
        ("sinh", None) => Ok(ThetaKind::Sinh),
        ("fourier_perturbed", Some(c)) => Ok(ThetaKind::FourierPerturbed(c)),
        ("oblate", Some(a)) if a.len() == 1 => Ok(ThetaKind::Oblate(a[0])),
        _ => Err(bad()),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.to_path_buf(), source })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

/// Field table: one JSON header line behind `# `, then CSV columns
/// `s,t,r,chart_x,chart_y,value`, one row per grid node (pole first).
pub fn field_table(field: &ScalarField, residual: f64) -> String {
    let g = &*field.grid;
    let header = serde_json::json!({
        "domain": g.domain.label,
        "surface": g.domain.surface.name(),
        "n_s": g.n_s,
        "n_t": g.n_t,
        "residual": residual,
    });
    let mut out = format!("# {header}\ns,t,r,chart_x,chart_y,value\n");
    for k in 0..g.n_nodes() {
        let (i, _) = g.ring_angle(k);
        let (r, t) = g.polar(k);
        let c = g.domain.surface.from_ambient(g.position(k));
        let _ = writeln!(out, "{},{},{},{},{},{}", g.s(i), t, r, c[0], c[1], field.values[k]);
    }
    out
}

/// Parses a field table back into its header and rows.
pub fn parse_field_table(text: &str) -> Result<(serde_json::Value, Vec<[f64; 6]>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| CliError::config("field table without header"))?;
    let header = serde_json::from_str(header).map_err(|e| CliError::config(format!("field table header: {e}")))?;
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.deserialize::<[f64; 6]>() {
        rows.push(rec.map_err(|e| CliError::config(format!("field table row: {e}")))?);
    }
    Ok((header, rows))
}
