//! Run configuration: defaults, then a TOML config file, then command-line
//! flags. The resolved configuration is echoed into every output directory
//! as `config.toml`; feeding that file back with `--config` repeats the run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use curvlab_core::domain::{builtin_domain, DomainSpec};
use curvlab_core::pde::{Nonlinearity, Problem};
use curvlab_core::revolution::{RevolutionProfile, DEFAULT_CELLS};

use crate::error::{CliError, Result};
use crate::expr::ExprNonlinearity;
use crate::formats::{read_text, DomainRecord, ProfileRecord};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_NS: usize = 64;
pub const DEFAULT_NT: usize = 128;
pub const DEFAULT_OUT: &str = "curvlab-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Solve,
    Audit,
    Scan,
    Revolution,
    Catalogue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RevolutionMode {
    /// `k_max` eigenpairs for each `l ≤ l_max`.
    Eigen,
    /// First Dirichlet eigenfunction of a profile with boundary.
    #[serde(alias = "dirichlet")]
    #[value(alias = "dirichlet")]
    Monotonicity,
    /// Second eigenvalue of a closed profile.
    Closed,
    /// Sweep over a family of closed profiles.
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    /// `Θ = sin r + ε sin 2r sin r`.
    Sin2,
    /// `Θ = sin r (1 − ε sin² r)`.
    Oblate,
}

/// `[scan]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Only `hyp_elongation` for now.
    pub family: String,
    pub r0: f64,
    pub e_max: f64,
    pub members: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { family: "hyp_elongation".into(), r0: 0.8, e_max: 0.35, members: 8 }
    }
}

/// `[revolution]` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RevolutionConfig {
    pub mode: RevolutionMode,
    /// Built-in profile name; ignored when `profile_record` is set.
    pub profile: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_record: Option<ProfileRecord>,
    /// Dimension for built-in profiles.
    pub dim: usize,
    pub l_max: usize,
    pub k_max: usize,
    pub cells: usize,
    pub family: ProbeFamily,
    pub samples: usize,
    pub eps_max: f64,
}

impl Default for RevolutionConfig {
    fn default() -> Self {
        Self {
            mode: RevolutionMode::Closed,
            profile: "sphere".into(),
            profile_record: None,
            dim: 2,
            l_max: 2,
            k_max: 3,
            cells: DEFAULT_CELLS,
            family: ProbeFamily::Sin2,
            samples: 10,
            eps_max: 0.1,
        }
    }
}

/// The config file. Every key is optional; see `docs/formats.md`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    /// Catalogue label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    /// Path to a domain record, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_file: Option<PathBuf>,
    /// Inline domain record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_record: Option<DomainRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nl: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nt: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revolution: Option<RevolutionConfig>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("config file: {e}")))
    }

    /// Reads a config file and makes `domain_file` absolute.
    pub fn load(path: &Path) -> Result<Self> {
        let mut c = Self::parse(&read_text(path)?)?;
        if let (Some(f), Some(dir)) = (&c.domain_file, path.parent()) {
            if f.is_relative() {
                c.domain_file = Some(dir.join(f));
            }
        }
        Ok(c)
    }

    /// `other` wins where it has a value.
    pub fn overlay(mut self, other: ConfigFile) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        // A domain given at a higher level replaces every lower-level form.
        if other.domain.is_some() || other.domain_file.is_some() || other.domain_record.is_some() {
            self.domain = None;
            self.domain_file = None;
            self.domain_record = None;
        }
        take!(command, domain, domain_file, domain_record, nl, ns, nt, seed, out, scan, revolution);
        self
    }
}

/// Nonlinearity spec: `torsion`, `eigen` or `custom:<expr>`.
#[derive(Debug, Clone)]
pub enum NlSpec {
    Torsion,
    Eigen,
    Custom(ExprNonlinearity),
}

impl NlSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "torsion" => Ok(NlSpec::Torsion),
            "eigen" => Ok(NlSpec::Eigen),
            _ => {
                let Some(src) = s.strip_prefix("custom:") else {
                    return Err(CliError::config(format!(
                        "unknown nonlinearity '{s}' (torsion, eigen or custom:<expr>)"
                    )));
                };
                let e =
                    ExprNonlinearity::parse(src).map_err(|e| CliError::config(format!("custom nonlinearity: {e}")))?;
                Nonlinearity::custom(e.clone()).validate()?;
                Ok(NlSpec::Custom(e))
            }
        }
    }

    pub fn problem(&self) -> Problem {
        match self {
            NlSpec::Torsion => Problem::Torsion,
            NlSpec::Eigen => Problem::FirstEigen,
            NlSpec::Custom(e) => Problem::Semilinear(Nonlinearity::custom(e.clone())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            NlSpec::Torsion => "torsion".into(),
            NlSpec::Eigen => "eigen".into(),
            NlSpec::Custom(e) => format!("custom:{}", e.source),
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub domain: Option<DomainSpec>,
    pub nl: NlSpec,
    pub ns: usize,
    pub nt: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub scan: ScanConfig,
    pub revolution: RevolutionConfig,
}

impl RunConfig {
    pub fn resolve(c: ConfigFile) -> Result<Self> {
        let command = c.command.ok_or_else(|| CliError::config("no command given"))?;
        let domain = if let Some(r) = &c.domain_record {
            Some(r.to_domain()?)
        } else if let Some(f) = &c.domain_file {
            Some(DomainRecord::parse(&read_text(f)?)?.to_domain()?)
        } else if let Some(l) = &c.domain {
            Some(builtin_domain(l).ok_or_else(|| CliError::config(format!("unknown domain label '{l}'")))?)
        } else {
            None
        };
        let revolution = c.revolution.unwrap_or_default();
        Ok(Self {
            command,
            domain,
            nl: NlSpec::parse(c.nl.as_deref().unwrap_or("torsion"))?,
            ns: c.ns.unwrap_or(DEFAULT_NS),
            nt: c.nt.unwrap_or(DEFAULT_NT),
            seed: c.seed.unwrap_or(DEFAULT_SEED),
            out: c.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            scan: c.scan.unwrap_or_default(),
            revolution,
        })
    }

    pub fn require_domain(&self) -> Result<&DomainSpec> {
        self.domain.as_ref().ok_or_else(|| CliError::config("this command needs --domain or --domain-file"))
    }

    /// The echo: everything needed to repeat the run, with the domain
    /// inlined. The output directory is left out so that echoes of equal
    /// runs are equal.
    pub fn echo(&self) -> ConfigFile {
        let revolution = (self.command == CommandKind::Revolution).then(|| self.revolution.clone());
        ConfigFile {
            command: Some(self.command),
            domain: None,
            domain_file: None,
            domain_record: self.domain.as_ref().map(DomainRecord::from_domain),
            nl: Some(self.nl.name()),
            ns: Some(self.ns),
            nt: Some(self.nt),
            seed: Some(self.seed),
            out: None,
            scan: (self.command == CommandKind::Scan).then(|| self.scan.clone()),
            revolution,
        }
    }

    /// The revolution profile named by the configuration.
    pub fn revolution_profile(&self) -> Result<RevolutionProfile> {
        let r = &self.revolution;
        if let Some(rec) = &r.profile_record {
            return rec.to_profile();
        }
        builtin_profile(&r.profile, r.dim)
    }
}

/// Built-in revolution profiles.
pub const BUILTIN_PROFILES: [&str; 7] = ["sphere", "disc", "hemisphere", "cap", "hyp_disc", "oblate", "prolate"];

pub fn builtin_profile(name: &str, dim: usize) -> Result<RevolutionProfile> {
    use std::f64::consts::FRAC_PI_2;
    let mut p = match name {
        "sphere" => {
            let mut p = RevolutionProfile::sphere(dim);
            p.validate()?;
            p.name = "sphere".into();
            return Ok(p);
        }
        "disc" => RevolutionProfile::geodesic_ball(0, dim, 1.0)?,
        "hemisphere" => RevolutionProfile::geodesic_ball(1, dim, FRAC_PI_2)?,
        "cap" => RevolutionProfile::geodesic_ball(1, dim, 1.0)?,
        "hyp_disc" => RevolutionProfile::geodesic_ball(-1, dim, 1.0)?,
        "oblate" => RevolutionProfile::oblate(0.2, dim)?,
        "prolate" => RevolutionProfile::oblate(-0.1, dim)?,
        _ => return Err(CliError::config(format!("unknown profile '{name}' ({})", BUILTIN_PROFILES.join(", ")))),
    };
    p.name = name.into();
    Ok(p)
}
