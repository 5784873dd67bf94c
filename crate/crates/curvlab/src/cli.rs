//! Argument parsing. Flags override the config file, which overrides the
//! built-in defaults.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{CommandKind, ConfigFile, ProbeFamily, RevolutionMode, RunConfig};
use crate::error::{CliError, Result, EXIT_CONFIG, EXIT_OK};
use crate::formats::{read_text, ProfileRecord};

#[derive(Debug, Parser)]
#[command(name = "curvlab", version, about = "Critical points of semilinear Dirichlet problems on curved surfaces")]
pub struct Cli {
    /// TOML config file; flags given here override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Catalogue label (see `curvlab catalogue`).
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// Domain record file.
    #[arg(long, global = true, conflicts_with = "domain")]
    pub domain_file: Option<PathBuf>,
    /// `torsion`, `eigen` or `custom:<expr in s>`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nl: Option<String>,
    /// Radial resolution.
    #[arg(long, global = true)]
    pub ns: Option<usize>,
    /// Angular resolution.
    #[arg(long, global = true)]
    pub nt: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Without a subcommand the config file must name one.
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Dirichlet problem and write the field.
    Solve,
    /// Solve, then audit the critical points.
    Audit,
    /// Audit every member of a domain family.
    Scan(ScanArgs),
    /// Radial spectra on manifolds of revolution.
    Revolution(RevolutionArgs),
    /// List the built-in domains.
    Catalogue,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub members: Option<usize>,
    /// Geodesic radius of the round member.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Largest elongation.
    #[arg(long)]
    pub e_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RevolutionArgs {
    #[arg(value_enum)]
    pub mode: Option<RevolutionMode>,
    /// Built-in profile: sphere, disc, hemisphere, cap, hyp_disc, oblate, prolate.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, conflicts_with = "profile")]
    pub profile_file: Option<PathBuf>,
    /// Dimension of built-in profiles.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub l_max: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<ProbeFamily>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub eps_max: Option<f64>,
}

impl Cli {
    /// Merges the config file (if any) with the flags.
    pub fn into_config(self) -> Result<ConfigFile> {
        let base = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let mut flags = ConfigFile {
            command: None,
            domain: self.domain,
            domain_file: self.domain_file,
            domain_record: None,
            nl: self.nl,
            ns: self.ns,
            nt: self.nt,
            seed: self.seed,
            out: self.out,
            scan: None,
            revolution: None,
        };
        match self.command {
            None => {}
            Some(Command::Solve) => flags.command = Some(CommandKind::Solve),
            Some(Command::Audit) => flags.command = Some(CommandKind::Audit),
            Some(Command::Catalogue) => flags.command = Some(CommandKind::Catalogue),
            Some(Command::Scan(a)) => {
                flags.command = Some(CommandKind::Scan);
                let mut s = base.scan.clone().unwrap_or_default();
                if let Some(m) = a.members {
                    s.members = m;
                }
                if let Some(r) = a.r0 {
                    s.r0 = r;
                }
                if let Some(e) = a.e_max {
                    s.e_max = e;
                }
                flags.scan = Some(s);
            }
            Some(Command::Revolution(a)) => {
                flags.command = Some(CommandKind::Revolution);
                let mut r = base.revolution.clone().unwrap_or_default();
                macro_rules! set {
                    ($($f:ident),*) => { $( if let Some(v) = a.$f { r.$f = v; } )* };
                }
                set!(mode, dim, l_max, k_max, cells, family, samples, eps_max);
                if let Some(p) = a.profile {
                    r.profile = p;
                    r.profile_record = None;
                }
                if let Some(f) = a.profile_file {
                    r.profile_record = Some(ProfileRecord::parse(&read_text(&f)?)?);
                }
                flags.revolution = Some(r);
            }
        }
        Ok(base.overlay(flags))
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::resolve(cli.into_config()?)?;
    let outcome = commands::run(&cfg)?;
    for l in &outcome.lines {
        let _ = writeln!(out, "{l}");
    }
    Ok(outcome.code)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Summary lines go to `out`, errors to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{e}");
                    EXIT_CONFIG
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            CliError::exit_code(&e)
        }
    }
}
