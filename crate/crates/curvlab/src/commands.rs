//! The five commands. Each writes its artefacts under `cfg.out`, echoes
//! the resolved configuration there as `config.toml`, and returns an exit
//! code with a few summary lines for the terminal.

use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use curvlab_core::domain::{builtin_domains, check_hypotheses, hyperbolic_elongation_family, DomainSpec};
use curvlab_core::morse::{run_audit, AuditReport, Classification, Verdict};
use curvlab_core::pde::{solve, solve_first_eigen, stability_spectrum, PolarGrid, Problem};
use curvlab_core::revolution::{
    closed_second_eigen_analysis_with, conjecture_probe, first_dirichlet_monotonicity_with, sin2_family, sl_eigen,
    MultiplicityClass, RevolutionProfile, SturmLiouvilleProblem,
};

use crate::config::{CommandKind, ConfigFile, NlSpec, ProbeFamily, RevolutionMode, RunConfig};
use crate::error::{CliError, Result, EXIT_AUDIT_FAIL, EXIT_OK, EXIT_SOLVER};
use crate::formats::{field_table, write_text, DomainRecord};
use crate::report;

/// Uniform pairs handed to the `Z` sampler; far more than it ever needs.
pub const UNIFORM_PAIRS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub lines: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    write_text(&cfg.out.join("config.toml"), &toml::to_string(&cfg.echo()).expect("configs always serialise"))?;
    match cfg.command {
        CommandKind::Solve => cmd_solve(cfg),
        CommandKind::Audit => cmd_audit(cfg),
        CommandKind::Scan => cmd_scan(cfg),
        CommandKind::Revolution => cmd_revolution(cfg),
        CommandKind::Catalogue => cmd_catalogue(cfg),
    }
}

/// Seeded uniforms in `[0, 1)²` for `Z` base points.
pub fn uniforms(seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..UNIFORM_PAIRS).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect()
}

fn config_value(c: &ConfigFile) -> Value {
    serde_json::to_value(c).expect("configs always serialise")
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    write_text(path, &report::to_string(v))
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome> {
    let domain = cfg.require_domain()?;
    let grid = Arc::new(PolarGrid::new(domain.clone(), cfg.ns, cfg.nt)?);
    let problem = cfg.nl.problem();
    let sol = solve(&grid, &problem)?;
    let stab = stability_spectrum(&grid, &sol.nonlinearity, &sol.field)?;
    let solver = match problem {
        Problem::Torsion => "conjugate_gradient",
        Problem::FirstEigen => "inverse_iteration",
        Problem::Semilinear(_) => "newton",
    };
    let lambda = match sol.nonlinearity {
        curvlab_core::pde::Nonlinearity::Eigen(l) => Some(l),
        _ => None,
    };
    let u_pole = sol.field.values[0];
    let doc = json!({
        "header": report::header("solve"),
        "config": config_value(&cfg.echo()),
        "domain": domain.label,
        "solution": {
            "nonlinearity": sol.nonlinearity.name(),
            "lambda": lambda,
            "sup": sol.field.sup(),
            "u_pole": u_pole,
            "n_s": cfg.ns,
            "n_t": cfg.nt,
        },
        "convergence": {
            "solver": solver,
            "iterations": sol.iterations,
            "residual": sol.residual,
        },
        "stability": report::stability(&stab),
    });
    write_json(&cfg.out.join("solve.json"), &doc)?;
    write_text(&cfg.out.join("field.csv"), &field_table(&sol.field, sol.residual))?;
    let mut line =
        format!("solve {} {}: u(pole) = {u_pole:.8}, sup = {:.8}", domain.label, cfg.nl.name(), sol.field.sup());
    if let Some(l) = lambda {
        line += &format!(", lambda = {l:.8}");
    }
    line += &format!(", residual = {:.2e}, lambda_min(stability) = {:.6}", sol.residual, stab.lambda_min);
    Ok(Outcome { code: EXIT_OK, lines: vec![line] })
}

fn audit_config(cfg: &RunConfig, domain: &DomainSpec) -> ConfigFile {
    let mut c = cfg.echo();
    c.command = Some(CommandKind::Audit);
    c.domain_record = Some(DomainRecord::from_domain(domain));
    c.scan = None;
    c
}

/// Runs one audit and renders its JSON report.
pub fn audit_document(cfg: &RunConfig, domain: &DomainSpec) -> Result<(AuditReport, Value)> {
    let r = run_audit(domain, &cfg.nl.problem(), cfg.ns, cfg.nt, &uniforms(cfg.seed))?;
    let v = report::audit(&r, config_value(&audit_config(cfg, domain)));
    Ok((r, v))
}

pub fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Fail(_) => EXIT_AUDIT_FAIL,
        Verdict::Pass | Verdict::NotApplicable(_) => EXIT_OK,
    }
}

pub fn cmd_audit(cfg: &RunConfig) -> Result<Outcome> {
    let domain = cfg.require_domain()?;
    let (r, doc) = audit_document(cfg, domain)?;
    write_json(&cfg.out.join("audit.json"), &doc)?;
    write_text(&cfg.out.join("field.csv"), &field_table(&r.field, r.solution.residual))?;
    let mut lines = vec![format!(
        "audit {} {}: {} ({} critical point(s), index sum {}, coincidence {})",
        domain.label,
        cfg.nl.name(),
        r.verdict.name(),
        r.critical_points.len(),
        r.ph_audit.index_sum,
        if r.coincidence.is_empty() { "empty" } else { "non-empty" },
    )];
    lines.extend(r.verdict.reasons().iter().map(|s| format!("  {s}")));
    Ok(Outcome { code: verdict_code(&r.verdict), lines })
}

#[derive(Debug, Clone, Serialize)]
struct ScanRow {
    member: usize,
    label: String,
    hypotheses_ok: bool,
    convex: bool,
    horoconvex: Option<bool>,
    diameter_ok: Option<bool>,
    lambda1: Option<f64>,
    crit_count: Option<usize>,
    max_locations: String,
    verdict: String,
    note: String,
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.scan;
    if s.family != "hyp_elongation" {
        return Err(CliError::config(format!("unknown scan family '{}' (hyp_elongation)", s.family)));
    }
    if s.members == 0 {
        return Err(CliError::config("scan family is empty"));
    }
    if !(s.r0 > 0.0 && s.e_max >= 0.0) {
        return Err(CliError::config("scan needs r0 > 0 and e_max >= 0"));
    }
    let family = hyperbolic_elongation_family(s.r0, s.e_max, s.members);
    let results: Vec<(ScanRow, Option<Value>)> =
        family.par_iter().enumerate().map(|(i, d)| scan_member(cfg, i, d)).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut lines = Vec::new();
    let mut code = EXIT_OK;
    for (row, doc) in &results {
        if let Some(doc) = doc {
            write_json(&cfg.out.join("scan").join(format!("{}.json", row.label)), doc)?;
        }
        if row.verdict == "ERROR" {
            code = EXIT_SOLVER;
        }
        lines.push(format!(
            "{} lambda1 = {} critical points = {} {}",
            row.label,
            row.lambda1.map_or("-".into(), |l| format!("{l:.6}")),
            row.crit_count.map_or("-".into(), |c| c.to_string()),
            row.verdict
        ));
        w.serialize(row).map_err(|e| CliError::Write { path: cfg.out.join("scan.csv"), source: e.into() })?;
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    write_text(&cfg.out.join("scan.csv"), &String::from_utf8(bytes).expect("CSV is UTF-8"))?;
    Ok(Outcome { code, lines })
}

fn scan_member(cfg: &RunConfig, i: usize, d: &DomainSpec) -> (ScanRow, Option<Value>) {
    let h = check_hypotheses(d);
    let mut row = ScanRow {
        member: i,
        label: d.label.clone(),
        hypotheses_ok: h.ok,
        convex: h.convex,
        horoconvex: h.horoconvex,
        diameter_ok: h.diameter_ok,
        lambda1: None,
        crit_count: None,
        max_locations: String::new(),
        verdict: "ERROR".into(),
        note: String::new(),
    };
    let (r, doc) = match audit_document(cfg, d) {
        Ok(x) => x,
        Err(e) => {
            row.note = e.to_string();
            return (row, None);
        }
    };
    row.lambda1 = match (&cfg.nl, r.solution.lambda) {
        (NlSpec::Eigen, Some(l)) => Some(l),
        _ => PolarGrid::new(d.clone(), cfg.ns, cfg.nt)
            .and_then(|g| solve_first_eigen(&Arc::new(g)))
            .map(|e| e.lambda)
            .ok(),
    };
    row.crit_count = Some(r.critical_points.len());
    row.max_locations = r
        .critical_points
        .iter()
        .filter(|c| c.classification == Classification::Max)
        .map(|c| {
            let p = c.location.coords();
            format!("{:.9} {:.9}", p[0], p[1])
        })
        .collect::<Vec<_>>()
        .join(";");
    row.verdict = r.verdict.name().into();
    row.note = r.verdict.reasons().join("; ");
    (row, Some(doc))
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RevolutionRow {
    pub profile: String,
    pub l: Option<usize>,
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub crit_count: Option<usize>,
    #[serde(rename = "Nprime_zeros")]
    pub nprime_zeros: Option<usize>,
    pub verdict: String,
    pub mult_class: String,
    pub two_critical_points: Option<bool>,
    pub note: String,
}

fn closed_row(profile: &RevolutionProfile, cells: usize) -> Result<RevolutionRow> {
    let a = closed_second_eigen_analysis_with(profile, cells)?;
    let (l, k) = match a.class {
        MultiplicityClass::Radial => (0, 2),
        _ => (1, 1),
    };
    Ok(RevolutionRow {
        profile: profile.name.clone(),
        l: Some(l),
        k: Some(k),
        lambda: Some(a.lambda_2),
        crit_count: Some(a.crit_count()),
        nprime_zeros: Some(a.nprime_zeros),
        verdict: a.verdict.name().into(),
        mult_class: a.class.name().into(),
        two_critical_points: Some(a.has_two_point_eigenfunction()),
        note: format!(
            "lambda_20={} lambda_11={} u11_prime_zeros={} min_curvature={}",
            a.lambda_20, a.lambda_11, a.u11_prime_zeros, a.min_curvature
        ),
    })
}

/// Rows of the revolution table for the configured mode.
pub fn revolution_rows(cfg: &RunConfig) -> Result<Vec<RevolutionRow>> {
    let r = &cfg.revolution;
    if r.cells < curvlab_core::revolution::MIN_CELLS {
        return Err(CliError::config(format!("cells must be at least {}", curvlab_core::revolution::MIN_CELLS)));
    }
    match r.mode {
        RevolutionMode::Eigen => {
            let profile = cfg.revolution_profile()?;
            if r.k_max == 0 {
                return Err(CliError::config("k_max must be at least 1"));
            }
            let per_l: Vec<Result<Vec<RevolutionRow>>> = (0..=r.l_max)
                .into_par_iter()
                .map(|l| {
                    let p = SturmLiouvilleProblem::new(profile.clone(), l).with_cells(r.cells);
                    Ok(sl_eigen(&p, r.k_max)?
                        .into_iter()
                        .map(|e| RevolutionRow {
                            profile: profile.name.clone(),
                            l: Some(l),
                            k: Some(e.k),
                            lambda: Some(e.lambda),
                            note: format!("residual={:.3e}", e.residual),
                            ..Default::default()
                        })
                        .collect())
                })
                .collect();
            let mut rows = Vec::new();
            for x in per_l {
                rows.extend(x?);
            }
            Ok(rows)
        }
        RevolutionMode::Monotonicity => {
            let profile = cfg.revolution_profile()?;
            let m = first_dirichlet_monotonicity_with(&profile, r.cells)?;
            Ok(vec![RevolutionRow {
                profile: profile.name.clone(),
                l: Some(0),
                k: Some(1),
                lambda: Some(m.lambda),
                crit_count: Some(m.critical_count),
                verdict: if m.decreasing && m.flux_nonincreasing { "pass" } else { "fail" }.into(),
                note: format!("decreasing={} flux_nonincreasing={}", m.decreasing, m.flux_nonincreasing),
                ..Default::default()
            }])
        }
        RevolutionMode::Closed => Ok(vec![closed_row(&cfg.revolution_profile()?, r.cells)?]),
        RevolutionMode::Probe => {
            if r.samples == 0 {
                return Err(CliError::config("probe needs at least one sample"));
            }
            let (family, dim) = (r.family, r.dim);
            let member = move |eps: f64| match family {
                ProbeFamily::Sin2 if dim == 2 => sin2_family(eps),
                ProbeFamily::Sin2 => {
                    RevolutionProfile::fourier_perturbed(&format!("sin2_eps_{eps}"), vec![0.0, eps], dim)
                }
                ProbeFamily::Oblate => RevolutionProfile::oblate(eps, dim),
            };
            let params: Vec<f64> = (0..r.samples)
                .map(|i| if r.samples > 1 { r.eps_max * i as f64 / (r.samples - 1) as f64 } else { 0.0 })
                // Keeps profile labels free of rounding noise.
                .map(|x| (x * 1e12).round() / 1e12)
                .collect();
            let rows = params
                .par_iter()
                .map(|&eps| {
                    let row = conjecture_probe(member, (eps, eps), 1, r.cells).remove(0);
                    let mut out = RevolutionRow {
                        profile: if row.profile.is_empty() { format!("eps_{eps}") } else { row.profile },
                        two_critical_points: row.two_critical_points,
                        note: row.note,
                        verdict: if row.included { "included" } else { "excluded" }.into(),
                        ..Default::default()
                    };
                    if let Some(a) = row.analysis {
                        let (l, k) = if a.class == MultiplicityClass::Radial { (0, 2) } else { (1, 1) };
                        out.l = Some(l);
                        out.k = Some(k);
                        out.lambda = Some(a.lambda_2);
                        out.crit_count = Some(a.crit_count());
                        out.nprime_zeros = Some(a.nprime_zeros);
                        out.mult_class = a.class.name().into();
                    }
                    out
                })
                .collect();
            Ok(rows)
        }
    }
}

pub fn cmd_revolution(cfg: &RunConfig) -> Result<Outcome> {
    let rows = revolution_rows(cfg)?;
    let path = cfg.out.join("revolution.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut lines = Vec::new();
    let mut code = EXIT_OK;
    for row in &rows {
        w.serialize(row).map_err(|e| CliError::Write { path: path.clone(), source: e.into() })?;
        if row.verdict == "fail" {
            code = EXIT_AUDIT_FAIL;
        }
        lines.push(format!(
            "{} l={} k={} lambda={} crit_count={} Nprime_zeros={} {} {}",
            row.profile,
            opt(row.l),
            opt(row.k),
            row.lambda.map_or("-".into(), |l| format!("{l:.10}")),
            opt(row.crit_count),
            opt(row.nprime_zeros),
            row.mult_class,
            row.verdict
        ));
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    write_text(&path, &String::from_utf8(bytes).expect("CSV is UTF-8"))?;
    Ok(Outcome { code, lines })
}

fn opt(x: Option<usize>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

#[derive(Debug, Clone, Serialize)]
struct CatalogueRow {
    label: String,
    surface: String,
    pole_a: f64,
    pole_b: f64,
    rho_min: f64,
    rho_max: f64,
    hypotheses_ok: bool,
    failures: String,
}

pub fn cmd_catalogue(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg.out.join("catalogue.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut lines = Vec::new();
    for d in builtin_domains() {
        let h = check_hypotheses(&d);
        let (lo, hi) = d.radius_range();
        let rec = DomainRecord::from_domain(&d);
        write_text(&cfg.out.join("domains").join(format!("{}.toml", d.label)), &rec.to_toml())?;
        let row = CatalogueRow {
            label: d.label.clone(),
            surface: d.surface.name().into(),
            pole_a: rec.pole[0],
            pole_b: rec.pole[1],
            rho_min: lo,
            rho_max: hi,
            hypotheses_ok: h.ok,
            failures: h.failures().join(";"),
        };
        lines.push(format!(
            "{:<28} {:<10} {}",
            row.label,
            row.surface,
            if h.ok { "hypotheses hold".to_string() } else { format!("fails: {}", row.failures) }
        ));
        w.serialize(&row).map_err(|e| CliError::Write { path: path.clone(), source: e.into() })?;
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    write_text(&path, &String::from_utf8(bytes).expect("CSV is UTF-8"))?;
    Ok(Outcome { code: EXIT_OK, lines })
}
