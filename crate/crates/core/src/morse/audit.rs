//! Audits of a solved field against the expected critical-point structure,
//! and the end-to-end pipeline that produces a verdict.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::auxiliary::{build_auxiliary, AuxiliaryKind, NablaZCheck};
use super::critical::{find_critical_points_with, Classification, CriticalPointRecord, FieldKind};
use super::nodal::{crossing_at, trace_nodal_set};
use super::pfunction::{
    boundary_identity_check, build_p_function, poincare_hopf_audit_with, BoundaryIdentityReport, PFunctionField,
    PoincareHopfAudit,
};
use crate::domain::{check_hypotheses, DomainSpec, HypothesisReport};
use crate::error::Result;
use crate::geometry::ambient::Vec3;
use crate::geometry::ChartPoint;
use crate::pde::{solve, stability_spectrum, Nonlinearity, PolarGrid, Problem, ScalarField};

/// Critical points of `u` and `P` closer than this many mesh widths match.
pub const MATCH_RADIUS: f64 = 3.0;
/// Degeneracy margin below which a `W` field is built.
pub const NEAR_DEGENERATE_MARGIN: f64 = 1e-3;
/// Z base points avoid critical points: `|∇u(p)| ≥ Z_MIN_GRADIENT · max|∇u|`.
pub const Z_MIN_GRADIENT: f64 = 0.05;
/// Z base points keep `ρ(t) − r ≥ Z_BOUNDARY_MARGIN · min ρ`.
pub const Z_BOUNDARY_MARGIN: f64 = 0.1;
/// Z samples per audit.
pub const Z_SAMPLES: usize = 10;

/// Diagnostics of an auxiliary field at its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryDiagnostic {
    pub kind: AuxiliaryKind,
    pub base: ChartPoint,
    pub base_position: Vec3,
    pub base_value: f64,
    /// `None` when the field vanished identically.
    pub boundary_zero_count: Option<usize>,
    pub crossing_at_base: bool,
    pub crossings: usize,
    pub commuting_residual: f64,
    pub nabla_z: Option<NablaZCheck>,
}

pub fn diagnose_auxiliary(pf: &PFunctionField, p: Vec3, kind: AuxiliaryKind) -> Result<AuxiliaryDiagnostic> {
    let aux = build_auxiliary(pf, p, kind)?;
    let surf = pf.grid().domain.surface;
    let nodal = trace_nodal_set(&aux).ok();
    let s = pf.u_sampler();
    let radius = 2.0 * s.spacing(p);
    Ok(AuxiliaryDiagnostic {
        kind,
        base: ChartPoint::from_ambient(surf, p).unwrap_or(pf.grid().domain.pole),
        base_position: p,
        base_value: aux.base_value,
        boundary_zero_count: nodal.as_ref().map(|n| n.boundary_zero_count),
        crossing_at_base: crossing_at(&aux.values, p, radius),
        crossings: nodal.as_ref().map_or(0, |n| n.crossings.len()),
        commuting_residual: aux.commuting_residual,
        nabla_z: aux.nabla_z,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceReport {
    pub u_points: Vec<CriticalPointRecord>,
    pub p_points: Vec<CriticalPointRecord>,
    /// `(u index, P index, distance)`.
    pub matched: Vec<(usize, usize, f64)>,
    pub unmatched_u: Vec<usize>,
    /// Unmatched `P` points with the `Z` field built there, when possible.
    pub unmatched_p: Vec<(usize, Option<AuxiliaryDiagnostic>)>,
}

impl CoincidenceReport {
    pub fn is_empty(&self) -> bool {
        self.unmatched_u.is_empty() && self.unmatched_p.is_empty()
    }
}

/// Matches the critical points of `u` and `P` greedily by distance within
/// [`MATCH_RADIUS`] mesh widths.
pub fn coincidence_audit(
    pf: &PFunctionField,
    u_points: Vec<CriticalPointRecord>,
    p_points: Vec<CriticalPointRecord>,
) -> CoincidenceReport {
    let g = pf.grid();
    let surf = g.domain.surface;
    let radius = MATCH_RADIUS * g.h();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in u_points.iter().enumerate() {
        for (j, b) in p_points.iter().enumerate() {
            let d = surf.distance(a.position, b.position);
            if d <= radius {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used_u = alloc::vec![false; u_points.len()];
    let mut used_p = alloc::vec![false; p_points.len()];
    let mut matched = Vec::new();
    for (d, i, j) in pairs {
        if !used_u[i] && !used_p[j] {
            used_u[i] = true;
            used_p[j] = true;
            matched.push((i, j, d));
        }
    }
    let unmatched_u = (0..u_points.len()).filter(|i| !used_u[*i]).collect();
    let unmatched_p = (0..p_points.len())
        .filter(|j| !used_p[*j])
        .map(|j| (j, diagnose_auxiliary(pf, p_points[j].position, AuxiliaryKind::Z).ok()))
        .collect();
    CoincidenceReport { u_points, p_points, matched, unmatched_u, unmatched_p }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneracyEntry {
    pub hessian_det: f64,
    pub margin: f64,
    pub degenerate: bool,
    pub w: Option<AuxiliaryDiagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NondegeneracyReport {
    pub entries: Vec<NondegeneracyEntry>,
}

impl NondegeneracyReport {
    pub fn all_nondegenerate(&self) -> bool {
        self.entries.iter().all(|e| !e.degenerate)
    }
}

/// Per critical point of `u`: determinant and margin; a `W` field is built
/// wherever the margin drops below [`NEAR_DEGENERATE_MARGIN`].
pub fn nondegeneracy_audit(pf: &PFunctionField, u_points: &[CriticalPointRecord]) -> NondegeneracyReport {
    let entries = u_points
        .iter()
        .map(|c| {
            let margin = c.degeneracy_margin();
            let degenerate = c.classification == Classification::Degenerate;
            let w = if degenerate || margin < NEAR_DEGENERATE_MARGIN {
                diagnose_auxiliary(pf, c.position, AuxiliaryKind::W).ok()
            } else {
                None
            };
            NondegeneracyEntry { hessian_det: c.hessian_det, margin, degenerate, w }
        })
        .collect();
    NondegeneracyReport { entries }
}

/// Maps a pair of uniform numbers in `[0, 1)` to a candidate `Z` base point:
/// `t = 2π v`, `r = w (ρ(t) − margin)`.
pub fn z_candidate(grid: &PolarGrid, w: f64, v: f64) -> Vec3 {
    let d = &grid.domain;
    let (rho_min, _) = d.radius_range();
    let t = TAU * v;
    let r = w * (d.rho(t) - Z_BOUNDARY_MARGIN * rho_min);
    grid.frame.point(r.max(0.0), t)
}

/// Whether `x` is far enough from the critical set for a `Z` field.
pub fn z_admissible(pf: &PFunctionField, x: Vec3) -> bool {
    let s = pf.u_sampler();
    let gmax = pf.u_jets.iter().fold(0.0f64, |m, j| m.max(j.grad_norm()));
    s.jet_at(x).map(|j| j.grad_norm() >= Z_MIN_GRADIENT * gmax).unwrap_or(false)
}

/// `Z` diagnostics at the first [`Z_SAMPLES`] admissible candidates from
/// `uniforms`.
pub fn z_samples(pf: &PFunctionField, uniforms: &[(f64, f64)]) -> Vec<AuxiliaryDiagnostic> {
    let mut out = Vec::new();
    for &(w, v) in uniforms {
        if out.len() == Z_SAMPLES {
            break;
        }
        let x = z_candidate(pf.grid(), w, v);
        if !z_admissible(pf, x) {
            continue;
        }
        if let Ok(d) = diagnose_auxiliary(pf, x, AuxiliaryKind::Z) {
            out.push(d);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Vec<String>),
    NotApplicable(Vec<String>),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail(_) => "FAIL",
            Self::NotApplicable(_) => "NOT_APPLICABLE",
        }
    }

    pub fn reasons(&self) -> &[String] {
        match self {
            Self::Pass => &[],
            Self::Fail(r) | Self::NotApplicable(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSummary {
    pub nonlinearity: String,
    pub lambda: Option<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub sup: f64,
    pub n_s: usize,
    pub n_t: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilitySummary {
    pub lambda_min: f64,
    pub tolerance: f64,
    pub semi_stable: bool,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub domain: DomainSpec,
    pub hypotheses: HypothesisReport,
    pub solution: SolutionSummary,
    pub stability: StabilitySummary,
    pub critical_points: Vec<CriticalPointRecord>,
    pub ph_audit: PoincareHopfAudit,
    pub boundary_identity: BoundaryIdentityReport,
    pub p_consistency: f64,
    pub coincidence: CoincidenceReport,
    pub nondegeneracy: NondegeneracyReport,
    pub z_samples: Vec<AuxiliaryDiagnostic>,
    pub verdict: Verdict,
    pub field: ScalarField,
}

/// Solve, stability, P-function, critical points of `u` and `P`, the
/// Poincaré–Hopf count, the boundary identity, coincidence, non-degeneracy
/// and `Z` sampling, then the verdict.
///
/// The verdict is `NotApplicable` when the domain fails the hypotheses or
/// the solution is not semi-stable; otherwise `Pass` iff `u` has exactly
/// one critical point, a non-degenerate maximum, the index sum is 1 with
/// `⟨∇P, ν⟩ < 0` on the boundary, the critical sets of `u` and `P`
/// coincide and every sampled `Z` has exactly two boundary zeros.
pub fn run_audit(
    domain: &DomainSpec,
    problem: &Problem,
    n_s: usize,
    n_t: usize,
    uniforms: &[(f64, f64)],
) -> Result<AuditReport> {
    let hypotheses = check_hypotheses(domain);
    let grid = Arc::new(PolarGrid::new(domain.clone(), n_s, n_t)?);
    let sol = solve(&grid, problem)?;
    let nl = sol.nonlinearity.clone();
    let stab = stability_spectrum(&grid, &nl, &sol.field)?;
    let pf = build_p_function(&sol.field, &nl)?;
    let u_points = find_critical_points_with(&pf.u_sampler(), &pf.u_jets, FieldKind::U);
    let p_points = pf.critical_points();
    let ph_audit = poincare_hopf_audit_with(&pf, p_points.clone())?;
    let boundary_identity = boundary_identity_check(&pf)?;
    let coincidence = coincidence_audit(&pf, u_points.clone(), p_points);
    let nondegeneracy = nondegeneracy_audit(&pf, &u_points);
    let z = z_samples(&pf, uniforms);

    let mut na = Vec::new();
    for f in hypotheses.failures() {
        na.push(String::from(f));
    }
    if !stab.semi_stable {
        na.push("solution is not semi-stable".into());
    }
    let mut fail = Vec::new();
    if u_points.len() != 1 {
        fail.push(alloc::format!("u has {} critical points", u_points.len()));
    } else if u_points[0].classification != Classification::Max {
        fail.push(alloc::format!("critical point is {}", u_points[0].classification.name()));
    }
    if !ph_audit.passes() {
        fail.push(alloc::format!(
            "Poincaré–Hopf: index sum {} (all indexed: {}), boundary sign ok: {}",
            ph_audit.index_sum,
            ph_audit.all_indexed,
            ph_audit.boundary_sign_ok
        ));
    }
    if !coincidence.is_empty() {
        fail.push(alloc::format!(
            "critical sets differ: {} unmatched in u, {} in P",
            coincidence.unmatched_u.len(),
            coincidence.unmatched_p.len()
        ));
    }
    if z.len() < Z_SAMPLES {
        fail.push(alloc::format!("only {} admissible Z base points", z.len()));
    }
    let bad_z = z.iter().filter(|d| d.boundary_zero_count != Some(2)).count();
    if bad_z > 0 {
        fail.push(alloc::format!("{bad_z} Z fields without exactly two boundary zeros"));
    }
    let verdict = if !na.is_empty() {
        Verdict::NotApplicable(na)
    } else if fail.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail(fail)
    };

    Ok(AuditReport {
        domain: domain.clone(),
        hypotheses,
        solution: SolutionSummary {
            nonlinearity: nl.name(),
            lambda: match nl {
                Nonlinearity::Eigen(l) => Some(l),
                _ => None,
            },
            residual: sol.residual,
            iterations: sol.iterations,
            sup: sol.field.sup(),
            n_s,
            n_t,
        },
        stability: StabilitySummary {
            lambda_min: stab.lambda_min,
            tolerance: stab.tolerance,
            semi_stable: stab.semi_stable,
        },
        critical_points: u_points,
        p_consistency: pf.consistency_error(),
        ph_audit,
        boundary_identity,
        coincidence,
        nondegeneracy,
        z_samples: z,
        verdict,
        field: sol.field,
    })
}

/// Coincidence audit of a given field, solved or not; the negative control
/// feeds it corrupted data.
pub fn coincidence_for_field(field: &ScalarField, nl: &Nonlinearity) -> Result<CoincidenceReport> {
    let pf = build_p_function(field, nl)?;
    let u_points = find_critical_points_with(&pf.u_sampler(), &pf.u_jets, FieldKind::U);
    let p_points = pf.critical_points();
    Ok(coincidence_audit(&pf, u_points, p_points))
}
