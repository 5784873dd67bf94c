//! JSON reports. Key order is fixed and every float is printed in its
//! shortest round-trip form, so equal inputs give equal bytes apart from
//! the `header` object. Non-finite floats become `null`.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use curvlab_core::domain::HypothesisReport;
use curvlab_core::geometry::ambient::Vec3;
use curvlab_core::geometry::ModelSurface;
use curvlab_core::morse::{
    AuditReport, AuxiliaryDiagnostic, CoincidenceReport, CriticalPointRecord, NondegeneracyReport,
};
use curvlab_core::pde::StabilityReport;

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub fn header(kind: &str) -> Value {
    let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "tool": "curvlab",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "report": kind,
        "timestamp": ts,
    })
}

/// The report with its `header` removed, for comparisons.
pub fn without_header(mut v: Value) -> Value {
    if let Some(m) = v.as_object_mut() {
        m.shift_remove("header");
    }
    v
}

fn chart(surface: ModelSurface, x: Vec3) -> [f64; 2] {
    surface.from_ambient(x)
}

pub fn hypotheses(h: &HypothesisReport) -> Value {
    json!({
        "ok": h.ok,
        "failures": h.failures(),
        "min_curvature": h.min_curvature,
        "min_curvature_t": h.min_curvature_t,
        "convex": h.convex,
        "diameter": h.diameter,
        "diameter_ok": h.diameter_ok,
        "horoconvex": h.horoconvex,
    })
}

pub fn critical_point(c: &CriticalPointRecord) -> Value {
    json!({
        "field": match c.which { curvlab_core::morse::FieldKind::U => "u", curvlab_core::morse::FieldKind::P => "P" },
        "chart": c.location.coords(),
        "polar": [c.polar.0, c.polar.1],
        "value": c.value,
        "grad_norm": c.grad_norm,
        "hessian": c.hessian,
        "hessian_det": c.hessian_det,
        "degeneracy_margin": c.degeneracy_margin(),
        "classification": c.classification.name(),
        "index": c.index,
        "refined": c.refined,
    })
}

pub fn auxiliary(surface: ModelSurface, d: &AuxiliaryDiagnostic) -> Value {
    json!({
        "kind": d.kind.name(),
        "base": chart(surface, d.base_position),
        "base_value": d.base_value,
        "boundary_zero_count": d.boundary_zero_count,
        "crossing_at_base": d.crossing_at_base,
        "crossings": d.crossings,
        "commuting_residual": d.commuting_residual,
        "nabla_z": d.nabla_z.map(|n| json!({
            "grad_u": n.grad_u,
            "grad_p": n.grad_p,
            "grad_z": n.grad_z,
            "orthogonality": n.orthogonality,
            "norm_identity": n.norm_identity,
        })),
    })
}

pub fn coincidence(surface: ModelSurface, c: &CoincidenceReport) -> Value {
    json!({
        "empty": c.is_empty(),
        "u_count": c.u_points.len(),
        "p_count": c.p_points.len(),
        "matched": c.matched.iter().map(|(u, p, d)| json!({"u": u, "p": p, "distance": d})).collect::<Vec<_>>(),
        "unmatched_u": c.unmatched_u,
        "unmatched_p": c.unmatched_p.iter().map(|(i, d)| json!({
            "p": i,
            "diagnostic": d.as_ref().map(|d| auxiliary(surface, d)),
        })).collect::<Vec<_>>(),
    })
}

pub fn nondegeneracy(surface: ModelSurface, n: &NondegeneracyReport) -> Value {
    json!({
        "all_nondegenerate": n.all_nondegenerate(),
        "entries": n.entries.iter().map(|e| json!({
            "hessian_det": e.hessian_det,
            "margin": e.margin,
            "degenerate": e.degenerate,
            "w": e.w.as_ref().map(|w| auxiliary(surface, w)),
        })).collect::<Vec<_>>(),
    })
}

pub fn stability(s: &StabilityReport) -> Value {
    json!({
        "lambda_min": s.lambda_min,
        "tolerance": s.tolerance,
        "semi_stable": s.semi_stable,
        "residual": s.residual,
    })
}

/// Audit report body. `config` is the resolved run configuration.
pub fn audit(r: &AuditReport, config: Value) -> Value {
    let surf = r.domain.surface;
    json!({
        "header": header("audit"),
        "config": config,
        "domain": r.domain.label,
        "verdict": {
            "status": r.verdict.name(),
            "reasons": r.verdict.reasons(),
        },
        "hypotheses": hypotheses(&r.hypotheses),
        "solution": {
            "nonlinearity": r.solution.nonlinearity,
            "lambda": r.solution.lambda,
            "residual": r.solution.residual,
            "iterations": r.solution.iterations,
            "sup": r.solution.sup,
            "n_s": r.solution.n_s,
            "n_t": r.solution.n_t,
        },
        "stability": {
            "lambda_min": r.stability.lambda_min,
            "tolerance": r.stability.tolerance,
            "semi_stable": r.stability.semi_stable,
        },
        "critical_points": r.critical_points.iter().map(critical_point).collect::<Vec<_>>(),
        "ph_audit": {
            "index_sum": r.ph_audit.index_sum,
            "chi": r.ph_audit.chi,
            "all_indexed": r.ph_audit.all_indexed,
            "boundary_sign_ok": r.ph_audit.boundary_sign_ok,
            "max_boundary_flux": r.ph_audit.max_boundary_flux,
            "passes": r.ph_audit.passes(),
            "p_critical_points": r.ph_audit.critical_points.iter().map(critical_point).collect::<Vec<_>>(),
        },
        "boundary_identity": {
            "max_relative_error": r.boundary_identity.max_relative_error,
            "worst_t": r.boundary_identity.worst_t,
            "samples": r.boundary_identity.samples,
            "p_consistency": r.p_consistency,
        },
        "coincidence": coincidence(surf, &r.coincidence),
        "nondegeneracy": nondegeneracy(surf, &r.nondegeneracy),
        "z_samples": r.z_samples.iter().map(|d| auxiliary(surf, d)).collect::<Vec<_>>(),
    })
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports always serialise");
    s.push('\n');
    s
}
