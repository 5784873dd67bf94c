//! The P-function `P = ½|∇u|² + F(u)`, its gradient, the boundary identity
//! `⟨∇P, ν⟩ = −|∇u|² κ` and the Poincaré–Hopf index count.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::critical::{find_critical_points_with, CriticalPointRecord, FieldKind};
use super::fit::{Jet, JetSampler};
use crate::error::Result;
use crate::geometry::ambient::Vec3;
use crate::pde::{Nonlinearity, PolarGrid, ScalarField};

/// Boundary samples for the identity and the sign condition.
pub const BOUNDARY_SAMPLES: usize = 512;

#[derive(Debug, Clone)]
pub struct PFunctionField {
    pub u: ScalarField,
    pub nonlinearity: Nonlinearity,
    pub p: ScalarField,
    /// `∇_{∇u}∇u − Δu ∇u` per node, in the transported frame.
    pub grad_p: Vec<[f64; 2]>,
    /// Gradient of the fitted P values per node.
    pub grad_p_fit: Vec<[f64; 2]>,
    pub u_jets: Vec<Jet>,
    pub p_jets: Vec<Jet>,
}

/// `∇_{∇u}∇u − Δu ∇u` from a jet of `u`.
#[inline]
pub fn grad_p_from_jet(j: &Jet) -> [f64; 2] {
    let hg = j.hess_apply(j.grad);
    let lap = j.laplacian();
    [hg[0] - lap * j.grad[0], hg[1] - lap * j.grad[1]]
}

pub fn build_p_function(u: &ScalarField, nl: &Nonlinearity) -> Result<PFunctionField> {
    let grid = &u.grid;
    let us = JetSampler::new(grid, &u.values);
    let u_jets = us.node_jets()?;
    let p_vals: Vec<f64> = (0..grid.n_nodes())
        .map(|k| {
            let g = u_jets[k].grad;
            // Boundary nodes carry u = 0 exactly, so F(u) drops out there.
            0.5 * (g[0] * g[0] + g[1] * g[1]) + nl.primitive(u.values[k])
        })
        .collect();
    let grad_p = u_jets.iter().map(grad_p_from_jet).collect();
    let p = ScalarField::new(grid.clone(), p_vals);
    let ps = JetSampler::new(grid, &p.values);
    let p_jets = ps.node_jets()?;
    let grad_p_fit = p_jets.iter().map(|j| j.grad).collect();
    Ok(PFunctionField { u: u.clone(), nonlinearity: nl.clone(), p, grad_p, grad_p_fit, u_jets, p_jets })
}

impl PFunctionField {
    pub fn grid(&self) -> &Arc<PolarGrid> {
        &self.u.grid
    }

    pub fn u_sampler(&self) -> JetSampler<'_> {
        JetSampler::new(&self.u.grid, &self.u.values)
    }

    pub fn p_sampler(&self) -> JetSampler<'_> {
        JetSampler::new(&self.u.grid, &self.p.values)
    }

    /// Largest interior disagreement between the two representations of
    /// `∇P`, relative to `max |∇P|`.
    pub fn consistency_error(&self) -> f64 {
        let g = self.grid();
        let scale = self.grad_p.iter().fold(0.0f64, |m, v| m.max(v[0].hypot(v[1]))).max(1e-300);
        (0..g.n_interior())
            .map(|k| {
                let a = self.grad_p[k];
                let b = self.grad_p_fit[k];
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// Critical points of `P`.
    pub fn critical_points(&self) -> Vec<CriticalPointRecord> {
        find_critical_points_with(&self.p_sampler(), &self.p_jets, FieldKind::P)
    }

    /// `⟨∇P, ν⟩` and `−|∇u|² κ` at boundary parameter `t`, with `∇P` from
    /// the one-sided jet of `u`.
    pub fn boundary_pair(&self, t: f64) -> Result<(f64, f64)> {
        let b = self.boundary_sample(t)?;
        Ok((b.flux, -b.grad_sq * b.curvature))
    }

    fn boundary_sample(&self, t: f64) -> Result<BoundarySample> {
        let d = &self.grid().domain;
        let bp = d.boundary_point_in(&self.grid().frame, t);
        let s = self.u_sampler();
        let frame = s.frame_at(bp.position);
        let jet = s.jet_in(&frame)?;
        let nu = frame.components(bp.normal);
        let gp = grad_p_from_jet(&jet);
        Ok(BoundarySample {
            flux: gp[0] * nu[0] + gp[1] * nu[1],
            grad_sq: jet.grad[0] * jet.grad[0] + jet.grad[1] * jet.grad[1],
            curvature: bp.curvature,
        })
    }
}

struct BoundarySample {
    flux: f64,
    grad_sq: f64,
    curvature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryIdentityReport {
    pub max_relative_error: f64,
    /// Boundary parameter of the worst sample.
    pub worst_t: f64,
    pub samples: usize,
}

/// Compares `⟨∇P, ν⟩` with `−|∇u|² κ` at [`BOUNDARY_SAMPLES`] boundary
/// points. Each error is relative to `|∇u|² κ` at the sample, floored at
/// one percent of `max |∇u|² · max(max |κ|, 1 / max ρ)` so that arcs where κ
/// is small, or a geodesic boundary, do not divide by zero.
pub fn boundary_identity_check(pf: &PFunctionField) -> Result<BoundaryIdentityReport> {
    let mut samples = Vec::with_capacity(BOUNDARY_SAMPLES);
    for k in 0..BOUNDARY_SAMPLES {
        let t = TAU * k as f64 / BOUNDARY_SAMPLES as f64;
        samples.push((t, pf.boundary_sample(t)?));
    }
    let (_, rho_max) = pf.grid().domain.radius_range();
    let g2 = samples.iter().fold(0.0f64, |m, (_, b)| m.max(b.grad_sq));
    let kappa = samples.iter().fold(1.0 / rho_max, |m, (_, b)| m.max(b.curvature.abs()));
    let floor = (0.01 * g2 * kappa).max(1e-300);
    let mut worst = (0.0, 0.0);
    for (t, b) in samples {
        let rhs = -b.grad_sq * b.curvature;
        let e = (b.flux - rhs).abs() / rhs.abs().max(floor);
        if e > worst.0 {
            worst = (e, t);
        }
    }
    Ok(BoundaryIdentityReport { max_relative_error: worst.0, worst_t: worst.1, samples: BOUNDARY_SAMPLES })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoincareHopfAudit {
    pub index_sum: i32,
    /// False when some critical point could not be indexed.
    pub all_indexed: bool,
    pub boundary_sign_ok: bool,
    /// Largest `⟨∇P, ν⟩` over the boundary sample.
    pub max_boundary_flux: f64,
    pub chi: i32,
    pub critical_points: Vec<CriticalPointRecord>,
}

impl PoincareHopfAudit {
    pub fn passes(&self) -> bool {
        self.all_indexed && self.boundary_sign_ok && self.index_sum == self.chi
    }
}

pub fn poincare_hopf_audit(pf: &PFunctionField) -> Result<PoincareHopfAudit> {
    let critical_points = pf.critical_points();
    poincare_hopf_audit_with(pf, critical_points)
}

/// As [`poincare_hopf_audit`] with the critical points of `P` supplied.
pub fn poincare_hopf_audit_with(
    pf: &PFunctionField,
    critical_points: Vec<CriticalPointRecord>,
) -> Result<PoincareHopfAudit> {
    let mut max_flux = f64::NEG_INFINITY;
    for k in 0..BOUNDARY_SAMPLES {
        let t = TAU * k as f64 / BOUNDARY_SAMPLES as f64;
        let (lhs, _) = pf.boundary_pair(t)?;
        max_flux = max_flux.max(lhs);
    }
    let index_sum = critical_points.iter().filter_map(|c| c.index).sum();
    let all_indexed = critical_points.iter().all(|c| c.index.is_some());
    Ok(PoincareHopfAudit {
        index_sum,
        all_indexed,
        boundary_sign_ok: max_flux < 0.0,
        max_boundary_flux: max_flux,
        chi: 1,
        critical_points,
    })
}

/// `∇P` from the fitted `u` at an arbitrary point, in the transported frame.
pub fn grad_p_at(pf: &PFunctionField, x: Vec3) -> Option<[f64; 2]> {
    pf.u_sampler().jet_at(x).ok().map(|j| grad_p_from_jet(&j))
}
