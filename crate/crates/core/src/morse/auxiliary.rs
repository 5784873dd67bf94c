//! Auxiliary fields `Z = K(u)` and `W = K(u)`: derivatives of a solution
//! along a Killing field chosen at a base point.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use super::fit::JetSampler;
use super::pfunction::PFunctionField;
use crate::error::{Error, Result};
use crate::geometry::ambient::{lincomb, Vec3};
use crate::geometry::{killing_for_geodesic, ChartPoint, KillingField, ModelSurface, TangentVector};
use crate::linalg::sym2_eigen;
use crate::pde::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxiliaryKind {
    /// `K(p) ⟂ ∇u(p)` at a non-critical `p`.
    Z,
    /// `K(p)` along a Hessian null direction at a critical `p`.
    W,
}

impl AuxiliaryKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Z => "Z",
            Self::W => "W",
        }
    }
}

/// The gradient identities at the base point of a `Z` field:
/// `|∇P| = |∇u||∇Z|` and `⟨∇P, ∇Z⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NablaZCheck {
    pub grad_u: f64,
    pub grad_p: f64,
    pub grad_z: f64,
    /// `|⟨∇P, ∇Z⟩| / (|∇P||∇Z|)`.
    pub orthogonality: f64,
    /// `||∇P| − |∇u||∇Z|| / |∇P|`.
    pub norm_identity: f64,
}

#[derive(Debug, Clone)]
pub struct AuxiliaryField {
    pub kind: AuxiliaryKind,
    pub base: Vec3,
    /// Unit direction of `K(p)`, ambient.
    pub direction: Vec3,
    pub killing: KillingField,
    pub values: ScalarField,
    /// Value of the fitted field at the base point.
    pub base_value: f64,
    /// Relative discrete residual of `−ΔZ − f'(u)Z` on interior nodes away
    /// from the pole and the boundary layer.
    pub commuting_residual: f64,
    pub nabla_z: Option<NablaZCheck>,
}

/// Killing field through `p` with `K(p) = v` (ambient, unit).
pub fn killing_through(surface: ModelSurface, p: Vec3, v: Vec3) -> Result<KillingField> {
    let cp = ChartPoint::from_ambient(surface, p)?;
    if cp.is_singular() {
        return Ok(KillingField::new(surface, surface.transvection(p, v)));
    }
    let tv = TangentVector::new(cp, surface.pull_tangent(cp.coords(), v));
    killing_for_geodesic(surface, &cp, &tv)
}

/// Builds `K(u)` at base point `p`.
///
/// `Z` needs `∇u(p) ≠ 0` and takes `K(p)` orthogonal to it; `W` takes the
/// Hessian eigendirection of smallest modulus, as at a degenerate critical
/// point. Both are rejected with [`Error::NotApplicable`] otherwise.
pub fn build_auxiliary(pf: &PFunctionField, p: Vec3, kind: AuxiliaryKind) -> Result<AuxiliaryField> {
    let grid = pf.grid();
    let surf = grid.domain.surface;
    let us = pf.u_sampler();
    if us.s_of(p) >= 1.0 {
        return Err(Error::NotApplicable("base point outside the domain".into()));
    }
    let frame = us.frame_at(p);
    let jet = us.jet_in(&frame)?;
    let gscale = pf.u_jets.iter().fold(0.0f64, |m, j| m.max(j.grad_norm()));
    let v = match kind {
        AuxiliaryKind::Z => {
            let g = jet.grad_norm();
            if g <= 1e-8 * gscale {
                return Err(Error::NotApplicable("Z needs a non-critical base point".into()));
            }
            [-jet.grad[1] / g, jet.grad[0] / g]
        }
        AuxiliaryKind::W => {
            if jet.grad_norm() > 1e-6 * gscale.max(1e-300) {
                return Err(Error::NotApplicable("W needs a critical base point".into()));
            }
            let (l, vecs) = sym2_eigen(jet.hess);
            if l[0].abs() <= l[1].abs() {
                vecs[0]
            } else {
                vecs[1]
            }
        }
    };
    let direction = frame.vector(v);
    let killing = killing_through(surf, p, direction)?;

    let values: Vec<f64> = (0..grid.n_nodes())
        .map(|k| {
            let x = grid.position(k);
            let (r, t) = grid.polar(k);
            let (e1, e2) = grid.frame.transported_frame(r, t);
            let g = pf.u_jets[k].grad;
            surf.inner(killing.ambient_at(x), lincomb(g[0], e1, g[1], e2))
        })
        .collect();
    let values = ScalarField::new(grid.clone(), values);
    let zs = JetSampler::new(grid, &values.values);
    let zjet = zs.jet_in(&frame)?;

    let nabla_z = if kind == AuxiliaryKind::Z {
        let pjet = pf.p_sampler().jet_in(&frame)?;
        let gp = pjet.grad;
        let gz = zjet.grad;
        let np = gp[0].hypot(gp[1]);
        let nz = gz[0].hypot(gz[1]);
        let nu = jet.grad_norm();
        Some(NablaZCheck {
            grad_u: nu,
            grad_p: np,
            grad_z: nz,
            orthogonality: (gp[0] * gz[0] + gp[1] * gz[1]).abs() / (np * nz).max(1e-300),
            norm_identity: (np - nu * nz).abs() / np.max(1e-300),
        })
    } else {
        None
    };

    let commuting_residual = commuting_residual(pf, &values);
    Ok(AuxiliaryField {
        kind,
        base: p,
        direction,
        killing,
        values,
        base_value: zjet.value,
        commuting_residual,
        nabla_z,
    })
}

/// `‖−Δ_h Z − f'(u) Z‖ / (‖Δ_h Z‖ + ‖f'(u) Z‖ + ‖Z‖)` in the lumped `L²`
/// norm over rings `2 ..= n_s − 2`. The pole and the ring next to the
/// boundary are excluded: the pole row of the scheme is only consistent in
/// the mean, and the outermost fits are one-sided.
pub fn commuting_residual(pf: &PFunctionField, z: &ScalarField) -> f64 {
    let grid = pf.grid();
    let az = grid.apply_stiffness(&z.values);
    let mass = grid.mass();
    let (mut r2, mut l2, mut f2, mut z2) = (0.0, 0.0, 0.0, 0.0);
    for (k, a) in az.iter().enumerate().take(grid.n_interior()) {
        let (i, _) = grid.ring_angle(k);
        if i < 2 || i + 1 >= grid.n_s {
            continue;
        }
        let m = mass[k];
        let neg_lap = a / m;
        let fz = pf.nonlinearity.df(pf.u.values[k]) * z.values[k];
        r2 += m * (neg_lap - fz) * (neg_lap - fz);
        l2 += m * neg_lap * neg_lap;
        f2 += m * fz * fz;
        z2 += m * z.values[k] * z.values[k];
    }
    r2.sqrt() / (l2.sqrt() + f2.sqrt() + z2.sqrt()).max(1e-300)
}

/// Unit tangent at `p` orthogonal to `∇u(p)`, ambient; for tests and
/// diagnostics.
pub fn orthogonal_direction(pf: &PFunctionField, p: Vec3) -> Option<Vec3> {
    let us = pf.u_sampler();
    let frame = us.frame_at(p);
    let j = us.jet_in(&frame).ok()?;
    let g = j.grad_norm();
    (g > 0.0).then(|| frame.vector([-j.grad[1] / g, j.grad[0] / g]))
}
