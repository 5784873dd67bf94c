//! Critical points: screening, Newton refinement, classification and index.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use super::fit::{Jet, JetSampler};
use crate::error::{Error, Result};
use crate::geometry::ambient::{PolarFrame, Vec3};
use crate::geometry::ChartPoint;
use crate::linalg::sym2_eigen;
use crate::pde::ScalarField;

/// `|det H| < DEGENERACY_THRESHOLD · ‖H‖²` marks a degenerate critical point,
/// as does `‖H‖ < DEGENERACY_THRESHOLD · max ‖H‖` over the grid (a Hessian
/// that has vanished, e.g. at a monkey saddle, where the ratio alone is
/// blind because all entries shrink together).
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;
/// Points on the winding circle.
pub const WINDING_SAMPLES: usize = 256;

const NEWTON_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Max,
    Min,
    Saddle,
    Degenerate,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Min => "min",
            Self::Saddle => "saddle",
            Self::Degenerate => "degenerate",
        }
    }
}

/// Which field a critical point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    U,
    P,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::U => "u",
            Self::P => "P",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointRecord {
    pub location: ChartPoint,
    pub position: Vec3,
    /// Polar coordinates `(r, t)` about the domain pole.
    pub polar: (f64, f64),
    pub which: FieldKind,
    pub value: f64,
    pub grad_norm: f64,
    pub hessian: [[f64; 2]; 2],
    pub hessian_det: f64,
    pub classification: Classification,
    /// Local degree of the gradient, `None` when the winding circle touches
    /// another zero.
    pub index: Option<i32>,
    /// False when Newton did not converge and the point is only a
    /// best-effort minimiser of `|∇|`.
    pub refined: bool,
}

impl CriticalPointRecord {
    /// `|det H| / ‖H‖²`, the scale-free distance from degeneracy.
    pub fn degeneracy_margin(&self) -> f64 {
        let h = &self.hessian;
        let n2 = h[0][0] * h[0][0] + h[0][1] * h[0][1] + h[1][0] * h[1][0] + h[1][1] * h[1][1];
        if n2 == 0.0 {
            0.0
        } else {
            self.hessian_det.abs() / n2
        }
    }
}

/// Classification by Hessian eigenvalue signs; `hess_scale` is the typical
/// Hessian norm of the field (pass 0 to use the ratio test alone).
pub fn classify(hess: [[f64; 2]; 2], hess_scale: f64) -> Classification {
    let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
    let n2 = hess.iter().flatten().map(|v| v * v).sum::<f64>();
    if n2 == 0.0 || det.abs() < DEGENERACY_THRESHOLD * n2 || n2.sqrt() < DEGENERACY_THRESHOLD * hess_scale {
        return Classification::Degenerate;
    }
    let ([l0, l1], _) = sym2_eigen(hess);
    if l1 < 0.0 {
        Classification::Max
    } else if l0 > 0.0 {
        Classification::Min
    } else {
        Classification::Saddle
    }
}

/// Winding number of `field` along the metric circle of `radius` about
/// `center.origin`, sampled at [`WINDING_SAMPLES`] points. `field` returns
/// components in any frame that is continuous on the disc bounded by the
/// circle.
pub fn local_degree(
    field: impl Fn(Vec3) -> Option<[f64; 2]>,
    center: &PolarFrame,
    radius: f64,
    zero_tol: f64,
) -> Result<i32> {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for k in 0..=WINDING_SAMPLES {
        let phi = TAU * (k % WINDING_SAMPLES) as f64 / WINDING_SAMPLES as f64;
        let x = center.exp([radius * phi.cos(), radius * phi.sin()]);
        let v = field(x).ok_or(Error::ZeroOnCircle)?;
        if v[0].hypot(v[1]) < zero_tol {
            return Err(Error::ZeroOnCircle);
        }
        let a = v[1].atan2(v[0]);
        if let Some(p) = prev {
            let mut d = a - p;
            if d > PI {
                d -= TAU;
            } else if d < -PI {
                d += TAU;
            }
            total += d;
        }
        prev = Some(a);
    }
    let turns = total / TAU;
    let n = turns.round();
    if (total - n * TAU).abs() > 1e-3 * TAU {
        return Err(Error::ZeroOnCircle);
    }
    Ok(n as i32)
}

/// Critical points of a grid field. Jets are fitted at every node, cells in
/// which both gradient components change sign seed Newton iterations, and
/// limits closer than twice the mesh width are merged.
pub fn find_critical_points(field: &ScalarField, which: FieldKind) -> Result<Vec<CriticalPointRecord>> {
    let sampler = JetSampler::new(&field.grid, &field.values);
    let jets = sampler.node_jets()?;
    Ok(find_critical_points_with(&sampler, &jets, which))
}

/// As [`find_critical_points`] with precomputed node jets.
pub fn find_critical_points_with(sampler: &JetSampler, jets: &[Jet], which: FieldKind) -> Vec<CriticalPointRecord> {
    let g = sampler.grid;
    let gscale = jets.iter().fold(0.0f64, |m, j| m.max(j.grad_norm())).max(1e-300);
    let hscale = jets.iter().fold(0.0f64, |m, j| m.max(j.hess_norm()));
    let h = g.h();
    let mut found: Vec<(Vec3, Jet, bool)> = Vec::new();
    for (corners, seed) in screening_cells(sampler) {
        if !sign_change(&corners, jets, 0) || !sign_change(&corners, jets, 1) {
            continue;
        }
        if let Some((x, jet, ok)) = refine(sampler, seed, gscale) {
            found.push((x, jet, ok));
        }
    }
    // Merge within 2h, keeping the smaller gradient.
    found.sort_by(|a, b| a.1.grad_norm().total_cmp(&b.1.grad_norm()));
    let surf = g.domain.surface;
    let mut kept: Vec<(Vec3, Jet, bool)> = Vec::new();
    for f in found {
        if kept.iter().all(|k| surf.distance(k.0, f.0) > 2.0 * h) {
            kept.push(f);
        }
    }
    let positions: Vec<Vec3> = kept.iter().map(|k| k.0).collect();
    let mut out: Vec<CriticalPointRecord> = kept
        .into_iter()
        .map(|(x, jet, ok)| {
            let radius = winding_radius(sampler, x, &positions);
            let frame = sampler.frame_at(x);
            let index = local_degree(|y| sampler.jet_at(y).ok().map(|j| j.grad), &frame, radius, 1e-12 * gscale).ok();
            record(sampler, x, &jet, which, index, ok, hscale)
        })
        .collect();
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out
}

fn record(
    sampler: &JetSampler,
    x: Vec3,
    jet: &Jet,
    which: FieldKind,
    index: Option<i32>,
    refined: bool,
    hess_scale: f64,
) -> CriticalPointRecord {
    let surf = sampler.grid.domain.surface;
    let polar = sampler.polar(x);
    CriticalPointRecord {
        location: ChartPoint::from_ambient(surf, x).unwrap_or(sampler.grid.domain.pole),
        position: x,
        polar,
        which,
        value: jet.value,
        grad_norm: jet.grad_norm(),
        hessian: jet.hess,
        hessian_det: jet.hess_det(),
        classification: if refined { classify(jet.hess, hess_scale) } else { Classification::Degenerate },
        index,
        refined,
    }
}

/// Circle radius for the index: small against the distance to other zeros
/// and to the boundary, large against the fit noise.
fn winding_radius(sampler: &JetSampler, x: Vec3, others: &[Vec3]) -> f64 {
    let g = sampler.grid;
    let surf = g.domain.surface;
    let mut r = 1.5 * sampler.spacing(x).max(g.h() * 0.5);
    for o in others {
        let d = surf.distance(*o, x);
        if d > 0.0 {
            r = r.min(0.4 * d);
        }
    }
    let (rx, t) = sampler.polar(x);
    let to_bdry = g.domain.rho(t) - rx;
    r.min(0.5 * to_bdry).max(1e-6)
}

/// Screening cells as node lists with a seed point at their centre.
fn screening_cells(sampler: &JetSampler) -> Vec<(Vec<usize>, Vec3)> {
    let g = sampler.grid;
    let mut cells = Vec::new();
    for j in 0..g.n_t {
        let jn = (j + 1) % g.n_t;
        let tc = g.t(j) + 0.5 * g.dt();
        let rho = g.domain.rho(tc);
        cells.push((alloc::vec![0, g.index(1, j), g.index(1, jn)], g.frame.point(g.ds() * rho / 1.5, tc)));
        for i in 1..g.n_s {
            let sc = g.s(i) + 0.5 * g.ds();
            cells.push((
                alloc::vec![g.index(i, j), g.index(i, jn), g.index(i + 1, j), g.index(i + 1, jn)],
                g.frame.point(sc * rho, tc),
            ));
        }
    }
    cells
}

fn sign_change(nodes: &[usize], jets: &[Jet], c: usize) -> bool {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &k in nodes {
        let v = jets[k].grad[c];
        lo = lo.min(v);
        hi = hi.max(v);
    }
    lo <= 0.0 && hi >= 0.0
}

/// Newton on the fitted gradient; falls back to the best iterate when it
/// stalls with a small gradient.
fn refine(sampler: &JetSampler, seed: Vec3, gscale: f64) -> Option<(Vec3, Jet, bool)> {
    let g = sampler.grid;
    let mut x = seed;
    let mut jet = sampler.jet_at(x).ok()?;
    let mut best = (x, jet);
    let max_step = 2.0 * g.h();
    for _ in 0..NEWTON_STEPS {
        if jet.grad_norm() <= 1e-13 * gscale {
            return Some((x, jet, true));
        }
        let det = jet.hess_det();
        let n2 = jet.hess_norm().powi(2);
        let step = if det.abs() > 1e-14 * n2 && n2 > 0.0 {
            let h = jet.hess;
            [
                -(h[1][1] * jet.grad[0] - h[0][1] * jet.grad[1]) / det,
                -(-h[1][0] * jet.grad[0] + h[0][0] * jet.grad[1]) / det,
            ]
        } else {
            return finish(best, gscale);
        };
        let mut len = step[0].hypot(step[1]);
        let mut step = step;
        if len > max_step {
            step = [step[0] * max_step / len, step[1] * max_step / len];
            len = max_step;
        }
        let frame = sampler.frame_at(x);
        let y = frame.exp(step);
        if sampler.s_of(y) >= 1.0 {
            return finish(best, gscale);
        }
        x = y;
        jet = match sampler.jet_at(x) {
            Ok(j) => j,
            Err(_) => return finish(best, gscale),
        };
        if jet.grad_norm() < best.1.grad_norm() {
            best = (x, jet);
        }
        if len <= 1e-14 * (1.0 + g.h()) {
            return Some((x, jet, jet.grad_norm() <= 1e-8 * gscale));
        }
    }
    finish(best, gscale)
}

fn finish(best: (Vec3, Jet), gscale: f64) -> Option<(Vec3, Jet, bool)> {
    let (x, jet) = best;
    if jet.grad_norm() <= 1e-8 * gscale {
        Some((x, jet, true))
    } else if jet.grad_norm() <= 1e-5 * gscale {
        Some((x, jet, false))
    } else {
        None
    }
}
