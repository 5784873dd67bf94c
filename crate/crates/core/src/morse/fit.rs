//! Derivative jets of grid fields by weighted local polynomial fits.
//!
//! Around a point `x` the neighbouring nodes are expressed in Riemannian
//! normal coordinates `(a, b)` (exact logarithm map, orthonormal frame at
//! `x`) and a quartic is fitted by weighted least squares. Because the
//! Christoffel symbols of normal coordinates vanish at the centre, the
//! quadratic coefficients are the covariant Hessian there.
//!
//! Gradients and Hessians are expressed in the transported frame of the
//! grid's pole (see [`PolarFrame::transported_frame`]), which is smooth on the
//! whole domain; winding numbers can therefore be read off directly.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::ambient::{lincomb, PolarFrame, Vec3};
use crate::linalg::least_squares;
use crate::pde::PolarGrid;

/// Value, gradient and Hessian at a point, in an orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl Jet {
    #[inline]
    pub fn grad_norm(&self) -> f64 {
        self.grad[0].hypot(self.grad[1])
    }

    #[inline]
    pub fn laplacian(&self) -> f64 {
        self.hess[0][0] + self.hess[1][1]
    }

    #[inline]
    pub fn hess_det(&self) -> f64 {
        self.hess[0][0] * self.hess[1][1] - self.hess[0][1] * self.hess[1][0]
    }

    /// Frobenius norm of the Hessian.
    #[inline]
    pub fn hess_norm(&self) -> f64 {
        let h = &self.hess;
        (h[0][0] * h[0][0] + h[0][1] * h[0][1] + h[1][0] * h[1][0] + h[1][1] * h[1][1]).sqrt()
    }

    /// `H v`.
    #[inline]
    pub fn hess_apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.hess[0][0] * v[0] + self.hess[0][1] * v[1], self.hess[1][0] * v[0] + self.hess[1][1] * v[1]]
    }
}

/// Fit radius in units of the local mesh width.
pub const RADIUS_FACTOR: f64 = 3.0;
const NCOEF: usize = 15;
const MIN_POINTS: usize = 24;

/// Evaluates jets of one field on one grid.
#[derive(Debug, Clone, Copy)]
pub struct JetSampler<'a> {
    pub grid: &'a PolarGrid,
    pub values: &'a [f64],
    rho_min: f64,
}

impl<'a> JetSampler<'a> {
    pub fn new(grid: &'a PolarGrid, values: &'a [f64]) -> Self {
        let rho_min = (0..grid.n_t).map(|j| grid.rho_at(j)).fold(f64::INFINITY, f64::min);
        Self { grid, values, rho_min }
    }

    /// Polar coordinates of `x` about the grid pole, `t ∈ [0, 2π)`.
    pub fn polar(&self, x: Vec3) -> (f64, f64) {
        let (r, t) = self.grid.frame.polar(x);
        (r, crate::geometry::wrap_angle(t))
    }

    /// Mapped radial coordinate `s = r / ρ(t)`.
    pub fn s_of(&self, x: Vec3) -> f64 {
        let (r, t) = self.polar(x);
        r / self.grid.domain.rho(t)
    }

    /// The pole frame transported to `x`.
    pub fn frame_at(&self, x: Vec3) -> PolarFrame {
        let (r, t) = self.polar(x);
        let (e1, e2) = self.grid.frame.transported_frame(r, t);
        PolarFrame::new(self.grid.domain.surface, x, e1, e2)
    }

    /// Local mesh width at `x`.
    pub fn spacing(&self, x: Vec3) -> f64 {
        let g = self.grid;
        let (r, t) = self.polar(x);
        let rho = g.domain.rho(t);
        (g.ds() * rho).max(g.domain.surface.warp(r.min(rho)) * g.dt())
    }

    fn neighbours(&self, x: Vec3, radius: f64, out: &mut Vec<usize>) {
        out.clear();
        let g = self.grid;
        let surf = g.domain.surface;
        let (r, t) = self.polar(x);
        let s = r / g.domain.rho(t);
        let i0 = (s * g.n_s as f64).round() as isize;
        let ni = (radius / (g.ds() * self.rho_min)).ceil() as isize + 1;
        let j0 = (t / g.dt()).round() as isize;
        let lo = (i0 - ni).max(0) as usize;
        let hi = ((i0 + ni).max(0) as usize).min(g.n_s);
        for i in lo..=hi {
            if i == 0 {
                out.push(0);
                continue;
            }
            let ri = g.s(i) * g.domain.rho(t);
            let inner = (ri - radius).max(0.0);
            let th = surf.warp(inner.min(PI / 2.0));
            let delta = if th <= 0.0 { PI } else { 1.5 * radius / th + 2.0 * g.dt() };
            let nj = (delta / g.dt()).ceil() as isize;
            if 2 * nj + 1 >= g.n_t as isize || delta >= PI {
                for j in 0..g.n_t {
                    out.push(g.index(i, j));
                }
            } else {
                for dj in -nj..=nj {
                    let j = (j0 + dj).rem_euclid(g.n_t as isize) as usize;
                    out.push(g.index(i, j));
                }
            }
        }
    }

    /// Jet at an arbitrary point of the closed domain.
    pub fn jet_at(&self, x: Vec3) -> Result<Jet> {
        let frame = self.frame_at(x);
        self.jet_in(&frame)
    }

    /// Jet at `frame.origin`, in the given frame.
    pub fn jet_in(&self, frame: &PolarFrame) -> Result<Jet> {
        let x = frame.origin;
        if self.s_of(x) > 1.0 + 1e-9 {
            return Err(Error::NotApplicable("point outside the domain".into()));
        }
        let mut radius = RADIUS_FACTOR * self.spacing(x);
        let mut idx = Vec::with_capacity(128);
        let mut rows: Vec<f64> = Vec::with_capacity(128 * NCOEF);
        let mut rhs: Vec<f64> = Vec::with_capacity(128);
        for _ in 0..6 {
            self.neighbours(x, radius, &mut idx);
            rows.clear();
            rhs.clear();
            for &k in &idx {
                let c = frame.log(self.grid.position(k));
                let d2 = c[0] * c[0] + c[1] * c[1];
                let q = d2 / (radius * radius);
                if q >= 1.0 {
                    continue;
                }
                let w = (1.0 - q) * (1.0 - q);
                let sw = w.sqrt();
                let (a, b) = (c[0] / radius, c[1] / radius);
                let (a2, b2) = (a * a, b * b);
                rows.extend_from_slice(&[
                    sw,
                    sw * a,
                    sw * b,
                    sw * 0.5 * a2,
                    sw * a * b,
                    sw * 0.5 * b2,
                    sw * a2 * a,
                    sw * a2 * b,
                    sw * a * b2,
                    sw * b2 * b,
                    sw * a2 * a2,
                    sw * a2 * a * b,
                    sw * a2 * b2,
                    sw * a * b2 * b,
                    sw * b2 * b2,
                ]);
                rhs.push(sw * self.values[k]);
            }
            let m = rhs.len();
            if m >= MIN_POINTS {
                if let Some(c) = least_squares(&rows, m, NCOEF, &rhs) {
                    let r2 = radius * radius;
                    return Ok(Jet {
                        value: c[0],
                        grad: [c[1] / radius, c[2] / radius],
                        hess: [[c[3] / r2, c[4] / r2], [c[4] / r2, c[5] / r2]],
                    });
                }
            }
            radius *= 1.25;
        }
        Err(Error::NotApplicable("not enough nodes for a local fit".into()))
    }

    /// Jets at every node, in the transported frame.
    pub fn node_jets(&self) -> Result<Vec<Jet>> {
        (0..self.grid.n_nodes()).map(|k| self.jet_at(self.grid.position(k))).collect()
    }

    /// Ambient gradient vector from frame components.
    pub fn gradient_vector(&self, x: Vec3, grad: [f64; 2]) -> Vec3 {
        let f = self.frame_at(x);
        lincomb(grad[0], f.e1, grad[1], f.e2)
    }
}
