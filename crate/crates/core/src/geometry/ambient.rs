//! Embedded models of the three surfaces.
//!
//! The sphere is the unit sphere of R³, the hyperbolic plane is the upper
//! sheet of the hyperboloid `X² + Y² - T² = -1` with the Lorentz form
//! `<a, b> = a₀b₀ + a₁b₁ - a₂b₂`, and the plane is `z = 0` in R³. In all three
//! the exponential map takes the same shape,
//! `exp_p(r w) = Θ'(r) p + Θ(r) w` for a unit tangent `w`, which is what makes
//! the polar-coordinate machinery below uniform and free of chart
//! singularities.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::ModelSurface;

pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn lincomb(a: f64, x: Vec3, b: f64, y: Vec3) -> Vec3 {
    [a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl ModelSurface {
    /// Ambient inner product restricted to tangent vectors.
    #[inline]
    pub fn inner(self, a: Vec3, b: Vec3) -> f64 {
        match self {
            ModelSurface::Hyperbolic => a[0] * b[0] + a[1] * b[1] - a[2] * b[2],
            _ => dot(a, b),
        }
    }

    #[inline]
    pub fn norm(self, v: Vec3) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// Base point of the ambient model (chart origin / north pole).
    pub fn base_point(self) -> Vec3 {
        match self {
            ModelSurface::Plane => [0.0, 0.0, 0.0],
            ModelSurface::Sphere | ModelSurface::Hyperbolic => [0.0, 0.0, 1.0],
        }
    }

    pub fn exp(self, p: Vec3, v: Vec3) -> Vec3 {
        let d = self.norm(v);
        if d == 0.0 {
            return p;
        }
        match self {
            ModelSurface::Plane => add(p, v),
            _ => lincomb(self.warp_d(d), p, self.warp(d) / d, v),
        }
    }

    /// Inverse of [`exp`](Self::exp): the tangent vector at `p` pointing to `q`
    /// with length `d(p, q)`.
    pub fn log(self, p: Vec3, q: Vec3) -> Vec3 {
        match self {
            ModelSurface::Plane => sub(q, p),
            ModelSurface::Sphere => {
                let c = dot(p, q);
                let v = sub(q, scale(c, p));
                let sn = dot(v, v).sqrt();
                if sn == 0.0 {
                    return [0.0; 3];
                }
                let d = sn.atan2(c);
                scale(d / sn, v)
            }
            ModelSurface::Hyperbolic => {
                let c = -self.inner(p, q);
                let v = sub(q, scale(c, p));
                let sn = self.norm(v);
                if sn == 0.0 {
                    return [0.0; 3];
                }
                let d = sn.asinh();
                scale(d / sn, v)
            }
        }
    }

    pub fn distance(self, p: Vec3, q: Vec3) -> f64 {
        match self {
            ModelSurface::Plane => {
                let d = sub(q, p);
                dot(d, d).sqrt()
            }
            ModelSurface::Sphere => {
                let c = cross(p, q);
                dot(c, c).sqrt().atan2(dot(p, q))
            }
            ModelSurface::Hyperbolic => {
                let chord = self.norm(sub(q, p));
                2.0 * (0.5 * chord).asinh()
            }
        }
    }

    /// Project an ambient vector onto the tangent plane at `p`.
    pub fn project_tangent(self, p: Vec3, v: Vec3) -> Vec3 {
        match self {
            ModelSurface::Plane => [v[0], v[1], 0.0],
            ModelSurface::Sphere => sub(v, scale(dot(p, v), p)),
            ModelSurface::Hyperbolic => add(v, scale(self.inner(p, v), p)),
        }
    }

    /// Ambient value of the Killing field `c₁K₁ + c₂K₂ + c₃K₃` at `x`.
    ///
    /// The canonical chart bases correspond to: translations and the rotation
    /// about the origin (plane); rotations `-e_x×`, `e_y×`, `e_z×` (sphere);
    /// the boosts in the X–T and Y–T planes and the rotation about the T axis
    /// (hyperboloid).
    pub fn killing_ambient(self, c: [f64; 3], x: Vec3) -> Vec3 {
        match self {
            ModelSurface::Plane => [c[0] - c[2] * x[1], c[1] + c[2] * x[0], 0.0],
            ModelSurface::Sphere => cross([-c[0], c[1], c[2]], x),
            ModelSurface::Hyperbolic => {
                [c[0] * x[2] - c[2] * x[1], c[1] * x[2] + c[2] * x[0], c[0] * x[0] + c[1] * x[1]]
            }
        }
    }

    /// Coefficients of the Killing field whose integral curve through `p` is
    /// the geodesic with initial velocity `v` (a transvection along it).
    pub fn transvection(self, p: Vec3, v: Vec3) -> [f64; 3] {
        match self {
            ModelSurface::Plane => [v[0], v[1], 0.0],
            ModelSurface::Sphere => {
                let w = cross(p, v);
                [-w[0], w[1], w[2]]
            }
            ModelSurface::Hyperbolic => {
                // K(x) = -<p,x> v + <v,x> p, read off at e_T and e_X.
                [p[2] * v[0] - v[2] * p[0], p[2] * v[1] - v[2] * p[1], v[0] * p[1] - p[0] * v[1]]
            }
        }
    }
}

/// A point with a positively oriented orthonormal tangent frame; doubles as
/// the origin of geodesic polar coordinates `(r, t)`, with `t = 0` along `e1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFrame {
    pub surface: ModelSurface,
    pub origin: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl PolarFrame {
    pub fn new(surface: ModelSurface, origin: Vec3, e1: Vec3, e2: Vec3) -> Self {
        Self { surface, origin, e1, e2 }
    }

    #[inline]
    pub fn direction(&self, t: f64) -> Vec3 {
        let (s, c) = t.sin_cos();
        lincomb(c, self.e1, s, self.e2)
    }

    /// Point with polar coordinates `(r, t)`.
    pub fn point(&self, r: f64, t: f64) -> Vec3 {
        let w = self.direction(t);
        match self.surface {
            ModelSurface::Plane => add(self.origin, scale(r, w)),
            s => lincomb(s.warp_d(r), self.origin, s.warp(r), w),
        }
    }

    /// Polar coordinates of `q`; `t ∈ (-π, π]`.
    pub fn polar(&self, q: Vec3) -> (f64, f64) {
        let v = self.surface.log(self.origin, q);
        let a = self.surface.inner(v, self.e1);
        let b = self.surface.inner(v, self.e2);
        (a.hypot(b), b.atan2(a))
    }

    /// Components of a tangent vector at the origin in `(e1, e2)`.
    #[inline]
    pub fn components(&self, v: Vec3) -> [f64; 2] {
        [self.surface.inner(v, self.e1), self.surface.inner(v, self.e2)]
    }

    #[inline]
    pub fn vector(&self, c: [f64; 2]) -> Vec3 {
        lincomb(c[0], self.e1, c[1], self.e2)
    }

    /// Unit radial and angular vectors `(∂_r, ∂_t / Θ)` at `(r, t)`.
    pub fn radial_frame(&self, r: f64, t: f64) -> (Vec3, Vec3) {
        let s = self.surface;
        let w = self.direction(t);
        let (sn, cs) = t.sin_cos();
        let e_t = lincomb(-sn, self.e1, cs, self.e2);
        let e_r = match s {
            ModelSurface::Plane => w,
            _ => lincomb(-s.curvature() * s.warp(r), self.origin, s.warp_d(r), w),
        };
        (e_r, e_t)
    }

    /// Parallel transport of `(e1, e2)` along the radial geodesic to `(r, t)`.
    /// This is a smooth orthonormal frame on the whole polar patch.
    pub fn transported_frame(&self, r: f64, t: f64) -> (Vec3, Vec3) {
        let (e_r, e_t) = self.radial_frame(r, t);
        let (sn, cs) = t.sin_cos();
        (lincomb(cs, e_r, -sn, e_t), lincomb(sn, e_r, cs, e_t))
    }

    /// The frame re-centred at `q` by radial parallel transport.
    pub fn recentered(&self, q: Vec3) -> PolarFrame {
        let (r, t) = self.polar(q);
        let (f1, f2) = self.transported_frame(r, t);
        PolarFrame::new(self.surface, q, f1, f2)
    }

    /// Exponential map in frame components.
    pub fn exp(&self, c: [f64; 2]) -> Vec3 {
        self.surface.exp(self.origin, self.vector(c))
    }

    /// Logarithm in frame components (normal coordinates of `q`).
    pub fn log(&self, q: Vec3) -> [f64; 2] {
        self.components(self.surface.log(self.origin, q))
    }
}
