//! Star-shaped domains `{ (r, t) : r < ρ(t) }` in geodesic polar coordinates
//! about an interior pole, with `ρ` a truncated Fourier series.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::ambient::{lincomb, PolarFrame, Vec3};
use crate::geometry::{polar_frame, ChartPoint, KillingField, ModelSurface};

/// Samples used for curvature minima.
pub const CURVATURE_SAMPLES: usize = 1024;
/// Boundary samples for the pairwise diameter.
pub const DIAMETER_SAMPLES: usize = 512;
/// Initial samples when bracketing tangencies.
pub const TANGENCY_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub surface: ModelSurface,
    pub pole: ChartPoint,
    /// `a₀, a₁, ...` in `ρ(t) = a₀ + Σ aₖ cos kt + Σ bₖ sin kt`.
    pub fourier_cos: Vec<f64>,
    /// `b₁, b₂, ...`.
    pub fourier_sin: Vec<f64>,
    pub label: String,
}

/// A boundary sample with its ambient frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub t: f64,
    pub position: Vec3,
    pub unit_tangent: Vec3,
    /// Outward unit normal.
    pub normal: Vec3,
    pub curvature: f64,
}

impl DomainSpec {
    /// Checks `ρ > 0` and, on the sphere, `ρ < π`.
    pub fn new(
        surface: ModelSurface,
        pole: ChartPoint,
        fourier_cos: Vec<f64>,
        fourier_sin: Vec<f64>,
        label: &str,
    ) -> Result<Self> {
        let d = Self { surface, pole, fourier_cos, fourier_sin, label: label.to_string() };
        d.validate()?;
        Ok(d)
    }

    pub fn disc(surface: ModelSurface, pole: ChartPoint, radius: f64, label: &str) -> Result<Self> {
        Self::new(surface, pole, alloc::vec![radius], Vec::new(), label)
    }

    pub fn validate(&self) -> Result<()> {
        if self.fourier_cos.is_empty() {
            return Err(Error::InvalidProfile("empty cosine series".into()));
        }
        if self.fourier_cos.iter().chain(&self.fourier_sin).any(|c| !c.is_finite()) {
            return Err(Error::InvalidProfile("non-finite coefficient".into()));
        }
        let (lo, hi) = self.radius_range();
        if lo <= 0.0 {
            return Err(Error::InvalidProfile("profile is not positive".into()));
        }
        if self.surface == ModelSurface::Sphere && hi >= PI {
            return Err(Error::InvalidProfile("profile reaches the antipode of the pole".into()));
        }
        Ok(())
    }

    /// `(ρ, ρ', ρ'')` at `t`.
    pub fn rho_jet(&self, t: f64) -> (f64, f64, f64) {
        let mut r = self.fourier_cos[0];
        let (mut d1, mut d2) = (0.0, 0.0);
        for (k, &a) in self.fourier_cos.iter().enumerate().skip(1) {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            r += a * c;
            d1 -= kf * a * s;
            d2 -= kf * kf * a * c;
        }
        for (k, &b) in self.fourier_sin.iter().enumerate() {
            let kf = (k + 1) as f64;
            let (s, c) = (kf * t).sin_cos();
            r += b * s;
            d1 += kf * b * c;
            d2 -= kf * kf * b * s;
        }
        (r, d1, d2)
    }

    #[inline]
    pub fn rho(&self, t: f64) -> f64 {
        self.rho_jet(t).0
    }

    /// Sampled `(min ρ, max ρ)`.
    pub fn radius_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..CURVATURE_SAMPLES {
            let r = self.rho(TAU * j as f64 / CURVATURE_SAMPLES as f64);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        (lo, hi)
    }

    pub fn frame(&self) -> PolarFrame {
        polar_frame(self.surface, &self.pole)
    }

    pub fn boundary_point(&self, t: f64) -> BoundaryPoint {
        let frame = self.frame();
        self.boundary_point_in(&frame, t)
    }

    pub(crate) fn boundary_point_in(&self, frame: &PolarFrame, t: f64) -> BoundaryPoint {
        let s = self.surface;
        let (r, r1, r2) = self.rho_jet(t);
        let th = s.warp(r);
        let th1 = s.warp_d(r);
        let (e_r, e_t) = frame.radial_frame(r, t);
        let l = (r1 * r1 + th * th).sqrt();
        BoundaryPoint {
            t,
            position: frame.point(r, t),
            unit_tangent: lincomb(r1 / l, e_r, th / l, e_t),
            normal: lincomb(th / l, e_r, -r1 / l, e_t),
            curvature: (2.0 * r1 * r1 * th1 - th * r2 + th * th * th1) / (l * l * l),
        }
    }

    /// Whether `x` lies strictly inside; `x` must be on the surface.
    pub fn contains(&self, x: Vec3) -> bool {
        let (r, t) = self.frame().polar(x);
        if self.surface == ModelSurface::Sphere && r > PI - 1e-9 {
            return false;
        }
        r < self.rho(t)
    }
}

/// Geodesic curvature of the boundary at parameter `t`, for the outward
/// normal (positive on convex arcs).
pub fn boundary_curvature(d: &DomainSpec, t: f64) -> f64 {
    let s = d.surface;
    let (r, r1, r2) = d.rho_jet(t);
    let th = s.warp(r);
    let th1 = s.warp_d(r);
    (2.0 * r1 * r1 * th1 - th * r2 + th * th * th1) / (r1 * r1 + th * th).powf(1.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub ok: bool,
    pub min_curvature: f64,
    pub min_curvature_t: f64,
    /// `κ > 0` everywhere.
    pub convex: bool,
    /// Sphere only.
    pub diameter: Option<f64>,
    pub diameter_ok: Option<bool>,
    /// Hyperbolic plane only: `κ ≥ 1` everywhere.
    pub horoconvex: Option<bool>,
}

impl HypothesisReport {
    /// Short names of the failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.convex {
            f.push("curvature");
        }
        if self.diameter_ok == Some(false) {
            f.push("diameter");
        }
        if self.horoconvex == Some(false) {
            f.push("horoconvexity");
        }
        f
    }
}

/// Minimum of `κ` by dense sampling followed by golden-section refinement.
pub fn min_curvature(d: &DomainSpec) -> (f64, f64) {
    let n = CURVATURE_SAMPLES;
    let h = TAU / n as f64;
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..n {
        let t = h * j as f64;
        let k = boundary_curvature(d, t);
        if k < best.0 {
            best = (k, t);
        }
    }
    let (mut a, mut b) = (best.1 - h, best.1 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let e = a + g * (b - a);
        if boundary_curvature(d, c) < boundary_curvature(d, e) {
            b = e;
        } else {
            a = c;
        }
    }
    let t = 0.5 * (a + b);
    let k = boundary_curvature(d, t);
    if k < best.0 {
        (k, crate::geometry::wrap_angle(t))
    } else {
        best
    }
}

/// Largest pairwise distance over [`DIAMETER_SAMPLES`] boundary points.
pub fn boundary_diameter(d: &DomainSpec) -> f64 {
    let frame = d.frame();
    let pts: Vec<Vec3> = (0..DIAMETER_SAMPLES)
        .map(|j| {
            let t = TAU * j as f64 / DIAMETER_SAMPLES as f64;
            frame.point(d.rho(t), t)
        })
        .collect();
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(d.surface.distance(pts[i], pts[j]));
        }
    }
    best
}

/// The convexity hypotheses for the surface of `d`: `κ > 0` in the plane;
/// `κ > 0` and diameter below `π/2` on the sphere; `κ ≥ 1` in the hyperbolic
/// plane.
pub fn check_hypotheses(d: &DomainSpec) -> HypothesisReport {
    let (kmin, tmin) = min_curvature(d);
    let convex = kmin > 0.0;
    let mut rep = HypothesisReport {
        ok: convex,
        min_curvature: kmin,
        min_curvature_t: tmin,
        convex,
        diameter: None,
        diameter_ok: None,
        horoconvex: None,
    };
    match d.surface {
        ModelSurface::Plane => {}
        ModelSurface::Sphere => {
            let diam = boundary_diameter(d);
            let ok = diam < FRAC_PI_2;
            rep.diameter = Some(diam);
            rep.diameter_ok = Some(ok);
            rep.ok &= ok;
        }
        ModelSurface::Hyperbolic => {
            let ok = kmin >= 1.0;
            rep.horoconvex = Some(ok);
            rep.ok &= ok;
        }
    }
    rep
}

/// `⟨K, ν⟩` along the boundary.
pub fn killing_flux(d: &DomainSpec, k: &KillingField, frame: &PolarFrame, t: f64) -> f64 {
    let b = d.boundary_point_in(frame, t);
    d.surface.inner(k.ambient_at(b.position), b.normal)
}

/// Number of transversal zeros of `t ↦ ⟨K, ν⟩` on the boundary.
pub fn count_boundary_tangencies(d: &DomainSpec, k: &KillingField) -> Result<usize> {
    count_boundary_tangencies_with(d, k, TANGENCY_SAMPLES)
}

pub fn count_boundary_tangencies_with(d: &DomainSpec, k: &KillingField, samples: usize) -> Result<usize> {
    let frame = d.frame();
    let g = |t: f64| killing_flux(d, k, &frame, t);
    let h = TAU / samples as f64;
    let vals: Vec<f64> = (0..samples).map(|j| g(h * j as f64)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale < 1e-12 {
        return Err(Error::IdenticallyTangent);
    }
    let tiny = 1e-9 * scale;
    let mut count = 0;
    for j in 0..samples {
        let (a, b) = (vals[j], vals[(j + 1) % samples]);
        let ta = h * j as f64;
        if a.abs() <= tiny {
            // A sampled zero: transversal iff the neighbours have opposite signs.
            let prev = vals[(j + samples - 1) % samples];
            if prev * b < 0.0 {
                count += 1;
                continue;
            }
            return Err(Error::DegenerateTangency { t: ta });
        }
        if b.abs() > tiny && a * b < 0.0 {
            let (mut lo, mut hi) = (ta, ta + h);
            let mut glo = a;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm * glo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            let t0 = 0.5 * (lo + hi);
            let eps = 1e-3 * h;
            let slope = (g(t0 + eps) - g(t0 - eps)) / (2.0 * eps);
            if slope.abs() < 1e-6 * scale {
                return Err(Error::DegenerateTangency { t: crate::geometry::wrap_angle(t0) });
            }
            count += 1;
        }
    }
    Ok(count)
}

fn cp(s: ModelSurface, a: f64, b: f64) -> ChartPoint {
    ChartPoint::new(s, a, b).expect("catalogue pole")
}

fn entry(s: ModelSurface, pole: ChartPoint, cos: &[f64], sin: &[f64], label: &str) -> DomainSpec {
    DomainSpec::new(s, pole, cos.to_vec(), sin.to_vec(), label).expect("catalogue profile")
}

/// The regression catalogue.
pub fn builtin_domains() -> Vec<DomainSpec> {
    use ModelSurface::*;
    let o = cp(Plane, 0.0, 0.0);
    let eq = cp(Sphere, FRAC_PI_2, 0.0);
    let h0 = cp(Hyperbolic, 0.0, 0.0);
    alloc::vec![
        entry(Plane, o, &[1.0], &[], "euclid_disc_R1"),
        entry(Plane, o, &[1.0, 0.0, 0.15], &[], "euclid_oval"),
        entry(Plane, cp(Plane, 0.2, -0.1), &[0.9, 0.1, 0.06], &[], "euclid_egg"),
        entry(Plane, o, &[1.0, 0.0, 0.3], &[], "euclid_peanut"),
        entry(Sphere, eq, &[0.6], &[], "sphere_cap_r0.6"),
        entry(Sphere, eq, &[0.3], &[], "sphere_cap_r0.3"),
        entry(Sphere, eq, &[0.55, 0.0, 0.08], &[], "sphere_oval"),
        entry(Sphere, cp(Sphere, 1.0, 0.5), &[0.5, 0.05, 0.04], &[0.03], "sphere_egg"),
        entry(Sphere, eq, &[PI / 3.0], &[], "sphere_cap_diam_violation"),
        entry(Sphere, cp(Sphere, 0.0, 0.0), &[FRAC_PI_2], &[], "sphere_hemisphere"),
        entry(Hyperbolic, h0, &[1.0], &[], "hyp_disc_r1"),
        entry(Hyperbolic, h0, &[2.0], &[], "hyp_disc_r2"),
        entry(Hyperbolic, h0, &[1.0, 0.0, 0.1], &[], "hyp_horo_oval"),
        entry(Hyperbolic, cp(Hyperbolic, 0.3, 0.1), &[0.7, 0.0, 0.05], &[0.0, 0.03], "hyp_offset_oval"),
        entry(Hyperbolic, h0, &[1.5, 0.0, 0.3], &[], "hyp_convex_not_horo"),
    ]
}

pub fn builtin_domain(label: &str) -> Option<DomainSpec> {
    builtin_domains().into_iter().find(|d| d.label == label)
}

/// Nested elongation family `ρ = r₀ + e (1 + cos 2t)` in the hyperbolic
/// plane, `e` evenly spaced in `[0, e_max]`.
pub fn hyperbolic_elongation_family(r0: f64, e_max: f64, members: usize) -> Vec<DomainSpec> {
    let pole = cp(ModelSurface::Hyperbolic, 0.0, 0.0);
    (0..members)
        .map(|i| {
            let e = if members > 1 { e_max * i as f64 / (members - 1) as f64 } else { 0.0 };
            let label = alloc::format!("hyp_elongation_e{e:.4}");
            entry(ModelSurface::Hyperbolic, pole, &[r0 + e, 0.0, e], &[], &label)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_curvatures() {
        let e = builtin_domain("euclid_disc_R1").unwrap();
        assert!((boundary_curvature(&e, 0.3) - 1.0).abs() < 1e-14);
        let s = builtin_domain("sphere_cap_r0.6").unwrap();
        assert!((boundary_curvature(&s, 1.0) - 1.0 / 0.6f64.tan()).abs() < 1e-12);
        let h = builtin_domain("hyp_disc_r2").unwrap();
        assert!((boundary_curvature(&h, 2.0) - 1.0 / 2f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn hypothesis_examples() {
        let r = check_hypotheses(&builtin_domain("euclid_disc_R1").unwrap());
        assert!(r.ok && (r.min_curvature - 1.0).abs() < 1e-12);
        let r = check_hypotheses(&builtin_domain("sphere_cap_diam_violation").unwrap());
        assert!(!r.ok && r.diameter_ok == Some(false));
        assert!((r.diameter.unwrap() - 2.0 * PI / 3.0).abs() < 1e-3);
        let r = check_hypotheses(&builtin_domain("hyp_disc_r2").unwrap());
        assert!(r.ok && (r.min_curvature - 1.0373147207275481).abs() < 1e-9);
        let r = check_hypotheses(&builtin_domain("hyp_convex_not_horo").unwrap());
        assert!(!r.ok && r.convex && r.min_curvature < 1.0);
        assert_eq!(r.failures(), ["horoconvexity"]);
    }

    #[test]
    fn tangency_examples() {
        let d = builtin_domain("euclid_oval").unwrap();
        let k = KillingField::basis(ModelSurface::Plane, 0);
        assert_eq!(count_boundary_tangencies(&d, &k).unwrap(), 2);
        let d = builtin_domain("hyp_disc_r2").unwrap();
        let k = KillingField::basis(ModelSurface::Hyperbolic, 0);
        assert_eq!(count_boundary_tangencies(&d, &k).unwrap(), 2);
        let k = KillingField::basis(ModelSurface::Hyperbolic, 2);
        assert_eq!(count_boundary_tangencies(&d, &k), Err(Error::IdenticallyTangent));
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        let p = ChartPoint::new(ModelSurface::Plane, 0.0, 0.0).unwrap();
        assert!(DomainSpec::new(ModelSurface::Plane, p, alloc::vec![0.5, 0.6], Vec::new(), "x").is_err());
        let q = ChartPoint::new(ModelSurface::Sphere, 1.0, 0.0).unwrap();
        assert!(DomainSpec::disc(ModelSurface::Sphere, q, 3.2, "x").is_err());
    }
}
