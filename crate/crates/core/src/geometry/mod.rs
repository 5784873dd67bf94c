//! Differential geometry of the three model surfaces in fixed charts.
//!
//! | surface    | chart            | metric                            |
//! |------------|------------------|-----------------------------------|
//! | plane      | Cartesian (x,y)  | `dx² + dy²`                       |
//! | sphere     | spherical (θ,φ)  | `dθ² + sin²θ dφ²`                 |
//! | hyperbolic | Poincaré disk    | `4 (dx² + dy²) / (1 - x² - y²)²`  |
//!
//! Chart-level operations ([`metric_at`], [`christoffel_at`],
//! [`killing_basis_at`], [`killing_for_geodesic`], ...) follow these charts
//! literally. Grid and audit code works through the embedded models in
//! [`ambient`], which have no coordinate singularities.

pub mod ambient;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use ambient::{dot, lincomb, PolarFrame, Vec3};

/// Half-width of the band around `θ ∈ {0, π}` where the spherical chart is
/// treated as singular.
pub const SINGULAR_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelSurface {
    Sphere,
    Plane,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartKind {
    Cartesian,
    Spherical,
    PoincareDisk,
}

impl ModelSurface {
    pub const ALL: [ModelSurface; 3] = [ModelSurface::Sphere, ModelSurface::Plane, ModelSurface::Hyperbolic];

    pub fn curvature_sign(self) -> i32 {
        match self {
            ModelSurface::Sphere => 1,
            ModelSurface::Plane => 0,
            ModelSurface::Hyperbolic => -1,
        }
    }

    #[inline]
    pub fn curvature(self) -> f64 {
        self.curvature_sign() as f64
    }

    pub fn chart_kind(self) -> ChartKind {
        match self {
            ModelSurface::Sphere => ChartKind::Spherical,
            ModelSurface::Plane => ChartKind::Cartesian,
            ModelSurface::Hyperbolic => ChartKind::PoincareDisk,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelSurface::Sphere => "sphere",
            ModelSurface::Plane => "plane",
            ModelSurface::Hyperbolic => "hyperbolic",
        }
    }

    /// Warp factor Θ of the polar form `dr² + Θ(r)² dt²`.
    #[inline]
    pub fn warp(self, r: f64) -> f64 {
        match self {
            ModelSurface::Sphere => r.sin(),
            ModelSurface::Plane => r,
            ModelSurface::Hyperbolic => r.sinh(),
        }
    }

    #[inline]
    pub fn warp_d(self, r: f64) -> f64 {
        match self {
            ModelSurface::Sphere => r.cos(),
            ModelSurface::Plane => 1.0,
            ModelSurface::Hyperbolic => r.cosh(),
        }
    }

    /// `∫₀ʳ Θ`, the area of a geodesic disc of radius `r` divided by 2π.
    #[inline]
    pub fn warp_integral(self, r: f64) -> f64 {
        match self {
            ModelSurface::Sphere => 2.0 * (0.5 * r).sin().powi(2),
            ModelSurface::Plane => 0.5 * r * r,
            ModelSurface::Hyperbolic => 2.0 * (0.5 * r).sinh().powi(2),
        }
    }

    /// Chart coordinates → embedded point.
    pub fn to_ambient(self, c: [f64; 2]) -> Vec3 {
        match self {
            ModelSurface::Plane => [c[0], c[1], 0.0],
            ModelSurface::Sphere => {
                let (st, ct) = c[0].sin_cos();
                let (sp, cp) = c[1].sin_cos();
                [st * cp, st * sp, ct]
            }
            ModelSurface::Hyperbolic => {
                let rr = c[0] * c[0] + c[1] * c[1];
                let s = 1.0 - rr;
                [2.0 * c[0] / s, 2.0 * c[1] / s, (1.0 + rr) / s]
            }
        }
    }

    /// Embedded point → chart coordinates (`φ` wrapped into `[0, 2π)`).
    pub fn from_ambient(self, x: Vec3) -> [f64; 2] {
        match self {
            ModelSurface::Plane => [x[0], x[1]],
            ModelSurface::Sphere => {
                let theta = x[0].hypot(x[1]).atan2(x[2]);
                let mut phi = x[1].atan2(x[0]);
                if phi < 0.0 {
                    phi += TAU;
                }
                if phi >= TAU {
                    phi -= TAU;
                }
                [theta, phi]
            }
            ModelSurface::Hyperbolic => {
                let d = 1.0 + x[2];
                [x[0] / d, x[1] / d]
            }
        }
    }

    /// Pushforward of the coordinate vectors `∂₁, ∂₂` at a chart point.
    pub fn chart_basis(self, c: [f64; 2]) -> (Vec3, Vec3) {
        match self {
            ModelSurface::Plane => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
            ModelSurface::Sphere => {
                let (st, ct) = c[0].sin_cos();
                let (sp, cp) = c[1].sin_cos();
                ([ct * cp, ct * sp, -st], [-st * sp, st * cp, 0.0])
            }
            ModelSurface::Hyperbolic => {
                let (x, y) = (c[0], c[1]);
                let s = 1.0 - x * x - y * y;
                let s2 = s * s;
                (
                    [2.0 / s + 4.0 * x * x / s2, 4.0 * x * y / s2, 4.0 * x / s2],
                    [4.0 * x * y / s2, 2.0 / s + 4.0 * y * y / s2, 4.0 * y / s2],
                )
            }
        }
    }

    /// Orthonormal frame along the chart directions; well defined on the
    /// whole sphere, including the chart poles.
    pub fn chart_frame(self, c: [f64; 2]) -> (Vec3, Vec3) {
        match self {
            ModelSurface::Sphere => {
                let (st, ct) = c[0].sin_cos();
                let (sp, cp) = c[1].sin_cos();
                ([ct * cp, ct * sp, -st], [-sp, cp, 0.0])
            }
            _ => {
                let (b1, b2) = self.chart_basis(c);
                let l = self.norm(b1);
                (ambient::scale(1.0 / l, b1), ambient::scale(1.0 / l, b2))
            }
        }
    }

    pub fn push_tangent(self, c: [f64; 2], v: [f64; 2]) -> Vec3 {
        let (b1, b2) = self.chart_basis(c);
        lincomb(v[0], b1, v[1], b2)
    }

    /// Chart components of an ambient tangent vector.
    pub fn pull_tangent(self, c: [f64; 2], v: Vec3) -> [f64; 2] {
        match self {
            ModelSurface::Plane => [v[0], v[1]],
            ModelSurface::Sphere => {
                let (e1, e2) = self.chart_frame(c);
                [dot(v, e1), dot(v, e2) / c[0].sin()]
            }
            ModelSurface::Hyperbolic => {
                let (b1, b2) = self.chart_basis(c);
                let l2 = self.inner(b1, b1);
                [self.inner(v, b1) / l2, self.inner(v, b2) / l2]
            }
        }
    }
}

/// A point in the canonical chart of some model surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    coords: [f64; 2],
    singular: bool,
}

impl ChartPoint {
    /// Validates the chart domain: `θ ∈ [0, π]` for the sphere (`φ` is
    /// wrapped), `x² + y² < 1` for the Poincaré disk.
    pub fn new(surface: ModelSurface, a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::OutsideChart);
        }
        match surface {
            ModelSurface::Plane => Ok(Self { coords: [a, b], singular: false }),
            ModelSurface::Sphere => {
                if !(0.0..=PI).contains(&a) {
                    return Err(Error::OutsideChart);
                }
                let phi = wrap_angle(b);
                let singular = !(SINGULAR_BAND..=PI - SINGULAR_BAND).contains(&a);
                Ok(Self { coords: [a, phi], singular })
            }
            ModelSurface::Hyperbolic => {
                if a * a + b * b >= 1.0 {
                    return Err(Error::OutsideChart);
                }
                Ok(Self { coords: [a, b], singular: false })
            }
        }
    }

    pub fn from_ambient(surface: ModelSurface, x: Vec3) -> Result<Self> {
        let c = surface.from_ambient(x);
        Self::new(surface, c[0], c[1])
    }

    #[inline]
    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    #[inline]
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn ambient(&self, surface: ModelSurface) -> Vec3 {
        surface.to_ambient(self.coords)
    }

    fn regular(&self) -> Result<[f64; 2]> {
        if self.singular {
            Err(Error::SingularChartPoint { theta: self.coords[0] })
        } else {
            Ok(self.coords)
        }
    }
}

/// Tangent vector in chart-frame components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: ChartPoint,
    pub components: [f64; 2],
}

impl TangentVector {
    pub fn new(base: ChartPoint, components: [f64; 2]) -> Self {
        Self { base, components }
    }

    pub fn norm(&self, surface: ModelSurface) -> f64 {
        surface.norm(self.ambient(surface))
    }

    pub fn ambient(&self, surface: ModelSurface) -> Vec3 {
        surface.push_tangent(self.base.coords, self.components)
    }
}

pub type Matrix2 = [[f64; 2]; 2];

/// Metric components `g_ij` in the chart frame.
pub fn metric_at(surface: ModelSurface, p: &ChartPoint) -> Result<Matrix2> {
    let c = p.regular()?;
    Ok(match surface {
        ModelSurface::Plane => [[1.0, 0.0], [0.0, 1.0]],
        ModelSurface::Sphere => [[1.0, 0.0], [0.0, c[0].sin().powi(2)]],
        ModelSurface::Hyperbolic => {
            let l = 2.0 / (1.0 - c[0] * c[0] - c[1] * c[1]);
            [[l * l, 0.0], [0.0, l * l]]
        }
    })
}

/// Christoffel symbols `Γ[k][i][j] = Γᵏᵢⱼ` of the chart.
pub fn christoffel_at(surface: ModelSurface, p: &ChartPoint) -> Result<[[[f64; 2]; 2]; 2]> {
    let c = p.regular()?;
    let mut g = [[[0.0; 2]; 2]; 2];
    match surface {
        ModelSurface::Plane => {}
        ModelSurface::Sphere => {
            let (st, ct) = c[0].sin_cos();
            g[0][1][1] = -st * ct;
            g[1][0][1] = ct / st;
            g[1][1][0] = ct / st;
        }
        ModelSurface::Hyperbolic => {
            let s = 1.0 - c[0] * c[0] - c[1] * c[1];
            let sigma = [2.0 * c[0] / s, 2.0 * c[1] / s];
            for (k, gk) in g.iter_mut().enumerate() {
                for (i, gki) in gk.iter_mut().enumerate() {
                    for (j, v) in gki.iter_mut().enumerate() {
                        let dik = (i == k) as u8 as f64;
                        let djk = (j == k) as u8 as f64;
                        let dij = (i == j) as u8 as f64;
                        *v = dik * sigma[j] + djk * sigma[i] - dij * sigma[k];
                    }
                }
            }
        }
    }
    Ok(g)
}

fn basis_components(surface: ModelSurface, c: [f64; 2]) -> [[f64; 2]; 3] {
    match surface {
        ModelSurface::Plane => [[1.0, 0.0], [0.0, 1.0], [-c[1], c[0]]],
        ModelSurface::Sphere => {
            let (sp, cp) = c[1].sin_cos();
            let cot = c[0].cos() / c[0].sin();
            [[sp, cot * cp], [cp, -cot * sp], [0.0, 1.0]]
        }
        ModelSurface::Hyperbolic => {
            let (x, y) = (c[0], c[1]);
            [[0.5 * (1.0 - x * x + y * y), -x * y], [-x * y, 0.5 * (1.0 + x * x - y * y)], [-y, x]]
        }
    }
}

/// `J[a][i][k] = ∂ᵢ Kₐᵏ` for the three basis fields.
fn basis_jacobians(surface: ModelSurface, c: [f64; 2]) -> [Matrix2; 3] {
    match surface {
        ModelSurface::Plane => [[[0.0; 2]; 2], [[0.0; 2]; 2], [[0.0, 1.0], [-1.0, 0.0]]],
        ModelSurface::Sphere => {
            let (st, ct) = c[0].sin_cos();
            let (sp, cp) = c[1].sin_cos();
            let cot = ct / st;
            let csc2 = 1.0 / (st * st);
            [[[0.0, -cp * csc2], [cp, -cot * sp]], [[0.0, sp * csc2], [-sp, -cot * cp]], [[0.0; 2]; 2]]
        }
        ModelSurface::Hyperbolic => {
            let (x, y) = (c[0], c[1]);
            [[[-x, -y], [y, -x]], [[-y, x], [-x, -y]], [[0.0, 1.0], [-1.0, 0.0]]]
        }
    }
}

/// The canonical Killing basis `(K₁, K₂, K₃)` at `p`.
pub fn killing_basis_at(surface: ModelSurface, p: &ChartPoint) -> Result<[TangentVector; 3]> {
    let c = p.regular()?;
    let b = basis_components(surface, c);
    Ok([TangentVector::new(*p, b[0]), TangentVector::new(*p, b[1]), TangentVector::new(*p, b[2])])
}

/// `t` reduced to `[0, 2π)`; `f64::rem_euclid` needs `std`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// `K = c₁K₁ + c₂K₂ + c₃K₃` in the canonical basis of its surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingField {
    pub surface: ModelSurface,
    pub coeffs: [f64; 3],
}

impl KillingField {
    pub fn new(surface: ModelSurface, coeffs: [f64; 3]) -> Self {
        Self { surface, coeffs }
    }

    pub fn basis(surface: ModelSurface, index: usize) -> Self {
        let mut coeffs = [0.0; 3];
        coeffs[index] = 1.0;
        Self { surface, coeffs }
    }

    pub fn at(&self, p: &ChartPoint) -> Result<TangentVector> {
        let c = p.regular()?;
        let b = basis_components(self.surface, c);
        let mut v = [0.0; 2];
        for (a, ba) in b.iter().enumerate() {
            v[0] += self.coeffs[a] * ba[0];
            v[1] += self.coeffs[a] * ba[1];
        }
        Ok(TangentVector::new(*p, v))
    }

    #[inline]
    pub fn ambient_at(&self, x: Vec3) -> Vec3 {
        self.surface.killing_ambient(self.coeffs, x)
    }

    fn jacobian(&self, c: [f64; 2]) -> Matrix2 {
        let js = basis_jacobians(self.surface, c);
        let mut j = [[0.0; 2]; 2];
        for (a, ja) in js.iter().enumerate() {
            for i in 0..2 {
                for k in 0..2 {
                    j[i][k] += self.coeffs[a] * ja[i][k];
                }
            }
        }
        j
    }

    /// Chart components of `∇_X K` at `p`.
    pub fn covariant_derivative(&self, p: &ChartPoint, x: [f64; 2]) -> Result<[f64; 2]> {
        let c = p.regular()?;
        let gamma = christoffel_at(self.surface, p)?;
        let k = self.at(p)?.components;
        let j = self.jacobian(c);
        let mut out = [0.0; 2];
        for (kk, o) in out.iter_mut().enumerate() {
            for i in 0..2 {
                let mut t = j[i][kk];
                for jj in 0..2 {
                    t += gamma[kk][i][jj] * k[jj];
                }
                *o += x[i] * t;
            }
        }
        Ok(out)
    }

    /// `<∇_X K, Y> + <∇_Y K, X>`, which vanishes for Killing fields.
    pub fn killing_residual(&self, p: &ChartPoint, x: [f64; 2], y: [f64; 2]) -> Result<f64> {
        let g = metric_at(self.surface, p)?;
        let a = self.covariant_derivative(p, x)?;
        let b = self.covariant_derivative(p, y)?;
        Ok(bilinear(&g, a, y) + bilinear(&g, b, x))
    }

    /// `div K = ∂ᵢKⁱ + Γⁱᵢⱼ Kʲ`.
    pub fn divergence(&self, p: &ChartPoint) -> Result<f64> {
        let c = p.regular()?;
        let gamma = christoffel_at(self.surface, p)?;
        let k = self.at(p)?.components;
        let j = self.jacobian(c);
        let mut d = j[0][0] + j[1][1];
        for i in 0..2 {
            for jj in 0..2 {
                d += gamma[i][i][jj] * k[jj];
            }
        }
        Ok(d)
    }

    /// Length of `∇_K K` at `p`; zero iff the integral curve through `p`
    /// is a geodesic there.
    pub fn geodesic_tangency_residual(&self, p: &ChartPoint) -> Result<f64> {
        let k = self.at(p)?.components;
        let a = self.covariant_derivative(p, k)?;
        let g = metric_at(self.surface, p)?;
        Ok(bilinear(&g, a, a).max(0.0).sqrt())
    }
}

#[inline]
fn bilinear(g: &Matrix2, a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * (g[0][0] * b[0] + g[0][1] * b[1]) + a[1] * (g[1][0] * b[0] + g[1][1] * b[1])
}

/// The Killing field whose integral curve through `p` is the geodesic with
/// initial velocity `v`, normalised so that `K(p) = v`.
///
/// Solves `K(p) = v` (two equations, three unknowns) and then fixes the
/// remaining null direction by least squares on `∇_v K = 0`. Inside the
/// singular band of the spherical chart the transvection is built in the
/// embedded model instead.
pub fn killing_for_geodesic(surface: ModelSurface, p: &ChartPoint, v: &TangentVector) -> Result<KillingField> {
    if v.components == [0.0, 0.0] || v.norm(surface) == 0.0 {
        return Err(Error::ZeroVector);
    }
    if p.is_singular() {
        let coeffs = surface.transvection(p.ambient(surface), v.ambient(surface));
        return Ok(KillingField::new(surface, coeffs));
    }
    let b = basis_components(surface, p.coords);
    // Null vector of the 2x3 evaluation matrix and a particular solution.
    let row0 = [b[0][0], b[1][0], b[2][0]];
    let row1 = [b[0][1], b[1][1], b[2][1]];
    let n = ambient::cross(row0, row1);
    let nn = dot(n, n);
    if nn == 0.0 {
        return Err(Error::SingularChartPoint { theta: p.coords[0] });
    }
    // Minimum-norm solution of B c = v: c = Bᵀ (B Bᵀ)⁻¹ v.
    let m00 = dot(row0, row0);
    let m01 = dot(row0, row1);
    let m11 = dot(row1, row1);
    let det = m00 * m11 - m01 * m01;
    let vv = v.components;
    let y0 = (m11 * vv[0] - m01 * vv[1]) / det;
    let y1 = (-m01 * vv[0] + m00 * vv[1]) / det;
    let cp = lincomb(y0, row0, y1, row1);

    let kp = KillingField::new(surface, cp);
    let kn = KillingField::new(surface, n);
    let a = kp.covariant_derivative(p, vv)?;
    let bb = kn.covariant_derivative(p, vv)?;
    let g = metric_at(surface, p)?;
    let denom = bilinear(&g, bb, bb);
    let alpha = if denom > 0.0 { -bilinear(&g, a, bb) / denom } else { 0.0 };
    Ok(KillingField::new(surface, lincomb(1.0, cp, alpha, n)))
}

/// Point at arclength `s` along the unit-speed geodesic from `p` in the
/// direction of `v`.
pub fn geodesic(surface: ModelSurface, p: &ChartPoint, v: &TangentVector, s: f64) -> Result<ChartPoint> {
    let va = v.ambient(surface);
    let len = surface.norm(va);
    if len == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = surface.exp(p.ambient(surface), ambient::scale(s / len, va));
    ChartPoint::from_ambient(surface, q)
}

pub fn geodesic_distance(surface: ModelSurface, p: &ChartPoint, q: &ChartPoint) -> f64 {
    surface.distance(p.ambient(surface), q.ambient(surface))
}

/// Polar frame at a chart point, with `t = 0` along the first chart direction.
pub fn polar_frame(surface: ModelSurface, pole: &ChartPoint) -> PolarFrame {
    let (e1, e2) = surface.chart_frame(pole.coords);
    PolarFrame::new(surface, pole.ambient(surface), e1, e2)
}

/// Geodesic polar coordinates `(r, t)` of `p` about `pole`, `t ∈ [0, 2π)`.
pub fn polar_from_chart(surface: ModelSurface, pole: &ChartPoint, p: &ChartPoint) -> Result<(f64, f64)> {
    let x = p.ambient(surface);
    if surface == ModelSurface::Sphere {
        let d = surface.distance(pole.ambient(surface), x);
        if d >= PI - 1e-12 {
            return Err(Error::CutLocus { distance: d });
        }
    }
    let (r, t) = polar_frame(surface, pole).polar(x);
    Ok((r, wrap_angle(t)))
}

pub fn chart_from_polar(surface: ModelSurface, pole: &ChartPoint, r: f64, t: f64) -> Result<ChartPoint> {
    if surface == ModelSurface::Sphere && r >= PI {
        return Err(Error::CutLocus { distance: r });
    }
    ChartPoint::from_ambient(surface, polar_frame(surface, pole).point(r, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn pt(s: ModelSurface, a: f64, b: f64) -> ChartPoint {
        ChartPoint::new(s, a, b).unwrap()
    }

    #[test]
    fn metric_examples() {
        let e = ModelSurface::Plane;
        assert_eq!(metric_at(e, &pt(e, 3.0, -2.0)).unwrap(), [[1.0, 0.0], [0.0, 1.0]]);
        let h = ModelSurface::Hyperbolic;
        assert_eq!(metric_at(h, &pt(h, 0.0, 0.0)).unwrap(), [[4.0, 0.0], [0.0, 4.0]]);
        let s = ModelSurface::Sphere;
        let g = metric_at(s, &pt(s, FRAC_PI_2, 0.0)).unwrap();
        assert!((g[0][0] - 1.0).abs() < 1e-15 && (g[1][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_band_is_flagged() {
        let s = ModelSurface::Sphere;
        let p = pt(s, 5e-4, 1.0);
        assert!(p.is_singular());
        assert!(matches!(metric_at(s, &p), Err(Error::SingularChartPoint { .. })));
        assert!(!pt(s, 2e-3, 1.0).is_singular());
        assert!(ChartPoint::new(ModelSurface::Hyperbolic, 0.8, 0.6).is_err());
    }

    #[test]
    fn killing_basis_examples() {
        let e = ModelSurface::Plane;
        let k = killing_basis_at(e, &pt(e, 3.0, 7.0)).unwrap();
        assert_eq!(k[0].components, [1.0, 0.0]);
        assert_eq!(k[1].components, [0.0, 1.0]);
        assert_eq!(k[2].components, [-7.0, 3.0]);

        let s = ModelSurface::Sphere;
        let k = killing_basis_at(s, &pt(s, FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert!((k[0].components[0] - 1.0).abs() < 1e-15 && k[0].components[1].abs() < 1e-15);

        let h = ModelSurface::Hyperbolic;
        let k = killing_basis_at(h, &pt(h, 0.0, 0.0)).unwrap();
        assert_eq!(k[0].components, [0.5, 0.0]);
        assert_eq!(k[1].components, [0.0, 0.5]);
        assert_eq!(k[2].components, [0.0, 0.0]);
    }

    #[test]
    fn killing_for_geodesic_examples() {
        let e = ModelSurface::Plane;
        let p = pt(e, 0.0, 0.0);
        let k = killing_for_geodesic(e, &p, &TangentVector::new(p, [1.0, 0.0])).unwrap();
        for (a, b) in k.coeffs.iter().zip([1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let h = ModelSurface::Hyperbolic;
        let p = pt(h, 0.0, 0.0);
        let k = killing_for_geodesic(h, &p, &TangentVector::new(p, [1.0, 0.0])).unwrap();
        for (a, b) in k.coeffs.iter().zip([2.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-14, "{:?}", k.coeffs);
        }
        assert!(matches!(killing_for_geodesic(h, &p, &TangentVector::new(p, [0.0, 0.0])), Err(Error::ZeroVector)));
    }

    #[test]
    fn geodesic_examples() {
        let e = ModelSurface::Plane;
        let p = pt(e, 0.0, 0.0);
        let q = geodesic(e, &p, &TangentVector::new(p, [1.0, 0.0]), 2.0).unwrap();
        assert!((q.coords()[0] - 2.0).abs() < 1e-15 && q.coords()[1].abs() < 1e-15);

        let s = ModelSurface::Sphere;
        let p = pt(s, FRAC_PI_2, 0.0);
        let q = geodesic(s, &p, &TangentVector::new(p, [1.0, 0.0]), FRAC_PI_2).unwrap();
        assert!((q.coords()[0] - PI).abs() < 1e-12);
        assert!(q.is_singular());

        let h = ModelSurface::Hyperbolic;
        let p = pt(h, 0.0, 0.0);
        let q = geodesic(h, &p, &TangentVector::new(p, [1.0, 0.0]), 1.0).unwrap();
        assert!((q.coords()[0] - 0.5f64.tanh()).abs() < 1e-15 && q.coords()[1].abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let e = ModelSurface::Plane;
        assert_eq!(geodesic_distance(e, &pt(e, 0.0, 0.0), &pt(e, 3.0, 4.0)), 5.0);
        let s = ModelSurface::Sphere;
        let d = geodesic_distance(s, &pt(s, PI / 4.0, 0.0), &pt(s, 3.0 * PI / 4.0, 0.0));
        assert!((d - FRAC_PI_2).abs() < 1e-14);
        let h = ModelSurface::Hyperbolic;
        let d = geodesic_distance(h, &pt(h, 0.0, 0.0), &pt(h, 0.5f64.tanh(), 0.0));
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn polar_examples() {
        let e = ModelSurface::Plane;
        let (r, t) = polar_from_chart(e, &pt(e, 0.0, 0.0), &pt(e, 1.0, 1.0)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15 && (t - PI / 4.0).abs() < 1e-15);
        let h = ModelSurface::Hyperbolic;
        let (r, t) = polar_from_chart(h, &pt(h, 0.0, 0.0), &pt(h, 0.5f64.tanh(), 0.0)).unwrap();
        assert!((r - 1.0).abs() < 1e-14 && t.abs() < 1e-15);
        let s = ModelSurface::Sphere;
        let pole = pt(s, 1.0, 0.5);
        let far = pt(s, PI - 1.0, 0.5 + PI);
        assert!(matches!(polar_from_chart(s, &pole, &far), Err(Error::CutLocus { .. })));
    }
}
