use curvlab_core::domain::*;
use curvlab_core::geometry::ambient::lincomb;
use curvlab_core::geometry::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

/// Geodesic curvature of the embedded boundary curve by central differences.
fn fd_curvature(d: &DomainSpec, t: f64) -> f64 {
    let f = d.frame();
    let x = |t: f64| f.point(d.rho(t), t);
    let h = 1e-4;
    let (a, b, c) = (x(t - h), x(t), x(t + h));
    let x1 = lincomb(0.5 / h, c, -0.5 / h, a);
    let x2 = [
        (a[0] - 2.0 * b[0] + c[0]) / (h * h),
        (a[1] - 2.0 * b[1] + c[1]) / (h * h),
        (a[2] - 2.0 * b[2] + c[2]) / (h * h),
    ];
    let nu = d.boundary_point(t).normal;
    -d.surface.inner(x2, nu) / d.surface.inner(x1, x1)
}

#[test]
fn curvature_formula_matches_embedded_curve() {
    for d in builtin_domains() {
        for j in 0..16 {
            let t = TAU * j as f64 / 16.0 + 0.1;
            let k = boundary_curvature(&d, t);
            let fd = fd_curvature(&d, t);
            assert!((k - fd).abs() < 1e-5 * (1.0 + k.abs()), "{}: {k} vs {fd}", d.label);
        }
    }
}

#[test]
fn geodesic_circles_have_closed_form_curvature() {
    let pole = |s: ModelSurface| match s {
        ModelSurface::Sphere => ChartPoint::new(s, 1.1, 0.4).unwrap(),
        _ => ChartPoint::new(s, 0.1, -0.2).unwrap(),
    };
    for s in ModelSurface::ALL {
        for &r in &[0.2, 0.7, 1.3] {
            let d = DomainSpec::disc(s, pole(s), r, "c").unwrap();
            let expect = s.warp_d(r) / s.warp(r);
            for j in 0..8 {
                let k = boundary_curvature(&d, j as f64);
                assert!((k - expect).abs() < 1e-8);
            }
            let hyp = check_hypotheses(&d);
            let closed_form = match s {
                ModelSurface::Sphere => r < PI / 4.0,
                _ => true,
            };
            assert_eq!(hyp.ok, closed_form, "{s:?} r={r}");
        }
    }
}

#[test]
fn boundary_frame_is_orthonormal() {
    for d in builtin_domains() {
        for j in 0..32 {
            let b = d.boundary_point(TAU * j as f64 / 32.0);
            let s = d.surface;
            assert!((s.inner(b.normal, b.normal) - 1.0).abs() < 1e-12);
            assert!((s.inner(b.unit_tangent, b.unit_tangent) - 1.0).abs() < 1e-12);
            assert!(s.inner(b.normal, b.unit_tangent).abs() < 1e-12);
        }
    }
}

#[test]
fn catalogue_has_the_documented_members() {
    let cat = builtin_domains();
    for s in ModelSurface::ALL {
        let passing = cat.iter().filter(|d| d.surface == s && check_hypotheses(d).ok).count();
        assert!(passing >= 3, "{s:?}");
    }
    assert!(2.0 * builtin_domain("sphere_cap_r0.6").unwrap().rho(0.0) < PI / 2.0);
    let r = check_hypotheses(&builtin_domain("hyp_convex_not_horo").unwrap());
    assert!(r.min_curvature > 0.0 && r.min_curvature < 1.0);
    assert!(!check_hypotheses(&builtin_domain("euclid_peanut").unwrap()).convex);
}

fn random_killing(d: &DomainSpec, rng: &mut ChaCha8Rng) -> KillingField {
    let frame = d.frame();
    let t: f64 = rng.gen_range(0.0..TAU);
    let r = rng.gen_range(0.0..0.9) * d.rho(t);
    let x = frame.point(r, t);
    let p = ChartPoint::from_ambient(d.surface, x).unwrap();
    let (e1, e2) = d.surface.chart_frame(p.coords());
    let a: f64 = rng.gen_range(0.0..TAU);
    let va = lincomb(a.cos(), e1, a.sin(), e2);
    if p.is_singular() {
        return KillingField::new(d.surface, d.surface.transvection(x, va));
    }
    let v = TangentVector::new(p, d.surface.pull_tangent(p.coords(), va));
    killing_for_geodesic(d.surface, &p, &v).unwrap()
}

#[test]
fn geodesic_killing_fields_are_tangent_exactly_twice() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for d in builtin_domains().iter().filter(|d| check_hypotheses(d).ok) {
        for _ in 0..20 {
            let k = random_killing(d, &mut rng);
            assert_eq!(count_boundary_tangencies(d, &k).unwrap(), 2, "{}", d.label);
        }
    }
}

#[test]
fn elongation_family_is_nested() {
    let fam = hyperbolic_elongation_family(0.8, 0.35, 8);
    assert_eq!(fam.len(), 8);
    for w in fam.windows(2) {
        for j in 0..64 {
            let t = TAU * j as f64 / 64.0;
            assert!(w[0].rho(t) <= w[1].rho(t) + 1e-15);
        }
    }
}

proptest! {
    #[test]
    fn tangency_count_is_even(si in 0usize..3, c in prop::array::uniform3(-1.0f64..1.0), a2 in 0.0f64..0.15, b1 in -0.1f64..0.1) {
        let s = ModelSurface::ALL[si];
        let pole = ChartPoint::new(s, if s == ModelSurface::Sphere { 1.2 } else { 0.0 }, 0.0).unwrap();
        let d = DomainSpec::new(s, pole, vec![0.6, 0.0, a2], vec![b1], "p").unwrap();
        let k = KillingField::new(s, c);
        if let Ok(n) = count_boundary_tangencies(&d, &k) {
            prop_assert_eq!(n % 2, 0);
        }
    }
}
