use curvlab_core::geometry::ambient::{dot, sub};
use curvlab_core::geometry::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_point(s: ModelSurface, rng: &mut ChaCha8Rng) -> ChartPoint {
    match s {
        ModelSurface::Plane => ChartPoint::new(s, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)).unwrap(),
        ModelSurface::Sphere => {
            ChartPoint::new(s, rng.gen_range(0.05..PI - 0.05), rng.gen_range(0.0..2.0 * PI)).unwrap()
        }
        ModelSurface::Hyperbolic => {
            let r: f64 = rng.gen_range(0.0..0.9);
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            ChartPoint::new(s, r * a.cos(), r * a.sin()).unwrap()
        }
    }
}

fn rk4<const N: usize>(y: [f64; N], h: f64, f: impl Fn(&[f64; N]) -> [f64; N]) -> [f64; N] {
    let add = |a: &[f64; N], b: &[f64; N], s: f64| {
        let mut o = *a;
        for i in 0..N {
            o[i] += s * b[i];
        }
        o
    };
    let k1 = f(&y);
    let k2 = f(&add(&y, &k1, h / 2.0));
    let k3 = f(&add(&y, &k2, h / 2.0));
    let k4 = f(&add(&y, &k3, h));
    let mut o = y;
    for i in 0..N {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

#[test]
fn killing_residual_vanishes_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in ModelSurface::ALL {
        for a in 0..3 {
            let k = KillingField::basis(s, a);
            for _ in 0..100 {
                let p = random_point(s, &mut rng);
                let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let res = k.killing_residual(&p, x, y).unwrap();
                assert!(res.abs() <= 1e-8, "{s:?} K{} at {:?}: {res}", a + 1, p.coords());
                assert!(k.divergence(&p).unwrap().abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn chart_and_ambient_killing_fields_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for s in ModelSurface::ALL {
        for _ in 0..50 {
            let p = random_point(s, &mut rng);
            let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let k = KillingField::new(s, c);
            let chart = k.at(&p).unwrap().ambient(s);
            let amb = k.ambient_at(p.ambient(s));
            let d = sub(chart, amb);
            assert!(dot(d, d).sqrt() < 1e-12 * (1.0 + dot(amb, amb).sqrt()), "{s:?}");
        }
    }
}

#[test]
fn closed_form_geodesics_match_geodesic_ode() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for s in ModelSurface::ALL {
        for _ in 0..10 {
            let p = random_point(s, &mut rng);
            if s == ModelSurface::Sphere && (p.coords()[0] < 0.6 || p.coords()[0] > PI - 0.6) {
                continue;
            }
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            let g = metric_at(s, &p).unwrap();
            let v = [a.cos() / g[0][0].sqrt(), a.sin() / g[1][1].sqrt()];
            let length = 0.5;
            let n = 500;
            let h = length / n as f64;
            let mut y = [p.coords()[0], p.coords()[1], v[0], v[1]];
            for _ in 0..n {
                y = rk4(y, h, |y| {
                    let q = ChartPoint::new(s, y[0], y[1]).unwrap();
                    let gm = christoffel_at(s, &q).unwrap();
                    let mut acc = [0.0; 2];
                    for (k, ak) in acc.iter_mut().enumerate() {
                        for i in 0..2 {
                            for j in 0..2 {
                                *ak -= gm[k][i][j] * y[2 + i] * y[2 + j];
                            }
                        }
                    }
                    [y[2], y[3], acc[0], acc[1]]
                });
            }
            let q = geodesic(s, &p, &TangentVector::new(p, v), length).unwrap();
            let end = ChartPoint::new(s, y[0], y[1]).unwrap();
            assert!(geodesic_distance(s, &q, &end) < 1e-9, "{s:?}");
        }
    }
}

#[test]
fn killing_flow_line_is_the_geodesic() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for s in ModelSurface::ALL {
        for trial in 0..20 {
            let p = if s == ModelSurface::Sphere && trial == 0 {
                ChartPoint::new(s, 5e-4, 1.0).unwrap()
            } else {
                random_point(s, &mut rng)
            };
            let e = s.chart_frame(p.coords());
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            let va = curvlab_core::geometry::ambient::lincomb(a.cos(), e.0, a.sin(), e.1);
            let v = TangentVector::new(p, s.pull_tangent(p.coords(), va));
            let k = killing_for_geodesic(s, &p, &v).unwrap();
            // Integrate the flow in the embedded model, which is valid at the pole too.
            let n = 200;
            let h = 0.5 / n as f64;
            let mut x = p.ambient(s);
            for i in 1..=n {
                x = rk4(x, h, |y| k.ambient_at(*y));
                let q = geodesic(s, &p, &v, h * i as f64).unwrap();
                let d = s.distance(q.ambient(s), x);
                assert!(d < 1e-6, "{s:?} trial {trial}: {d}");
            }
            if !p.is_singular() {
                assert!(k.geodesic_tangency_residual(&p).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn rotation_generators_commute_with_the_laplacian() {
    // u = cos θ on the sphere, with the polar Laplacian evaluated by central
    // differences.
    let u = |t: f64, _p: f64| t.cos();
    let h = 1e-3;
    let lap = |f: &dyn Fn(f64, f64) -> f64, t: f64, p: f64| {
        let ftt = (f(t + h, p) - 2.0 * f(t, p) + f(t - h, p)) / (h * h);
        let ft = (f(t + h, p) - f(t - h, p)) / (2.0 * h);
        let fpp = (f(t, p + h) - 2.0 * f(t, p) + f(t, p - h)) / (h * h);
        ftt + t.cos() / t.sin() * ft + fpp / t.sin().powi(2)
    };
    let s = ModelSurface::Sphere;
    let apply = |k: KillingField, f: &dyn Fn(f64, f64) -> f64, t: f64, p: f64| {
        let c = k.at(&ChartPoint::new(s, t, p).unwrap()).unwrap().components;
        c[0] * (f(t + h, p) - f(t - h, p)) / (2.0 * h) + c[1] * (f(t, p + h) - f(t, p - h)) / (2.0 * h)
    };
    let k1 = KillingField::basis(s, 0);
    let k3 = KillingField::basis(s, 2);
    for &(t, p) in &[(0.7, 0.3), (1.2, 2.0), (2.0, 4.5)] {
        assert!(apply(k3, &u, t, p).abs() < 1e-10);
        let k1u = |t: f64, p: f64| apply(k1, &u, t, p);
        let lu = |t: f64, p: f64| lap(&u, t, p);
        let comm = lap(&k1u, t, p) - apply(k1, &lu, t, p);
        assert!(comm.abs() < 1e-3, "{comm}");
    }
}

#[test]
fn killing_for_geodesic_near_the_pole_is_a_rotation() {
    let s = ModelSurface::Sphere;
    let p = ChartPoint::new(s, 1e-3 / 2.0, 0.0).unwrap();
    let e = s.chart_frame(p.coords());
    let v = TangentVector::new(p, s.pull_tangent(p.coords(), e.1));
    let k = killing_for_geodesic(s, &p, &v).unwrap();
    // The rotation axis is orthogonal to both p and v.
    let x = p.ambient(s);
    let ka = k.ambient_at(x);
    assert!((dot(ka, ka).sqrt() - 1.0).abs() < 1e-9);
    assert!(dot(ka, e.0).abs() < 1e-9);
}

fn arb_point(s: ModelSurface) -> impl Strategy<Value = ChartPoint> {
    let (lo, hi) = match s {
        ModelSurface::Plane => (-4.0, 4.0),
        ModelSurface::Sphere => (0.0, PI),
        ModelSurface::Hyperbolic => (-0.65, 0.65),
    };
    (lo..hi, lo..hi)
        .prop_map(move |(a, b)| ChartPoint::new(s, a, if s == ModelSurface::Sphere { 2.0 * b } else { b }).unwrap())
}

proptest! {
    #[test]
    fn triangle_inequality(si in 0usize..3, seed in any::<u64>()) {
        let s = ModelSurface::ALL[si];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_point(s, &mut rng);
        let q = random_point(s, &mut rng);
        let r = random_point(s, &mut rng);
        let d = |a: &ChartPoint, b: &ChartPoint| geodesic_distance(s, a, b);
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-12);
        prop_assert!(d(&p, &p) < 1e-7);
    }

    #[test]
    fn polar_round_trip(si in 0usize..3, p in arb_point(ModelSurface::Hyperbolic), q in arb_point(ModelSurface::Hyperbolic)) {
        let s = ModelSurface::ALL[si];
        let (p, q) = match s {
            ModelSurface::Hyperbolic => (p, q),
            _ => (
                ChartPoint::new(s, 1.0 + p.coords()[0], 1.0 + p.coords()[1]).unwrap(),
                ChartPoint::new(s, 1.0 + q.coords()[0], 1.0 + q.coords()[1]).unwrap(),
            ),
        };
        prop_assume!(geodesic_distance(s, &p, &q) > 1e-6);
        let (r, t) = polar_from_chart(s, &p, &q).unwrap();
        let back = chart_from_polar(s, &p, r, t).unwrap();
        prop_assert!(geodesic_distance(s, &back, &q) < 1e-10);
        prop_assert!((r - geodesic_distance(s, &p, &q)).abs() < 1e-10);
    }

    #[test]
    fn sphere_chart_points_round_trip(p in arb_point(ModelSurface::Sphere)) {
        let s = ModelSurface::Sphere;
        let q = ChartPoint::from_ambient(s, p.ambient(s)).unwrap();
        prop_assert!(geodesic_distance(s, &p, &q) < 1e-7);
    }
}
