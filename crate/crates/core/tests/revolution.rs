mod common;

use common::*;
use curvlab_core::domain::builtin_domain;
use curvlab_core::pde::{solve_first_eigen, PolarGrid};
use curvlab_core::revolution::*;
use curvlab_core::Error;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

fn eigen(profile: &RevolutionProfile, l: usize, k_max: usize) -> Vec<RadialEigenpair> {
    sl_eigen(&SturmLiouvilleProblem::new(profile.clone(), l), k_max).unwrap()
}

/// Integrates `u'' = −(Θ'/Θ) u' + l²/Θ² u − λ u` (n = 2) from a series start
/// near `r = 0` to `r_end` and returns `(u, u')` there.
fn shoot(profile: &RevolutionProfile, l: usize, lambda: f64, r_end: f64) -> (f64, f64) {
    let r0 = 1e-6;
    let mut y = if l == 0 { [1.0 - lambda * r0 * r0 / 4.0, -lambda * r0 / 2.0] } else { [r0, 1.0] };
    let steps = 20_000;
    let h = (r_end - r0) / steps as f64;
    let l2 = (l * l) as f64;
    let mut r = r0;
    for _ in 0..steps {
        y = rk4(y, r, h, |r, y| {
            let (t, t1, _) = profile.theta_jet(r);
            [y[1], -t1 / t * y[1] + l2 / (t * t) * y[0] - lambda * y[0]]
        });
        r += h;
    }
    (y[0], y[1])
}

/// Root of `g` in `[lo, hi]` by bisection.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    assert!(glo * g(hi) < 0.0, "no bracket");
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if g(m) * glo > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn round_sphere_spectrum() {
    let s2 = RevolutionProfile::sphere(2);
    for l in 0..=2 {
        let e = eigen(&s2, l, 3);
        // Degree l + k − 1 harmonics: λ = m(m + 1).
        for (k, p) in e.iter().enumerate() {
            let m = (l + k) as f64;
            let want = m * (m + 1.0);
            assert!((p.lambda - want).abs() <= 1e-3 * want.max(1.0), "l={l} k={k} {}", p.lambda);
            assert!(p.residual < 1e-8, "{}", p.residual);
        }
    }
    // S³: λ = m(m + 2).
    let s3 = RevolutionProfile::sphere(3);
    for l in 0..=2 {
        let m = l as f64;
        let got = eigen(&s3, l, 2)[if l == 0 { 1 } else { 0 }].lambda;
        let want = if l == 0 { 3.0 } else { m * (m + 2.0) };
        assert!((got - want).abs() <= 1e-3 * want, "l={l} {got}");
    }
}

#[test]
fn euclidean_balls_match_bessel_zeros() {
    let disc = RevolutionProfile::geodesic_ball(0, 2, 1.0).unwrap();
    let j01 = bessel_zero(0, 2.0, 3.0);
    let j02 = bessel_zero(0, 5.0, 6.0);
    let j11 = bessel_zero(1, 3.0, 4.5);
    let e0 = eigen(&disc, 0, 2);
    assert!((e0[0].lambda - j01 * j01).abs() <= 1e-3, "{}", e0[0].lambda);
    assert!((e0[0].lambda / (j01 * j01) - 1.0).abs() <= 1e-8);
    assert!((e0[1].lambda / (j02 * j02) - 1.0).abs() <= 1e-7);
    assert!((eigen(&disc, 1, 1)[0].lambda / (j11 * j11) - 1.0).abs() <= 1e-7);

    // Unit ball in R³: zeros of the spherical Bessel functions, sin x / x
    // and tan x = x.
    let ball = RevolutionProfile::geodesic_ball(0, 3, 1.0).unwrap();
    assert!((eigen(&ball, 0, 1)[0].lambda / (PI * PI) - 1.0).abs() <= 1e-7);
    let x1 = bisect(|x| x.tan() - x, 4.0, 4.6);
    assert!((eigen(&ball, 1, 1)[0].lambda / (x1 * x1) - 1.0).abs() <= 1e-7);
}

#[test]
fn hemisphere_ground_state_is_cos_r() {
    let hemi = RevolutionProfile::geodesic_ball(1, 2, FRAC_PI_2).unwrap();
    let p = eigen(&hemi, 0, 1).remove(0);
    assert!((p.lambda - 2.0).abs() <= 1e-3);
    // Normalise cos r in Θ dr: ∫ cos² r sin r dr = 1/3.
    let err = p.r.iter().zip(&p.u).map(|(r, u)| (u - 3f64.sqrt() * r.cos()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
}

#[test]
fn sphere_l1_eigenfunction_is_sin_r() {
    let p = eigen(&RevolutionProfile::sphere(2), 1, 1).remove(0);
    // ∫ sin² r sin r dr over (0, π) = 4/3.
    let c = (3.0f64 / 4.0).sqrt();
    let err = p.r.iter().zip(&p.u).map(|(r, u)| (u - c * r.sin()).abs()).fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
    let imax = (0..p.u.len()).max_by(|a, b| p.u[*a].total_cmp(&p.u[*b])).unwrap();
    assert!((p.r[imax] - FRAC_PI_2).abs() < 2.0 * PI / p.u.len() as f64);
}

#[test]
fn shooting_cross_check_on_balls() {
    let cases = [
        RevolutionProfile::geodesic_ball(-1, 2, 1.0).unwrap(),
        RevolutionProfile::geodesic_ball(1, 2, 1.5).unwrap(),
        RevolutionProfile::geodesic_ball(0, 2, 0.7).unwrap(),
    ];
    for prof in &cases {
        for l in 0..=1 {
            let got = eigen(prof, l, 1)[0].lambda;
            let shot = bisect(|lam| shoot(prof, l, lam, prof.d).0, 0.5 * got, 1.5 * got);
            assert!((got / shot - 1.0).abs() < 1e-6, "{} l={l}: {got} vs {shot}", prof.name);
        }
    }
}

#[test]
fn shooting_cross_check_on_symmetric_closed_profile() {
    // Θ = sin r (1 − a sin² r) is symmetric about π/2: the l = 1 ground state
    // is even there and the second radial mode odd.
    let prof = RevolutionProfile::oblate(0.2, 2).unwrap();
    let l1 = eigen(&prof, 1, 1)[0].lambda;
    let shot = bisect(|lam| shoot(&prof, 1, lam, FRAC_PI_2).1, 0.8 * l1, 1.2 * l1);
    assert!((l1 / shot - 1.0).abs() < 1e-6, "{l1} {shot}");
    let l20 = eigen(&prof, 0, 2)[1].lambda;
    let shot = bisect(|lam| shoot(&prof, 0, lam, FRAC_PI_2).0, 0.8 * l20, 1.2 * l20);
    assert!((l20 / shot - 1.0).abs() < 1e-6, "{l20} {shot}");
}

#[test]
fn discretisation_error_is_second_order() {
    let disc = RevolutionProfile::geodesic_ball(0, 2, 1.0).unwrap();
    let j01 = bessel_zero(0, 2.0, 3.0);
    let err = |cells| {
        let p = SturmLiouvilleProblem::new(disc.clone(), 0).with_cells(cells);
        (sl_eigen(&p, 1).unwrap()[0].lambda_discrete - j01 * j01).abs()
    };
    let order = (err(512) / err(1024)).log2();
    assert!((order - 2.0).abs() < 0.1, "{order}");
}

#[test]
fn geodesic_discs_agree_with_the_surface_solver() {
    for (label, k, r0) in [("sphere_cap_r0.6", 1, 0.6), ("hyp_disc_r1", -1, 1.0), ("euclid_disc_R1", 0, 1.0)] {
        let radial = eigen(&RevolutionProfile::geodesic_ball(k, 2, r0).unwrap(), 0, 1)[0].lambda;
        let g = Arc::new(PolarGrid::new(builtin_domain(label).unwrap(), 96, 192).unwrap());
        let surface = solve_first_eigen(&g).unwrap().lambda;
        assert!((surface / radial - 1.0).abs() < 1e-3, "{label}: {surface} vs {radial}");
    }
}

#[test]
fn first_dirichlet_eigenfunctions_are_monotone() {
    for prof in [
        RevolutionProfile::geodesic_ball(0, 2, 1.0).unwrap(),
        RevolutionProfile::geodesic_ball(1, 2, FRAC_PI_2).unwrap(),
        RevolutionProfile::geodesic_ball(1, 2, 2.5).unwrap(),
        RevolutionProfile::geodesic_ball(-1, 2, 1.0).unwrap(),
        RevolutionProfile::geodesic_ball(-1, 4, 2.0).unwrap(),
    ] {
        let m = first_dirichlet_monotonicity(&prof).unwrap();
        assert!(m.decreasing && m.flux_nonincreasing, "{}: {m:?}", prof.name);
        assert_eq!(m.critical_count, 1, "{}", prof.name);
    }
    assert!(matches!(first_dirichlet_monotonicity(&RevolutionProfile::sphere(2)), Err(Error::ProfileInvalid(_))));
}

#[test]
fn round_sphere_second_eigenvalue_is_mixed() {
    for n in 2..=4 {
        let a = closed_second_eigen_analysis(&RevolutionProfile::sphere(n)).unwrap();
        assert_eq!(a.class, MultiplicityClass::Mixed, "n={n}");
        assert!((a.lambda_2 - n as f64).abs() < 1e-6, "{}", a.lambda_2);
        assert!(a.u11_positive);
        assert_eq!((a.u11_prime_zeros, a.nprime_zeros, a.u11_crit_count), (1, 2, 2));
        assert_eq!(a.verdict, RevolutionVerdict::Pass);
    }
}

#[test]
fn positive_curvature_profiles_have_the_predicted_counts() {
    let profiles = [
        RevolutionProfile::oblate(0.1, 2).unwrap(),
        RevolutionProfile::oblate(0.2, 2).unwrap(),
        RevolutionProfile::oblate(0.3, 2).unwrap(),
        RevolutionProfile::oblate(-0.1, 2).unwrap(),
        RevolutionProfile::oblate(0.2, 3).unwrap(),
        RevolutionProfile::fourier_perturbed("asym", vec![-0.15, 0.0, 0.05], 2).unwrap(),
    ];
    for p in &profiles {
        let a = closed_second_eigen_analysis(p).unwrap();
        assert!(a.curvature_positive, "{}", p.name);
        assert!(a.u11_positive);
        assert_eq!((a.u11_prime_zeros, a.nprime_zeros), (1, 2), "{}", p.name);
        assert_eq!(a.verdict, RevolutionVerdict::Pass, "{}: {a:?}", p.name);
        assert!(a.has_two_point_eigenfunction());
    }
    // Flattening at the equator makes λ_{2,0} the second eigenvalue;
    // stretching it makes λ_{1,1} win.
    assert_eq!(closed_second_eigen_analysis(&profiles[1]).unwrap().class, MultiplicityClass::Radial);
    assert_eq!(closed_second_eigen_analysis(&profiles[3]).unwrap().class, MultiplicityClass::L1);
}

#[test]
fn negative_curvature_somewhere_is_not_applicable() {
    let p = RevolutionProfile::oblate(0.5, 2).unwrap();
    let a = closed_second_eigen_analysis(&p).unwrap();
    assert!(!a.curvature_positive && a.min_curvature < 0.0);
    assert_eq!(a.verdict, RevolutionVerdict::NotApplicable);
    assert_eq!((a.u11_prime_zeros, a.nprime_zeros), (1, 2));
}

#[test]
fn conjecture_probe_on_the_sin2_family() {
    let rows = conjecture_probe(sin2_family, (0.0, 0.1), 10, 1024);
    assert_eq!(rows.len(), 10);
    let first = rows[0].analysis.as_ref().unwrap();
    assert!(rows[0].included);
    assert_eq!(first.class, MultiplicityClass::Mixed);
    assert!((first.lambda_2 - 2.0).abs() < 1e-6);
    // Θ''(0) = 4ε, so −Θ''/Θ ~ −4ε/r near the poles: every ε > 0 member
    // fails the gate, while its counts are still computed.
    for r in &rows {
        assert_eq!(r.two_critical_points, Some(true), "{}", r.param);
        assert_eq!(r.analysis.as_ref().unwrap().u11_crit_count, 2);
        if r.param > 0.0 {
            assert!(!r.included && r.note.starts_with("excluded"), "{}", r.param);
        }
    }
}

#[test]
fn invalid_profiles_are_rejected() {
    let bad = |r: Result<RevolutionProfile, Error>| assert!(matches!(r, Err(Error::ProfileInvalid(_))));
    bad(RevolutionProfile::new("flat", ThetaKind::Id, 1, 1.0, false));
    bad(RevolutionProfile::new("open", ThetaKind::Sinh, 2, 1.0, true));
    bad(RevolutionProfile::new("beyond", ThetaKind::Sin, 2, 3.5, false));
    bad(RevolutionProfile::new("inf", ThetaKind::Id, 2, f64::INFINITY, false));
    bad(RevolutionProfile::oblate(1.5, 2));
    bad(RevolutionProfile::fourier_perturbed("nan", vec![f64::NAN], 2));

    let s2 = RevolutionProfile::sphere(2);
    let coarse = SturmLiouvilleProblem::new(s2.clone(), 0).with_cells(100);
    assert!(matches!(sl_eigen(&coarse, 1), Err(Error::GridTooCoarse { .. })));
    let mut wrong = SturmLiouvilleProblem::new(s2.clone(), 0);
    wrong.bc = BoundaryCondition::DirichletAtD;
    assert!(matches!(sl_eigen(&wrong, 1), Err(Error::ProfileInvalid(_))));
    let disc = RevolutionProfile::geodesic_ball(0, 2, 1.0).unwrap();
    assert!(matches!(closed_second_eigen_analysis(&disc), Err(Error::ProfileInvalid(_))));
}

#[test]
fn sign_changes_ignore_the_dead_band() {
    assert_eq!(sign_changes(&[1.0, -1.0, 1.0]), 2);
    assert_eq!(sign_changes(&[1.0, 1e-12, -1e-12, 1.0]), 0);
    assert_eq!(sign_changes(&[1.0, 0.0, -1.0]), 1);
    assert_eq!(sign_changes(&[]), 0);
}

fn profile_strategy() -> impl Strategy<Value = RevolutionProfile> {
    prop_oneof![
        (-0.15f64..0.3, 2usize..4).prop_map(|(a, n)| RevolutionProfile::oblate(a, n).unwrap()),
        (0.3f64..2.5, 2usize..4).prop_map(|(d, n)| RevolutionProfile::geodesic_ball(1, n, d).unwrap()),
        (0.3f64..2.0, 2usize..4).prop_map(|(d, n)| RevolutionProfile::geodesic_ball(-1, n, d).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigenvalues_increase_in_l(prof in profile_strategy()) {
        let mut prev = f64::NEG_INFINITY;
        for l in 0..4 {
            let p = SturmLiouvilleProblem::new(prof.clone(), l).with_cells(512);
            let lam = sl_eigen(&p, 1).unwrap()[0].lambda;
            prop_assert!(lam > prev, "l={} {} <= {}", l, lam, prev);
            prev = lam;
        }
    }

    #[test]
    fn eigenfunctions_are_weighted_orthonormal(prof in profile_strategy(), l in 0usize..3) {
        let p = SturmLiouvilleProblem::new(prof, l).with_cells(512);
        let e = sl_eigen(&p, 4).unwrap();
        for i in 0..e.len() {
            prop_assert!(e[i].residual < 1e-8);
            if i > 0 {
                prop_assert!(e[i].lambda > e[i - 1].lambda);
            }
            for j in 0..=i {
                let ip = weighted_inner(&p, &e[i].u, &e[j].u);
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - want).abs() < 1e-8, "({}, {}) {}", i, j, ip);
            }
        }
    }
}
