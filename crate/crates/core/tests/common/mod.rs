//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

/// `J_n(x)` from its power series (adequate for `x < 20`).
pub fn bessel_j(n: u32, x: f64) -> f64 {
    let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
    let mut sum = term;
    for k in 1..80 {
        term *= -(0.25 * x * x) / (k as f64 * (k + n) as f64);
        sum += term;
    }
    sum
}

/// First positive zero of `J_n` by bisection from a bracket.
pub fn bessel_zero(n: u32, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa = bessel_j(n, a);
    assert!(fa * bessel_j(n, b) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if bessel_j(n, m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Radial torsion function of a geodesic disc of radius `r0` with warp `th`:
/// `u(r) = ∫_r^{r0} (1/Θ(ξ)) ∫_0^ξ Θ(σ) dσ dξ`, both integrals by quadrature.
pub fn radial_torsion(th: impl Fn(f64) -> f64 + Copy, r0: f64, r: f64) -> f64 {
    let inner = |xi: f64| {
        if xi == 0.0 {
            0.0
        } else {
            simpson(th, 0.0, xi, 64) / th(xi)
        }
    };
    simpson(inner, r, r0, 400)
}

/// Classical RK4 step.
pub fn rk4<const N: usize>(y: [f64; N], x: f64, h: f64, f: impl Fn(f64, &[f64; N]) -> [f64; N]) -> [f64; N] {
    let add = |a: &[f64; N], b: &[f64; N], s: f64| {
        let mut o = *a;
        for i in 0..N {
            o[i] += s * b[i];
        }
        o
    };
    let k1 = f(x, &y);
    let k2 = f(x + h / 2.0, &add(&y, &k1, h / 2.0));
    let k3 = f(x + h / 2.0, &add(&y, &k2, h / 2.0));
    let k4 = f(x + h, &add(&y, &k3, h));
    let mut o = y;
    for i in 0..N {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Radial solution of `u'' + u'/r + f(u) = 0` on the unit disc with
/// `u'(0) = 0`, `u(1) = 0`, by shooting on `u(0)`. Returns samples of `u`
/// at `r = i / n`.
pub fn shoot_disc(f: impl Fn(f64) -> f64 + Copy, n: usize) -> Vec<f64> {
    let integrate = |a: f64| {
        let steps = 20 * n;
        let h = 1.0 / steps as f64;
        // Series start: u ≈ a − f(a) r² / 4.
        let r0 = h;
        let mut y = [a - f(a) * r0 * r0 / 4.0, -f(a) * r0 / 2.0];
        let mut out = vec![a];
        let mut r = r0;
        for step in 1..steps {
            y = rk4(y, r, h, |r, y| [y[1], -y[1] / r - f(y[0])]);
            r += h;
            if (step + 1) % 20 == 0 {
                out.push(y[0]);
            }
        }
        out
    };
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if *integrate(mid).last().unwrap() > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    integrate(0.5 * (lo + hi))
}
