//! Radial Sturm–Liouville problems on manifolds of revolution
//! `g = dr² + Θ(r)² g_{S^{n−1}}`, `0 < r < D`.
//!
//! Separating `u(r) H_l` with `H_l` a spherical harmonic of degree `l` gives
//!
//! ```text
//! −(Θ^{n−1} u')' / Θ^{n−1} + l(l+n−2)/Θ² u = λ u
//! ```
//!
//! discretised by cell-centred finite volumes in the measure `Θ^{n−1} dr`.
//! No unknown sits at `r = 0` (or at `r = D` on a closed profile), so the
//! vanishing weight there closes the scheme without boundary rows and the
//! regularity conditions come out of the operator itself.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::SymTridiagonal;

/// Smallest number of cells accepted by [`sl_eigen`].
pub const MIN_CELLS: usize = 512;
/// Default number of cells.
pub const DEFAULT_CELLS: usize = 2048;
/// Eigenvalues within this fraction of each other count as equal.
pub const MULTIPLICITY_TOL: f64 = 1e-6;
/// Relative dead band for sign-change counting.
pub const DEAD_BAND: f64 = 1e-9;
/// Sample points for the curvature gate.
pub const CURVATURE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaKind {
    Sin,
    Id,
    Sinh,
    /// `Θ = sin r · (1 + Σ c_k sin(k r))`, `k = 1, 2, …`.
    FourierPerturbed(Vec<f64>),
    /// `Θ = sin r · (1 − a sin² r)`.
    Oblate(f64),
}

impl ThetaKind {
    /// `(Θ, Θ', Θ'')` at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        match self {
            ThetaKind::Sin => (r.sin(), r.cos(), -r.sin()),
            ThetaKind::Id => (r, 1.0, 0.0),
            ThetaKind::Sinh => (r.sinh(), r.cosh(), r.sinh()),
            ThetaKind::FourierPerturbed(c) => {
                let (mut g, mut g1, mut g2) = (1.0, 0.0, 0.0);
                for (i, ck) in c.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let (s, co) = (k * r).sin_cos();
                    g += ck * s;
                    g1 += ck * k * co;
                    g2 -= ck * k * k * s;
                }
                let (s, co) = r.sin_cos();
                (s * g, co * g + s * g1, -s * g + 2.0 * co * g1 + s * g2)
            }
            ThetaKind::Oblate(a) => {
                let (s, c) = r.sin_cos();
                let s2 = s * s;
                (s * (1.0 - a * s2), c * (1.0 - 3.0 * a * s2), -s * (1.0 + 6.0 * a) + 9.0 * a * s2 * s)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            ThetaKind::Sin => "sin".into(),
            ThetaKind::Id => "id".into(),
            ThetaKind::Sinh => "sinh".into(),
            ThetaKind::FourierPerturbed(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
                format!("fourier_perturbed({})", parts.join(","))
            }
            ThetaKind::Oblate(a) => format!("oblate({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionProfile {
    pub name: String,
    pub theta: ThetaKind,
    /// Dimension, at least 2.
    pub n: usize,
    /// Diameter: the range of `r`.
    pub d: f64,
    pub closed: bool,
}

impl RevolutionProfile {
    /// Validated profile.
    pub fn new(name: &str, theta: ThetaKind, n: usize, d: f64, closed: bool) -> Result<Self> {
        let p = Self { name: name.into(), theta, n, d, closed };
        p.validate()?;
        Ok(p)
    }

    /// Round sphere `S^n`.
    pub fn sphere(n: usize) -> Self {
        Self { name: format!("sphere{n}"), theta: ThetaKind::Sin, n, d: PI, closed: true }
    }

    /// Geodesic ball of radius `d` in the model space of curvature `k`
    /// (`+1`, `0` or `−1`).
    pub fn geodesic_ball(k: i32, n: usize, d: f64) -> Result<Self> {
        let (theta, name) = match k.signum() {
            1 => (ThetaKind::Sin, "sphere_ball"),
            0 => (ThetaKind::Id, "euclid_ball"),
            _ => (ThetaKind::Sinh, "hyp_ball"),
        };
        Self::new(name, theta, n, d, false)
    }

    pub fn fourier_perturbed(name: &str, coeffs: Vec<f64>, n: usize) -> Result<Self> {
        Self::new(name, ThetaKind::FourierPerturbed(coeffs), n, PI, true)
    }

    pub fn oblate(a: f64, n: usize) -> Result<Self> {
        Self::new(&format!("oblate_{a}"), ThetaKind::Oblate(a), n, PI, true)
    }

    /// `(Θ, Θ', Θ'')` at `r`.
    #[inline]
    pub fn theta_jet(&self, r: f64) -> (f64, f64, f64) {
        self.theta.eval(r)
    }

    #[inline]
    pub fn theta(&self, r: f64) -> f64 {
        self.theta.eval(r).0
    }

    /// `Θ^{n−1}`.
    #[inline]
    pub fn weight(&self, r: f64) -> f64 {
        self.theta(r).powi(self.n as i32 - 1)
    }

    /// `−Θ''/Θ`, the curvature of the profile when `n = 2`.
    pub fn curvature(&self, r: f64) -> f64 {
        let (t, _, t2) = self.theta_jet(r);
        -t2 / t
    }

    /// Smallest `−Θ''/Θ` on a uniform interior sample, with its location.
    pub fn min_curvature(&self) -> (f64, f64) {
        (0..CURVATURE_SAMPLES)
            .map(|j| {
                let r = self.d * (j as f64 + 0.5) / CURVATURE_SAMPLES as f64;
                (self.curvature(r), r)
            })
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ProfileInvalid(m));
        if self.n < 2 {
            return bad(format!("dimension {} < 2", self.n));
        }
        if !(self.d.is_finite() && self.d > 0.0) {
            return bad(format!("diameter {} must be positive and finite", self.d));
        }
        let finite = match &self.theta {
            ThetaKind::FourierPerturbed(c) => c.iter().all(|x| x.is_finite()),
            ThetaKind::Oblate(a) => a.is_finite(),
            _ => true,
        };
        if !finite {
            return bad("non-finite profile parameter".into());
        }
        let (t0, t1, _) = self.theta_jet(0.0);
        if t0.abs() > 1e-12 || (t1 - 1.0).abs() > 1e-12 {
            return bad("need Θ(0) = 0 and Θ'(0) = 1".into());
        }
        for j in 1..CURVATURE_SAMPLES {
            let r = self.d * j as f64 / CURVATURE_SAMPLES as f64;
            if !(self.theta(r) > 0.0) {
                return bad(format!("Θ({r}) is not positive"));
            }
        }
        let (td, td1, _) = self.theta_jet(self.d);
        if self.closed {
            if td.abs() > 1e-9 || (td1 + 1.0).abs() > 1e-9 {
                return bad(format!("closed profile needs Θ(D) = 0 and Θ'(D) = −1, got {td}, {td1}"));
            }
        } else if !(td > 0.0) {
            return bad("Θ(D) must be positive for a profile with boundary".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// `u(D) = 0` on a profile with boundary.
    DirichletAtD,
    /// Closed profile: regularity at both poles.
    ClosedRegular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SturmLiouvilleProblem {
    pub profile: RevolutionProfile,
    /// Degree of the spherical harmonic.
    pub l: usize,
    pub bc: BoundaryCondition,
    pub cells: usize,
}

impl SturmLiouvilleProblem {
    /// Boundary condition taken from the profile; [`DEFAULT_CELLS`] cells.
    pub fn new(profile: RevolutionProfile, l: usize) -> Self {
        let bc = if profile.closed { BoundaryCondition::ClosedRegular } else { BoundaryCondition::DirichletAtD };
        Self { profile, l, bc, cells: DEFAULT_CELLS }
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = cells;
        self
    }

    /// `l(l + n − 2)`.
    pub fn angular_eigenvalue(&self) -> f64 {
        (self.l * (self.l + self.profile.n - 2)) as f64
    }

    pub fn h(&self) -> f64 {
        self.profile.d / self.cells as f64
    }

    /// Cell centres.
    pub fn centres(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.cells).map(|i| (i as f64 + 0.5) * h).collect()
    }

    fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        let closed = self.bc == BoundaryCondition::ClosedRegular;
        if closed != self.profile.closed {
            return Err(Error::ProfileInvalid("boundary condition does not match the profile".into()));
        }
        if self.cells < MIN_CELLS {
            return Err(Error::GridTooCoarse { n_s: self.cells, n_t: 1 });
        }
        Ok(())
    }
}

/// The discrete pencil `A u = λ M u`, `M` diagonal.
struct Discretisation {
    /// Diagonal of `A`.
    a_diag: Vec<f64>,
    /// `A_{i,i+1}`.
    a_off: Vec<f64>,
    mass: Vec<f64>,
}

fn discretise(p: &SturmLiouvilleProblem, cells: usize) -> Discretisation {
    let prof = &p.profile;
    let h = prof.d / cells as f64;
    let q = p.angular_eigenvalue();
    // Face conductances w(r_f)/h; the end faces carry w = 0 except at a
    // Dirichlet end, where the half cell gives w(D)/(h/2).
    let mut face = alloc::vec![0.0; cells + 1];
    for (f, c) in face.iter_mut().enumerate().take(cells).skip(1) {
        *c = prof.weight(f as f64 * h) / h;
    }
    if p.bc == BoundaryCondition::DirichletAtD {
        face[cells] = 2.0 * prof.weight(prof.d) / h;
    }
    let mut a_diag = Vec::with_capacity(cells);
    let mut mass = Vec::with_capacity(cells);
    for i in 0..cells {
        let r = (i as f64 + 0.5) * h;
        let (th, _, _) = prof.theta_jet(r);
        let w = th.powi(prof.n as i32 - 1);
        mass.push(w * h);
        a_diag.push(face[i] + face[i + 1] + q / (th * th) * w * h);
    }
    let a_off = (1..cells).map(|f| -face[f]).collect();
    Discretisation { a_diag, a_off, mass }
}

impl Discretisation {
    /// `M^{−1/2} A M^{−1/2}`.
    fn symmetric(&self) -> SymTridiagonal {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        SymTridiagonal {
            d: self.a_diag.iter().zip(&s).map(|(a, si)| a * si * si).collect(),
            e: self.a_off.iter().enumerate().map(|(i, a)| a * s[i] * s[i + 1]).collect(),
        }
    }

    fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        (0..n)
            .map(|i| {
                let mut v = self.a_diag[i] * u[i];
                if i > 0 {
                    v += self.a_off[i - 1] * u[i - 1];
                }
                if i + 1 < n {
                    v += self.a_off[i] * u[i + 1];
                }
                v
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenpair {
    /// 1-based index within the fixed-`l` spectrum.
    pub k: usize,
    /// Richardson-extrapolated eigenvalue (from `cells` and `cells / 2`).
    pub lambda: f64,
    /// Eigenvalue of the discretisation on `cells` cells.
    pub lambda_discrete: f64,
    /// Cell centres.
    pub r: Vec<f64>,
    /// Eigenfunction at the cell centres, unit norm in `Θ^{n−1} dr`, and
    /// positive on its first cell above the dead band.
    pub u: Vec<f64>,
    /// `‖A u − λ M u‖_{M⁻¹} / (λ_* ‖u‖_M)` with `λ_* = max(|λ|, 1)`.
    pub residual: f64,
}

/// The `k_max` smallest eigenpairs of one radial problem.
pub fn sl_eigen(problem: &SturmLiouvilleProblem, k_max: usize) -> Result<Vec<RadialEigenpair>> {
    problem.validate()?;
    if k_max == 0 {
        return Ok(Vec::new());
    }
    let fine = discretise(problem, problem.cells);
    let coarse = discretise(problem, problem.cells / 2);
    let tf = fine.symmetric();
    let tc = coarse.symmetric();
    let r = problem.centres();
    let mut out = Vec::with_capacity(k_max);
    for k in 0..k_max.min(problem.cells / 2) {
        let lf = tf.eigenvalue(k);
        let lc = tc.eigenvalue(k);
        let y = tf.eigenvector(lf);
        let mut u: Vec<f64> = y.iter().zip(&fine.mass).map(|(y, m)| y / m.sqrt()).collect();
        let norm = u.iter().zip(&fine.mass).map(|(u, m)| m * u * u).sum::<f64>().sqrt();
        let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let lead = u.iter().copied().find(|v| v.abs() > 1e-3 * umax).unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        u.iter_mut().for_each(|v| *v *= sign / norm);
        let au = fine.apply(&u);
        let res = au
            .iter()
            .zip(&u)
            .zip(&fine.mass)
            .map(|((a, u), m)| {
                let e = a - lf * m * u;
                e * e / m
            })
            .sum::<f64>()
            .sqrt();
        out.push(RadialEigenpair {
            k: k + 1,
            lambda: (4.0 * lf - lc) / 3.0,
            lambda_discrete: lf,
            r: r.clone(),
            u,
            residual: res / lf.abs().max(1.0),
        });
    }
    Ok(out)
}

/// `Θ^{n−1}`-weighted inner product of two eigenfunctions on the same grid.
pub fn weighted_inner(problem: &SturmLiouvilleProblem, u: &[f64], v: &[f64]) -> f64 {
    let h = problem.h();
    problem.centres().iter().zip(u.iter().zip(v)).map(|(r, (a, b))| problem.profile.weight(*r) * h * a * b).sum()
}

/// Sign changes in `values`, skipping entries within the relative dead band.
pub fn sign_changes(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let band = DEAD_BAND * scale;
    let mut last: Option<bool> = None;
    let mut n = 0;
    for v in values {
        if v.abs() <= band {
            continue;
        }
        let s = *v > 0.0;
        if last.is_some_and(|l| l != s) {
            n += 1;
        }
        last = Some(s);
    }
    n
}

/// `u'` at the interior faces.
fn face_derivative(u: &[f64], h: f64) -> Vec<f64> {
    u.windows(2).map(|w| (w[1] - w[0]) / h).collect()
}

/// `N = Θ^{n−1} u'` at the interior faces.
fn flux(profile: &RevolutionProfile, u: &[f64], h: f64) -> Vec<f64> {
    face_derivative(u, h).iter().enumerate().map(|(f, d)| profile.weight((f + 1) as f64 * h) * d).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub lambda: f64,
    /// `u' < 0` on every interior face and at the boundary half face.
    pub decreasing: bool,
    /// `Θ^{n−1} u'` non-increasing on the dual grid.
    pub flux_nonincreasing: bool,
    /// Interior sign changes of `u'` plus the maximum at the pole.
    pub critical_count: usize,
}

/// First Dirichlet eigenfunction of a profile with boundary: monotonicity
/// in `r` and its critical-point count.
pub fn first_dirichlet_monotonicity(profile: &RevolutionProfile) -> Result<MonotonicityReport> {
    first_dirichlet_monotonicity_with(profile, DEFAULT_CELLS)
}

pub fn first_dirichlet_monotonicity_with(profile: &RevolutionProfile, cells: usize) -> Result<MonotonicityReport> {
    if profile.closed {
        return Err(Error::ProfileInvalid("monotonicity needs a profile with boundary".into()));
    }
    let problem = SturmLiouvilleProblem::new(profile.clone(), 0).with_cells(cells);
    let pair = sl_eigen(&problem, 1)?.remove(0);
    let h = problem.h();
    let mut du = face_derivative(&pair.u, h);
    du.push(-pair.u[cells - 1] / (0.5 * h));
    let dscale = du.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let decreasing = du.iter().all(|d| *d < 0.0 || d.abs() <= DEAD_BAND * dscale) && du.iter().any(|d| *d < 0.0);
    let n = flux(profile, &pair.u, h);
    let nscale = n.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flux_nonincreasing = n.windows(2).all(|w| w[1] - w[0] <= DEAD_BAND * nscale);
    Ok(MonotonicityReport {
        lambda: pair.lambda,
        decreasing,
        flux_nonincreasing,
        critical_count: sign_changes(&du) + 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplicityClass {
    /// `λ₂ = λ_{2,0} < λ_{1,1}`: simple, radial.
    Radial,
    /// `λ₂ = λ_{1,1} < λ_{2,0}`: multiplicity `n`.
    L1,
    /// `λ_{2,0} = λ_{1,1}` within [`MULTIPLICITY_TOL`]: multiplicity `n + 1`.
    Mixed,
}

impl MultiplicityClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::Radial => "radial",
            Self::L1 => "l1",
            Self::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RevolutionVerdict {
    Pass,
    Fail,
    /// `−Θ''/Θ > 0` fails somewhere; counts are still reported.
    NotApplicable,
}

impl RevolutionVerdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedAnalysis {
    pub lambda_20: f64,
    pub lambda_11: f64,
    /// The second eigenvalue `min(λ_{2,0}, λ_{1,1})`.
    pub lambda_2: f64,
    pub class: MultiplicityClass,
    /// `|λ_{2,0} − λ_{1,1}| / λ₂`.
    pub gap: f64,
    pub curvature_positive: bool,
    pub min_curvature: f64,
    pub u11_positive: bool,
    pub u11_prime_zeros: usize,
    pub nprime_zeros: usize,
    /// Critical points of `u_{1,1}(r) H_1`: a maximum and a minimum on each
    /// critical sphere of `u_{1,1}`.
    pub u11_crit_count: usize,
    /// Interior zeros of `u'_{2,0}`; each is a circle of critical points.
    pub u20_prime_zeros: usize,
    pub verdict: RevolutionVerdict,
}

impl ClosedAnalysis {
    /// Whether some second eigenfunction in the computed basis has exactly
    /// two critical points.
    pub fn has_two_point_eigenfunction(&self) -> bool {
        let l1 = self.u11_positive && self.u11_crit_count == 2;
        let radial = self.u20_prime_zeros == 0;
        match self.class {
            MultiplicityClass::Radial => radial,
            MultiplicityClass::L1 => l1,
            MultiplicityClass::Mixed => l1 || radial,
        }
    }

    /// Critical-point count of the representative second eigenfunction:
    /// the `l = 1` one unless the eigenvalue is purely radial.
    pub fn crit_count(&self) -> usize {
        match self.class {
            MultiplicityClass::Radial => 2 + 2 * self.u20_prime_zeros,
            _ => self.u11_crit_count,
        }
    }
}

/// Second eigenvalue of a closed profile, its multiplicity class and the
/// critical-point counts of the `l = 1` eigenfunction.
pub fn closed_second_eigen_analysis(profile: &RevolutionProfile) -> Result<ClosedAnalysis> {
    closed_second_eigen_analysis_with(profile, DEFAULT_CELLS)
}

pub fn closed_second_eigen_analysis_with(profile: &RevolutionProfile, cells: usize) -> Result<ClosedAnalysis> {
    if !profile.closed {
        return Err(Error::ProfileInvalid("closed analysis needs a closed profile".into()));
    }
    let p0 = SturmLiouvilleProblem::new(profile.clone(), 0).with_cells(cells);
    let p1 = SturmLiouvilleProblem::new(profile.clone(), 1).with_cells(cells);
    let radial = sl_eigen(&p0, 2)?;
    let u11 = sl_eigen(&p1, 1)?.remove(0);
    let lambda_20 = radial[1].lambda;
    let lambda_11 = u11.lambda;
    let lambda_2 = lambda_20.min(lambda_11);
    let gap = (lambda_20 - lambda_11).abs() / lambda_2.abs().max(1e-300);
    let class = if gap <= MULTIPLICITY_TOL {
        MultiplicityClass::Mixed
    } else if lambda_20 < lambda_11 {
        MultiplicityClass::Radial
    } else {
        MultiplicityClass::L1
    };

    let h = p1.h();
    let umax = u11.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let u11_positive = u11.u.iter().all(|v| *v > -DEAD_BAND * umax);
    let u11_prime_zeros = sign_changes(&face_derivative(&u11.u, h));
    let n = flux(profile, &u11.u, h);
    let nprime_zeros = sign_changes(&face_derivative(&n, h));
    let u11_crit_count = if u11_positive { 2 * u11_prime_zeros } else { 0 };
    let u20_prime_zeros = sign_changes(&face_derivative(&radial[1].u, h));

    let (min_curvature, _) = profile.min_curvature();
    let curvature_positive = min_curvature > 0.0;
    let counts_ok = match class {
        MultiplicityClass::Radial => u20_prime_zeros == 0,
        _ => u11_positive && u11_prime_zeros == 1 && nprime_zeros == 2,
    };
    let verdict = if !curvature_positive {
        RevolutionVerdict::NotApplicable
    } else if counts_ok {
        RevolutionVerdict::Pass
    } else {
        RevolutionVerdict::Fail
    };
    Ok(ClosedAnalysis {
        lambda_20,
        lambda_11,
        lambda_2,
        class,
        gap,
        curvature_positive,
        min_curvature,
        u11_positive,
        u11_prime_zeros,
        nprime_zeros,
        u11_crit_count,
        u20_prime_zeros,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub param: f64,
    pub profile: String,
    /// False when the member is invalid or fails `−Θ''/Θ > 0`; see `note`.
    pub included: bool,
    /// Present whenever the profile is valid, including excluded members.
    pub analysis: Option<ClosedAnalysis>,
    pub two_critical_points: Option<bool>,
    pub note: String,
}

/// Runs [`closed_second_eigen_analysis`] over `samples` evenly spaced
/// parameters of a family of closed profiles. Members failing
/// `−Θ''/Θ > 0` are excluded but their counts are still computed.
pub fn conjecture_probe(
    family: impl Fn(f64) -> Result<RevolutionProfile>,
    range: (f64, f64),
    samples: usize,
    cells: usize,
) -> Vec<ProbeRow> {
    (0..samples)
        .map(|i| {
            let param =
                if samples > 1 { range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64 } else { range.0 };
            let mut row = ProbeRow {
                param,
                profile: String::new(),
                included: false,
                analysis: None,
                two_critical_points: None,
                note: String::new(),
            };
            let profile = match family(param) {
                Ok(p) => p,
                Err(e) => {
                    row.note = format!("excluded: {e}");
                    return row;
                }
            };
            row.profile = profile.name.clone();
            let (kmin, at) = profile.min_curvature();
            row.included = kmin > 0.0;
            if !row.included {
                row.note = format!("excluded: -Θ''/Θ = {kmin:.3e} at r = {at:.4}");
            }
            match closed_second_eigen_analysis_with(&profile, cells) {
                Ok(a) => {
                    row.two_critical_points = Some(a.has_two_point_eigenfunction());
                    row.analysis = Some(a);
                }
                Err(e) => {
                    row.included = false;
                    row.note = format!("excluded: {e}");
                }
            }
            row
        })
        .collect()
}

/// The family `Θ = sin r + ε sin 2r sin r`.
pub fn sin2_family(eps: f64) -> Result<RevolutionProfile> {
    RevolutionProfile::fourier_perturbed(&format!("sin2_eps_{eps}"), alloc::vec![0.0, eps], 2)
}
