//! The mapped polar grid, the Laplace–Beltrami operator and the solvers for
//! `-Δu = f(u)` with `u = 0` on the boundary.
//!
//! Nodes sit at `(sᵢ, tⱼ) = (i / n_s, 2π j / n_t)` and are mapped to the
//! surface by `r = s ρ(t)` in geodesic polar coordinates about the pole. In
//! these coordinates the metric is
//!
//! ```text
//! g = ρ² ds² + 2 s ρ ρ' ds dt + (s² ρ'² + Θ(sρ)²) dt²,   √det g = ρ Θ(sρ)
//! ```
//!
//! and the operator is assembled from the Dirichlet energy `∫ |∇u|² dA`:
//! radial and angular edge terms carry the diagonal coefficients of
//! `√g g⁻¹`, each cell carries the mixed coefficient, and the pole is a
//! single node joined to the first ring by radial edges. The resulting
//! stiffness matrix `A` is symmetric, and `Δ_h u = -A u / m` with the lumped
//! mass `m` (exact area of each dual cell).

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::geometry::ambient::{PolarFrame, Vec3};
use crate::linalg::{dot, norm_inf, pcg, Csr};

pub const MIN_NS: usize = 16;
pub const MIN_NT: usize = 32;
/// Relative residual for linear solves.
pub const CG_TOL: f64 = 1e-10;
const CG_MAX_ITER: usize = 200_000;

#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub domain: DomainSpec,
    pub n_s: usize,
    pub n_t: usize,
    pub frame: PolarFrame,
    rho: Vec<f64>,
    positions: Vec<Vec3>,
    mass: Vec<f64>,
    /// Interior rows, all columns.
    stiffness: Csr,
    /// Interior rows and columns.
    interior: Csr,
}

impl PolarGrid {
    pub fn new(domain: DomainSpec, n_s: usize, n_t: usize) -> Result<Self> {
        if n_s < MIN_NS || n_t < MIN_NT {
            return Err(Error::GridTooCoarse { n_s, n_t });
        }
        domain.validate()?;
        let frame = domain.frame();
        let rho: Vec<f64> = (0..n_t).map(|j| domain.rho(TAU * j as f64 / n_t as f64)).collect();
        let mut g = Self {
            domain,
            n_s,
            n_t,
            frame,
            rho,
            positions: Vec::new(),
            mass: Vec::new(),
            stiffness: Csr::from_triplets(0, 0, Vec::new()),
            interior: Csr::from_triplets(0, 0, Vec::new()),
        };
        g.positions = (0..g.n_nodes())
            .map(|k| {
                let (i, j) = g.ring_angle(k);
                g.frame.point(g.r(i, j), g.t(j))
            })
            .collect();
        g.mass = g.assemble_mass();
        g.stiffness = g.assemble_stiffness();
        g.interior = g.stiffness.leading_block(g.n_interior());
        Ok(g)
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        1 + self.n_s * self.n_t
    }

    /// Pole and rings `1..n_s`; these come first in the node numbering.
    #[inline]
    pub fn n_interior(&self) -> usize {
        1 + (self.n_s - 1) * self.n_t
    }

    #[inline]
    pub fn ds(&self) -> f64 {
        1.0 / self.n_s as f64
    }

    #[inline]
    pub fn dt(&self) -> f64 {
        TAU / self.n_t as f64
    }

    /// Node number of ring `i ≥ 1`, angle `j` (taken modulo `n_t`).
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * self.n_t + j % self.n_t
        }
    }

    /// Inverse of [`index`](Self::index); the pole is `(0, 0)`.
    #[inline]
    pub fn ring_angle(&self, k: usize) -> (usize, usize) {
        if k == 0 {
            (0, 0)
        } else {
            (1 + (k - 1) / self.n_t, (k - 1) % self.n_t)
        }
    }

    #[inline]
    pub fn s(&self, i: usize) -> f64 {
        i as f64 / self.n_s as f64
    }

    #[inline]
    pub fn t(&self, j: usize) -> f64 {
        TAU * (j % self.n_t) as f64 / self.n_t as f64
    }

    #[inline]
    pub fn rho_at(&self, j: usize) -> f64 {
        self.rho[j % self.n_t]
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize) -> f64 {
        self.s(i) * self.rho_at(j)
    }

    #[inline]
    pub fn is_boundary(&self, k: usize) -> bool {
        k >= self.n_interior()
    }

    #[inline]
    pub fn position(&self, k: usize) -> Vec3 {
        self.positions[k]
    }

    /// Geodesic polar coordinates of node `k` about the pole.
    pub fn polar(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.ring_angle(k);
        (self.r(i, j), self.t(j))
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Stiffness rows of the interior nodes over all nodes.
    pub fn stiffness(&self) -> &Csr {
        &self.stiffness
    }

    /// Stiffness restricted to interior nodes (the Dirichlet operator).
    pub fn interior_operator(&self) -> &Csr {
        &self.interior
    }

    /// Same as [`interior_operator`](Self::interior_operator): `-Δ_h` in the
    /// mass-weighted sense.
    pub fn laplace_beltrami(&self) -> &Csr {
        &self.interior
    }

    /// Mesh width `max(Δs · max ρ, Δt · max Θ(ρ))` in surface units.
    pub fn h(&self) -> f64 {
        let s = self.domain.surface;
        let rmax = self.rho.iter().fold(0.0f64, |m, r| m.max(*r));
        (self.ds() * rmax).max(self.dt() * s.warp(rmax))
    }

    fn a_ss(&self, s: f64, t: f64) -> f64 {
        let (rho, rho_d, _) = self.domain.rho_jet(t);
        let th = self.domain.surface.warp(s * rho);
        (s * s * rho_d * rho_d + th * th) / (rho * th)
    }

    fn assemble_mass(&self) -> Vec<f64> {
        let surf = self.domain.surface;
        let (ds, dt) = (self.ds(), self.dt());
        let mut m = vec![0.0; self.n_nodes()];
        m[0] = (0..self.n_t).map(|j| dt * surf.warp_integral(0.5 * ds * self.rho[j])).sum();
        for i in 1..=self.n_s {
            let hi = if i == self.n_s { 1.0 } else { self.s(i) + 0.5 * ds };
            let lo = self.s(i) - 0.5 * ds;
            for j in 0..self.n_t {
                let rho = self.rho[j];
                m[self.index(i, j)] = dt * (surf.warp_integral(hi * rho) - surf.warp_integral(lo * rho));
            }
        }
        m
    }

    fn assemble_stiffness(&self) -> Csr {
        let surf = self.domain.surface;
        let (ds, dt) = (self.ds(), self.dt());
        let n_int = self.n_interior();
        let mut trip: Vec<(usize, usize, f64)> = Vec::with_capacity(self.n_nodes() * 10);
        let edge = |trip: &mut Vec<(usize, usize, f64)>, a: usize, b: usize, w: f64| {
            for &(p, q) in &[(a, b), (b, a)] {
                if p < n_int {
                    trip.push((p, p, w));
                    trip.push((p, q, -w));
                }
            }
        };
        // Radial edges, pole to boundary.
        for i in 0..self.n_s {
            let sm = self.s(i) + 0.5 * ds;
            for j in 0..self.n_t {
                let w = self.a_ss(sm, self.t(j)) * dt / ds;
                edge(&mut trip, self.index(i, j), self.index(i + 1, j), w);
            }
        }
        // Angular edges on interior rings.
        for i in 1..self.n_s {
            let s = self.s(i);
            for j in 0..self.n_t {
                let tm = self.t(j) + 0.5 * dt;
                let (rho, _, _) = self.domain.rho_jet(tm);
                let w = rho / surf.warp(s * rho) * ds / dt;
                edge(&mut trip, self.index(i, j), self.index(i, j + 1), w);
            }
        }
        // Mixed term, one cell at a time.
        let dsv = [-1.0, 1.0, -1.0, 1.0];
        let dtv = [-1.0, -1.0, 1.0, 1.0];
        for i in 0..self.n_s {
            let sc = self.s(i) + 0.5 * ds;
            for j in 0..self.n_t {
                let tc = self.t(j) + 0.5 * dt;
                let (rho, rho_d, _) = self.domain.rho_jet(tc);
                if rho_d == 0.0 {
                    continue;
                }
                let a_st = -sc * rho_d / surf.warp(sc * rho);
                let c = a_st * ds * dt / (4.0 * ds * dt);
                let corners = [self.index(i, j), self.index(i + 1, j), self.index(i, j + 1), self.index(i + 1, j + 1)];
                for p in 0..4 {
                    if corners[p] >= n_int {
                        continue;
                    }
                    for q in 0..4 {
                        let v = c * (dsv[p] * dtv[q] + dtv[p] * dsv[q]);
                        if v != 0.0 {
                            trip.push((corners[p], corners[q], v));
                        }
                    }
                }
            }
        }
        Csr::from_triplets(n_int, self.n_nodes(), trip)
    }

    /// `A u` over the interior rows, evaluated in difference form
    /// `Σ_k A_ik (u_k − u_i)` (rows sum to zero), which keeps round-off
    /// proportional to the variation of `u` rather than its size.
    pub fn apply_stiffness(&self, u: &[f64]) -> Vec<f64> {
        let a = &self.stiffness;
        (0..a.n_rows)
            .map(|i| {
                let mut s = 0.0;
                for k in a.row_ptr[i]..a.row_ptr[i + 1] {
                    let c = a.cols[k];
                    if c != i {
                        s += a.vals[k] * (u[c] - u[i]);
                    }
                }
                s
            })
            .collect()
    }

    /// `Δ_h u` at the interior nodes.
    pub fn apply_laplacian(&self, u: &[f64]) -> Vec<f64> {
        let au = self.apply_stiffness(u);
        au.iter().zip(&self.mass).map(|(a, m)| -a / m).collect()
    }

    /// Discrete `L²` product over interior nodes.
    pub fn inner_h(&self, u: &[f64], v: &[f64]) -> f64 {
        (0..self.n_interior()).map(|k| self.mass[k] * u[k] * v[k]).sum()
    }

    pub fn sample(&self, f: impl Fn(Vec3) -> f64) -> Vec<f64> {
        self.positions.iter().map(|x| f(*x)).collect()
    }

    /// Values at nodes from a function of the polar coordinates `(r, t)`.
    pub fn sample_polar(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        (0..self.n_nodes())
            .map(|k| {
                let (r, t) = self.polar(k);
                f(r, t)
            })
            .collect()
    }
}

/// Node values on a grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: Arc<PolarGrid>,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<PolarGrid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n_nodes());
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<PolarGrid>) -> Self {
        let n = grid.n_nodes();
        Self::new(grid, vec![0.0; n])
    }

    pub fn from_polar(grid: Arc<PolarGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let v = grid.sample_polar(f);
        Self::new(grid, v)
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[..self.grid.n_interior()]
    }

    pub fn sup(&self) -> f64 {
        norm_inf(&self.values)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// A smooth nonlinearity with `f`, `f'` and the primitive `F(s) = ∫₀ˢ f`.
pub trait CustomNonlinearity: Send + Sync {
    fn f(&self, s: f64) -> f64;
    fn df(&self, s: f64) -> f64;
    fn primitive(&self, s: f64) -> f64;
    fn describe(&self) -> String;
}

#[derive(Clone)]
pub enum Nonlinearity {
    /// `f ≡ 1`.
    Torsion,
    /// `f(s) = λ s`.
    Eigen(f64),
    Custom(Arc<dyn CustomNonlinearity>),
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::Torsion => write!(f, "Torsion"),
            Nonlinearity::Eigen(l) => write!(f, "Eigen({l})"),
            Nonlinearity::Custom(c) => write!(f, "Custom({})", c.describe()),
        }
    }
}

impl Nonlinearity {
    pub fn custom(c: impl CustomNonlinearity + 'static) -> Self {
        Nonlinearity::Custom(Arc::new(c))
    }

    #[inline]
    pub fn f(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Torsion => 1.0,
            Nonlinearity::Eigen(l) => l * s,
            Nonlinearity::Custom(c) => c.f(s),
        }
    }

    #[inline]
    pub fn df(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Torsion => 0.0,
            Nonlinearity::Eigen(l) => *l,
            Nonlinearity::Custom(c) => c.df(s),
        }
    }

    #[inline]
    pub fn primitive(&self, s: f64) -> f64 {
        match self {
            Nonlinearity::Torsion => s,
            Nonlinearity::Eigen(l) => 0.5 * l * s * s,
            Nonlinearity::Custom(c) => c.primitive(s),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Nonlinearity::Torsion => "torsion".into(),
            Nonlinearity::Eigen(l) => alloc::format!("eigen({l})"),
            Nonlinearity::Custom(c) => alloc::format!("custom:{}", c.describe()),
        }
    }

    /// `f(0) ≥ 0`, `F(0) = 0`, and `f'`, `F'` consistent with `f` by central
    /// differences at a few points of `[0, 2]`.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidNonlinearity(m.into()));
        if !(self.f(0.0) >= 0.0) {
            return bad("f(0) < 0");
        }
        if self.primitive(0.0).abs() > 1e-12 {
            return bad("F(0) != 0");
        }
        for &s in &[0.1, 0.5, 1.0, 1.7] {
            let h = 1e-4;
            let scale = 1.0 + self.f(s).abs() + self.df(s).abs();
            let df = (self.f(s + h) - self.f(s - h)) / (2.0 * h);
            if !df.is_finite() || (df - self.df(s)).abs() > 1e-4 * scale {
                return bad("f' inconsistent with f");
            }
            let dp = (self.primitive(s + h) - self.primitive(s - h)) / (2.0 * h);
            if !dp.is_finite() || (dp - self.f(s)).abs() > 1e-4 * scale {
                return bad("F' inconsistent with f");
            }
        }
        Ok(())
    }
}

/// `f(s) = Σ cₖ sᵏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl CustomNonlinearity for Polynomial {
    fn f(&self, s: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    fn df(&self, s: f64) -> f64 {
        self.0.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * s + k as f64 * c)
    }

    fn primitive(&self, s: f64) -> f64 {
        s * self.0.iter().enumerate().rev().fold(0.0, |acc, (k, c)| acc * s + c / (k + 1) as f64)
    }

    fn describe(&self) -> String {
        alloc::format!("poly{:?}", self.0)
    }
}

fn interior_rhs(grid: &PolarGrid, f: impl Fn(usize) -> f64) -> Vec<f64> {
    (0..grid.n_interior()).map(|k| grid.mass()[k] * f(k)).collect()
}

fn extend(grid: &PolarGrid, interior: Vec<f64>) -> Vec<f64> {
    let mut v = interior;
    v.resize(grid.n_nodes(), 0.0);
    v
}

/// Solves `-Δu = 1`, `u = 0` on the boundary.
pub fn solve_torsion(grid: &Arc<PolarGrid>) -> Result<ScalarField> {
    let b = interior_rhs(grid, |_| 1.0);
    let mut x = vec![0.0; b.len()];
    pcg(grid.interior_operator(), &b, &mut x, CG_TOL, CG_MAX_ITER)?;
    Ok(ScalarField::new(grid.clone(), extend(grid, x)))
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub lambda: f64,
    /// Positive, `sup = 1`.
    pub field: ScalarField,
    /// `‖A v − λ m v‖_{m⁻¹} / (λ ‖v‖_m)`.
    pub residual: f64,
    pub iterations: usize,
}

/// Bottom eigenpair of the symmetric pencil `(K, diag m)` for SPD `K` by
/// inverse iteration.
fn inverse_iteration(k: &Csr, mass: &[f64], start: Vec<f64>, tol: f64) -> Result<(f64, Vec<f64>, f64, usize)> {
    let n = start.len();
    let mut v = start;
    let mnorm = |v: &[f64]| (0..n).map(|i| mass[i] * v[i] * v[i]).sum::<f64>().sqrt();
    let nv = mnorm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut mu = {
        let kv = k.apply(&v);
        dot(&kv, &v)
    };
    let mut x: Vec<f64> = v.iter().map(|vi| vi / mu).collect();
    let mut residual = f64::INFINITY;
    for it in 1..=500 {
        let b: Vec<f64> = (0..n).map(|i| mass[i] * v[i]).collect();
        match pcg(k, &b, &mut x, 1e-12, CG_MAX_ITER) {
            Ok(_) => {}
            // Round-off floor; the eigen residual below is the real test.
            Err(Error::SolverDiverged { residual, .. }) if residual < 1e-9 => {}
            Err(e) => return Err(e),
        }
        let nx = mnorm(&x);
        if !(nx > 0.0) || !nx.is_finite() {
            return Err(Error::SolverDiverged { iterations: it, residual: f64::NAN });
        }
        v = x.iter().map(|xi| xi / nx).collect();
        let kv = k.apply(&v);
        mu = dot(&kv, &v);
        let r2: f64 = (0..n).map(|i| (kv[i] - mu * mass[i] * v[i]).powi(2) / mass[i]).sum();
        residual = r2.sqrt() / mu.abs();
        // Warm start for the next solve: K⁻¹ m v ≈ v / μ.
        x = v.iter().map(|vi| vi / mu).collect();
        if residual <= tol {
            return Ok((mu, v, residual, it));
        }
    }
    Err(Error::SolverDiverged { iterations: 500, residual })
}

/// Rayleigh-residual target of the eigen solvers.
pub const EIGEN_TOL: f64 = 1e-8;

fn sup_normalize_positive(mut v: Vec<f64>) -> Vec<f64> {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for x in &v {
        lo = lo.min(*x);
        hi = hi.max(*x);
    }
    let s = if hi >= -lo { hi } else { lo };
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// First Dirichlet eigenpair of `-Δ`.
pub fn solve_first_eigen(grid: &Arc<PolarGrid>) -> Result<EigenPair> {
    let start = solve_torsion(grid)?.values[..grid.n_interior()].to_vec();
    let (lambda, v, residual, iterations) =
        inverse_iteration(grid.interior_operator(), &grid.mass()[..grid.n_interior()], start, EIGEN_TOL)?;
    let v = sup_normalize_positive(v);
    Ok(EigenPair { lambda, field: ScalarField::new(grid.clone(), extend(grid, v)), residual, iterations })
}

#[derive(Debug, Clone)]
pub struct SemilinearSolution {
    pub field: ScalarField,
    pub iterations: usize,
    /// `‖-Δ_h u − f(u)‖∞` over interior nodes.
    pub residual: f64,
}

/// Stopping threshold for Newton.
pub const NEWTON_TOL: f64 = 1e-9;
pub const NEWTON_MAX_ITER: usize = 50;

fn semilinear_residual(grid: &PolarGrid, nl: &Nonlinearity, u: &[f64]) -> (Vec<f64>, f64) {
    let au = grid.apply_stiffness(u);
    let m = grid.mass();
    let g: Vec<f64> = (0..au.len()).map(|k| au[k] - m[k] * nl.f(u[k])).collect();
    let r = (0..g.len()).fold(0.0f64, |acc, k| acc.max((g[k] / m[k]).abs()));
    (g, r)
}

/// Newton's method for `-Δu = f(u)` from `u0` (boundary values are reset to
/// zero).
///
/// The linear nonlinearity `f(s) = λ s` is refused with `NewtonStalled`:
/// its solutions form a line through zero (or are only zero), and eigen
/// problems go through [`solve_first_eigen`] instead.
pub fn solve_semilinear(grid: &Arc<PolarGrid>, nl: &Nonlinearity, u0: &ScalarField) -> Result<SemilinearSolution> {
    nl.validate()?;
    if !u0.is_finite() {
        return Err(Error::NewtonStalled { iterations: 0, residual: f64::NAN });
    }
    let n_int = grid.n_interior();
    let mut u = u0.values.clone();
    u[n_int..].iter_mut().for_each(|x| *x = 0.0);
    let (mut g, mut res) = semilinear_residual(grid, nl, &u);
    if let Nonlinearity::Eigen(_) = nl {
        return Err(Error::NewtonStalled { iterations: 0, residual: res });
    }
    let mut it = 0;
    while res > NEWTON_TOL {
        if it == NEWTON_MAX_ITER {
            return Err(Error::NewtonStalled { iterations: it, residual: res });
        }
        it += 1;
        let shift: Vec<f64> = (0..n_int).map(|k| -grid.mass()[k] * nl.df(u[k])).collect();
        let jac = grid.interior_operator().plus_diagonal(&shift);
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        let mut delta = vec![0.0; n_int];
        if pcg(&jac, &rhs, &mut delta, 1e-13, CG_MAX_ITER).is_err() {
            return Err(Error::NewtonStalled { iterations: it, residual: res });
        }
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..=6 {
            let mut trial = u.clone();
            for k in 0..n_int {
                trial[k] += step * delta[k];
            }
            let (g_new, r_new) = semilinear_residual(grid, nl, &trial);
            if r_new.is_finite() && r_new < res {
                u = trial;
                g = g_new;
                res = r_new;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NewtonStalled { iterations: it, residual: res });
        }
    }
    let sup = norm_inf(&u);
    let min = u[..n_int].iter().fold(f64::INFINITY, |m, x| m.min(*x));
    if sup > 1e-12 && min <= 0.0 {
        return Err(Error::NonPositiveSolution { min_value: min });
    }
    Ok(SemilinearSolution { field: ScalarField::new(grid.clone(), u), iterations: it, residual: res })
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub lambda_min: f64,
    pub eigenvector: ScalarField,
    pub semi_stable: bool,
    pub tolerance: f64,
    pub residual: f64,
}

/// Bottom Dirichlet eigenvalue of the stability operator `-Δ − f'(u)`.
///
/// Inverse iteration runs on `-Δ − f'(u) + σ` with `σ = max(0, max f'(u))`,
/// which is positive definite because `-Δ_h` is. The semi-stability
/// tolerance is `(1e-6 + h²)(1 + max |f'(u)|)`.
pub fn stability_spectrum(grid: &Arc<PolarGrid>, nl: &Nonlinearity, u: &ScalarField) -> Result<StabilityReport> {
    let n_int = grid.n_interior();
    let fp: Vec<f64> = u.values[..n_int].iter().map(|x| nl.df(*x)).collect();
    let fp_max = fp.iter().fold(0.0f64, |m, x| m.max(*x));
    let fp_abs = norm_inf(&fp);
    let sigma = fp_max;
    let mass = &grid.mass()[..n_int];
    let diag: Vec<f64> = (0..n_int).map(|k| mass[k] * (sigma - fp[k])).collect();
    let k = grid.interior_operator().plus_diagonal(&diag);
    let start = solve_torsion(grid)?.values[..n_int].to_vec();
    let (mu, v, residual, _) = inverse_iteration(&k, mass, start, EIGEN_TOL)?;
    let lambda_min = mu - sigma;
    let h = grid.h();
    let tolerance = (1e-6 + h * h) * (1.0 + fp_abs);
    let v = sup_normalize_positive(v);
    Ok(StabilityReport {
        lambda_min,
        eigenvector: ScalarField::new(grid.clone(), extend(grid, v)),
        semi_stable: lambda_min >= -tolerance,
        tolerance,
        residual,
    })
}

/// A solved problem: the field and how it was obtained.
#[derive(Debug, Clone)]
pub struct Solution {
    pub field: ScalarField,
    /// The nonlinearity the field satisfies (eigen problems carry their λ).
    pub nonlinearity: Nonlinearity,
    pub residual: f64,
    pub iterations: usize,
}

/// Requested problem; eigen problems take λ from the discrete spectrum.
#[derive(Debug, Clone)]
pub enum Problem {
    Torsion,
    FirstEigen,
    Semilinear(Nonlinearity),
}

/// Solves a [`Problem`], using the torsion function as the Newton start for
/// semilinear problems.
pub fn solve(grid: &Arc<PolarGrid>, problem: &Problem) -> Result<Solution> {
    match problem {
        Problem::Torsion => {
            let u = solve_torsion(grid)?;
            let (_, residual) = semilinear_residual(grid, &Nonlinearity::Torsion, &u.values);
            Ok(Solution { field: u, nonlinearity: Nonlinearity::Torsion, residual, iterations: 1 })
        }
        Problem::FirstEigen => {
            let e = solve_first_eigen(grid)?;
            Ok(Solution {
                field: e.field,
                nonlinearity: Nonlinearity::Eigen(e.lambda),
                residual: e.residual,
                iterations: e.iterations,
            })
        }
        Problem::Semilinear(nl) => {
            let u0 = solve_torsion(grid)?;
            let s = solve_semilinear(grid, nl, &u0)?;
            Ok(Solution { field: s.field, nonlinearity: nl.clone(), residual: s.residual, iterations: s.iterations })
        }
    }
}

/// Boxed closure form of [`CustomNonlinearity`], handy for tests and
/// programmatic use.
pub struct ClosureNonlinearity {
    pub f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub df: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub primitive: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub label: String,
}

impl CustomNonlinearity for ClosureNonlinearity {
    fn f(&self, s: f64) -> f64 {
        (self.f)(s)
    }
    fn df(&self, s: f64) -> f64 {
        (self.df)(s)
    }
    fn primitive(&self, s: f64) -> f64 {
        (self.primitive)(s)
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}
