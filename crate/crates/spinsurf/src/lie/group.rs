//! Concrete models of the catalog groups, used to integrate moving frames.
//!
//! Two backends implement the same small interface ([`GroupModel`]):
//!
//! * **Matrix models** — the group is a subgroup of GL(4,ℝ) and the algebra a
//!   span of three 4×4 matrices; stepping is `g · exp(t·ξ)` with the matrix
//!   exponential, and relative logarithms come from the matrix log series
//!   projected back onto the algebra span.
//! * **Coordinate model** — the two-parameter fibration family carries an
//!   explicit chart on `{1 + (κ/4)(x²+y²) > 0} ⊂ ℝ³` with an orthonormal
//!   invariant frame; stepping integrates the frame flow with RK4 and
//!   relative logarithms are recovered by Newton iteration on the flow.
//!
//! Both backends expose 3 global coordinates per point (`coords3`) for export
//! and gauge comparison, and a membership defect measuring how far a point has
//! drifted from the model's group constraints.

use crate::error::{Error, Result};
use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};

/// A point of a model group.
#[derive(Clone, Debug)]
pub enum GroupPoint {
    /// Element of a 4×4 matrix model.
    Matrix(Matrix4<f64>),
    /// Chart point (x, y, z) of the coordinate model.
    Coordinate([f64; 3]),
}

impl GroupPoint {
    /// The matrix payload; panics when called on a coordinate point.
    pub fn as_matrix(&self) -> &Matrix4<f64> {
        match self {
            GroupPoint::Matrix(m) => m,
            GroupPoint::Coordinate(_) => panic!("expected a matrix group point"),
        }
    }

    /// The chart payload; panics when called on a matrix point.
    pub fn as_coords(&self) -> &[f64; 3] {
        match self {
            GroupPoint::Coordinate(c) => c,
            GroupPoint::Matrix(_) => panic!("expected a coordinate group point"),
        }
    }
}

/// Which matrix family a [`MatrixModel`] realizes (fixes the global chart and
/// the membership constraints).
#[derive(Clone, Copy, Debug, PartialEq)]
enum MatrixFamily {
    /// Affine translations of ℝ³.
    Translation,
    /// Two affine-line blocks; parameter in the first block's diagonal.
    FamilyA { alpha: f64 },
    FamilyB { alpha: f64 },
    FamilyC { delta: f64 },
    /// Realified indefinite unitary 2×2 group.
    Su12,
}

/// A catalog group as a matrix subgroup of GL(4,ℝ).
#[derive(Clone, Debug)]
pub struct MatrixModel {
    /// Algebra basis images: `basis[i]` represents e_{i+1}.
    pub basis: [Matrix4<f64>; 3],
    family: MatrixFamily,
}

/// Explicit chart model of the fibration family (κ base curvature, τ ≠ 0
/// torsion): the domain `{λ⁻¹ > 0}` with λ = 1/(1 + (κ/4)(x²+y²)), metric
/// λ²(dx²+dy²) − θ², θ = τλ(y dx − x dy) + dz, and orthonormal frame
///
/// ```text
/// E₁ = λ⁻¹(cos(σz) ∂x + sin(σz) ∂y) + τ(x sin(σz) − y cos(σz)) ∂z,
/// E₂ = λ⁻¹(−sin(σz) ∂x + cos(σz) ∂y) + τ(x cos(σz) + y sin(σz)) ∂z,
/// E₃ = ∂z,            σ = κ/(2τ),
/// ```
///
/// with ⟨E₁,E₁⟩ = ⟨E₂,E₂⟩ = 1, ⟨E₃,E₃⟩ = −1.
#[derive(Clone, Copy, Debug)]
pub struct LktCoordModel {
    pub kappa: f64,
    pub tau: f64,
}

/// A group integration backend.
#[derive(Clone, Debug)]
pub enum GroupModel {
    Matrix(MatrixModel),
    Coordinate(LktCoordModel),
}

// =============================================================================
// Matrix model constructors
// =============================================================================

fn block2(tl: Matrix2<f64>, tr: Matrix2<f64>, bl: Matrix2<f64>, br: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&tl);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&tr);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&bl);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&br);
    m
}

/// Realification of a complex number: z = a+bi ↦ [[a,−b],[b,a]].
fn realify(a: f64, b: f64) -> Matrix2<f64> {
    Matrix2::new(a, -b, b, a)
}

impl MatrixModel {
    fn translation() -> Self {
        let mut basis = [Matrix4::zeros(); 3];
        for (i, b) in basis.iter_mut().enumerate() {
            b[(i, 3)] = 1.0;
        }
        MatrixModel { basis, family: MatrixFamily::Translation }
    }

    fn family_a(alpha: f64) -> Self {
        assert!(alpha != 0.0, "family A needs alpha != 0 (alpha = 0 is flat space)");
        let z = Matrix2::zeros();
        let e1 = block2(Matrix2::new(alpha, 0.0, 0.0, 0.0), z, z, z);
        let e2 = block2(Matrix2::new(0.0, 1.0, 0.0, 0.0), z, z, z);
        let e3 = block2(z, z, z, Matrix2::new(0.0, 1.0, 0.0, 0.0));
        MatrixModel { basis: [e1, e2, e3], family: MatrixFamily::FamilyA { alpha } }
    }

    fn family_b(alpha: f64) -> Self {
        assert!(alpha != 0.0, "family B needs alpha != 0");
        let z = Matrix2::zeros();
        let e1 = block2(Matrix2::new(0.0, 1.0, 0.0, 0.0), z, z, z);
        let e2 = block2(z, z, z, Matrix2::new(0.0, 1.0, 0.0, 0.0));
        let e3 = block2(Matrix2::new(-alpha, 0.0, 0.0, 0.0), z, z, z);
        MatrixModel { basis: [e1, e2, e3], family: MatrixFamily::FamilyB { alpha } }
    }

    fn family_c(delta: f64) -> Self {
        assert!(delta != 0.0, "family C needs delta != 0");
        let z = Matrix2::zeros();
        let e1 = block2(Matrix2::new(delta, 0.0, 0.0, 0.0), z, z, z);
        let e2 = block2(z, z, z, Matrix2::new(0.0, 1.0, 0.0, 0.0));
        let e3 = block2(Matrix2::new(0.0, 1.0, 0.0, 0.0), z, z, z);
        MatrixModel { basis: [e1, e2, e3], family: MatrixFamily::FamilyC { delta } }
    }

    fn su12() -> Self {
        // Complex basis E1 = [[0,1],[1,0]], E2 = [[0,−i],[i,0]], E3 = [[i,0],[0,−i]],
        // realified entrywise. Metric ⟨A,B⟩ = ¼ tr(AB) on the real forms gives
        // signs (+,+,−).
        let e1 = block2(realify(0.0, 0.0), realify(1.0, 0.0), realify(1.0, 0.0), realify(0.0, 0.0));
        let e2 =
            block2(realify(0.0, 0.0), realify(0.0, -1.0), realify(0.0, 1.0), realify(0.0, 0.0));
        let e3 =
            block2(realify(0.0, 1.0), realify(0.0, 0.0), realify(0.0, 0.0), realify(0.0, -1.0));
        MatrixModel { basis: [e1, e2, e3], family: MatrixFamily::Su12 }
    }

    /// Algebra element Σ ξ_i e_i as a matrix.
    pub fn rep(&self, xi: &[f64; 3]) -> Matrix4<f64> {
        self.basis[0] * xi[0] + self.basis[1] * xi[1] + self.basis[2] * xi[2]
    }

    /// Coordinates of an algebra-span matrix (Frobenius least squares).
    /// Returns the residual of the projection as the second value.
    fn project(&self, m: &Matrix4<f64>) -> ([f64; 3], f64) {
        let fd = |a: &Matrix4<f64>, b: &Matrix4<f64>| (a.transpose() * b).trace();
        let g = Matrix3::from_fn(|i, j| fd(&self.basis[i], &self.basis[j]));
        let rhs = Vector3::from_fn(|i, _| fd(&self.basis[i], m));
        let sol = g.full_piv_lu().solve(&rhs).expect("independent algebra basis");
        let xi = [sol[0], sol[1], sol[2]];
        let res = (m - self.rep(&xi)).norm();
        (xi, res)
    }
}

/// Matrix logarithm by the Mercator series; requires ‖m − I‖ < 1.
fn matrix_log(m: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let x = m - Matrix4::identity();
    let nx = x.norm();
    if !nx.is_finite() || nx >= 0.95 {
        return Err(Error::OutOfRange(format!(
            "matrix log series needs the argument near the identity (distance {nx:.3e})"
        )));
    }
    let mut term = x;
    let mut sum = x;
    for k in 2..200 {
        term *= x;
        let add = term * (if k % 2 == 0 { -1.0 } else { 1.0 } / k as f64);
        sum += add;
        if add.norm() < 1e-17 * (1.0 + sum.norm()) {
            return Ok(sum);
        }
    }
    Err(Error::OutOfRange("matrix log series did not converge".to_string()))
}

/// Inverse of s ↦ (e^s − 1)/s, applied to recover the nilpotent part of an
/// affine-line block [[p, q],[0, 1]] = exp([[s, t],[0, 0]]).
fn affine_block_log(p: f64, q: f64) -> (f64, f64) {
    let s = p.ln();
    let t = if (p - 1.0).abs() < 1e-12 { q } else { q * s / (p - 1.0) };
    (s, t)
}

// =============================================================================
// Coordinate model
// =============================================================================

impl LktCoordModel {
    pub fn new(kappa: f64, tau: f64) -> Self {
        assert!(tau != 0.0, "the fibration family needs tau != 0");
        LktCoordModel { kappa, tau }
    }

    /// Conformal factor λ = 1/(1 + (κ/4)(x²+y²)); the chart requires λ > 0.
    pub fn lambda(&self, p: &[f64; 3]) -> f64 {
        1.0 / (1.0 + 0.25 * self.kappa * (p[0] * p[0] + p[1] * p[1]))
    }

    /// Whether the point lies safely inside the chart domain.
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        1.0 + 0.25 * self.kappa * (p[0] * p[0] + p[1] * p[1]) > 1e-8
    }

    /// The invariant frame at p: rows are the coordinate components of E₁, E₂, E₃.
    pub fn frame_at(&self, p: &[f64; 3]) -> [[f64; 3]; 3] {
        let (x, y, z) = (p[0], p[1], p[2]);
        let sigma = self.kappa / (2.0 * self.tau);
        let (s, c) = (sigma * z).sin_cos();
        let il = 1.0 / self.lambda(p);
        [
            [il * c, il * s, self.tau * (x * s - y * c)],
            [-il * s, il * c, self.tau * (x * c + y * s)],
            [0.0, 0.0, 1.0],
        ]
    }

    /// Metric components g_ij at p (coordinate basis).
    pub fn metric_at(&self, p: &[f64; 3]) -> [[f64; 3]; 3] {
        let l = self.lambda(p);
        let theta = [self.tau * l * p[1], -self.tau * l * p[0], 1.0];
        let mut g = [[0.0; 3]; 3];
        g[0][0] = l * l;
        g[1][1] = l * l;
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] -= theta[i] * theta[j];
            }
        }
        g
    }

    /// Velocity of the invariant flow with algebra coordinates ξ.
    fn velocity(&self, p: &[f64; 3], xi: &[f64; 3]) -> [f64; 3] {
        let f = self.frame_at(p);
        let mut v = [0.0; 3];
        for i in 0..3 {
            for k in 0..3 {
                v[k] += xi[i] * f[i][k];
            }
        }
        v
    }

    /// RK4 integration of the invariant flow for time t.
    pub fn flow(&self, p: &[f64; 3], xi: &[f64; 3], t: f64) -> [f64; 3] {
        let speed = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        let steps = ((speed * t.abs() / 0.05).ceil() as usize).clamp(1, 10_000);
        let h = t / steps as f64;
        let mut q = *p;
        for _ in 0..steps {
            let k1 = self.velocity(&q, xi);
            let q2 = add_scaled(&q, &k1, 0.5 * h);
            let k2 = self.velocity(&q2, xi);
            let q3 = add_scaled(&q, &k2, 0.5 * h);
            let k3 = self.velocity(&q3, xi);
            let q4 = add_scaled(&q, &k3, h);
            let k4 = self.velocity(&q4, xi);
            for k in 0..3 {
                q[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
            }
        }
        q
    }

    /// Newton inversion of the time-1 flow: finds ξ with `flow(p, ξ, 1) = q`.
    pub fn log_rel(&self, p: &[f64; 3], q: &[f64; 3]) -> Result<[f64; 3]> {
        // First-order seed: contract the coordinate difference with the coframe.
        let f = self.frame_at(p);
        let fm = Matrix3::from_fn(|k, i| f[i][k]); // columns = frame vectors
        let delta = Vector3::new(q[0] - p[0], q[1] - p[1], q[2] - p[2]);
        let seed = fm
            .full_piv_lu()
            .solve(&delta)
            .ok_or_else(|| Error::invalid("degenerate frame in coordinate model"))?;
        let mut xi = [seed[0], seed[1], seed[2]];
        for _ in 0..40 {
            let r = self.flow(p, &xi, 1.0);
            let res = Vector3::new(r[0] - q[0], r[1] - q[1], r[2] - q[2]);
            let scale = 1.0 + q.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if res.norm() < 1e-14 * scale {
                return Ok(xi);
            }
            let eps = 1e-6 * (1.0 + xi.iter().map(|v| v.abs()).fold(0.0, f64::max));
            let mut jac = Matrix3::zeros();
            for j in 0..3 {
                let mut xp = xi;
                let mut xm = xi;
                xp[j] += eps;
                xm[j] -= eps;
                let fp = self.flow(p, &xp, 1.0);
                let fm2 = self.flow(p, &xm, 1.0);
                for i in 0..3 {
                    jac[(i, j)] = (fp[i] - fm2[i]) / (2.0 * eps);
                }
            }
            let step = jac
                .full_piv_lu()
                .solve(&res)
                .ok_or_else(|| Error::invalid("singular Jacobian in flow inversion"))?;
            for i in 0..3 {
                xi[i] -= step[i];
            }
        }
        // Accept a slightly looser tolerance before failing.
        let r = self.flow(p, &xi, 1.0);
        let res =
            ((r[0] - q[0]).powi(2) + (r[1] - q[1]).powi(2) + (r[2] - q[2]).powi(2)).sqrt();
        if res < 1e-9 {
            Ok(xi)
        } else {
            Err(Error::OutOfRange(format!("flow inversion did not converge (residual {res:.3e})")))
        }
    }
}

fn add_scaled(p: &[f64; 3], v: &[f64; 3], s: f64) -> [f64; 3] {
    [p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]]
}

// =============================================================================
// Uniform backend interface
// =============================================================================

impl GroupModel {
    pub fn translation() -> Self {
        GroupModel::Matrix(MatrixModel::translation())
    }
    pub fn family_a(alpha: f64) -> Self {
        GroupModel::Matrix(MatrixModel::family_a(alpha))
    }
    pub fn family_b(alpha: f64) -> Self {
        GroupModel::Matrix(MatrixModel::family_b(alpha))
    }
    pub fn family_c(delta: f64) -> Self {
        GroupModel::Matrix(MatrixModel::family_c(delta))
    }
    pub fn su12() -> Self {
        GroupModel::Matrix(MatrixModel::su12())
    }
    pub fn fibration(kappa: f64, tau: f64) -> Self {
        GroupModel::Coordinate(LktCoordModel::new(kappa, tau))
    }

    /// The identity element.
    pub fn identity(&self) -> GroupPoint {
        match self {
            GroupModel::Matrix(_) => GroupPoint::Matrix(Matrix4::identity()),
            GroupModel::Coordinate(_) => GroupPoint::Coordinate([0.0; 3]),
        }
    }

    /// Right step p · exp(t·ξ) (matrix) / time-t invariant flow (coordinate).
    pub fn step(&self, p: &GroupPoint, xi: &[f64; 3], t: f64) -> GroupPoint {
        match (self, p) {
            (GroupModel::Matrix(m), GroupPoint::Matrix(g)) => {
                GroupPoint::Matrix(g * (m.rep(xi) * t).exp())
            }
            (GroupModel::Coordinate(c), GroupPoint::Coordinate(x)) => {
                GroupPoint::Coordinate(c.flow(x, xi, t))
            }
            _ => panic!("group point does not match the backend"),
        }
    }

    /// Algebra coordinates ξ with `step(p, ξ, 1) = q`; requires q near p.
    pub fn log_rel(&self, p: &GroupPoint, q: &GroupPoint) -> Result<[f64; 3]> {
        match (self, p, q) {
            (GroupModel::Matrix(m), GroupPoint::Matrix(gp), GroupPoint::Matrix(gq)) => {
                let rel = gp
                    .try_inverse()
                    .ok_or_else(|| Error::invalid("singular group element"))?
                    * gq;
                let l = matrix_log(&rel)?;
                let (xi, res) = m.project(&l);
                if res > 1e-8 * (1.0 + l.norm()) {
                    return Err(Error::OutOfRange(format!(
                        "relative log leaves the algebra span (residual {res:.3e})"
                    )));
                }
                Ok(xi)
            }
            (GroupModel::Coordinate(c), GroupPoint::Coordinate(xp), GroupPoint::Coordinate(xq)) => {
                c.log_rel(xp, xq)
            }
            _ => panic!("group point does not match the backend"),
        }
    }

    /// Scale-free separation of two nearby points: the norm of the matrix log
    /// of p⁻¹q (matrix) or the Euclidean chart distance (coordinate).
    pub fn displacement(&self, p: &GroupPoint, q: &GroupPoint) -> f64 {
        match (self, p, q) {
            (GroupModel::Matrix(_), GroupPoint::Matrix(gp), GroupPoint::Matrix(gq)) => {
                match gp.try_inverse() {
                    Some(inv) => match matrix_log(&(inv * gq)) {
                        Ok(l) => l.norm(),
                        Err(_) => (gq - gp).norm(),
                    },
                    None => f64::INFINITY,
                }
            }
            (GroupModel::Coordinate(_), GroupPoint::Coordinate(a), GroupPoint::Coordinate(b)) => {
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
            }
            _ => panic!("group point does not match the backend"),
        }
    }

    /// Three global coordinates of a point, for export and gauge comparison.
    pub fn coords3(&self, p: &GroupPoint) -> [f64; 3] {
        match (self, p) {
            (GroupModel::Matrix(m), GroupPoint::Matrix(g)) => match m.family {
                MatrixFamily::Translation => [g[(0, 3)], g[(1, 3)], g[(2, 3)]],
                MatrixFamily::FamilyA { alpha } => {
                    let (s, t) = affine_block_log(g[(0, 0)], g[(0, 1)]);
                    [s / alpha, t, g[(2, 3)]]
                }
                MatrixFamily::FamilyB { alpha } => {
                    let (s, t) = affine_block_log(g[(0, 0)], g[(0, 1)]);
                    [t, g[(2, 3)], -s / alpha]
                }
                MatrixFamily::FamilyC { delta } => {
                    let (s, t) = affine_block_log(g[(0, 0)], g[(0, 1)]);
                    [s / delta, g[(2, 3)], t]
                }
                MatrixFamily::Su12 => {
                    // g realifies [[z, w],[w̄, z̄]]; use (Re w, Im w, arg z).
                    let zr = 0.5 * (g[(0, 0)] + g[(1, 1)]);
                    let zi = 0.5 * (g[(1, 0)] - g[(0, 1)]);
                    let wr = 0.5 * (g[(0, 2)] + g[(1, 3)]);
                    let wi = 0.5 * (g[(1, 2)] - g[(0, 3)]);
                    [wr, wi, zi.atan2(zr)]
                }
            },
            (GroupModel::Coordinate(_), GroupPoint::Coordinate(x)) => *x,
            _ => panic!("group point does not match the backend"),
        }
    }

    /// How far the point violates the model's group constraints
    /// (block structure for the affine families, the unit-level quadric for
    /// the realified unitary model, domain positivity for the chart model).
    pub fn membership_defect(&self, p: &GroupPoint) -> f64 {
        match (self, p) {
            (GroupModel::Matrix(m), GroupPoint::Matrix(g)) => match m.family {
                MatrixFamily::Translation => {
                    let mut d: f64 = 0.0;
                    let mut ideal = Matrix4::identity();
                    ideal[(0, 3)] = g[(0, 3)];
                    ideal[(1, 3)] = g[(1, 3)];
                    ideal[(2, 3)] = g[(2, 3)];
                    d = d.max((g - ideal).norm());
                    d
                }
                MatrixFamily::FamilyA { .. }
                | MatrixFamily::FamilyB { .. }
                | MatrixFamily::FamilyC { .. } => {
                    // Two affine-line blocks: [[p,q],[0,1]] ⊕ [[1,r],[0,1]],
                    // with p > 0.
                    let mut ideal = Matrix4::identity();
                    ideal[(0, 0)] = g[(0, 0)];
                    ideal[(0, 1)] = g[(0, 1)];
                    ideal[(2, 3)] = g[(2, 3)];
                    let mut d = (g - ideal).norm();
                    if g[(0, 0)] <= 0.0 {
                        d = d.max(1.0 - g[(0, 0)]);
                    }
                    d
                }
                MatrixFamily::Su12 => {
                    let zr = 0.5 * (g[(0, 0)] + g[(1, 1)]);
                    let zi = 0.5 * (g[(1, 0)] - g[(0, 1)]);
                    let wr = 0.5 * (g[(0, 2)] + g[(1, 3)]);
                    let wi = 0.5 * (g[(1, 2)] - g[(0, 3)]);
                    let ideal = block2(
                        realify(zr, zi),
                        realify(wr, wi),
                        realify(wr, -wi),
                        realify(zr, -zi),
                    );
                    let structure = (g - ideal).norm();
                    let level = (zr * zr + zi * zi - wr * wr - wi * wi - 1.0).abs();
                    structure.max(level)
                }
            },
            (GroupModel::Coordinate(c), GroupPoint::Coordinate(x)) => {
                if c.contains(x) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            _ => panic!("group point does not match the backend"),
        }
    }
}

// =============================================================================
// Unit tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{LieAlgebra3, SpaceKind};
    use crate::tol::{ALGEBRA_EXACT, CROSS_CHECK};

    fn matrix_kinds() -> Vec<SpaceKind> {
        vec![
            SpaceKind::MinkowskiR12,
            SpaceKind::AlgebraA { alpha: 1.3 },
            SpaceKind::AlgebraB { alpha: -0.7 },
            SpaceKind::AlgebraC { delta: 0.9 },
            SpaceKind::Su12,
        ]
    }

    #[test]
    fn matrix_bases_realize_the_catalog_brackets() {
        for kind in matrix_kinds() {
            let alg = kind.algebra().unwrap();
            let model = match kind.group_model().unwrap() {
                GroupModel::Matrix(m) => m,
                _ => unreachable!(),
            };
            for i in 0..3 {
                for j in 0..3 {
                    let comm = model.basis[i] * model.basis[j] - model.basis[j] * model.basis[i];
                    let mut ei = [0.0; 3];
                    let mut ej = [0.0; 3];
                    ei[i] = 1.0;
                    ej[j] = 1.0;
                    let want = model.rep(&alg.bracket(&ei, &ej));
                    assert!(
                        (comm - want).norm() < ALGEBRA_EXACT,
                        "{:?}: bracket [e{},e{}] mismatch",
                        kind,
                        i + 1,
                        j + 1
                    );
                }
            }
        }
    }

    #[test]
    fn su12_trace_metric_is_orthonormal_with_signs_pp_minus() {
        let model = match GroupModel::su12() {
            GroupModel::Matrix(m) => m,
            _ => unreachable!(),
        };
        let want = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                let dot = 0.25 * (model.basis[i] * model.basis[j]).trace();
                assert!((dot - want[i][j]).abs() < ALGEBRA_EXACT, "metric entry ({i},{j})");
            }
        }
    }

    #[test]
    fn exponentials_stay_in_the_model_groups() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for kind in matrix_kinds() {
            let model = kind.group_model().unwrap();
            let mut p = model.identity();
            for _ in 0..40 {
                let xi: [f64; 3] = [
                    rng.gen_range(-0.4..0.4),
                    rng.gen_range(-0.4..0.4),
                    rng.gen_range(-0.4..0.4),
                ];
                p = model.step(&p, &xi, 1.0);
                assert!(
                    model.membership_defect(&p) < 1e-9,
                    "{kind:?}: wandered off the group (defect {:.3e})",
                    model.membership_defect(&p)
                );
            }
        }
    }

    #[test]
    fn log_rel_inverts_step_for_matrix_models() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for kind in matrix_kinds() {
            let model = kind.group_model().unwrap();
            let mut p = model.identity();
            // Walk away from the identity first.
            for _ in 0..5 {
                let xi: [f64; 3] =
                    [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
                p = model.step(&p, &xi, 1.0);
            }
            for _ in 0..20 {
                let xi: [f64; 3] = [
                    rng.gen_range(-0.05..0.05),
                    rng.gen_range(-0.05..0.05),
                    rng.gen_range(-0.05..0.05),
                ];
                let q = model.step(&p, &xi, 1.0);
                let back = model.log_rel(&p, &q).unwrap();
                for k in 0..3 {
                    assert!(
                        (back[k] - xi[k]).abs() < CROSS_CHECK,
                        "{kind:?}: log_rel component {k}: {} vs {}",
                        back[k],
                        xi[k]
                    );
                }
            }
        }
    }

    #[test]
    fn coords3_inverts_single_exponentials_for_solvable_models() {
        for (kind, xi) in [
            (SpaceKind::MinkowskiR12, [0.3, -0.7, 1.1]),
            (SpaceKind::AlgebraA { alpha: 1.3 }, [0.4, -0.2, 0.9]),
            (SpaceKind::AlgebraB { alpha: -0.7 }, [0.5, 0.8, -0.3]),
            (SpaceKind::AlgebraC { delta: 0.9 }, [-0.6, 0.1, 0.7]),
        ] {
            let model = kind.group_model().unwrap();
            let g = model.step(&model.identity(), &xi, 1.0);
            let c = model.coords3(&g);
            for k in 0..3 {
                assert!(
                    (c[k] - xi[k]).abs() < CROSS_CHECK,
                    "{kind:?}: coords3 component {k}: {} vs {}",
                    c[k],
                    xi[k]
                );
            }
        }
    }

    #[test]
    fn coordinate_frame_is_orthonormal_in_the_model_metric() {
        for (kappa, tau) in [(2.0, 1.0), (-4.0, 1.0), (1.0, -0.6), (-1.5, 0.8)] {
            let model = LktCoordModel::new(kappa, tau);
            for p in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [-0.4, 0.45, -1.2]] {
                assert!(model.contains(&p));
                let f = model.frame_at(&p);
                let g = model.metric_at(&p);
                let want = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
                for i in 0..3 {
                    for j in 0..3 {
                        let mut dot = 0.0;
                        for a in 0..3 {
                            for b in 0..3 {
                                dot += g[a][b] * f[i][a] * f[j][b];
                            }
                        }
                        assert!(
                            (dot - want[i][j]).abs() < 1e-12,
                            "kappa={kappa} tau={tau} p={p:?}: <E{},E{}> = {dot}",
                            i + 1,
                            j + 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_frame_brackets_match_the_catalog_constants() {
        // Finite-difference Lie brackets of the frame fields against
        // [E1,E2] = 2τE3, [E2,E3] = σE1, [E3,E1] = σE2.
        let (kappa, tau) = (2.0, 0.7);
        let model = LktCoordModel::new(kappa, tau);
        let alg = LieAlgebra3::fibration(kappa, tau);
        let p = [0.25, -0.3, 0.4];
        let h = 1e-5;
        let field = |i: usize, q: &[f64; 3]| model.frame_at(q)[i];
        let bracket_fd = |i: usize, j: usize| -> [f64; 3] {
            // [X,Y]^k = X(Y^k) − Y(X^k), directional derivatives by central FD.
            let mut out = [0.0; 3];
            let xi = field(i, &p);
            let xj = field(j, &p);
            for k in 0..3 {
                let mut dxj = 0.0;
                let mut dxi = 0.0;
                for a in 0..3 {
                    let mut pp = p;
                    let mut pm = p;
                    pp[a] += h;
                    pm[a] -= h;
                    dxj += xi[a] * (field(j, &pp)[k] - field(j, &pm)[k]) / (2.0 * h);
                    dxi += xj[a] * (field(i, &pp)[k] - field(i, &pm)[k]) / (2.0 * h);
                }
                out[k] = dxj - dxi;
            }
            out
        };
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let got = bracket_fd(i, j);
            let mut ei = [0.0; 3];
            let mut ej = [0.0; 3];
            ei[i] = 1.0;
            ej[j] = 1.0;
            let coeffs = alg.bracket(&ei, &ej);
            // Convert algebra coefficients to coordinate components at p.
            let f = model.frame_at(&p);
            let mut want = [0.0; 3];
            for l in 0..3 {
                for k in 0..3 {
                    want[k] += coeffs[l] * f[l][k];
                }
            }
            for k in 0..3 {
                assert!(
                    (got[k] - want[k]).abs() < 1e-8,
                    "[E{},E{}] component {k}: got {}, want {}",
                    i + 1,
                    j + 1,
                    got[k],
                    want[k]
                );
            }
        }
    }

    #[test]
    fn coordinate_log_rel_inverts_the_flow() {
        let model = GroupModel::fibration(-4.0, 1.0);
        let p = GroupPoint::Coordinate([0.2, -0.1, 0.3]);
        for xi in [[0.04, -0.02, 0.07], [-0.05, 0.01, 0.02], [0.0, 0.06, -0.04]] {
            let q = model.step(&p, &xi, 1.0);
            let back = model.log_rel(&p, &q).unwrap();
            for k in 0..3 {
                assert!((back[k] - xi[k]).abs() < 1e-10, "component {k}: {} vs {}", back[k], xi[k]);
            }
        }
    }

    #[test]
    fn displacement_vanishes_only_at_coincident_points() {
        let model = GroupModel::su12();
        let p = model.step(&model.identity(), &[0.3, 0.1, -0.2], 1.0);
        assert!(model.displacement(&p, &p) < 1e-14);
        // The realified basis matrices have Frobenius norm 2, so a step of
        // algebra size 0.01 displaces by about 0.02 in the matrix log norm.
        let q = model.step(&p, &[0.01, 0.0, 0.0], 1.0);
        let d = model.displacement(&p, &q);
        assert!(d > 0.019 && d < 0.021, "displacement {d}");
    }

    #[test]
    fn matrix_log_rejects_far_elements() {
        let m = Matrix4::identity() * 3.0;
        assert!(matrix_log(&m).is_err());
    }
}
