//! Catalog of three-dimensional Lorentzian homogeneous ambient spaces.
//!
//! Every ambient space handled by this crate is one of:
//!
//! * a **metric Lie group**: a simply connected 3-dimensional Lie group with a
//!   left-invariant Lorentzian metric, described infinitesimally by a
//!   [`LieAlgebra3`] — an orthonormal basis (e₁,e₂,e₃) with signs
//!   ε = (+,+,−) (the third direction timelike), structure constants, and the
//!   Levi-Civita table Γ_ij^k = ⟨∇̄_{e_i} e_j, e_k⟩ obtained from the Koszul
//!   formula
//!
//!   ```text
//!   2⟨∇̄_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩ ;
//!   ```
//!
//! * a **quadric** in a flat 4-dimensional metric space: the unit pseudosphere
//!   of ℝ^{1,3} (positive curvature), the unit pseudohyperbolic space of
//!   ℝ^{2,2} (negative curvature), or the product of a time axis with the
//!   round 2-sphere inside ℝ^{1,3}.
//!
//! The [`SpaceKind`] enum names each supported space; [`catalog`] exports the
//! whole table (the `catalog` CLI verb serializes it as JSON).

mod group;

pub use group::{GroupModel, GroupPoint, LktCoordModel, MatrixModel};

use crate::clifford::{skew_to_bivector, Multivector, Signature, SkewOp};
use serde::{Deserialize, Serialize};

// =============================================================================
// Space kinds
// =============================================================================

/// The ambient homogeneous spaces supported by the library.
///
/// Parameters follow the catalog normal forms: `alpha` and `delta` are the
/// nonzero structure constants of the solvable families, `kappa` is the base
/// curvature and `tau` the bundle torsion of the homogeneous fibrations
/// (`tau != 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceKind {
    /// Flat Minkowski 3-space as the translation group with ⟨,⟩ = dx₁²+dx₂²−dx₃².
    MinkowskiR12,
    /// Solvable family with [e₁,e₂] = α e₂ (timelike center e₃).
    AlgebraA { alpha: f64 },
    /// Solvable family with [e₁,e₃] = α e₁ (spacelike center e₂).
    AlgebraB { alpha: f64 },
    /// Solvable family with [e₁,e₃] = δ e₃ (spacelike center e₂).
    AlgebraC { delta: f64 },
    /// Homogeneous fibration with base curvature κ and torsion τ ≠ 0:
    /// [e₁,e₂] = 2τ e₃, [e₂,e₃] = σ e₁, [e₃,e₁] = σ e₂ with σ = κ/(2τ).
    Lkt { kappa: f64, tau: f64 },
    /// The unit-determinant indefinite unitary group with its bi-invariant-like
    /// left metric: the matrix model of the fibration at (κ,τ) = (−4,1).
    Su12,
    /// Positive-curvature quadric ⟨x,x⟩ = 1 in ℝ^{1,3}.
    DeSitter,
    /// Negative-curvature quadric ⟨x,x⟩ = −1 in ℝ^{2,2}.
    AntiDeSitterQuadric,
    /// Product of a negated time axis with the unit 2-sphere in ℝ^{1,3}.
    ProductRminusS2,
    /// Product metric on the hyperbolic-plane family (group model = AlgebraA).
    ProductH2xR { alpha: f64 },
    /// Product metric on the time-axis × de-Sitter-plane family
    /// (group model = AlgebraB).
    ProductRxS12 { alpha: f64 },
    /// Product metric on the time-axis × hyperbolic-plane family
    /// (group model = AlgebraC).
    ProductRxH12 { delta: f64 },
    /// Flat Euclidean 3-space (helper ambient for the minimal-surface
    /// correspondences; not part of the Lorentzian catalog table).
    EuclideanR3,
}

impl SpaceKind {
    /// The metric Lie algebra, for group-backed kinds.
    pub fn algebra(&self) -> Option<LieAlgebra3> {
        match *self {
            SpaceKind::MinkowskiR12 => Some(LieAlgebra3::abelian()),
            SpaceKind::EuclideanR3 => Some(LieAlgebra3::abelian_euclidean()),
            SpaceKind::AlgebraA { alpha } | SpaceKind::ProductH2xR { alpha } => {
                Some(LieAlgebra3::family_a(alpha))
            }
            SpaceKind::AlgebraB { alpha } | SpaceKind::ProductRxS12 { alpha } => {
                Some(LieAlgebra3::family_b(alpha))
            }
            SpaceKind::AlgebraC { delta } | SpaceKind::ProductRxH12 { delta } => {
                Some(LieAlgebra3::family_c(delta))
            }
            SpaceKind::Lkt { kappa, tau } => Some(LieAlgebra3::fibration(kappa, tau)),
            SpaceKind::Su12 => Some(LieAlgebra3::fibration(-4.0, 1.0)),
            SpaceKind::DeSitter | SpaceKind::AntiDeSitterQuadric | SpaceKind::ProductRminusS2 => {
                None
            }
        }
    }

    /// The group integration backend, for group-backed kinds.
    pub fn group_model(&self) -> Option<GroupModel> {
        match *self {
            SpaceKind::MinkowskiR12 | SpaceKind::EuclideanR3 => Some(GroupModel::translation()),
            SpaceKind::AlgebraA { alpha } | SpaceKind::ProductH2xR { alpha } => {
                Some(GroupModel::family_a(alpha))
            }
            SpaceKind::AlgebraB { alpha } | SpaceKind::ProductRxS12 { alpha } => {
                Some(GroupModel::family_b(alpha))
            }
            SpaceKind::AlgebraC { delta } | SpaceKind::ProductRxH12 { delta } => {
                Some(GroupModel::family_c(delta))
            }
            SpaceKind::Su12 => Some(GroupModel::su12()),
            SpaceKind::Lkt { kappa, tau } => Some(GroupModel::fibration(kappa, tau)),
            _ => None,
        }
    }

    /// The quadric data, for quadric-backed kinds.
    pub fn quadric(&self) -> Option<QuadricSpec> {
        match self {
            SpaceKind::DeSitter => {
                Some(QuadricSpec { sig: Signature::cl13(), constraint: QuadricConstraint::Full { level: 1.0 } })
            }
            SpaceKind::AntiDeSitterQuadric => Some(QuadricSpec {
                sig: Signature::cl22(),
                constraint: QuadricConstraint::Full { level: -1.0 },
            }),
            SpaceKind::ProductRminusS2 => Some(QuadricSpec {
                sig: Signature::cl13(),
                constraint: QuadricConstraint::SpatialSphere,
            }),
            _ => None,
        }
    }

    /// Stable lowercase identifier used in file names and reports.
    pub fn tag(&self) -> &'static str {
        match self {
            SpaceKind::MinkowskiR12 => "minkowski_r12",
            SpaceKind::AlgebraA { .. } => "algebra_a",
            SpaceKind::AlgebraB { .. } => "algebra_b",
            SpaceKind::AlgebraC { .. } => "algebra_c",
            SpaceKind::Lkt { .. } => "fibration_kt",
            SpaceKind::Su12 => "su12",
            SpaceKind::DeSitter => "de_sitter",
            SpaceKind::AntiDeSitterQuadric => "anti_de_sitter",
            SpaceKind::ProductRminusS2 => "product_rminus_s2",
            SpaceKind::ProductH2xR { .. } => "product_h2_r",
            SpaceKind::ProductRxS12 { .. } => "product_r_s12",
            SpaceKind::ProductRxH12 { .. } => "product_r_h12",
            SpaceKind::EuclideanR3 => "euclidean_r3",
        }
    }
}

/// Flat ambient data of a quadric kind.
#[derive(Clone, Copy, Debug)]
pub struct QuadricSpec {
    /// Signature of the flat 4-dimensional ambient.
    pub sig: Signature,
    /// The defining constraint.
    pub constraint: QuadricConstraint,
}

/// Which constraint cuts the homogeneous space out of flat 4-space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadricConstraint {
    /// ⟨x,x⟩ = level with the full ambient metric.
    Full { level: f64 },
    /// The spatial part (all coordinates but the first) lies on the unit sphere.
    SpatialSphere,
}

impl QuadricSpec {
    /// Signed violation of the constraint at a point.
    pub fn violation(&self, x: &[f64; 4]) -> f64 {
        match self.constraint {
            QuadricConstraint::Full { level } => self.sig.metric_dot(x, x) - level,
            QuadricConstraint::SpatialSphere => {
                x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - 1.0
            }
        }
    }
}

// =============================================================================
// Metric Lie algebras
// =============================================================================

/// A three-dimensional metric Lie algebra in an orthonormal basis with signs
/// ε = (+,+,−), carrying its structure constants and Levi-Civita table.
#[derive(Clone, Copy, Debug)]
pub struct LieAlgebra3 {
    /// Metric signs of the basis; always (+,+,−) in this catalog.
    pub eps: [f64; 3],
    /// Structure constants: [e_i, e_j] = Σ_k c\[i\]\[j\]\[k\] e_k.
    pub c: [[[f64; 3]; 3]; 3],
    /// Levi-Civita table Γ_ij^k = ⟨∇̄_{e_i} e_j, e_k⟩ from the Koszul formula.
    pub gamma: [[[f64; 3]; 3]; 3],
}

impl LieAlgebra3 {
    /// Builds an algebra from its nonzero brackets `(i, j, k, v)` meaning
    /// [e_i,e_j] += v·e_k (the antisymmetric counterpart is filled in), then
    /// derives the Levi-Civita table by the Koszul formula.
    fn from_brackets(entries: &[(usize, usize, usize, f64)]) -> Self {
        let eps = [1.0, 1.0, -1.0];
        let mut c = [[[0.0; 3]; 3]; 3];
        for &(i, j, k, v) in entries {
            c[i][j][k] += v;
            c[j][i][k] -= v;
        }
        let mut gamma = [[[0.0; 3]; 3]; 3];
        let pair = |a: usize, b: usize, k: usize| -> f64 {
            // ⟨[e_a, e_b], e_k⟩
            c[a][b][k] * eps[k]
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    gamma[i][j][k] = 0.5 * (pair(i, j, k) - pair(j, k, i) + pair(k, i, j));
                }
            }
        }
        LieAlgebra3 { eps, c, gamma }
    }

    /// The abelian algebra of flat Minkowski space.
    pub fn abelian() -> Self {
        Self::from_brackets(&[])
    }

    /// The abelian algebra with a Euclidean metric (signs (+,+,+)).
    pub fn abelian_euclidean() -> Self {
        let mut alg = Self::from_brackets(&[]);
        alg.eps = [1.0, 1.0, 1.0];
        alg
    }

    /// [e₁,e₂] = α e₂ (indices are 1-based in formulas, 0-based in storage).
    pub fn family_a(alpha: f64) -> Self {
        Self::from_brackets(&[(0, 1, 1, alpha)])
    }

    /// [e₁,e₃] = α e₁.
    pub fn family_b(alpha: f64) -> Self {
        Self::from_brackets(&[(0, 2, 0, alpha)])
    }

    /// [e₁,e₃] = δ e₃.
    pub fn family_c(delta: f64) -> Self {
        Self::from_brackets(&[(0, 2, 2, delta)])
    }

    /// The homogeneous fibration family: [e₁,e₂] = 2τ e₃, [e₂,e₃] = σ e₁,
    /// [e₃,e₁] = σ e₂ with σ = κ/(2τ). Requires τ ≠ 0.
    pub fn fibration(kappa: f64, tau: f64) -> Self {
        assert!(tau != 0.0, "the fibration family needs tau != 0");
        let sigma = kappa / (2.0 * tau);
        Self::from_brackets(&[(0, 1, 2, 2.0 * tau), (1, 2, 0, sigma), (2, 0, 1, sigma)])
    }

    /// Lie bracket of coordinate vectors.
    pub fn bracket(&self, x: &[f64; 3], y: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[k] += self.c[i][j][k] * x[i] * y[j];
                }
            }
        }
        out
    }

    /// Metric pairing Σ ε_i x_i y_i.
    pub fn dot(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        (0..3).map(|i| self.eps[i] * x[i] * y[i]).sum()
    }

    /// Levi-Civita derivative ∇̄_x y of coordinate vectors:
    /// ∇̄_{e_i} e_j = Σ_k ε_k Γ_ij^k e_k, extended bilinearly.
    pub fn nabla(&self, x: &[f64; 3], y: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[k] += self.eps[k] * self.gamma[i][j][k] * x[i] * y[j];
                }
            }
        }
        out
    }

    /// ∇̄_x as a metric-skew operator on the algebra.
    pub fn connection_op(&self, x: &[f64; 3]) -> SkewOp {
        SkewOp::from_fn(3, |i, j| {
            let mut ej = [0.0; 3];
            ej[j] = 1.0;
            self.nabla(x, &ej)[i]
        })
    }

    /// The connection bivector Γ(x) in the Lie-ordered Cl(1,2) signature
    /// (+,+,−): the bivector of the metric-skew operator ∇̄_x, so that the
    /// spinor derivative of a left-invariant-frame field carries the term
    /// ½ Γ(x)·φ.
    pub fn connection_bivector(&self, x: &[f64; 3]) -> Multivector {
        skew_to_bivector(Signature::lie_order(), &self.connection_op(x))
    }

    /// Largest Jacobi-identity violation over the basis.
    pub fn jacobi_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut e = [[0.0; 3]; 3];
                    for (idx, row) in e.iter_mut().enumerate().take(3) {
                        row[idx] = 1.0;
                    }
                    let a = self.bracket(&e[i], &self.bracket(&e[j], &e[k]));
                    let b = self.bracket(&e[j], &self.bracket(&e[k], &e[i]));
                    let c = self.bracket(&e[k], &self.bracket(&e[i], &e[j]));
                    for l in 0..3 {
                        worst = worst.max((a[l] + b[l] + c[l]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest torsion violation ∇̄_x y − ∇̄_y x − [x,y] over the basis.
    pub fn torsion_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let basis: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                let t = self.nabla(&basis[i], &basis[j]);
                let s = self.nabla(&basis[j], &basis[i]);
                let b = self.bracket(&basis[i], &basis[j]);
                for k in 0..3 {
                    worst = worst.max((t[k] - s[k] - b[k]).abs());
                }
            }
        }
        worst
    }

    /// Largest metric-compatibility violation ⟨∇̄_i e_j, e_k⟩ + ⟨e_j, ∇̄_i e_k⟩
    /// over the basis (equivalently Γ_ij^k + Γ_ik^j).
    pub fn metric_compat_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    worst = worst.max((self.gamma[i][j][k] + self.gamma[i][k][j]).abs());
                }
            }
        }
        worst
    }
}

// =============================================================================
// Catalog export
// =============================================================================

/// One serializable catalog row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// The space, with its default parameters.
    pub space: SpaceKind,
    /// Stable identifier.
    pub tag: String,
    /// Metric signs of the invariant frame (group kinds) or of the flat
    /// ambient (quadric kinds).
    pub eps: Vec<f64>,
    /// Nonzero structure constants as (i, j, k, value) for [e_i,e_j] = Σ v e_k,
    /// listed with i < j, 0-based, sorted. Empty for quadric kinds.
    pub brackets: Vec<(usize, usize, usize, f64)>,
    /// Nonzero Levi-Civita entries as (i, j, k, Γ_ij^k), sorted.
    /// Empty for quadric kinds (their flat ambients have Γ = 0).
    pub gamma: Vec<(usize, usize, usize, f64)>,
    /// Whether a group integration backend exists (false = quadric formulas).
    pub has_group_model: bool,
    /// Human-readable description.
    pub notes: String,
}

/// The space catalog with default parameters, in deterministic order.
pub fn catalog() -> Vec<CatalogEntry> {
    let defaults: Vec<(SpaceKind, &str)> = vec![
        (SpaceKind::MinkowskiR12, "flat Minkowski 3-space; abelian translation group"),
        (SpaceKind::AlgebraA { alpha: 1.0 }, "solvable family [e1,e2] = alpha e2; timelike center e3"),
        (SpaceKind::AlgebraB { alpha: 1.0 }, "solvable family [e1,e3] = alpha e1; spacelike center e2"),
        (SpaceKind::AlgebraC { delta: 1.0 }, "solvable family [e1,e3] = delta e3; spacelike center e2"),
        (
            SpaceKind::Lkt { kappa: 2.0, tau: 1.0 },
            "homogeneous fibration over curvature-kappa base with torsion tau; coordinate model",
        ),
        (
            SpaceKind::Su12,
            "indefinite unitary matrix group; fibration at (kappa,tau) = (-4,1)",
        ),
        (SpaceKind::DeSitter, "positive-curvature quadric <x,x> = 1 in R^{1,3}"),
        (SpaceKind::AntiDeSitterQuadric, "negative-curvature quadric <x,x> = -1 in R^{2,2}"),
        (SpaceKind::ProductRminusS2, "negated time axis times the unit 2-sphere in R^{1,3}"),
        (SpaceKind::ProductH2xR { alpha: 1.0 }, "product metric carried by the AlgebraA group model"),
        (SpaceKind::ProductRxS12 { alpha: 1.0 }, "product metric carried by the AlgebraB group model"),
        (SpaceKind::ProductRxH12 { delta: 1.0 }, "product metric carried by the AlgebraC group model"),
    ];
    defaults
        .into_iter()
        .map(|(space, notes)| {
            let (eps, brackets, gamma) = match space.algebra() {
                Some(alg) => {
                    let mut br = Vec::new();
                    let mut ga = Vec::new();
                    for i in 0..3 {
                        for j in 0..3 {
                            for k in 0..3 {
                                if i < j && alg.c[i][j][k] != 0.0 {
                                    br.push((i, j, k, alg.c[i][j][k]));
                                }
                                if alg.gamma[i][j][k] != 0.0 {
                                    ga.push((i, j, k, alg.gamma[i][j][k]));
                                }
                            }
                        }
                    }
                    (alg.eps.to_vec(), br, ga)
                }
                None => {
                    let sig = space.quadric().expect("non-group kinds are quadrics").sig;
                    ((0..sig.dim()).map(|i| sig.eps(i)).collect(), Vec::new(), Vec::new())
                }
            };
            CatalogEntry {
                tag: space.tag().to_string(),
                space,
                eps,
                brackets,
                gamma,
                has_group_model: space.group_model().is_some(),
                notes: notes.to_string(),
            }
        })
        .collect()
}

// =============================================================================
// Unit tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::ALGEBRA_EXACT;

    fn assert_nabla(alg: &LieAlgebra3, i: usize, j: usize, want: [f64; 3]) {
        let mut x = [0.0; 3];
        let mut y = [0.0; 3];
        x[i] = 1.0;
        y[j] = 1.0;
        let got = alg.nabla(&x, &y);
        for k in 0..3 {
            assert!(
                (got[k] - want[k]).abs() < ALGEBRA_EXACT,
                "nabla(e{}, e{}) component {k}: got {}, want {}",
                i + 1,
                j + 1,
                got[k],
                want[k]
            );
        }
    }

    #[test]
    fn all_catalog_algebras_satisfy_the_structure_identities() {
        for entry in catalog() {
            if let Some(alg) = entry.space.algebra() {
                assert!(alg.jacobi_defect() < ALGEBRA_EXACT, "{}: jacobi", entry.tag);
                assert!(alg.torsion_defect() < ALGEBRA_EXACT, "{}: torsion", entry.tag);
                assert!(alg.metric_compat_defect() < ALGEBRA_EXACT, "{}: metric compat", entry.tag);
            }
        }
        // Parameterized sweep, including sign changes.
        for p in [-2.0, -0.5, 0.7, 3.0] {
            for alg in [
                LieAlgebra3::family_a(p),
                LieAlgebra3::family_b(p),
                LieAlgebra3::family_c(p),
                LieAlgebra3::fibration(p, 1.3),
                LieAlgebra3::fibration(-4.0, p),
            ] {
                assert!(alg.jacobi_defect() < ALGEBRA_EXACT);
                assert!(alg.torsion_defect() < ALGEBRA_EXACT);
                assert!(alg.metric_compat_defect() < ALGEBRA_EXACT);
            }
        }
    }

    #[test]
    fn family_a_connection_table() {
        let alpha = 1.7;
        let alg = LieAlgebra3::family_a(alpha);
        assert_nabla(&alg, 1, 0, [0.0, -alpha, 0.0]); // ∇̄_{e2} e1 = −α e2
        assert_nabla(&alg, 1, 1, [alpha, 0.0, 0.0]); // ∇̄_{e2} e2 = α e1
        for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)] {
            assert_nabla(&alg, i, j, [0.0; 3]);
        }
    }

    #[test]
    fn family_b_connection_table() {
        let alpha = -0.8;
        let alg = LieAlgebra3::family_b(alpha);
        assert_nabla(&alg, 0, 0, [0.0, 0.0, alpha]); // ∇̄_{e1} e1 = α e3
        assert_nabla(&alg, 0, 2, [alpha, 0.0, 0.0]); // ∇̄_{e1} e3 = α e1
        for (i, j) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)] {
            assert_nabla(&alg, i, j, [0.0; 3]);
        }
    }

    #[test]
    fn family_c_connection_table() {
        let delta = 2.3;
        let alg = LieAlgebra3::family_c(delta);
        assert_nabla(&alg, 2, 0, [0.0, 0.0, -delta]); // ∇̄_{e3} e1 = −δ e3
        assert_nabla(&alg, 2, 2, [-delta, 0.0, 0.0]); // ∇̄_{e3} e3 = −δ e1
        for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 1)] {
            assert_nabla(&alg, i, j, [0.0; 3]);
        }
    }

    #[test]
    fn fibration_connection_table() {
        let (kappa, tau) = (2.0, 0.7);
        let sigma = kappa / (2.0 * tau);
        let alg = LieAlgebra3::fibration(kappa, tau);
        // Γ_21^3 = τ, Γ_13^2 = τ, Γ_12^3 = −τ, Γ_23^1 = −τ, Γ_31^2 = σ+τ, Γ_32^1 = −(σ+τ).
        assert!((alg.gamma[1][0][2] - tau).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[0][2][1] - tau).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[0][1][2] + tau).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[1][2][0] + tau).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[2][0][1] - (sigma + tau)).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[2][1][0] + (sigma + tau)).abs() < ALGEBRA_EXACT);
        // As operators.
        assert_nabla(&alg, 0, 1, [0.0, 0.0, tau]); // ∇̄_{e1} e2 = τ e3 (ε3 Γ = (−1)(−τ))
        assert_nabla(&alg, 0, 2, [0.0, tau, 0.0]); // ∇̄_{e1} e3 = τ e2
        assert_nabla(&alg, 1, 0, [0.0, 0.0, -tau]);
        assert_nabla(&alg, 1, 2, [-tau, 0.0, 0.0]);
        assert_nabla(&alg, 2, 0, [0.0, sigma + tau, 0.0]);
        assert_nabla(&alg, 2, 1, [-(sigma + tau), 0.0, 0.0]);
        for i in 0..3 {
            assert_nabla(&alg, i, i, [0.0; 3]);
        }
    }

    #[test]
    fn vertical_gamma_collapses_at_the_matrix_group_parameters() {
        // At (κ,τ) = (−4,1): σ = −2, so σ+τ = −τ and the vertical connection
        // coefficient matches the horizontal one up to sign; equivalently
        // σ + 2τ = 0 and Γ(x) = τ·(rotation by x₃) pattern degenerates.
        let alg = LieAlgebra3::fibration(-4.0, 1.0);
        let sigma = -2.0;
        assert_eq!(sigma + 2.0 * 1.0, 0.0);
        assert!((alg.gamma[2][0][1] - (sigma + 1.0)).abs() < ALGEBRA_EXACT);
        assert!((alg.gamma[2][0][1] + 1.0).abs() < ALGEBRA_EXACT);
    }

    #[test]
    fn connection_bivectors_of_the_fibration() {
        // Γ(e1) = τ e2e3, Γ(e2) = −τ e1e3, Γ(e3) = (σ+τ) e1e2.
        let (kappa, tau) = (1.0, 0.9);
        let sigma = kappa / (2.0 * tau);
        let alg = LieAlgebra3::fibration(kappa, tau);
        let sig = Signature::lie_order();
        let b1 = alg.connection_bivector(&[1.0, 0.0, 0.0]);
        assert!((b1 - Multivector::basis_blade(sig, 0b110) * tau).coeff_norm() < ALGEBRA_EXACT);
        let b2 = alg.connection_bivector(&[0.0, 1.0, 0.0]);
        assert!((b2 - Multivector::basis_blade(sig, 0b101) * -tau).coeff_norm() < ALGEBRA_EXACT);
        let b3 = alg.connection_bivector(&[0.0, 0.0, 1.0]);
        assert!(
            (b3 - Multivector::basis_blade(sig, 0b011) * (sigma + tau)).coeff_norm() < ALGEBRA_EXACT
        );
    }

    #[test]
    fn connection_bivector_reproduces_connection_operator() {
        use crate::clifford::bivector_to_skew;
        let alg = LieAlgebra3::family_b(1.4);
        let x = [0.3, -1.0, 0.8];
        let op = alg.connection_op(&x);
        assert!(op.skew_defect(Signature::lie_order()) < ALGEBRA_EXACT);
        let b = alg.connection_bivector(&x);
        let back = bivector_to_skew(Signature::lie_order(), &b);
        for i in 0..3 {
            for j in 0..3 {
                assert!((back.a[i][j] - op.a[i][j]).abs() < ALGEBRA_EXACT);
            }
        }
    }

    #[test]
    fn quadric_constraints_evaluate() {
        let ds = SpaceKind::DeSitter.quadric().unwrap();
        assert_eq!(ds.violation(&[0.0, 1.0, 0.0, 0.0]), 0.0);
        assert_eq!(ds.violation(&[1.0, 0.0, 0.0, 0.0]), -2.0); // timelike axis
        let ads = SpaceKind::AntiDeSitterQuadric.quadric().unwrap();
        assert_eq!(ads.violation(&[1.0, 0.0, 0.0, 0.0]), 0.0);
        let prod = SpaceKind::ProductRminusS2.quadric().unwrap();
        assert_eq!(prod.violation(&[7.5, 0.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn catalog_rows_are_complete_and_stable() {
        let rows = catalog();
        assert_eq!(rows.len(), 12);
        let tags: Vec<&str> = rows.iter().map(|r| r.tag.as_str()).collect();
        assert_eq!(tags[0], "minkowski_r12");
        assert!(rows.iter().all(|r| !r.notes.is_empty()));
        // Serialization must be deterministic.
        let a = serde_json::to_string(&rows).unwrap();
        let b = serde_json::to_string(&catalog()).unwrap();
        assert_eq!(a, b);
    }
}
