//! Intrinsic spinor models over surfaces.
//!
//! Spinor *fields* on a two-dimensional chart take values in the even
//! subalgebra of a rank-3 Clifford algebra. Three such models occur:
//!
//! * **Riemannian** — spacelike surfaces in a Lorentzian ambient; values in
//!   even Cl(1,2) (canonical order −,+,+), tangent frame slots e₁,e₂, normal
//!   slot e₀. A tangent vector Y acts by u ↦ e₀·Y·u·(−e₁e₂) and the complex
//!   structure i acts by right multiplication with −e₁e₂.
//! * **Lorentzian** — timelike surfaces; values in even Cl(1,2), frame slots
//!   (spacelike → e₁, timelike → e₀), normal slot e₂; a tangent vector acts by
//!   u ↦ Y·e₂·u. This model is real: no i action is defined.
//! * **Euclidean** — surfaces in Euclidean 3-space (the minimal-surface side
//!   of the conformal correspondence); values in even Cl(0,3), tangent slots
//!   e₀,e₁, normal slot e₂, action u ↦ Y·e₂·u, i = right multiplication by
//!   −e₀e₁.
//!
//! All three even subalgebras are quaternion algebras; [`even_to_quat`] fixes
//! one quaternion coordinate system (q₀,q₁,q₂,q₃) per model such that the
//! derived structures — the splitting ψ± = ½(ψ ± i ê₁ê₂ ψ), the indicator
//! q₀²+q₁²−q₂²−q₃², the Hermitian product, and the quaternionic structure α —
//! have the *same* coordinate formulas in every model. The conformal
//! correspondence between the Euclidean and Riemannian models is then the
//! identity on quaternion coordinates.

use super::{Multivector, Signature};

/// Complex number as (re, im); kept as a plain tuple to avoid pulling a
/// dependency for the handful of complex products used here.
pub type C64 = (f64, f64);

/// Which intrinsic even-subalgebra model a spinor value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntrinsicKind {
    /// Spacelike surface in a Lorentzian ambient: even Cl(1,2), frame ε̂ = (+,+).
    Riemannian,
    /// Timelike surface in a Lorentzian ambient: even Cl(1,2), frame ε̂ = (+,−),
    /// frame order (spacelike, timelike).
    Lorentzian,
    /// Surface in Euclidean 3-space: even Cl(0,3), frame ε̂ = (+,+).
    Euclidean,
}

/// Convenience alias kept public because several signatures mention it.
pub type EvenModel = IntrinsicKind;

impl IntrinsicKind {
    /// The ambient Clifford signature whose even part hosts the spinors.
    pub fn sig(self) -> Signature {
        match self {
            IntrinsicKind::Riemannian | IntrinsicKind::Lorentzian => Signature::cl12(),
            IntrinsicKind::Euclidean => Signature::cl03(),
        }
    }

    /// Frame metric signs (ε̂₁, ε̂₂) of an orthonormal tangent frame in this model.
    pub fn frame_eps(self) -> [f64; 2] {
        match self {
            IntrinsicKind::Lorentzian => [1.0, -1.0],
            _ => [1.0, 1.0],
        }
    }

    /// Whether the model carries the complex structure [`IntrinsicKind::act_i`].
    pub fn has_complex_structure(self) -> bool {
        !matches!(self, IntrinsicKind::Lorentzian)
    }

    /// The two ambient basis indices playing the tangent-frame slots.
    fn tangent_slots(self) -> (usize, usize) {
        match self {
            IntrinsicKind::Riemannian => (1, 2),
            IntrinsicKind::Lorentzian => (1, 0), // (spacelike, timelike)
            IntrinsicKind::Euclidean => (0, 1),
        }
    }

    /// Clifford action of a tangent vector with frame components `y` on an
    /// even spinor value `u`.
    pub fn act_tangent(self, y: [f64; 2], u: &Multivector) -> Multivector {
        let sig = self.sig();
        debug_assert_eq!(u.sig(), sig);
        let (s1, s2) = self.tangent_slots();
        let mut comps = [0.0; 4];
        comps[s1] = y[0];
        comps[s2] = y[1];
        let yv = Multivector::vector(sig, &comps);
        match self {
            IntrinsicKind::Riemannian => {
                // e0 · Y · u · (−e1e2)
                let e0 = Multivector::basis_vector(sig, 0);
                let neg_e12 = Multivector::basis_blade(sig, 0b110) * -1.0;
                e0.gp(&yv).gp(u).gp(&neg_e12)
            }
            IntrinsicKind::Lorentzian | IntrinsicKind::Euclidean => {
                // Y · e2 · u
                let e2 = Multivector::basis_vector(sig, 2);
                yv.gp(&e2).gp(u)
            }
        }
    }

    /// The complex structure: i·u. Right multiplication commutes with every
    /// tangent action, so this is ℂ-linear structure on the spinor bundle.
    ///
    /// # Panics
    ///
    /// On the Lorentzian model, which is real.
    pub fn act_i(self, u: &Multivector) -> Multivector {
        let sig = self.sig();
        match self {
            IntrinsicKind::Riemannian => u.gp(&(Multivector::basis_blade(sig, 0b110) * -1.0)),
            IntrinsicKind::Euclidean => u.gp(&(Multivector::basis_blade(sig, 0b011) * -1.0)),
            IntrinsicKind::Lorentzian => {
                panic!("the Lorentzian intrinsic model carries no complex structure")
            }
        }
    }

    /// Action of the frame area bivector ê₁·ê₂, computed by composing the two
    /// tangent actions (no shortcut formula, so it stays correct by
    /// construction if slot conventions change).
    pub fn act_omega(self, u: &Multivector) -> Multivector {
        self.act_tangent([1.0, 0.0], &self.act_tangent([0.0, 1.0], u))
    }

    /// The conjugation ψ ↦ i·ê₁ê₂·ψ whose ±1 eigenspaces define the splitting
    /// ψ = ψ⁺ + ψ⁻. Models with a complex structure only.
    pub fn conj_bar(self, u: &Multivector) -> Multivector {
        self.act_i(&self.act_omega(u))
    }

    /// The splitting ψ± = ½(ψ ± i ê₁ê₂ ψ).
    pub fn split_pm(self, u: &Multivector) -> (Multivector, Multivector) {
        let bar = self.conj_bar(u);
        ((*u + bar) * 0.5, (*u - bar) * 0.5)
    }

    /// |ψ⁺|² − |ψ⁻|² = q₀² + q₁² − q₂² − q₃². On even Cl(1,2) this equals the
    /// scalar part of τ(u)·u.
    pub fn indicator(self, u: &Multivector) -> f64 {
        let q = even_to_quat(self, u);
        q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - q[3] * q[3]
    }

    /// |ψ⁺|² + |ψ⁻|² = Σ qᵢ²: the positive-definite Hermitian norm square.
    pub fn norm_sq(self, u: &Multivector) -> f64 {
        let q = even_to_quat(self, u);
        q.iter().map(|x| x * x).sum()
    }

    /// The quaternionic structure α (right multiplication by the second
    /// quaternion unit): anticommutes with i, α² = −1, and preserves the
    /// Hermitian norm.
    pub fn alpha_structure(self, u: &Multivector) -> Multivector {
        let q = even_to_quat(self, u);
        quat_to_even(self, [-q[2], -q[3], q[0], q[1]])
    }
}

// =============================================================================
// Quaternion coordinates
// =============================================================================

/// Quaternion coordinates (q₀,q₁,q₂,q₃) of an even element, in the basis
/// (1, I, J, K) of the model's even subalgebra:
///
/// * even Cl(1,2): (I, J, K) = (−e₁e₂, e₀e₂, e₀e₁),
/// * even Cl(0,3): (I, J, K) = (−e₀e₁, e₀e₂, −e₁e₂).
///
/// Both satisfy I·J = K with the geometric product, and the models' complex
/// structures are right multiplication by I in these coordinates, so every
/// coordinate-level formula is model-independent.
pub fn even_to_quat(kind: IntrinsicKind, u: &Multivector) -> [f64; 4] {
    debug_assert!(
        u.odd_magnitude() < 1e-9 * (1.0 + u.coeff_norm()),
        "spinor values must be even"
    );
    match kind {
        IntrinsicKind::Riemannian | IntrinsicKind::Lorentzian => {
            [u.coeff(0), -u.coeff(0b110), u.coeff(0b101), u.coeff(0b011)]
        }
        IntrinsicKind::Euclidean => {
            [u.coeff(0), -u.coeff(0b011), u.coeff(0b101), -u.coeff(0b110)]
        }
    }
}

/// Inverse of [`even_to_quat`].
pub fn quat_to_even(kind: IntrinsicKind, q: [f64; 4]) -> Multivector {
    let sig = kind.sig();
    let mut m = Multivector::zero(sig);
    match kind {
        IntrinsicKind::Riemannian | IntrinsicKind::Lorentzian => {
            *m.coeff_mut(0) = q[0];
            *m.coeff_mut(0b110) = -q[1];
            *m.coeff_mut(0b101) = q[2];
            *m.coeff_mut(0b011) = q[3];
        }
        IntrinsicKind::Euclidean => {
            *m.coeff_mut(0) = q[0];
            *m.coeff_mut(0b011) = -q[1];
            *m.coeff_mut(0b101) = q[2];
            *m.coeff_mut(0b110) = -q[3];
        }
    }
    m
}

/// Hermitian product ⟨u,v⟩ = z₊(u)·conj(z₊(v)) + w(u)·conj(w(v)), with the
/// complex coordinates z₊ = q₀ + i q₁ and w = q₂ − i q₃ (both ℂ-linear for the
/// right-I complex structure). Conjugate linear in the second argument;
/// ⟨u,u⟩ = |ψ⁺|² + |ψ⁻|².
pub fn herm_product(kind: IntrinsicKind, u: &Multivector, v: &Multivector) -> C64 {
    let a = even_to_quat(kind, u);
    let b = even_to_quat(kind, v);
    // (a0 + i a1)(b0 − i b1) + (a2 − i a3)(b2 + i b3)
    let re = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    let im = a[1] * b[0] - a[0] * b[1] + a[2] * b[3] - a[3] * b[2];
    (re, im)
}

// =============================================================================
// Unit tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::ALGEBRA_EXACT;

    const KINDS: [IntrinsicKind; 3] =
        [IntrinsicKind::Riemannian, IntrinsicKind::Lorentzian, IntrinsicKind::Euclidean];

    fn sample(kind: IntrinsicKind) -> Multivector {
        quat_to_even(kind, [0.3, -1.1, 0.7, 0.25])
    }

    #[test]
    fn euclidean_quat_chart_is_an_algebra_isomorphism() {
        // Even Cl(0,3) is the genuine quaternion algebra and the coordinate
        // chart respects its product. (Even Cl(1,2) is the split quaternions;
        // its chart is a linear identification only, so no such law there.)
        let kind = IntrinsicKind::Euclidean;
        let i = quat_to_even(kind, [0.0, 1.0, 0.0, 0.0]);
        let j = quat_to_even(kind, [0.0, 0.0, 1.0, 0.0]);
        let k = quat_to_even(kind, [0.0, 0.0, 0.0, 1.0]);
        assert!((i.gp(&j) - k).coeff_norm() < ALGEBRA_EXACT, "I·J = K");
        assert!((j.gp(&k) - i).coeff_norm() < ALGEBRA_EXACT, "J·K = I");
        assert!((k.gp(&i) - j).coeff_norm() < ALGEBRA_EXACT, "K·I = J");
        for unit in [i, j, k] {
            assert!((unit.gp(&unit) + Multivector::one(kind.sig())).coeff_norm() < ALGEBRA_EXACT);
        }
    }

    #[test]
    fn split_quaternion_squares_in_even_cl12() {
        // The even Cl(1,2) basis bivectors square to (+1, +1, −1): the chart
        // is a coordinate identification, not an algebra map.
        let sig = IntrinsicKind::Riemannian.sig();
        for (mask, want) in [(0b011usize, 1.0), (0b101usize, 1.0), (0b110usize, -1.0)] {
            let b = Multivector::basis_blade(sig, mask);
            assert!((b.gp(&b).scalar_part() - want).abs() < ALGEBRA_EXACT);
        }
    }

    #[test]
    fn quat_coords_round_trip() {
        for kind in KINDS {
            let q = [0.5, -2.0, 0.125, 3.0];
            let u = quat_to_even(kind, q);
            assert_eq!(even_to_quat(kind, &u), q);
        }
    }

    #[test]
    fn tangent_action_satisfies_clifford_relation() {
        // X∙(X∙u) = −⟨X,X⟩·u with the frame metric of the model.
        for kind in KINDS {
            let eps = kind.frame_eps();
            let u = sample(kind);
            for y in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8], [1.3, 0.4]] {
                let yy = eps[0] * y[0] * y[0] + eps[1] * y[1] * y[1];
                let twice = kind.act_tangent(y, &kind.act_tangent(y, &u));
                let want = u * (-yy);
                assert!(
                    (twice - want).coeff_norm() < ALGEBRA_EXACT,
                    "{kind:?}: tangent action must square to −|X|²"
                );
            }
        }
    }

    #[test]
    fn tangent_action_preserves_evenness() {
        for kind in KINDS {
            let u = sample(kind);
            let v = kind.act_tangent([0.7, -0.2], &u);
            assert!(v.odd_magnitude() < ALGEBRA_EXACT);
        }
    }

    #[test]
    fn complex_structure_commutes_with_tangent_action() {
        for kind in [IntrinsicKind::Riemannian, IntrinsicKind::Euclidean] {
            let u = sample(kind);
            let lhs = kind.act_i(&kind.act_tangent([0.4, 1.1], &u));
            let rhs = kind.act_tangent([0.4, 1.1], &kind.act_i(&u));
            assert!((lhs - rhs).coeff_norm() < ALGEBRA_EXACT);
            let ii = kind.act_i(&kind.act_i(&u));
            assert!((ii + u).coeff_norm() < ALGEBRA_EXACT, "i² = −1");
        }
    }

    #[test]
    fn act_i_is_right_multiplication_by_quat_i() {
        for kind in [IntrinsicKind::Riemannian, IntrinsicKind::Euclidean] {
            let u = sample(kind);
            let i_unit = quat_to_even(kind, [0.0, 1.0, 0.0, 0.0]);
            let d = kind.act_i(&u) - u.gp(&i_unit);
            assert!(d.coeff_norm() < ALGEBRA_EXACT);
        }
    }

    #[test]
    fn omega_action_riemannian_is_left_e12() {
        let kind = IntrinsicKind::Riemannian;
        let u = sample(kind);
        let direct = Multivector::basis_blade(kind.sig(), 0b110).gp(&u);
        assert!((kind.act_omega(&u) - direct).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn split_projects_and_indicator_matches_reversal_pairing() {
        for kind in [IntrinsicKind::Riemannian, IntrinsicKind::Euclidean] {
            let u = sample(kind);
            let (p, m) = kind.split_pm(&u);
            assert!((p + m - u).coeff_norm() < ALGEBRA_EXACT);
            // ψ± are the ±1 eigenvectors of the conjugation.
            assert!((kind.conj_bar(&p) - p).coeff_norm() < ALGEBRA_EXACT);
            assert!((kind.conj_bar(&m) + m).coeff_norm() < ALGEBRA_EXACT);
            let ind = kind.indicator(&u);
            let via_split = kind.norm_sq(&p) - kind.norm_sq(&m);
            assert!((ind - via_split).abs() < ALGEBRA_EXACT);
        }
        // On even Cl(1,2) the indicator is the scalar of τ(u)·u.
        let kind = IntrinsicKind::Riemannian;
        let u = sample(kind);
        let tuu = u.reversal().gp(&u);
        assert!((tuu.scalar_part() - kind.indicator(&u)).abs() < ALGEBRA_EXACT);
        assert!(tuu.off_grade_magnitude(0) < ALGEBRA_EXACT, "τ(u)u is a pure scalar on evens");
    }

    #[test]
    fn hermitian_product_conventions() {
        for kind in [IntrinsicKind::Riemannian, IntrinsicKind::Euclidean] {
            let u = sample(kind);
            let v = quat_to_even(kind, [1.0, 0.2, -0.4, 0.9]);
            let (re_uu, im_uu) = herm_product(kind, &u, &u);
            assert!((re_uu - kind.norm_sq(&u)).abs() < ALGEBRA_EXACT);
            assert!(im_uu.abs() < ALGEBRA_EXACT);
            // ⟨i·u, v⟩ = i⟨u,v⟩ and ⟨u, i·v⟩ = −i⟨u,v⟩.
            let (re, im) = herm_product(kind, &u, &v);
            let (re_l, im_l) = herm_product(kind, &kind.act_i(&u), &v);
            assert!((re_l + im).abs() < ALGEBRA_EXACT && (im_l - re).abs() < ALGEBRA_EXACT);
            let (re_r, im_r) = herm_product(kind, &u, &kind.act_i(&v));
            assert!((re_r - im).abs() < ALGEBRA_EXACT && (im_r + re).abs() < ALGEBRA_EXACT);
        }
    }

    #[test]
    fn alpha_is_antilinear_isometry_squaring_to_minus_one() {
        for kind in [IntrinsicKind::Riemannian, IntrinsicKind::Euclidean] {
            let u = sample(kind);
            let au = kind.alpha_structure(&u);
            assert!((kind.norm_sq(&au) - kind.norm_sq(&u)).abs() < ALGEBRA_EXACT);
            let aau = kind.alpha_structure(&au);
            assert!((aau + u).coeff_norm() < ALGEBRA_EXACT, "α² = −1");
            // α ∘ i = −i ∘ α (antilinearity).
            let lhs = kind.alpha_structure(&kind.act_i(&u));
            let rhs = kind.act_i(&kind.alpha_structure(&u)) * -1.0;
            assert!((lhs - rhs).coeff_norm() < ALGEBRA_EXACT);
        }
        // Where the chart is an algebra isomorphism (Euclidean model), α is
        // honest right multiplication by the J unit.
        let kind = IntrinsicKind::Euclidean;
        let u = sample(kind);
        let j_unit = quat_to_even(kind, [0.0, 0.0, 1.0, 0.0]);
        assert!((kind.alpha_structure(&u) - u.gp(&j_unit)).coeff_norm() < ALGEBRA_EXACT);
    }
}
