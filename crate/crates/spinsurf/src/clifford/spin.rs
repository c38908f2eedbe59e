//! Spin group helpers: adjoint action, membership checks, the correspondence
//! between metric-skew operators and bivectors, and the construction of a
//! rotor realizing a given special-orthochronous frame.
//!
//! The key correspondence: for a metric-skew operator u on (ℝⁿ, ε) the
//! bivector
//!
//! ```text
//! u̲ = ½ Σ_j ε_j e_j · u(e_j)
//! ```
//!
//! satisfies [u̲, ξ] = u(ξ) for every vector ξ, where [a,b] = ½(ab − ba).
//! Since Ad(exp(b)) acts on vectors as the exponential of the *full*
//! commutator, Ad(exp(u̲)) = exp(2u): the rotor realizing the rotation exp(u)
//! is exp(u̲/2). This half factor is how frames lift to the spin group.

use super::{Multivector, Signature, MAX_DIM};
use crate::error::{Error, Result};

/// A linear operator on the metric vector space (ℝⁿ, ε), stored column-wise:
/// `a[i][j]` is the e_i-component of the image of e_j.
#[derive(Clone, Copy, Debug)]
pub struct SkewOp {
    /// Generator count of the underlying space.
    pub n: usize,
    /// Column-major entries: image of e_j is Σ_i a\[i\]\[j\] e_i.
    pub a: [[f64; MAX_DIM]; MAX_DIM],
}

impl SkewOp {
    /// The zero operator.
    pub fn zeros(n: usize) -> Self {
        SkewOp { n, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    /// Builds from a closure giving matrix entries (i = row, j = column).
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut op = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                op.a[i][j] = f(i, j);
            }
        }
        op
    }

    /// Applies the operator to a coordinate vector.
    pub fn apply(&self, x: &[f64; MAX_DIM]) -> [f64; MAX_DIM] {
        let mut y = [0.0; MAX_DIM];
        for i in 0..self.n {
            for j in 0..self.n {
                y[i] += self.a[i][j] * x[j];
            }
        }
        y
    }

    /// Largest violation of metric skewness ⟨u(x),y⟩ = −⟨x,u(y)⟩, i.e. of
    /// ε_i a_ij = −ε_j a_ji.
    pub fn skew_defect(&self, sig: Signature) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((sig.eps(i) * self.a[i][j] + sig.eps(j) * self.a[j][i]).abs());
            }
        }
        worst
    }
}

/// Half-commutator [a,b] = ½(a·b − b·a).
pub fn commutator_half(a: &Multivector, b: &Multivector) -> Multivector {
    (a.gp(b) - b.gp(a)) * 0.5
}

/// The bivector u̲ = ½ Σ_j ε_j e_j·u(e_j) of a metric-skew operator.
pub fn skew_to_bivector(sig: Signature, u: &SkewOp) -> Multivector {
    assert_eq!(u.n, sig.dim());
    let mut acc = Multivector::zero(sig);
    for j in 0..sig.dim() {
        let mut col = [0.0; MAX_DIM];
        for i in 0..sig.dim() {
            col[i] = u.a[i][j];
        }
        let img = Multivector::vector(sig, &col);
        acc = acc + Multivector::basis_vector(sig, j).gp(&img) * (0.5 * sig.eps(j));
    }
    // For a metric-skew u the scalar part cancels; drop roundoff junk there so
    // the result is a clean bivector.
    acc.grade_part(2)
}

/// Recovers the operator from its bivector: u(e_j) = [b, e_j].
pub fn bivector_to_skew(sig: Signature, b: &Multivector) -> SkewOp {
    let mut op = SkewOp::zeros(sig.dim());
    for j in 0..sig.dim() {
        let img = commutator_half(b, &Multivector::basis_vector(sig, j));
        let v = img.vector_part();
        for i in 0..sig.dim() {
            op.a[i][j] = v[i];
        }
    }
    op
}

/// Inverse of a spin-group element: g⁻¹ = τ(g)/(τ(g)g)₀. Valid whenever
/// τ(g)·g is a (nonzero) scalar, which holds on the spin group and for the
/// normalized vector factors used by reflections.
pub fn spin_inverse(g: &Multivector) -> Result<Multivector> {
    let r = g.reversal().gp(g);
    let s = r.scalar_part();
    if s.abs() < 1e-13 {
        return Err(Error::DivisionSingularity("spin norm vanished in spin_inverse".into()));
    }
    Ok(g.reversal() * (1.0 / s))
}

/// Adjoint action Ad(g)(x) = g·x·g⁻¹ on an arbitrary element.
pub fn ad_action(g: &Multivector, x: &Multivector) -> Result<Multivector> {
    Ok(g.gp(x).gp(&spin_inverse(g)?))
}

/// Adjoint image of a basis vector as a coordinate vector.
fn ad_basis(g: &Multivector, j: usize) -> Result<[f64; MAX_DIM]> {
    Ok(ad_action(g, &Multivector::basis_vector(g.sig(), j))?.vector_part())
}

/// Spin group membership: even, τ(g)·g = 1, and Ad(g) maps vectors to vectors.
pub fn is_spin(g: &Multivector, tol: f64) -> bool {
    if g.odd_magnitude() > tol {
        return false;
    }
    let r = g.reversal().gp(g);
    if (r.scalar_part() - 1.0).abs() > tol || r.off_grade_magnitude(0) > tol {
        return false;
    }
    for j in 0..g.sig().dim() {
        match ad_action(g, &Multivector::basis_vector(g.sig(), j)) {
            Ok(img) => {
                if img.off_grade_magnitude(1) > tol {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Builds u ∈ Spin with Ad(u)(e_k) = frame\[k\] for a special orthochronous
/// frame (an orthonormal basis reachable from the standard one, i.e. with
/// determinant +1 and preserved time orientation).
///
/// The construction chains hyperplane reflections r_v(x) = x − 2⟨x,v⟩v/⟨v,v⟩:
/// each step aligns one more leg while fixing the already-aligned ones, using
/// r_{a−f} when a−f is non-null and r_f ∘ r_{a+f} otherwise. An even number of
/// reflections v₁,…,v_m always results for a special frame, and
/// u = v_m ⋯ v₁ (each normalized) realizes the frame. Errors if the input is
/// not orthonormal, has determinant −1, or reverses time orientation
/// (τ(u)·u = −1).
pub fn rotor_from_frame(sig: Signature, frame: &[[f64; MAX_DIM]]) -> Result<Multivector> {
    let n = sig.dim();
    if frame.len() != n {
        return Err(Error::invalid(format!("frame must have {n} legs, got {}", frame.len())));
    }
    for k in 0..n {
        for l in k..n {
            let want = if k == l { sig.eps(k) } else { 0.0 };
            let got = sig.metric_dot(&frame[k], &frame[l]);
            if (got - want).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "frame is not orthonormal: <f{k},f{l}> = {got}, want {want}"
                )));
            }
        }
    }

    // Current images of the standard basis under the reflections applied so far.
    let mut imgs: [[f64; MAX_DIM]; MAX_DIM] = [[0.0; MAX_DIM]; MAX_DIM];
    for j in 0..n {
        imgs[j][j] = 1.0;
    }
    let mut mirrors: Vec<[f64; MAX_DIM]> = Vec::new();

    let mut reflect_all = |v: [f64; MAX_DIM], imgs: &mut [[f64; MAX_DIM]; MAX_DIM]| {
        let vv = sig.metric_dot(&v, &v);
        for img in imgs.iter_mut().take(n) {
            let coef = 2.0 * sig.metric_dot(img, &v) / vv;
            for i in 0..n {
                img[i] -= coef * v[i];
            }
        }
        mirrors.push(v);
    };

    for k in 0..n {
        let a = imgs[k];
        let f = frame[k];
        let diff: f64 = (0..n).map(|i| (a[i] - f[i]).powi(2)).sum::<f64>().sqrt();
        // Once the earlier legs are aligned the final leg is determined up to
        // sign, so its residual is pure rounding noise; reflecting through such
        // a tiny difference would flip the mirror parity spuriously.
        if diff < 1e-11 {
            continue;
        }
        let mut vminus = [0.0; MAX_DIM];
        for i in 0..n {
            vminus[i] = a[i] - f[i];
        }
        let qminus = sig.metric_dot(&vminus, &vminus);
        // Euclidean size, for a scale-aware nullity test.
        let scale: f64 = (0..n).map(|i| vminus[i] * vminus[i]).sum();
        if qminus.abs() > 1e-10 * scale.max(1e-30) {
            reflect_all(vminus, &mut imgs);
        } else {
            // a − f is null: reflect a ↦ −f through a+f, then −f ↦ f through f.
            let mut vplus = [0.0; MAX_DIM];
            for i in 0..n {
                vplus[i] = a[i] + f[i];
            }
            reflect_all(vplus, &mut imgs);
            reflect_all(f, &mut imgs);
        }
    }

    if mirrors.len() % 2 != 0 {
        return Err(Error::invalid("frame has determinant −1: not realizable by a rotor"));
    }

    // u = v_m ··· v_1 (later reflections multiply on the left), each mirror
    // normalized by |⟨v,v⟩|^(1/2).
    let mut u = Multivector::one(sig);
    for v in &mirrors {
        let vv = sig.metric_dot(v, v);
        let inv_len = 1.0 / vv.abs().sqrt();
        let mut comps = [0.0; MAX_DIM];
        for i in 0..n {
            comps[i] = v[i] * inv_len;
        }
        u = Multivector::vector(sig, &comps).gp(&u);
    }

    // Clean the spin normalization and verify.
    let r = u.reversal().gp(&u).scalar_part();
    if r < 0.0 {
        return Err(Error::invalid("frame reverses time orientation: spin norm is −1"));
    }
    u = u * (1.0 / r.sqrt());
    for k in 0..n {
        let got = ad_basis(&u, k)?;
        let err: f64 = (0..n).map(|i| (got[i] - frame[k][i]).powi(2)).sum::<f64>().sqrt();
        if err > 1e-8 {
            return Err(Error::invalid(format!(
                "rotor construction failed to realize frame leg {k} (defect {err:.2e})"
            )));
        }
    }
    Ok(u)
}

/// Principal logarithm of a near-identity metric-orthogonal matrix via the
/// Mercator series, projected onto the metric-skew part to remove truncation
/// junk. Used to propagate spin lifts between neighboring frames.
pub fn orthogonal_log_near_identity(sig: Signature, r: &SkewOp) -> Result<SkewOp> {
    let n = r.n;
    // N = R − I.
    let mut nmat = *r;
    for i in 0..n {
        nmat.a[i][i] -= 1.0;
    }
    let nnorm: f64 =
        (0..n).map(|i| (0..n).map(|j| nmat.a[i][j] * nmat.a[i][j]).sum::<f64>()).sum::<f64>().sqrt();
    if nnorm > 0.9 {
        return Err(Error::invalid(format!(
            "matrix log series needs a near-identity argument (|R−I| = {nnorm:.3})"
        )));
    }
    // log(I+N) = Σ_{k≥1} (−1)^{k+1} N^k / k.
    let mut acc = SkewOp::zeros(n);
    let mut power = nmat;
    let mut k = 1usize;
    loop {
        let coef = if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 };
        let mut term_norm: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc.a[i][j] += coef * power.a[i][j];
                term_norm += (coef * power.a[i][j]).powi(2);
            }
        }
        if term_norm.sqrt() < 1e-16 || k > 60 {
            break;
        }
        // power ← power · N
        let prev = power;
        power = SkewOp::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += prev.a[i][l] * nmat.a[l][j];
                }
                power.a[i][j] = s;
            }
        }
        k += 1;
    }
    // Project onto metric-skew: a_ij ← (a_ij − ε_i ε_j a_ji)/2.
    let raw = acc;
    for i in 0..n {
        for j in 0..n {
            acc.a[i][j] = 0.5 * (raw.a[i][j] - sig.eps(i) * sig.eps(j) * raw.a[j][i]);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::{ALGEBRA_EXACT, SPIN_MEMBERSHIP};

    #[test]
    fn skew_bivector_reproduces_operator_action() {
        // The worked example: u(e1) = e3, u(e3) = e1 in signs (+,+,−) is
        // metric-skew and u̲ = e1·e3 (indices 0 and 2 here), with [u̲,e1] = e3.
        let sig = Signature::lie_order();
        let mut u = SkewOp::zeros(3);
        u.a[2][0] = 1.0; // e1 ↦ e3
        u.a[0][2] = 1.0; // e3 ↦ e1
        assert!(u.skew_defect(sig) < ALGEBRA_EXACT);
        let b = skew_to_bivector(sig, &u);
        let want = Multivector::basis_blade(sig, 0b101);
        assert!((b - want).coeff_norm() < ALGEBRA_EXACT);
        let back = bivector_to_skew(sig, &b);
        for i in 0..3 {
            for j in 0..3 {
                assert!((back.a[i][j] - u.a[i][j]).abs() < ALGEBRA_EXACT);
            }
        }
    }

    #[test]
    fn alternative_bivector_formula_agrees() {
        // u̲ = Σ_{j<l} ε_j ε_l ⟨u(e_j), e_l⟩ e_j e_l for metric-skew u, here
        // exercised on a generic skew operator of Cl(1,3).
        let sig = Signature::cl13();
        let mut u = SkewOp::zeros(4);
        let pairs = [(0usize, 1usize, 0.7), (0, 3, -0.2), (1, 2, 1.1), (2, 3, 0.4)];
        for &(i, j, v) in &pairs {
            u.a[i][j] = v;
            u.a[j][i] = -sig.eps(i) * sig.eps(j) * v; // ε_i a_ij = −ε_j a_ji
        }
        assert!(u.skew_defect(sig) < ALGEBRA_EXACT);
        let b = skew_to_bivector(sig, &u);
        let mut alt = Multivector::zero(sig);
        for j in 0..4 {
            for l in (j + 1)..4 {
                let mut col = [0.0; MAX_DIM];
                for i in 0..4 {
                    col[i] = u.a[i][j];
                }
                let coef = sig.eps(j) * sig.eps(l) * sig.metric_dot(&col, &{
                    let mut el = [0.0; MAX_DIM];
                    el[l] = 1.0;
                    el
                });
                alt = alt
                    + Multivector::basis_vector(sig, j).gp(&Multivector::basis_vector(sig, l))
                        * coef;
            }
        }
        assert!((b - alt).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn bivector_exponential_covers_operator_exponential() {
        // Ad(exp(u̲/2)) must equal exp(u) on vectors.
        let sig = Signature::cl12();
        let mut u = SkewOp::zeros(3);
        u.a[0][1] = 0.6; // boost block e0/e1
        u.a[1][0] = 0.6;
        u.a[2][1] = -0.3; // rotation block e1/e2
        u.a[1][2] = 0.3;
        assert!(u.skew_defect(sig) < ALGEBRA_EXACT);
        let g = (skew_to_bivector(sig, &u) * 0.5).exp();
        assert!(is_spin(&g, SPIN_MEMBERSHIP));
        // exp(u) by scaled squaring on the matrix side.
        let mut m = nalgebra::Matrix3::<f64>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = u.a[i][j];
            }
        }
        let em = m.exp();
        for j in 0..3 {
            let img = ad_action(&g, &Multivector::basis_vector(sig, j)).unwrap().vector_part();
            for i in 0..3 {
                assert!((img[i] - em[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotor_from_frame_handles_rotations_and_boosts() {
        let sig = Signature::cl12();
        let th: f64 = 0.8;
        let ch = th.cosh();
        let sh = th.sinh();
        let frames: Vec<Vec<[f64; 4]>> = vec![
            // Pure spatial rotation.
            vec![[1.0, 0.0, 0.0, 0.0], [0.0, th.cos(), th.sin(), 0.0], [0.0, -th.sin(), th.cos(), 0.0]],
            // Boost in the (e0,e1) plane (orthochronous).
            vec![[ch, sh, 0.0, 0.0], [sh, ch, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]],
        ];
        for f in frames {
            let u = rotor_from_frame(sig, &f).unwrap();
            assert!(is_spin(&u, SPIN_MEMBERSHIP));
            for k in 0..3 {
                let img = ad_action(&u, &Multivector::basis_vector(sig, k)).unwrap().vector_part();
                for i in 0..3 {
                    assert!((img[i] - f[k][i]).abs() < 1e-9, "leg {k} comp {i}");
                }
            }
        }
    }

    #[test]
    fn rotor_from_frame_handles_the_null_difference_branch() {
        // A parabolic (null rotation) frame in signs (+,+,−): the first leg
        // satisfies ⟨e_0 − f_0, e_0 − f_0⟩ = 0 with f_0 ≠ e_0, forcing the
        // two-reflection fallback. F = exp(A) for the nilpotent metric-skew
        // A: e_0 ↦ e_1+e_2, e_1 ↦ −e_0, e_2 ↦ e_0 (A³ = 0, so the series is
        // exact).
        let sig = Signature::lie_order();
        let mut a = SkewOp::zeros(3);
        a.a[1][0] = 1.0;
        a.a[2][0] = 1.0;
        a.a[0][1] = -1.0;
        a.a[0][2] = 1.0;
        assert!(a.skew_defect(sig) < ALGEBRA_EXACT);
        let mut frame = vec![[0.0; MAX_DIM]; 3];
        for j in 0..3 {
            let mut x = [0.0; MAX_DIM];
            x[j] = 1.0;
            let ax = a.apply(&x);
            let aax = a.apply(&ax);
            for i in 0..3 {
                frame[j][i] = x[i] + ax[i] + 0.5 * aax[i];
            }
        }
        // The difference on the first leg really is null.
        let mut d = [0.0; MAX_DIM];
        for i in 0..3 {
            d[i] = frame[0][i] - f64::from(i == 0);
        }
        assert!(sig.metric_dot(&d, &d).abs() < ALGEBRA_EXACT);
        assert!(d.iter().any(|x| x.abs() > 0.5), "difference must be nonzero");

        let u = rotor_from_frame(sig, &frame).unwrap();
        assert!(is_spin(&u, SPIN_MEMBERSHIP));
        for k in 0..3 {
            let img = ad_action(&u, &Multivector::basis_vector(sig, k)).unwrap().vector_part();
            for i in 0..3 {
                assert!((img[i] - frame[k][i]).abs() < 1e-9, "leg {k} comp {i}");
            }
        }
    }

    #[test]
    fn rotor_from_frame_rejects_bad_frames() {
        let sig = Signature::cl12();
        // Determinant −1.
        let f = vec![[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0]];
        assert!(rotor_from_frame(sig, &f).is_err());
        // Time reversal.
        let f = vec![[-1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
        assert!(rotor_from_frame(sig, &f).is_err());
        // Not orthonormal.
        let f = vec![[2.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]];
        assert!(rotor_from_frame(sig, &f).is_err());
    }

    #[test]
    fn orthogonal_log_matches_bivector_generator() {
        let sig = Signature::cl12();
        let mut u = SkewOp::zeros(3);
        u.a[0][1] = 0.05;
        u.a[1][0] = 0.05;
        u.a[2][1] = 0.08;
        u.a[1][2] = -0.08;
        // R = exp(u) via the rotor route.
        let g = (skew_to_bivector(sig, &u) * 0.5).exp();
        let mut r = SkewOp::zeros(3);
        for j in 0..3 {
            let img = ad_action(&g, &Multivector::basis_vector(sig, j)).unwrap().vector_part();
            for i in 0..3 {
                r.a[i][j] = img[i];
            }
        }
        let l = orthogonal_log_near_identity(sig, &r).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((l.a[i][j] - u.a[i][j]).abs() < 1e-12);
            }
        }
    }
}
