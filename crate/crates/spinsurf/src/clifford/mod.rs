//! Real Clifford algebras Cl(p,q) in dimension ≤ 4.
//!
//! # Conventions
//!
//! The algebra is generated by an orthonormal basis e₀,…,e_{n−1} of a metric
//! with diagonal signs ε_i = ⟨e_i,e_i⟩ ∈ {−1,+1}, subject to
//!
//! ```text
//! v·w + w·v = −2⟨v,w⟩      hence      e_i·e_i = −ε_i .
//! ```
//!
//! A *timelike* direction (ε = −1) therefore squares to +1 and a *spacelike*
//! direction (ε = +1) squares to −1. The pair (p,q) counts (timelike,
//! spacelike) directions; the order of the signs in the signature is free and
//! is part of the [`Signature`] value, so e.g. (−,+,+) and (+,+,−) are
//! different (isomorphic) presentations of Cl(1,2).
//!
//! # Storage
//!
//! A basis blade e_{i₁}·…·e_{i_k} with i₁<…<i_k is identified with the bitmask
//! having bits i₁,…,i_k set; a [`Multivector`] stores one dense coefficient per
//! blade (2ⁿ ≤ 16 of them). The geometric product of two blades is the XOR
//! blade, with a sign composed of the canonical-reordering sign (parity of the
//! inversions needed to sort the concatenated index lists) and one factor
//! e_i·e_i = −ε_i per index common to both operands.
//!
//! # Text form
//!
//! Multivectors have an exact textual round trip:
//!
//! ```text
//! sig(1,2){ "": 1, "01": -0.5 }          canonical order (timelike first)
//! sig(1,2;+,+,-){ "2": 2.25 }            explicit sign pattern
//! ```
//!
//! Keys are the ascending basis indices of the blade (empty = scalar), values
//! use the shortest f64 form that round-trips, entries are sorted by grade and
//! then by blade bits, and zero coefficients are omitted.
//!
//! ```
//! use spinsurf::clifford::{Multivector, Signature};
//!
//! let sig = Signature::cl12();
//! let v = Multivector::basis_vector(sig, 1);
//! let w = Multivector::basis_vector(sig, 2);
//! // e1 e2 + e2 e1 = -2<e1,e2> = 0, and e1 e1 = -1 in Cl(1,2).
//! assert!((&v * &w + &w * &v).coeff_norm() < 1e-15);
//! assert!((&v * &v).scalar_part() == -1.0);
//! let s = format!("{}", &v * &w);
//! assert_eq!(s, "sig(1,2){ \"12\": 1 }");
//! assert_eq!(Multivector::parse_text(&s).unwrap(), &v * &w);
//! ```

mod model;
mod spin;
mod text;

pub use model::{
    herm_product, quat_to_even, even_to_quat, EvenModel, IntrinsicKind,
};
pub use spin::{
    ad_action, bivector_to_skew, commutator_half, is_spin, orthogonal_log_near_identity,
    rotor_from_frame, skew_to_bivector, spin_inverse, SkewOp,
};

use crate::error::{Error, Result};

/// Maximum supported number of generators.
pub const MAX_DIM: usize = 4;

/// Number of blades at the maximum dimension.
pub const MAX_BLADES: usize = 1 << MAX_DIM;

// =============================================================================
// Signature
// =============================================================================

/// An ordered list of metric signs ε_i = ⟨e_i,e_i⟩ defining Cl(p,q).
///
/// `p` counts timelike signs (ε = −1), `q` spacelike signs (ε = +1). Two
/// signatures with the same (p,q) but different orderings are distinct values
/// related by [`Multivector::permute_basis`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    n: u8,
    /// Bit i set ⇔ ε_i = −1 (timelike).
    timelike: u8,
}

impl Signature {
    /// Builds a signature from explicit signs; `signs[i]` must be ±1.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() || signs.len() > MAX_DIM {
            return Err(Error::invalid(format!(
                "signature length must be 1..={MAX_DIM}, got {}",
                signs.len()
            )));
        }
        let mut timelike = 0u8;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => timelike |= 1 << i,
                _ => return Err(Error::invalid(format!("signature signs must be ±1, got {s}"))),
            }
        }
        Ok(Signature { n: signs.len() as u8, timelike })
    }

    /// The canonical order for Cl(p,q): p timelike signs first, then q spacelike.
    pub fn canonical(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 || p + q > MAX_DIM {
            return Err(Error::invalid(format!("need 1 <= p+q <= {MAX_DIM}, got p={p}, q={q}")));
        }
        Ok(Signature { n: (p + q) as u8, timelike: ((1u16 << p) - 1) as u8 })
    }

    /// Cl(1,2) with signs (−,+,+): the ambient algebra of Lorentzian
    /// 3-manifolds in the canonical order used by the intrinsic models.
    pub fn cl12() -> Self {
        Self::canonical(1, 2).expect("static signature")
    }

    /// Cl(1,3) with signs (−,+,+,+): ambient algebra of the de Sitter quadric
    /// and of the time-negated sphere product.
    pub fn cl13() -> Self {
        Self::canonical(1, 3).expect("static signature")
    }

    /// Cl(2,2) with signs (−,−,+,+): ambient algebra of the anti-de Sitter quadric.
    pub fn cl22() -> Self {
        Self::canonical(2, 2).expect("static signature")
    }

    /// Cl(0,3) with signs (+,+,+): ambient algebra of Euclidean 3-space,
    /// used by the minimal-surface side of the conformal correspondence.
    pub fn cl03() -> Self {
        Self::canonical(0, 3).expect("static signature")
    }

    /// Cl(1,2) in the order (+,+,−) used by the metric Lie algebra catalog,
    /// whose third basis direction is the timelike one.
    pub fn lie_order() -> Self {
        Self::from_signs(&[1, 1, -1]).expect("static signature")
    }

    /// Number of generators.
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Number of blades, 2ⁿ.
    pub fn blade_count(&self) -> usize {
        1 << self.n
    }

    /// The metric sign ε_i = ⟨e_i,e_i⟩.
    pub fn eps(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        if self.timelike & (1 << i) != 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Count of timelike directions (ε = −1).
    pub fn p(&self) -> usize {
        self.timelike.count_ones() as usize
    }

    /// Count of spacelike directions (ε = +1).
    pub fn q(&self) -> usize {
        self.dim() - self.p()
    }

    /// Whether the signs are in canonical order (all timelike first).
    pub fn is_canonical(&self) -> bool {
        self.timelike == ((1u16 << self.p()) - 1) as u8
    }

    /// Metric pairing of two coordinate vectors: Σ ε_i x_i y_i.
    pub fn metric_dot(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert!(x.len() >= self.dim() && y.len() >= self.dim());
        (0..self.dim()).map(|i| self.eps(i) * x[i] * y[i]).sum()
    }
}

impl std::fmt::Debug for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sig(")?;
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if self.eps(i) < 0.0 { "-" } else { "+" })?;
        }
        write!(f, ")")
    }
}

// =============================================================================
// Blade combinatorics
// =============================================================================

/// Sign from sorting the concatenation of the ascending index lists of `a`
/// and `b` into ascending order: each index of `b` hops over every strictly
/// larger index of `a`.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut inversions = 0u32;
    let mut i = 0;
    while i < MAX_DIM {
        if b & (1 << i) != 0 {
            inversions += (a >> (i + 1)).count_ones();
        }
        i += 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Precomputed canonical-reordering signs for all blade pairs. The metric
/// contribution is applied separately because it depends on the signature.
static REORDER: [[i8; MAX_BLADES]; MAX_BLADES] = {
    let mut t = [[0i8; MAX_BLADES]; MAX_BLADES];
    let mut a = 0;
    while a < MAX_BLADES {
        let mut b = 0;
        while b < MAX_BLADES {
            t[a][b] = reorder_sign(a as u8, b as u8);
            b += 1;
        }
        a += 1;
    }
    t
};

/// Grade (index count) of a blade bitmask.
pub fn blade_grade(mask: usize) -> usize {
    (mask as u32).count_ones() as usize
}

/// Reversal sign (−1)^{k(k−1)/2} for grade k.
fn reversal_sign(grade: usize) -> f64 {
    match grade % 4 {
        0 | 1 => 1.0,
        _ => -1.0,
    }
}

// =============================================================================
// Multivector
// =============================================================================

/// A dense element of Cl(p,q), coefficient-indexed by blade bitmask.
#[derive(Clone, Copy)]
pub struct Multivector {
    sig: Signature,
    c: [f64; MAX_BLADES],
}

impl Multivector {
    // ---------------------------------------------------------------- constructors

    /// The zero element.
    pub fn zero(sig: Signature) -> Self {
        Multivector { sig, c: [0.0; MAX_BLADES] }
    }

    /// The unit scalar.
    pub fn one(sig: Signature) -> Self {
        let mut m = Self::zero(sig);
        m.c[0] = 1.0;
        m
    }

    /// A scalar.
    pub fn scalar(sig: Signature, s: f64) -> Self {
        let mut m = Self::zero(sig);
        m.c[0] = s;
        m
    }

    /// The basis vector e_i.
    pub fn basis_vector(sig: Signature, i: usize) -> Self {
        assert!(i < sig.dim(), "basis index {i} out of range for {sig:?}");
        let mut m = Self::zero(sig);
        m.c[1 << i] = 1.0;
        m
    }

    /// The basis blade for a set of indices given as a bitmask.
    pub fn basis_blade(sig: Signature, mask: usize) -> Self {
        assert!(mask < sig.blade_count(), "blade mask {mask:#x} out of range for {sig:?}");
        let mut m = Self::zero(sig);
        m.c[mask] = 1.0;
        m
    }

    /// A grade-1 element with the given coordinates (length = dimension).
    pub fn vector(sig: Signature, comps: &[f64]) -> Self {
        assert!(comps.len() >= sig.dim());
        let mut m = Self::zero(sig);
        for i in 0..sig.dim() {
            m.c[1 << i] = comps[i];
        }
        m
    }

    // ---------------------------------------------------------------- access

    /// The signature this element lives in.
    pub fn sig(&self) -> Signature {
        self.sig
    }

    /// Coefficient of the blade with the given bitmask.
    pub fn coeff(&self, mask: usize) -> f64 {
        debug_assert!(mask < self.sig.blade_count());
        self.c[mask]
    }

    /// Mutable coefficient access.
    pub fn coeff_mut(&mut self, mask: usize) -> &mut f64 {
        debug_assert!(mask < self.sig.blade_count());
        &mut self.c[mask]
    }

    /// The scalar (grade-0) coefficient.
    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    /// The grade-1 coordinates, padded with zeros to length 4.
    pub fn vector_part(&self) -> [f64; MAX_DIM] {
        let mut v = [0.0; MAX_DIM];
        for i in 0..self.sig.dim() {
            v[i] = self.c[1 << i];
        }
        v
    }

    /// Projection onto one grade.
    pub fn grade_part(&self, grade: usize) -> Self {
        let mut m = Self::zero(self.sig);
        for mask in 0..self.sig.blade_count() {
            if blade_grade(mask) == grade {
                m.c[mask] = self.c[mask];
            }
        }
        m
    }

    /// Projection onto the even subalgebra.
    pub fn even_part(&self) -> Self {
        let mut m = Self::zero(self.sig);
        for mask in 0..self.sig.blade_count() {
            if blade_grade(mask) % 2 == 0 {
                m.c[mask] = self.c[mask];
            }
        }
        m
    }

    /// Largest coefficient magnitude outside the even subalgebra.
    pub fn odd_magnitude(&self) -> f64 {
        (0..self.sig.blade_count())
            .filter(|m| blade_grade(*m) % 2 == 1)
            .map(|m| self.c[m].abs())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude outside the given grade.
    pub fn off_grade_magnitude(&self, grade: usize) -> f64 {
        (0..self.sig.blade_count())
            .filter(|m| blade_grade(*m) != grade)
            .map(|m| self.c[m].abs())
            .fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector. This is the norm used for
    /// residuals, drift measurements, and convergence ladders.
    pub fn coeff_norm(&self) -> f64 {
        self.c[..self.sig.blade_count()].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Euclidean inner product of coefficient vectors.
    pub fn coeff_dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.sig, other.sig);
        (0..self.sig.blade_count()).map(|m| self.c[m] * other.c[m]).sum()
    }

    // ---------------------------------------------------------------- algebra

    /// Geometric product.
    pub fn gp(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.sig, rhs.sig, "geometric product across signatures");
        gp_with_table(self, rhs, &REORDER)
    }

    /// Reversal τ: reverses each blade's factor order,
    /// multiplying grade k by (−1)^{k(k−1)/2}.
    pub fn reversal(&self) -> Self {
        let mut m = *self;
        for mask in 0..self.sig.blade_count() {
            m.c[mask] *= reversal_sign(blade_grade(mask));
        }
        m
    }

    /// The bilinear pairing ⟨⟨φ,ψ⟩⟩ = τ(ψ)·φ used by the spinor machinery.
    ///
    /// It satisfies ⟨⟨φ,ψ⟩⟩ = τ(⟨⟨ψ,φ⟩⟩) and ⟨⟨X·φ,ψ⟩⟩ = ⟨⟨φ,X·ψ⟩⟩ for
    /// vectors X, both of which are exercised by the verification suite.
    pub fn pairing(&self, psi: &Self) -> Self {
        psi.reversal().gp(self)
    }

    /// Multiplicative inverse via the left-multiplication matrix; errors when
    /// the element is not invertible at working precision.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.sig.blade_count();
        let mut l = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let col = self.gp(&Self::basis_blade(self.sig, i));
            for j in 0..n {
                l[(j, i)] = col.c[j];
            }
        }
        let mut rhs = nalgebra::DVector::<f64>::zeros(n);
        rhs[0] = 1.0;
        let lu = l.full_piv_lu();
        match lu.solve(&rhs) {
            Some(x) => {
                let mut m = Self::zero(self.sig);
                for j in 0..n {
                    m.c[j] = x[j];
                }
                Ok(m)
            }
            None => Err(Error::DivisionSingularity(
                "multivector is not invertible at working precision".into(),
            )),
        }
    }

    /// Exponential by scaling-and-squaring with a Taylor kernel; exact to
    /// roundoff for the bivector arguments used by transports and lifts.
    pub fn exp(&self) -> Self {
        let norm = self.coeff_norm();
        let scal_pow = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = self * (0.5f64.powi(scal_pow as i32));
        // Taylor: 1 + x + x²/2! + ... ; with |x| <= 0.5, 16 terms reach 1e-19.
        let mut term = Self::one(self.sig);
        let mut acc = Self::one(self.sig);
        for k in 1..=16 {
            term = term.gp(&scaled) * (1.0 / k as f64);
            acc = acc + term;
        }
        for _ in 0..scal_pow {
            acc = acc.gp(&acc);
        }
        acc
    }

    /// Reinterprets this element along a basis permutation: e_i ↦ e'_{perm[i]}
    /// in `target`, extended multiplicatively to blades (with the reordering
    /// sign of the permuted index list). Errors unless the permutation is a
    /// signature isometry, i.e. ε'_{perm[i]} = ε_i for all i.
    pub fn permute_basis(&self, target: Signature, perm: &[usize]) -> Result<Self> {
        let n = self.sig.dim();
        if target.dim() != n || perm.len() != n {
            return Err(Error::invalid("basis permutation must cover every generator"));
        }
        let mut seen = [false; MAX_DIM];
        for i in 0..n {
            let j = perm[i];
            if j >= n || seen[j] {
                return Err(Error::invalid("not a permutation"));
            }
            seen[j] = true;
            if target.eps(j) != self.sig.eps(i) {
                return Err(Error::invalid(format!(
                    "permutation is not an isometry: eps mismatch at source index {i}"
                )));
            }
        }
        let mut out = Self::zero(target);
        for mask in 0..self.sig.blade_count() {
            if self.c[mask] == 0.0 {
                continue;
            }
            // Collect permuted indices in source order, count inversions.
            let mut imgs: [usize; MAX_DIM] = [0; MAX_DIM];
            let mut k = 0;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    imgs[k] = perm[i];
                    k += 1;
                }
            }
            let mut sign = 1.0;
            let mut new_mask = 0usize;
            for a in 0..k {
                for b in (a + 1)..k {
                    if imgs[a] > imgs[b] {
                        sign = -sign;
                    }
                }
                new_mask |= 1 << imgs[a];
            }
            out.c[new_mask] += sign * self.c[mask];
        }
        Ok(out)
    }
}

/// Geometric product against an explicit reordering table. The public product
/// uses the correct static table; the self-test suite uses a deliberately
/// corrupted copy to prove the algebraic checks can fail.
fn gp_with_table(
    a: &Multivector,
    b: &Multivector,
    table: &[[i8; MAX_BLADES]; MAX_BLADES],
) -> Multivector {
    let sig = a.sig;
    let nb = sig.blade_count();
    let mut out = Multivector::zero(sig);
    for ma in 0..nb {
        let ca = a.c[ma];
        if ca == 0.0 {
            continue;
        }
        for mb in 0..nb {
            let cb = b.c[mb];
            if cb == 0.0 {
                continue;
            }
            let mut s = table[ma][mb] as f64;
            let mut common = ma & mb;
            while common != 0 {
                let i = common.trailing_zeros() as usize;
                s *= -sig.eps(i); // e_i·e_i = −ε_i
                common &= common - 1;
            }
            out.c[ma ^ mb] += s * ca * cb;
        }
    }
    out
}

/// A geometric product with a corrupted sign table, exposed for the self-test
/// suite so the verification checks can demonstrate a detectable failure.
/// Never use outside tests.
#[doc(hidden)]
pub fn corrupted_gp(a: &Multivector, b: &Multivector) -> Multivector {
    let mut bad = REORDER;
    // Flip the sign of e1·e2 (and only that entry): breaks associativity
    // and the reversal identities in any algebra of dimension >= 3.
    bad[0b010][0b100] = -bad[0b010][0b100];
    gp_with_table(a, b, &bad)
}

// =============================================================================
// Operators
// =============================================================================

impl std::ops::Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        debug_assert_eq!(self.sig, rhs.sig);
        let mut m = self;
        for i in 0..MAX_BLADES {
            m.c[i] += rhs.c[i];
        }
        m
    }
}

impl std::ops::Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        debug_assert_eq!(self.sig, rhs.sig);
        let mut m = self;
        for i in 0..MAX_BLADES {
            m.c[i] -= rhs.c[i];
        }
        m
    }
}

impl std::ops::Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let mut m = self;
        for i in 0..MAX_BLADES {
            m.c[i] = -m.c[i];
        }
        m
    }
}

impl std::ops::Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        let mut m = self;
        for i in 0..MAX_BLADES {
            m.c[i] *= s;
        }
        m
    }
}

impl std::ops::Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        *self * s
    }
}

impl std::ops::Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.gp(rhs)
    }
}

impl std::ops::Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.gp(&rhs)
    }
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.c[..self.sig.blade_count()] == other.c[..self.sig.blade_count()]
    }
}

impl std::fmt::Debug for Multivector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format_text())
    }
}

impl std::fmt::Display for Multivector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format_text())
    }
}

// =============================================================================
// Unit tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::ALGEBRA_EXACT;

    fn e(sig: Signature, i: usize) -> Multivector {
        Multivector::basis_vector(sig, i)
    }

    #[test]
    fn generator_squares_follow_metric_signs() {
        // e_i² = −ε_i: timelike squares to +1, spacelike to −1.
        let sig = Signature::cl12();
        assert_eq!(e(sig, 0).gp(&e(sig, 0)).scalar_part(), 1.0);
        assert_eq!(e(sig, 1).gp(&e(sig, 1)).scalar_part(), -1.0);
        assert_eq!(e(sig, 2).gp(&e(sig, 2)).scalar_part(), -1.0);

        let lie = Signature::lie_order();
        assert_eq!(e(lie, 0).gp(&e(lie, 0)).scalar_part(), -1.0);
        assert_eq!(e(lie, 2).gp(&e(lie, 2)).scalar_part(), 1.0);
    }

    #[test]
    fn anticommutation_gives_metric() {
        // v·w + w·v = −2⟨v,w⟩ for random vectors in Cl(2,2).
        let sig = Signature::cl22();
        let v = Multivector::vector(sig, &[0.3, -1.2, 0.7, 2.0]);
        let w = Multivector::vector(sig, &[1.0, 0.25, -0.5, 0.125]);
        let anti = v.gp(&w) + w.gp(&v);
        let expected = -2.0 * sig.metric_dot(&v.vector_part(), &w.vector_part());
        assert!((anti.scalar_part() - expected).abs() < ALGEBRA_EXACT);
        assert!(anti.off_grade_magnitude(0) < ALGEBRA_EXACT);
    }

    #[test]
    fn volume_element_of_cl12_squares_to_minus_one_and_is_central() {
        let sig = Signature::cl12();
        let i = e(sig, 0).gp(&e(sig, 1)).gp(&e(sig, 2));
        let sq = i.gp(&i);
        assert!((sq.scalar_part() + 1.0).abs() < ALGEBRA_EXACT);
        assert!(sq.off_grade_magnitude(0) < ALGEBRA_EXACT);
        for k in 0..3 {
            let d = i.gp(&e(sig, k)) - e(sig, k).gp(&i);
            assert!(d.coeff_norm() < ALGEBRA_EXACT, "volume element must be central");
        }
    }

    #[test]
    fn reversal_signs_by_grade() {
        let sig = Signature::cl13();
        for mask in 0..sig.blade_count() {
            let b = Multivector::basis_blade(sig, mask);
            let r = b.reversal();
            let want = match blade_grade(mask) % 4 {
                0 | 1 => 1.0,
                _ => -1.0,
            };
            assert_eq!(r.coeff(mask), want);
        }
    }

    #[test]
    fn reversal_is_an_antihomomorphism() {
        let sig = Signature::cl13();
        let a = Multivector::vector(sig, &[0.1, 0.2, -0.3, 0.4])
            + Multivector::basis_blade(sig, 0b0110) * 0.7;
        let b = Multivector::basis_blade(sig, 0b1011) * 1.3 + Multivector::one(sig) * 0.2;
        let lhs = a.gp(&b).reversal();
        let rhs = b.reversal().gp(&a.reversal());
        assert!((lhs - rhs).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn pairing_symmetry_and_vector_self_adjointness() {
        let sig = Signature::cl12();
        let phi = Multivector::one(sig) * 0.5 + Multivector::basis_blade(sig, 0b011) * -1.25
            + Multivector::basis_blade(sig, 0b101) * 0.75;
        let psi = Multivector::one(sig) * -0.25 + Multivector::basis_blade(sig, 0b110) * 2.0;
        // <<phi,psi>> = tau(<<psi,phi>>)
        let lhs = phi.pairing(&psi);
        let rhs = psi.pairing(&phi).reversal();
        assert!((lhs - rhs).coeff_norm() < ALGEBRA_EXACT);
        // <<X phi, psi>> = <<phi, X psi>>
        let x = Multivector::vector(sig, &[1.5, -0.5, 0.25, 0.0]);
        let lhs = x.gp(&phi).pairing(&psi);
        let rhs = phi.pairing(&x.gp(&psi));
        assert!((lhs - rhs).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn rotor_rotates_by_twice_the_half_angle() {
        // g = cos θ + sin θ e1e2 sends e1 to cos 2θ e1 + sin 2θ e2 in Cl(1,2).
        let sig = Signature::cl12();
        let th: f64 = 0.3;
        let g = Multivector::one(sig) * th.cos() + Multivector::basis_blade(sig, 0b110) * th.sin();
        let ginv = g.inverse().unwrap();
        let img = g.gp(&e(sig, 1)).gp(&ginv);
        let want = e(sig, 1) * (2.0 * th).cos() + e(sig, 2) * (2.0 * th).sin();
        assert!((img - want).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn exponential_of_spacelike_bivector_is_a_rotation_rotor() {
        let sig = Signature::cl12();
        let th: f64 = 0.77;
        // (e1e2)² = −1, so exp(θ e1e2) = cos θ + sin θ e1e2.
        let b = Multivector::basis_blade(sig, 0b110) * th;
        let g = b.exp();
        let want = Multivector::one(sig) * th.cos() + Multivector::basis_blade(sig, 0b110) * th.sin();
        assert!((g - want).coeff_norm() < ALGEBRA_EXACT);
        // (e0e1)² = +1, so exp(θ e0e1) = cosh θ + sinh θ e0e1.
        let b = Multivector::basis_blade(sig, 0b011) * th;
        let g = b.exp();
        let want =
            Multivector::one(sig) * th.cosh() + Multivector::basis_blade(sig, 0b011) * th.sinh();
        assert!((g - want).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn inverse_round_trips() {
        let sig = Signature::cl22();
        let a = Multivector::one(sig) * 0.3
            + Multivector::basis_vector(sig, 2) * 1.2
            + Multivector::basis_blade(sig, 0b1100) * -0.4;
        let ainv = a.inverse().unwrap();
        assert!((a.gp(&ainv) - Multivector::one(sig)).coeff_norm() < 1e-12);
        assert!((ainv.gp(&a) - Multivector::one(sig)).coeff_norm() < 1e-12);
    }

    #[test]
    fn zero_is_not_invertible() {
        let z = Multivector::zero(Signature::cl12());
        assert!(z.inverse().is_err());
    }

    #[test]
    fn permute_basis_is_multiplicative() {
        // Lie order (+,+,−) → canonical (−,+,+) via (e1°,e2°,e3°) ↦ (e1,e2,e0).
        let lie = Signature::lie_order();
        let can = Signature::cl12();
        let perm = [1usize, 2, 0];
        let a = Multivector::vector(lie, &[0.4, -1.0, 0.9, 0.0])
            + Multivector::basis_blade(lie, 0b011) * 0.3;
        let b = Multivector::vector(lie, &[-0.2, 0.5, 1.5, 0.0])
            + Multivector::basis_blade(lie, 0b110) * -0.8;
        let pa = a.permute_basis(can, &perm).unwrap();
        let pb = b.permute_basis(can, &perm).unwrap();
        let pab = a.gp(&b).permute_basis(can, &perm).unwrap();
        assert!((pa.gp(&pb) - pab).coeff_norm() < ALGEBRA_EXACT);
    }

    #[test]
    fn permute_basis_rejects_sign_mismatch() {
        let lie = Signature::lie_order();
        let can = Signature::cl12();
        let a = Multivector::one(lie);
        // Identity map is not an isometry between these orderings.
        assert!(a.permute_basis(can, &[0, 1, 2]).is_err());
    }

    #[test]
    fn corrupted_product_breaks_associativity() {
        let sig = Signature::cl12();
        let a = e(sig, 1);
        let b = e(sig, 2);
        let c = e(sig, 1).gp(&e(sig, 2));
        let good = a.gp(&b.gp(&c)) - a.gp(&b).gp(&c);
        assert!(good.coeff_norm() < ALGEBRA_EXACT);
        let bad = corrupted_gp(&a, &corrupted_gp(&b, &c)) - corrupted_gp(&corrupted_gp(&a, &b), &c);
        assert!(bad.coeff_norm() > 0.5, "corrupted table must be detectable");
    }
}
