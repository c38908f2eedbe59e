//! The characteristic first-order equations satisfied by surface spinor
//! fields, one form per ambient geometry.
//!
//! Every form prescribes the covariant derivative of a spinor field along the
//! surface: ∇_X ψ = rhs(X, ψ), with rhs linear in the tangent vector X and in
//! ψ. The right-hand sides combine the shape operator, the ambient connection
//! pulled back through the tangent/normal split of the invariant frame, and —
//! for quadric ambients — the position normal ν. A surface admitting a
//! nowhere-degenerate solution is exactly one that sits isometrically inside
//! the corresponding homogeneous space, which is what makes these equations
//! the engine of the reconstruction pipeline.
//!
//! Two pictures occur (see [`super::Picture`]): *restriction* forms act by
//! plain Clifford multiplication with slot vectors of the full algebra, and
//! *intrinsic* forms act through the even-subalgebra models of
//! [`IntrinsicKind`]. Forms of both pictures describing the same geometry
//! agree as operators node by node; the unit tests pin that equality.

use crate::chart::{Chart, ChartNode, SurfaceClass};
use crate::clifford::{IntrinsicKind, Multivector};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra3, SpaceKind};

use super::{Picture, PictureKind};

/// Which first-order equation a spinor field is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationForm {
    /// Restriction picture over a metric Lie group: the field of a surface in
    /// any catalog group, driven by the shape operator and the pulled-back
    /// group connection. Either surface class.
    GroupRestriction,
    /// Intrinsic picture of [`EquationForm::GroupRestriction`] for spacelike
    /// surfaces: same geometry through the even-subalgebra action.
    GroupIntrinsic,
    /// Intrinsic picture for spacelike surfaces in flat Minkowski 3-space,
    /// where the connection term drops and only the shape operator remains.
    FlatIntrinsic,
    /// Intrinsic picture of [`EquationForm::GroupRestriction`] for timelike
    /// surfaces (the real even model without a complex structure).
    GroupIntrinsicTimelike,
    /// Spacelike surfaces in the product of a hyperbolic plane with a line.
    ProductH2xR,
    /// Spacelike surfaces in the product of a line with the Lorentzian
    /// positive-curvature plane.
    ProductRxS12,
    /// Spacelike surfaces in the product of a line with the Lorentzian
    /// negative-curvature plane.
    ProductRxH12,
    /// Restriction picture for spacelike surfaces in the positive-curvature
    /// Lorentzian quadric of ℝ^{1,3}.
    DeSitterRestriction,
    /// Restriction picture for surfaces in the negative-curvature Lorentzian
    /// quadric of ℝ^{2,2}.
    AntiDeSitterRestriction,
    /// Restriction picture for spacelike surfaces in the product of a negated
    /// time axis with the round 2-sphere inside ℝ^{1,3}.
    ProductRminusS2Restriction,
    /// Intrinsic form for spacelike surfaces in a fibration-type group at
    /// parameters (κ, τ): shape term plus the τ-twist of the vertical leg.
    FibrationIntrinsic,
    /// The fibration form at the special parameters (κ, τ) = (−4, 1), where
    /// the vertical correction collapses to a single area-action term.
    Su12Intrinsic,
}

impl EquationForm {
    /// All forms, in a fixed presentation order.
    pub fn all() -> [EquationForm; 12] {
        [
            EquationForm::GroupRestriction,
            EquationForm::GroupIntrinsic,
            EquationForm::FlatIntrinsic,
            EquationForm::GroupIntrinsicTimelike,
            EquationForm::ProductH2xR,
            EquationForm::ProductRxS12,
            EquationForm::ProductRxH12,
            EquationForm::DeSitterRestriction,
            EquationForm::AntiDeSitterRestriction,
            EquationForm::ProductRminusS2Restriction,
            EquationForm::FibrationIntrinsic,
            EquationForm::Su12Intrinsic,
        ]
    }

    /// Stable kebab-case identifier (the serialized spelling).
    pub fn name(self) -> &'static str {
        match self {
            EquationForm::GroupRestriction => "group-restriction",
            EquationForm::GroupIntrinsic => "group-intrinsic",
            EquationForm::FlatIntrinsic => "flat-intrinsic",
            EquationForm::GroupIntrinsicTimelike => "group-intrinsic-timelike",
            EquationForm::ProductH2xR => "product-h2-x-r",
            EquationForm::ProductRxS12 => "product-r-x-s12",
            EquationForm::ProductRxH12 => "product-r-x-h12",
            EquationForm::DeSitterRestriction => "desitter-restriction",
            EquationForm::AntiDeSitterRestriction => "antidesitter-restriction",
            EquationForm::ProductRminusS2Restriction => "product-rminus-s2-restriction",
            EquationForm::FibrationIntrinsic => "fibration-intrinsic",
            EquationForm::Su12Intrinsic => "su12-intrinsic",
        }
    }
}

/// Everything about a (chart, form) pair that is fixed across nodes:
/// the picture, metric signs, catalog algebra, and space parameters.
pub(crate) struct RhsCtx {
    pub form: EquationForm,
    pub picture: Picture,
    pub feps: [f64; 2],
    pub amb_eps: [f64; 4],
    /// Cached ê₁ê₂ slot blade; left multiplication by it is the area action.
    pub blade: Multivector,
    alg: Option<LieAlgebra3>,
    /// Product-family curvature parameter (α or δ).
    param: f64,
    /// Fibration twist τ.
    tau: f64,
    /// Fibration combination σ + 2τ with σ = κ/(2τ).
    sp2t: f64,
    /// ⟨ν, ν⟩ of the quadric normal.
    eps_nu: f64,
    /// Whether the quadric normal ignores the first (time) coordinate, so the
    /// position term uses the spatial projection of X.
    spatial_nu: bool,
}

fn lorentzian_group_algebra(space: SpaceKind) -> Result<LieAlgebra3> {
    if space.quadric().is_some() {
        return Err(Error::Unsupported(format!(
            "form needs a group-backed ambient, got the quadric space {:?}",
            space.tag()
        )));
    }
    let alg = space
        .algebra()
        .ok_or_else(|| Error::invalid("space carries no catalog algebra"))?;
    if alg.eps != [1.0, 1.0, -1.0] {
        return Err(Error::Unsupported(
            "form needs a Lorentzian group ambient with signs (+,+,−)".into(),
        ));
    }
    Ok(alg)
}

fn require_class(chart: &Chart, class: SurfaceClass, form: EquationForm) -> Result<()> {
    if chart.class != class {
        return Err(Error::Unsupported(format!(
            "{} applies to {:?} charts only",
            form.name(),
            class
        )));
    }
    Ok(())
}

impl RhsCtx {
    pub(crate) fn new(chart: &Chart, form: EquationForm) -> Result<RhsCtx> {
        let space = chart.space;
        let mut alg = None;
        let mut param = 0.0;
        let mut tau = 0.0;
        let mut sp2t = 0.0;
        let mut eps_nu = 0.0;
        let mut spatial_nu = false;

        let picture = match form {
            EquationForm::GroupRestriction => {
                alg = Some(lorentzian_group_algebra(space)?);
                Picture::extrinsic_for_chart(chart)?
            }
            EquationForm::GroupIntrinsic => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                alg = Some(lorentzian_group_algebra(space)?);
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::FlatIntrinsic => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                if space != SpaceKind::MinkowskiR12 {
                    return Err(Error::Unsupported(
                        "flat-intrinsic applies to the flat Minkowski space only".into(),
                    ));
                }
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::GroupIntrinsicTimelike => {
                require_class(chart, SurfaceClass::Lorentzian, form)?;
                alg = Some(lorentzian_group_algebra(space)?);
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::ProductH2xR => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                match space {
                    SpaceKind::ProductH2xR { alpha } => param = alpha,
                    _ => {
                        return Err(Error::Unsupported(
                            "product-h2-x-r applies to the hyperbolic-plane product space".into(),
                        ))
                    }
                }
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::ProductRxS12 => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                match space {
                    SpaceKind::ProductRxS12 { alpha } => param = alpha,
                    _ => {
                        return Err(Error::Unsupported(
                            "product-r-x-s12 applies to the Lorentzian sphere product space"
                                .into(),
                        ))
                    }
                }
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::ProductRxH12 => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                match space {
                    SpaceKind::ProductRxH12 { delta } => param = delta,
                    _ => {
                        return Err(Error::Unsupported(
                            "product-r-x-h12 applies to the Lorentzian hyperbolic product space"
                                .into(),
                        ))
                    }
                }
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::DeSitterRestriction => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                if space != SpaceKind::DeSitter {
                    return Err(Error::Unsupported(
                        "desitter-restriction applies to the positive-curvature quadric".into(),
                    ));
                }
                eps_nu = 1.0;
                Picture::extrinsic_for_chart(chart)?
            }
            EquationForm::AntiDeSitterRestriction => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                if space != SpaceKind::AntiDeSitterQuadric {
                    return Err(Error::Unsupported(
                        "antidesitter-restriction applies to the negative-curvature quadric"
                            .into(),
                    ));
                }
                eps_nu = -1.0;
                Picture::extrinsic_for_chart(chart)?
            }
            EquationForm::ProductRminusS2Restriction => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                if space != SpaceKind::ProductRminusS2 {
                    return Err(Error::Unsupported(
                        "product-rminus-s2-restriction applies to the sphere product quadric"
                            .into(),
                    ));
                }
                eps_nu = 1.0;
                spatial_nu = true;
                Picture::extrinsic_for_chart(chart)?
            }
            EquationForm::FibrationIntrinsic => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                match space {
                    SpaceKind::Lkt { kappa, tau: t } => {
                        tau = t;
                        let sigma = kappa / (2.0 * t);
                        sp2t = sigma + 2.0 * t;
                    }
                    SpaceKind::Su12 => {
                        tau = 1.0;
                        sp2t = 0.0;
                    }
                    _ => {
                        return Err(Error::Unsupported(
                            "fibration-intrinsic applies to a fibration-type group".into(),
                        ))
                    }
                }
                Picture::intrinsic_for_chart(chart)?
            }
            EquationForm::Su12Intrinsic => {
                require_class(chart, SurfaceClass::Riemannian, form)?;
                let ok = match space {
                    SpaceKind::Su12 => true,
                    SpaceKind::Lkt { kappa, tau: t } => {
                        (kappa + 4.0).abs() < 1e-12 && (t - 1.0).abs() < 1e-12
                    }
                    _ => false,
                };
                if !ok {
                    return Err(Error::Unsupported(
                        "su12-intrinsic applies to the fibration at (κ, τ) = (−4, 1)".into(),
                    ));
                }
                tau = 1.0;
                sp2t = 0.0;
                Picture::intrinsic_for_chart(chart)?
            }
        };

        let blade = picture.area_blade();
        Ok(RhsCtx {
            form,
            picture,
            feps: chart.frame_eps(),
            amb_eps: chart.ambient_eps(),
            blade,
            alg,
            param,
            tau,
            sp2t,
            eps_nu,
            spatial_nu,
        })
    }

    /// The intrinsic model of the picture; only called by intrinsic arms.
    fn kind(&self) -> IntrinsicKind {
        match self.picture.kind {
            PictureKind::Intrinsic(k) => k,
            PictureKind::Extrinsic => unreachable!("intrinsic arm on an extrinsic picture"),
        }
    }

    /// Frame components of S(X) for X given in frame components.
    fn shape_applied(&self, d: &NodeData, xc: [f64; 2]) -> [f64; 2] {
        let mut s = [0.0; 2];
        for a in 0..2 {
            for b in 0..2 {
                s[a] += self.feps[a] * d.h_frame[a][b] * xc[b];
            }
        }
        s
    }

    /// ⟨X, T_i⟩ for the i-th ambient leg, X in frame components.
    fn x_dot_t(&self, d: &NodeData, xc: [f64; 2], i: usize) -> f64 {
        (0..2).map(|a| self.feps[a] * xc[a] * d.t_amb[i][a]).sum()
    }

    /// −½ Σ_a ε̂_a ê_a·B(X, ê_a)·ψ with B(X, ê_a) = ε_N h(X, ê_a) N̂, all as
    /// slot vectors. Shared by every restriction form.
    fn shape_term_restriction(
        &self,
        d: &NodeData,
        xc: [f64; 2],
        psi: &Multivector,
    ) -> Multivector {
        let sig = self.picture.sig;
        let n = self.picture.normal_slot;
        let mut out = Multivector::zero(sig);
        for a in 0..2 {
            let hx: f64 = (0..2).map(|b| d.h_frame[a][b] * xc[b]).sum();
            let coef = -0.5 * self.feps[a] * d.eps_n * hx;
            if coef == 0.0 {
                continue;
            }
            let ea = Multivector::basis_vector(sig, self.picture.tangent_slots[a]);
            let en = Multivector::basis_vector(sig, n);
            out = out + ea.gp(&en).gp(psi) * coef;
        }
        out
    }

    /// +½ Γ(X)·ψ with Γ(X) the group connection pulled back through the
    /// tangent/normal split ū_i = T_i + ν_i N̂ of the invariant legs.
    fn connection_term_restriction(
        &self,
        d: &NodeData,
        xc: [f64; 2],
        psi: &Multivector,
    ) -> Multivector {
        let alg = self.alg.as_ref().expect("group form carries its algebra");
        let sig = self.picture.sig;
        // Ambient (invariant-frame) components of X.
        let mut xi = [0.0; 3];
        for a in 0..2 {
            for i in 0..3 {
                xi[i] += xc[a] * d.ehat[a][i];
            }
        }
        let ubar: Vec<Multivector> = (0..3)
            .map(|j| self.picture.slot_vector(d.t_amb[j], d.nu_amb[j], 0.0))
            .collect();
        let mut biv = Multivector::zero(sig);
        for i in 0..3 {
            if xi[i] == 0.0 {
                continue;
            }
            for j in 0..3 {
                for k in (j + 1)..3 {
                    let c = alg.eps[j] * alg.eps[k] * alg.gamma[i][j][k] * xi[i];
                    if c == 0.0 {
                        continue;
                    }
                    let anti = ubar[j].gp(&ubar[k]) - ubar[k].gp(&ubar[j]);
                    biv = biv + anti * (0.5 * c);
                }
            }
        }
        biv.gp(psi) * 0.5
    }

    /// The intrinsic translation of [`RhsCtx::connection_term_restriction`]:
    /// tangent pairs act through the composed tangent action and the mixed
    /// tangent/normal pairs reduce to a vector action (with the complex
    /// structure in models that have one).
    fn connection_term_intrinsic(
        &self,
        d: &NodeData,
        xc: [f64; 2],
        psi: &Multivector,
    ) -> Multivector {
        let alg = self.alg.as_ref().expect("group form carries its algebra");
        let kind = self.kind();
        let mut xi = [0.0; 3];
        for a in 0..2 {
            for i in 0..3 {
                xi[i] += xc[a] * d.ehat[a][i];
            }
        }
        let mut out = Multivector::zero(self.picture.sig);
        for i in 0..3 {
            if xi[i] == 0.0 {
                continue;
            }
            for j in 0..3 {
                for k in (j + 1)..3 {
                    let c = alg.eps[j] * alg.eps[k] * alg.gamma[i][j][k] * xi[i];
                    if c == 0.0 {
                        continue;
                    }
                    let tj = d.t_amb[j];
                    let tk = d.t_amb[k];
                    let tjk = kind.act_tangent(tj, &kind.act_tangent(tk, psi));
                    let tkj = kind.act_tangent(tk, &kind.act_tangent(tj, psi));
                    out = out + (tjk - tkj) * (0.25 * c);
                    let w = [
                        d.nu_amb[k] * tj[0] - d.nu_amb[j] * tk[0],
                        d.nu_amb[k] * tj[1] - d.nu_amb[j] * tk[1],
                    ];
                    let wv = kind.act_tangent(w, psi);
                    let mixed = match kind {
                        IntrinsicKind::Lorentzian => wv,
                        _ => kind.act_i(&wv),
                    };
                    out = out + mixed * (0.5 * c);
                }
            }
        }
        out
    }

    /// +½ W(X)·(ε_ν ν)·ψ, the quadric position term: W is the derivative of
    /// the position normal (the identity, or the spatial projection for the
    /// sphere product), decomposed into slot components.
    fn position_term_quadric(&self, d: &NodeData, xc: [f64; 2], psi: &Multivector) -> Multivector {
        let sig = self.picture.sig;
        let nu_slot = self.picture.nu_slot.expect("quadric picture carries a ν slot");
        let (wt, wn) = if self.spatial_nu {
            let mut x_amb = [0.0; 4];
            for a in 0..2 {
                for i in 0..4 {
                    x_amb[i] += xc[a] * d.ehat[a][i];
                }
            }
            x_amb[0] = 0.0;
            let dot = |p: &[f64; 4], q: &[f64; 4]| -> f64 {
                (0..4).map(|i| self.amb_eps[i] * p[i] * q[i]).sum()
            };
            let wt = [dot(&x_amb, &d.ehat[0]), dot(&x_amb, &d.ehat[1])];
            let wn = d.eps_n * dot(&x_amb, &d.normal);
            (wt, wn)
        } else {
            (xc, 0.0)
        };
        let w_slot = self.picture.slot_vector(wt, wn, 0.0);
        let nu_vec = Multivector::basis_vector(sig, nu_slot) * self.eps_nu;
        w_slot.gp(&nu_vec).gp(psi) * 0.5
    }

    /// (i/2)·S(X)·ψ through the intrinsic action.
    fn shape_term_complex(&self, d: &NodeData, xc: [f64; 2], psi: &Multivector) -> Multivector {
        let kind = self.kind();
        kind.act_i(&kind.act_tangent(self.shape_applied(d, xc), psi)) * 0.5
    }

    /// The product-family vertical correction c·⟨X,T_leg⟩·(i T_m + ν_m)·ω·ψ.
    fn product_term(
        &self,
        d: &NodeData,
        xc: [f64; 2],
        psi: &Multivector,
        leg: usize,
        m: usize,
        coef: f64,
    ) -> Multivector {
        let kind = self.kind();
        let om = kind.act_omega(psi);
        let inner = kind.act_i(&kind.act_tangent(d.t_amb[m], &om)) + om * d.nu_amb[m];
        inner * (coef * self.x_dot_t(d, xc, leg))
    }

    /// Evaluate the equation right-hand side at one node for the tangent
    /// vector with frame components `xc` and the spinor value `psi`.
    pub(crate) fn rhs(&self, d: &NodeData, xc: [f64; 2], psi: &Multivector) -> Multivector {
        match self.form {
            EquationForm::GroupRestriction => {
                self.shape_term_restriction(d, xc, psi)
                    + self.connection_term_restriction(d, xc, psi)
            }
            EquationForm::GroupIntrinsic => {
                self.shape_term_complex(d, xc, psi) + self.connection_term_intrinsic(d, xc, psi)
            }
            EquationForm::FlatIntrinsic => self.shape_term_complex(d, xc, psi),
            EquationForm::GroupIntrinsicTimelike => {
                let kind = self.kind();
                kind.act_tangent(self.shape_applied(d, xc), psi) * -0.5
                    + self.connection_term_intrinsic(d, xc, psi)
            }
            EquationForm::ProductH2xR => {
                self.shape_term_complex(d, xc, psi)
                    + self.product_term(d, xc, psi, 1, 2, -0.5 * self.param)
            }
            EquationForm::ProductRxS12 => {
                self.shape_term_complex(d, xc, psi)
                    + self.product_term(d, xc, psi, 0, 1, 0.5 * self.param)
            }
            EquationForm::ProductRxH12 => {
                self.shape_term_complex(d, xc, psi)
                    + self.product_term(d, xc, psi, 2, 1, 0.5 * self.param)
            }
            EquationForm::DeSitterRestriction
            | EquationForm::AntiDeSitterRestriction
            | EquationForm::ProductRminusS2Restriction => {
                self.shape_term_restriction(d, xc, psi) + self.position_term_quadric(d, xc, psi)
            }
            EquationForm::FibrationIntrinsic | EquationForm::Su12Intrinsic => {
                let kind = self.kind();
                let om = kind.act_omega(psi);
                let twist = kind.act_i(&kind.act_tangent(xc, &om)) * self.tau;
                let vertical = if self.sp2t == 0.0 {
                    Multivector::zero(self.picture.sig)
                } else {
                    let inner =
                        kind.act_i(&kind.act_tangent(d.t_amb[2], &om)) + om * d.nu_amb[2];
                    inner * (self.sp2t * self.x_dot_t(d, xc, 2))
                };
                self.shape_term_complex(d, xc, psi) + (twist + vertical) * -0.5
            }
        }
    }
}

/// The per-node geometric data an equation right-hand side consumes, kept as
/// plain arrays so the transport solver can interpolate it along grid edges.
#[derive(Clone, Copy)]
pub(crate) struct NodeData {
    /// Ambient components of the frame legs ê₁, ê₂.
    pub ehat: [[f64; 4]; 2],
    /// Ambient components of the surface normal.
    pub normal: [f64; 4],
    /// ⟨N̂, N̂⟩.
    pub eps_n: f64,
    /// ∂_α = Σ_a coframe\[α\]\[a\] ê_a.
    pub coframe: [[f64; 2]; 2],
    /// Frame connection form ω₁₂(∂_α).
    pub omega: [f64; 2],
    /// Second fundamental form on the frame.
    pub h_frame: [[f64; 2]; 2],
    /// Tangent frame components of the ambient legs.
    pub t_amb: [[f64; 2]; 4],
    /// Normal components of the ambient legs.
    pub nu_amb: [f64; 4],
}

impl NodeData {
    pub(crate) fn from_node(chart: &Chart, node: &ChartNode) -> NodeData {
        NodeData {
            ehat: [chart.ehat_ambient(node, 0), chart.ehat_ambient(node, 1)],
            normal: node.normal,
            eps_n: node.eps_n,
            coframe: node.coframe,
            omega: node.omega,
            h_frame: node.h_frame,
            t_amb: node.t_amb,
            nu_amb: node.nu_amb,
        }
    }

    /// Componentwise linear interpolation between two nodes.
    pub(crate) fn lerp(a: &NodeData, b: &NodeData, t: f64) -> NodeData {
        let l = |x: f64, y: f64| x + t * (y - x);
        let mut out = *a;
        for i in 0..2 {
            for j in 0..4 {
                out.ehat[i][j] = l(a.ehat[i][j], b.ehat[i][j]);
            }
            for j in 0..2 {
                out.coframe[i][j] = l(a.coframe[i][j], b.coframe[i][j]);
                out.h_frame[i][j] = l(a.h_frame[i][j], b.h_frame[i][j]);
            }
            out.omega[i] = l(a.omega[i], b.omega[i]);
        }
        for i in 0..4 {
            out.normal[i] = l(a.normal[i], b.normal[i]);
            out.nu_amb[i] = l(a.nu_amb[i], b.nu_amb[i]);
            for j in 0..2 {
                out.t_amb[i][j] = l(a.t_amb[i][j], b.t_amb[i][j]);
            }
        }
        out
    }
}

// =============================================================================
// Unit tests: cross-picture operator identities
// =============================================================================
