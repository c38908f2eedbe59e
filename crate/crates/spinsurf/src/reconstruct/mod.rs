//! Recovery of the immersion from a spinor field.
//!
//! A unit spinor field φ on a chart determines a vector-valued pairing
//! ⟨⟨W·φ, φ⟩⟩ = τ(φ)·W·φ (τ the reversal), which sends every algebra slot
//! vector to an ambient vector. Applied to tangent vectors it yields the
//! 1-form ξ(X) = ⟨⟨X·φ, φ⟩⟩ ([`xi_form`]), an exact pointwise isometry; the
//! immersion itself is then recovered per ambient family:
//!
//! * **group-backed spaces** — ξ is the left logarithmic derivative of the
//!   immersion, so [`reconstruct`] integrates it through the group model
//!   outward from an anchor value ([`GroupModel::step`] per edge, midpoint
//!   sampled);
//! * **full quadrics** — the position is the pointwise pairing with the
//!   quadric normal slot, F = ⟨⟨ν·φ, φ⟩⟩; nothing is integrated, and
//!   containment in the quadric is automatic because the pairing preserves
//!   vector norms;
//! * **the negated-time × sphere product** — F = η·E₀ + ⟨⟨ν·φ, φ⟩⟩, where
//!   E₀ = ⟨⟨(T + f·N̂)·φ, φ⟩⟩ is the constant timelike axis recovered from
//!   the tangential/normal split (T, f) of the ambient time leg, and the
//!   height function η integrates dη(X) = −⟨X, T⟩ ([`integrate_eta`]).
//!
//! [`verify_immersion`] re-derives the full discrete geometry from recovered
//! positions and reports named defects (isometry, normal alignment, second
//! fundamental form, derivative match, containment) without judging them;
//! [`obj_text`], [`ply_text`], and [`csv_text`] serialize an immersion for
//! external viewers.

mod export;

pub use export::{csv_text, obj_text, ply_text};

use crate::chart::{extract_geometry, fd_stencil, AmbientPos, Chart, GridSpec, SurfaceClass};
use crate::clifford::{herm_product, IntrinsicKind, Multivector};
use crate::error::{Error, Result};
use crate::lie::{GroupModel, GroupPoint, SpaceKind};
use crate::spinor::{
    max_residual_interior, reversal_scalar, sweep, EquationForm, Picture, PictureKind, SpinorField,
};
use crate::tol;

// =============================================================================
// The vector-valued pairing and the 1-form ξ
// =============================================================================

/// Ambient components of the pairing ⟨⟨W·φ, φ⟩⟩ = τ(φ)·W·φ, where W is the
/// slot vector with tangent components `t`, normal component `n`, and quadric
/// position component `nu`. For a unit φ this is the image of the slot vector
/// under the frame rotation realized by φ, so slot vectors map to the
/// geometric legs they stand for.
pub fn pairing_ambient(
    picture: &Picture,
    phi: &Multivector,
    t: [f64; 2],
    n: f64,
    nu: f64,
) -> [f64; 4] {
    let w = picture.slot_vector(t, n, nu);
    let p = phi.reversal().gp(&w).gp(phi);
    picture.canonical_to_ambient(&p.vector_part())
}

/// Inner product of two stored ambient vectors in the metric of the
/// picture's ambient (⟨e_i, e_i⟩ = ε_i of the canonical signature).
pub fn ambient_dot(picture: &Picture, a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let ca = picture.ambient_to_canonical(a);
    let cb = picture.ambient_to_canonical(b);
    let sig = picture.sig;
    (0..sig.dim()).map(|i| sig.eps(i) * ca[i] * cb[i]).sum()
}

/// The tangent 1-form ξ of a spinor field: per node, ambient components of
/// ξ(∂u) and ξ(∂v).
#[derive(Clone, Debug)]
pub struct XiForm {
    pub nu: usize,
    pub nv: usize,
    /// `values[idx][alpha]` = ambient components of ξ(∂_α) at node `idx`
    /// (invariant-frame coordinates on group-backed spaces, flat coordinates
    /// on quadrics).
    pub values: Vec<[[f64; 4]; 2]>,
}

impl XiForm {
    pub fn at(&self, iu: usize, iv: usize, alpha: usize) -> &[f64; 4] {
        &self.values[iu * self.nv + iv][alpha]
    }
}

fn check_field_dims(chart: &Chart, field: &SpinorField) -> Result<()> {
    if field.nu != chart.nu || field.nv != chart.nv {
        return Err(Error::invalid(format!(
            "field grid {}x{} does not match the chart grid {}x{}",
            field.nu, field.nv, chart.nu, chart.nv
        )));
    }
    Ok(())
}

/// Largest deviation of τ(φ)·φ from the unit scalar over all nodes.
fn max_unit_defect(field: &SpinorField) -> f64 {
    let one = Multivector::one(field.sig);
    field
        .values
        .iter()
        .map(|phi| (phi.reversal().gp(phi) - one.clone()).coeff_norm())
        .fold(0.0, f64::max)
}

fn require_unit(field: &SpinorField) -> Result<()> {
    let defect = max_unit_defect(field);
    if defect > tol::UNIT_NORM_DRIFT {
        return Err(Error::OutOfRange(format!(
            "spinor field is not unit-normalized: pairing defect {defect:.3e} exceeds {:.0e}",
            tol::UNIT_NORM_DRIFT
        )));
    }
    Ok(())
}

/// Component evaluation of ξ(X) through the even-model split ψ = ψ⁺ + ψ⁻:
/// with A = ⟨X∙ψ⁻, ψ⁺⟩ and B = ⟨X∙ψ⁺, α(ψ⁺)⟩ − ⟨X∙ψ⁻, α(ψ⁻)⟩ (Hermitian
/// products of the model, α its quaternionic structure), the normal slot
/// carries 2·Im A (2·Re A on the positive-definite model, whose quaternion
/// chart orients the area element oppositely relative to the normal) and the
/// tangent slots carry (Re B, Im B). Returns canonical algebra components.
fn xi_components_via_model(
    picture: &Picture,
    kind: IntrinsicKind,
    psi: &Multivector,
    x: [f64; 2],
) -> [f64; 4] {
    let (p, m) = kind.split_pm(psi);
    let xp = kind.act_tangent(x, &p);
    let xm = kind.act_tangent(x, &m);
    let a = herm_product(kind, &xm, &p);
    let bp = herm_product(kind, &xp, &kind.alpha_structure(&p));
    let bm = herm_product(kind, &xm, &kind.alpha_structure(&m));
    let b = (bp.0 - bm.0, bp.1 - bm.1);
    let normal = match kind {
        IntrinsicKind::Euclidean => 2.0 * a.0,
        _ => 2.0 * a.1,
    };
    let mut c = [0.0; 4];
    c[picture.normal_slot] = normal;
    c[picture.tangent_slots[0]] = b.0;
    c[picture.tangent_slots[1]] = b.1;
    c
}

/// The even-model kind sharing slots with an extrinsic picture, when the
/// model carries the complex structure the component formula needs.
fn component_model(chart: &Chart, picture: &Picture) -> Option<IntrinsicKind> {
    if chart.class != SurfaceClass::Riemannian || chart.space.algebra().is_none() {
        return None;
    }
    match picture.sig.dim() {
        3 if picture.sig.timelike() == 1 => Some(IntrinsicKind::Riemannian),
        3 if picture.sig.timelike() == 0 => Some(IntrinsicKind::Euclidean),
        _ => None,
    }
}

/// The 1-form ξ(X) = ⟨⟨X·φ, φ⟩⟩ of a unit spinor field.
///
/// Preconditions: the field matches the chart's restriction algebra and is
/// unit-normalized to within [`tol::UNIT_NORM_DRIFT`].
///
/// On spacelike charts over group-backed ambients the direct pairing is also
/// cross-evaluated through the even-model component formula; the two
/// independent pipelines must agree to [`tol::CROSS_CHECK`], which guards the
/// slot dictionaries against drift.
pub fn xi_form(chart: &Chart, field: &SpinorField) -> Result<XiForm> {
    let picture = Picture::extrinsic_for_chart(chart)?;
    check_field_dims(chart, field)?;
    if field.sig != picture.sig {
        return Err(Error::invalid(
            "field algebra does not match the chart's restriction picture",
        ));
    }
    require_unit(field)?;
    let model = component_model(chart, &picture);
    let mut values = vec![[[0.0; 4]; 2]; chart.nu * chart.nv];
    for iu in 0..chart.nu {
        for iv in 0..chart.nv {
            let node = chart.node(iu, iv);
            let phi = field.value(iu, iv);
            for alpha in 0..2 {
                let c = node.coframe[alpha];
                let w = picture.slot_vector(c, 0.0, 0.0);
                let p = phi.reversal().gp(&w).gp(phi);
                let direct = p.vector_part();
                if let Some(kind) = model {
                    let via = xi_components_via_model(&picture, kind, phi, c);
                    let diff = (0..4)
                        .map(|k| (direct[k] - via[k]).abs())
                        .fold(0.0, f64::max);
                    if diff > tol::CROSS_CHECK {
                        return Err(Error::Tolerance {
                            what: format!(
                                "component formula disagrees with the direct pairing at node ({iu}, {iv})"
                            ),
                            value: diff,
                            limit: tol::CROSS_CHECK,
                        });
                    }
                }
                values[chart.idx(iu, iv)][alpha] = picture.canonical_to_ambient(&direct);
            }
        }
    }
    Ok(XiForm { nu: chart.nu, nv: chart.nv, values })
}

// =============================================================================
// Scalar 1-form integration (the product-space height)
// =============================================================================

/// Result of integrating a closed scalar 1-form over the chart grid.
#[derive(Clone, Debug)]
pub struct EtaResult {
    /// Per-node antiderivative, zero at the grid-center anchor.
    pub eta: Vec<f64>,
    /// Largest discrete curl of the coefficient fields.
    pub max_curl: f64,
    /// Largest trapezoid circulation around a single grid cell.
    pub max_loop_defect: f64,
}

/// Largest mixed-difference defect D_u(w_v) − D_v(w_u) over the grid.
fn curl_max(nu: usize, nv: usize, hu: f64, hv: f64, w: &[[f64; 2]]) -> f64 {
    let mut worst = 0.0f64;
    for iu in 0..nu {
        let (uidx, uw) = fd_stencil(iu, nu);
        for iv in 0..nv {
            let (vidx, vw) = fd_stencil(iv, nv);
            let mut du_wv = 0.0;
            for k in 0..3 {
                du_wv += uw[k] * w[uidx[k] * nv + iv][1];
            }
            let mut dv_wu = 0.0;
            for k in 0..3 {
                dv_wu += vw[k] * w[iu * nv + vidx[k]][0];
            }
            worst = worst.max((du_wv / (2.0 * hu) - dv_wu / (2.0 * hv)).abs());
        }
    }
    worst
}

/// Integrate the scalar 1-form dη(X) = −⟨X, T⟩ from the tangential field T
/// given by orthonormal-frame components per node.
///
/// Rejects path-dependent data: the discrete curl of the coefficients must
/// stay below [`tol::ONE_FORM_CLOSEDNESS`] relative to the coefficient scale.
/// The antiderivative is anchored to zero at the grid center; the largest
/// single-cell circulation is reported alongside it.
pub fn integrate_eta(chart: &Chart, t_frame: &[[f64; 2]]) -> Result<EtaResult> {
    if t_frame.len() != chart.nu * chart.nv {
        return Err(Error::invalid("tangential field length does not match the chart grid"));
    }
    let feps = chart.frame_eps();
    // Coefficients w_alpha = dη(∂_α) = −⟨∂_α, T⟩.
    let w: Vec<[f64; 2]> = chart
        .nodes
        .iter()
        .zip(t_frame)
        .map(|(node, t)| {
            let mut out = [0.0; 2];
            for alpha in 0..2 {
                let c = node.coframe[alpha];
                out[alpha] = -(feps[0] * c[0] * t[0] + feps[1] * c[1] * t[1]);
            }
            out
        })
        .collect();
    let wmax = w.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let max_curl = curl_max(chart.nu, chart.nv, chart.hu, chart.hv, &w);
    let limit = tol::ONE_FORM_CLOSEDNESS * (1.0 + wmax);
    if max_curl > limit {
        return Err(Error::Tolerance {
            what: "height 1-form is not closed".into(),
            value: max_curl,
            limit,
        });
    }
    let mut eta = vec![0.0; chart.nu * chart.nv];
    let anchor = (chart.nu / 2, chart.nv / 2);
    let nv = chart.nv;
    sweep(chart.nu, chart.nv, anchor, |from, to| {
        let (alpha, h_signed) = if to.0 != from.0 {
            (0, if to.0 > from.0 { chart.hu } else { -chart.hu })
        } else {
            (1, if to.1 > from.1 { chart.hv } else { -chart.hv })
        };
        let mid = 0.5 * (w[from.0 * nv + from.1][alpha] + w[to.0 * nv + to.1][alpha]);
        eta[to.0 * nv + to.1] = eta[from.0 * nv + from.1] + h_signed * mid;
        Ok(())
    })?;
    let mut max_loop_defect = 0.0f64;
    for iu in 0..chart.nu - 1 {
        for iv in 0..chart.nv - 1 {
            let id = |a: usize, b: usize| a * nv + b;
            let circ = 0.5 * chart.hu * (w[id(iu, iv)][0] + w[id(iu + 1, iv)][0])
                + 0.5 * chart.hv * (w[id(iu + 1, iv)][1] + w[id(iu + 1, iv + 1)][1])
                - 0.5 * chart.hu * (w[id(iu, iv + 1)][0] + w[id(iu + 1, iv + 1)][0])
                - 0.5 * chart.hv * (w[id(iu, iv)][1] + w[id(iu, iv + 1)][1]);
            max_loop_defect = max_loop_defect.max(circ.abs());
        }
    }
    Ok(EtaResult { eta, max_curl, max_loop_defect })
}

// =============================================================================
// Immersion recovery
// =============================================================================

/// A recovered immersion: one ambient position per chart node.
#[derive(Clone, Debug)]
pub struct ImmersionField {
    pub space: SpaceKind,
    pub nu: usize,
    pub nv: usize,
    pub pos: Vec<AmbientPos>,
    /// Product ambient only: the recovered constant timelike axis.
    pub time_axis: Option<[f64; 4]>,
    /// Product ambient only: the largest deviation of the per-node axis
    /// pairing from its chart average before snapping.
    pub time_axis_drift: Option<f64>,
}

impl ImmersionField {
    pub fn position(&self, iu: usize, iv: usize) -> &AmbientPos {
        &self.pos[iu * self.nv + iv]
    }
}

/// The restriction-picture equation a field must satisfy before its
/// integral can be trusted; `None` for the flat positive-definite helper
/// ambient, which is gated on closedness of ξ instead.
fn gate_form(space: SpaceKind) -> Option<EquationForm> {
    match space {
        SpaceKind::DeSitter => Some(EquationForm::DeSitterRestriction),
        SpaceKind::AntiDeSitterQuadric => Some(EquationForm::AntiDeSitterRestriction),
        SpaceKind::ProductRminusS2 => Some(EquationForm::ProductRminusS2Restriction),
        SpaceKind::EuclideanR3 => None,
        _ => Some(EquationForm::GroupRestriction),
    }
}

fn require_integrable(chart: &Chart, field: &SpinorField, xi: &XiForm) -> Result<()> {
    match gate_form(chart.space) {
        Some(form) => {
            let residual = max_residual_interior(chart, form, field, 0)?;
            if residual > tol::RECONSTRUCT_RESIDUAL {
                return Err(Error::Tolerance {
                    what: format!(
                        "field does not satisfy the {} equation; refusing to integrate",
                        form.name()
                    ),
                    value: residual,
                    limit: tol::RECONSTRUCT_RESIDUAL,
                });
            }
        }
        None => {
            // Abelian ambient: path independence is componentwise closedness.
            let mut wmax = 0.0f64;
            let mut worst = 0.0f64;
            for k in 0..3 {
                let w: Vec<[f64; 2]> = xi
                    .values
                    .iter()
                    .map(|v| {
                        wmax = wmax.max(v[0][k].abs()).max(v[1][k].abs());
                        [v[0][k], v[1][k]]
                    })
                    .collect();
                worst = worst.max(curl_max(chart.nu, chart.nv, chart.hu, chart.hv, &w));
            }
            let limit = tol::ONE_FORM_CLOSEDNESS * (1.0 + wmax);
            if worst > limit {
                return Err(Error::Tolerance {
                    what: "derivative form is not closed; refusing to integrate".into(),
                    value: worst,
                    limit,
                });
            }
        }
    }
    Ok(())
}

fn group_point(pos: &AmbientPos) -> Result<&GroupPoint> {
    match pos {
        AmbientPos::Group(p) => Ok(p),
        AmbientPos::Flat(_) => Err(Error::invalid("expected a group-model anchor position")),
    }
}

fn flat_point(pos: &AmbientPos) -> Result<[f64; 4]> {
    match pos {
        AmbientPos::Flat(p) => Ok(*p),
        AmbientPos::Group(_) => Err(Error::invalid("expected a flat ambient position")),
    }
}

fn darboux_integrate(
    chart: &Chart,
    model: &GroupModel,
    xi: &XiForm,
    anchor_value: GroupPoint,
) -> Result<Vec<AmbientPos>> {
    let anchor = (chart.nu / 2, chart.nv / 2);
    let nv = chart.nv;
    let mut pos = vec![AmbientPos::Group(model.identity()); chart.nu * chart.nv];
    pos[anchor.0 * nv + anchor.1] = AmbientPos::Group(anchor_value);
    let mut scratch: Vec<Option<GroupPoint>> = vec![None; chart.nu * chart.nv];
    if let AmbientPos::Group(g) = &pos[anchor.0 * nv + anchor.1] {
        scratch[anchor.0 * nv + anchor.1] = Some(g.clone());
    }
    sweep(chart.nu, chart.nv, anchor, |from, to| {
        let (alpha, h_signed) = if to.0 != from.0 {
            (0, if to.0 > from.0 { chart.hu } else { -chart.hu })
        } else {
            (1, if to.1 > from.1 { chart.hv } else { -chart.hv })
        };
        let a = &xi.values[from.0 * nv + from.1][alpha];
        let b = &xi.values[to.0 * nv + to.1][alpha];
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])];
        let prev = scratch[from.0 * nv + from.1]
            .clone()
            .expect("sweep visits nodes outward from the anchor");
        scratch[to.0 * nv + to.1] = Some(model.step(&prev, &mid, h_signed));
        Ok(())
    })?;
    for (slot, p) in pos.iter_mut().zip(scratch) {
        *slot = AmbientPos::Group(p.expect("sweep covers every node"));
    }
    Ok(pos)
}

/// Recover the immersion determined by a unit spinor field on a chart.
///
/// The field must satisfy the chart's restriction equation to within
/// [`tol::RECONSTRUCT_RESIDUAL`] (componentwise closedness of ξ on the flat
/// positive-definite ambient); fields that fail are refused with the measured
/// residual. `anchor` overrides the recovered position at the grid-center
/// node: the integrated families start there, and the product family shifts
/// its height gauge so the recovered time coordinate matches there. Full
/// quadrics accept no anchor — their positions are pointwise pairings with
/// no translational freedom.
pub fn reconstruct(
    chart: &Chart,
    field: &SpinorField,
    anchor: Option<AmbientPos>,
) -> Result<ImmersionField> {
    let xi = xi_form(chart, field)?;
    require_integrable(chart, field, &xi)?;
    let picture = Picture::extrinsic_for_chart(chart)?;
    let anchor_node = (chart.nu / 2, chart.nv / 2);
    let mut time_axis = None;
    let mut time_axis_drift = None;

    let pos: Vec<AmbientPos> = match chart.space {
        SpaceKind::DeSitter | SpaceKind::AntiDeSitterQuadric => {
            if anchor.is_some() {
                return Err(Error::Unsupported(
                    "quadric positions are pointwise pairings; there is no anchor freedom".into(),
                ));
            }
            field
                .values
                .iter()
                .map(|phi| AmbientPos::Flat(pairing_ambient(&picture, phi, [0.0, 0.0], 0.0, 1.0)))
                .collect()
        }
        SpaceKind::ProductRminusS2 => {
            // Constant timelike axis from the split of the ambient time leg.
            let axes: Vec<[f64; 4]> = chart
                .nodes
                .iter()
                .zip(&field.values)
                .map(|(node, phi)| {
                    pairing_ambient(&picture, phi, node.t_amb[0], node.nu_amb[0], 0.0)
                })
                .collect();
            let mut avg = [0.0; 4];
            for a in &axes {
                for k in 0..4 {
                    avg[k] += a[k] / axes.len() as f64;
                }
            }
            let drift = axes
                .iter()
                .map(|a| (0..4).map(|k| (a[k] - avg[k]).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            let norm = -ambient_dot(&picture, &avg, &avg);
            if norm <= 0.0 {
                return Err(Error::DivisionSingularity(
                    "recovered time axis is not timelike".into(),
                ));
            }
            let scale = norm.sqrt().recip();
            for k in 0..4 {
                avg[k] *= scale;
            }
            if avg[0].abs() < 0.5 {
                return Err(Error::DivisionSingularity(
                    "recovered time axis has a degenerate time component".into(),
                ));
            }
            let t_frame: Vec<[f64; 2]> = chart.nodes.iter().map(|n| n.t_amb[0]).collect();
            let eta = integrate_eta(chart, &t_frame)?;
            let spheres: Vec<[f64; 4]> = field
                .values
                .iter()
                .map(|phi| pairing_ambient(&picture, phi, [0.0, 0.0], 0.0, 1.0))
                .collect();
            // Height gauge: match the anchor's time coordinate.
            let target = match &anchor {
                Some(p) => flat_point(p)?[0],
                None => flat_point(&chart.node(anchor_node.0, anchor_node.1).pos)?[0],
            };
            let p_anchor = spheres[anchor_node.0 * chart.nv + anchor_node.1];
            let shift = (target - p_anchor[0]) / avg[0];
            time_axis = Some(avg);
            time_axis_drift = Some(drift);
            spheres
                .iter()
                .zip(&eta.eta)
                .map(|(p, h)| {
                    let mut out = *p;
                    for k in 0..4 {
                        out[k] += (h + shift) * avg[k];
                    }
                    AmbientPos::Flat(out)
                })
                .collect()
        }
        _ => {
            let model = chart
                .space
                .model()
                .ok_or_else(|| Error::invalid("space carries no group model"))?;
            let anchor_value = match &anchor {
                Some(p) => group_point(p)?.clone(),
                None => group_point(&chart.node(anchor_node.0, anchor_node.1).pos)?.clone(),
            };
            darboux_integrate(chart, &model, &xi, anchor_value)?
        }
    };
    Ok(ImmersionField {
        space: chart.space,
        nu: chart.nu,
        nv: chart.nv,
        pos,
        time_axis,
        time_axis_drift,
    })
}

/// The chart's own sampled positions as an immersion field (the reference
/// against which recoveries and defect baselines are measured).
pub fn chart_positions(chart: &Chart) -> ImmersionField {
    ImmersionField {
        space: chart.space,
        nu: chart.nu,
        nv: chart.nv,
        pos: chart.nodes.iter().map(|n| n.pos.clone()).collect(),
        time_axis: None,
        time_axis_drift: None,
    }
}

/// Largest pointwise separation between an immersion and the chart's own
/// positions over nodes at least `margin` from the boundary (group models
/// measure the relative-logarithm norm, flat ambients the Euclidean norm).
pub fn position_error(chart: &Chart, imm: &ImmersionField, margin: usize) -> Result<f64> {
    if imm.nu != chart.nu || imm.nv != chart.nv || imm.space != chart.space {
        return Err(Error::invalid("immersion does not match the chart"));
    }
    let model = chart.space.model();
    let mut worst = 0.0f64;
    for (iu, iv) in chart.interior(margin) {
        let a = &chart.node(iu, iv).pos;
        let b = imm.position(iu, iv);
        let d = match (a, b, &model) {
            (AmbientPos::Group(p), AmbientPos::Group(q), Some(m)) => m.displacement(p, q),
            (AmbientPos::Flat(p), AmbientPos::Flat(q), _) => {
                (0..4).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>().sqrt()
            }
            _ => return Err(Error::invalid("mixed ambient position kinds")),
        };
        worst = worst.max(d);
    }
    Ok(worst)
}

// =============================================================================
// Verification report
// =============================================================================

/// Named defect measurements comparing a recovered immersion against the
/// chart geometry and the spinor field that produced it. Purely diagnostic:
/// building the report never judges the values.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ImmersionReport {
    /// max |g_rec − g_chart| over nodes and metric entries.
    pub isometry_defect: f64,
    /// max |⟨dF(ê_a), N_φ⟩| with N_φ the pairing image of the normal slot.
    pub normal_defect: f64,
    /// max |h_rec − h_chart| over nodes and frame components.
    pub shape_defect: f64,
    /// max |dF(∂_α) − ξ(∂_α)| componentwise.
    pub derivative_defect: f64,
    /// Quadric ambients: max |quadric constraint violation|.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub containment_defect: Option<f64>,
    /// Group ambients: max group-model membership defect.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership_defect: Option<f64>,
    /// Product ambient: largest deviation of the recovered time axis pairing
    /// from its chart average.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_axis_drift: Option<f64>,
    /// Product ambient: max |⟨sphere pairing, axis pairing⟩|.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthogonality_defect: Option<f64>,
}

/// Re-derive the discrete geometry from recovered positions and measure how
/// faithfully the immersion realizes the chart's first and second fundamental
/// forms and the field's derivative form.
pub fn verify_immersion(
    chart: &Chart,
    field: &SpinorField,
    imm: &ImmersionField,
) -> Result<ImmersionReport> {
    if imm.nu != chart.nu || imm.nv != chart.nv || imm.space != chart.space {
        return Err(Error::invalid("immersion does not match the chart"));
    }
    check_field_dims(chart, field)?;
    let picture = Picture::extrinsic_for_chart(chart)?;
    let xi = xi_form(chart, field)?;
    let grid = GridSpec::new(
        chart.nu,
        chart.nv,
        (chart.u0, chart.u0 + chart.hu * (chart.nu - 1) as f64),
        (chart.v0, chart.v0 + chart.hv * (chart.nv - 1) as f64),
    );
    // Re-extраition chooses its own normal orientation; align it with the
    // pairing image of the normal slot at the anchor.
    let anchor = (chart.nu / 2, chart.nv / 2);
    let n_phi_anchor =
        pairing_ambient(&picture, field.value(anchor.0, anchor.1), [0.0, 0.0], 1.0, 0.0);
    let mut re = extract_geometry(chart.space, chart.class, &grid, 1.0, imm.pos.clone())?;
    let aligned: f64 = (0..4)
        .map(|k| re.node(anchor.0, anchor.1).normal[k] * n_phi_anchor[k])
        .sum();
    if aligned < 0.0 {
        re = extract_geometry(chart.space, chart.class, &grid, -1.0, imm.pos.clone())?;
    }

    let mut isometry_defect = 0.0f64;
    let mut normal_defect = 0.0f64;
    let mut shape_defect = 0.0f64;
    let mut derivative_defect = 0.0f64;
    for iu in 0..chart.nu {
        for iv in 0..chart.nv {
            let nd = chart.node(iu, iv);
            let rd = re.node(iu, iv);
            let phi = field.value(iu, iv);
            for a in 0..2 {
                for b in 0..2 {
                    isometry_defect = isometry_defect.max((rd.g[a][b] - nd.g[a][b]).abs());
                    shape_defect = shape_defect.max((rd.h_frame[a][b] - nd.h_frame[a][b]).abs());
                }
            }
            for alpha in 0..2 {
                let want = xi.at(iu, iv, alpha);
                let got = rd.xi[alpha];
                let d: f64 = (0..4).map(|k| (got[k] - want[k]).powi(2)).sum::<f64>().sqrt();
                derivative_defect = derivative_defect.max(d);
            }
            let n_phi = pairing_ambient(&picture, phi, [0.0, 0.0], 1.0, 0.0);
            for a in 0..2 {
                // dF(ê_a) through the chart's frame coefficients and the
                // re-derived tangents.
                let mut df = [0.0; 4];
                for alpha in 0..2 {
                    for k in 0..4 {
                        df[k] += nd.frame[a][alpha] * rd.xi[alpha][k];
                    }
                }
                normal_defect = normal_defect.max(ambient_dot(&picture, &df, &n_phi).abs());
            }
        }
    }

    let mut containment_defect = None;
    let mut membership_defect = None;
    let mut time_axis_drift = None;
    let mut orthogonality_defect = None;
    if let Some(q) = chart.space.quadric() {
        let mut worst = 0.0f64;
        for p in &imm.pos {
            worst = worst.max(q.violation(&flat_point(p)?).abs());
        }
        containment_defect = Some(worst);
    }
    if let Some(model) = chart.space.model() {
        let mut worst = 0.0f64;
        for p in &imm.pos {
            worst = worst.max(model.membership_defect(group_point(p)?));
        }
        membership_defect = Some(worst);
    }
    if chart.space == SpaceKind::ProductRminusS2 {
        let axes: Vec<[f64; 4]> = chart
            .nodes
            .iter()
            .zip(&field.values)
            .map(|(node, phi)| {
                pairing_ambient(&picture, phi, node.t_amb[0], node.nu_amb[0], 0.0)
            })
            .collect();
        let mut avg = [0.0; 4];
        for a in &axes {
            for k in 0..4 {
                avg[k] += a[k] / axes.len() as f64;
            }
        }
        let drift = axes
            .iter()
            .map(|a| (0..4).map(|k| (a[k] - avg[k]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let mut ortho = 0.0f64;
        for (phi, axis) in field.values.iter().zip(&axes) {
            let sphere = pairing_ambient(&picture, phi, [0.0, 0.0], 0.0, 1.0);
            ortho = ortho.max(ambient_dot(&picture, &sphere, axis).abs());
        }
        time_axis_drift = Some(drift);
        orthogonality_defect = Some(ortho);
    }

    Ok(ImmersionReport {
        isometry_defect,
        normal_defect,
        shape_defect,
        derivative_defect,
        containment_defect,
        membership_defect,
        time_axis_drift,
        orthogonality_defect,
    })
}

// =============================================================================
// Unit tests
// =============================================================================
