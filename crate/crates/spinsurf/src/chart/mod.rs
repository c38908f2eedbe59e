//! Discrete surface charts: rectangular parameter grids carrying the full
//! first- and second-order geometry of an immersed surface.
//!
//! A [`Chart`] samples an immersion F: [u0,u1]×[v0,v1] → M on an nu×nv grid,
//! where M is one of the catalog spaces. All geometric fields are recovered
//! **numerically from the positions alone** with second-order finite
//! differences (one-sided second-order stencils on the boundary):
//!
//! * for group-backed spaces the tangent data lives in invariant-frame
//!   (algebra) coordinates via the left logarithmic derivative
//!   ξ_α = log(F⁻¹ ∂_α F), and the ambient covariant derivative of a frame
//!   coefficient field W is ∂_α W + ∇̄_{ξ_α} W with the catalog connection;
//! * for quadric spaces the tangent data lives in the flat 4-dimensional
//!   ambient, the covariant derivative is the plain componentwise derivative,
//!   and each node also carries the quadric unit normal ν.
//!
//! Per node the chart stores the induced metric, an orthonormal tangent frame
//! (ê₁, ê₂) with signs (+,+) on Riemannian and (+,−) on Lorentzian charts
//! (spacelike leg first), the frame connection form ω₁₂, the second
//! fundamental form and mean curvature, the surface normal N̂ with its sign
//! ⟨N̂,N̂⟩, and the tangent/normal split e_i = T_i + ν_i N̂ of every ambient
//! basis leg.

mod build;

pub use build::{
    antidesitter_plane, enneper_patch, euclidean_catenoid, exp_slice, fibration_disk, flat_graph,
    maximal_catenoid, product_sphere_slice, pseudosphere, sphere_slice, su12_disk,
    su12_vertical_cylinder, GridSpec,
};

use crate::error::{Error, Result};
use crate::lie::{GroupModel, GroupPoint, LieAlgebra3, QuadricConstraint, SpaceKind};
use crate::tol::{METRIC_DEGENERACY, MIN_GRID};

/// Signature of the induced metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SurfaceClass {
    /// Positive-definite induced metric; frame signs (+,+).
    Riemannian,
    /// Indefinite induced metric; frame signs (+,−), spacelike leg first.
    Lorentzian,
}

impl SurfaceClass {
    /// Signs (⟨ê₁,ê₁⟩, ⟨ê₂,ê₂⟩) of the orthonormal tangent frame.
    pub fn frame_eps(&self) -> [f64; 2] {
        match self {
            SurfaceClass::Riemannian => [1.0, 1.0],
            SurfaceClass::Lorentzian => [1.0, -1.0],
        }
    }
}

/// A position in the ambient model.
#[derive(Clone, Debug)]
pub enum AmbientPos {
    /// Element of a group model.
    Group(GroupPoint),
    /// Point of a flat 4-dimensional quadric ambient.
    Flat([f64; 4]),
}

/// Everything the library knows about the surface at one grid node.
///
/// Ambient vectors are stored as `[f64; 4]`; group-backed spaces use the
/// first three entries (invariant-frame coordinates) and keep the last at 0.
#[derive(Clone, Debug)]
pub struct ChartNode {
    /// The sampled position.
    pub pos: AmbientPos,
    /// Tangent vectors ∂_u F, ∂_v F in ambient coordinates.
    pub xi: [[f64; 4]; 2],
    /// Unit surface normal inside the homogeneous space.
    pub normal: [f64; 4],
    /// ⟨N̂, N̂⟩ = ±1.
    pub eps_n: f64,
    /// Quadric unit normal at the point (zero for group-backed spaces).
    pub nu_vec: [f64; 4],
    /// Induced metric g_αβ = ⟨ξ_α, ξ_β⟩.
    pub g: [[f64; 2]; 2],
    /// Inverse induced metric.
    pub ginv: [[f64; 2]; 2],
    /// Orthonormal tangent frame: ê_a = Σ_α frame\[a\]\[α\] ∂_α.
    pub frame: [[f64; 2]; 2],
    /// Inverse relation: ∂_α = Σ_a coframe\[α\]\[a\] ê_a.
    pub coframe: [[f64; 2]; 2],
    /// Connection form ω₁₂(∂_α) = ⟨∇_{∂_α} ê₁, ê₂⟩ of the tangent frame.
    pub omega: [f64; 2],
    /// Second fundamental form on the frame: h\[a\]\[b\] = ⟨∇̄_{ê_a} ê_b, N̂⟩.
    pub h_frame: [[f64; 2]; 2],
    /// Mean curvature H = ½ Σ_a ε̂_a h(ê_a, ê_a).
    pub hmean: f64,
    /// Tangent parts of the ambient basis legs, in frame coefficients:
    /// e_i = Σ_a t_amb\[i\]\[a\] ê_a + nu_amb\[i\] N̂.
    pub t_amb: [[f64; 2]; 4],
    /// Normal components of the ambient basis legs.
    pub nu_amb: [f64; 4],
}

/// A sampled surface with its derived geometry.
#[derive(Clone, Debug)]
pub struct Chart {
    /// The ambient homogeneous space.
    pub space: SpaceKind,
    /// Signature of the induced metric.
    pub class: SurfaceClass,
    /// Grid nodes along u and v.
    pub nu: usize,
    pub nv: usize,
    /// Grid spacings.
    pub hu: f64,
    pub hv: f64,
    /// Parameter origin.
    pub u0: f64,
    pub v0: f64,
    /// Row-major nodes: index = iu * nv + iv.
    pub nodes: Vec<ChartNode>,
}

impl Chart {
    /// Linear index of a node.
    pub fn idx(&self, iu: usize, iv: usize) -> usize {
        debug_assert!(iu < self.nu && iv < self.nv);
        iu * self.nv + iv
    }

    /// The node at (iu, iv).
    pub fn node(&self, iu: usize, iv: usize) -> &ChartNode {
        &self.nodes[self.idx(iu, iv)]
    }

    /// Parameter values at a node.
    pub fn uv(&self, iu: usize, iv: usize) -> (f64, f64) {
        (self.u0 + iu as f64 * self.hu, self.v0 + iv as f64 * self.hv)
    }

    /// Frame signs of the induced metric.
    pub fn frame_eps(&self) -> [f64; 2] {
        self.class.frame_eps()
    }

    /// Number of meaningful ambient coordinates (3 for groups, 4 for quadrics).
    pub fn ambient_dim(&self) -> usize {
        if self.space.quadric().is_some() {
            4
        } else {
            3
        }
    }

    /// Metric signs of the ambient coordinates, padded with zeros.
    pub fn ambient_eps(&self) -> [f64; 4] {
        ambient_eps(self.space)
    }

    /// Ambient metric pairing of stored ambient vectors.
    pub fn ambient_dot(&self, x: &[f64; 4], y: &[f64; 4]) -> f64 {
        let eps = self.ambient_eps();
        (0..4).map(|i| eps[i] * x[i] * y[i]).sum()
    }

    /// The frame leg ê_a at a node as an ambient vector.
    pub fn ehat_ambient(&self, node: &ChartNode, a: usize) -> [f64; 4] {
        let mut out = [0.0; 4];
        for alpha in 0..2 {
            for k in 0..4 {
                out[k] += node.frame[a][alpha] * node.xi[alpha][k];
            }
        }
        out
    }

    /// Iterator over interior node indices at least `margin` away from every
    /// boundary edge.
    pub fn interior(&self, margin: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (nu, nv) = (self.nu, self.nv);
        (margin..nu.saturating_sub(margin))
            .flat_map(move |iu| (margin..nv.saturating_sub(margin)).map(move |iv| (iu, iv)))
    }

    /// Shape operator on the frame: S(ê_b) = Σ_a ε̂_a h(ê_a,ê_b) ê_a;
    /// returns s\[a\]\[b\] = coefficient of ê_a in S(ê_b).
    pub fn shape_frame(&self, node: &ChartNode) -> [[f64; 2]; 2] {
        let eps = self.frame_eps();
        let mut s = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                s[a][b] = eps[a] * node.h_frame[a][b];
            }
        }
        s
    }

    /// The catalog algebra, for group-backed spaces.
    pub fn algebra(&self) -> Option<LieAlgebra3> {
        self.space.algebra()
    }
}

/// Metric signs of a space's ambient coordinates, padded with zeros.
pub fn ambient_eps(space: SpaceKind) -> [f64; 4] {
    if let Some(q) = space.quadric() {
        let mut eps = [0.0; 4];
        for (i, e) in eps.iter_mut().enumerate() {
            *e = q.sig.eps(i);
        }
        eps
    } else {
        let alg = space.algebra().expect("group-backed space");
        [alg.eps[0], alg.eps[1], alg.eps[2], 0.0]
    }
}

// =============================================================================
// Finite-difference stencils
// =============================================================================

/// Second-order stencil at position i of an n-point line: sample indices and
/// weights such that f'(i) ≈ Σ w_k f(idx_k) / (2h).
pub fn fd_stencil(i: usize, n: usize) -> ([usize; 3], [f64; 3]) {
    assert!(n >= 3);
    if i == 0 {
        ([0, 1, 2], [-3.0, 4.0, -1.0])
    } else if i + 1 == n {
        ([n - 3, n - 2, n - 1], [1.0, -4.0, 3.0])
    } else {
        ([i - 1, i, i + 1], [-1.0, 0.0, 1.0])
    }
}

fn fd_vec4(samples: impl Fn(usize) -> [f64; 4], i: usize, n: usize, h: f64) -> [f64; 4] {
    let (idx, w) = fd_stencil(i, n);
    let mut out = [0.0; 4];
    for k in 0..3 {
        let s = samples(idx[k]);
        for c in 0..4 {
            out[c] += w[k] * s[c] / (2.0 * h);
        }
    }
    out
}

// =============================================================================
// Geometry extraction
// =============================================================================

/// How positions are differentiated and covariantly corrected.
enum AmbientOps {
    Group { model: GroupModel, alg: LieAlgebra3 },
    Flat,
}

impl AmbientOps {
    fn for_space(space: SpaceKind) -> Result<Self> {
        if space.quadric().is_some() {
            Ok(AmbientOps::Flat)
        } else {
            let model = space
                .group_model()
                .ok_or_else(|| Error::invalid("space has neither group nor quadric model"))?;
            let alg = space.algebra().expect("group-backed space");
            Ok(AmbientOps::Group { model, alg })
        }
    }

    /// Covariant correction term ∇̄_x applied to an ambient vector field value.
    fn connection(&self, x: &[f64; 4], w: &[f64; 4]) -> [f64; 4] {
        match self {
            AmbientOps::Group { alg, .. } => {
                let r = alg.nabla(&[x[0], x[1], x[2]], &[w[0], w[1], w[2]]);
                [r[0], r[1], r[2], 0.0]
            }
            AmbientOps::Flat => [0.0; 4],
        }
    }
}

/// Logarithmic/coordinate derivative of the position field along one grid
/// line, at position i.
fn position_derivative(
    ops: &AmbientOps,
    get: &dyn Fn(usize) -> AmbientPos,
    i: usize,
    n: usize,
    h: f64,
) -> Result<[f64; 4]> {
    match ops {
        AmbientOps::Flat => {
            let sample = |k: usize| match get(k) {
                AmbientPos::Flat(x) => x,
                AmbientPos::Group(_) => panic!("flat ambient expected"),
            };
            Ok(fd_vec4(sample, i, n, h))
        }
        AmbientOps::Group { model, .. } => {
            let gp = |k: usize| match get(k) {
                AmbientPos::Group(p) => p,
                AmbientPos::Flat(_) => panic!("group ambient expected"),
            };
            // log(F_i⁻¹ F_j) combinations that are second-order accurate for
            // the left logarithmic derivative at node i.
            let xi3 = if i == 0 {
                let l1 = model.log_rel(&gp(0), &gp(1))?;
                let l2 = model.log_rel(&gp(0), &gp(2))?;
                [
                    (4.0 * l1[0] - l2[0]) / (2.0 * h),
                    (4.0 * l1[1] - l2[1]) / (2.0 * h),
                    (4.0 * l1[2] - l2[2]) / (2.0 * h),
                ]
            } else if i + 1 == n {
                let l1 = model.log_rel(&gp(n - 1), &gp(n - 2))?;
                let l2 = model.log_rel(&gp(n - 1), &gp(n - 3))?;
                [
                    -(4.0 * l1[0] - l2[0]) / (2.0 * h),
                    -(4.0 * l1[1] - l2[1]) / (2.0 * h),
                    -(4.0 * l1[2] - l2[2]) / (2.0 * h),
                ]
            } else {
                let l = model.log_rel(&gp(i - 1), &gp(i + 1))?;
                [l[0] / (2.0 * h), l[1] / (2.0 * h), l[2] / (2.0 * h)]
            };
            Ok([xi3[0], xi3[1], xi3[2], 0.0])
        }
    }
}

/// Metric-orthogonal complement of ambient tangents: 3D twisted cross product.
fn normal3(eps: &[f64; 4], xu: &[f64; 4], xv: &[f64; 4]) -> [f64; 4] {
    let c = [
        xu[1] * xv[2] - xu[2] * xv[1],
        xu[2] * xv[0] - xu[0] * xv[2],
        xu[0] * xv[1] - xu[1] * xv[0],
    ];
    [eps[0] * c[0], eps[1] * c[1], eps[2] * c[2], 0.0]
}

/// 4D analogue: metric-orthogonal to xu, xv and the quadric normal nu.
fn normal4(eps: &[f64; 4], xu: &[f64; 4], xv: &[f64; 4], nu: &[f64; 4]) -> [f64; 4] {
    let minor = |d: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != d).collect();
        let m = [xu, xv, nu];
        let det3 = m[0][cols[0]] * (m[1][cols[1]] * m[2][cols[2]] - m[1][cols[2]] * m[2][cols[1]])
            - m[0][cols[1]] * (m[1][cols[0]] * m[2][cols[2]] - m[1][cols[2]] * m[2][cols[0]])
            + m[0][cols[2]] * (m[1][cols[0]] * m[2][cols[1]] - m[1][cols[1]] * m[2][cols[0]]);
        if d % 2 == 0 {
            det3
        } else {
            -det3
        }
    };
    let mut out = [0.0; 4];
    for d in 0..4 {
        out[d] = eps[d] * minor(d);
    }
    out
}

/// Builds a chart from sampled positions, deriving every geometric field by
/// finite differences.
///
/// `normal_sign` flips the orientation of the computed surface normal
/// (+1 keeps the twisted-cross-product orientation).
pub fn extract_geometry(
    space: SpaceKind,
    class: SurfaceClass,
    grid: &GridSpec,
    normal_sign: f64,
    positions: Vec<AmbientPos>,
) -> Result<Chart> {
    let (nu, nv) = (grid.nu, grid.nv);
    if nu < MIN_GRID || nv < MIN_GRID {
        return Err(Error::invalid(format!(
            "grid {nu}x{nv} is below the minimum of {MIN_GRID} nodes per side"
        )));
    }
    if positions.len() != nu * nv {
        return Err(Error::invalid("position count does not match the grid"));
    }
    let ops = AmbientOps::for_space(space)?;
    let eps = ambient_eps(space);
    let (hu, hv) = grid.spacings();
    let dot = |x: &[f64; 4], y: &[f64; 4]| -> f64 { (0..4).map(|i| eps[i] * x[i] * y[i]).sum() };

    // ---- Pass 1: tangents, metric, frame, normal, ambient-leg split. ----
    let mut xi_u = vec![[0.0; 4]; nu * nv];
    let mut xi_v = vec![[0.0; 4]; nu * nv];
    for iu in 0..nu {
        for iv in 0..nv {
            let id = iu * nv + iv;
            xi_u[id] = position_derivative(
                &ops,
                &|k: usize| positions[k * nv + iv].clone(),
                iu,
                nu,
                hu,
            )?;
            xi_v[id] = position_derivative(
                &ops,
                &|k: usize| positions[iu * nv + k].clone(),
                iv,
                nv,
                hv,
            )?;
        }
    }

    let quad = space.quadric();
    let quadric_normal = |pos: &AmbientPos| -> [f64; 4] {
        match (pos, quad) {
            (AmbientPos::Flat(x), Some(q)) => match q.constraint {
                QuadricConstraint::Full { .. } => *x,
                QuadricConstraint::SpatialSphere => [0.0, x[1], x[2], x[3]],
            },
            _ => [0.0; 4],
        }
    };
    if quad.is_some() {
        // Finite-difference secants pick up an O(h²) component along the
        // quadric normal; project it out so the adapted frame {N̂, ê₁, ê₂, ν}
        // is orthonormal to rounding accuracy.
        for id in 0..nu * nv {
            let nv4 = quadric_normal(&positions[id]);
            let qnn = dot(&nv4, &nv4);
            for xs in [&mut xi_u, &mut xi_v] {
                let c = dot(&xs[id], &nv4) / qnn;
                for k in 0..4 {
                    xs[id][k] -= c * nv4[k];
                }
            }
        }
    }
    let mut nodes: Vec<ChartNode> = Vec::with_capacity(nu * nv);
    for iu in 0..nu {
        for iv in 0..nv {
            let id = iu * nv + iv;
            let xu = xi_u[id];
            let xv = xi_v[id];
            let nu_vec = quadric_normal(&positions[id]);
            let g = [[dot(&xu, &xu), dot(&xu, &xv)], [dot(&xv, &xu), dot(&xv, &xv)]];
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            if det.abs() < METRIC_DEGENERACY {
                return Err(Error::DivisionSingularity(format!(
                    "induced metric is degenerate at node ({iu},{iv}): det g = {det:.3e}"
                )));
            }
            match class {
                SurfaceClass::Riemannian => {
                    if det <= 0.0 || g[0][0] <= 0.0 {
                        return Err(Error::invalid(format!(
                            "induced metric is not Riemannian at node ({iu},{iv})"
                        )));
                    }
                }
                SurfaceClass::Lorentzian => {
                    if det >= 0.0 {
                        return Err(Error::invalid(format!(
                            "induced metric is not Lorentzian at node ({iu},{iv})"
                        )));
                    }
                }
            }
            let ginv = [
                [g[1][1] / det, -g[0][1] / det],
                [-g[1][0] / det, g[0][0] / det],
            ];

            // Surface normal inside the homogeneous space.
            let mut n = if quad.is_some() {
                normal4(&eps, &xu, &xv, &nu_vec)
            } else {
                normal3(&eps, &xu, &xv)
            };
            let nn = dot(&n, &n);
            if nn.abs() < METRIC_DEGENERACY {
                return Err(Error::DivisionSingularity(format!(
                    "surface normal is null at node ({iu},{iv})"
                )));
            }
            let scale = normal_sign / nn.abs().sqrt();
            for c in n.iter_mut() {
                *c *= scale;
            }
            let eps_n = dot(&n, &n).signum();

            // Orthonormal frame by metric Gram–Schmidt on (∂u, ∂v), spacelike
            // leg first on Lorentzian charts.
            let (frame, coframe) = orthonormal_frame(&g, class, iu, iv)?;

            // Ambient basis legs split into tangent + normal parts.
            let mut t_amb = [[0.0; 2]; 4];
            let mut nu_amb = [0.0; 4];
            let feps = class.frame_eps();
            let dim = if quad.is_some() { 4 } else { 3 };
            for leg in 0..dim {
                let mut e = [0.0; 4];
                e[leg] = 1.0;
                nu_amb[leg] = eps_n * dot(&e, &n);
                for a in 0..2 {
                    // ê_a in ambient coordinates.
                    let mut ea = [0.0; 4];
                    for (alpha, x) in [xu, xv].iter().enumerate() {
                        for k in 0..4 {
                            ea[k] += frame[a][alpha] * x[k];
                        }
                    }
                    t_amb[leg][a] = feps[a] * dot(&e, &ea);
                }
            }

            nodes.push(ChartNode {
                pos: positions[id].clone(),
                xi: [xu, xv],
                normal: n,
                eps_n,
                nu_vec,
                g,
                ginv,
                frame,
                coframe,
                omega: [0.0; 2],
                h_frame: [[0.0; 2]; 2],
                hmean: 0.0,
                t_amb,
                nu_amb,
            });
        }
    }

    // ---- Pass 2: derivatives of the tangent and frame fields. ----
    // h_αβ = ⟨∇̄_{∂α} ξ_β, N̂⟩ and ω₁₂(∂α) = ⟨∇̄_{∂α} ê₁, ê₂⟩ (the tangential
    // projection of ∇̄ is the intrinsic connection).
    let ehat_amb = |id: usize, a: usize| -> [f64; 4] {
        let nd = &nodes[id];
        let mut out = [0.0; 4];
        for alpha in 0..2 {
            for k in 0..4 {
                out[k] += nd.frame[a][alpha] * nd.xi[alpha][k];
            }
        }
        out
    };

    let mut updates: Vec<([f64; 2], [[f64; 2]; 2], f64)> = Vec::with_capacity(nu * nv);
    for iu in 0..nu {
        for iv in 0..nv {
            let id = iu * nv + iv;
            let nd = &nodes[id];
            // Raw parameter derivatives of the fields ξ_β, ê₁ along u and v.
            let du = |f: &dyn Fn(usize) -> [f64; 4]| -> [f64; 4] {
                fd_vec4(|k| f(k * nv + iv), iu, nu, hu)
            };
            let dv = |f: &dyn Fn(usize) -> [f64; 4]| -> [f64; 4] {
                fd_vec4(|k| f(iu * nv + k), iv, nv, hv)
            };
            let deriv = |alpha: usize, f: &dyn Fn(usize) -> [f64; 4]| -> [f64; 4] {
                if alpha == 0 {
                    du(f)
                } else {
                    dv(f)
                }
            };

            let mut h_param = [[0.0; 2]; 2];
            for alpha in 0..2 {
                for beta in 0..2 {
                    let field = |k: usize| -> [f64; 4] {
                        if beta == 0 {
                            xi_u[k]
                        } else {
                            xi_v[k]
                        }
                    };
                    let mut cov = deriv(alpha, &field);
                    let corr = ops.connection(&nd.xi[alpha], &nd.xi[beta]);
                    for c in 0..4 {
                        cov[c] += corr[c];
                    }
                    h_param[alpha][beta] = dot(&cov, &nd.normal);
                }
            }
            // The ambient connection is torsion-free, so symmetrize away the
            // finite-difference asymmetry.
            let sym = 0.5 * (h_param[0][1] + h_param[1][0]);
            h_param[0][1] = sym;
            h_param[1][0] = sym;

            let mut omega = [0.0; 2];
            let e2 = ehat_amb(id, 1);
            for alpha in 0..2 {
                let field = |k: usize| -> [f64; 4] { ehat_amb(k, 0) };
                let mut cov = deriv(alpha, &field);
                let corr = ops.connection(&nd.xi[alpha], &ehat_amb(id, 0));
                for c in 0..4 {
                    cov[c] += corr[c];
                }
                omega[alpha] = dot(&cov, &e2);
            }

            // Second fundamental form on the orthonormal frame.
            let mut h_frame = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = 0.0;
                    for alpha in 0..2 {
                        for beta in 0..2 {
                            acc += nd.frame[a][alpha] * nd.frame[b][beta] * h_param[alpha][beta];
                        }
                    }
                    h_frame[a][b] = acc;
                }
            }
            let feps = class.frame_eps();
            let hmean = 0.5 * (feps[0] * h_frame[0][0] + feps[1] * h_frame[1][1]);
            updates.push((omega, h_frame, hmean));
        }
    }
    for (nd, (omega, h_frame, hmean)) in nodes.iter_mut().zip(updates) {
        nd.omega = omega;
        nd.h_frame = h_frame;
        nd.hmean = hmean;
    }

    Ok(Chart {
        space,
        class,
        nu,
        nv,
        hu,
        hv,
        u0: grid.u0,
        v0: grid.v0,
        nodes,
    })
}

/// Gram–Schmidt frame for a 2×2 metric; returns (frame, coframe) with
/// ê_a = Σ frame\[a\]\[α\] ∂_α and ∂_α = Σ coframe\[α\]\[a\] ê_a.
fn orthonormal_frame(
    g: &[[f64; 2]; 2],
    class: SurfaceClass,
    iu: usize,
    iv: usize,
) -> Result<([[f64; 2]; 2], [[f64; 2]; 2])> {
    let ip = |x: &[f64; 2], y: &[f64; 2]| -> f64 {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                s += g[a][b] * x[a] * y[b];
            }
        }
        s
    };
    // Seed with whichever coordinate direction is spacelike.
    let (seed, other) = if g[0][0] > 0.0 { ([1.0, 0.0], [0.0, 1.0]) } else { ([0.0, 1.0], [1.0, 0.0]) };
    let n1 = ip(&seed, &seed);
    if n1 <= METRIC_DEGENERACY {
        return Err(Error::DivisionSingularity(format!(
            "no spacelike coordinate direction at node ({iu},{iv})"
        )));
    }
    let e1 = [seed[0] / n1.sqrt(), seed[1] / n1.sqrt()];
    // Remove the e1 component, normalize by the class sign.
    let c = ip(&other, &e1);
    let mut e2 = [other[0] - c * e1[0], other[1] - c * e1[1]];
    let n2 = ip(&e2, &e2);
    let want = match class {
        SurfaceClass::Riemannian => 1.0,
        SurfaceClass::Lorentzian => -1.0,
    };
    if n2 * want <= METRIC_DEGENERACY {
        return Err(Error::DivisionSingularity(format!(
            "degenerate frame completion at node ({iu},{iv})"
        )));
    }
    let s = n2.abs().sqrt();
    e2 = [e2[0] / s, e2[1] / s];
    let frame = [e1, e2];
    let det = frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0];
    if det.abs() < 1e-300 {
        return Err(Error::DivisionSingularity(format!("frame collapse at node ({iu},{iv})")));
    }
    // coframe = inverse transpose relation: ∂_α = Σ_a coframe[α][a] ê_a where
    // the matrix M[a][α] = frame[a][α] satisfies coframe = M⁻¹ (as α,a).
    let inv = [
        [frame[1][1] / det, -frame[0][1] / det],
        [-frame[1][0] / det, frame[0][0] / det],
    ];
    // inv[α][a] gives ∂_α = Σ_a inv[α][a] ê_a: check: Σ_a inv[α][a] frame[a][β] = δ_αβ.
    Ok((frame, inv))
}

// =============================================================================
// Compatibility diagnostics
// =============================================================================

/// Worst-case violations of the structural identities tying the ambient-leg
/// split (T_i, ν_i) to the surface geometry.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompatibilityReport {
    /// max |⟨T_i,T_j⟩ + ⟨N̂,N̂⟩ ν_i ν_j − ⟨e_i,e_j⟩| (pointwise, algebraic).
    pub algebraic: f64,
    /// max ‖∇_X T_j − (connection pullback + ν_j S(X))‖ over interior nodes.
    pub tangent_deriv: f64,
    /// max |dν_j(X) − (connection pullback − ⟨N̂,N̂⟩ h(X,T_j))| over interior nodes.
    pub normal_deriv: f64,
}

/// Evaluates the compatibility identities on a group-backed chart.
///
/// The derivative checks use finite differences of the stored frame
/// coefficients and skip a 1-node boundary margin.
pub fn compatibility_defect(chart: &Chart) -> Result<CompatibilityReport> {
    let alg = chart
        .algebra()
        .ok_or_else(|| Error::Unsupported("compatibility check needs a group-backed chart".to_string()))?;
    let feps = chart.frame_eps();
    let mut rep = CompatibilityReport::default();

    // Algebraic identity at every node.
    for nd in &chart.nodes {
        for i in 0..3 {
            for j in 0..3 {
                let tij: f64 = (0..2).map(|a| feps[a] * nd.t_amb[i][a] * nd.t_amb[j][a]).sum();
                let want = if i == j { alg.eps[i] } else { 0.0 };
                let got = tij + nd.eps_n * nd.nu_amb[i] * nd.nu_amb[j];
                rep.algebraic = rep.algebraic.max((got - want).abs());
            }
        }
    }

    // Derivative identities on the interior, X ranging over ∂u, ∂v.
    for (iu, iv) in chart.interior(1) {
        let nd = chart.node(iu, iv);
        let s = chart.shape_frame(nd);
        for j in 0..3 {
            for alpha in 0..2 {
                // Finite differences of T_j frame coefficients and ν_j.
                let h = if alpha == 0 { chart.hu } else { chart.hv };
                let (prev, next) = if alpha == 0 {
                    (chart.node(iu - 1, iv), chart.node(iu + 1, iv))
                } else {
                    (chart.node(iu, iv - 1), chart.node(iu, iv + 1))
                };
                let dt = [
                    (next.t_amb[j][0] - prev.t_amb[j][0]) / (2.0 * h),
                    (next.t_amb[j][1] - prev.t_amb[j][1]) / (2.0 * h),
                ];
                let dnu = (next.nu_amb[j] - prev.nu_amb[j]) / (2.0 * h);

                // Covariant derivative of the tangent field T_j along ∂α:
                // frame-coefficient derivative plus the ω₁₂ rotation.
                let om = nd.omega[alpha];
                let w = nd.t_amb[j];
                let cov_t = [
                    dt[0] - feps[0] * om * w[1],
                    dt[1] + feps[1] * om * w[0],
                ];

                // Expected values from the ambient structure. X = ∂α has frame
                // coefficients coframe[α][·]; ⟨X, T_i⟩ uses the frame signs.
                let xc = nd.coframe[alpha];
                let x_dot_t = |i: usize| -> f64 {
                    (0..2).map(|a| feps[a] * xc[a] * nd.t_amb[i][a]).sum()
                };
                let mut want_t = [0.0; 2];
                let mut want_nu = 0.0;
                for i in 0..3 {
                    for k in 0..3 {
                        let coef = alg.eps[i] * alg.eps[k] * alg.gamma[i][j][k] * x_dot_t(i);
                        for a in 0..2 {
                            want_t[a] += coef * nd.t_amb[k][a];
                        }
                        want_nu += coef * nd.nu_amb[k];
                    }
                }
                // + ν_j S(X) on the tangent side.
                for a in 0..2 {
                    let sx: f64 = (0..2).map(|b| s[a][b] * xc[b]).sum();
                    want_t[a] += nd.nu_amb[j] * sx;
                }
                // − ε_N h(X, T_j) on the normal side.
                let mut h_x_tj = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        h_x_tj += xc[a] * nd.t_amb[j][b] * nd.h_frame[a][b];
                    }
                }
                want_nu -= nd.eps_n * h_x_tj;

                rep.tangent_deriv = rep
                    .tangent_deriv
                    .max(((cov_t[0] - want_t[0]).powi(2) + (cov_t[1] - want_t[1]).powi(2)).sqrt());
                rep.normal_deriv = rep.normal_deriv.max((dnu - want_nu).abs());
            }
        }
    }
    Ok(rep)
}

// =============================================================================
// Unit tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_differentiate_quadratics_exactly() {
        // f(x) = 3 + 2x + x² sampled on a unit-spaced line.
        let f = |x: f64| 3.0 + 2.0 * x + x * x;
        let fp = |x: f64| 2.0 + 2.0 * x;
        let n = 7;
        for i in 0..n {
            let (idx, w) = fd_stencil(i, n);
            let got: f64 = (0..3).map(|k| w[k] * f(idx[k] as f64) / 2.0).sum();
            assert!((got - fp(i as f64)).abs() < 1e-12, "node {i}: {got}");
        }
    }

    #[test]
    fn frame_is_orthonormal_for_riemannian_and_lorentzian_metrics() {
        for (g, class) in [
            ([[2.0, 0.3], [0.3, 1.5]], SurfaceClass::Riemannian),
            ([[1.2, 0.4], [0.4, -0.9]], SurfaceClass::Lorentzian),
            ([[-0.5, 0.2], [0.2, 2.0]], SurfaceClass::Lorentzian),
        ] {
            let (frame, coframe) = orthonormal_frame(&g, class, 0, 0).unwrap();
            let eps = class.frame_eps();
            let ip = |x: &[f64; 2], y: &[f64; 2]| -> f64 {
                let mut s = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        s += g[a][b] * x[a] * y[b];
                    }
                }
                s
            };
            for a in 0..2 {
                for b in 0..2 {
                    let want = if a == b { eps[a] } else { 0.0 };
                    assert!(
                        (ip(&frame[a], &frame[b]) - want).abs() < 1e-12,
                        "class {class:?} pair ({a},{b})"
                    );
                    // coframe really inverts the frame.
                    let d: f64 = (0..2).map(|c| coframe[a][c] * frame[c][b]).sum();
                    let id = if a == b { 1.0 } else { 0.0 };
                    assert!((d - id).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn twisted_cross_products_are_metric_orthogonal() {
        let eps3 = [1.0, 1.0, -1.0, 0.0];
        let xu = [0.3, -0.4, 0.9, 0.0];
        let xv = [1.1, 0.2, 0.5, 0.0];
        let n = normal3(&eps3, &xu, &xv);
        let dot = |x: &[f64; 4], y: &[f64; 4]| -> f64 { (0..4).map(|i| eps3[i] * x[i] * y[i]).sum() };
        assert!(dot(&n, &xu).abs() < 1e-12);
        assert!(dot(&n, &xv).abs() < 1e-12);

        let eps4 = [-1.0, 1.0, 1.0, 1.0];
        let a = [0.2, 0.5, -0.1, 0.8];
        let b = [1.0, -0.3, 0.4, 0.1];
        let c = [0.0, 0.7, 0.6, -0.2];
        let n4 = normal4(&eps4, &a, &b, &c);
        let dot4 = |x: &[f64; 4], y: &[f64; 4]| -> f64 { (0..4).map(|i| eps4[i] * x[i] * y[i]).sum() };
        assert!(dot4(&n4, &a).abs() < 1e-12);
        assert!(dot4(&n4, &b).abs() < 1e-12);
        assert!(dot4(&n4, &c).abs() < 1e-12);
    }
}
