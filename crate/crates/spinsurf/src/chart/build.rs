//! Reference surface families used by the test suites and the CLI scenarios.
//!
//! Every builder samples a closed-form immersion on a rectangular grid and
//! hands the positions to [`extract_geometry`](super::extract_geometry); all
//! geometric fields are then recovered numerically, so analytic expectations
//! in tests genuinely exercise the discrete pipeline.

use super::{extract_geometry, AmbientPos, Chart, SurfaceClass};
use crate::error::Result;
use crate::lie::{GroupPoint, SpaceKind};

/// Rectangular parameter grid: `nu × nv` nodes spanning
/// `[u0,u1] × [v0,v1]` inclusively.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize, u: (f64, f64), v: (f64, f64)) -> Self {
        GridSpec { nu, nv, u0: u.0, u1: u.1, v0: v.0, v1: v.1 }
    }

    /// Grid spacings (hu, hv).
    pub fn spacings(&self) -> (f64, f64) {
        (
            (self.u1 - self.u0) / (self.nu.max(2) - 1) as f64,
            (self.v1 - self.v0) / (self.nv.max(2) - 1) as f64,
        )
    }

    /// Parameter values at a node.
    pub fn uv(&self, iu: usize, iv: usize) -> (f64, f64) {
        let (hu, hv) = self.spacings();
        (self.u0 + iu as f64 * hu, self.v0 + iv as f64 * hv)
    }

    fn sample(&self, f: impl Fn(f64, f64) -> AmbientPos) -> Vec<AmbientPos> {
        let mut out = Vec::with_capacity(self.nu * self.nv);
        for iu in 0..self.nu {
            for iv in 0..self.nv {
                let (u, v) = self.uv(iu, iv);
                out.push(f(u, v));
            }
        }
        out
    }
}

fn translation_point(x: f64, y: f64, z: f64) -> AmbientPos {
    let mut m = nalgebra::Matrix4::identity();
    m[(0, 3)] = x;
    m[(1, 3)] = y;
    m[(2, 3)] = z;
    AmbientPos::Group(GroupPoint::Matrix(m))
}

/// Spacelike affine graph x₃ = a·u + b·v in flat Minkowski space
/// (needs a² + b² < 1). Totally geodesic: S ≡ 0.
pub fn flat_graph(grid: &GridSpec, a: f64, b: f64) -> Result<Chart> {
    extract_geometry(
        SpaceKind::MinkowskiR12,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| translation_point(u, v, a * u + b * v)),
    )
}

/// The radius-r pseudosphere {x₁²+x₂²−x₃² = −r²} (upper sheet) in flat
/// Minkowski space, parametrized by (s, θ) ↦ r(sinh s cos θ, sinh s sin θ, cosh s).
/// Shape operator S = −id/r, mean curvature H = −1/r, normal N̂ = x/r.
pub fn pseudosphere(grid: &GridSpec, r: f64) -> Result<Chart> {
    extract_geometry(
        SpaceKind::MinkowskiR12,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|s, t| {
            translation_point(r * s.sinh() * t.cos(), r * s.sinh() * t.sin(), r * s.cosh())
        }),
    )
}

/// The spacelike rotation surface x₃ = arcsinh(ρ) over an annulus in flat
/// Minkowski space; mean curvature vanishes identically.
pub fn maximal_catenoid(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::MinkowskiR12,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|rho, t| translation_point(rho * t.cos(), rho * t.sin(), rho.asinh())),
    )
}

/// Totally geodesic round sphere {x₀ = 0} inside the positive-curvature
/// quadric of ℝ^{1,3}, in polar coordinates away from the poles.
pub fn sphere_slice(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::DeSitter,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| {
            AmbientPos::Flat([0.0, u.sin() * v.cos(), u.sin() * v.sin(), u.cos()])
        }),
    )
}

/// Totally geodesic hyperbolic plane {x₁ = 0} inside the negative-curvature
/// quadric of ℝ^{2,2}.
pub fn antidesitter_plane(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::AntiDeSitterQuadric,
        SurfaceClass::Riemannian,
        grid,
        1.0,
        grid.sample(|u, v| {
            AmbientPos::Flat([u.cosh(), 0.0, u.sinh() * v.cos(), u.sinh() * v.sin()])
        }),
    )
}

/// The slice {t₀} × S² of the product of a negated time axis with the unit
/// 2-sphere; totally geodesic with a purely normal first ambient leg.
pub fn product_sphere_slice(grid: &GridSpec, t0: f64) -> Result<Chart> {
    extract_geometry(
        SpaceKind::ProductRminusS2,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| {
            AmbientPos::Flat([t0, u.sin() * v.cos(), u.sin() * v.sin(), u.cos()])
        }),
    )
}

/// Vertical Lorentzian surface over the base geodesic {y = 0} in the
/// coordinate model of the fibration at (κ, τ): F(u, v) = (u, 0, v).
/// Flat and mean-curvature free; the shape operator is the τ-twist.
pub fn su12_vertical_cylinder(grid: &GridSpec, kappa: f64, tau: f64) -> Result<Chart> {
    extract_geometry(
        SpaceKind::Lkt { kappa, tau },
        SurfaceClass::Lorentzian,
        grid,
        -1.0,
        grid.sample(|u, v| AmbientPos::Group(GroupPoint::Coordinate([u, 0.0, v]))),
    )
}

/// The horizontal disk {z = 0} in the coordinate model of the fibration at
/// (κ, τ) = (−4, 1): F(u, v) = (u, v, 0) on a square inside the unit disk.
pub fn su12_disk(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::Lkt { kappa: -4.0, tau: 1.0 },
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| AmbientPos::Group(GroupPoint::Coordinate([u, v, 0.0]))),
    )
}

/// The classical minimal immersion
/// (u − u³/3 + uv², v − v³/3 + vu², u² − v²) in Euclidean 3-space.
pub fn enneper_patch(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::EuclideanR3,
        SurfaceClass::Riemannian,
        grid,
        1.0,
        grid.sample(|u, v| {
            translation_point(
                u - u * u * u / 3.0 + u * v * v,
                v - v * v * v / 3.0 + v * u * u,
                u * u - v * v,
            )
        }),
    )
}

/// The Euclidean catenoid (cosh u cos v, cosh u sin v, u); minimal.
pub fn euclidean_catenoid(grid: &GridSpec) -> Result<Chart> {
    extract_geometry(
        SpaceKind::EuclideanR3,
        SurfaceClass::Riemannian,
        grid,
        1.0,
        grid.sample(|u, v| translation_point(u.cosh() * v.cos(), u.cosh() * v.sin(), u)),
    )
}

/// The horizontal disk {z = 0} in the coordinate model of the fibration at
/// general (κ, τ): F(u, v) = (u, v, 0).
pub fn fibration_disk(grid: &GridSpec, kappa: f64, tau: f64) -> Result<Chart> {
    extract_geometry(
        SpaceKind::Lkt { kappa, tau },
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| AmbientPos::Group(GroupPoint::Coordinate([u, v, 0.0]))),
    )
}

/// Spacelike exponential-coordinate slice of any group-backed space:
/// F(u, v) = exp(u·du + v·dv) in the group model, for constant algebra
/// directions `du`, `dv` spanning a spacelike plane at the identity. Small
/// parameter boxes keep the slice spacelike away from the origin.
pub fn exp_slice(grid: &GridSpec, space: SpaceKind, du: [f64; 3], dv: [f64; 3]) -> Result<Chart> {
    let model = space
        .group_model()
        .ok_or_else(|| crate::error::Error::invalid("exp_slice needs a group-backed space"))?;
    let id = model.identity();
    extract_geometry(
        space,
        SurfaceClass::Riemannian,
        grid,
        -1.0,
        grid.sample(|u, v| {
            let xi = [
                u * du[0] + v * dv[0],
                u * du[1] + v * dv[1],
                u * du[2] + v * dv[2],
            ];
            AmbientPos::Group(model.step(&id, &xi, 1.0))
        }),
    )
}

// =============================================================================
// Unit tests
// =============================================================================
