//! Geometry of the deformed triangles `T(t)` with vertices `(0, 0)`,
//! `(π/2, 0)` and `(π/2 - bt, π/2 - at)` in geodesic polar coordinates.
//!
//! `F_t` maps the equilateral triangle `T = [0, π/2]²` (in `(r, θ)`) onto
//! `T(t)` by shrinking `θ` uniformly and pulling each radial segment in by the
//! distance `l` from the equator to the moved edge. The round metric pulled
//! back by `F_t` lets all eigenproblems be posed on the fixed rectangle.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-12;

/// Below this the denominator of the side-distance formula is treated as the
/// removable singularity at `α = π/2, θ = 0`.
const SIDE_GUARD: f64 = 1e-15;

const POINT_SLACK: f64 = 1e-12;

/// Unit direction `(a, b)` with `a, b ≥ 0` in which the apex moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    a: f64,
    b: f64,
}

impl Direction {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::invalid(format!(
                "direction components must be non-negative, got ({a}, {b})"
            )));
        }
        if (a * a + b * b - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::invalid(format!(
                "direction ({a}, {b}) must satisfy a² + b² = 1"
            )));
        }
        Ok(Self { a, b })
    }

    /// `(√(1 - b²), b)` for `b ∈ [0, 1]`.
    pub fn from_b(b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::Domain {
                what: "b",
                value: b,
                domain: "[0, 1]",
            });
        }
        Self::new((1.0 - b * b).sqrt(), b)
    }

    /// `(cos φ, sin φ)` for `φ ∈ [0, π/2]`.
    pub fn from_angle(phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(Error::Domain {
                what: "φ",
                value: phi,
                domain: "[0, π/2]",
            });
        }
        Ok(Self {
            a: phi.cos().max(0.0),
            b: phi.sin(),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    direction: Direction,
    t: f64,
}

impl DeformationParams {
    pub fn new(direction: Direction, t: f64) -> Result<Self> {
        let (a, b) = (direction.a, direction.b);
        if !(t >= 0.0) || FRAC_PI_2 - a * t <= 0.0 || FRAC_PI_2 - b * t <= 0.0 {
            return Err(Error::Domain {
                what: "t",
                value: t,
                domain: "t ≥ 0 with π/2 - at > 0 and π/2 - bt > 0",
            });
        }
        Ok(Self { direction, t })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `A = 2at/π`, the relative shrinkage of the angular coordinate.
    pub fn amplitude(&self) -> f64 {
        2.0 * self.direction.a * self.t / PI
    }

    /// Image of the apex `(π/2, π/2)`.
    pub fn apex(&self) -> CoordPoint {
        CoordPoint {
            r: FRAC_PI_2 - self.direction.b * self.t,
            theta: FRAC_PI_2 - self.direction.a * self.t,
        }
    }
}

/// A point `(r, θ)` of the coordinate rectangle `[0, π/2]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordPoint {
    pub r: f64,
    pub theta: f64,
}

impl CoordPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        let inside = |v: f64| (-POINT_SLACK..=FRAC_PI_2 + POINT_SLACK).contains(&v);
        if !inside(r) {
            return Err(Error::Domain {
                what: "r",
                value: r,
                domain: "[0, π/2]",
            });
        }
        if !inside(theta) {
            return Err(Error::Domain {
                what: "θ",
                value: theta,
                domain: "[0, π/2]",
            });
        }
        Ok(Self { r, theta })
    }
}

/// Symmetric 2×2 tensor in `(r, θ)` components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor {
    pub rr: f64,
    pub r_theta: f64,
    pub theta_theta: f64,
}

impl MetricTensor {
    /// Round metric `dr² + sin²(r) dθ²`.
    pub fn round(r: f64) -> Self {
        Self {
            rr: 1.0,
            r_theta: 0.0,
            theta_theta: r.sin().powi(2),
        }
    }

    pub fn det(&self) -> f64 {
        self.rr * self.theta_theta - self.r_theta * self.r_theta
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self {
            rr: self.theta_theta / d,
            r_theta: -self.r_theta / d,
            theta_theta: self.rr / d,
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rr > 0.0 && self.det() > 0.0
    }
}

/// Length of the leg opposite the angle `α` in a right spherical triangle
/// whose other leg has length `θ`:
/// `l = arcsin(sin α sin θ / √(1 - sin²α cos²θ))`.
pub fn side_distance(alpha: f64, theta: f64) -> f64 {
    let sa = alpha.sin();
    let denom_sq = 1.0 - sa * sa * theta.cos().powi(2);
    if denom_sq < SIDE_GUARD * SIDE_GUARD {
        return 0.0;
    }
    (sa * theta.sin() / denom_sq.sqrt()).clamp(-1.0, 1.0).asin()
}

/// `∂l/∂θ = sin α cos α cos θ / (cos²α + sin²α sin²θ)`, from `tan l = tan α sin θ`.
pub fn side_distance_dtheta(alpha: f64, theta: f64) -> f64 {
    let (sa, ca) = alpha.sin_cos();
    let denom = ca * ca + sa * sa * theta.sin().powi(2);
    if denom < SIDE_GUARD {
        return 0.0;
    }
    sa * ca * theta.cos() / denom
}

/// `z(a, b, t) = arcsin(sin(bt) / √(cos²(at) + sin²(bt) sin²(at)))`, the angle
/// at the apex side of the triangle cut off by the moved edge.
pub fn apex_offset(params: &DeformationParams) -> f64 {
    let (a, b) = (params.direction.a, params.direction.b);
    let t = params.t;
    let sb = (b * t).sin();
    let denom = ((a * t).cos().powi(2) + sb * sb * (a * t).sin().powi(2)).sqrt();
    (sb / denom).clamp(-1.0, 1.0).asin()
}

/// Edge data along the ray at angle `θ` of the reference triangle:
/// `l = l(z, (1 - A)θ)` and `L = ∂_θ l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProfile {
    pub l: f64,
    pub dl_dtheta: f64,
}

/// Precomputed `z` and `A` for one deformation.
#[derive(Debug, Clone, Copy)]
pub struct Deformation {
    params: DeformationParams,
    z: f64,
    amplitude: f64,
}

impl Deformation {
    pub fn new(params: DeformationParams) -> Self {
        Self {
            params,
            z: apex_offset(&params),
            amplitude: params.amplitude(),
        }
    }

    pub fn params(&self) -> &DeformationParams {
        &self.params
    }

    pub fn apex_offset(&self) -> f64 {
        self.z
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn edge_profile(&self, theta: f64) -> EdgeProfile {
        let shrink = 1.0 - self.amplitude;
        EdgeProfile {
            l: side_distance(self.z, shrink * theta),
            dl_dtheta: shrink * side_distance_dtheta(self.z, shrink * theta),
        }
    }

    /// `F_t(r, θ) = (r (1 - 2l/π), (1 - A) θ)`.
    pub fn map(&self, p: CoordPoint) -> CoordPoint {
        let e = self.edge_profile(p.theta);
        CoordPoint {
            r: p.r * (1.0 - 2.0 * e.l / PI),
            theta: (1.0 - self.amplitude) * p.theta,
        }
    }

    /// `dF_t` as rows `[∂s/∂r, ∂s/∂θ], [∂ψ/∂r, ∂ψ/∂θ]`.
    pub fn jacobian(&self, p: CoordPoint) -> [[f64; 2]; 2] {
        let e = self.edge_profile(p.theta);
        [
            [1.0 - 2.0 * e.l / PI, -2.0 * p.r / PI * e.dl_dtheta],
            [0.0, 1.0 - self.amplitude],
        ]
    }

    /// `g_t = dF_tᵀ g_S(F_t(p)) dF_t`.
    pub fn pullback_metric(&self, p: CoordPoint) -> Result<MetricTensor> {
        if p.r <= 0.0 {
            return Err(Error::DegeneratePoint { r: p.r });
        }
        let e = self.edge_profile(p.theta);
        let stretch = 1.0 - 2.0 * e.l / PI;
        let shear = 2.0 * p.r / PI * e.dl_dtheta;
        let shrink = 1.0 - self.amplitude;
        let s = (p.r * stretch).sin();
        Ok(MetricTensor {
            rr: stretch * stretch,
            r_theta: -shear * stretch,
            theta_theta: shear * shear + shrink * shrink * s * s,
        })
    }

    /// `det g_t = (1 - 2l/π)² (1 - A)² sin²(r (1 - 2l/π))`.
    pub fn metric_determinant(&self, p: CoordPoint) -> f64 {
        let e = self.edge_profile(p.theta);
        let stretch = 1.0 - 2.0 * e.l / PI;
        let shrink = 1.0 - self.amplitude;
        (stretch * shrink * (p.r * stretch).sin()).powi(2)
    }

    /// `√det g_t` and the weak-form coefficients `g_t^{ij} √det g_t`, all in
    /// closed form, as `(sqrt_det, [rr, rθ, θθ])`.
    pub fn weak_form_coefficients(&self, p: CoordPoint) -> (f64, [f64; 3]) {
        let e = self.edge_profile(p.theta);
        let stretch = 1.0 - 2.0 * e.l / PI;
        let shear = 2.0 * p.r / PI * e.dl_dtheta;
        let shrink = 1.0 - self.amplitude;
        let s = (p.r * stretch).sin();
        let sqrt_det = stretch * shrink * s;
        // g^{-1} √det with det = (stretch · shrink · s)²
        let rr = (shear * shear + shrink * shrink * s * s) / (stretch * shrink * s);
        let rt = shear / (shrink * s);
        let tt = stretch / (shrink * s);
        (sqrt_det, [rr, rt, tt])
    }
}

pub fn deform_map(params: &DeformationParams, p: CoordPoint) -> CoordPoint {
    Deformation::new(*params).map(p)
}

pub fn pullback_metric(params: &DeformationParams, p: CoordPoint) -> Result<MetricTensor> {
    Deformation::new(*params).pullback_metric(p)
}

/// Derivatives of a scalar field at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet {
    pub d_r: f64,
    pub d_theta: f64,
    pub d_rr: f64,
    pub d_r_theta: f64,
    pub d_theta_theta: f64,
}

/// Round-sphere Laplacian `∂_r² + cot(r) ∂_r + csc²(r) ∂_θ²`.
pub fn round_laplacian(jet: &FieldJet, r: f64) -> f64 {
    let (s, c) = r.sin_cos();
    jet.d_rr + c / s * jet.d_r + jet.d_theta_theta / (s * s)
}

/// First-order term `L₁` of `Δ_t = Δ_S + t L₁ + O(t²)`:
///
/// ```text
/// L₁ = (4/π) b sinθ ∂_r² + (2/π) b sinθ cot r ∂_r + (4/π) b r cosθ csc²r ∂_r∂_θ
///    + (4/π) b r sinθ cot r csc²r ∂_θ² + (4/π) a csc²r ∂_θ²
/// ```
pub fn first_order_operator_apply(direction: Direction, jet: &FieldJet, p: CoordPoint) -> Result<f64> {
    if p.r <= 0.0 {
        return Err(Error::DegeneratePoint { r: p.r });
    }
    let (a, b) = (direction.a, direction.b);
    let (sr, cr) = p.r.sin_cos();
    let (st, ct) = p.theta.sin_cos();
    let csc2 = 1.0 / (sr * sr);
    let cot = cr / sr;
    let k = 4.0 / PI;
    Ok(k * b * st * jet.d_rr
        + 0.5 * k * b * st * cot * jet.d_r
        + k * b * p.r * ct * csc2 * jet.d_r_theta
        + k * b * p.r * st * cot * csc2 * jet.d_theta_theta
        + k * a * csc2 * jet.d_theta_theta)
}
