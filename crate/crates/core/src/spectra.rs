//! Closed-form Dirichlet spectra of spherical lunes and half-lune triangles.
//!
//! Both domains are described in geodesic polar coordinates `(r, θ)` about
//! the north pole with the round metric `dr² + sin²(r) dθ²`. A lune of angle
//! `β` is `0 ≤ r ≤ π, 0 ≤ θ ≤ β`; the half-lune triangle is `0 ≤ r ≤ π/2,
//! 0 ≤ θ ≤ β`. Separated eigenfunctions are `P_ℓ^{-kπ/β}(cos r) sin(kπθ/β)`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::special_functions::{legendre_p, LegendreParams};

/// Relative tolerance under which two closed-form eigenvalues are merged.
pub const COALESCENCE_TOLERANCE: f64 = 1e-9;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;
const MAX_NORMALIZATION_NODES: usize = 4096;

/// Tolerance applied to domain membership checks of evaluation points.
const EDGE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub k: u32,
    pub j: u32,
}

impl ModeIndex {
    pub fn new(k: u32, j: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("mode index k must be ≥ 1"));
        }
        Ok(Self { k, j })
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.k, self.j)
    }
}

/// A distinct eigenvalue with every mode attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub modes: Vec<ModeIndex>,
}

impl SpectrumEntry {
    pub fn multiplicity(&self) -> usize {
        self.modes.len()
    }
}

/// Which candidate second mode realizes `λ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapRegime {
    /// `λ₂` comes from `(k, j) = (1, 1)`; the opening angle is at most the
    /// crossover angle.
    Radial,
    /// `λ₂` comes from `(k, j) = (2, 0)`; the opening angle is wider.
    Angular,
}

impl GapRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            GapRegime::Radial => "radial",
            GapRegime::Angular => "angular",
        }
    }
}

fn check_beta(beta: f64) -> Result<f64> {
    if beta > 0.0 && beta < 2.0 * PI {
        Ok(beta)
    } else {
        Err(Error::Domain {
            what: "β",
            value: beta,
            domain: "(0, 2π)",
        })
    }
}

/// A sector-shaped domain with closed-form separated spectrum.
pub trait SectorDomain {
    fn beta(&self) -> f64;

    /// Largest polar radius of the coordinate rectangle.
    fn r_max(&self) -> f64;

    /// Offset of the Legendre degree above `kπ/β` for radial index `j`.
    fn degree_offset(&self, j: u32) -> f64;

    /// Opening angle at which `λ₂` switches between the two candidate modes.
    fn crossover_beta(&self) -> f64;

    /// `λ₂ - λ₁` from the piecewise closed form.
    fn gap_closed_form(&self) -> f64;

    /// `π/β`.
    fn frequency(&self) -> f64 {
        PI / self.beta()
    }

    fn legendre_params(&self, mode: ModeIndex) -> Result<LegendreParams> {
        let nu = f64::from(mode.k) * self.frequency();
        LegendreParams::admissible(nu + self.degree_offset(mode.j), -nu)
    }

    fn eigenvalue(&self, mode: ModeIndex) -> f64 {
        let l = f64::from(mode.k) * self.frequency() + self.degree_offset(mode.j);
        l * (l + 1.0)
    }

    fn regime(&self) -> GapRegime {
        if self.beta() <= self.crossover_beta() {
            GapRegime::Radial
        } else {
            GapRegime::Angular
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuneSpec {
    beta: f64,
}

impl LuneSpec {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta: check_beta(beta)?,
        })
    }
}

impl SectorDomain for LuneSpec {
    fn beta(&self) -> f64 {
        self.beta
    }

    fn r_max(&self) -> f64 {
        PI
    }

    fn degree_offset(&self, j: u32) -> f64 {
        f64::from(j)
    }

    fn crossover_beta(&self) -> f64 {
        PI
    }

    fn gap_closed_form(&self) -> f64 {
        let x = self.frequency();
        if self.beta > PI {
            3.0 * x * x + x
        } else {
            2.0 * x + 2.0
        }
    }
}

/// Triangle with angles `(β, π/2, π/2)`: half of the lune `L_β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSpec {
    beta: f64,
}

impl TriangleSpec {
    pub fn new(beta: f64) -> Result<Self> {
        Ok(Self {
            beta: check_beta(beta)?,
        })
    }

    /// The 90° equilateral triangle.
    pub fn equilateral() -> Self {
        Self { beta: FRAC_PI_2 }
    }

    pub fn is_equilateral(&self) -> bool {
        self.beta == FRAC_PI_2
    }
}

impl SectorDomain for TriangleSpec {
    fn beta(&self) -> f64 {
        self.beta
    }

    fn r_max(&self) -> f64 {
        FRAC_PI_2
    }

    fn degree_offset(&self, j: u32) -> f64 {
        f64::from(2 * j + 1)
    }

    fn crossover_beta(&self) -> f64 {
        FRAC_PI_2
    }

    fn gap_closed_form(&self) -> f64 {
        let x = self.frequency();
        if self.beta > FRAC_PI_2 {
            3.0 * x * x + 3.0 * x
        } else {
            4.0 * x + 10.0
        }
    }
}

/// Either domain, for callers that pick one at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Lune(LuneSpec),
    Triangle(TriangleSpec),
}

impl SectorDomain for Domain {
    fn beta(&self) -> f64 {
        match self {
            Domain::Lune(d) => d.beta(),
            Domain::Triangle(d) => d.beta(),
        }
    }

    fn r_max(&self) -> f64 {
        match self {
            Domain::Lune(d) => d.r_max(),
            Domain::Triangle(d) => d.r_max(),
        }
    }

    fn degree_offset(&self, j: u32) -> f64 {
        match self {
            Domain::Lune(d) => d.degree_offset(j),
            Domain::Triangle(d) => d.degree_offset(j),
        }
    }

    fn crossover_beta(&self) -> f64 {
        match self {
            Domain::Lune(d) => d.crossover_beta(),
            Domain::Triangle(d) => d.crossover_beta(),
        }
    }

    fn gap_closed_form(&self) -> f64 {
        match self {
            Domain::Lune(d) => d.gap_closed_form(),
            Domain::Triangle(d) => d.gap_closed_form(),
        }
    }
}

pub fn lune_eigenvalue(spec: LuneSpec, mode: ModeIndex) -> f64 {
    spec.eigenvalue(mode)
}

pub fn triangle_eigenvalue(spec: TriangleSpec, mode: ModeIndex) -> f64 {
    spec.eigenvalue(mode)
}

/// The `count` smallest distinct eigenvalues with every mode attaining each.
///
/// Since `λ(k, j)` increases strictly in both indices, the `count`-th
/// distinct value is at most `λ(count, 0)`, and every mode at or below it
/// lies in `k ≤ count + 1, j ≤ count`.
pub fn spectrum<D: SectorDomain + ?Sized>(spec: &D, count: usize) -> Result<Vec<SpectrumEntry>> {
    if count == 0 {
        return Err(Error::invalid("spectrum count must be ≥ 1"));
    }
    let bound = u32::try_from(count).map_err(|_| Error::invalid("spectrum count too large"))?;
    let mut modes: Vec<(f64, ModeIndex)> = (1..=bound + 1)
        .flat_map(|k| (0..=bound).map(move |j| ModeIndex { k, j }))
        .map(|m| (spec.eigenvalue(m), m))
        .collect();
    modes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut entries: Vec<SpectrumEntry> = Vec::with_capacity(count);
    for (lambda, mode) in modes {
        match entries.last_mut() {
            Some(last)
                if (lambda - last.eigenvalue).abs()
                    < COALESCENCE_TOLERANCE * lambda.abs().max(last.eigenvalue.abs()) =>
            {
                last.modes.push(mode);
            }
            _ => {
                if entries.len() == count {
                    break;
                }
                entries.push(SpectrumEntry {
                    eigenvalue: lambda,
                    modes: vec![mode],
                });
            }
        }
    }
    for e in &mut entries {
        e.modes.sort();
    }
    Ok(entries)
}

/// `λ₂ - λ₁`, taking `λ₂` as the smaller of the two candidate second modes.
pub fn gap<D: SectorDomain + ?Sized>(spec: &D) -> f64 {
    let first = spec.eigenvalue(ModeIndex { k: 1, j: 0 });
    let radial = spec.eigenvalue(ModeIndex { k: 1, j: 1 });
    let angular = spec.eigenvalue(ModeIndex { k: 2, j: 0 });
    radial.min(angular) - first
}

/// The mode realizing `λ₂` by direct comparison of the two candidates; ties
/// resolve to [`GapRegime::Radial`].
pub fn second_mode_regime<D: SectorDomain + ?Sized>(spec: &D) -> GapRegime {
    let radial = spec.eigenvalue(ModeIndex { k: 1, j: 1 });
    let angular = spec.eigenvalue(ModeIndex { k: 2, j: 0 });
    if radial <= angular {
        GapRegime::Radial
    } else {
        GapRegime::Angular
    }
}

fn check_point<D: SectorDomain + ?Sized>(spec: &D, r: f64, theta: f64) -> Result<()> {
    let slack = |v: f64| EDGE_SLACK * v.max(1.0);
    if !(r >= -slack(0.0) && r <= spec.r_max() + slack(spec.r_max())) {
        return Err(Error::Domain {
            what: "r",
            value: r,
            domain: "[0, r_max]",
        });
    }
    if !(theta >= -slack(0.0) && theta <= spec.beta() + slack(spec.beta())) {
        return Err(Error::Domain {
            what: "θ",
            value: theta,
            domain: "[0, β]",
        });
    }
    Ok(())
}

/// Radial factor `P_ℓ^{-kπ/β}(cos r)`.
pub fn radial_profile<D: SectorDomain + ?Sized>(spec: &D, mode: ModeIndex, r: f64) -> Result<f64> {
    let params = spec.legendre_params(mode)?;
    let x = r.cos();
    if x <= -1.0 {
        // south pole of a lune: admissible profiles vanish there
        return Ok(0.0);
    }
    legendre_p(params, x.min(1.0))
}

/// Unnormalized separated eigenfunction `P_ℓ^{-kπ/β}(cos r) sin(kπθ/β)`.
pub fn eigenfunction_eval<D: SectorDomain + ?Sized>(
    spec: &D,
    mode: ModeIndex,
    r: f64,
    theta: f64,
) -> Result<f64> {
    check_point(spec, r, theta)?;
    let angular = (f64::from(mode.k) * spec.frequency() * theta).sin();
    Ok(radial_profile(spec, mode, r)? * angular)
}

/// `c` with `∫∫ (c u)² sin(r) dr dθ = 1` over the domain, where `u` is
/// [`eigenfunction_eval`]. The tensor Gauss–Legendre rule is refined by
/// doubling until two successive estimates agree.
pub fn normalization_constant<D: SectorDomain + ?Sized>(spec: &D, mode: ModeIndex) -> Result<f64> {
    let params = spec.legendre_params(mode)?;
    let freq = f64::from(mode.k) * spec.frequency();
    let (r_max, beta) = (spec.r_max(), spec.beta());

    let norm_sq = |n: usize| -> Result<f64> {
        let rule = GaussLegendre::new(n);
        let mut radial = 0.0;
        for (r, w) in rule.mapped(0.0, r_max) {
            let p = legendre_p(params, r.cos())?;
            radial += w * p * p * r.sin();
        }
        let angular = rule.integrate(0.0, beta, |t| (freq * t).sin().powi(2));
        Ok(radial * angular)
    };

    let mut n = 32;
    let mut previous = norm_sq(n)?;
    while n < MAX_NORMALIZATION_NODES {
        n *= 2;
        let current = norm_sq(n)?;
        if (current - previous).abs() <= NORMALIZATION_TOLERANCE * current.abs() {
            return Ok(current.sqrt().recip());
        }
        previous = current;
    }
    Err(Error::Convergence {
        what: "normalization quadrature",
        achieved: previous.sqrt().recip(),
    })
}
