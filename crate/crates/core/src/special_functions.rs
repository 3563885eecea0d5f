//! Gamma function and associated Legendre functions of the first kind
//! `P_ℓ^μ(x)` (Ferrers functions) of real degree and non-positive real order
//! on `(-1, 1]`.
//!
//! For `ν = -μ ≥ 0` the evaluation uses the Euler-transformed hypergeometric
//! representation about `x = 1`,
//!
//! ```text
//! P_ℓ^{-ν}(x) = (1 - x²)^{ν/2} / (2^ν Γ(1 + ν)) · ₂F₁(ℓ + 1 + ν, ν - ℓ; 1 + ν; (1 - x)/2),
//! ```
//!
//! which is algebraically identical to `((1+x)/(1-x))^{μ/2} ₂F₁(-ℓ, ℓ+1; 1-μ; (1-x)/2) / Γ(1-μ)`.
//! When `ℓ - ν` is a non-negative integer the series terminates, so admissible
//! eigenfunction pairs are polynomials times `(1 - x²)^{ν/2}` of parity
//! `(-1)^{ℓ-ν}`; on `x < 0` they are evaluated at `|x|`. Other pairs on
//! `x < 0` are continued from `x = 0` by integrating the Legendre equation.

use ode_solvers::{Dopri5, OutputType, System, Vector2};

use crate::error::{Error, Result};

/// Default relative truncation tolerance of the hypergeometric series.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Absolute tolerance of the ODE continuation on `x < 0`.
pub const ODE_ABS_TOLERANCE: f64 = 1e-12;

const MAX_SERIES_TERMS: usize = 200_000;

/// Consecutive negligible terms required before the series is truncated.
const QUIET_TERMS: usize = 3;

/// Relative distance under which `ℓ - |μ|` is treated as an integer.
const INTEGER_SNAP: f64 = 1e-10;

pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// `Γ(x)`. Poles at `0, -1, -2, …` are reported as [`Error::GammaPole`].
pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    Ok(libm::tgamma(x))
}

/// `1/Γ(x)`, which is entire: exactly zero at the poles of `Γ`.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}

fn snap_to_integer(x: f64) -> Option<i64> {
    let nearest = x.round();
    ((x - nearest).abs() <= INTEGER_SNAP * x.abs().max(1.0)).then_some(nearest as i64)
}

/// Degree `ℓ` and order `μ ≤ 0` of an associated Legendre function.
///
/// [`LegendreParams::raw`] accepts any such pair for evaluation;
/// [`LegendreParams::admissible`] additionally requires `μ < 0` and
/// `ℓ = |μ| + m` with `m ∈ ℕ`, which are exactly the pairs whose `P_ℓ^μ`
/// vanishes at both `x = ±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreParams {
    degree: f64,
    order: f64,
    excess: Option<u32>,
}

impl LegendreParams {
    pub fn raw(degree: f64, order: f64) -> Result<Self> {
        if !degree.is_finite() || !order.is_finite() {
            return Err(Error::invalid(format!(
                "Legendre parameters must be finite (ℓ = {degree}, μ = {order})"
            )));
        }
        if order > 0.0 {
            return Err(Error::invalid(format!("order μ = {order} must be ≤ 0")));
        }
        let excess = if order < 0.0 {
            snap_to_integer(degree + order)
                .filter(|m| *m >= 0)
                .map(|m| m as u32)
        } else {
            None
        };
        Ok(Self {
            degree,
            order,
            excess,
        })
    }

    pub fn admissible(degree: f64, order: f64) -> Result<Self> {
        let params = Self::raw(degree, order)?;
        if !params.is_admissible() {
            return Err(Error::invalid(format!(
                "(ℓ = {degree}, μ = {order}) is not an admissible eigenfunction pair; need μ < 0 and ℓ - |μ| ∈ ℕ"
            )));
        }
        Ok(params)
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Eigenvalue `ℓ(ℓ + 1)` of the Legendre equation.
    pub fn eigenvalue(&self) -> f64 {
        self.degree * (self.degree + 1.0)
    }

    pub fn is_admissible(&self) -> bool {
        self.excess.is_some()
    }

    /// `m = ℓ - |μ|` for admissible pairs.
    pub fn excess(&self) -> Option<u32> {
        self.excess
    }
}

/// `P_ℓ^μ(x)` at the default tolerance.
pub fn legendre_p(params: LegendreParams, x: f64) -> Result<f64> {
    legendre_p_with_tolerance(params, x, DEFAULT_TOLERANCE)
}

pub fn legendre_p_with_tolerance(params: LegendreParams, x: f64, tol: f64) -> Result<f64> {
    if !(x > -1.0 && x <= 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "(-1, 1]",
        });
    }
    let nu = -params.order;
    if x == 1.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let series = EulerSeries::new(params);
    if x < 0.0 {
        if let Some(m) = parity_excess(params) {
            // P_ℓ^{-ν}(-x) = (-1)^m P_ℓ^{-ν}(x) when ℓ - ν = m ∈ ℕ; evaluating
            // at |x| keeps the series argument below 1/2 and avoids cancellation.
            let v = series.value(-x, tol)?;
            return Ok(if m % 2 == 0 { v } else { -v });
        }
    }
    if x >= 0.0 || series.terminates() {
        return series.value(x, tol);
    }
    continue_by_ode(params, &series, x, tol)
}

/// `m = ℓ̃ - ν` when it is a non-negative integer, with `ℓ̃ = max(ℓ, -ℓ-1)`
/// the representative of the degree under `ℓ ↔ -ℓ-1`.
fn parity_excess(params: LegendreParams) -> Option<i64> {
    let degree = params.degree.max(-params.degree - 1.0);
    snap_to_integer(degree + params.order).filter(|m| *m >= 0)
}

/// `P_ℓ^μ(0) = 2^μ √π / (Γ((ℓ-μ)/2 + 1) Γ(1/2 - (ℓ+μ)/2))`, with a pole of
/// either Gamma factor giving an exact zero.
pub fn legendre_p_at_zero(params: LegendreParams) -> f64 {
    let (l, mu) = (params.degree, params.order);
    2f64.powf(mu)
        * std::f64::consts::PI.sqrt()
        * recip_gamma((l - mu) / 2.0 + 1.0)
        * recip_gamma(0.5 - (l + mu) / 2.0)
}

/// `₂F₁(a, b; c; w)` with `a = ℓ+1+ν`, `b = ν-ℓ`, `c = 1+ν`, together with
/// the prefactor `(1-x²)^{ν/2} / (2^ν Γ(1+ν))`.
struct EulerSeries {
    a: f64,
    b: f64,
    c: f64,
    nu: f64,
    /// Number of nonzero terms if one numerator parameter is a non-positive integer.
    terms: Option<usize>,
}

impl EulerSeries {
    fn new(params: LegendreParams) -> Self {
        let nu = -params.order;
        let l = params.degree;
        let a = l + 1.0 + nu;
        let b = nu - l;
        let terms = [a, b]
            .into_iter()
            .filter_map(snap_to_integer)
            .filter(|n| *n <= 0)
            .map(|n| (-n) as usize + 1)
            .min();
        // Snap the terminating parameter so the truncated tail is exactly zero.
        let (a, b) = match terms {
            Some(n) if snap_to_integer(a) == Some(1 - n as i64) => (1.0 - n as f64, b),
            Some(n) => (a, 1.0 - n as f64),
            None => (a, b),
        };
        Self {
            a,
            b,
            c: 1.0 + nu,
            nu,
            terms,
        }
    }

    fn terminates(&self) -> bool {
        self.terms.is_some()
    }

    fn prefactor(&self, x: f64) -> f64 {
        let nu = self.nu;
        if nu == 0.0 {
            return 1.0;
        }
        let log = 0.5 * nu * (1.0 - x * x).ln()
            - nu * std::f64::consts::LN_2
            - libm::lgamma(1.0 + nu);
        log.exp()
    }

    /// Returns `(F(w), F'(w))`.
    fn hypergeometric(&self, w: f64, tol: f64) -> Result<(f64, f64)> {
        let (a, b, c) = (self.a, self.b, self.c);
        // coefficient of w^n
        let mut coeff = 1.0;
        let mut sum = 1.0;
        let mut dsum = 0.0;
        let mut wn = 1.0;
        let mut quiet = 0;
        let limit = self.terms.unwrap_or(MAX_SERIES_TERMS);
        for n in 0..limit.saturating_sub(1) {
            let nf = n as f64;
            coeff *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
            // d/dw of coeff_{n+1} w^{n+1}
            dsum += coeff * (nf + 1.0) * wn;
            wn *= w;
            let term = coeff * wn;
            sum += term;
            if self.terms.is_none() {
                if term.abs() <= tol * sum.abs() {
                    quiet += 1;
                    if quiet >= QUIET_TERMS {
                        return Ok((sum, dsum));
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        if self.terms.is_some() {
            Ok((sum, dsum))
        } else {
            let achieved = (coeff * wn / sum).abs();
            Err(Error::Convergence {
                what: "hypergeometric series",
                achieved,
            })
        }
    }

    fn value(&self, x: f64, tol: f64) -> Result<f64> {
        let (f, _) = self.hypergeometric(0.5 * (1.0 - x), tol)?;
        Ok(self.prefactor(x) * f)
    }

    /// Value and x-derivative at `x = 0`.
    fn value_and_slope_at_zero(&self, tol: f64) -> Result<(f64, f64)> {
        let (f, df) = self.hypergeometric(0.5, tol)?;
        let k = self.prefactor(0.0);
        // d/dx (1-x²)^{ν/2} vanishes at x = 0 and dw/dx = -1/2.
        Ok((k * f, -0.5 * k * df))
    }
}

/// General Legendre equation as a first-order system in `(R, R')`.
struct LegendreOde {
    eigenvalue: f64,
    order_sq: f64,
}

impl System<f64, Vector2<f64>> for LegendreOde {
    fn system(&self, x: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        let s = 1.0 - x * x;
        dy[0] = y[1];
        dy[1] = (2.0 * x * y[1] - (self.eigenvalue - self.order_sq / s) * y[0]) / s;
    }
}

fn continue_by_ode(params: LegendreParams, series: &EulerSeries, x: f64, tol: f64) -> Result<f64> {
    let (r0, dr0) = series.value_and_slope_at_zero(tol.min(1e-15))?;
    let ode = LegendreOde {
        eigenvalue: params.eigenvalue(),
        order_sq: params.order * params.order,
    };
    // The equation is invariant under x -> -x, so integrate forward in s = -x
    // where R(x) = Y(s) and Y'(0) = -R'(0).
    let s_end = -x;
    // Dopri5 with sparse output: the dense interpolant loses accuracy at the
    // endpoint, and the Dop853 step controller of ode_solvers 0.6 collapses
    // to tiny steps on this system.
    let mut stepper = Dopri5::from_param(
        ode,
        0.0,
        s_end,
        s_end,
        Vector2::new(r0, -dr0),
        ODE_ABS_TOLERANCE,
        ODE_ABS_TOLERANCE,
        0.9,
        0.04,
        0.2,
        10.0,
        s_end,
        0.0,
        100_000,
        1000,
        OutputType::Sparse,
    );
    stepper.integrate().map_err(|_| Error::Convergence {
        what: "Legendre ODE continuation",
        achieved: f64::NAN,
    })?;
    match (stepper.x_out().last(), stepper.y_out().last()) {
        (Some(&se), Some(y)) if (se - s_end).abs() <= 1e-14 => Ok(y[0]),
        (se, _) => Err(Error::Convergence {
            what: "Legendre ODE continuation",
            achieved: se.map_or(f64::NAN, |se| (se - s_end).abs()),
        }),
    }
}
