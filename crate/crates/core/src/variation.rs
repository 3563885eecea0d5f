//! First variation of the gap at the 90° equilateral triangle.
//!
//! The pairings `∫_T u · L₁ v` (area measure `sin r dr dθ`) between the three
//! normalized low eigenfunctions split into five terms, one per coefficient
//! of `L₁`. Each term is a product of a θ-integral and an r-integral and is
//! evaluated by Gauss–Legendre quadrature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::OnceLock;

use crate::deformation::{Direction, FieldJet};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const DEFAULT_NODES: usize = 64;

/// Absolute tolerance for each row of [`verify_appendix`].
pub const APPENDIX_TOLERANCE: f64 = 1e-9;

/// Allowed change of any term when the node count is doubled.
const QUADRATURE_CONVERGENCE: f64 = 1e-11;

/// The normalized eigenfunctions of the equilateral triangle for `λ = 12`
/// and `λ = 30`, each of the form `√C · f(cos r) · sin(mθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleMode {
    /// `x - x³`, `m = 2`
    U1,
    /// `3x⁵ - 4x³ + x`, `m = 2`
    U2First,
    /// `x - 2x³ + x⁵`, `m = 4`
    U2Second,
}

impl TriangleMode {
    pub const ALL: [TriangleMode; 3] = [Self::U1, Self::U2First, Self::U2Second];

    pub fn label(self) -> &'static str {
        match self {
            Self::U1 => "u1",
            Self::U2First => "u2(1)",
            Self::U2Second => "u2(2)",
        }
    }

    pub fn eigenvalue(self) -> f64 {
        match self {
            Self::U1 => 12.0,
            _ => 30.0,
        }
    }

    /// Square of the normalizing factor.
    pub fn norm_constant(self) -> f64 {
        match self {
            Self::U1 => 105.0 / (2.0 * PI),
            Self::U2First => 1155.0 / (8.0 * PI),
            Self::U2Second => 3465.0 / (32.0 * PI),
        }
    }

    pub fn angular_frequency(self) -> f64 {
        match self {
            Self::U1 | Self::U2First => 2.0,
            Self::U2Second => 4.0,
        }
    }

    /// Coefficients of the radial polynomial in `x = cos r`, lowest degree first.
    fn poly(self) -> [f64; 6] {
        match self {
            Self::U1 => [0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
            Self::U2First => [0.0, 1.0, 0.0, -4.0, 0.0, 3.0],
            Self::U2Second => [0.0, 1.0, 0.0, -2.0, 0.0, 1.0],
        }
    }

    /// Radial factor and its first two r-derivatives, without normalization.
    pub fn radial(self, r: f64) -> (f64, f64, f64) {
        let (s, x) = r.sin_cos();
        let (f, fx, fxx) = self.poly_derivatives(x);
        (f, -s * fx, s * s * fxx - x * fx)
    }

    /// `(f, f', f'')` in the variable `x`.
    fn poly_derivatives(self, x: f64) -> (f64, f64, f64) {
        let c = self.poly();
        let mut f = 0.0;
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for k in (0..c.len()).rev() {
            f = f * x + c[k];
        }
        for k in (1..c.len()).rev() {
            d1 = d1 * x + k as f64 * c[k];
        }
        for k in (2..c.len()).rev() {
            d2 = d2 * x + (k * (k - 1)) as f64 * c[k];
        }
        (f, d1, d2)
    }

    /// Angular factor and its first two θ-derivatives.
    pub fn angular(self, theta: f64) -> (f64, f64, f64) {
        let m = self.angular_frequency();
        let (s, c) = (m * theta).sin_cos();
        (s, m * c, -m * m * s)
    }

    pub fn eval(self, r: f64, theta: f64) -> f64 {
        let (f, _, _) = self.radial(r);
        let (g, _, _) = self.angular(theta);
        self.norm_constant().sqrt() * f * g
    }

    /// Analytic derivatives of the normalized mode.
    pub fn jet(self, r: f64, theta: f64) -> FieldJet {
        let k = self.norm_constant().sqrt();
        let (f, fr, frr) = self.radial(r);
        let (g, gt, gtt) = self.angular(theta);
        FieldJet {
            d_r: k * fr * g,
            d_theta: k * f * gt,
            d_rr: k * frr * g,
            d_r_theta: k * fr * gt,
            d_theta_theta: k * f * gtt,
        }
    }
}

impl fmt::Display for TriangleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `∫_T left · L₁(right) sin r dr dθ` for the direction `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingSpec {
    pub left: TriangleMode,
    pub right: TriangleMode,
    pub direction: Direction,
}

impl PairingSpec {
    pub fn new(left: TriangleMode, right: TriangleMode, direction: Direction) -> Self {
        Self { left, right, direction }
    }

    pub fn label(&self) -> String {
        format!("{},{}", self.left, self.right)
    }
}

pub const TERM_LABELS: [&str; 5] = ["I", "II", "III", "IV", "V"];

/// The five terms, in the order of the coefficients of `L₁`: `∂_r²`, `∂_r`,
/// `∂_r∂_θ`, the b-part of `∂_θ²` and the a-part of `∂_θ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearTermTable {
    pub terms: [f64; 5],
    pub total: f64,
}

impl BilinearTermTable {
    fn from_terms(terms: [f64; 5]) -> Self {
        Self {
            terms,
            total: terms.iter().sum(),
        }
    }
}

/// Factorized integrals with unit `a` and `b`.
#[derive(Debug, Clone, Copy)]
struct UnitTerms([f64; 5]);

fn unit_terms(left: TriangleMode, right: TriangleMode, rule: &GaussLegendre) -> UnitTerms {
    let theta = |f: &dyn Fn(f64) -> f64| rule.integrate(0.0, FRAC_PI_2, f);
    let radial = theta;

    let tl = |t: f64| left.angular(t).0;
    let th1 = theta(&|t| tl(t) * t.sin() * right.angular(t).0);
    let th3 = theta(&|t| tl(t) * t.cos() * right.angular(t).1);
    let th4 = theta(&|t| tl(t) * t.sin() * right.angular(t).2);
    let th5 = theta(&|t| tl(t) * right.angular(t).2);

    let fl = |r: f64| left.radial(r).0;
    let r1 = radial(&|r| fl(r) * right.radial(r).2 * r.sin());
    let r2 = radial(&|r| fl(r) * right.radial(r).1 * r.cos());
    let r3 = radial(&|r| fl(r) * right.radial(r).1 * r / r.sin());
    let r4 = radial(&|r| fl(r) * right.radial(r).0 * r * r.cos() / r.sin().powi(2));
    let r5 = radial(&|r| fl(r) * right.radial(r).0 / r.sin());

    let c = (left.norm_constant() * right.norm_constant()).sqrt();
    let k = 4.0 / PI;
    UnitTerms([
        c * k * th1 * r1,
        c * 0.5 * k * th1 * r2,
        c * k * th3 * r3,
        c * k * th4 * r4,
        c * k * th5 * r5,
    ])
}

impl UnitTerms {
    fn scaled(self, direction: Direction) -> BilinearTermTable {
        let b = direction.b();
        let [t1, t2, t3, t4, t5] = self.0;
        BilinearTermTable::from_terms([b * t1, b * t2, b * t3, b * t4, direction.a() * t5])
    }
}

fn converged_unit_terms(left: TriangleMode, right: TriangleMode, nodes: usize) -> Result<UnitTerms> {
    let coarse = unit_terms(left, right, &GaussLegendre::new(nodes));
    let fine = unit_terms(left, right, &GaussLegendre::new(2 * nodes));
    let drift = coarse
        .0
        .iter()
        .zip(&fine.0)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if drift > QUADRATURE_CONVERGENCE {
        return Err(Error::Convergence {
            what: "pairing quadrature",
            achieved: drift,
        });
    }
    Ok(coarse)
}

pub fn pairing_terms(spec: PairingSpec) -> Result<BilinearTermTable> {
    pairing_terms_with_nodes(spec, DEFAULT_NODES)
}

/// As [`pairing_terms`] with an explicit Gauss–Legendre node count per axis.
/// The result is checked against the rule with twice as many nodes.
pub fn pairing_terms_with_nodes(spec: PairingSpec, nodes: usize) -> Result<BilinearTermTable> {
    if nodes < 2 {
        return Err(Error::invalid("pairing quadrature needs at least 2 nodes"));
    }
    Ok(converged_unit_terms(spec.left, spec.right, nodes)?.scaled(spec.direction))
}

/// `λ̇₁ = -⟨L₁u₁, u₁⟩ = 28(a + b)/π`.
pub fn lambda1_dot(direction: Direction) -> f64 {
    let form = VariationForm::shared();
    -(direction.b() * form.u1.0 + direction.a() * form.u1.1)
}

/// Pairing totals split into their `b` and `a` coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationForm {
    /// `∫u₁L₁u₁`
    pub u1: (f64, f64),
    /// `∫u₂⁽¹⁾L₁u₂⁽¹⁾`
    pub pp: (f64, f64),
    /// `∫u₂⁽²⁾L₁u₂⁽¹⁾ + ∫u₂⁽¹⁾L₁u₂⁽²⁾`
    pub pq: (f64, f64),
    /// `∫u₂⁽²⁾L₁u₂⁽²⁾`
    pub qq: (f64, f64),
}

impl VariationForm {
    pub fn compute() -> Result<Self> {
        use TriangleMode::*;
        let split = |l, r| -> Result<(f64, f64)> {
            let t = converged_unit_terms(l, r, DEFAULT_NODES)?.0;
            Ok((t[0] + t[1] + t[2] + t[3], t[4]))
        };
        let qp = split(U2Second, U2First)?;
        let pq = split(U2First, U2Second)?;
        Ok(Self {
            u1: split(U1, U1)?,
            pp: split(U2First, U2First)?,
            pq: (qp.0 + pq.0, qp.1 + pq.1),
            qq: split(U2Second, U2Second)?,
        })
    }

    /// Process-wide instance; the quadrature inputs are fixed so this cannot fail.
    pub fn shared() -> &'static Self {
        static FORM: OnceLock<VariationForm> = OnceLock::new();
        FORM.get_or_init(|| Self::compute().expect("pairing quadrature converges for fixed modes"))
    }

    /// Symmetric 2×2 matrix of `I` as a quadratic form in `(p, q) = (cos z, sin z)`.
    pub fn matrix(&self, direction: Direction) -> [[f64; 2]; 2] {
        let (a, b) = (direction.a(), direction.b());
        let dot = |v: (f64, f64)| b * v.0 + a * v.1;
        let u1 = dot(self.u1);
        let off = -0.5 * dot(self.pq);
        [[u1 - dot(self.pp), off], [off, u1 - dot(self.qq)]]
    }

    /// `I = -∫u₂L₁u₂ + ∫u₁L₁u₁` with `u₂ = cos z · u₂⁽¹⁾ + sin z · u₂⁽²⁾`.
    pub fn eval(&self, z: f64, direction: Direction) -> f64 {
        let (q, p) = z.sin_cos();
        let m = self.matrix(direction);
        m[0][0] * p * p + 2.0 * m[0][1] * p * q + m[1][1] * q * q
    }

    /// `min_z I`, the smaller eigenvalue of [`Self::matrix`].
    pub fn min_over_z(&self, direction: Direction) -> f64 {
        let [[x, y], [_, w]] = self.matrix(direction);
        0.5 * (x + w) - (0.25 * (x - w) * (x - w) + y * y).sqrt()
    }
}

/// `I(z; a, b)` from the quadrature totals.
#[allow(non_snake_case)]
pub fn gap_variation_I(z: f64, direction: Direction) -> f64 {
    VariationForm::shared().eval(z, direction)
}

/// `I = b(27 + 22cos²z - 22√3 cos z sin z)/π + a(16 + 44 sin²z)/π`.
pub fn gap_variation_closed_form(z: f64, direction: Direction) -> f64 {
    let (s, c) = z.sin_cos();
    let b_part = 27.0 + 22.0 * c * c - 22.0 * 3f64.sqrt() * c * s;
    let a_part = 16.0 + 44.0 * s * s;
    (direction.b() * b_part + direction.a() * a_part) / PI
}

/// Grid minimum of `I` over `z ∈ [0, 2π]`, `b ∈ [0, 1]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub value: f64,
    pub z: f64,
    pub b: f64,
}

pub fn grid_minimum(z_steps: usize, b_steps: usize) -> Result<GridMinimum> {
    if z_steps == 0 || b_steps == 0 {
        return Err(Error::invalid("grid search needs at least one step per axis"));
    }
    let form = VariationForm::shared();
    let mut best = GridMinimum {
        value: f64::INFINITY,
        z: 0.0,
        b: 0.0,
    };
    for i in 0..=b_steps {
        let b = i as f64 / b_steps as f64;
        let direction = Direction::from_b(b)?;
        let m = form.matrix(direction);
        for k in 0..=z_steps {
            let z = 2.0 * PI * k as f64 / z_steps as f64;
            let (q, p) = z.sin_cos();
            let v = m[0][0] * p * p + 2.0 * m[0][1] * p * q + m[1][1] * q * q;
            if v < best.value {
                best = GridMinimum { value: v, z, b };
            }
        }
    }
    Ok(best)
}

/// The exact gap of `T(t)` along either axis direction, `4π/(π/2 - t) + 10`.
pub fn axis_gap(t: f64) -> f64 {
    4.0 * PI / (FRAC_PI_2 - t) + 10.0
}

/// `d/dt [4π/(π/2 - t) + 10]` at `t = 0`.
pub fn axis_gap_slope() -> f64 {
    4.0 * PI / (FRAC_PI_2 * FRAC_PI_2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixRow {
    pub label: String,
    pub computed: f64,
    pub expected: f64,
    pub abs_err: f64,
}

impl AppendixRow {
    pub fn passed(&self) -> bool {
        self.abs_err < APPENDIX_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendixReport {
    pub rows: Vec<AppendixRow>,
}

impl AppendixReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(AppendixRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AppendixRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn max_abs_err(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_err).fold(0.0, f64::max)
    }
}

/// Printed closed forms of the five terms per pairing. Terms I–IV are
/// coefficients of `b`, term V of `a`.
fn printed_terms(left: TriangleMode, right: TriangleMode) -> [f64; 5] {
    use TriangleMode::*;
    let c1 = U1.norm_constant();
    let c2 = U2First.norm_constant();
    let c3 = U2Second.norm_constant();
    let s = (c2 * c3).sqrt();
    let pi = PI;
    match (left, right) {
        (U1, U1) => [
            -c1 * 1408.0 / 1575.0 / pi,
            c1 * 64.0 / 1575.0 / pi,
            c1 * (16.0 / 450.0 - 448.0 / 3375.0 / pi),
            c1 * (3328.0 / 3375.0 / pi - 128.0 / 225.0),
            -c1 * 8.0 / 15.0,
        ],
        (U2First, U2First) => [
            -c2 * 6656.0 / 5775.0 / pi,
            c2 * 256.0 / 17325.0 / pi,
            c2 * (8.0 / 225.0 - 2816.0 / 23625.0 / pi),
            c2 * (29696.0 / 23625.0 / pi - 128.0 / 225.0),
            -c2 * 32.0 / 105.0,
        ],
        (U2Second, U2First) => [
            s * 8192.0 / 40425.0 / pi,
            -s * 2048.0 / 121275.0 / pi,
            s * (1936.0 / 11025.0 - 833536.0 / 3472875.0 / pi),
            s * (188416.0 / 3472875.0 / pi - 256.0 / 11025.0),
            0.0,
        ],
        (U2First, U2Second) => [
            s * 2048.0 / 14553.0 / pi,
            s * 1024.0 / 72765.0 / pi,
            s * (2704.0 / 11025.0 - 1291264.0 / 3472875.0 / pi),
            s * (753664.0 / 3472875.0 / pi - 1024.0 / 11025.0),
            0.0,
        ],
        (U2Second, U2Second) => [
            -c3 * 139264.0 / 218295.0 / pi,
            c3 * 4096.0 / 218295.0 / pi,
            c3 * (32.0 / 3969.0 - 45056.0 / 1250235.0 / pi),
            c3 * (163840.0 / 250047.0 / pi - 2048.0 / 3969.0),
            -c3 * 256.0 / 315.0,
        ],
        _ => [f64::NAN; 5],
    }
}

/// Printed totals as `(b coefficient, a coefficient)`.
fn printed_totals(left: TriangleMode, right: TriangleMode) -> (f64, f64) {
    use TriangleMode::*;
    let pi = PI;
    match (left, right) {
        (U1, U1) => (-28.0 / pi, -28.0 / pi),
        (U2First, U2First) => (-77.0 / pi, -44.0 / pi),
        (U2Second, U2First) | (U2First, U2Second) => (11.0 * 3f64.sqrt() / pi, 0.0),
        (U2Second, U2Second) => (-55.0 / pi, -88.0 / pi),
        _ => (f64::NAN, f64::NAN),
    }
}

/// The pairings reproduced by [`verify_appendix`], in report order.
pub const APPENDIX_PAIRINGS: [(TriangleMode, TriangleMode); 5] = [
    (TriangleMode::U1, TriangleMode::U1),
    (TriangleMode::U2First, TriangleMode::U2First),
    (TriangleMode::U2Second, TriangleMode::U2First),
    (TriangleMode::U2First, TriangleMode::U2Second),
    (TriangleMode::U2Second, TriangleMode::U2Second),
];

/// Direction at which the combined totals are checked. Any unit direction
/// with both components nonzero exercises both coefficients.
const TOTALS_DIRECTION: (f64, f64) = (0.6, 0.8);

/// Recomputes every printed term value (25 rows) and the five combined
/// totals. Rows carry their own pass flag; the caller decides how to fail.
pub fn verify_appendix() -> Result<AppendixReport> {
    let dir = Direction::new(TOTALS_DIRECTION.0, TOTALS_DIRECTION.1)?;
    let mut rows = Vec::with_capacity(30);
    let mut totals = Vec::with_capacity(5);
    for (left, right) in APPENDIX_PAIRINGS {
        let unit = converged_unit_terms(left, right, DEFAULT_NODES)?;
        let expected = printed_terms(left, right);
        let pair = format!("{left},{right}");
        for (i, label) in TERM_LABELS.iter().enumerate() {
            rows.push(row(format!("{pair} {label}"), unit.0[i], expected[i]));
        }
        let (eb, ea) = printed_totals(left, right);
        let total = unit.scaled(dir).total;
        totals.push(row(
            format!("{pair} total (a,b)=({},{})", dir.a(), dir.b()),
            total,
            dir.b() * eb + dir.a() * ea,
        ));
    }
    rows.extend(totals);
    Ok(AppendixReport { rows })
}

fn row(label: String, computed: f64, expected: f64) -> AppendixRow {
    AppendixRow {
        label,
        computed,
        expected,
        abs_err: (computed - expected).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{first_order_operator_apply, round_laplacian, CoordPoint};

    fn axis_b() -> Direction {
        Direction::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn modes_are_eigenfunctions() {
        for mode in TriangleMode::ALL {
            for &(r, t) in &[(0.3, 0.4), (1.1, 0.9), (0.7, 1.4)] {
                let u = mode.eval(r, t);
                let lap = round_laplacian(&mode.jet(r, t), r);
                assert!((lap + mode.eigenvalue() * u).abs() < 1e-11 * (1.0 + u.abs()), "{mode}");
            }
        }
    }

    #[test]
    fn modes_are_normalized() {
        let g = GaussLegendre::new(48);
        for mode in TriangleMode::ALL {
            let n = g.integrate_2d((0.0, FRAC_PI_2), (0.0, FRAC_PI_2), |r, t| {
                mode.eval(r, t).powi(2) * r.sin()
            });
            assert!((n - 1.0).abs() < 1e-13, "{mode}: {n}");
        }
    }

    #[test]
    fn u1_term_one_example() {
        let spec = PairingSpec::new(TriangleMode::U1, TriangleMode::U1, axis_b());
        let table = pairing_terms(spec).unwrap();
        let c1 = TriangleMode::U1.norm_constant();
        assert!((table.terms[0] + c1 * 1408.0 / (1575.0 * PI)).abs() < 1e-12);
        assert_eq!(table.terms[4], 0.0);
    }

    #[test]
    fn totals_match_combined_values() {
        use TriangleMode::*;
        let dir = Direction::new(0.28, 0.96).unwrap();
        let (a, b) = (dir.a(), dir.b());
        let cases = [
            (U1, U1, -28.0 * (a + b) / PI),
            (U2First, U2First, (-77.0 * b - 44.0 * a) / PI),
            (U2Second, U2First, 11.0 * 3f64.sqrt() * b / PI),
            (U2First, U2Second, 11.0 * 3f64.sqrt() * b / PI),
            (U2Second, U2Second, (-55.0 * b - 88.0 * a) / PI),
        ];
        for (l, r, expected) in cases {
            let table = pairing_terms(PairingSpec::new(l, r, dir)).unwrap();
            assert!((table.total - expected).abs() < 1e-11, "{l},{r}");
            assert!((table.total - table.terms.iter().sum::<f64>()).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_total_matches_constant_product_form() {
        let c2 = TriangleMode::U2First.norm_constant();
        let c3 = TriangleMode::U2Second.norm_constant();
        let table = pairing_terms(PairingSpec::new(
            TriangleMode::U2First,
            TriangleMode::U2Second,
            axis_b(),
        ))
        .unwrap();
        assert!((table.total - (c2 * c3).sqrt() * 16.0 / 105.0).abs() < 1e-12);
        assert!(((c2 * c3).sqrt() - 1155.0 * 3f64.sqrt() / (16.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn separable_terms_agree_with_direct_2d_integral() {
        let g = GaussLegendre::new(64);
        let dir = Direction::new(0.6, 0.8).unwrap();
        for (l, r) in APPENDIX_PAIRINGS {
            let direct = g.integrate_2d((0.0, FRAC_PI_2), (0.0, FRAC_PI_2), |rr, t| {
                let p = CoordPoint { r: rr, theta: t };
                let lu = first_order_operator_apply(dir, &r.jet(rr, t), p).unwrap();
                l.eval(rr, t) * lu * rr.sin()
            });
            let table = pairing_terms(PairingSpec::new(l, r, dir)).unwrap();
            assert!((direct - table.total).abs() < 1e-9, "{l},{r}");
        }
    }

    #[test]
    fn appendix_reproduced() {
        let report = verify_appendix().unwrap();
        assert_eq!(report.rows.len(), 30);
        for r in &report.rows {
            assert!(r.passed(), "{}: {} vs {}", r.label, r.computed, r.expected);
        }
    }

    #[test]
    fn lambda1_dot_examples() {
        let v = 28.0 / PI;
        assert!((lambda1_dot(Direction::new(0.0, 1.0).unwrap()) - v).abs() < 1e-12);
        assert!((lambda1_dot(Direction::new(1.0, 0.0).unwrap()) - v).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = Direction::new(h, h).unwrap();
        assert!((lambda1_dot(d) - 28.0 * 2f64.sqrt() / PI).abs() < 1e-12);
    }

    #[test]
    fn functional_matches_closed_form() {
        for b in [0.0, 0.3, 0.77, 1.0] {
            let d = Direction::from_b(b).unwrap();
            for k in 0..17 {
                let z = k as f64 * 0.4;
                assert!((gap_variation_I(z, d) - gap_variation_closed_form(z, d)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn functional_minimum() {
        let floor = 16.0 / PI;
        let a_axis = Direction::new(1.0, 0.0).unwrap();
        assert!((gap_variation_I(0.0, a_axis) - floor).abs() < 1e-11);
        assert!((VariationForm::shared().min_over_z(a_axis) - floor).abs() < 1e-11);
        assert!((VariationForm::shared().min_over_z(axis_b()) - floor).abs() < 1e-11);
        let m = grid_minimum(200, 200).unwrap();
        assert!((m.value - floor).abs() < 1e-10);
        assert!(grid_minimum(0, 3).is_err());
    }

    #[test]
    fn axis_slope() {
        assert!((axis_gap_slope() - 16.0 / PI).abs() < 1e-12);
        assert!((axis_gap(0.0) - 18.0).abs() < 1e-12);
    }
}
