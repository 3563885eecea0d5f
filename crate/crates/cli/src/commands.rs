use std::f64::consts::PI;

use spheregap_core::eigensolver::{gap_slope as numeric_gap_slope, solve as fem_solve, SolverConfig};
use spheregap_core::spectra::{gap, second_mode_regime, spectrum as closed_spectrum};
use spheregap_core::variation::{axis_gap_slope, verify_appendix as check_appendix, VariationForm};
use spheregap_core::{DeformationParams, Direction, Domain, LuneSpec, ModeIndex, SectorDomain, TriangleSpec};

use crate::output::{Cell, Report};
use crate::{DomainKind, Failure};

/// An angle as typed; π multiples stay exact until the last step.
#[derive(Debug, Clone, Copy)]
pub enum Angle {
    Radians(f64),
    PiMultiple(f64),
}

impl Angle {
    fn parts(self) -> (f64, f64) {
        match self {
            Angle::Radians(r) => (r, 1.0),
            Angle::PiMultiple(x) => (x, PI),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn domain(kind: DomainKind, beta: f64) -> Result<Domain, Failure> {
    Ok(match kind {
        DomainKind::Lune => Domain::Lune(LuneSpec::new(beta)?),
        DomainKind::Triangle => Domain::Triangle(TriangleSpec::new(beta)?),
    })
}

fn kind_name(kind: DomainKind) -> &'static str {
    match kind {
        DomainKind::Lune => "lune",
        DomainKind::Triangle => "triangle",
    }
}

fn unit_direction(a: f64, b: f64) -> Result<Direction, Failure> {
    if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0) {
        return Err(usage(format!("direction (a, b) = ({a}, {b}) must be nonnegative and nonzero")));
    }
    let n = a.hypot(b);
    Ok(Direction::new(a / n, b / n)?)
}

fn modes_text(modes: &[ModeIndex]) -> String {
    modes.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

pub fn spectrum(kind: DomainKind, beta: f64, count: usize) -> Result<Report, Failure> {
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let d = domain(kind, beta)?;
    let mut report = Report::new("spectrum", &["index", "eigenvalue", "multiplicity", "modes"]);
    report
        .param("domain", kind_name(kind))
        .param("beta", beta)
        .param("count", count);
    for (i, entry) in closed_spectrum(&d, count)?.iter().enumerate() {
        report.row(vec![
            (i + 1).into(),
            entry.eigenvalue.into(),
            entry.multiplicity().into(),
            modes_text(&entry.modes).into(),
        ]);
    }
    Ok(report)
}

pub fn gap_curve(kind: DomainKind, lo: Angle, hi: Angle, steps: usize) -> Result<Report, Failure> {
    if steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    let (lo_x, lo_scale) = lo.parts();
    let (hi_x, hi_scale) = hi.parts();
    let (beta_min, beta_max) = (lo_x * lo_scale, hi_x * hi_scale);
    if !(beta_min > 0.0 && beta_min < beta_max && beta_max < 2.0 * PI) {
        return Err(usage(format!("need 0 < beta_min < beta_max < 2π, got [{beta_min}, {beta_max}]")));
    }
    let mut report = Report::new("gap-curve", &["beta", "beta_over_pi", "lambda1", "gap", "regime"]);
    report
        .param("domain", kind_name(kind))
        .param("beta_min", beta_min)
        .param("beta_max", beta_max)
        .param("steps", steps);
    for i in 0..=steps {
        let s = i as f64 / steps as f64;
        // interpolate in the units given so that e.g. 1.0·π lands exactly on π
        let beta = if lo_scale == hi_scale {
            (lo_x + s * (hi_x - lo_x)) * lo_scale
        } else {
            beta_min + s * (beta_max - beta_min)
        };
        let beta = if i == steps { beta_max } else { beta };
        let d = domain(kind, beta)?;
        report.row(vec![
            beta.into(),
            (beta / PI).into(),
            d.eigenvalue(ModeIndex::new(1, 0)?).into(),
            gap(&d).into(),
            second_mode_regime(&d).as_str().into(),
        ]);
    }
    Ok(report)
}

/// `z` minimizing the quadratic form `(cos z, sin z) M (cos z, sin z)ᵀ`, in `[0, π)`.
fn argmin_z(m: [[f64; 2]; 2]) -> f64 {
    let z = 0.5 * (2.0 * m[0][1]).atan2(m[0][0] - m[1][1]) + PI / 2.0;
    z.rem_euclid(PI)
}

pub fn variation(direction: Option<(f64, f64)>, z_steps: usize, b_steps: usize) -> Result<Report, Failure> {
    if z_steps == 0 {
        return Err(usage("--z-steps must be at least 1"));
    }
    let directions: Vec<Direction> = match direction {
        Some((a, b)) => vec![unit_direction(a, b)?],
        None => {
            if b_steps == 0 {
                return Err(usage("--b-steps must be at least 1"));
            }
            (0..=b_steps)
                .map(|i| Direction::from_b(i as f64 / b_steps as f64))
                .collect::<Result<_, _>>()?
        }
    };
    let form = VariationForm::shared();
    let mut report = Report::new("variation", &["kind", "a", "b", "z", "value"]);
    report.param("z_steps", z_steps);
    match direction {
        Some(_) => report.param("a", directions[0].a()).param("b", directions[0].b()),
        None => report.param("b_steps", b_steps),
    };

    let mut grid_best: Option<(f64, Direction, f64)> = None;
    let mut exact_best: Option<(f64, Direction, f64)> = None;
    for &dir in &directions {
        for k in 0..z_steps {
            let z = 2.0 * PI * k as f64 / z_steps as f64;
            let v = form.eval(z, dir);
            report.row(vec!["sample".into(), dir.a().into(), dir.b().into(), z.into(), v.into()]);
            if grid_best.map_or(true, |(best, _, _)| v < best) {
                grid_best = Some((v, dir, z));
            }
        }
        let v = form.min_over_z(dir);
        if exact_best.map_or(true, |(best, _, _)| v < best) {
            exact_best = Some((v, dir, argmin_z(form.matrix(dir))));
        }
    }
    for (kind, (v, dir, z)) in [("grid_min", grid_best), ("min_over_z", exact_best)]
        .map(|(k, b)| (k, b.expect("at least one sample")))
    {
        report.row(vec![kind.into(), dir.a().into(), dir.b().into(), z.into(), v.into()]);
    }
    let bound = 16.0 / PI;
    report.row(vec!["bound_16_over_pi".into(), Cell::Empty, Cell::Empty, Cell::Empty, bound.into()]);
    let (min, ..) = exact_best.expect("at least one direction");
    eprintln!("min I = {min:.12} vs 16/π = {bound:.12} (difference {:.3e})", min - bound);
    Ok(report)
}

pub fn verify_appendix() -> Result<Report, Failure> {
    let appendix = check_appendix()?;
    let mut report = Report::new("verify-appendix", &["label", "computed", "expected", "abs_err", "passed"]);
    report
        .param("rows", appendix.rows.len())
        .param("max_abs_err", appendix.max_abs_err());
    for row in &appendix.rows {
        report.row(vec![
            row.label.clone().into(),
            row.computed.into(),
            row.expected.into(),
            row.abs_err.into(),
            row.passed().into(),
        ]);
    }
    Ok(report)
}

fn solver_config(grid_n: usize, modes: usize) -> Result<SolverConfig, Failure> {
    let config = SolverConfig {
        grid_n,
        num_modes: modes,
        ..SolverConfig::default()
    };
    config.validate()?;
    Ok(config)
}

pub fn solve(a: f64, b: f64, t: f64, grid_n: usize, modes: usize) -> Result<Report, Failure> {
    let dir = unit_direction(a, b)?;
    let params = DeformationParams::new(dir, t)?;
    let config = solver_config(grid_n, modes)?;
    let pairs = fem_solve(&params, &config)?;
    let mut report = Report::new("solve", &["quantity", "index", "value", "residual"]);
    report
        .param("a", dir.a())
        .param("b", dir.b())
        .param("t", t)
        .param("grid_n", grid_n)
        .param("modes", modes);
    for (i, p) in pairs.iter().enumerate() {
        report.row(vec!["eigenvalue".into(), (i + 1).into(), p.value.into(), p.residual.into()]);
    }
    report.row(vec![
        "gap".into(),
        Cell::Empty,
        (pairs[1].value - pairs[0].value).into(),
        Cell::Empty,
    ]);
    Ok(report)
}

pub fn gap_slope(a: f64, b: f64, t_list: &[f64], grid_n: usize) -> Result<Report, Failure> {
    let dir = unit_direction(a, b)?;
    let config = solver_config(grid_n, 3)?;
    let slope = numeric_gap_slope(dir, t_list, &config)?;
    let mut report = Report::new("gap-slope", &["quantity", "t", "value"]);
    report
        .param("a", dir.a())
        .param("b", dir.b())
        .param("grid_n", grid_n)
        .param("warning", slope.warning.clone().map_or(Cell::Empty, Cell::Text));
    report.row(vec!["gap".into(), 0.0.into(), slope.gap_at_zero.into()]);
    for (&t, &g) in slope.t_values.iter().zip(&slope.gaps) {
        report.row(vec!["gap".into(), t.into(), g.into()]);
    }
    for (&t, &q) in slope.t_values.iter().zip(&slope.quotients) {
        report.row(vec!["quotient".into(), t.into(), q.into()]);
    }
    report.row(vec!["slope".into(), Cell::Empty, slope.slope.into()]);
    report.row(vec!["error_estimate".into(), Cell::Empty, slope.error_estimate.into()]);
    let first_order = VariationForm::shared().min_over_z(dir);
    report.row(vec!["first_order".into(), Cell::Empty, first_order.into()]);
    report.row(vec!["axis_slope".into(), Cell::Empty, axis_gap_slope().into()]);
    if let Some(w) = &slope.warning {
        eprintln!("spheregap: warning: {w}");
    }
    Ok(report)
}
