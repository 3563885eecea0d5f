//! Oracles shared by the integration tests and the acceptance runner.

/// Coefficients (lowest first) of `(ℓ-m)!/(ℓ+m)! · d^{ℓ+m}/dx^{ℓ+m} (x²-1)^ℓ / (2^ℓ ℓ!)`,
/// the polynomial factor of `P_ℓ^{-m}` from Rodrigues' formula.
pub fn rodrigues_factor(l: usize, m: usize) -> Vec<f64> {
    let mut c = vec![0.0; 2 * l + 1];
    let mut binom = 1.0;
    for k in 0..=l {
        // (x² - 1)^ℓ = Σ C(ℓ,k) x^{2k} (-1)^{ℓ-k}
        c[2 * k] = binom * if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
        binom = binom * (l - k) as f64 / (k + 1) as f64;
    }
    for _ in 0..(l + m) {
        c = c.iter().enumerate().skip(1).map(|(p, v)| p as f64 * v).collect();
    }
    let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
    let scale = fact(l - m) / fact(l + m) / (2f64.powi(l as i32) * fact(l));
    c.into_iter().map(|v| v * scale).collect()
}

pub fn rodrigues(l: usize, m: usize, x: f64) -> f64 {
    let poly = rodrigues_factor(l, m);
    let p = poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
    (1.0 - x * x).powf(m as f64 / 2.0) * p
}

use spheregap_core::special_functions::{legendre_p, LegendreParams};

fn admissible(nu: f64, m: u32) -> LegendreParams {
    LegendreParams::admissible(nu + f64::from(m), -nu).unwrap()
}

/// Central-difference residual of the Legendre equation, step `1e-4`.
pub fn check_ode_residual(nu: f64, m: u32, x: f64) -> Result<(), String> {
    let p = admissible(nu, m);
    let h = 1e-4;
    let r = |x: f64| legendre_p(p, x).unwrap();
    let (r0, rp, rm) = (r(x), r(x + h), r(x - h));
    let d1 = (rp - rm) / (2.0 * h);
    let d2 = (rp - 2.0 * r0 + rm) / (h * h);
    let s = 1.0 - x * x;
    let res = s * d2 - 2.0 * x * d1 + (p.eigenvalue() - nu * nu / s) * r0;
    if res.abs() < 1e-6 {
        Ok(())
    } else {
        Err(format!("ν = {nu}, m = {m}, x = {x}: residual {res}"))
    }
}

/// Monotone decay toward both endpoints at `x = ±(1 - 10^{-k})`, `k = 2..6`.
pub fn check_endpoint_vanishing(nu: f64, m: u32) -> Result<(), String> {
    let p = admissible(nu, m);
    for sign in [1.0, -1.0] {
        let values: Vec<f64> = (2..=6)
            .map(|k| legendre_p(p, sign * (1.0 - 10f64.powi(-k))).unwrap().abs())
            .collect();
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("ν = {nu}, m = {m}: not decreasing toward {sign}: {values:?}"));
        }
    }
    if legendre_p(p, 1.0).unwrap() != 0.0 {
        return Err(format!("ν = {nu}, m = {m}: nonzero at x = 1"));
    }
    Ok(())
}

pub fn check_reflection(l: f64, nu: f64, x: f64) -> Result<(), String> {
    let a = LegendreParams::raw(l, -nu).unwrap();
    let b = LegendreParams::raw(-l - 1.0, -nu).unwrap();
    let (va, vb) = (legendre_p(a, x).unwrap(), legendre_p(b, x).unwrap());
    if (va - vb).abs() < 1e-9 * (1.0 + va.abs()) {
        Ok(())
    } else {
        Err(format!("ℓ = {l}, ν = {nu}, x = {x}: {va} vs {vb}"))
    }
}

/// Relative agreement with Rodrigues, measured against the size of the
/// function so that its roots do not dominate.
pub fn check_rodrigues(l: usize, m: usize, x: f64) -> Result<(), String> {
    let p = LegendreParams::raw(l as f64, -(m as f64)).unwrap();
    let got = legendre_p(p, x).unwrap();
    let want = rodrigues(l, m, x);
    let scale = (0..=200)
        .map(|i| rodrigues(l, m, -1.0 + i as f64 / 100.0).abs())
        .fold(0.0, f64::max);
    if (got - want).abs() <= 1e-9 * want.abs().max(1e-3 * scale) {
        Ok(())
    } else {
        Err(format!("ℓ = {l}, m = {m}, x = {x}: {got} vs {want}"))
    }
}
