use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use spheregap_core::spectra::{
    eigenfunction_eval, gap, normalization_constant, second_mode_regime, spectrum, GapRegime,
};
use spheregap_core::variation::TriangleMode;
use spheregap_core::{Domain, LuneSpec, ModeIndex, SectorDomain, TriangleSpec};

fn lune_gap_closed(beta: f64) -> f64 {
    let x = PI / beta;
    if beta <= PI {
        2.0 * x + 2.0
    } else {
        3.0 * x * x + x
    }
}

fn triangle_gap_closed(beta: f64) -> f64 {
    let x = PI / beta;
    if beta <= FRAC_PI_2 {
        4.0 * x + 10.0
    } else {
        3.0 * x * x + 3.0 * x
    }
}

/// `Δ_S u` by central differences with step `h`.
fn fd_laplacian(f: &dyn Fn(f64, f64) -> f64, r: f64, t: f64, h: f64) -> f64 {
    let u = f(r, t);
    let urr = (f(r + h, t) - 2.0 * u + f(r - h, t)) / (h * h);
    let ur = (f(r + h, t) - f(r - h, t)) / (2.0 * h);
    let utt = (f(r, t + h) - 2.0 * u + f(r, t - h)) / (h * h);
    urr + r.cos() / r.sin() * ur + utt / r.sin().powi(2)
}

fn domain_strategy() -> impl Strategy<Value = Domain> {
    prop_oneof![
        (0.6f64..1.6).prop_map(|x| Domain::Lune(LuneSpec::new(x * PI).unwrap())),
        (0.3f64..1.0).prop_map(|x| Domain::Triangle(TriangleSpec::new(x * PI).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_is_sound(domain in domain_strategy(), seed in any::<u64>()) {
        let entries = spectrum(&domain, 4).unwrap();
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        // keep away from the pole, where csc²r amplifies finite-difference noise
        let margin = 0.05;
        for entry in &entries {
            for &mode in &entry.modes {
                let f = |r: f64, t: f64| eigenfunction_eval(&domain, mode, r, t).unwrap();
                for _ in 0..25 {
                    let r = margin + next() * (domain.r_max() - 2.0 * margin);
                    let t = margin + next() * (domain.beta() - 2.0 * margin);
                    let res = fd_laplacian(&f, r, t, 1e-4) + entry.eigenvalue * f(r, t);
                    prop_assert!(res.abs() < 1e-6, "{mode} at ({r}, {t}): {res}");
                }
            }
        }
    }

    #[test]
    fn eigenfunctions_vanish_on_dirichlet_edges(domain in domain_strategy()) {
        for entry in spectrum(&domain, 3).unwrap() {
            for &mode in &entry.modes {
                for i in 0..=100 {
                    let s = i as f64 / 100.0;
                    let along_r = s * domain.r_max();
                    let along_t = s * domain.beta();
                    let u0 = eigenfunction_eval(&domain, mode, along_r, 0.0).unwrap();
                    let u1 = eigenfunction_eval(&domain, mode, along_r, domain.beta()).unwrap();
                    let u2 = eigenfunction_eval(&domain, mode, domain.r_max(), along_t).unwrap();
                    prop_assert!(u0.abs() < 1e-8 && u1.abs() < 1e-8 && u2.abs() < 1e-8);
                }
            }
        }
    }
}

#[test]
fn gap_matches_piecewise_forms_for_random_angles() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let beta = 1e-3 + next() * (2.0 * PI - 2e-3);
        let lune = LuneSpec::new(beta).unwrap();
        let want = lune_gap_closed(beta);
        assert!((gap(&lune) - want).abs() <= 1e-12 * want, "lune β = {beta}");
        let tri = TriangleSpec::new(beta).unwrap();
        let want = triangle_gap_closed(beta);
        assert!((gap(&tri) - want).abs() <= 1e-12 * want, "triangle β = {beta}");
    }
}

#[test]
fn regime_crossovers() {
    let eps = 1e-9;
    let lune = |b: f64| LuneSpec::new(b).unwrap();
    let tri = |b: f64| TriangleSpec::new(b).unwrap();
    assert_eq!(second_mode_regime(&lune(PI - eps)), GapRegime::Radial);
    assert_eq!(second_mode_regime(&lune(PI)), GapRegime::Radial);
    assert_eq!(second_mode_regime(&lune(PI + eps)), GapRegime::Angular);
    assert_eq!(second_mode_regime(&tri(FRAC_PI_2)), GapRegime::Radial);
    assert_eq!(second_mode_regime(&tri(FRAC_PI_2 + eps)), GapRegime::Angular);
    // both candidate second modes coincide at the crossover
    assert!((gap(&lune(PI)) - 4.0).abs() < 1e-12);
    assert!((gap(&tri(FRAC_PI_2)) - 18.0).abs() < 1e-12);
}

#[test]
fn lune_gap_diverges_as_angle_closes() {
    let mut beta = PI;
    let mut last = gap(&LuneSpec::new(beta).unwrap());
    while beta > 1e-4 {
        beta /= 2.0;
        let g = gap(&LuneSpec::new(beta).unwrap());
        assert!(g > last);
        assert!((g - (2.0 * PI / beta + 2.0)).abs() <= 1e-12 * g);
        last = g;
    }
    assert!(last > 1e4);
}

#[test]
fn triangle_spectrum_is_contained_in_lune_spectrum() {
    for beta in [0.4, 1.0, FRAC_PI_2, 2.2, 3.0, 4.5] {
        let tri = spectrum(&TriangleSpec::new(beta).unwrap(), 20).unwrap();
        let lune = spectrum(&LuneSpec::new(beta).unwrap(), 400).unwrap();
        for entry in &tri {
            let found = lune
                .iter()
                .any(|l| (l.eigenvalue - entry.eigenvalue).abs() <= 1e-9 * entry.eigenvalue);
            assert!(found, "β = {beta}: {} missing from lune spectrum", entry.eigenvalue);
        }
    }
}

#[test]
fn equilateral_spectrum_and_normalized_modes() {
    let tri = TriangleSpec::equilateral();
    let entries = spectrum(&tri, 2).unwrap();
    assert_eq!(entries[0].eigenvalue, 12.0);
    assert_eq!(entries[0].modes, vec![ModeIndex::new(1, 0).unwrap()]);
    assert_eq!(entries[1].eigenvalue, 30.0);
    assert_eq!(entries[1].multiplicity(), 2);

    let cases = [
        (ModeIndex::new(1, 0).unwrap(), TriangleMode::U1),
        (ModeIndex::new(1, 1).unwrap(), TriangleMode::U2First),
        (ModeIndex::new(2, 0).unwrap(), TriangleMode::U2Second),
    ];
    for (mode, closed) in cases {
        let c = normalization_constant(&tri, mode).unwrap();
        let mut sign = 0.0;
        for i in 1..20 {
            for j in 1..20 {
                let (r, t) = (i as f64 * 0.078, j as f64 * 0.078);
                let ours = c * eigenfunction_eval(&tri, mode, r, t).unwrap();
                let theirs = closed.eval(r, t);
                if theirs.abs() < 1e-6 {
                    continue;
                }
                let s = (ours / theirs).signum();
                if sign == 0.0 {
                    sign = s;
                }
                assert_eq!(s, sign, "{mode}: sign flips");
                assert!((ours - sign * theirs).abs() < 1e-8, "{mode} at ({r}, {t})");
            }
        }
    }
}
