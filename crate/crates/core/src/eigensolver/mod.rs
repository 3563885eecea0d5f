//! Numerical Dirichlet eigenvalues of the deformed triangles `T(t)`, computed
//! on the fixed coordinate square with the pullback metric `g_t`.
//!
//! Bilinear elements give sparse `K` and `M`; the smallest generalized
//! eigenpairs come from shift-invert block subspace iteration on a banded
//! `LDLᵀ` factorization of `K - σM`.

mod assembly;
mod banded;
mod dense;

use nalgebra::DMatrix;
use nalgebra_sparse::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use assembly::{element_matrices, DiscreteEigenproblem, DofMap, ElementMatrices, Geometry};
pub use banded::BandedLdl;
pub use dense::{solve_dense, MAX_DENSE_GRID};

use crate::deformation::{DeformationParams, Direction};
use crate::error::{Error, Result};

/// Grid used for gap slopes. Coarser grids split the degenerate `λ₂ = λ₃`
/// pair by an amount that the difference quotient divides by `t`.
pub const GAP_SLOPE_GRID: usize = 192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Nodes per axis.
    pub grid_n: usize,
    pub num_modes: usize,
    /// Spectral shift `σ` of the factorization `K - σM`.
    pub shift: f64,
    /// Bound on `‖Kv - λMv‖ / ‖Mv‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed of the starting block.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_n: 96,
            num_modes: 3,
            shift: 0.0,
            tol: 1e-8,
            max_iter: 500,
            seed: 0x5eed,
        }
    }
}

impl SolverConfig {
    pub fn with_grid(grid_n: usize) -> Self {
        Self {
            grid_n,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_n < 8 {
            return Err(Error::invalid(format!("grid_n must be ≥ 8, got {}", self.grid_n)));
        }
        if self.num_modes < 2 {
            return Err(Error::invalid(format!("num_modes must be ≥ 2, got {}", self.num_modes)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        if !self.shift.is_finite() {
            return Err(Error::invalid("shift must be finite"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be ≥ 1"));
        }
        Ok(())
    }
}

/// An eigenpair with `M`-normalized vector over the retained nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖Kv - λMv‖ / ‖Mv‖`
    pub residual: f64,
}

impl EigenPair {
    fn new(problem: &DiscreteEigenproblem, value: f64, mut vector: Vec<f64>) -> Self {
        let mv = spmv(&problem.mass, &vector);
        let norm = dot(&vector, &mv).sqrt();
        // fix the sign by the largest entry so runs are comparable
        let pivot = vector.iter().copied().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
        let scale = pivot.signum() / norm;
        vector.iter_mut().for_each(|v| *v *= scale);
        let residual = residual(problem, value, &vector);
        Self { value, vector, residual }
    }
}

fn spmv(a: &CsrMatrix<f64>, x: &[f64]) -> Vec<f64> {
    a.row_iter()
        .map(|row| row.col_indices().iter().zip(row.values()).map(|(&j, v)| v * x[j]).sum())
        .collect()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn residual(problem: &DiscreteEigenproblem, value: f64, v: &[f64]) -> f64 {
    let kv = spmv(&problem.stiffness, v);
    let mv = spmv(&problem.mass, v);
    let r: Vec<f64> = kv.iter().zip(&mv).map(|(k, m)| k - value * m).collect();
    norm(&r) / norm(&mv)
}

pub fn assemble(params: &DeformationParams, config: &SolverConfig) -> Result<DiscreteEigenproblem> {
    config.validate()?;
    assembly::assemble_geometry(&Geometry::Deformed(*params), config.grid_n)
}

/// Undeformed half-lune triangle of opening `β` with the round metric.
pub fn assemble_half_lune(beta: f64, config: &SolverConfig) -> Result<DiscreteEigenproblem> {
    config.validate()?;
    assembly::assemble_geometry(&Geometry::HalfLune { beta }, config.grid_n)
}

/// Columns `q` made `M`-orthonormal in place by two passes of classical
/// Gram–Schmidt; returns `M q` for each column. Columns that collapse are
/// replaced by fresh random vectors.
fn m_orthonormalize(mass: &CsrMatrix<f64>, cols: &mut [Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut mq: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for c in 0..cols.len() {
        for attempt in 0..4 {
            let start_norm = norm(&cols[c]);
            for _ in 0..2 {
                let coeffs: Vec<f64> = mq.iter().map(|m| dot(m, &cols[c])).collect();
                for (k, h) in coeffs.into_iter().enumerate() {
                    let (done, rest) = cols.split_at_mut(c);
                    rest[0].iter_mut().zip(&done[k]).for_each(|(w, q)| *w -= h * q);
                }
            }
            let mw = spmv(mass, &cols[c]);
            let n = dot(&cols[c], &mw).max(0.0).sqrt();
            if n > 1e-10 * start_norm.max(f64::MIN_POSITIVE) && n.is_finite() || attempt == 3 {
                let inv = 1.0 / n;
                cols[c].iter_mut().for_each(|v| *v *= inv);
                mq.push(mw.into_iter().map(|v| v * inv).collect());
                break;
            }
            cols[c].iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        }
    }
    mq
}

/// The `m` smallest generalized eigenpairs in ascending order.
pub fn solve_smallest(problem: &DiscreteEigenproblem, m: usize, config: &SolverConfig) -> Result<Vec<EigenPair>> {
    config.validate()?;
    let dim = problem.dimension();
    if m == 0 || m > dim {
        return Err(Error::invalid(format!("requested {m} modes of {dim} degrees of freedom")));
    }
    let p = (2 * m).max(m + 8).min(dim);
    let bw = problem.dofs.half_bandwidth();
    let factor = BandedLdl::factor(&problem.stiffness, Some((config.shift, &problem.mass)), bw)
        .map_err(|e| Error::Assembly(format!("shifted operator with σ = {}: {e}", config.shift)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut x: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut best = f64::INFINITY;

    for iteration in 1..=config.max_iter {
        let mut y: Vec<Vec<f64>> = x
            .par_iter()
            .map(|col| {
                let mut v = spmv(&problem.mass, col);
                factor.solve_in_place(&mut v);
                v
            })
            .collect();
        let my = m_orthonormalize(&problem.mass, &mut y, &mut rng);
        let ky: Vec<Vec<f64>> = y.par_iter().map(|c| spmv(&problem.stiffness, c)).collect();

        let mut kr = DMatrix::zeros(p, p);
        for a in 0..p {
            for b in a..p {
                let v = 0.5 * (dot(&y[a], &ky[b]) + dot(&y[b], &ky[a]));
                kr[(a, b)] = v;
                kr[(b, a)] = v;
            }
        }
        let eig = kr.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let combine = |basis: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut out = vec![0.0; dim];
            for (k, b) in basis.iter().enumerate() {
                let q = eig.eigenvectors[(k, col)];
                out.iter_mut().zip(b).for_each(|(o, v)| *o += q * v);
            }
            out
        };
        let ritz: Vec<(f64, Vec<f64>, f64)> = order
            .par_iter()
            .map(|&col| {
                let v = combine(&y, col);
                let theta = eig.eigenvalues[col];
                let kv = combine(&ky, col);
                let mv = combine(&my, col);
                let r: Vec<f64> = kv.iter().zip(&mv).map(|(k, m)| k - theta * m).collect();
                (theta, v, norm(&r) / norm(&mv))
            })
            .collect();

        let worst = ritz[..m].iter().map(|r| r.2).fold(0.0, f64::max);
        best = best.min(worst);
        if worst < config.tol {
            if config.shift != 0.0 && p > m {
                certify_lowest(problem, &ritz, m, bw)?;
            }
            return Ok(ritz
                .into_iter()
                .take(m)
                .map(|(value, v, _)| EigenPair::new(problem, value, v))
                .collect());
        }
        if iteration == config.max_iter {
            break;
        }
        x = ritz.into_iter().map(|r| r.1).collect();
    }
    Err(Error::NonConvergence {
        iterations: config.max_iter,
        best_residual: best,
    })
}

/// With a nonzero shift the iteration finds the eigenvalues nearest `σ`;
/// Sylvester inertia between the `m`-th and `(m+1)`-th Ritz values confirms
/// that they are also the smallest.
fn certify_lowest(problem: &DiscreteEigenproblem, ritz: &[(f64, Vec<f64>, f64)], m: usize, bw: usize) -> Result<()> {
    let mu = 0.5 * (ritz[m - 1].0 + ritz[m].0);
    let below = BandedLdl::factor(&problem.stiffness, Some((mu, &problem.mass)), bw)?.negative_pivots();
    if below != m {
        return Err(Error::Convergence {
            what: "shifted iteration missed lower eigenvalues; count below the m-th Ritz value",
            achieved: below as f64,
        });
    }
    Ok(())
}

/// Assembles and solves for `config.num_modes` pairs of `T(t)`.
pub fn solve(params: &DeformationParams, config: &SolverConfig) -> Result<Vec<EigenPair>> {
    let problem = assemble(params, config)?;
    solve_smallest(&problem, config.num_modes, config)
}

/// `λ₂ - λ₁`, counting multiplicity.
pub fn numeric_gap(params: &DeformationParams, config: &SolverConfig) -> Result<f64> {
    let pairs = solve(params, config)?;
    Ok(pairs[1].value - pairs[0].value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSlope {
    pub t_values: Vec<f64>,
    pub gap_at_zero: f64,
    pub gaps: Vec<f64>,
    /// `(Γ(t) - Γ(0)) / t` for each `t`.
    pub quotients: Vec<f64>,
    /// Neville tableau of the quotients extrapolated to `t = 0`; column `c`
    /// uses `c + 1` consecutive points.
    pub tableau: Vec<Vec<f64>>,
    pub slope: f64,
    pub error_estimate: f64,
    pub warning: Option<String>,
}

/// Polynomial extrapolation to zero of `values` sampled at `points`.
pub fn neville_to_zero(points: &[f64], values: &[f64]) -> Vec<Vec<f64>> {
    let mut tableau = vec![values.to_vec()];
    for c in 1..points.len() {
        let prev = &tableau[c - 1];
        let next: Vec<f64> = (0..points.len() - c)
            .map(|i| {
                let (xi, xj) = (points[i], points[i + c]);
                (-xj * prev[i] + xi * prev[i + 1]) / (xi - xj)
            })
            .collect();
        tableau.push(next);
    }
    tableau
}

/// Slope of `Γ(t)` at `t = 0` along `direction` by Richardson extrapolation
/// of difference quotients.
pub fn gap_slope(direction: Direction, t_values: &[f64], config: &SolverConfig) -> Result<GapSlope> {
    config.validate()?;
    if t_values.len() < 2 {
        return Err(Error::invalid("gap slope needs at least two t values"));
    }
    if t_values.iter().any(|&t| !(t > 0.0)) || t_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("t values must be positive and strictly decreasing"));
    }
    let mut all = vec![0.0];
    all.extend_from_slice(t_values);
    let params = all
        .iter()
        .map(|&t| DeformationParams::new(direction, t))
        .collect::<Result<Vec<_>>>()?;
    let gaps = params
        .par_iter()
        .map(|p| numeric_gap(p, config))
        .collect::<Result<Vec<_>>>()?;
    let gap_at_zero = gaps[0];
    let gaps = gaps[1..].to_vec();
    let quotients: Vec<f64> = gaps.iter().zip(t_values).map(|(g, t)| (g - gap_at_zero) / t).collect();
    let tableau = neville_to_zero(t_values, &quotients);
    let last = tableau.len() - 1;
    let slope = tableau[last][0];
    let error_estimate = tableau[last - 1]
        .iter()
        .map(|v| (v - slope).abs())
        .fold(0.0, f64::max);

    let diffs: Vec<f64> = quotients.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = diffs.iter().all(|&d| d >= 0.0) || diffs.iter().all(|&d| d <= 0.0);
    let warning = if !monotone {
        Some("difference quotients are not monotone in t".to_string())
    } else if error_estimate > 0.05 * slope.abs() {
        Some(format!("extrapolation error estimate {error_estimate:.3e} exceeds 5% of the slope"))
    } else {
        None
    };
    Ok(GapSlope {
        t_values: t_values.to_vec(),
        gap_at_zero,
        gaps,
        quotients,
        tableau,
        slope,
        error_estimate,
        warning,
    })
}
