//! Bilinear finite elements for `-Δ_g u = λ u` on a coordinate rectangle
//! `[0, π/2] × [0, θ_max]`.
//!
//! The weak form only needs `√det g` and `g^{ij} √det g`, so no derivatives
//! of the metric are ever formed.

use std::f64::consts::FRAC_PI_2;

use nalgebra_sparse::CsrMatrix;
use rayon::prelude::*;

use super::banded::BandedLdl;
use crate::deformation::{CoordPoint, DeformationParams, Deformation};
use crate::error::{Error, Result};

/// 3-point Gauss rule on `[0, 1]`.
const GAUSS_3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

/// What is discretized on the coordinate rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// The equilateral triangle with the pullback metric `g_t`.
    Deformed(DeformationParams),
    /// The undeformed half-lune triangle `[0, π/2] × [0, β]` with the round metric.
    HalfLune { beta: f64 },
}

impl Geometry {
    pub fn theta_max(&self) -> f64 {
        match self {
            Self::Deformed(_) => FRAC_PI_2,
            Self::HalfLune { beta } => *beta,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Self::HalfLune { beta } = self {
            if !(*beta > 0.0 && *beta < 2.0 * std::f64::consts::PI) {
                return Err(Error::Domain {
                    what: "β",
                    value: *beta,
                    domain: "(0, 2π)",
                });
            }
        }
        Ok(())
    }

    fn sampler(&self) -> Box<dyn Fn(f64, f64) -> (f64, [f64; 3]) + Sync + '_> {
        match self {
            Self::Deformed(p) => {
                let d = Deformation::new(*p);
                Box::new(move |r, theta| d.weak_form_coefficients(CoordPoint { r, theta }))
            }
            Self::HalfLune { .. } => Box::new(|r, _| {
                let s = r.sin();
                (s, [s, 0.0, 1.0 / s])
            }),
        }
    }
}

/// Uniform `n × n` node grid with Dirichlet nodes on `θ = 0`, `θ = θ_max` and
/// `r = π/2` removed. Retained nodes are numbered `i`-major, so the matrices
/// have half-bandwidth `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DofMap {
    grid_n: usize,
    h_r: f64,
    h_theta: f64,
}

impl DofMap {
    pub fn new(grid_n: usize, theta_max: f64) -> Self {
        let cells = (grid_n - 1) as f64;
        Self {
            grid_n,
            h_r: FRAC_PI_2 / cells,
            h_theta: theta_max / cells,
        }
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.h_r, self.h_theta)
    }

    pub fn len(&self) -> usize {
        (self.grid_n - 1) * (self.grid_n - 2)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Degree of freedom of node `(i, j)`, or `None` on a Dirichlet edge.
    pub fn dof(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.grid_n;
        if i >= n - 1 || j == 0 || j >= n - 1 {
            return None;
        }
        Some(i * (n - 2) + j - 1)
    }

    pub fn node(&self, dof: usize) -> (usize, usize) {
        let w = self.grid_n - 2;
        (dof / w, dof % w + 1)
    }

    /// `(r, θ)` of a degree of freedom.
    pub fn coords(&self, dof: usize) -> (f64, f64) {
        let (i, j) = self.node(dof);
        (i as f64 * self.h_r, j as f64 * self.h_theta)
    }

    pub fn half_bandwidth(&self) -> usize {
        self.grid_n - 1
    }
}

/// Element matrices of cell `(i, j)` with local node order
/// `(i, j), (i+1, j), (i, j+1), (i+1, j+1)`.
pub type ElementMatrices = ([[f64; 4]; 4], [[f64; 4]; 4]);

fn element(
    coeffs: &(dyn Fn(f64, f64) -> (f64, [f64; 3]) + Sync),
    dofs: &DofMap,
    i: usize,
    j: usize,
) -> ElementMatrices {
    let (hr, ht) = dofs.spacing();
    let r0 = i as f64 * hr;
    let t0 = j as f64 * ht;
    let mut ke = [[0.0; 4]; 4];
    let mut me = [[0.0; 4]; 4];
    for &(xi, wx) in &GAUSS_3 {
        for &(eta, wy) in &GAUSS_3 {
            let w = wx * wy * hr * ht;
            let (sq, [arr, art, att]) = coeffs(r0 + xi * hr, t0 + eta * ht);
            let shape = [(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta];
            let dr = [-(1.0 - eta) / hr, (1.0 - eta) / hr, -eta / hr, eta / hr];
            let dt = [-(1.0 - xi) / ht, -xi / ht, (1.0 - xi) / ht, xi / ht];
            for a in 0..4 {
                for b in a..4 {
                    let k = arr * dr[a] * dr[b] + art * (dr[a] * dt[b] + dt[a] * dr[b]) + att * dt[a] * dt[b];
                    ke[a][b] += w * k;
                    me[a][b] += w * sq * shape[a] * shape[b];
                }
            }
        }
    }
    // mirror so that symmetry is exact
    for a in 0..4 {
        for b in 0..a {
            ke[a][b] = ke[b][a];
            me[a][b] = me[b][a];
        }
    }
    (ke, me)
}

/// Element matrices of one cell, exposed for independent checks.
pub fn element_matrices(geometry: &Geometry, grid_n: usize, i: usize, j: usize) -> Result<ElementMatrices> {
    geometry.validate()?;
    if grid_n < 3 || i + 1 >= grid_n || j + 1 >= grid_n {
        return Err(Error::invalid(format!("cell ({i}, {j}) outside a grid with {grid_n} nodes")));
    }
    let dofs = DofMap::new(grid_n, geometry.theta_max());
    let sampler = geometry.sampler();
    Ok(element(&*sampler, &dofs, i, j))
}

/// Stiffness `∫ g^{ij} ∂_iφ_a ∂_jφ_b √det g`, mass `∫ φ_a φ_b √det g`, and the
/// map from retained nodes to matrix rows.
#[derive(Debug, Clone)]
pub struct DiscreteEigenproblem {
    pub stiffness: CsrMatrix<f64>,
    pub mass: CsrMatrix<f64>,
    pub dofs: DofMap,
}

impl DiscreteEigenproblem {
    pub fn dimension(&self) -> usize {
        self.dofs.len()
    }

    /// `(max|K - Kᵀ|, max|M - Mᵀ|)`.
    pub fn asymmetry(&self) -> (f64, f64) {
        (max_asymmetry(&self.stiffness), max_asymmetry(&self.mass))
    }
}

fn max_asymmetry(a: &CsrMatrix<f64>) -> f64 {
    let t = a.transpose();
    a.triplet_iter()
        .zip(t.triplet_iter())
        .map(|((i, j, x), (ti, tj, y))| {
            debug_assert_eq!((i, j), (ti, tj));
            (x - y).abs()
        })
        .fold(0.0, f64::max)
}

/// 9-point stencil pattern: for each row, the sorted column indices.
fn stencil_pattern(dofs: &DofMap) -> (Vec<usize>, Vec<usize>) {
    let n = dofs.grid_n();
    let mut offsets = Vec::with_capacity(dofs.len() + 1);
    let mut indices = Vec::with_capacity(9 * dofs.len());
    offsets.push(0);
    for row in 0..dofs.len() {
        let (i, j) = dofs.node(row);
        for di in [-1i64, 0, 1] {
            for dj in [-1i64, 0, 1] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                    continue;
                }
                if let Some(col) = dofs.dof(ni as usize, nj as usize) {
                    indices.push(col);
                }
            }
        }
        offsets.push(indices.len());
    }
    (offsets, indices)
}

pub(crate) fn assemble_geometry(geometry: &Geometry, grid_n: usize) -> Result<DiscreteEigenproblem> {
    geometry.validate()?;
    let dofs = DofMap::new(grid_n, geometry.theta_max());
    let sampler = geometry.sampler();
    let cells = grid_n - 1;

    let elements: Vec<ElementMatrices> = (0..cells * cells)
        .into_par_iter()
        .map(|c| element(&*sampler, &dofs, c / cells, c % cells))
        .collect();

    let (offsets, indices) = stencil_pattern(&dofs);
    let mut k_vals = vec![0.0; indices.len()];
    let mut m_vals = vec![0.0; indices.len()];
    // sequential scatter in cell order keeps the result bitwise reproducible
    for (c, (ke, me)) in elements.iter().enumerate() {
        let (i, j) = (c / cells, c % cells);
        let local = [dofs.dof(i, j), dofs.dof(i + 1, j), dofs.dof(i, j + 1), dofs.dof(i + 1, j + 1)];
        for (a, row) in local.iter().enumerate() {
            let Some(row) = *row else { continue };
            let cols = &indices[offsets[row]..offsets[row + 1]];
            for (b, col) in local.iter().enumerate() {
                let Some(col) = *col else { continue };
                let pos = offsets[row] + cols.binary_search(&col).expect("stencil covers element");
                k_vals[pos] += ke[a][b];
                m_vals[pos] += me[a][b];
            }
        }
    }

    let dim = dofs.len();
    let build = |vals: Vec<f64>| {
        CsrMatrix::try_from_csr_data(dim, dim, offsets.clone(), indices.clone(), vals)
            .map_err(|e| Error::Assembly(e.to_string()))
    };
    let problem = DiscreteEigenproblem {
        stiffness: build(k_vals)?,
        mass: build(m_vals)?,
        dofs,
    };
    let pivot = BandedLdl::factor(&problem.mass, None, problem.dofs.half_bandwidth())
        .map(|f| f.min_pivot())
        .unwrap_or(f64::NAN);
    if !(pivot > 0.0) {
        return Err(Error::Assembly(format!(
            "mass matrix is not positive definite (smallest pivot {pivot})"
        )));
    }
    Ok(problem)
}
