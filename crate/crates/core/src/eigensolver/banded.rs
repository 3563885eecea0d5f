//! Banded `LDLᵀ` factorization for symmetric, possibly indefinite matrices
//! that need no pivoting (shifts away from the spectrum).

use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};

/// Pivots smaller than this relative to the largest diagonal entry are
/// treated as singular.
const PIVOT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct BandedLdl {
    n: usize,
    bw: usize,
    /// Row `i` holds `L[i][i-bw..i]` followed by the diagonal slot, which
    /// stores `D[i]`.
    band: Vec<f64>,
}

impl BandedLdl {
    /// Factors `a - σ b` where `shifted = Some((σ, b))`, else `a`.
    pub fn factor(a: &CsrMatrix<f64>, shifted: Option<(f64, &CsrMatrix<f64>)>, bw: usize) -> Result<Self> {
        let n = a.nrows();
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        let mut load = |m: &CsrMatrix<f64>, scale: f64| -> Result<()> {
            for (i, j, &v) in m.triplet_iter() {
                if j > i {
                    continue;
                }
                if i - j > bw {
                    return Err(Error::Assembly(format!("entry ({i}, {j}) outside bandwidth {bw}")));
                }
                band[i * w + (j + bw - i)] += scale * v;
            }
            Ok(())
        };
        load(a, 1.0)?;
        if let Some((sigma, b)) = shifted {
            if sigma != 0.0 {
                load(b, -sigma)?;
            }
        }

        let scale = (0..n).map(|i| band[i * w + bw].abs()).fold(0.0, f64::max);
        let mut scaled_row = vec![0.0; w];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row_start = i * w + (lo + bw - i);
            let len = i - lo;
            for (jj, j) in (lo..i).enumerate() {
                // L[i][j] = (A[i][j] - Σ_k L[i][k] D[k] L[j][k]) / D[j], k ∈ [lo, j)
                let lj = &band[j * w + (lo + bw - j)..j * w + bw];
                let dot: f64 = scaled_row[..jj].iter().zip(lj).map(|(x, y)| x * y).sum();
                let d_j = band[j * w + bw];
                let lij = (band[row_start + jj] - dot) / d_j;
                band[row_start + jj] = lij;
                scaled_row[jj] = lij * d_j;
            }
            let dot: f64 = band[row_start..row_start + len]
                .iter()
                .zip(&scaled_row[..len])
                .map(|(l, s)| l * s)
                .sum();
            let d = band[i * w + bw] - dot;
            if !d.is_finite() || d.abs() <= PIVOT_FLOOR * scale {
                return Err(Error::Assembly(format!("singular pivot {d} at row {i}")));
            }
            band[i * w + bw] = d;
        }
        Ok(Self { n, bw, band })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn min_pivot(&self) -> f64 {
        let w = self.bw + 1;
        (0..self.n).map(|i| self.band[i * w + self.bw]).fold(f64::INFINITY, f64::min)
    }

    /// Number of negative pivots, which by Sylvester's law of inertia counts
    /// the eigenvalues below the shift.
    pub fn negative_pivots(&self) -> usize {
        let w = self.bw + 1;
        (0..self.n).filter(|&i| self.band[i * w + self.bw] < 0.0).count()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        assert_eq!(x.len(), n);
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.band[i * w + (lo + bw - i)..i * w + bw];
            let dot: f64 = row.iter().zip(&x[lo..i]).map(|(l, v)| l * v).sum();
            x[i] -= dot;
        }
        for i in 0..n {
            x[i] /= self.band[i * w + bw];
        }
        for i in (0..n).rev() {
            let lo = i.saturating_sub(bw);
            let xi = x[i];
            let row = &self.band[i * w + (lo + bw - i)..i * w + bw];
            for (v, l) in x[lo..i].iter_mut().zip(row) {
                *v -= l * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use nalgebra_sparse::CooMatrix;

    fn banded_matrix(n: usize, bw: usize, shift: f64) -> (CsrMatrix<f64>, DMatrix<f64>) {
        let mut dense = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let v = if i == j {
                    4.0 + (i % 3) as f64 - shift
                } else {
                    1.0 / (1.0 + (i + 2 * j) as f64 % 5.0)
                };
                dense[(i, j)] = v;
                dense[(j, i)] = v;
            }
        }
        let mut coo = CooMatrix::new(n, n);
        for i in 0..n {
            for j in 0..n {
                if dense[(i, j)] != 0.0 {
                    coo.push(i, j, dense[(i, j)]);
                }
            }
        }
        (CsrMatrix::from(&coo), dense)
    }

    #[test]
    fn solves_against_dense_lu() {
        for shift in [0.0, 4.5] {
            let (a, dense) = banded_matrix(40, 3, shift);
            let f = BandedLdl::factor(&a, None, 3).unwrap();
            let rhs: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
            let mut x = rhs.clone();
            f.solve_in_place(&mut x);
            let expected = dense.lu().solve(&nalgebra::DVector::from_vec(rhs)).unwrap();
            for (u, v) in x.iter().zip(expected.iter()) {
                assert!((u - v).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        let (a, dense) = banded_matrix(30, 2, 0.0);
        let eig = dense.symmetric_eigenvalues();
        let sigma = 4.2;
        let id = CsrMatrix::identity(30);
        let f = BandedLdl::factor(&a, Some((sigma, &id)), 2).unwrap();
        let below = eig.iter().filter(|&&e| e < sigma).count();
        assert_eq!(f.negative_pivots(), below);
    }

    #[test]
    fn rejects_entries_outside_band() {
        let (a, _) = banded_matrix(10, 3, 0.0);
        assert!(BandedLdl::factor(&a, None, 2).is_err());
    }
}
