//! Exact solve of the 5-point Dirichlet Poisson problem by a 2D discrete sine transform.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

/// Type-I DST of length `n`, computed through an FFT of the odd extension.
struct Dst1 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dst1 {
    fn new(n: usize, planner: &mut FftPlanner<f64>) -> Self {
        Self {
            n,
            fft: planner.plan_fft_forward(2 * (n + 1)),
        }
    }

    /// In place: `x_k <- sum_m x_m sin(pi (m+1)(k+1) / (n+1))`.
    fn apply(&self, x: &mut [Complex64], buf: &mut [Complex64]) {
        let n = self.n;
        let m = 2 * (n + 1);
        buf[0] = Complex64::new(0.0, 0.0);
        buf[n + 1] = Complex64::new(0.0, 0.0);
        for (k, &v) in x.iter().enumerate() {
            buf[k + 1] = v;
            buf[m - k - 1] = -v;
        }
        self.fft.process(buf);
        for (k, out) in x.iter_mut().enumerate() {
            *out = buf[k + 1] * Complex64::new(0.0, 0.5);
        }
    }
}

/// Reusable solver for `Δ_h u = f` on the interior of a fixed grid.
pub struct PoissonSolver {
    grid: Grid,
    nxi: usize,
    nyi: usize,
    dst_x: Dst1,
    dst_y: Dst1,
    /// Eigenvalues of the unscaled 5-point operator, row-major over (ky, kx).
    eig: Vec<f64>,
}

impl PoissonSolver {
    pub fn new(grid: Grid) -> Self {
        let (nxi, nyi) = (grid.nx - 2, grid.ny - 2);
        let mut planner = FftPlanner::new();
        let dst_x = Dst1::new(nxi, &mut planner);
        let dst_y = Dst1::new(nyi, &mut planner);
        let lam = |k: usize, n: usize| {
            let t = (std::f64::consts::PI * (k + 1) as f64 / (2.0 * (n + 1) as f64)).sin();
            -4.0 * t * t
        };
        let mut eig = Vec::with_capacity(nxi * nyi);
        for ky in 0..nyi {
            for kx in 0..nxi {
                eig.push(lam(kx, nxi) + lam(ky, nyi));
            }
        }
        Self {
            grid,
            nxi,
            nyi,
            dst_x,
            dst_y,
            eig,
        }
    }

    fn transform(&self, data: &mut [Complex64]) {
        let (nxi, nyi) = (self.nxi, self.nyi);
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * (nxi.max(nyi) + 1)];
        for row in data.chunks_mut(nxi) {
            self.dst_x.apply(row, &mut buf[..2 * (nxi + 1)]);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); nyi];
        for kx in 0..nxi {
            for (ky, c) in col.iter_mut().enumerate() {
                *c = data[ky * nxi + kx];
            }
            self.dst_y.apply(&mut col, &mut buf[..2 * (nyi + 1)]);
            for (ky, c) in col.iter().enumerate() {
                data[ky * nxi + kx] = *c;
            }
        }
    }

    /// Returns the full-grid solution `u` with `u = boundary` on the edge nodes and
    /// `Δ_h u = rhs` at interior nodes. Both slices are full-grid, row-major.
    pub fn solve(&self, boundary: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
        let g = &self.grid;
        let s2 = g.s * g.s;
        let (nxi, nyi) = (self.nxi, self.nyi);
        let mut data = vec![Complex64::new(0.0, 0.0); nxi * nyi];
        for jj in 0..nyi {
            for ii in 0..nxi {
                let (i, j) = (ii + 1, jj + 1);
                let mut b = rhs[g.idx(i, j)] * s2;
                if i == 1 {
                    b -= boundary[g.idx(0, j)];
                }
                if i == g.nx - 2 {
                    b -= boundary[g.idx(g.nx - 1, j)];
                }
                if j == 1 {
                    b -= boundary[g.idx(i, 0)];
                }
                if j == g.ny - 2 {
                    b -= boundary[g.idx(i, g.ny - 1)];
                }
                data[jj * nxi + ii] = b;
            }
        }
        self.transform(&mut data);
        let norm = 4.0 / ((nxi + 1) * (nyi + 1)) as f64;
        for (v, &l) in data.iter_mut().zip(&self.eig) {
            *v *= norm / l;
        }
        self.transform(&mut data);
        let mut out = boundary.to_vec();
        for jj in 0..nyi {
            for ii in 0..nxi {
                out[g.idx(ii + 1, jj + 1)] = data[jj * nxi + ii];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_discrete_solution_of_manufactured_problem() {
        let g = Grid::new(-0.3, 0.2, 13, 9, 0.1).unwrap();
        // Any grid function u solves Δ_h u = (Δ_h u); pick a rough one.
        let u: Vec<Complex64> = (0..g.len())
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64).sqrt()))
            .collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); g.len()];
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let c = u[g.idx(i, j)];
                rhs[g.idx(i, j)] = (u[g.idx(i + 1, j)]
                    + u[g.idx(i - 1, j)]
                    + u[g.idx(i, j + 1)]
                    + u[g.idx(i, j - 1)]
                    - c * 4.0)
                    / (g.s * g.s);
            }
        }
        let mut boundary = u.clone();
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                boundary[g.idx(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
        let got = PoissonSolver::new(g).solve(&boundary, &rhs);
        let err = got
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err:e}");
    }
}
