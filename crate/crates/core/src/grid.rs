//! Uniform square grids and masked fields sampled on them.
//!
//! Node `(i, j)` sits at `(x0 + i*s, y0 + j*s)`. Values are stored row by row:
//! the flat index of `(i, j)` is `j * nx + i`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible node count per axis.
pub const MIN_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub nx: usize,
    pub ny: usize,
    pub s: f64,
}

impl Grid {
    pub fn new(x0: f64, y0: f64, nx: usize, ny: usize, s: f64) -> Result<Self> {
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes per axis, got {nx}x{ny}"
            )));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {s}"
            )));
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { x0, y0, nx, ny, s })
    }

    /// Grid covering `[x0, x0 + width] x [y0, y0 + width*(ny-1)/(nx-1)]` with `nx` nodes per side.
    pub fn square(x0: f64, y0: f64, width: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid("need at least 2 nodes".into()));
        }
        Self::new(x0, y0, n, n, width / (n - 1) as f64)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn ij(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.s
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.s
    }

    #[inline]
    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    /// Nodes at least `margin` steps from every edge.
    pub fn inset_mask(&self, margin: usize) -> Vec<bool> {
        (0..self.len())
            .map(|k| {
                let (i, j) = self.ij(k);
                i >= margin && j >= margin && i + margin < self.nx && j + margin < self.ny
            })
            .collect()
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Same region with half the spacing.
    pub fn refined(&self) -> Grid {
        Grid {
            nx: 2 * (self.nx - 1) + 1,
            ny: 2 * (self.ny - 1) + 1,
            s: self.s / 2.0,
            ..*self
        }
    }

    /// Neighbor index at offset `(di, dj)`, if it lies on the grid.
    #[inline]
    pub fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<usize> {
        let ii = i as isize + di;
        let jj = j as isize + dj;
        if ii < 0 || jj < 0 || ii >= self.nx as isize || jj >= self.ny as isize {
            None
        } else {
            Some(self.idx(ii as usize, jj as usize))
        }
    }
}

/// Values a [`Field`] can hold.
pub trait Scalar:
    Copy
    + Default
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
    + std::fmt::Debug
    + 'static
{
    fn is_finite(self) -> bool;
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Grid-sampled values with a per-node validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid,
    values: Vec<T>,
    mask: Vec<bool>,
}

pub type ComplexField = Field<Complex64>;
pub type RealField = Field<f64>;

impl<T: Scalar> Field<T> {
    pub fn from_parts(grid: Grid, values: Vec<T>, mask: Vec<bool>) -> Result<Self> {
        if values.len() != grid.len() || mask.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "grid has {} nodes, got {} values and {} mask entries",
                grid.len(),
                values.len(),
                mask.len()
            )));
        }
        for (k, (v, &m)) in values.iter().zip(&mask).enumerate() {
            if m && !v.is_finite() {
                let (i, j) = grid.ij(k);
                return Err(Error::NonFinite { i, j });
            }
        }
        Ok(Self { grid, values, mask })
    }

    /// Fully valid field from a function of node index and position.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize, usize, Complex64) -> T) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(f(i, j, grid.z(i, j)));
            }
        }
        let mask = values.iter().map(|v| v.is_finite()).collect();
        Self { grid, values, mask }
    }

    pub fn constant(grid: Grid, value: T) -> Self {
        Self::from_fn(grid, |_, _, _| value)
    }

    /// Field whose valid nodes are those where `f` returns `Some` finite value.
    pub(crate) fn from_partial(grid: Grid, f: impl Fn(usize) -> Option<T>) -> Self {
        let mut values = vec![T::default(); grid.len()];
        let mut mask = vec![false; grid.len()];
        for k in 0..grid.len() {
            if let Some(v) = f(k) {
                if v.is_finite() {
                    values[k] = v;
                    mask[k] = true;
                }
            }
        }
        Self { grid, values, mask }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.mask[self.grid.idx(i, j)]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        let k = self.grid.idx(i, j);
        self.mask[k].then(|| self.values[k])
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_fully_valid(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }

    /// `(i, j, value)` for every valid node, row by row.
    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(k, _)| {
                let (i, j) = self.grid.ij(k);
                (i, j, self.values[k])
            })
    }

    /// Pointwise map over valid nodes; results that are `None` or non-finite become masked.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Field<U> {
        self.map_checked(|v| Some(f(v)))
    }

    pub fn map_checked<U: Scalar>(&self, f: impl Fn(T) -> Option<U>) -> Field<U> {
        Field::from_partial(self.grid, |k| {
            if self.mask[k] {
                f(self.values[k])
            } else {
                None
            }
        })
    }

    /// Pointwise combination on the intersection of both masks.
    pub fn zip_map<U: Scalar, V: Scalar>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V,
    ) -> Field<V> {
        debug_assert_eq!(self.grid, other.grid);
        Field::from_partial(self.grid, |k| {
            (self.mask[k] && other.mask[k]).then(|| f(self.values[k], other.values[k]))
        })
    }

    /// Pointwise combination of three fields on the intersection of their masks.
    pub fn zip3_map<U: Scalar, W: Scalar, V: Scalar>(
        &self,
        b: &Field<U>,
        c: &Field<W>,
        f: impl Fn(T, U, W) -> V,
    ) -> Field<V> {
        debug_assert_eq!(self.grid, b.grid);
        debug_assert_eq!(self.grid, c.grid);
        Field::from_partial(self.grid, |k| {
            (self.mask[k] && b.mask[k] && c.mask[k])
                .then(|| f(self.values[k], b.values[k], c.values[k]))
        })
    }

    /// Copy with the mask replaced by `self.mask && keep`.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let mask = self.mask.iter().zip(keep).map(|(&a, &b)| a && b).collect();
        Self {
            grid: self.grid,
            values: self.values.clone(),
            mask,
        }
    }

    /// Largest modulus over valid nodes (0 when nothing is valid).
    pub fn max_modulus(&self) -> f64 {
        self.iter_valid()
            .map(|(_, _, v)| v.modulus())
            .fold(0.0, f64::max)
    }
}

impl RealField {
    pub fn max_value(&self) -> Option<f64> {
        self.iter_valid().map(|(_, _, v)| v).reduce(f64::max)
    }

    pub fn min_value(&self) -> Option<f64> {
        self.iter_valid().map(|(_, _, v)| v).reduce(f64::min)
    }
}

impl ComplexField {
    pub fn re(&self) -> RealField {
        self.map(|v| v.re)
    }

    pub fn norm_sqr(&self) -> RealField {
        self.map(|v| v.norm_sqr())
    }

    pub fn abs(&self) -> RealField {
        self.map(|v| v.norm())
    }
}

/// Largest pointwise difference on the shared valid nodes, and how many nodes were compared.
pub fn max_abs_diff<T: Scalar>(a: &Field<T>, b: &Field<T>) -> (f64, usize) {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for k in 0..a.grid.len() {
        if a.mask[k] && b.mask[k] {
            worst = worst.max((a.values[k] - b.values[k]).modulus());
            count += 1;
        }
    }
    (worst, count)
}

/// Mask erosion with the 5-point (plus-shaped) footprint.
pub fn erode_plus(grid: &Grid, mask: &[bool]) -> Vec<bool> {
    let mut out = vec![false; grid.len()];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let k = grid.idx(i, j);
            out[k] = mask[k]
                && [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .all(|&(di, dj)| grid.offset(i, j, di, dj).is_some_and(|n| mask[n]));
        }
    }
    out
}

pub fn and_masks(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| x && y).collect()
}
