//! Discrete minimum principle for the Jacobian on index sub-rectangles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::grid::RealField;

/// Inclusive index rectangle `[i0, i1] × [j0, j1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubRect {
    pub i0: usize,
    pub j0: usize,
    pub i1: usize,
    pub j1: usize,
}

impl SubRect {
    pub fn new(i0: usize, j0: usize, i1: usize, j1: usize) -> Self {
        Self { i0, j0, i1, j1 }
    }

    pub fn on_boundary(&self, i: usize, j: usize) -> bool {
        i == self.i0 || i == self.i1 || j == self.j0 || j == self.j1
    }

    pub fn node_count(&self) -> usize {
        (self.i1 - self.i0 + 1) * (self.j1 - self.j0 + 1)
    }

    fn as_array(&self) -> [usize; 4] {
        [self.i0, self.j0, self.i1, self.j1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPrinciple {
    pub rect: SubRect,
    pub interior_min: f64,
    pub interior_at: (usize, usize),
    pub boundary_min: f64,
    pub boundary_at: (usize, usize),
    pub slack: f64,
    pub passed: bool,
}

impl MinPrinciple {
    /// The violation `max(0, boundary_min − interior_min)` as an L∞ residual against `slack`.
    pub fn report(&self, spacing: f64) -> IdentityReport {
        let v = (self.boundary_min - self.interior_min).max(0.0);
        let interior = (self.rect.i1 - self.rect.i0 - 1) * (self.rect.j1 - self.rect.j0 - 1);
        IdentityReport {
            name: "minprin".into(),
            linf: v,
            l2: v * spacing,
            evaluated_nodes: interior,
            excluded_nodes: 0,
            spacing,
            passed: self.passed,
            tolerance_used: self.slack,
            empty: false,
        }
    }
}

/// Checks `min over the strict interior ≥ min over the rectangle boundary − slack`.
pub fn minimum_principle_check(j: &RealField, rect: SubRect, slack: f64) -> Result<MinPrinciple> {
    let g = j.grid();
    if rect.i1 >= g.nx || rect.j1 >= g.ny || rect.i1 < rect.i0 + 2 || rect.j1 < rect.j0 + 2 {
        return Err(Error::SubrectOutOfRange(rect.as_array()));
    }
    let mut interior = (f64::INFINITY, (0, 0));
    let mut boundary = (f64::INFINITY, (0, 0));
    let mut nonpositive = Vec::new();
    for jj in rect.j0..=rect.j1 {
        for i in rect.i0..=rect.i1 {
            let v = j
                .get(i, jj)
                .ok_or(Error::SubrectOutOfRange(rect.as_array()))?;
            if v <= 0.0 {
                nonpositive.push((i, jj));
            }
            let slot = if rect.on_boundary(i, jj) {
                &mut boundary
            } else {
                &mut interior
            };
            if v < slot.0 {
                *slot = (v, (i, jj));
            }
        }
    }
    if !nonpositive.is_empty() {
        return Err(Error::NotSensePreserving { nodes: nonpositive });
    }
    Ok(MinPrinciple {
        rect,
        interior_min: interior.0,
        interior_at: interior.1,
        boundary_min: boundary.0,
        boundary_at: boundary.1,
        slack,
        passed: interior.0 >= boundary.0 - slack,
    })
}

/// `count` seeded rectangles inside the bounding box of the valid nodes of `j`.
pub fn random_subrects(j: &RealField, count: usize, seed: u64) -> Result<Vec<SubRect>> {
    let mut lo = (usize::MAX, usize::MAX);
    let mut hi = (0, 0);
    for (i, jj, _) in j.iter_valid() {
        lo = (lo.0.min(i), lo.1.min(jj));
        hi = (hi.0.max(i), hi.1.max(jj));
    }
    if lo.0 == usize::MAX || hi.0 < lo.0 + 2 || hi.1 < lo.1 + 2 {
        return Err(Error::EmptyInterior);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |a: usize, b: usize| {
        let w = rng.gen_range(2..=b - a);
        let start = rng.gen_range(a..=b - w);
        (start, start + w)
    };
    Ok((0..count)
        .map(|_| {
            let (i0, i1) = pick(lo.0, hi.0);
            let (j0, j1) = pick(lo.1, hi.1);
            SubRect::new(i0, j0, i1, j1)
        })
        .collect())
}
