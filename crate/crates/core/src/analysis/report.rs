use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grid::{Grid, RealField};
use crate::hmfield::fmt17;

/// Residual tolerance `abs + per_s * s + per_s2 * s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub per_s: f64,
    pub per_s2: f64,
}

impl Tolerance {
    pub const fn absolute(abs: f64) -> Self {
        Self {
            abs,
            per_s: 0.0,
            per_s2: 0.0,
        }
    }

    pub const fn new(abs: f64, per_s: f64, per_s2: f64) -> Self {
        Self { abs, per_s, per_s2 }
    }

    pub fn at(&self, s: f64) -> f64 {
        self.abs + self.per_s * s + self.per_s2 * s * s
    }

    /// Adds a fixed allowance, e.g. for solver tolerance.
    pub fn plus(self, extra: f64) -> Self {
        Self {
            abs: self.abs + extra,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub linf: f64,
    pub l2: f64,
    pub evaluated_nodes: usize,
    pub excluded_nodes: usize,
    pub spacing: f64,
    pub passed: bool,
    pub tolerance_used: f64,
    /// No node survived the degeneracy tests; `passed` is false and the norms are zero.
    pub empty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    /// Outside the stencil-valid interior of the check.
    Outside,
    /// Interior, but dropped by a degeneracy or positivity test.
    Excluded,
    Evaluated,
}

/// Per-node left/right sides of a checked identity.
#[derive(Debug, Clone)]
pub struct Residuals {
    pub name: String,
    pub grid: Grid,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual: Vec<f64>,
    pub status: Vec<NodeStatus>,
}

impl Residuals {
    pub(crate) fn new(name: impl Into<String>, grid: Grid) -> Self {
        let n = grid.len();
        Self {
            name: name.into(),
            grid,
            lhs: vec![0.0; n],
            rhs: vec![0.0; n],
            residual: vec![0.0; n],
            status: vec![NodeStatus::Outside; n],
        }
    }

    pub(crate) fn mark_interior(&mut self, interior: &[bool]) {
        for (st, &m) in self.status.iter_mut().zip(interior) {
            if m {
                *st = NodeStatus::Excluded;
            }
        }
    }

    /// Records an evaluated node with residual `|lhs - rhs|`.
    pub(crate) fn set(&mut self, k: usize, lhs: f64, rhs: f64) {
        self.set_with(k, lhs, rhs, (lhs - rhs).abs());
    }

    pub(crate) fn set_with(&mut self, k: usize, lhs: f64, rhs: f64, residual: f64) {
        debug_assert_ne!(
            self.status[k],
            NodeStatus::Outside,
            "node {k} outside interior"
        );
        self.lhs[k] = lhs;
        self.rhs[k] = rhs;
        self.residual[k] = residual;
        self.status[k] = NodeStatus::Evaluated;
    }

    pub fn count(&self, which: NodeStatus) -> usize {
        self.status.iter().filter(|&&s| s == which).count()
    }

    pub fn evaluated(&self) -> impl Iterator<Item = usize> + '_ {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == NodeStatus::Evaluated)
            .map(|(k, _)| k)
    }

    pub fn linf(&self) -> f64 {
        self.evaluated()
            .map(|k| self.residual[k])
            .fold(0.0, f64::max)
    }

    /// Grid L2 norm `sqrt(s^2 Σ r^2)`.
    pub fn l2(&self) -> f64 {
        let sum: f64 = self.evaluated().map(|k| self.residual[k].powi(2)).sum();
        (sum * self.grid.s * self.grid.s).sqrt()
    }

    pub fn excluded_fraction(&self) -> f64 {
        let ex = self.count(NodeStatus::Excluded) as f64;
        let total = ex + self.count(NodeStatus::Evaluated) as f64;
        if total == 0.0 {
            0.0
        } else {
            ex / total
        }
    }

    pub fn report(&self, tol: &Tolerance) -> IdentityReport {
        let evaluated = self.count(NodeStatus::Evaluated);
        let tolerance_used = tol.at(self.grid.s);
        let linf = self.linf();
        IdentityReport {
            name: self.name.clone(),
            linf,
            l2: self.l2(),
            evaluated_nodes: evaluated,
            excluded_nodes: self.count(NodeStatus::Excluded),
            spacing: self.grid.s,
            passed: evaluated > 0 && linf <= tolerance_used,
            tolerance_used,
            empty: evaluated == 0,
        }
    }

    pub fn residual_field(&self) -> RealField {
        RealField::from_partial(self.grid, |k| {
            (self.status[k] == NodeStatus::Evaluated).then(|| self.residual[k])
        })
    }

    pub fn lhs_field(&self) -> RealField {
        RealField::from_partial(self.grid, |k| {
            (self.status[k] == NodeStatus::Evaluated).then(|| self.lhs[k])
        })
    }

    /// `i,j,x,y,lhs,rhs,residual,excluded` for every interior node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,x,y,lhs,rhs,residual,excluded\n");
        for (k, st) in self.status.iter().enumerate() {
            if *st == NodeStatus::Outside {
                continue;
            }
            let (i, j) = self.grid.ij(k);
            let excluded = *st == NodeStatus::Excluded;
            let _ = writeln!(
                out,
                "{i},{j},{},{},{},{},{},{}",
                fmt17(self.grid.x(i)),
                fmt17(self.grid.y(j)),
                fmt17(self.lhs[k]),
                fmt17(self.rhs[k]),
                fmt17(self.residual[k]),
                u8::from(excluded)
            );
        }
        out
    }
}
