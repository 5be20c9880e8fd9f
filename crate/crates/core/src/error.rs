use num_complex::Complex64;
use thiserror::Error;

use crate::solver::HarmonicSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value at valid node ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("empty interior: no node survives the stencil mask")]
    EmptyInterior,

    #[error("field not positive: every node falls below the positivity floor")]
    FieldNotPositive,

    #[error("input field must be fully valid for {0}")]
    MaskedInput(&'static str),

    #[error("{metric} metric evaluated outside its domain at w = {w}{}", node_suffix(*.node))]
    DomainGuard {
        metric: String,
        w: Complex64,
        node: Option<(usize, usize)>,
    },

    #[error("radial singularity: profile derivative does not vanish at r = 0")]
    RadialSingularity,

    #[error("metric `{0}` is not rotationally symmetric")]
    NotRadial(String),

    #[error("initialization failed: harmonic extension residual {0:e}")]
    InitializationFailed(f64),

    #[error("solver diverged: {reason}")]
    Diverged {
        reason: String,
        best: Box<HarmonicSolution>,
    },

    #[error("max_iters exceeded: best residual {:e} after {} iterations", .best.residual_linf, .best.iterations)]
    MaxItersExceeded { best: Box<HarmonicSolution> },

    #[error("not sense-preserving on evaluated set: J <= 0 at {} node(s), first {:?}", .nodes.len(), .nodes.first())]
    NotSensePreserving { nodes: Vec<(usize, usize)> },

    #[error("hypothesis violated: target curvature {curvature} < 0 at node ({}, {})", .node.0, .node.1)]
    HypothesisViolated {
        curvature: f64,
        node: (usize, usize),
    },

    #[error("sub-rectangle {0:?} exceeds the valid region")]
    SubrectOutOfRange([usize; 4]),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn node_suffix(node: Option<(usize, usize)>) -> String {
    match node {
        Some((i, j)) => format!(" (node {i}, {j})"),
        None => String::new(),
    }
}
