//! Closed-form polynomial maps with exact Wirtinger derivatives through second order.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{ComplexField, Grid};

/// `h` and its Wirtinger derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub h: Complex64,
    pub hz: Complex64,
    pub hzbar: Complex64,
    pub hzz: Complex64,
    pub hzzbar: Complex64,
    pub hzbarzbar: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFamily {
    HolomorphicPoly,
    EuclideanHarmonic,
    Custom,
}

/// Complex polynomial `sum c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(Vec<Complex64>);

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    /// `(p, p', p'')` by Horner's scheme.
    pub fn eval3(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut d1, mut d2) = (zero, zero, zero);
        for &c in self.0.iter().rev() {
            d2 = d2 * z + d1 * 2.0;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2)
    }
}

type JetFn = Arc<dyn Fn(Complex64) -> Jet + Send + Sync>;

#[derive(Clone)]
pub struct AnalyticMap {
    name: String,
    family: MapFamily,
    jet: JetFn,
}

impl fmt::Debug for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticMap")
            .field("name", &self.name)
            .field("family", &self.family)
            .finish()
    }
}

fn describe(p: &[Complex64]) -> String {
    p.iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// `h = g(z) + conj(k(z))`; solves the flat harmonic-map equation exactly.
pub fn euclidean_harmonic(g: Vec<Complex64>, k: Vec<Complex64>) -> AnalyticMap {
    let name = format!("ehpoly:g={};k={}", describe(&g), describe(&k));
    let (g, k) = (Poly::new(g), Poly::new(k));
    AnalyticMap {
        name,
        family: MapFamily::EuclideanHarmonic,
        jet: Arc::new(move |z| {
            let (g0, g1, g2) = g.eval3(z);
            let (k0, k1, k2) = k.eval3(z);
            Jet {
                h: g0 + k0.conj(),
                hz: g1,
                hzbar: k1.conj(),
                hzz: g2,
                hzzbar: Complex64::new(0.0, 0.0),
                hzbarzbar: k2.conj(),
            }
        }),
    }
}

/// Holomorphic polynomial; harmonic into every target metric.
pub fn holomorphic_map(coeffs: Vec<Complex64>) -> AnalyticMap {
    let name = format!("holo:{}", describe(&coeffs));
    let p = Poly::new(coeffs);
    let zero = Complex64::new(0.0, 0.0);
    AnalyticMap {
        name,
        family: MapFamily::HolomorphicPoly,
        jet: Arc::new(move |z| {
            let (p0, p1, p2) = p.eval3(z);
            Jet {
                h: p0,
                hz: p1,
                hzbar: zero,
                hzz: p2,
                hzzbar: zero,
                hzbarzbar: zero,
            }
        }),
    }
}

/// `z + c conj(z)`.
pub fn affine(c: Complex64) -> AnalyticMap {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = euclidean_harmonic(vec![zero, one], vec![zero, c.conj()]);
    m.name = format!("affine:c={},{}", c.re, c.im);
    m
}

/// `h ∘ φ` for a polynomial `φ`, by the chain rule.
pub fn precompose_holomorphic(m: &AnalyticMap, phi: Vec<Complex64>) -> AnalyticMap {
    let name = format!("({})∘[{}]", m.name, describe(&phi));
    let phi = Poly::new(phi);
    let inner = m.jet.clone();
    AnalyticMap {
        name,
        family: m.family,
        jet: Arc::new(move |z| {
            let (w, d1, d2) = phi.eval3(z);
            let j = inner(w);
            let (d1c, d2c) = (d1.conj(), d2.conj());
            Jet {
                h: j.h,
                hz: j.hz * d1,
                hzbar: j.hzbar * d1c,
                hzz: j.hzz * d1 * d1 + j.hz * d2,
                hzzbar: j.hzzbar * d1.norm_sqr(),
                hzbarzbar: j.hzbarzbar * d1c * d1c + j.hzbar * d2c,
            }
        }),
    }
}

impl AnalyticMap {
    /// User-supplied jet; nothing about harmonicity is assumed.
    pub fn custom(
        name: impl Into<String>,
        jet: impl Fn(Complex64) -> Jet + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            family: MapFamily::Custom,
            jet: Arc::new(jet),
        }
    }

    /// `|z|^2`, a non-harmonic control.
    pub fn modulus_squared() -> Self {
        Self::custom("|z|^2", |z| Jet {
            h: Complex64::new(z.norm_sqr(), 0.0),
            hz: z.conj(),
            hzbar: z,
            hzz: Complex64::new(0.0, 0.0),
            hzzbar: Complex64::new(1.0, 0.0),
            hzbarzbar: Complex64::new(0.0, 0.0),
        })
    }

    /// `z + eps |z|^2`: sense-preserving near 0 but not harmonic for `eps != 0`.
    pub fn identity_plus_modulus(eps: f64) -> Self {
        Self::custom(format!("z + {eps}|z|^2"), move |z| Jet {
            h: z + eps * z.norm_sqr(),
            hz: 1.0 + eps * z.conj(),
            hzbar: eps * z,
            hzz: Complex64::new(0.0, 0.0),
            hzzbar: Complex64::new(eps, 0.0),
            hzbarzbar: Complex64::new(0.0, 0.0),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> MapFamily {
        self.family
    }

    #[inline]
    pub fn jet(&self, z: Complex64) -> Jet {
        (self.jet)(z)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.jet(z).h
    }

    /// Samples `h` on every node of `grid`.
    pub fn sample(&self, grid: &Grid) -> ComplexField {
        ComplexField::from_fn(*grid, |_, _, z| self.eval(z))
    }

    /// Samples `h` and every exact derivative.
    pub fn sample_jet(&self, grid: &Grid) -> JetFields {
        let jets: Vec<Jet> = (0..grid.len())
            .map(|k| {
                let (i, j) = grid.ij(k);
                self.jet(grid.z(i, j))
            })
            .collect();
        let pick = |f: fn(&Jet) -> Complex64| {
            ComplexField::from_fn(*grid, |i, j, _| f(&jets[grid.idx(i, j)]))
        };
        JetFields {
            h: pick(|j| j.h),
            hz: pick(|j| j.hz),
            hzbar: pick(|j| j.hzbar),
            hzz: pick(|j| j.hzz),
            hzzbar: pick(|j| j.hzzbar),
            hzbarzbar: pick(|j| j.hzbarzbar),
        }
    }
}

/// Grid samples of a [`Jet`].
#[derive(Debug, Clone)]
pub struct JetFields {
    pub h: ComplexField,
    pub hz: ComplexField,
    pub hzbar: ComplexField,
    pub hzz: ComplexField,
    pub hzzbar: ComplexField,
    pub hzbarzbar: ComplexField,
}
