//! `HMFIELD 1` plain-text field files.
//!
//! ```text
//! HMFIELD 1 <C|R> <nx> <ny> <x0> <y0> <s>
//! <i> <j> <re> [<im>] <mask:0|1>      (nx*ny lines, j outer, i inner)
//! ```
//!
//! Floats are written with 17 significant digits so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Field, Grid, RealField, Scalar};

const MAGIC: &str = "HMFIELD";
const VERSION: &str = "1";

/// Field values that have an `HMFIELD` representation.
pub trait HmValue: Scalar {
    const KIND: char;
    fn write_value(self, out: &mut String);
    fn parse_value(parts: &[&str]) -> Option<Self>;
    const WIDTH: usize;
}

impl HmValue for f64 {
    const KIND: char = 'R';
    const WIDTH: usize = 1;
    fn write_value(self, out: &mut String) {
        let _ = write!(out, "{}", fmt17(self));
    }
    fn parse_value(parts: &[&str]) -> Option<Self> {
        parts[0].parse().ok()
    }
}

impl HmValue for Complex64 {
    const KIND: char = 'C';
    const WIDTH: usize = 2;
    fn write_value(self, out: &mut String) {
        let _ = write!(out, "{} {}", fmt17(self.re), fmt17(self.im));
    }
    fn parse_value(parts: &[&str]) -> Option<Self> {
        Some(Complex64::new(
            parts[0].parse().ok()?,
            parts[1].parse().ok()?,
        ))
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A field of either kind, as read from disk.
#[derive(Debug, Clone)]
pub enum AnyField {
    Complex(ComplexField),
    Real(RealField),
}

impl AnyField {
    pub fn grid(&self) -> &Grid {
        match self {
            AnyField::Complex(f) => f.grid(),
            AnyField::Real(f) => f.grid(),
        }
    }

    /// Real fields are promoted to complex ones with zero imaginary part.
    pub fn into_complex(self) -> ComplexField {
        match self {
            AnyField::Complex(f) => f,
            AnyField::Real(f) => f.map(|v| Complex64::new(v, 0.0)),
        }
    }
}

pub fn to_string<T: HmValue>(field: &Field<T>) -> String {
    let g = field.grid();
    let mut out = String::with_capacity(64 * g.len());
    let _ = writeln!(
        out,
        "{MAGIC} {VERSION} {} {} {} {} {} {}",
        T::KIND,
        g.nx,
        g.ny,
        fmt17(g.x0),
        fmt17(g.y0),
        fmt17(g.s)
    );
    for j in 0..g.ny {
        for i in 0..g.nx {
            let _ = write!(out, "{i} {j} ");
            field.at(i, j).write_value(&mut out);
            let _ = writeln!(out, " {}", u8::from(field.is_valid(i, j)));
        }
    }
    out
}

pub fn parse(text: &str) -> Result<AnyField> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Format {
        line: 1,
        msg: "empty file".into(),
    })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |msg: &str| Error::Format {
        line: 1,
        msg: msg.to_string(),
    };
    if h.len() != 8 || h[0] != MAGIC || h[1] != VERSION {
        return Err(bad_header(
            "expected `HMFIELD 1 <C|R> <nx> <ny> <x0> <y0> <s>`",
        ));
    }
    let num =
        |k: usize| -> Result<f64> { h[k].parse().map_err(|_| bad_header("bad number in header")) };
    let count =
        |k: usize| -> Result<usize> { h[k].parse().map_err(|_| bad_header("bad node count")) };
    let grid = Grid::new(num(5)?, num(6)?, count(3)?, count(4)?, num(7)?)?;
    match h[2] {
        "C" => Ok(AnyField::Complex(parse_body(grid, lines)?)),
        "R" => Ok(AnyField::Real(parse_body(grid, lines)?)),
        other => Err(bad_header(&format!("unknown kind `{other}`"))),
    }
}

fn parse_body<'a, T: HmValue>(
    grid: Grid,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Field<T>> {
    let mut values = vec![T::default(); grid.len()];
    let mut mask = vec![false; grid.len()];
    let mut seen = 0usize;
    for (lineno, line) in lines {
        let err = |msg: &str| Error::Format {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 + T::WIDTH {
            return Err(err("wrong number of columns"));
        }
        let i: usize = parts[0].parse().map_err(|_| err("bad i"))?;
        let j: usize = parts[1].parse().map_err(|_| err("bad j"))?;
        if seen >= grid.len() || grid.idx(i, j) != seen || i >= grid.nx {
            return Err(err("nodes out of row-major order"));
        }
        values[seen] = T::parse_value(&parts[2..2 + T::WIDTH]).ok_or_else(|| err("bad value"))?;
        mask[seen] = match parts[2 + T::WIDTH] {
            "0" => false,
            "1" => true,
            _ => return Err(err("mask must be 0 or 1")),
        };
        seen += 1;
    }
    if seen != grid.len() {
        return Err(Error::Format {
            line: seen + 2,
            msg: format!("expected {} nodes, found {seen}", grid.len()),
        });
    }
    Field::from_parts(grid, values, mask)
}

pub fn write<T: HmValue>(path: impl AsRef<Path>, field: &Field<T>) -> Result<()> {
    crate::io::write_atomic(path.as_ref(), to_string(field).as_bytes())
}

pub fn read(path: impl AsRef<Path>) -> Result<AnyField> {
    parse(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let g = Grid::new(0.5, -0.25, 5, 5, 0.125).unwrap();
        let f = RealField::from_fn(g, |i, j, _| (i + 10 * j) as f64);
        let text = to_string(&f);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "HMFIELD 1 R 5 5 5.0000000000000000e-1 -2.5000000000000000e-1 1.2500000000000000e-1"
        );
        assert_eq!(lines.next().unwrap(), "0 0 0.0000000000000000e0 1");
        assert_eq!(lines.nth(5).unwrap(), "1 1 1.1000000000000000e1 1");
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(parse("").is_err());
        assert!(parse("HMFIELD 2 R 5 5 0 0 1").is_err());
        assert!(parse("HMFIELD 1 Q 5 5 0 0 1").is_err());
        let g = Grid::new(0.0, 0.0, 5, 5, 1.0).unwrap();
        let text = to_string(&RealField::constant(g, 1.0));
        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse(&truncated), Err(Error::Format { .. })));
        let swapped = text.replacen("0 0 1.0", "1 0 1.0", 1);
        assert!(parse(&swapped).is_err());
    }

    proptest! {
        #[test]
        fn complex_round_trip_is_bit_exact(
            vals in proptest::collection::vec((any::<f64>(), any::<f64>(), any::<bool>()), 35),
            x0 in -1e3..1e3f64,
            s in 1e-6..10.0f64,
        ) {
            let g = Grid::new(x0, -x0 / 3.0, 5, 7, s).unwrap();
            let values: Vec<Complex64> = vals.iter().map(|&(a, b, m)| {
                if m && !(a.is_finite() && b.is_finite()) { Complex64::new(0.0, 0.0) } else { Complex64::new(a, b) }
            }).collect();
            let mask: Vec<bool> = vals.iter().map(|v| v.2).collect();
            let f = ComplexField::from_parts(g, values, mask).unwrap();
            let back = match parse(&to_string(&f)).unwrap() {
                AnyField::Complex(c) => c,
                AnyField::Real(_) => unreachable!(),
            };
            prop_assert_eq!(back.grid(), f.grid());
            prop_assert_eq!(back.mask(), f.mask());
            for (a, b) in back.values().iter().zip(f.values()) {
                prop_assert_eq!(a.re.to_bits() == b.re.to_bits() || (a.re.is_nan() && b.re.is_nan()), true);
                prop_assert_eq!(a.im.to_bits() == b.im.to_bits() || (a.im.is_nan() && b.im.is_nan()), true);
            }
        }

        #[test]
        fn real_round_trip_is_bit_exact(vals in proptest::collection::vec(-1e300..1e300f64, 25)) {
            let g = Grid::new(0.0, 0.0, 5, 5, 0.1).unwrap();
            let f = RealField::from_parts(g, vals, vec![true; 25]).unwrap();
            match parse(&to_string(&f)).unwrap() {
                AnyField::Real(r) => {
                    for (a, b) in r.values().iter().zip(f.values()) {
                        prop_assert_eq!(a.to_bits(), b.to_bits());
                    }
                }
                AnyField::Complex(_) => prop_assert!(false),
            }
        }
    }
}
