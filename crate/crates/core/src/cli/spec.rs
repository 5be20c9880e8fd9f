//! Map and metric spec strings.
//!
//! Coefficient lists are comma separated. An even count is read as `re,im` pairs,
//! an odd count as real coefficients: `holo:0,0,0.5,0` is `0.5z`, `ehpoly:g=0,0,1;k=0,0,0.3`
//! is `z² + 0.3z̄²`.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hmfield::{self, AnyField};
use crate::maps::{affine, euclidean_harmonic, holomorphic_map, AnalyticMap};
use crate::metrics::ConformalMetric;

pub fn parse_coeffs(text: &str) -> Result<Vec<Complex64>> {
    let nums = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in `{text}`")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if nums.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("non-finite coefficient in `{text}`")));
    }
    Ok(if nums.len() % 2 == 0 {
        nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
    } else {
        nums.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
    })
}

fn keyed<'a>(body: &'a str, key: &str) -> Option<&'a str> {
    body.split(';')
        .find_map(|part| part.trim().strip_prefix(key)?.strip_prefix('='))
}

/// `affine:c=RE,IM`, `holo:COEFFS`, `ehpoly:g=COEFFS;k=COEFFS`, `modsq`, `zmod:eps=E`.
pub fn parse_map(spec: &str) -> Result<AnalyticMap> {
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "affine" => {
            let c = keyed(body, "c")
                .ok_or_else(|| Error::Parse(format!("`{spec}`: expected affine:c=RE,IM")))?;
            match parse_coeffs(c)?.as_slice() {
                [c] => Ok(affine(*c)),
                _ => Err(Error::Parse(format!(
                    "`{spec}`: affine takes one complex coefficient"
                ))),
            }
        }
        "holo" => Ok(holomorphic_map(parse_coeffs(body)?)),
        "ehpoly" => {
            let g = keyed(body, "g")
                .map(parse_coeffs)
                .transpose()?
                .unwrap_or_default();
            let k = keyed(body, "k")
                .map(parse_coeffs)
                .transpose()?
                .unwrap_or_default();
            if g.is_empty() && k.is_empty() {
                return Err(Error::Parse(format!(
                    "`{spec}`: expected ehpoly:g=...;k=..."
                )));
            }
            Ok(euclidean_harmonic(g, k))
        }
        "modsq" => Ok(AnalyticMap::modulus_squared()),
        "zmod" => {
            let eps = keyed(body, "eps")
                .ok_or_else(|| Error::Parse(format!("`{spec}`: expected zmod:eps=E")))?
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{spec}`: bad eps")))?;
            Ok(AnalyticMap::identity_plus_modulus(eps))
        }
        _ => Err(Error::Parse(format!("unknown map `{spec}`"))),
    }
}

/// Built-in names, `radial:<profile>`, or `tabulated:<path>` to an HMFIELD real field of densities.
pub fn parse_metric(spec: &str) -> Result<ConformalMetric> {
    match spec.strip_prefix("tabulated:") {
        Some(path) => match hmfield::read(Path::new(path))? {
            AnyField::Real(rho) => ConformalMetric::tabulated(rho),
            AnyField::Complex(_) => Err(Error::Parse(format!(
                "`{path}`: tabulated metric needs a real field"
            ))),
        },
        None => ConformalMetric::from_spec(spec),
    }
}
