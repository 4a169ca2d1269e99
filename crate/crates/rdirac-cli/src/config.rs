//! Potential files and argument parsing helpers.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use radial_dirac::{Piece, PotentialSpec};
use serde::Deserialize;
use toml::Spanned;

/// Problem with the command line or the potential file (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    lo: Spanned<f64>,
    hi: Spanned<f64>,
    coeffs: Spanned<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    name: Option<String>,
    kappa: Spanned<i64>,
    mass: Spanned<f64>,
    #[serde(default)]
    pieces: Vec<Spanned<RawPiece>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses a potential description:
///
/// ```toml
/// name = "square well"
/// kappa = 1
/// mass = 0.0
///
/// [[pieces]]
/// lo = 0.0
/// hi = 1.0
/// coeffs = [4.0]      # v(x) = 4 on [0, 1]
/// ```
pub fn parse_potential_str(text: &str, origin: &str) -> Result<PotentialSpec, ConfigError> {
    let raw: RawPotential = toml::from_str(text).map_err(|e| ConfigError(format!("{origin}: {e}")))?;
    let at = |span: std::ops::Range<usize>| format!("{origin}:{}", line_of(text, span.start));
    let kappa = *raw.kappa.get_ref();
    if kappa < 1 || kappa > i32::MAX as i64 {
        return Err(ConfigError(format!("{}: field `kappa`: must be a positive integer, got {kappa}", at(raw.kappa.span()))));
    }
    let mass = *raw.mass.get_ref();
    if !(mass.is_finite() && mass >= 0.0) {
        return Err(ConfigError(format!("{}: field `mass`: must be finite and >= 0, got {mass}", at(raw.mass.span()))));
    }
    let mut pieces = Vec::with_capacity(raw.pieces.len());
    for (i, p) in raw.pieces.iter().enumerate() {
        let r = p.get_ref();
        for (field, v) in [("lo", &r.lo), ("hi", &r.hi)] {
            if !v.get_ref().is_finite() {
                return Err(ConfigError(format!("{}: pieces[{i}].{field}: not a finite number", at(v.span()))));
            }
        }
        if r.coeffs.get_ref().iter().any(|c| !c.is_finite()) {
            return Err(ConfigError(format!("{}: pieces[{i}].coeffs: not all finite", at(r.coeffs.span()))));
        }
        pieces.push(Piece::new(*r.lo.get_ref(), *r.hi.get_ref(), r.coeffs.get_ref().clone()));
    }
    let name = raw.name.unwrap_or_else(|| "potential".into());
    PotentialSpec::new(name, kappa as i32, mass, pieces).map_err(|e| {
        // point at the offending piece when the message names one
        let msg = e.to_string();
        let line = msg
            .split("pieces[")
            .nth(1)
            .and_then(|s| s.split(']').next())
            .and_then(|s| s.parse::<usize>().ok())
            .and_then(|i| raw.pieces.get(i))
            .map(|p| at(p.span()))
            .unwrap_or_else(|| origin.to_string());
        ConfigError(format!("{line}: {msg}"))
    })
}

pub fn parse_potential_file(path: &Path) -> Result<PotentialSpec, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse_potential_str(&text, &path.display().to_string())
}

/// `1.5`, `-2`, `3+0.5i`, `-1-2i`, `4i`.
pub fn parse_complex(s: &str) -> Result<Complex64, ConfigError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ConfigError(format!("malformed number `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let cut = (1..bytes.len())
            .rev()
            .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
        let (re, im) = match cut {
            Some(j) => (&body[..j], &body[j..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re.parse::<f64>().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

pub fn parse_list<T>(s: &str, each: impl Fn(&str) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    s.split(',').map(|p| each(p.trim())).collect()
}

pub fn parse_real(s: &str) -> Result<f64, ConfigError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ConfigError(format!("malformed number `{s}`"))),
    }
}

/// `lo,hi,n`: `n` equispaced points including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ConfigError(format!("--grid expects lo,hi,n, got `{s}`")));
    }
    let lo = parse_real(parts[0])?;
    let hi = parse_real(parts[1])?;
    let n: usize = parts[2].parse().map_err(|_| ConfigError(format!("malformed count `{}`", parts[2])))?;
    if n < 1 || (n == 1 && lo != hi) || hi < lo {
        return Err(ConfigError(format!("empty grid `{s}`")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const WELL: &str = "kappa = 1\nmass = 0\n[[pieces]]\nlo = 0\nhi = 1\ncoeffs = [4.0]\n";

    #[test]
    fn square_well_file() {
        let p = parse_potential_str(WELL, "well.toml").unwrap();
        assert_eq!(p.gamma(), 1.0);
        assert_eq!(p.eval(0.5), 4.0);
    }

    #[test]
    fn tent_file() {
        let text = "kappa = 1\nmass = 0\n[[pieces]]\nlo = 0\nhi = 0.5\ncoeffs = [0, 2]\n[[pieces]]\nlo = 0.5\nhi = 1\ncoeffs = [2, -2]\n";
        let p = parse_potential_str(text, "tent.toml").unwrap();
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval_left(0.5), 1.0);
    }

    #[test]
    fn diagnostics_name_the_line() {
        let gap = "kappa = 1\nmass = 0\n[[pieces]]\nlo = 0\nhi = 0.4\ncoeffs = [1]\n[[pieces]]\nlo = 0.6\nhi = 1\ncoeffs = [1]\n";
        let e = parse_potential_str(gap, "gap.toml").unwrap_err().0;
        assert!(e.starts_with("gap.toml:7:") && e.contains("gap in coverage"), "{e}");
        let overlap = gap.replace("lo = 0.6", "lo = 0.3");
        assert!(parse_potential_str(&overlap, "o.toml").unwrap_err().0.contains("overlaps"));
        let neg = WELL.replace("kappa = 1", "kappa = -1");
        let e = parse_potential_str(&neg, "k.toml").unwrap_err().0;
        assert!(e.starts_with("k.toml:1:") && e.contains("kappa"), "{e}");
        let e = parse_potential_str(&WELL.replace("hi = 1", "hi = \"one\""), "m.toml").unwrap_err().0;
        assert!(e.contains("m.toml") && e.contains("line 5"), "{e}");
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("3+0.5i").unwrap(), Complex64::new(3.0, 0.5));
        assert_eq!(parse_complex("-1-2i").unwrap(), Complex64::new(-1.0, -2.0));
        assert_eq!(parse_complex("4i").unwrap(), Complex64::new(0.0, 4.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert!(parse_complex("abc").is_err());
        assert_eq!(parse_grid("0,1,3").unwrap(), vec![0.0, 0.5, 1.0]);
    }
}
