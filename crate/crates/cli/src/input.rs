//! Parsing of function specs, complex numbers and coefficient lists.

use imslab::catalog::{Catalog, CatalogEntry};
use imslab::poly::{ComplexPoly, RationalFn};
use imslab::C64;

/// What a command operates on.
#[derive(Debug, Clone)]
pub enum Target {
    Entry(Box<CatalogEntry>),
    Inline(RationalFn),
}

impl Target {
    pub fn name(&self) -> String {
        match self {
            Target::Entry(e) => format!("catalog:{}", e.name),
            Target::Inline(_) => "inline".to_string(),
        }
    }

    pub fn rational(&self) -> Option<&RationalFn> {
        match self {
            Target::Entry(e) => e.rational(),
            Target::Inline(r) => Some(r),
        }
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`; a bare `i` means one.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{s}` as a number of the form a or a+bi");
    if t.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| match x.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad()),
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(real(&t)?, 0.0));
    };
    // The sign that separates the parts is the last one not in an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x)?,
    };
    Ok(C64::new(re, im))
}

/// Comma-separated coefficients in ascending order.
pub fn parse_coeffs(s: &str) -> Result<ComplexPoly, String> {
    let coeffs = s
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComplexPoly::new(coeffs))
}

pub fn parse_rational(num: &str, den: &str) -> Result<RationalFn, String> {
    let (n, d) = (parse_coeffs(num)?, parse_coeffs(den)?);
    if d.is_zero() {
        return Err("denominator is identically zero".into());
    }
    RationalFn::new(n, d).map_err(|e| e.to_string())
}

/// `catalog:NAME`, a bare catalog name, or `num=…;den=…`.
pub fn parse_target(spec: &str, catalog: &Catalog) -> Result<Target, String> {
    let spec = spec.trim();
    if spec.contains('=') {
        let (mut num, mut den) = (None, None);
        for part in spec.split(';').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            match k.trim() {
                "num" => num = Some(v),
                "den" => den = Some(v),
                other => return Err(format!("unknown key `{other}` (expected num or den)")),
            }
        }
        let num = num.ok_or("missing num=")?;
        return Ok(Target::Inline(parse_rational(num, den.unwrap_or("1"))?));
    }
    let name = spec.strip_prefix("catalog:").unwrap_or(spec);
    catalog
        .lookup(name)
        .map(|e| Target::Entry(Box::new(e.clone())))
        .map_err(|e| e.to_string())
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("cannot parse `{x}` as a real")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |s| parse_complex(s).unwrap();
        assert_eq!(c("-2"), C64::new(-2.0, 0.0));
        assert_eq!(c("0+1i"), C64::new(0.0, 1.0));
        assert_eq!(c("2i"), C64::new(0.0, 2.0));
        assert_eq!(c("-i"), C64::new(0.0, -1.0));
        assert_eq!(c("1-0.5i"), C64::new(1.0, -0.5));
        assert_eq!(c("1e-3+2e-1i"), C64::new(1e-3, 0.2));
        assert_eq!(c("-1.5e+2-i"), C64::new(-150.0, -1.0));
        for bad in ["", "x", "1+", "i1", "nan", "1+2j"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn targets() {
        let cat = Catalog::builtin();
        assert_eq!(parse_target("catalog:R4", &cat).unwrap().name(), "catalog:koebe");
        assert_eq!(parse_target("P2", &cat).unwrap().name(), "catalog:P2");
        let t = parse_target("num=0,1;den=1,-1", &cat).unwrap();
        assert_eq!(t.rational().unwrap(), &RationalFn::from_real(&[0.0, 1.0], &[1.0, -1.0]).unwrap());
        assert!(parse_target("catalog:nope", &cat).is_err());
        assert!(parse_target("num=0,1;den=0", &cat).is_err());
        assert!(parse_target("num=0,1;foo=2", &cat).is_err());
    }
}
