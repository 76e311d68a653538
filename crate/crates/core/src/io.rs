//! Text formats for complexes, weightings and kernel bases.
//!
//! `.cplx`: one simplex per line as whitespace-separated labels, repeated
//! labels encoding multiplicity. `#` starts a comment and blank lines are
//! skipped. Weightings use `<labels> : <p>/<q>` (or an integer) per line.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::balancing::{BalancingSpace, Weighting};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::multiset::{Multiset, Vertex};

/// Exact rational as `p/q`, or `p` when integral.
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(p, q))
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(body, _)| body).trim()
}

fn parse_labels(source: &str, lineno: usize, text: &str) -> Result<Multiset> {
    let labels = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<Vertex>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::parse(source, lineno, format!("bad vertex label {tok:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Multiset::from_labels(&labels).map_err(|e| Error::parse(source, lineno, e.to_string()))
}

/// Simplices of a `.cplx` text in file order, with their line numbers.
pub fn parse_simplex_lines(source: &str, text: &str) -> Result<Vec<(usize, Multiset)>> {
    let mut out: Vec<(usize, Multiset)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let sigma = parse_labels(source, lineno, body)?;
        if let Some((first_line, first)) = out.first() {
            if first.cardinality() != sigma.cardinality() {
                return Err(Error::parse(
                    source,
                    lineno,
                    format!(
                        "simplex {sigma} has cardinality {} but line {first_line} has {}",
                        sigma.cardinality(),
                        first.cardinality()
                    ),
                ));
            }
        }
        if !seen.insert(sigma.clone()) {
            return Err(Error::parse(source, lineno, format!("duplicate simplex {sigma}")));
        }
        out.push((lineno, sigma));
    }
    Ok(out)
}

pub fn parse_complex(source: &str, text: &str) -> Result<Complex> {
    let lines = parse_simplex_lines(source, text)?;
    let Some((_, first)) = lines.first() else {
        return Err(Error::parse(source, 0, "no simplices"));
    };
    if first.is_empty() {
        return Err(Error::parse(source, 0, "simplices must be nonempty"));
    }
    Complex::new(first.cardinality() - 1, lines.into_iter().map(|(_, s)| s))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(&path.display().to_string(), 0, e.to_string()))
}

pub fn read_complex(path: &Path) -> Result<Complex> {
    let text = read_text(path)?;
    parse_complex(&path.display().to_string(), &text)
}

pub fn format_complex(complex: &Complex) -> String {
    let mut out = String::new();
    for s in complex.simplices() {
        let labels: Vec<String> = s.labels().map(|v| v.to_string()).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `<labels> : <weight>` lines into a weighting.
pub fn parse_weighting(source: &str, text: &str) -> Result<Weighting> {
    let mut pairs: Vec<(usize, Multiset, BigRational)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = strip_comment(raw);
        if body.is_empty() {
            continue;
        }
        let Some((labels, weight)) = body.split_once(':') else {
            return Err(Error::parse(source, lineno, "expected `<labels> : <weight>`"));
        };
        let sigma = parse_labels(source, lineno, labels)?;
        let w = parse_rational(weight)
            .ok_or_else(|| Error::parse(source, lineno, format!("bad weight {:?}", weight.trim())))?;
        if let Some((first_line, first, _)) = pairs.first() {
            if first.cardinality() != sigma.cardinality() {
                return Err(Error::parse(
                    source,
                    lineno,
                    format!("cardinality differs from line {first_line}"),
                ));
            }
        }
        if pairs.iter().any(|(_, s, _)| *s == sigma) {
            return Err(Error::parse(source, lineno, format!("duplicate simplex {sigma}")));
        }
        pairs.push((lineno, sigma, w));
    }
    let Some((_, first, _)) = pairs.first() else {
        return Err(Error::parse(source, 0, "no weighted simplices"));
    };
    let degree = first.cardinality().saturating_sub(1);
    Weighting::from_pairs(degree, pairs.into_iter().map(|(_, s, w)| (s, w)))
}

pub fn read_weighting(path: &Path) -> Result<Weighting> {
    let text = read_text(path)?;
    parse_weighting(&path.display().to_string(), &text)
}

pub fn format_weighting(weighting: &Weighting) -> String {
    let mut out = String::new();
    for (s, w) in weighting.iter() {
        let labels: Vec<String> = s.labels().map(|v| v.to_string()).collect();
        out.push_str(&format!("{} : {}\n", labels.join(" "), rational_string(w)));
    }
    out
}

/// Comma-separated weights in the complex's simplex order, e.g. `1,-1,1/2`.
pub fn parse_weight_list(complex: &Complex, text: &str) -> Result<Weighting> {
    let weights = text
        .split(',')
        .map(|t| {
            parse_rational(t)
                .ok_or_else(|| Error::parse("--weights", 0, format!("bad weight {:?}", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Weighting::new(complex.clone(), weights)
}

pub fn complex_json(complex: &Complex) -> serde_json::Value {
    complex
        .simplices()
        .iter()
        .map(|s| s.labels().collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

pub fn weighting_json(weighting: &Weighting) -> serde_json::Value {
    json!({
        "complex": complex_json(weighting.complex()),
        "weights": weighting.weights().iter().map(rational_string).collect::<Vec<_>>(),
    })
}

/// `{"complex": [...], "dimension": k, "basis": [[...]]}` with rational strings.
pub fn kernel_json(space: &BalancingSpace) -> serde_json::Value {
    json!({
        "complex": complex_json(space.complex()),
        "dimension": space.dimension(),
        "basis": space
            .basis()
            .iter()
            .map(|v| v.iter().map(rational_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_multiplicity() {
        let c = parse_complex("t", "# triangle-ish\n1 1 2\n\n2 3 3  # tail\n").unwrap();
        assert_eq!(c, Complex::from_lists(&[[1, 1, 2], [2, 3, 3]]).unwrap());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_complex("f", "1 2\n\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_complex("f", "1 2\n2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_complex("f", "1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_complex("f", "0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse_complex("f", "# nothing\n").is_err());
    }

    #[test]
    fn round_trips() {
        let c = Complex::from_lists(&[[1, 1, 2], [2, 3, 4], [1, 4, 4]]).unwrap();
        assert_eq!(parse_complex("t", &format_complex(&c)).unwrap(), c);
        let w = Weighting::from_pairs(
            1,
            [
                (crate::ms![1, 2], BigRational::new(1.into(), 2.into())),
                (crate::ms![2, 3], BigRational::from_integer((-3).into())),
            ],
        )
        .unwrap();
        let text = format_weighting(&w);
        assert_eq!(text, "1 2 : 1/2\n2 3 : -3\n");
        assert_eq!(parse_weighting("t", &text).unwrap(), w);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-2/4"), Some(BigRational::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_string(&BigRational::new(6.into(), (-4).into())), "-3/2");
    }
}
