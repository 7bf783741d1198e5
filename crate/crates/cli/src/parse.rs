//! Parsers for command-line values: complex literals, lists, transform
//! kinds and generator words. Indices on the command line are 1-based.

use isomon::scalar::parse_decimal;
use isomon::transform::BlGenerator;
use num_complex::Complex64;
use num_rational::BigRational;

/// `2.5`, `-1e-3`, `0.3+0.2i`, `1-2i`, `2i`, or `re,im` (not inside
/// lists).
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(real(re)?, real(im)?));
    }
    complex_literal(&t)
}

fn real(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn complex_literal(t: &str) -> Result<Complex64, String> {
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(t)?, 0.0));
    };
    // Split at the last sign that is not leading and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(s),
    };
    match split {
        Some(k) => Ok(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Comma-separated complex literals.
pub fn complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(|x| complex_literal(x.trim())).collect()
}

/// Comma-separated exact rationals: decimals or `p/q`.
pub fn rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(|x| rational(x.trim())).collect()
}

pub fn rational(s: &str) -> Result<BigRational, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: num_bigint::BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: num_bigint::BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if q == 0.into() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| format!("not a rational: {s:?}"))
}

fn index(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k - 1),
        _ => Err(format!("expected a 1-based index, found {s:?}")),
    }
}

fn index_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two indices `i,j`, found {s:?}"))?;
    Ok((index(a)?, index(b)?))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    ElmPlus(usize),
    ElmMinus(usize),
    Tensor { nu: Vec<Complex64>, deg_l1: i64 },
    Swap(usize),
    Schlesinger(usize, usize),
    Weyl(Vec<usize>),
    Bl(Vec<BlGenerator>),
}

/// `elm-plus:i`, `elm-minus:i`, `tensor:ν₁,…,νₙ:deg`, `swap:i`,
/// `schlesinger:i,j`, `weyl:s0 s1 …`, `bl:t-1,2 r1 …`.
pub fn kind(s: &str) -> Result<Kind, String> {
    let (name, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `name:arguments`, found {s:?}"))?;
    match name {
        "elm-plus" => Ok(Kind::ElmPlus(index(rest)?)),
        "elm-minus" => Ok(Kind::ElmMinus(index(rest)?)),
        "swap" => Ok(Kind::Swap(index(rest)?)),
        "schlesinger" => {
            let (i, j) = index_pair(rest)?;
            Ok(Kind::Schlesinger(i, j))
        }
        "tensor" => {
            let (nu, deg) = rest
                .rsplit_once(':')
                .ok_or_else(|| "tensor needs `tensor:ν₁,…,νₙ:deg`".to_string())?;
            let deg_l1 = deg
                .trim()
                .parse()
                .map_err(|_| format!("bad degree {deg:?}"))?;
            Ok(Kind::Tensor {
                nu: complex_list(nu)?,
                deg_l1,
            })
        }
        "weyl" => Ok(Kind::Weyl(weyl_word(rest)?)),
        "bl" => Ok(Kind::Bl(bl_word(rest)?)),
        _ => Err(format!("unknown transform {name:?}")),
    }
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
}

pub fn weyl_word(s: &str) -> Result<Vec<usize>, String> {
    tokens(s)
        .map(|t| match t.strip_prefix('s').map(str::parse::<usize>) {
            Some(Ok(k)) if k <= 4 => Ok(k),
            _ => Err(format!("expected s0 … s4, found {t:?}")),
        })
        .collect()
}

pub fn bl_word(s: &str) -> Result<Vec<BlGenerator>, String> {
    tokens(s)
        .map(|t| {
            if let Some(r) = t.strip_prefix("t+") {
                if r.contains(',') {
                    let (i, j) = index_pair(r)?;
                    Ok(BlGenerator::TPlusPair(i, j))
                } else {
                    Ok(BlGenerator::TPlus(index(r)?))
                }
            } else if let Some(r) = t.strip_prefix("t-") {
                let (i, j) = index_pair(r)?;
                Ok(BlGenerator::TMinusPair(i, j))
            } else if let Some(r) = t.strip_prefix('r') {
                Ok(BlGenerator::R(index(r)?))
            } else {
                Err(format!("unknown generator {t:?}"))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(complex("0.3+0.2i").unwrap(), Complex64::new(0.3, 0.2));
        assert_eq!(complex("1e-3-2i").unwrap(), Complex64::new(1e-3, -2.0));
        assert_eq!(complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(complex("1,2").unwrap(), Complex64::new(1.0, 2.0));
        assert!(complex("x").is_err());
    }

    #[test]
    fn words() {
        assert_eq!(weyl_word("s0 s1*s0").unwrap(), vec![0, 1, 0]);
        assert_eq!(
            bl_word("t-1,2 r1 t+3 t+1,4").unwrap(),
            vec![
                BlGenerator::TMinusPair(0, 1),
                BlGenerator::R(0),
                BlGenerator::TPlus(2),
                BlGenerator::TPlusPair(0, 3)
            ]
        );
        assert_eq!(kind("schlesinger:1,3").unwrap(), Kind::Schlesinger(0, 2));
        assert!(kind("swap:0").is_err());
    }
}
