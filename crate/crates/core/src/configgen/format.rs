//! Text format for point configurations.
//!
//! UTF-8; `#` starts a comment. A `dim d` header precedes the points, one
//! point per line as comma-separated coordinates. Rational coordinates are
//! written `a/b` or `a/b+c/d i`. Configurations over a cyclotomic field add
//! a `cyclotomic m` header and write coordinates as polynomials in `w`
//! (= ζ_m), e.g. `2/3w^2-w+1/2`.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use super::cyclotomic::{Cyclotomic, CyclotomicField};
use super::generators::AnyConfig;
use crate::exactgeom::field::{ExactField, GaussianRational};
use crate::exactgeom::geom::PointConfig;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    offset: usize,
    _src: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str, line: usize, offset: usize) -> Self {
        Scanner {
            chars: src.chars().collect(),
            pos: 0,
            line,
            offset,
            _src: src,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col: self.offset + self.pos + 1,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn parse_uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        Ok(text.parse::<BigInt>().expect("digits parse as integer"))
    }

    /// `a` or `a/b` (no sign).
    fn parse_rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.parse_uint()?;
        if self.peek() == Some('/') {
            self.bump();
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return self.err("expected denominator digits after '/'");
            }
            let den = self.parse_uint()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn parse_sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    /// Rational complex literal: `a/b`, `c/d i`, or `a/b±c/d i`.
    fn parse_gaussian(&mut self) -> Result<GaussianRational, ParseError> {
        let mut re: Option<BigRational> = None;
        let mut im: Option<BigRational> = None;
        loop {
            self.skip_ws();
            let neg = self.parse_sign();
            self.skip_ws();
            if self.peek().is_none() {
                if neg.is_some() {
                    return self.err("dangling sign");
                }
                break;
            }
            let (mag, is_im) = if self.peek() == Some('i') {
                self.bump();
                (BigRational::one(), true)
            } else if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                let q = self.parse_rational()?;
                self.skip_ws();
                if self.peek() == Some('i') {
                    self.bump();
                    (q, true)
                } else {
                    (q, false)
                }
            } else {
                return self.err(format!("unexpected character '{}'", self.peek().unwrap()));
            };
            let signed = if neg == Some(true) { -mag } else { mag };
            let slot = if is_im { &mut im } else { &mut re };
            if slot.is_some() {
                return self.err(if is_im {
                    "duplicate imaginary part"
                } else {
                    "duplicate real part"
                });
            }
            *slot = Some(signed);
            self.skip_ws();
            if !matches!(self.peek(), Some('+') | Some('-')) {
                break;
            }
        }
        if re.is_none() && im.is_none() {
            return self.err("empty coordinate");
        }
        Ok(GaussianRational::new(
            re.unwrap_or_else(BigRational::zero),
            im.unwrap_or_else(BigRational::zero),
        ))
    }

    /// Polynomial in `w` with rational coefficients: `2/3w^2-w+1/2`.
    fn parse_cyclotomic(
        &mut self,
        field: &std::sync::Arc<CyclotomicField>,
    ) -> Result<Cyclotomic, ParseError> {
        let mut acc = field.zero();
        let mut any = false;
        loop {
            self.skip_ws();
            let neg = self.parse_sign();
            self.skip_ws();
            if self.peek().is_none() {
                if neg.is_some() {
                    return self.err("dangling sign");
                }
                break;
            }
            let coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                let q = self.parse_rational()?;
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.bump();
                    self.skip_ws();
                }
                q
            } else {
                BigRational::one()
            };
            let exp: u32 = if self.peek() == Some('w') {
                self.bump();
                if self.peek() == Some('^') {
                    self.bump();
                    let e = self.parse_uint()?;
                    if e > BigInt::from(100_000) {
                        return self.err("exponent too large");
                    }
                    e.try_into().unwrap()
                } else {
                    1
                }
            } else if coeff.is_one() && !matches!(self.chars.get(self.pos.wrapping_sub(1)), Some(c) if c.is_ascii_digit() || *c == '*')
            {
                return self.err(format!("unexpected character '{}'", self.peek().unwrap()));
            } else {
                0
            };
            let signed = if neg == Some(true) { -coeff } else { coeff };
            let term = field
                .zeta_pow((exp % field.order()) as i64)
                .scale_rational(&signed);
            acc = acc.add(&term);
            any = true;
            self.skip_ws();
            if !matches!(self.peek(), Some('+') | Some('-')) {
                break;
            }
        }
        if !any {
            return self.err("empty coordinate");
        }
        Ok(acc)
    }
}

/// Parse a single rational complex literal (used by matrix dumps).
pub fn parse_gaussian_literal(s: &str, line: usize, offset: usize) -> Result<GaussianRational, ParseError> {
    let mut sc = Scanner::new(s, line, offset);
    let v = sc.parse_gaussian()?;
    if !sc.at_end() {
        return sc.err("trailing characters after coordinate");
    }
    Ok(v)
}

/// Parse a single cyclotomic literal (used by matrix dumps).
pub fn parse_cyclotomic_literal(
    s: &str,
    field: &std::sync::Arc<CyclotomicField>,
    line: usize,
    offset: usize,
) -> Result<Cyclotomic, ParseError> {
    let mut sc = Scanner::new(s, line, offset);
    let v = sc.parse_cyclotomic(field)?;
    if !sc.at_end() {
        return sc.err("trailing characters after coordinate");
    }
    Ok(v)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

/// Parse a configuration file.
pub fn parse(text: &str) -> Result<AnyConfig, ParseError> {
    let mut dim: Option<usize> = None;
    let mut order: Option<u32> = None;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("dim ") {
            if dim.is_some() {
                return Err(ParseError {
                    line: line_no,
                    col: 1,
                    msg: "duplicate dim header".into(),
                });
            }
            dim = Some(rest.trim().parse().map_err(|_| ParseError {
                line: line_no,
                col: 5,
                msg: "invalid dimension".into(),
            })?);
            continue;
        }
        if let Some(rest) = content.strip_prefix("cyclotomic ") {
            if order.is_some() {
                return Err(ParseError {
                    line: line_no,
                    col: 1,
                    msg: "duplicate cyclotomic header".into(),
                });
            }
            let m: u32 = rest.trim().parse().map_err(|_| ParseError {
                line: line_no,
                col: 12,
                msg: "invalid cyclotomic order".into(),
            })?;
            if m == 0 {
                return Err(ParseError {
                    line: line_no,
                    col: 12,
                    msg: "cyclotomic order must be positive".into(),
                });
            }
            order = Some(m);
            continue;
        }
        rows.push((line_no, raw));
    }
    let Some(dim) = dim else {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "missing 'dim d' header".into(),
        });
    };
    if rows.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "configuration has no points".into(),
        });
    }

    fn parse_points<F: ExactField>(
        rows: &[(usize, &str)],
        dim: usize,
        mut coord: impl FnMut(&str, usize, usize) -> Result<F, ParseError>,
    ) -> Result<PointConfig<F>, ParseError> {
        let mut points = Vec::with_capacity(rows.len());
        for (line_no, raw) in rows {
            let content = strip_comment(raw);
            let mut p = Vec::with_capacity(dim);
            let mut offset = 0usize;
            for piece in content.split(',') {
                p.push(coord(piece, *line_no, offset)?);
                offset += piece.chars().count() + 1;
            }
            if p.len() != dim {
                return Err(ParseError {
                    line: *line_no,
                    col: 1,
                    msg: format!("expected {} coordinates, found {}", dim, p.len()),
                });
            }
            points.push(p);
        }
        PointConfig::new(dim, points).map_err(|e| ParseError {
            line: rows.last().map_or(1, |(l, _)| *l),
            col: 1,
            msg: e.to_string(),
        })
    }

    match order {
        None => Ok(AnyConfig::Gaussian(parse_points(
            &rows,
            dim,
            |s, line, offset| {
                let mut sc = Scanner::new(s, line, offset);
                let v = sc.parse_gaussian()?;
                if !sc.at_end() {
                    return sc.err("trailing characters after coordinate");
                }
                Ok(v)
            },
        )?)),
        Some(m) => {
            let field = CyclotomicField::get(m);
            Ok(AnyConfig::Cyclotomic(parse_points(
                &rows,
                dim,
                move |s, line, offset| {
                    let mut sc = Scanner::new(s, line, offset);
                    let v = sc.parse_cyclotomic(&field)?;
                    if !sc.at_end() {
                        return sc.err("trailing characters after coordinate");
                    }
                    Ok(v)
                },
            )?))
        }
    }
}

fn serialize_points<F: ExactField>(out: &mut String, cfg: &PointConfig<F>) {
    for p in cfg.points() {
        let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(", "));
        out.push('\n');
    }
}

/// Serialize a configuration; `parse(serialize(c))` is structurally `c`.
pub fn serialize(config: &AnyConfig) -> String {
    let mut out = String::new();
    match config {
        AnyConfig::Gaussian(c) => {
            out.push_str(&format!("dim {}\n", c.dim()));
            serialize_points(&mut out, c);
        }
        AnyConfig::Cyclotomic(c) => {
            out.push_str(&format!("dim {}\n", c.dim()));
            let order = c.points()[0][0].order();
            out.push_str(&format!("cyclotomic {}\n", order));
            serialize_points(&mut out, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configgen::generators::{fermat, random_generic};
    use crate::exactgeom::field::rat;

    #[test]
    fn parse_simple_gaussian() {
        let cfg = parse("dim 2\n(omitted)# nope\n# comment\n1/2, -3+2i\n0, 1").unwrap_err();
        // the stray "(omitted)" line is a parse error
        assert_eq!(cfg.line, 2);

        let cfg = parse("dim 2\n# comment\n1/2, -3+2i\n0, 1").unwrap();
        let AnyConfig::Gaussian(c) = cfg else {
            panic!("expected gaussian config")
        };
        assert_eq!(c.dim(), 2);
        assert_eq!(c.point(0)[0], GaussianRational::from_ratio(1, 2));
        assert_eq!(c.point(0)[1], GaussianRational::from_parts(-3, 1, 2, 1));
    }

    #[test]
    fn parse_error_positions() {
        let err = parse("dim 2\n1//2, 3\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 3);

        let err = parse("dim 2\n1, 2, 3\n").unwrap_err();
        assert_eq!(err.line, 2);

        let err = parse("1, 2\n").unwrap_err();
        assert!(err.msg.contains("dim"));
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = parse("dim 1\n3\n3\n").unwrap_err();
        assert!(err.msg.contains("coincide"));
    }

    #[test]
    fn gaussian_round_trip() {
        let c = AnyConfig::Gaussian(random_generic(8, 3, 42).unwrap());
        let text = serialize(&c);
        assert_eq!(parse(&text).unwrap(), c);
    }

    #[test]
    fn cyclotomic_round_trip() {
        let c = AnyConfig::Cyclotomic(fermat(3).unwrap());
        let text = serialize(&c);
        assert!(text.starts_with("dim 3\ncyclotomic 6\n"));
        let back = parse(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn imaginary_forms() {
        let v = parse_gaussian_literal("2i", 1, 0).unwrap();
        assert_eq!(v, GaussianRational::from_parts(0, 1, 2, 1));
        let v = parse_gaussian_literal("-i", 1, 0).unwrap();
        assert_eq!(v, GaussianRational::from_parts(0, 1, -1, 1));
        let v = parse_gaussian_literal("1/2 - 3/4 i", 1, 0).unwrap();
        assert_eq!(v, GaussianRational::from_parts(1, 2, -3, 4));
    }

    #[test]
    fn cyclotomic_literal_forms() {
        let f = CyclotomicField::get(8);
        let v = parse_cyclotomic_literal("2/3w^2-w+1/2", &f, 1, 0).unwrap();
        let expect = f
            .zeta_pow(2)
            .scale_rational(&rat(2, 3))
            .add(&f.zeta().neg())
            .add(&f.from_rational(rat(1, 2)));
        assert_eq!(v, expect);
        assert_eq!(parse_cyclotomic_literal(&expect.to_string(), &f, 1, 0).unwrap(), expect);
        assert_eq!(parse_cyclotomic_literal("0", &f, 1, 0).unwrap(), f.zero());
    }
}
