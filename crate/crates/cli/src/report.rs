//! Run manifests, deterministic number formatting, and matrix dump parsing.

use std::path::{Path, PathBuf};

use num::complex::Complex64;
use serde::Serialize;

use olines::configgen::cyclotomic::CyclotomicField;
use olines::configgen::format::{parse_cyclotomic_literal, parse_gaussian_literal};
use olines::exactgeom::field::ExactField;

/// Every report embeds the manifest that reproduces it.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: Option<String>,
    pub output: Option<String>,
    pub recipe: Option<String>,
    pub statement: Option<String>,
    pub seed: u64,
    pub epsilon: String,
    pub threads: usize,
    pub format: String,
    pub budget_cols: usize,
    pub retries: usize,
    pub c0: String,
    pub c1: String,
    pub b_star: Option<i64>,
    pub point: Option<usize>,
    pub floor: Option<String>,
    pub construction: Option<String>,
}

/// 17-significant-digit float rendering: deterministic and value-preserving.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Resolve an input path: as given if it exists, else inside the fixture
/// directory (env OLINES_FIXTURES, default `fixtures`).
pub fn resolve_input(path: &str) -> Result<PathBuf, String> {
    let direct = Path::new(path);
    if direct.exists() {
        return Ok(direct.to_path_buf());
    }
    let dir = std::env::var("OLINES_FIXTURES").unwrap_or_else(|_| "fixtures".to_string());
    let fixture = Path::new(&dir).join(path);
    if fixture.exists() {
        return Ok(fixture);
    }
    Err(format!(
        "input '{}' not found (also tried {})",
        path,
        fixture.display()
    ))
}

/// Parse a matrix dump (`m n` header, optional `cyclotomic m` line, then one
/// `i j s a_i a_j a_s` row per line) into a dense complex matrix.
pub fn parse_dump_to_complex(text: &str) -> Result<Vec<Vec<Complex64>>, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or("empty matrix dump")?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad header '{}': {}", header, e))?;
    if dims.len() != 2 {
        return Err(format!("expected 'm n' header, got '{}'", header));
    }
    let (m, n) = (dims[0], dims[1]);

    let mut rows: Vec<(usize, &str)> = lines.collect();
    let mut field = None;
    if let Some((_, first)) = rows.first() {
        if let Some(rest) = first.strip_prefix("cyclotomic ") {
            let order: u32 = rest
                .trim()
                .parse()
                .map_err(|_| "bad cyclotomic order".to_string())?;
            field = Some(CyclotomicField::get(order));
            rows.remove(0);
        }
    }
    if rows.len() != m {
        return Err(format!("expected {} rows, found {}", m, rows.len()));
    }
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; m];
    for (k, (line_no, line)) in rows.iter().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 6 {
            return Err(format!(
                "line {}: expected 'i j s a_i a_j a_s', found {} fields",
                line_no,
                tokens.len()
            ));
        }
        let mut support = [0usize; 3];
        for (slot, tok) in tokens[..3].iter().enumerate() {
            let idx: usize = tok
                .parse()
                .map_err(|_| format!("line {}: bad column index '{}'", line_no, tok))?;
            if idx < 1 || idx > n {
                return Err(format!("line {}: column index {} out of range", line_no, idx));
            }
            support[slot] = idx - 1;
        }
        for (slot, tok) in tokens[3..].iter().enumerate() {
            let value = match &field {
                None => parse_gaussian_literal(tok, *line_no, 0)
                    .map(|g| g.to_c64())
                    .map_err(|e| e.to_string())?,
                Some(f) => parse_cyclotomic_literal(tok, f, *line_no, 0)
                    .map(|c| c.to_c64())
                    .map_err(|e| e.to_string())?,
            };
            out[k][support[slot]] = value;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip_gaussian() {
        let text = "2 3\n1 2 3 -1/2 -1/2 1\n2 3 1 2 -3 1\n";
        let m = parse_dump_to_complex(text).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0][0], Complex64::new(-0.5, 0.0));
        assert_eq!(m[0][2], Complex64::new(1.0, 0.0));
        assert_eq!(m[1][1], Complex64::new(2.0, 0.0));
        assert_eq!(m[1][2], Complex64::new(-3.0, 0.0));
        assert_eq!(m[1][0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dump_cyclotomic_header() {
        let text = "1 3\ncyclotomic 4\n1 2 3 w -1 1\n";
        let m = parse_dump_to_complex(text).unwrap();
        assert!((m[0][0] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn seventeen_digit_floats() {
        assert_eq!(fmt_f64(1.01), "1.0100000000000000e0");
        assert_eq!(fmt_f64(8.0 - 1e-6), "7.9999989999999999e0");
    }
}
