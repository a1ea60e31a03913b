//! Plain-text matrix format: a header line `n,k` followed by `n` lines of `k`
//! comma-separated decimals. Values are written with 17 significant digits so
//! that every `f64` round-trips exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matcore::matrix::Matrix;

/// Formats one value with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    writeln!(out, "{},{}", m.rows(), m.cols()).unwrap();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|&v| format_f64(v)).collect();
        writeln!(out, "{}", line.join(",")).unwrap();
    }
    out
}

/// Several matrices, one block each, separated by a blank line.
pub fn write_blocks<'a, I: IntoIterator<Item = &'a Matrix>>(blocks: I) -> String {
    blocks
        .into_iter()
        .map(write_matrix)
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let mut parts = line.split(',').map(str::trim);
    let (Some(n), Some(k), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Parse(format!("expected header `n,k`, got `{line}`")));
    };
    let n = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count `{n}`")))?;
    let k = k
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count `{k}`")))?;
    Ok((n, k))
}

fn parse_from_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Option<Matrix>> {
    let Some(header) = lines.by_ref().map(str::trim).find(|l| !l.is_empty()) else {
        return Ok(None);
    };
    let (n, k) = parse_header(header)?;
    let mut data = Vec::with_capacity(n * k);
    for r in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {r}")))?;
        let before = data.len();
        for field in line.split(',') {
            let field = field.trim();
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("bad value `{field}` in row {}", r + 1)))?;
            data.push(v);
        }
        if data.len() - before != k {
            return Err(Error::Parse(format!(
                "row {} has {} values, expected {k}",
                r + 1,
                data.len() - before
            )));
        }
    }
    Matrix::new(n, k, data).map(Some)
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines();
    let m = parse_from_lines(&mut lines)?.ok_or_else(|| Error::Parse("empty input".into()))?;
    if let Some(extra) = lines.map(str::trim).find(|l| !l.is_empty()) {
        return Err(Error::Parse(format!("trailing content `{extra}`")));
    }
    Ok(m)
}

pub fn parse_blocks(text: &str) -> Result<Vec<Matrix>> {
    let mut lines = text.lines();
    let mut out = Vec::new();
    while let Some(m) = parse_from_lines(&mut lines)? {
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_text() {
        let s = write_matrix(&Matrix::identity(2));
        assert_eq!(
            s,
            "2,2\n1.0000000000000000e0,0.0000000000000000e0\n0.0000000000000000e0,1.0000000000000000e0\n"
        );
        assert_eq!(parse_matrix(&s).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn awkward_values_round_trip_bitwise() {
        let vals = vec![0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0, f64::MIN_POSITIVE];
        let m = Matrix::new(3, 2, vals).unwrap();
        let back = parse_matrix(&write_matrix(&m)).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn blocks_round_trip() {
        let a = Matrix::identity(2);
        let b = Matrix::from_rows(&[[1.5], [2.5], [-3.0]]);
        let text = write_blocks([&a, &b]);
        assert_eq!(parse_blocks(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2\n1,2\n").is_err());
        assert!(parse_matrix("2,2\n1,2\n").is_err());
        assert!(parse_matrix("1,2\n1,2,3\n").is_err());
        assert!(parse_matrix("1,1\nabc\n").is_err());
        assert!(parse_matrix("1,1\n1\n1,1\n2\n").is_err());
        assert!(parse_matrix("1,1\nNaN\n").is_err());
    }
}
