//! Whitespace-delimited matrix text files: a header line `n r` followed by
//! `n` rows of `r` numbers.

use std::fs;
use std::path::Path;

use super::matrix::Matrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `n r` header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad header token `{t}`")))
        })
        .collect::<Result<_>>()?;
    let [n, r] = dims[..] else {
        return Err(Error::Parse(format!(
            "header must be `n r`, got `{header}`"
        )));
    };
    let mut data = Vec::with_capacity(n * r);
    for (row, line) in lines.enumerate() {
        if row >= n {
            return Err(Error::Parse(format!("more than {n} rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad number `{tok}`", row + 1)))?;
            data.push(v);
        }
        if data.len() - before != r {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {r}",
                row + 1,
                data.len() - before
            )));
        }
    }
    if data.len() != n * r {
        return Err(Error::Parse(format!(
            "expected {n} rows, got {}",
            data.len() / r.max(1)
        )));
    }
    Matrix::from_vec(n, r, data)
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_file() {
        let m = parse_matrix("2 3\n1 2 3\n4 5 6.5\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 2)], 6.5);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2 2\n1 2\n3\n").is_err());
        assert!(parse_matrix("1 2\n1 x\n").is_err());
        assert!(parse_matrix("1 1\n1\n2\n").is_err());
        assert!(parse_matrix("2 1\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn text_round_trip(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-1e6f64..1e6, 25)) {
            let m = Matrix::from_fn(rows, cols, |i, j| seed[i * 5 + j]);
            let back = parse_matrix(&format_matrix(&m)).unwrap();
            for i in 0..rows {
                for j in 0..cols {
                    prop_assert!((back[(i, j)] - m[(i, j)]).abs() <= 1e-12 * (1.0 + m[(i, j)].abs()));
                }
            }
        }
    }
}
