//! Matrix Market reader and writer for dense real matrices.
//!
//! Writing always uses the dense `array real general` layout (column-major
//! values). Reading also accepts `coordinate real general`, expanded to dense.

use std::fmt::Write as _;
use std::path::Path;

use crate::dense::{Matrix, Vector};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

enum Layout {
    Array,
    Coordinate,
}

pub fn to_matrix_market(m: &Matrix) -> String {
    let mut out = String::with_capacity(24 * m.rows() * m.cols() + 64);
    out.push_str("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            // `{:e}` prints the shortest digits that round-trip exactly.
            let _ = writeln!(out, "{:e}", m[(i, j)]);
        }
    }
    out
}

pub fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(
            header_line,
            "expected `%%MatrixMarket matrix <layout> real general`",
        ));
    }
    let layout = match tokens[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => {
            return Err(parse_err(
                header_line,
                format!("unsupported layout `{other}`"),
            ))
        }
    };
    if tokens[3] != "real" {
        return Err(parse_err(
            header_line,
            format!("unsupported field `{}`", tokens[3]),
        ));
    }
    if tokens[4] != "general" {
        return Err(parse_err(
            header_line,
            format!("unsupported symmetry `{}`", tokens[4]),
        ));
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(header_line + 1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(size_line, format!("bad size line: {e}")))?;

    let parse_value = |line: usize, tok: &str| -> Result<f64> {
        let v: f64 = tok
            .parse()
            .map_err(|e| parse_err(line, format!("bad value `{tok}`: {e}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(parse_err(line, format!("non-finite value `{tok}`")))
        }
    };

    match layout {
        Layout::Array => {
            let [rows, cols] = dims[..] else {
                return Err(parse_err(size_line, "array size line needs `rows cols`"));
            };
            if rows == 0 || cols == 0 {
                return Err(parse_err(size_line, "dimensions must be positive"));
            }
            let mut m = Matrix::zeros(rows, cols);
            let mut count = 0usize;
            let mut last_line = size_line;
            for (line, text) in body {
                last_line = line;
                for tok in text.split_whitespace() {
                    if count == rows * cols {
                        return Err(parse_err(line, "more values than declared"));
                    }
                    let v = parse_value(line, tok)?;
                    m[(count % rows, count / rows)] = v;
                    count += 1;
                }
            }
            if count != rows * cols {
                return Err(parse_err(
                    last_line,
                    format!("expected {} values, found {count}", rows * cols),
                ));
            }
            Ok(m)
        }
        Layout::Coordinate => {
            let [rows, cols, nnz] = dims[..] else {
                return Err(parse_err(
                    size_line,
                    "coordinate size line needs `rows cols nnz`",
                ));
            };
            if rows == 0 || cols == 0 {
                return Err(parse_err(size_line, "dimensions must be positive"));
            }
            let mut m = Matrix::zeros(rows, cols);
            let mut count = 0usize;
            let mut last_line = size_line;
            for (line, text) in body {
                last_line = line;
                let toks: Vec<&str> = text.split_whitespace().collect();
                let [i, j, v] = toks[..] else {
                    return Err(parse_err(line, "coordinate entry needs `row col value`"));
                };
                let idx = |t: &str, bound: usize| -> Result<usize> {
                    let k: usize = t
                        .parse()
                        .map_err(|e| parse_err(line, format!("bad index `{t}`: {e}")))?;
                    if k == 0 || k > bound {
                        return Err(parse_err(
                            line,
                            format!("index {k} out of range 1..={bound}"),
                        ));
                    }
                    Ok(k - 1)
                };
                let (i, j) = (idx(i, rows)?, idx(j, cols)?);
                m[(i, j)] += parse_value(line, v)?;
                count += 1;
                if count > nnz {
                    return Err(parse_err(line, "more entries than declared"));
                }
            }
            if count != nnz {
                return Err(parse_err(
                    last_line,
                    format!("expected {nnz} entries, found {count}"),
                ));
            }
            Ok(m)
        }
    }
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    std::fs::write(path, to_matrix_market(m))?;
    Ok(())
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    parse_matrix_market(&std::fs::read_to_string(path)?)
}

/// Writes a vector as an `n x 1` array.
pub fn write_vector(path: impl AsRef<Path>, v: &Vector) -> Result<()> {
    let m = Matrix::new(v.dim(), 1, v.to_vec())?;
    write_matrix(path, &m)
}

/// Reads an `n x 1` (or `1 x n`) matrix as a vector.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vector> {
    let m = read_matrix(path)?;
    if m.cols() != 1 && m.rows() != 1 {
        return Err(parse_err(
            2,
            format!(
                "expected a vector, found a {}x{} matrix",
                m.rows(),
                m.cols()
            ),
        ));
    }
    Vector::new(m.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_round_trip() {
        let i = Matrix::identity(2);
        assert_eq!(parse_matrix_market(&to_matrix_market(&i)).unwrap(), i);
    }

    #[test]
    fn array_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n2\n3\n4\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn coordinate_expands_to_dense() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 1 5.0\n3 2 -1.5\n";
        let m = parse_matrix_market(text).unwrap();
        let mut expected = Matrix::zeros(3, 3);
        expected[(0, 0)] = 5.0;
        expected[(2, 1)] = -1.5;
        assert_eq!(m, expected);
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("", 1),
            ("%%MatrixMarket matrix array complex general\n1 1\n1\n", 1),
            ("%%MatrixMarket matrix array real symmetric\n1 1\n1\n", 1),
            (
                "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
                5,
            ),
            ("%%MatrixMarket matrix array real general\n1 1\n1\nabc\n", 4),
            (
                "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
                3,
            ),
            ("%%MatrixMarket matrix coordinate real general\n2 2\n", 2),
        ];
        for (text, line) in cases {
            match parse_matrix_market(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "input {text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }
}
