//! Plain-text matrix files: whitespace-separated floats, one row per line.
//! An optional first line `# rows cols` fixes the shape; any other line
//! starting with `#` is a comment.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;
use williamson::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: row has {found} entries, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("header declares {declared_rows}x{declared_cols} but data is {rows}x{cols}")]
    HeaderMismatch {
        declared_rows: usize,
        declared_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("no matrix entries found")]
    Empty,
}

fn parse_header(body: &str, line: usize) -> Result<Option<(usize, usize)>, ParseError> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Ok(None);
    }
    match (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
        (Ok(r), Ok(c)) => Ok(Some((r, c))),
        _ if fields.iter().all(|f| f.chars().all(|ch| ch.is_ascii_digit() || ch == '-')) => {
            Err(ParseError::Syntax {
                line,
                message: format!("bad shape header `#{body}`"),
            })
        }
        _ => Ok(None),
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix, ParseError> {
    let mut header = None;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if let Some(body) = trimmed.strip_prefix('#') {
            if rows == 0 && header.is_none() {
                header = parse_header(body, line)?;
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in trimmed.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| ParseError::Syntax {
                line,
                message: format!("`{tok}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("`{tok}` is not finite"),
                });
            }
            row.push(v);
        }
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(ParseError::RaggedRows {
                    line,
                    expected: c,
                    found: row.len(),
                })
            }
            _ => {}
        }
        data.extend(row);
        rows += 1;
    }
    let cols = cols.ok_or(ParseError::Empty)?;
    if let Some((r, c)) = header {
        if (r, c) != (rows, cols) {
            return Err(ParseError::HeaderMismatch {
                declared_rows: r,
                declared_cols: c,
                rows,
                cols,
            });
        }
    }
    Ok(Matrix::from_row_major(rows, cols, data).expect("shape checked while parsing"))
}

/// Writes the header line and every entry in shortest round-trip form.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("# {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&v| crate::report::fmt_float(v)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<Matrix, crate::CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix(&text).map_err(|e| crate::CliError::Parse {
        path: path.display().to_string(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_form_and_identity() {
        let s = parse_matrix("0 1\n-1 0\n").unwrap();
        assert_eq!(s, Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap());
        let i = parse_matrix("# 2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(i, Matrix::identity(2));
    }

    #[test]
    fn ragged_rows() {
        assert_eq!(
            parse_matrix("1 2\n3\n"),
            Err(ParseError::RaggedRows {
                line: 2,
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_matrix("# comment\n1 2\n3 x\n") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_matrix("1 nan\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert_eq!(parse_matrix("\n# only comments\n"), Err(ParseError::Empty));
        assert!(matches!(
            parse_matrix("# 3 3\n1 0\n0 1\n"),
            Err(ParseError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let m = parse_matrix("# 2 2\n\n# diag\n  4 0\n\n0 9  \n").unwrap();
        assert_eq!(m, Matrix::from_diagonal(&[4.0, 9.0]));
    }

    #[test]
    fn format_round_trips() {
        let m = Matrix::from_rows(&[[0.1, 1.0 / 3.0], [-2e-300, 6.02e23]]).unwrap();
        let text = format_matrix(&m);
        assert!(text.starts_with("# 2 2\n"));
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }
}
