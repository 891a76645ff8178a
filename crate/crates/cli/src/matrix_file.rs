//! Plain-text matrix files: the order m on the first line, then m lines of m
//! whitespace-separated decimal numbers.

use std::fmt::Write;

use objcheck_core::SquareMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixFileError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

fn malformed(line: usize, message: impl Into<String>) -> MatrixFileError {
    MatrixFileError::Malformed {
        line,
        message: message.into(),
    }
}

/// Parses one decimal number with a dot separator; rejects inf and NaN.
pub fn parse_number(token: &str) -> Option<f64> {
    let token = token.replace('\u{2212}', "-");
    let lower = token.to_ascii_lowercase();
    if lower.contains("inf") || lower.contains("nan") {
        return None;
    }
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Shortest decimal text that reads back to the same `f64`; −0 prints as 0.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}

pub fn parse_matrix(text: &str) -> Result<SquareMatrix, MatrixFileError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (first, header) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    let order: usize = header
        .parse()
        .map_err(|_| malformed(first, format!("expected the order m, found {header:?}")))?;
    if order == 0 {
        return Err(malformed(first, "order must be at least 1"));
    }
    let mut data = Vec::with_capacity(order * order);
    let mut rows = 0;
    for (line, content) in lines {
        if content.is_empty() {
            continue;
        }
        if rows == order {
            return Err(malformed(line, "more rows than the declared order"));
        }
        let values: Vec<&str> = content.split_whitespace().collect();
        if values.len() != order {
            return Err(malformed(
                line,
                format!("expected {order} numbers, found {}", values.len()),
            ));
        }
        for token in values {
            let v = parse_number(token)
                .ok_or_else(|| malformed(line, format!("invalid number {token:?}")))?;
            data.push(v);
        }
        rows += 1;
    }
    if rows != order {
        return Err(MatrixFileError::RowCount {
            expected: order,
            found: rows,
        });
    }
    Ok(SquareMatrix::from_row_major(order, data).expect("m·m finite entries"))
}

pub fn format_matrix(matrix: &SquareMatrix) -> String {
    let mut out = format!("{}\n", matrix.order());
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v)).collect();
        writeln!(out, "{}", cells.join(" ")).expect("writing to a String");
    }
    out
}
