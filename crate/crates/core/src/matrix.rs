//! Dense row-major matrix and its plain-text file format.
//!
//! The text format is a dimension line `N L` followed by `N` rows of `L`
//! whitespace-separated decimals. Lines starting with `#` are comments and
//! may appear anywhere. Values are written with six decimal places.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::MatrixError;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn filled(rows: usize, cols: usize, value: F) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, F::zero())
    }

    pub fn from_rows<R: AsRef<[F]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(MatrixError::ColumnCount {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [F] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = F> + '_ {
        self.data.iter().copied()
    }

    pub fn to_text(&self, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|v| format!("{:.6}", v.as_f64()))
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (_, header) = lines.next().ok_or(MatrixError::MissingHeader)?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| MatrixError::BadHeader(header.to_string()))?;
        let [rows, cols] = dims[..] else {
            return Err(MatrixError::BadHeader(header.to_string()));
        };

        let mut data = Vec::with_capacity(rows * cols);
        let mut found = 0;
        for (line_no, line) in lines {
            let values: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| MatrixError::BadRow {
                    line: line_no,
                    msg: format!("{e}"),
                })?;
            if values.len() != cols {
                return Err(MatrixError::ColumnCount {
                    row: found,
                    expected: cols,
                    found: values.len(),
                });
            }
            if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                return Err(MatrixError::BadRow {
                    line: line_no,
                    msg: format!("non-finite value {bad}"),
                });
            }
            data.extend(values.into_iter().map(F::lit));
            found += 1;
        }
        if found != rows {
            return Err(MatrixError::RowCount {
                expected: rows,
                found,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatrixError> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, comment: Option<&str>) -> Result<(), MatrixError> {
        std::fs::write(path, self.to_text(comment))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let m: Matrix<f64> = Matrix::parse_text("# seed 7\n2 3\n0.1 0.2 0.3\n# mid\n1 0 0.5\n").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 3);
        assert_eq!(m.get(1, 2), 0.5);
    }

    #[test]
    fn writes_six_decimals() {
        let m = Matrix::from_rows(&[[0.125f64, 1.0 / 3.0]]).unwrap();
        assert_eq!(m.to_text(Some("hi")), "# hi\n1 2\n0.125000 0.333333\n");
    }

    #[test]
    fn rejects_short_rows() {
        let err = Matrix::<f64>::parse_text("2 2\n0.1 0.2\n0.3\n").unwrap_err();
        assert!(matches!(err, MatrixError::ColumnCount { row: 1, .. }));
        let err = Matrix::<f64>::parse_text("3 1\n0.1\n").unwrap_err();
        assert_eq!(err, MatrixError::RowCount { expected: 3, found: 1 });
        assert!(Matrix::<f64>::parse_text("").is_err());
        assert!(Matrix::<f64>::parse_text("2\n").is_err());
        assert!(Matrix::<f64>::parse_text("1 1\nabc\n").is_err());
    }
}
