//! Paratope (learned match strengths) and idiotope (fixed disallowance)
//! matrices, both `N x L` with antibodies as rows.

use std::path::Path;

use crate::error::MatrixError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn check_unit_range<F: Scalar>(m: &Matrix<F>) -> Result<(), MatrixError> {
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if !(v >= F::zero() && v <= F::one()) {
                return Err(MatrixError::OutOfRange {
                    row: i,
                    col: j,
                    value: v.as_f64(),
                });
            }
        }
    }
    Ok(())
}

/// Antibody-to-antigen strength of match. Every entry stays in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParatopeMatrix<F> {
    entries: Matrix<F>,
}

impl<F: Scalar> ParatopeMatrix<F> {
    pub fn new(entries: Matrix<F>) -> Result<Self, MatrixError> {
        check_unit_range(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_rows<R: AsRef<[F]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Antibody count `N`.
    pub fn antibodies(&self) -> usize {
        self.entries.rows()
    }

    /// Antigen count `L`.
    pub fn antigens(&self) -> usize {
        self.entries.cols()
    }

    #[inline]
    pub fn get(&self, antibody: usize, antigen: usize) -> F {
        self.entries.get(antibody, antigen)
    }

    /// Stores `value` clipped to `[0, 1]`.
    pub fn set_clipped(&mut self, antibody: usize, antigen: usize, value: F) {
        let v = value.max(F::zero()).min(F::one());
        self.entries.set(antibody, antigen, v);
    }

    pub fn row(&self, antibody: usize) -> &[F] {
        self.entries.row(antibody)
    }

    pub fn as_matrix(&self) -> &Matrix<F> {
        &self.entries
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatrixError> {
        Self::new(Matrix::load(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, comment: Option<&str>) -> Result<(), MatrixError> {
        self.entries.save(path, comment)
    }
}

/// Fixed antibody-to-antigen disallowance confidences. Entries lie in
/// `[0, 1]` and every row sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct IdiotopeMatrix<F> {
    entries: Matrix<F>,
}

impl<F: Scalar> IdiotopeMatrix<F> {
    pub fn new(entries: Matrix<F>) -> Result<Self, MatrixError> {
        check_unit_range(&entries)?;
        for i in 0..entries.rows() {
            let sum: F = entries.row(i).iter().copied().sum();
            if (sum - F::one()).abs() > F::sum_tolerance() {
                return Err(MatrixError::RowSum {
                    row: i,
                    sum: sum.as_f64(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn from_rows<R: AsRef<[F]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// An idiotope with every entry zero. It violates the row-sum rule and
    /// exists only to switch the idiotypic terms off in tests.
    pub fn null(antibodies: usize, antigens: usize) -> Self {
        Self {
            entries: Matrix::zeros(antibodies, antigens),
        }
    }

    pub fn antibodies(&self) -> usize {
        self.entries.rows()
    }

    pub fn antigens(&self) -> usize {
        self.entries.cols()
    }

    #[inline]
    pub fn get(&self, antibody: usize, antigen: usize) -> F {
        self.entries.get(antibody, antigen)
    }

    pub fn row(&self, antibody: usize) -> &[F] {
        self.entries.row(antibody)
    }

    pub fn as_matrix(&self) -> &Matrix<F> {
        &self.entries
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatrixError> {
        Self::new(Matrix::load(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, comment: Option<&str>) -> Result<(), MatrixError> {
        self.entries.save(path, comment)
    }
}
