use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("missing dimension line")]
    MissingHeader,
    #[error("malformed dimension line {0:?}")]
    BadHeader(String),
    #[error("line {line}: {msg}")]
    BadRow { line: usize, msg: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} columns, expected {expected}")]
    ColumnCount { row: usize, expected: usize, found: usize },
    #[error("entry ({row}, {col}) = {value} outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error("idiotope row {row} sums to {sum}, expected 1")]
    RowSum { row: usize, sum: f64 },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for MatrixError {
    fn from(e: std::io::Error) -> Self {
        MatrixError::Io(e.to_string())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("no antigen is presenting")]
    NoAntigen,
    #[error("antigen {0} out of range")]
    UnknownAntigen(usize),
    #[error("antibody {0} out of range")]
    UnknownAntibody(usize),
    #[error("no antibody matches the presenting antigens")]
    NoMatchingAntibody,
    #[error("priority must be a permutation of 0..{0}")]
    BadPriority(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
