//! Training data: a dense design matrix paired with positive responses.

use crate::error::{Error, Result};

/// A design matrix (m rows of p predictors, dense row-major) together with
/// the m positive responses it predicts.
///
/// Construction validates the Gamma-support requirements once, so every
/// downstream routine can assume finite predictors and strictly positive
/// responses.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: usize,
    cols: usize,
    design: Vec<f64>, // row-major, rows * cols
    responses: Vec<f64>,
    frob_sq: f64,
}

impl Dataset {
    /// Build a dataset from a row-major flat design and a response vector.
    pub fn new(design: Vec<f64>, rows: usize, cols: usize, responses: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDataset);
        }
        if design.len() != rows * cols {
            return Err(Error::RaggedDesign { row: 0, got: design.len(), expected: rows * cols });
        }
        if responses.len() != rows {
            return Err(Error::RowCountMismatch {
                design_rows: rows,
                response_rows: responses.len(),
            });
        }
        for (idx, &v) in design.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteDesign { row: idx / cols, col: idx % cols });
            }
        }
        for (row, &b) in responses.iter().enumerate() {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::InvalidResponse { row, value: b });
            }
        }
        let frob_sq = design.iter().map(|a| a * a).sum();
        Ok(Self { rows, cols, design, responses, frob_sq })
    }

    /// Build from nested per-row vectors; every row must have the same length.
    pub fn from_rows(design: Vec<Vec<f64>>, responses: Vec<f64>) -> Result<Self> {
        let rows = design.len();
        if rows == 0 {
            return Err(Error::EmptyDataset);
        }
        let cols = design[0].len();
        let mut flat = Vec::with_capacity(rows * cols);
        for (i, row) in design.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedDesign { row: i, got: row.len(), expected: cols });
            }
            flat.extend_from_slice(&row);
        }
        Self::new(flat, rows, cols, responses)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.design[i * self.cols..(i + 1) * self.cols]
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    #[inline]
    pub fn response(&self, i: usize) -> f64 {
        self.responses[i]
    }

    /// Squared Frobenius norm of the design, cached at construction.
    pub fn frobenius_sq(&self) -> f64 {
        self.frob_sq
    }

    /// New dataset keeping only the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let mut design = Vec::with_capacity(rows.len() * self.cols);
        let mut responses = Vec::with_capacity(rows.len());
        for &r in rows {
            design.extend_from_slice(self.row(r));
            responses.push(self.responses[r]);
        }
        Dataset::new(design, rows.len(), self.cols, responses)
            .expect("row subset of a valid dataset is valid")
    }

    /// New dataset keeping only the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        let mut design = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let row = self.row(i);
            for &c in cols {
                design.push(row[c]);
            }
        }
        Dataset::new(design, self.rows, cols.len(), self.responses.clone())
            .expect("column subset of a valid dataset is valid")
    }

    /// New dataset with a column of ones appended (used for an intercept).
    pub fn append_ones_column(&self) -> Dataset {
        let mut design = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            design.extend_from_slice(self.row(i));
            design.push(1.0);
        }
        Dataset::new(design, self.rows, self.cols + 1, self.responses.clone())
            .expect("appending a ones column preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_response() {
        let err = Dataset::new(vec![1.0, 2.0], 2, 1, vec![1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidResponse { row: 1, .. }));
        let err = Dataset::new(vec![1.0], 1, 1, vec![-3.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidResponse { row: 0, .. }));
    }

    #[test]
    fn rejects_non_finite_design() {
        let err = Dataset::new(vec![1.0, f64::NAN], 1, 2, vec![1.0]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteDesign { row: 0, col: 1 }));
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(Dataset::new(vec![], 0, 0, vec![]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn frobenius_cached() {
        let d = Dataset::new(vec![1.0, -1.0, 2.0, 0.5], 2, 2, vec![1.0, 2.0]).unwrap();
        assert_eq!(d.frobenius_sq(), 1.0 + 1.0 + 4.0 + 0.25);
    }

    #[test]
    fn row_and_column_selection() {
        let d = Dataset::from_rows(
            vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        let sub = d.select_rows(&[2, 0]);
        assert_eq!(sub.row(0), &[5.0, 6.0]);
        assert_eq!(sub.responses(), &[3.0, 1.0]);
        let cols = d.select_columns(&[1]);
        assert_eq!(cols.cols(), 1);
        assert_eq!(cols.row(1), &[4.0]);
        let with_ones = d.append_ones_column();
        assert_eq!(with_ones.row(0), &[1.0, 2.0, 1.0]);
    }
}
