//! Exact rank computations over the rationals.

use num_traits::Zero;

use crate::rational::Rational;

/// Incrementally maintained row-echelon basis of a subspace of `Q^n`.
///
/// Rows are reduced against the stored pivots as they arrive, so the rank
/// of a long stream of vectors can be tracked (and the stream abandoned once
/// the span is everything) without materializing the full matrix.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    width: usize,
    // (pivot column, row normalized so the pivot entry is 1)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        RowEchelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds a row; returns true iff it was independent of the previous ones.
    pub fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.width, "row width mismatch");
        for (col, basis) in &self.rows {
            if row[*col].is_zero() {
                continue;
            }
            let factor = row[*col].clone();
            for (x, b) in row.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        let Some(col) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[col].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        // keep earlier rows reduced in the new pivot column
        for (_, basis) in self.rows.iter_mut() {
            if basis[col].is_zero() {
                continue;
            }
            let factor = basis[col].clone();
            for (x, r) in basis.iter_mut().zip(&row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        self.rows.push((col, row));
        true
    }
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: impl IntoIterator<Item = Vec<Rational>>, width: usize) -> usize {
    let mut ech = RowEchelon::new(width);
    for row in rows {
        ech.insert(row);
        if ech.is_full() {
            break;
        }
    }
    ech.rank()
}
