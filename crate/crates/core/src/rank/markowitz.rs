//! Sparse elimination modulo a prime with Markowitz pivot selection.

use std::collections::HashSet;

use super::echelon::axpy;
use super::matrix::{ModMatrix, SparseRow};
use super::modular::PrimeField;

/// Rank of a sparse matrix over `GF(p)`.
///
/// Each step picks, among the active rows of fewest nonzeros, the entry whose
/// column has the fewest active nonzeros, i.e. the minimal Markowitz cost
/// `(r - 1)(c - 1)` within the sparsest rows. Eliminating it removes the row.
pub fn sparse_rank(matrix: ModMatrix) -> usize {
    let field = PrimeField::new(matrix.modulus()).expect("modulus is prime");
    let cols = matrix.ncols();
    let mut rows: Vec<Option<SparseRow<u64>>> = matrix
        .into_rows()
        .into_iter()
        .map(|r| if r.is_empty() { None } else { Some(r) })
        .collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        if let Some(row) = row {
            for (c, _) in row {
                col_rows[*c].insert(i);
            }
        }
    }

    let mut rank = 0;
    loop {
        let min_len = rows.iter().flatten().map(Vec::len).min();
        let Some(min_len) = min_len else {
            break;
        };
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            if row.len() != min_len {
                continue;
            }
            for (c, _) in row {
                let cost = col_rows[*c].len();
                if best.is_none_or(|(_, _, b)| cost < b) {
                    best = Some((i, *c, cost));
                }
            }
            if best.is_some_and(|(_, _, b)| b <= 1) {
                break;
            }
        }
        let (pivot_row, pivot_col, _) = best.expect("an active row exists");
        let pivot = rows[pivot_row].take().expect("pivot row is active");
        for (c, _) in &pivot {
            col_rows[*c].remove(&pivot_row);
        }
        rank += 1;

        let pivot_val = pivot
            .iter()
            .find(|(c, _)| *c == pivot_col)
            .map(|(_, v)| *v)
            .expect("pivot entry present");
        let pivot_inv = field.inv(pivot_val);
        let targets: Vec<usize> = col_rows[pivot_col].iter().copied().collect();
        for t in targets {
            let row = rows[t].take().expect("target row is active");
            let coeff = row
                .iter()
                .find(|(c, _)| *c == pivot_col)
                .map(|(_, v)| *v)
                .expect("target has the pivot column");
            let factor = field.mul(coeff, pivot_inv);
            let updated = axpy(&field, &row, &factor, &pivot);
            // Column membership changes only on the pivot row's support.
            for (c, _) in &pivot {
                col_rows[*c].remove(&t);
            }
            for (c, _) in &updated {
                col_rows[*c].insert(t);
            }
            if !updated.is_empty() {
                rows[t] = Some(updated);
            }
        }
    }
    rank
}
