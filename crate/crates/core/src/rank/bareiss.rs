//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

use super::matrix::ExactMatrix;

/// Row echelon form in place; returns `(rank, swap parity, last pivot)`.
///
/// Intermediate entries are minors of the input, so every division is exact.
/// Pivots are chosen with the fewest bits in their column.
fn eliminate(a: &mut [Vec<BigInt>], cols: usize) -> (usize, bool, BigInt) {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut odd = false;
    for c in 0..cols {
        if r == m {
            break;
        }
        let pivot = (r..m)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits());
        let Some(p) = pivot else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            odd = !odd;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                for x in row.iter_mut().skip(c + 1) {
                    if !x.is_zero() {
                        *x = &*x * &prow[c] / &prev;
                    }
                }
                continue;
            }
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &prow[c] * &row[j] - &lead * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, odd, prev)
}

pub fn integer_rank(mut rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    eliminate(&mut rows, cols).0
}

pub fn determinant(m: &ExactMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    for i in 0..n {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| num_integer::Integer::lcm(&acc, v.denom()));
        scale *= lcm;
    }
    let mut rows = m.integer_rows();
    let (rank, odd, last) = eliminate(&mut rows, n);
    if rank < n {
        return Ok(Rational::zero());
    }
    let det = if odd { -last } else { last };
    Ok(Rational::new(det, scale))
}

/// `det(M_(k))` for the leading `k x k` submatrices, `k = 1..=n`.
pub fn leading_principal_minors(m: &ExactMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("leading minors need a square matrix".into()));
    }
    (1..=m.nrows())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            determinant(&m.submatrix(&idx, &idx))
        })
        .collect()
}
