//! Binomial Gessel–Viennot matrices and exact definiteness tests.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::families::complete_symmetric;
use crate::flattening::catalecticant;
use crate::poly::{Coeff, MonomialBasis, Rational};
use crate::rank::{determinant, leading_principal_minors, ExactMatrix, RankEngine, RankReport};

/// `G(a)` with entry `(i, j) = ∏_t binom(a_i[t] + a_j[t], a_i[t])`.
#[derive(Clone, Debug)]
pub struct GVMatrix {
    pub tuples: Vec<Vec<u32>>,
    pub matrix: ExactMatrix,
}

pub fn gv_matrix(a: &[Vec<u32>]) -> Result<GVMatrix> {
    let m = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Err(Error::InvalidParameter("tuples must be nonempty and of length at least 1".into()));
    }
    if let Some(bad) = a.iter().find(|t| t.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "tuple {bad:?} has length {}, expected {m}",
            bad.len()
        )));
    }
    let entry = |x: &[u32], y: &[u32]| {
        let mut prod = num_bigint::BigUint::from(1u32);
        for (&u, &v) in x.iter().zip(y) {
            prod *= binomial((u + v) as u64, u as u64);
        }
        Rational::from_bigint(prod.into())
    };
    let dense: Vec<Vec<Rational>> = a.iter().map(|x| a.iter().map(|y| entry(x, y)).collect()).collect();
    Ok(GVMatrix { tuples: a.to_vec(), matrix: ExactMatrix::from_dense(dense)? })
}

pub fn distinct_count(a: &[Vec<u32>]) -> usize {
    a.iter().collect::<HashSet<_>>().len()
}

pub fn gv_rank(a: &[Vec<u32>], engine: &RankEngine) -> Result<RankReport> {
    engine.rank(&gv_matrix(a)?.matrix)
}

fn require_symmetric(m: &ExactMatrix) -> Result<()> {
    if m.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// All leading principal minors strictly positive.
pub fn is_positive_definite(m: &ExactMatrix) -> Result<bool> {
    require_symmetric(m)?;
    Ok(leading_principal_minors(m)?.iter().all(Signed::is_positive))
}

/// Exact congruence diagonalization `P M Pᵀ = D` with symmetric pivoting.
pub fn is_positive_semidefinite(m: &ExactMatrix) -> Result<bool> {
    require_symmetric(m)?;
    let mut a = m.to_dense();
    let mut active: Vec<usize> = (0..a.len()).collect();
    while !active.is_empty() {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            return Ok(false);
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            // zero diagonal: semidefinite only if the remaining block vanishes
            return Ok(active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero())));
        };
        let p = active.swap_remove(pos);
        let pivot = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &pivot;
            for &j in &active {
                let delta = &factor * &a[p][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    Ok(true)
}

pub fn hadamard(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} ⊙ {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let rows = a
        .rows_iter()
        .zip(b.rows_iter())
        .map(|(ra, rb)| {
            let mut out = Vec::new();
            let mut it = rb.iter().peekable();
            for (j, v) in ra {
                while it.peek().is_some_and(|(k, _)| k < j) {
                    it.next();
                }
                if let Some((k, w)) = it.peek() {
                    if k == j {
                        out.push((*j, v * w));
                    }
                }
            }
            out
        })
        .collect();
    ExactMatrix::from_sparse_rows(a.ncols(), rows)
}

/// For symmetric semidefinite `A` whose columns in `idx` are independent,
/// reports whether the principal block `A[idx, idx]` is nonsingular.
pub fn principal_submatrix_rank_check(a: &ExactMatrix, idx: &[usize], engine: &RankEngine) -> Result<bool> {
    require_symmetric(a)?;
    if idx.iter().any(|&i| i >= a.nrows()) || idx.iter().collect::<HashSet<_>>().len() != idx.len() {
        return Err(Error::Precondition(format!("index set {idx:?} is not a set of row indices")));
    }
    if !is_positive_semidefinite(a)? {
        return Err(Error::Precondition("matrix is not positive semidefinite".into()));
    }
    let all: Vec<usize> = (0..a.nrows()).collect();
    let columns = a.submatrix(&all, idx);
    if engine.rank(&columns)?.rank != idx.len() {
        return Err(Error::Precondition(format!("columns {idx:?} are linearly dependent")));
    }
    Ok(!determinant(&a.submatrix(idx, idx))?.is_zero())
}

/// Checks that the middle catalecticant of `h_{n,2k}`, with row `β` divided
/// by `β!`, is the nonsingular matrix `G(β : |β| = k)`.
pub fn hnd_gv_crosscheck(n: usize, k: usize) -> Result<bool> {
    let cat = catalecticant(&complete_symmetric(n, 2 * k)?, k)?;
    let mut scaled = cat.matrix.clone();
    for (i, beta) in cat.operators.iter().enumerate() {
        let f = Rational::from_bigint(beta.factorial().into());
        scaled.scale_row(i, &(Rational::from_int(1) / f));
    }
    let basis = MonomialBasis::new(n, k)?;
    let tuples: Vec<Vec<u32>> = basis.iter().map(|b| b.exps().to_vec()).collect();
    let gv = gv_matrix(&tuples)?;
    Ok(scaled == gv.matrix && !determinant(&gv.matrix)?.is_zero())
}

/// Summary used by the command line.
#[derive(Clone, Debug, Serialize)]
pub struct GvSummary {
    pub rank: usize,
    pub distinct: usize,
    pub definite: bool,
    pub semidefinite: bool,
    pub report: RankReport,
}

pub fn gv_summary(a: &[Vec<u32>], engine: &RankEngine) -> Result<GvSummary> {
    let g = gv_matrix(a)?;
    let report = engine.rank(&g.matrix)?;
    Ok(GvSummary {
        rank: report.rank,
        distinct: distinct_count(a),
        definite: is_positive_definite(&g.matrix)?,
        semidefinite: is_positive_semidefinite(&g.matrix)?,
        report,
    })
}
