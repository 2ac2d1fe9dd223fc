use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coeff, Rational};

use super::modular::PrimeField;

pub type SparseRow<T> = Vec<(usize, T)>;

/// Row-major sparse matrix over the rationals. Rows are sorted by column and
/// never store zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<Rational>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, row) in m.data.iter_mut().enumerate() {
            row.push((i, Rational::one()));
        }
        m
    }

    /// Builds from rows given as arbitrary `(col, value)` lists; entries in
    /// the same column are summed.
    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseRow<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n);
        for mut row in rows {
            row.sort_by_key(|(c, _)| *c);
            let mut clean: SparseRow<Rational> = Vec::with_capacity(row.len());
            for (c, v) in row {
                if c >= cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column {c} out of range for {cols} columns"
                    )));
                }
                match clean.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
                    _ => clean.push((c, v)),
                }
            }
            clean.retain(|(_, v)| !v.is_zero());
            data.push(clean);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_dense(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged dense rows".into()));
        }
        let rows = entries
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self::from_sparse_rows(cols, rows)
    }

    /// Convenience constructor for integer matrices.
    pub fn from_i64<R: AsRef<[i64]>>(entries: &[R]) -> Self {
        Self::from_dense(
            entries
                .iter()
                .map(|r| r.as_ref().iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseRow<Rational>> {
        self.data.iter()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let row = &self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => row[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = self
            .data
            .iter()
            .map(|row| {
                let mut acc: SparseRow<Rational> = Vec::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        acc.push((*j, a.clone() * b.clone()));
                    }
                }
                acc
            })
            .collect();
        Self::from_sparse_rows(other.cols, rows)
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, -v.clone())).collect())
                .collect(),
        }
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![None; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = Some(k);
        }
        let data = rows
            .iter()
            .map(|&i| {
                self.data[i]
                    .iter()
                    .filter_map(|(c, v)| col_pos[*c].map(|k| (k, v.clone())))
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(cols.len(), data).expect("indices in range")
    }

    pub fn scale_row(&mut self, i: usize, factor: &Rational) {
        assert!(!factor.is_zero(), "row scale must be nonzero");
        for (_, v) in &mut self.data[i] {
            *v = v.clone() * factor.clone();
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Each row multiplied by the lcm of its denominators.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
                let mut dense = vec![BigInt::zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.numer() * (&lcm / v.denom());
                }
                dense
            })
            .collect()
    }

    /// Reduces every entry modulo `p`.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<ModMatrix> {
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut out = Vec::with_capacity(row.len());
            for (c, v) in row {
                let r = field.reduce_rational(v)?;
                if r != 0 {
                    out.push((*c, r));
                }
            }
            data.push(out);
        }
        Ok(ModMatrix {
            p: field.modulus(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.data
            .iter()
            .flatten()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Sparse matrix over `GF(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<u64>>,
}

impl ModMatrix {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub(crate) fn into_rows(self) -> Vec<SparseRow<u64>> {
        self.data
    }
}
