//! Test-side oracles written without the library's linear algebra or
//! polynomial routines.

#![allow(dead_code)]

use std::collections::HashMap;

use flatrank::{Rational, SparsePolynomial};
use num_traits::{One, Zero};

/// Pascal's triangle in `u128`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut row = vec![0u128; k as usize + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i) as usize).rev() {
            row[j] += row[j - 1];
        }
    }
    row[k as usize]
}

/// Row-reduction over the rationals with the first nonzero pivot.
pub fn dense_rank(mut a: Vec<Vec<Rational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        let pivot_row: Vec<Rational> = a[rank].iter().map(|v| v * &inv).collect();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        a[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Every exponent vector of length `n` summing to `d`.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponents(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub type Dict = HashMap<Vec<u32>, Rational>;

pub fn to_dict(p: &SparsePolynomial) -> Dict {
    p.terms().map(|(m, c)| (m.exps().to_vec(), c.clone())).collect()
}

/// `∂^β` on a coefficient dictionary, with falling factorials.
pub fn derive(p: &Dict, beta: &[u32]) -> Dict {
    let mut out = Dict::new();
    'terms: for (m, c) in p {
        let mut factor = Rational::one();
        let mut e = m.clone();
        for (i, &b) in beta.iter().enumerate() {
            if e[i] < b {
                continue 'terms;
            }
            for t in 0..b {
                factor *= Rational::from_integer((e[i] - t).into());
            }
            e[i] -= b;
        }
        *out.entry(e).or_insert_with(Rational::zero) += c * factor;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `dim span{x^γ ∂^β p}` from the full dense product matrix, with no
/// deduplication or early exit.
pub fn brute_force_shifted_dim(p: &SparsePolynomial, e: u32, tau: u32) -> usize {
    let n = p.n();
    let dict = to_dict(p);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for beta in exponents(n, e) {
        let d = derive(&dict, &beta);
        for gamma in exponents(n, tau) {
            let mut row = Vec::new();
            for (m, c) in &d {
                let shifted: Vec<u32> = m.iter().zip(&gamma).map(|(a, b)| a + b).collect();
                let next = index.len();
                let j = *index.entry(shifted).or_insert(next);
                row.push((j, c.clone()));
            }
            rows.push(row);
        }
    }
    let cols = index.len();
    let dense = rows
        .into_iter()
        .map(|r| {
            let mut v = vec![Rational::zero(); cols];
            for (j, c) in r {
                v[j] = c;
            }
            v
        })
        .collect();
    dense_rank(dense)
}
