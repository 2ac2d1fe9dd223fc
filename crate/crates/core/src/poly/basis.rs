use std::cmp::Ordering;
use std::collections::HashMap;

use crate::combinatorics::monomial_count_u128;
use crate::error::{Error, Result};

use super::MultiIndex;

/// Default cap on the number of monomials a basis may hold.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Graded reverse lexicographic comparison.
///
/// Higher degree is greater; within a degree, `a > b` when the last nonzero
/// entry of `a - b` is negative.
pub fn grevlex_cmp(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.exps().iter().zip(b.exps()).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// All degree-`d` monomials in `n` variables, listed in descending grevlex
/// order, with the inverse position map.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    monomials: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_cap(n, d, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(n: usize, d: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "a monomial basis needs at least one variable".into(),
            ));
        }
        let size = monomial_count_u128(n, d);
        if size > cap as u128 {
            return Err(Error::BasisTooLarge { size, cap });
        }
        let mut monomials = Vec::with_capacity(size as usize);
        let mut exps = vec![0u32; n];
        enumerate(&mut exps, 0, d as u32, &mut monomials);
        monomials.sort_by(|a, b| grevlex_cmp(b, a));
        let positions = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(Self {
            n,
            d,
            monomials,
            positions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.monomials[i]
    }

    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        self.positions.get(m).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.monomials.iter()
    }
}

fn enumerate(exps: &mut Vec<u32>, at: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if at + 1 == exps.len() {
        exps[at] = remaining;
        out.push(MultiIndex::new(exps.clone()));
        exps[at] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        exps[at] = e;
        enumerate(exps, at + 1, remaining - e, out);
    }
    exps[at] = 0;
}
