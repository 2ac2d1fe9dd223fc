//! Incremental row echelon form over a field, fed one sparse row at a time.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

use super::matrix::SparseRow;
use super::modular::PrimeField;

pub trait Field {
    type Elem: Clone + PartialEq;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

impl Field for PrimeField {
    type Elem = u64;

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::sub(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        PrimeField::neg(self, *a)
    }
    fn inv(&self, a: &u64) -> u64 {
        PrimeField::inv(self, *a)
    }
}

/// The rationals as a [`Field`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a.clone()
    }
    fn inv(&self, a: &Rational) -> Rational {
        Rational::one() / a
    }
}

/// `a - factor * b` for column-sorted sparse rows.
pub(crate) fn axpy<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    factor: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = field.neg(&field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rows kept with distinct leading columns and leading coefficient one.
pub struct StreamingEchelon<F: Field> {
    field: F,
    rows: Vec<SparseRow<F::Elem>>,
    pivot_of: HashMap<usize, usize>,
}

impl<F: Field> StreamingEchelon<F> {
    pub fn new(field: F) -> Self {
        Self {
            field,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored pivots; keeps it and returns `true`
    /// when it is independent of everything seen so far.
    pub fn insert(&mut self, mut row: SparseRow<F::Elem>) -> bool {
        row.retain(|(_, v)| !self.field.is_zero(v));
        loop {
            let Some((lead, lead_val)) = row.first().cloned() else {
                return false;
            };
            match self.pivot_of.get(&lead) {
                Some(&k) => row = axpy(&self.field, &row, &lead_val, &self.rows[k]),
                None => {
                    let inv = self.field.inv(&lead_val);
                    for (_, v) in row.iter_mut() {
                        *v = self.field.mul(v, &inv);
                    }
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }
}

impl StreamingEchelon<Rationals> {
    pub fn rational() -> Self {
        Self::new(Rationals)
    }
}

impl Default for StreamingEchelon<Rationals> {
    fn default() -> Self {
        Self::rational()
    }
}
