use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;

use crate::combinatorics::factorial;

/// Exponent vector of a monomial or a differential operator `∂^β`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exps: Vec<u32>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            exps: vec![0; n],
            degree: 0,
        }
    }

    /// The unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Self { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// `self - other` when componentwise nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        let mut exps = Vec::with_capacity(self.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Self {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `β! = β_1! ⋯ β_n!`.
    pub fn factorial(&self) -> BigUint {
        self.exps.iter().map(|&e| factorial(e as u64)).product()
    }

    /// Appends `extra` zero exponents.
    pub fn padded(&self, extra: usize) -> Self {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat_n(0, extra));
        Self {
            exps,
            degree: self.degree,
        }
    }

    /// Whether no exponent exceeds one.
    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), rhs.len());
        MultiIndex {
            exps: self.exps.iter().zip(&rhs.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + rhs.degree,
        }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(exps: Vec<u32>) -> Self {
        Self::new(exps)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(exps: [u32; N]) -> Self {
        Self::new(exps.to_vec())
    }
}
