use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::{grevlex_cmp, Coeff, Gaussian, MultiIndex, Rational};

/// Sparse multivariate polynomial in a fixed number of variables.
///
/// Stored coefficients are never zero; the zero polynomial has no terms and
/// counts as homogeneous of every degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Coeff> {
    n: usize,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, C::one())
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    /// The variable `x_{i+1}` (zero-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for {n} variables");
        Self::monomial(MultiIndex::unit(n, i), C::one())
    }

    pub fn monomial(m: MultiIndex, c: C) -> Self {
        let n = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { n, terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            if m.len() != n {
                return Err(Error::ArityMismatch {
                    left: n,
                    right: m.len(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(MultiIndex::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// The common degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::InvalidParameter(
                "the zero polynomial has no definite degree".into(),
            ));
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.degree().unwrap_or(0))
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a + b, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `x^m`.
    pub fn mul_monomial(&self, m: &MultiIndex) -> Self {
        assert_eq!(m.len(), self.n);
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(a, c)| (a + m, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The iterated partial derivative `∂^{|β|} p / ∂x^β`, keeping every
    /// falling-factorial factor.
    pub fn diff(&self, beta: &MultiIndex) -> Self {
        assert_eq!(beta.len(), self.n, "derivative multi-index has wrong length");
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let Some(rest) = m.checked_sub(beta) else {
                continue;
            };
            let mut factor = BigInt::one();
            for (&e, &b) in m.exps().iter().zip(beta.exps()) {
                for t in 0..b {
                    factor *= e - t;
                }
            }
            out.add_term(rest, c.clone() * C::from_bigint(factor));
        }
        out
    }

    pub fn diff_var(&self, i: usize) -> Self {
        self.diff(&MultiIndex::unit(self.n, i))
    }

    /// Replaces `x_i` by `images[i]` and expands.
    pub fn substitute(&self, images: &[Poly<C>]) -> Result<Poly<C>> {
        if images.len() != self.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.n,
            None => 0,
        };
        for img in images {
            if img.n != target {
                return Err(Error::ArityMismatch {
                    left: target,
                    right: img.n,
                });
            }
        }
        let mut powers: Vec<Vec<Poly<C>>> = vec![vec![Poly::one(target)]; self.n];
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Regards the polynomial as one in `n_total >= n` variables.
    pub fn embed(&self, n_total: usize) -> Result<Self> {
        if n_total < self.n {
            return Err(Error::InvalidParameter(format!(
                "cannot embed {} variables into {n_total}",
                self.n
            )));
        }
        let extra = n_total - self.n;
        Ok(Self {
            n: n_total,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.padded(extra), c.clone()))
                .collect(),
        })
    }

    /// Renames `x_i` to `x_{perm[i]}`; `perm` must be a permutation.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; self.n];
                for (i, &e) in m.exps().iter().enumerate() {
                    exps[perm[i]] = e;
                }
                (MultiIndex::new(exps), c.clone())
            })
            .collect();
        Self { n: self.n, terms }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Greatest term in grevlex order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &C)> {
        self.terms.iter().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if self.n != divisor.n || divisor.is_zero() {
            return None;
        }
        let (lead_m, lead_c) = divisor.leading_term()?;
        let (lead_m, lead_c) = (lead_m.clone(), lead_c.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        while let Some((m, c)) = rem.leading_term() {
            let shift = m.checked_sub(&lead_m)?;
            let factor = c.clone() / lead_c.clone();
            let step = divisor.mul_monomial(&shift).scale(&factor);
            rem = &rem - &step;
            quot.add_term(shift, factor);
        }
        Some(quot)
    }
}

impl Poly<Rational> {
    pub fn to_gaussian(&self) -> Poly<Gaussian> {
        self.map_coeffs(|c| Gaussian::new(c.clone(), Rational::zero()))
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;

    /// Panics on arity mismatch; use [`Poly::try_add`] to handle it.
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        self.try_add(rhs).expect("poly add")
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;

    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self.try_sub(rhs).expect("poly sub")
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;

    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        self.try_mul(rhs).expect("poly mul")
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;

    fn neg(self) -> Poly<C> {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poly")
            .field("n", &self.n)
            .field("terms", &self.terms)
            .finish()
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::SparsePolynomial;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn x(n: usize, i: usize) -> SparsePolynomial {
        Poly::var(n, i)
    }

    #[test]
    fn add_cancels_to_zero() {
        let p = x(2, 0);
        let s = &p + &(-&p);
        assert!(s.is_zero());
        assert!(s.is_homogeneous());
    }

    #[test]
    fn add_squares() {
        let s = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&MultiIndex::from([2, 0])), q(1));
        assert_eq!(s.coeff(&MultiIndex::from([0, 2])), q(1));
    }

    #[test]
    fn arity_mismatch_errors() {
        assert_eq!(
            x(2, 0).try_add(&x(3, 0)),
            Err(Error::ArityMismatch { left: 2, right: 3 })
        );
        assert!(x(2, 0).try_mul(&x(3, 0)).is_err());
        assert!(x(2, 0).substitute(&[x(1, 0)]).is_err());
        assert!(x(2, 0).substitute(&[x(1, 0), x(2, 0)]).is_err());
    }

    #[test]
    fn binomial_square() {
        let l = &x(2, 0) + &x(2, 1);
        let sq = &l * &l;
        assert_eq!(sq.coeff(&MultiIndex::from([2, 0])), q(1));
        assert_eq!(sq.coeff(&MultiIndex::from([1, 1])), q(2));
        assert_eq!(sq.coeff(&MultiIndex::from([0, 2])), q(1));
        assert_eq!(sq.len(), 3);
        assert_eq!(&Poly::one(2) * &sq, sq);
    }

    #[test]
    fn q2_squared() {
        let q2 = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        let f22 = &q2 * &q2;
        // (x1^2 + x2^2)^2 = x1^4 + 2 x1^2 x2^2 + x2^4
        assert_eq!(f22.len(), 3);
        assert_eq!(f22.coeff(&MultiIndex::from([4, 0])), q(1));
        assert_eq!(f22.coeff(&MultiIndex::from([2, 2])), q(2));
        assert_eq!(f22.coeff(&MultiIndex::from([0, 4])), q(1));
        assert_eq!(f22.degree(), Some(4));
    }

    #[test]
    fn derivatives() {
        let q2 = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        assert_eq!(q2.diff(&MultiIndex::from([1, 0])), x(2, 0).scale(&q(2)));
        let h22 = &(&x(2, 0).pow(2) + &(&x(2, 0) * &x(2, 1))) + &x(2, 1).pow(2);
        let d = h22.diff(&MultiIndex::from([1, 0]));
        assert_eq!(d, &x(2, 0).scale(&q(2)) + &x(2, 1));
        // over-differentiation
        assert!(q2.diff(&MultiIndex::from([3, 0])).is_zero());
        // x^5 -> d^3 = 60 x^2
        let d3 = x(1, 0).pow(5).diff(&MultiIndex::from([3]));
        assert_eq!(d3, x(1, 0).pow(2).scale(&q(60)));
    }

    #[test]
    fn substitution() {
        let p = &x(2, 0) * &x(2, 1);
        let y = x(1, 0);
        assert_eq!(p.substitute(&[y.clone(), y.clone()]).unwrap(), y.pow(2));
        // h_{3,2}(x1, x2, x1) = 3x1^2 + 2x1x2 + x2^2: x1^2, x3^2 and x1*x3 all land on x1^2
        let v: Vec<_> = (0..3).map(|i| x(3, i)).collect();
        let mut h32 = SparsePolynomial::zero(3);
        for i in 0..3 {
            for j in i..3 {
                h32 = &h32 + &(&v[i] * &v[j]);
            }
        }
        let img = h32.substitute(&[x(2, 0), x(2, 1), x(2, 0)]).unwrap();
        let expected = &(&x(2, 0).pow(2).scale(&q(3)) + &(&x(2, 0) * &x(2, 1)).scale(&q(2)))
            + &x(2, 1).pow(2);
        assert_eq!(img, expected);
        let ident: Vec<_> = (0..3).map(|i| x(3, i)).collect();
        assert_eq!(h32.substitute(&ident).unwrap(), h32);
    }

    #[test]
    fn exact_division() {
        let q2 = &x(2, 0).pow(2) + &x(2, 1).pow(2);
        let prod = &q2 * &(&x(2, 0) + &x(2, 1).scale(&q(3)));
        assert_eq!(
            prod.div_exact(&q2).unwrap(),
            &x(2, 0) + &x(2, 1).scale(&q(3))
        );
        assert!(x(2, 0).pow(3).div_exact(&q2).is_none());
        let sum = &prod + &x(2, 0).pow(3);
        assert!(sum.div_exact(&q2).is_none());
    }

    #[test]
    fn homogeneity() {
        let p = &x(2, 0) + &x(2, 1).pow(2);
        assert!(!p.is_homogeneous());
        assert_eq!(p.homogeneous_degree(), Err(Error::NotHomogeneous));
        assert!(SparsePolynomial::zero(3).homogeneous_degree().is_err());
    }

    #[test]
    fn display() {
        let p = &x(2, 0).pow(2).scale(&q(2)) + &x(2, 1);
        assert_eq!(p.to_string(), "(2)*x1^2 + x2");
    }
}
