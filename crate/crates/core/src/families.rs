//! Generators for the explicit polynomials and specialization matrices.
//!
//! Variable conventions: `perm`/`det` use `x_{ij} -> i*m + j`; `pow` uses
//! `X[i][j] -> i*n + j`; `imm` is slot-major, `X_t[i][j] -> t*n^2 + i*n + j`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binomial, monomial_count_u128};
use crate::error::{Error, Result};
use crate::poly::{Coeff, Gaussian, MonomialBasis, MultiIndex, Poly, Rational, SparsePolynomial};

/// Default maximum number of terms a generator may produce.
pub const DEFAULT_TERM_CAP: usize = 500_000;

fn check_cap(what: &'static str, size: u128, cap: usize) -> Result<()> {
    if size > cap as u128 {
        Err(Error::TooLarge { what, size, cap })
    } else {
        Ok(())
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

fn one() -> Rational {
    Rational::one()
}

/// `x_1^d + ... + x_n^d`.
pub fn power_sum(n: usize, d: usize) -> Result<SparsePolynomial> {
    require(n >= 1 && d >= 1, "power_sum needs n >= 1 and d >= 1")?;
    Poly::from_terms(
        n,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = d as u32;
            (MultiIndex::new(e), one())
        }),
    )
}

/// `(x_1 + ... + x_n)^d`.
pub fn linear_form_power(n: usize, d: usize) -> Result<SparsePolynomial> {
    require(n >= 1, "linear_form_power needs n >= 1")?;
    check_cap("linear form power", monomial_count_u128(n, d), DEFAULT_TERM_CAP)?;
    Ok(power_sum(n, 1)?.pow(d as u32))
}

/// Sum of every degree-`d` monomial in `n` variables.
pub fn complete_symmetric(n: usize, d: usize) -> Result<SparsePolynomial> {
    complete_symmetric_capped(n, d, DEFAULT_TERM_CAP)
}

fn complete_symmetric_capped(n: usize, d: usize, cap: usize) -> Result<SparsePolynomial> {
    require(n >= 1, "complete_symmetric needs n >= 1")?;
    let basis = MonomialBasis::with_cap(n, d, cap)?;
    Poly::from_terms(n, basis.iter().map(|m| (m.clone(), one())))
}

/// Sum of the squarefree degree-`d` monomials; zero when `d > n`.
pub fn elementary_symmetric(n: usize, d: usize) -> Result<SparsePolynomial> {
    require(n >= 1, "elementary_symmetric needs n >= 1")?;
    if d > n {
        return Ok(Poly::zero(n));
    }
    check_cap("elementary symmetric", binomial(n as u64, d as u64).try_into().unwrap_or(u128::MAX), DEFAULT_TERM_CAP)?;
    let mut terms = Vec::new();
    let mut chosen = Vec::with_capacity(d);
    subsets(n, d, 0, &mut chosen, &mut |s| {
        let mut e = vec![0; n];
        for &i in s {
            e[i] = 1;
        }
        terms.push((MultiIndex::new(e), one()));
    });
    Poly::from_terms(n, terms)
}

fn subsets(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..n {
        if n - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        subsets(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// `q_n^k` with `q_n = x_1^2 + ... + x_n^2`.
pub fn f_family(n: usize, k: usize) -> Result<SparsePolynomial> {
    require(n >= 1 && k >= 1, "f needs n >= 1 and k >= 1")?;
    check_cap("f", monomial_count_u128(n, k), DEFAULT_TERM_CAP)?;
    Ok(power_sum(n, 2)?.pow(k as u32))
}

/// `ℓ_n · q_n^k`.
pub fn ftilde_family(n: usize, k: usize) -> Result<SparsePolynomial> {
    let f = f_family(n, k)?;
    check_cap("ftilde", monomial_count_u128(n, 2 * k + 1), DEFAULT_TERM_CAP)?;
    Ok(&power_sum(n, 1)? * &f)
}

/// `Σ_{|α| = d} (α_1 x_1 + ... + α_n x_n)^d`.
pub fn bierman(n: usize, d: usize) -> Result<SparsePolynomial> {
    bierman_capped(n, d, DEFAULT_TERM_CAP)
}

fn bierman_capped(n: usize, d: usize, cap: usize) -> Result<SparsePolynomial> {
    require(n >= 1 && d >= 1, "bierman needs n >= 1 and d >= 1")?;
    let count = monomial_count_u128(n, d);
    check_cap("bierman", count.saturating_mul(count), cap.saturating_mul(cap))?;
    let basis = MonomialBasis::with_cap(n, d, cap)?;
    let mut out = Poly::zero(n);
    for alpha in basis.iter() {
        let form = Poly::from_terms(
            n,
            alpha
                .exps()
                .iter()
                .enumerate()
                .map(|(i, &a)| (MultiIndex::unit(n, i), Rational::from_int(a as i64))),
        )?;
        out = &out + &form.pow(d as u32);
    }
    Ok(out)
}

fn permutations(m: usize) -> Vec<(Vec<usize>, bool)> {
    // (permutation, is_odd)
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let m = used.len();
        if prefix.len() == m {
            out.push((prefix.clone(), odd));
            return;
        }
        for v in 0..m {
            if used[v] {
                continue;
            }
            // inversions added by placing v after the current prefix
            let inv = prefix.iter().filter(|&&u| u > v).count();
            used[v] = true;
            prefix.push(v);
            rec(prefix, used, odd ^ (inv % 2 == 1), out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], false, &mut out);
    out
}

fn factorial_u128(m: usize) -> u128 {
    (1..=m as u128).try_fold(1u128, |acc, i| acc.checked_mul(i)).unwrap_or(u128::MAX)
}

fn perm_or_det(m: usize, signed: bool, cap: usize) -> Result<SparsePolynomial> {
    require(m >= 1, "matrix size must be at least 1")?;
    check_cap(if signed { "determinant" } else { "permanent" }, factorial_u128(m), cap)?;
    let n = m * m;
    let terms = permutations(m).into_iter().map(|(sigma, odd)| {
        let mut e = vec![0; n];
        for (i, &j) in sigma.iter().enumerate() {
            e[i * m + j] = 1;
        }
        let c = if signed && odd { -one() } else { one() };
        (MultiIndex::new(e), c)
    });
    Poly::from_terms(n, terms)
}

pub fn permanent(m: usize) -> Result<SparsePolynomial> {
    perm_or_det(m, false, DEFAULT_TERM_CAP)
}

pub fn determinant(m: usize) -> Result<SparsePolynomial> {
    perm_or_det(m, true, DEFAULT_TERM_CAP)
}

/// Sum over closed index walks `i_1 -> i_2 -> ... -> i_d -> i_1` of the
/// product of the entries `slot(t)[i_t][i_{t+1}]`.
fn trace_walks(n: usize, d: usize, nvars: usize, var: impl Fn(usize, usize, usize) -> usize) -> Result<SparsePolynomial> {
    let mut out = Poly::zero(nvars);
    let mut idx = vec![0usize; d];
    loop {
        let mut e = vec![0u32; nvars];
        for t in 0..d {
            e[var(t, idx[t], idx[(t + 1) % d])] += 1;
        }
        out.add_term(MultiIndex::new(e), one());
        // odometer
        let mut t = 0;
        loop {
            if t == d {
                return Ok(out);
            }
            idx[t] += 1;
            if idx[t] < n {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// `trace(X_1 ⋯ X_d)` for `d` generic `n x n` matrices.
pub fn imm(n: usize, d: usize) -> Result<SparsePolynomial> {
    imm_capped(n, d, DEFAULT_TERM_CAP)
}

fn imm_capped(n: usize, d: usize, cap: usize) -> Result<SparsePolynomial> {
    require(n >= 1 && d >= 1, "imm needs n >= 1 and d >= 1")?;
    check_cap("imm", (n as u128).saturating_pow(d as u32), cap)?;
    trace_walks(n, d, d * n * n, |t, i, j| t * n * n + i * n + j)
}

/// `trace(X^d)` for one generic `n x n` matrix.
pub fn pow_trace(n: usize, d: usize) -> Result<SparsePolynomial> {
    pow_trace_capped(n, d, DEFAULT_TERM_CAP)
}

fn pow_trace_capped(n: usize, d: usize, cap: usize) -> Result<SparsePolynomial> {
    require(n >= 1 && d >= 1, "pow needs n >= 1 and d >= 1")?;
    check_cap("pow", (n as u128).saturating_pow(d as u32), cap)?;
    trace_walks(n, d, n * n, |_, i, j| i * n + j)
}

/// Homogeneous polynomial with every degree-`d` coefficient drawn uniformly
/// from `[-bound, bound]`.
pub fn random_homogeneous(n: usize, d: usize, bound: i64, seed: u64) -> Result<SparsePolynomial> {
    require(n >= 1 && bound >= 1, "random polynomial needs n >= 1 and bound >= 1")?;
    let basis = MonomialBasis::with_cap(n, d, DEFAULT_TERM_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Poly::from_terms(
        n,
        basis
            .iter()
            .map(|m| (m.clone(), Rational::from_int(rng.gen_range(-bound..=bound))))
            .collect::<Vec<_>>(),
    )
}

/// Matrix whose entries are polynomials over one shared variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix<C: Coeff> {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly<C>>,
}

impl<C: Coeff> SymbolicMatrix<C> {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        Self {
            rows,
            cols,
            nvars,
            entries: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Poly::one(nvars));
        }
        m
    }

    /// `n x n` matrix of fresh variables `offset + i*n + j`.
    pub fn generic(n: usize, nvars: usize, offset: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, Poly::var(nvars, offset + i * n + j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<C>) {
        assert_eq!(p.n(), self.nvars, "entry arity must match the matrix");
        self.entries[i * self.cols + j] = p;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Poly<C>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
        }
        let mut acc = Poly::zero(self.nvars);
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        Ok(acc)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Poly<C>] {
        &self.entries
    }
}

/// The arrow-shaped matrix `Q_m` whose even power traces are `2 q_n^k`.
///
/// For `n = 2m + 1` it is `(m+2) x (m+2)` with first row
/// `(0, y_1^+, ..., y_m^+, x_n)` and first column `(0, y_1^-, ..., y_m^-, x_n)`,
/// where `y_j^± = x_{2j-1} ± i x_{2j}`; for `n = 2m` the last row and column
/// are dropped.
pub fn qm_matrix(n: usize) -> Result<SymbolicMatrix<Gaussian>> {
    require(n >= 1, "Q_m needs n >= 1")?;
    let m = n / 2;
    let odd = n % 2 == 1;
    let size = if odd { m + 2 } else { m + 1 };
    let mut q = SymbolicMatrix::zeros(size, size, n);
    let i_unit = Gaussian::new(Rational::zero(), Rational::one());
    for j in 0..m {
        let re = Poly::<Gaussian>::var(n, 2 * j);
        let im = Poly::<Gaussian>::var(n, 2 * j + 1).scale(&i_unit);
        q.set(0, j + 1, &re + &im);
        q.set(j + 1, 0, &re - &im);
    }
    if odd {
        q.set(0, size - 1, Poly::var(n, n - 1));
        q.set(size - 1, 0, Poly::var(n, n - 1));
    }
    Ok(q)
}

/// Size of the matrix-powering polynomial that specializes to `f_{n,k}`.
pub fn pow_size_for(n: usize) -> usize {
    if n % 2 == 1 {
        n / 2 + 2
    } else {
        n / 2 + 1
    }
}

/// Checks `Pow^{2k}(Q_m) = 2 f_{n,k}` by substituting `Q_m` into the
/// expanded matrix-powering polynomial.
pub fn verify_pow_specialization(n: usize, k: usize) -> Result<bool> {
    require(k >= 1, "k must be at least 1")?;
    let q = qm_matrix(n)?;
    let size = q.rows();
    let pow = pow_trace(size, 2 * k)?.to_gaussian();
    let specialized = pow.substitute(q.entries())?;
    let expected = f_family(n, k)?.to_gaussian().scale(&Gaussian::from_int(2));
    Ok(specialized == expected)
}

/// Whether `trace(Q_m^{2k+1})` vanishes identically.
pub fn qm_odd_trace_vanishes(n: usize, k: usize) -> Result<bool> {
    Ok(qm_matrix(n)?.pow(2 * k as u32 + 1)?.trace()?.is_zero())
}

/// Sets every slot of `IMM^m_n` to `diag(y_1, ..., y_{m^2}, 0, ..., 0)` and
/// checks the result is the power sum `y_1^m + ... + y_{m^2}^m`.
pub fn verify_imm_diagonal_specialization(m: usize, n: usize) -> Result<bool> {
    require(m >= 1 && m * m <= n, "need m >= 1 and m^2 <= n")?;
    let target = m * m;
    let p = imm(n, m)?;
    let mut images = Vec::with_capacity(p.n());
    for _slot in 0..m {
        for i in 0..n {
            for j in 0..n {
                images.push(if i == j && i < target {
                    Poly::var(target, i)
                } else {
                    Poly::zero(target)
                });
            }
        }
    }
    Ok(p.substitute(&images)? == power_sum(target, m)?)
}

/// Named family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    PowerSum { n: usize, d: usize },
    LinearPower { n: usize, d: usize },
    Complete { n: usize, d: usize },
    Elementary { n: usize, d: usize },
    F { n: usize, k: usize },
    Ftilde { n: usize, k: usize },
    Bierman { n: usize, d: usize },
    Perm { m: usize },
    Det { m: usize },
    Imm { n: usize, d: usize },
    Pow { n: usize, d: usize },
    Generic { n: usize, d: usize, seed: u64 },
}

/// Loose parameter bag as parsed from the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyArgs {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub params: &'static [&'static str],
    pub description: &'static str,
}

pub fn family_catalog() -> Vec<FamilyInfo> {
    vec![
        FamilyInfo { name: "power-sum", aliases: &["p"], params: &["n", "d"], description: "x1^d + ... + xn^d" },
        FamilyInfo { name: "linear-power", aliases: &["lpow"], params: &["n", "d"], description: "(x1 + ... + xn)^d" },
        FamilyInfo { name: "complete", aliases: &["h"], params: &["n", "d"], description: "complete symmetric h_{n,d}" },
        FamilyInfo { name: "elementary", aliases: &["e"], params: &["n", "d"], description: "elementary symmetric e_{n,d}" },
        FamilyInfo { name: "f", aliases: &[], params: &["n", "k"], description: "(x1^2 + ... + xn^2)^k" },
        FamilyInfo { name: "ftilde", aliases: &[], params: &["n", "k"], description: "(x1 + ... + xn)(x1^2 + ... + xn^2)^k" },
        FamilyInfo { name: "bierman", aliases: &[], params: &["n", "d"], description: "sum over |a|=d of (a.x)^d" },
        FamilyInfo { name: "perm", aliases: &[], params: &["m"], description: "permanent of an m x m generic matrix" },
        FamilyInfo { name: "det", aliases: &[], params: &["m"], description: "determinant of an m x m generic matrix" },
        FamilyInfo { name: "imm", aliases: &[], params: &["n", "d"], description: "trace(X1 ... Xd), n x n slots" },
        FamilyInfo { name: "pow", aliases: &[], params: &["n", "d"], description: "trace(X^d), n x n" },
        FamilyInfo { name: "generic", aliases: &[], params: &["n", "d", "seed"], description: "random integer coefficients in [-100, 100]" },
    ]
}

/// Coefficient bound for [`Family::Generic`].
pub const GENERIC_BOUND: i64 = 100;

impl Family {
    pub fn from_name(name: &str, args: &FamilyArgs) -> Result<Self> {
        let need = |v: Option<usize>, p: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("family {name} needs --{p}")))
        };
        let fam = match name {
            "power-sum" | "p" => Family::PowerSum { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "linear-power" | "lpow" => Family::LinearPower { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "complete" | "h" => Family::Complete { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "elementary" | "e" => Family::Elementary { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "f" => Family::F { n: need(args.n, "n")?, k: need(args.k, "k")? },
            "ftilde" => Family::Ftilde { n: need(args.n, "n")?, k: need(args.k, "k")? },
            "bierman" => Family::Bierman { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "perm" => Family::Perm { m: need(args.m, "m")? },
            "det" => Family::Det { m: need(args.m, "m")? },
            "imm" => Family::Imm { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "pow" => Family::Pow { n: need(args.n, "n")?, d: need(args.d, "d")? },
            "generic" => Family::Generic {
                n: need(args.n, "n")?,
                d: need(args.d, "d")?,
                seed: args.seed.unwrap_or(0),
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family {other:?}; see `family --list`"
                )))
            }
        };
        Ok(fam)
    }

    pub fn degree(&self) -> usize {
        match *self {
            Family::PowerSum { d, .. }
            | Family::LinearPower { d, .. }
            | Family::Complete { d, .. }
            | Family::Elementary { d, .. }
            | Family::Bierman { d, .. }
            | Family::Imm { d, .. }
            | Family::Pow { d, .. }
            | Family::Generic { d, .. } => d,
            Family::F { k, .. } => 2 * k,
            Family::Ftilde { k, .. } => 2 * k + 1,
            Family::Perm { m } | Family::Det { m } => m,
        }
    }

    pub fn variables(&self) -> usize {
        match *self {
            Family::PowerSum { n, .. }
            | Family::LinearPower { n, .. }
            | Family::Complete { n, .. }
            | Family::Elementary { n, .. }
            | Family::F { n, .. }
            | Family::Ftilde { n, .. }
            | Family::Bierman { n, .. }
            | Family::Generic { n, .. } => n,
            Family::Perm { m } | Family::Det { m } => m * m,
            Family::Imm { n, d } => d * n * n,
            Family::Pow { n, .. } => n * n,
        }
    }

    pub fn build(&self) -> Result<SparsePolynomial> {
        self.build_capped(DEFAULT_TERM_CAP)
    }

    pub fn build_capped(&self, cap: usize) -> Result<SparsePolynomial> {
        match *self {
            Family::PowerSum { n, d } => power_sum(n, d),
            Family::LinearPower { n, d } => {
                check_cap("linear form power", monomial_count_u128(n, d), cap)?;
                linear_form_power(n, d)
            }
            Family::Complete { n, d } => complete_symmetric_capped(n, d, cap),
            Family::Elementary { n, d } => elementary_symmetric(n, d),
            Family::F { n, k } => {
                check_cap("f", monomial_count_u128(n, k), cap)?;
                f_family(n, k)
            }
            Family::Ftilde { n, k } => {
                check_cap("ftilde", monomial_count_u128(n, 2 * k + 1), cap)?;
                ftilde_family(n, k)
            }
            Family::Bierman { n, d } => bierman_capped(n, d, cap),
            Family::Perm { m } => perm_or_det(m, false, cap),
            Family::Det { m } => perm_or_det(m, true, cap),
            Family::Imm { n, d } => imm_capped(n, d, cap),
            Family::Pow { n, d } => pow_trace_capped(n, d, cap),
            Family::Generic { n, d, seed } => {
                check_cap("generic", monomial_count_u128(n, d), cap)?;
                random_homogeneous(n, d, GENERIC_BOUND, seed)
            }
        }
    }
}
