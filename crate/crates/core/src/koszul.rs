//! Koszul flattenings `p^{∧q}_{s,d-s}` and the border-rank bounds built on
//! them.
//!
//! Sign convention: `x_k ∧ x_I = (-1)^{#{i ∈ I : i < k}} x_{sort(k ∪ I)}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, monomial_count};
use crate::error::{Error, Result};
use crate::poly::{Coeff, MonomialBasis, MultiIndex, Rational, SparsePolynomial};
use crate::rank::{ExactMatrix, RankEngine, RankReport, SparseRow};

/// Default cap on either side of a Koszul matrix.
pub const DEFAULT_KOSZUL_CAP: usize = 200_000;

/// Strictly increasing, zero-based variable indices `i_1 < ... < i_q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= n) {
            return Err(Error::InvalidParameter(format!(
                "wedge indices {indices:?} must be strictly increasing and below {n}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    /// `x_k ∧ x_I` as `(sign, sorted index)`, or `None` if `k ∈ I`.
    pub fn wedge_left(&self, k: usize) -> Option<(bool, WedgeIndex)> {
        match self.0.binary_search(&k) {
            Ok(_) => None,
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, k);
                Some((pos % 2 == 1, WedgeIndex(out)))
            }
        }
    }

    /// Indices in `0..n` not in this wedge, in increasing order.
    pub fn complement(&self, n: usize) -> WedgeIndex {
        WedgeIndex((0..n).filter(|&i| !self.contains(i)).collect())
    }

    /// Whether `x_I ∧ x_{I^c}` is minus the volume form.
    pub fn complement_sign(&self) -> bool {
        // inversions of the sequence (I, I^c)
        let inversions: usize = self.0.iter().enumerate().map(|(pos, &i)| i - pos).sum();
        inversions % 2 == 1
    }
}

impl fmt::Debug for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|i| format!("x{}", i + 1)).collect();
        if names.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", names.join("∧"))
        }
    }
}

/// All `q`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, q: usize) -> Vec<WedgeIndex> {
    fn rec(n: usize, q: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<WedgeIndex>) {
        if cur.len() == q {
            out.push(WedgeIndex(cur.clone()));
            return;
        }
        for i in start..n {
            if n - i < q - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, q, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q <= n {
        rec(n, q, 0, &mut Vec::with_capacity(q), &mut out);
    }
    out
}

/// Matrix of `x_I ⊗ ∂^β ↦ Σ_{k ∉ I} (x_k ∧ x_I) ⊗ ∂_k ∂^β p`.
///
/// Rows are `(I, β)` and columns `(K, γ)`, wedge-major in both cases.
#[derive(Clone, Debug)]
pub struct KoszulMatrix {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub q: usize,
    pub row_wedges: Vec<WedgeIndex>,
    pub operators: MonomialBasis,
    pub col_wedges: Vec<WedgeIndex>,
    pub targets: MonomialBasis,
    pub matrix: ExactMatrix,
}

impl KoszulMatrix {
    pub fn row_index(&self, wedge: usize, operator: usize) -> usize {
        wedge * self.operators.len() + operator
    }

    pub fn col_index(&self, wedge: usize, target: usize) -> usize {
        wedge * self.targets.len() + target
    }
}

/// `(binom(N,q) binom(N+s-1,s), binom(N,q+1) binom(N+d-s-2,d-s-1))`.
pub fn koszul_dimensions(n: usize, d: usize, s: usize, q: usize) -> (BigUint, BigUint) {
    let rows = binomial(n as u64, q as u64) * monomial_count(n, s);
    let cols = binomial(n as u64, q as u64 + 1) * monomial_count(n, d - s - 1);
    (rows, cols)
}

fn check_dims(n: usize, d: usize, s: usize, q: usize, cap: usize) -> Result<()> {
    let (rows, cols) = koszul_dimensions(n, d, s, q);
    let big = rows.max(cols);
    if big > BigUint::from(cap) {
        return Err(Error::TooLarge {
            what: "Koszul flattening",
            size: big.try_into().unwrap_or(u128::MAX),
            cap,
        });
    }
    Ok(())
}

fn check_params(p: &SparsePolynomial, s: usize, q: usize) -> Result<usize> {
    let d = p.homogeneous_degree()? as usize;
    let n = p.n();
    if s + 1 > d {
        return Err(Error::InvalidParameter(format!("need s ≤ d-1, got s={s}, d={d}")));
    }
    if q + 1 > n {
        return Err(Error::InvalidParameter(format!("need q ≤ N-1, got q={q}, N={n}")));
    }
    Ok(d)
}

pub fn koszul_matrix(p: &SparsePolynomial, s: usize, q: usize) -> Result<KoszulMatrix> {
    koszul_matrix_capped(p, s, q, DEFAULT_KOSZUL_CAP)
}

pub fn koszul_matrix_capped(p: &SparsePolynomial, s: usize, q: usize, cap: usize) -> Result<KoszulMatrix> {
    let d = check_params(p, s, q)?;
    let n = p.n();
    check_dims(n, d, s, q, cap)?;
    let row_wedges = wedge_basis(n, q);
    let col_wedges = wedge_basis(n, q + 1);
    let operators = MonomialBasis::new(n, s)?;
    let targets = MonomialBasis::new(n, d - s - 1)?;
    let ntargets = targets.len();
    // ∂_k ∂^β p for every β and k, shared across all wedges
    let second: Vec<Vec<SparseRow<Rational>>> = operators
        .monomials()
        .par_iter()
        .map(|beta| {
            let first = p.diff(beta);
            (0..n)
                .map(|k| {
                    first
                        .diff_var(k)
                        .terms()
                        .map(|(m, c)| (targets.position(m).expect("degree d-s-1 term"), c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let col_pos = |w: &WedgeIndex| col_wedges.binary_search(w).expect("wedge of size q+1");
    let rows: Vec<SparseRow<Rational>> = row_wedges
        .par_iter()
        .flat_map_iter(|wedge| {
            second.iter().map(|per_k| {
                let mut row = Vec::new();
                for (k, entries) in per_k.iter().enumerate() {
                    let Some((negative, target)) = wedge.wedge_left(k) else { continue };
                    let offset = col_pos(&target) * ntargets;
                    for (j, c) in entries {
                        row.push((offset + j, if negative { -c.clone() } else { c.clone() }));
                    }
                }
                row
            })
            .collect::<Vec<_>>()
        })
        .collect();
    let matrix = ExactMatrix::from_sparse_rows(col_wedges.len() * ntargets, rows)?;
    Ok(KoszulMatrix { n, d, s, q, row_wedges, operators, col_wedges, targets, matrix })
}

pub fn koszul_rank(p: &SparsePolynomial, s: usize, q: usize, engine: &RankEngine) -> Result<RankReport> {
    engine.rank(&koszul_matrix(p, s, q)?.matrix)
}

/// Exterior derivative `Λ^q ⊗ S^t → Λ^{q+1} ⊗ S^{t-1}`,
/// `x_I ⊗ m ↦ Σ_k (x_k ∧ x_I) ⊗ ∂_k m`, rows `(I, m)` wedge-major.
pub fn exterior_derivative_matrix(n: usize, q: usize, t: usize) -> Result<ExactMatrix> {
    if t == 0 {
        return Err(Error::InvalidParameter("exterior derivative needs degree t ≥ 1".into()));
    }
    let row_wedges = wedge_basis(n, q);
    let col_wedges = wedge_basis(n, q + 1);
    let sources = MonomialBasis::new(n, t)?;
    let targets = MonomialBasis::new(n, t - 1)?;
    let mut rows = Vec::with_capacity(row_wedges.len() * sources.len());
    for wedge in &row_wedges {
        for m in sources.iter() {
            let mut row = Vec::new();
            for k in 0..n {
                let e = m.get(k);
                if e == 0 {
                    continue;
                }
                let Some((negative, target)) = wedge.wedge_left(k) else { continue };
                let lowered = m.checked_sub(&MultiIndex::unit(n, k)).expect("x_k divides m");
                let j = col_wedges.binary_search(&target).expect("wedge of size q+1") * targets.len()
                    + targets.position(&lowered).expect("degree t-1");
                let c = Rational::from_int(e as i64);
                row.push((j, if negative { -c } else { c }));
            }
            rows.push(row);
        }
    }
    ExactMatrix::from_sparse_rows(col_wedges.len() * targets.len(), rows)
}

/// `Σ_{j=0}^{k} (-1)^j binom(N, q-j) binom(N+k-j-1, k-j)`.
pub fn apriori_bound(n: usize, k: usize, q: usize) -> BigInt {
    let mut total = BigInt::zero();
    for j in 0..=k.min(q) {
        let term = BigInt::from(binomial(n as u64, (q - j) as u64) * monomial_count(n, k - j));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Border-rank lower bound `rank / binom(N-1, q)`.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulBound {
    pub rank: usize,
    #[serde(serialize_with = "ser_display")]
    pub denominator: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub ratio: Rational,
    #[serde(serialize_with = "ser_display")]
    pub border_rank_lb: BigInt,
    pub report: RankReport,
}

/// Exact values as decimal strings, e.g. `"15"` or `"15/2"`.
fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn koszul_border_rank_lb(p: &SparsePolynomial, s: usize, q: usize, engine: &RankEngine) -> Result<KoszulBound> {
    let report = koszul_rank(p, s, q, engine)?;
    let denominator = binomial(p.n() as u64 - 1, q as u64);
    let ratio = Rational::new(BigInt::from(report.rank), BigInt::from(denominator.clone()));
    let border_rank_lb = ratio.ceil().to_integer();
    Ok(KoszulBound { rank: report.rank, denominator, ratio, border_rank_lb, report })
}

/// `binom(n-1, q) (binom(n+k-1, k) + q - 1)`, valid for `n > 2`, `q < n/2`.
pub fn fknkosz_bound(n: usize, k: usize, q: usize) -> Result<BigUint> {
    if n <= 2 || 2 * q >= n || q == 0 {
        return Err(Error::InvalidParameter(format!(
            "bound needs n > 2 and 1 ≤ q < n/2, got n={n}, q={q}"
        )));
    }
    Ok(binomial(n as u64 - 1, q as u64) * (monomial_count(n, k) + BigUint::from(q - 1)))
}

/// Outcome of the skew-symmetry test for `N = 2q+1`, `s = k`.
#[derive(Clone, Debug, Serialize)]
pub struct SkewCheck {
    pub skew: bool,
    pub symmetric: bool,
    pub rank: usize,
    #[serde(serialize_with = "ser_display")]
    pub apriori: BigInt,
}

/// Pairs `Λ^{q+1}` with `Λ^q` through the volume form and `S^k` with its
/// dual through differentiation, then tests the resulting square bilinear
/// form for `M = -Mᵀ`.
pub fn skew_symmetry_check(p: &SparsePolynomial, q: usize, engine: &RankEngine) -> Result<SkewCheck> {
    let n = p.n();
    let d = p.homogeneous_degree()? as usize;
    if n != 2 * q + 1 || q.is_multiple_of(2) || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "skew check needs N = 2q+1 with q odd and odd degree, got N={n}, q={q}, d={d}"
        )));
    }
    let k = d / 2;
    let km = koszul_matrix(p, k, q)?;
    // column (K, γ) -> row-shaped index (K^c, γ), scaled by ±γ!
    let nops = km.operators.len();
    let mut col_map = Vec::with_capacity(km.matrix.ncols());
    for wedge in &km.col_wedges {
        let comp = wedge.complement(n);
        let w = km.row_wedges.binary_search(&comp).expect("complement has size q");
        let negative = wedge.complement_sign();
        for gamma in km.targets.iter() {
            let op = km.operators.position(gamma).expect("targets and operators share degree k");
            let mut factor = Rational::from_bigint(gamma.factorial().into());
            if negative {
                factor = -factor;
            }
            col_map.push((w * nops + op, factor));
        }
    }
    let rows: Vec<SparseRow<Rational>> = km
        .matrix
        .rows_iter()
        .map(|row| {
            row.iter()
                .map(|(j, v)| (col_map[*j].0, v * &col_map[*j].1))
                .collect()
        })
        .collect();
    let form = ExactMatrix::from_sparse_rows(km.matrix.nrows(), rows)?;
    let t = form.transpose();
    let skew = form == t.neg();
    let symmetric = form == t;
    let rank = engine.rank(&km.matrix)?.rank;
    Ok(SkewCheck { skew, symmetric, rank, apriori: apriori_bound(n, k, q) })
}
