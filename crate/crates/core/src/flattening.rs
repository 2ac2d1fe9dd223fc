//! Catalecticant (partial-derivative) matrices, shifted partial derivatives
//! and the binomial bounds that go with them.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, monomial_count, monomial_count_u128};
use crate::error::{Error, Result};
use crate::poly::{MonomialBasis, MultiIndex, Poly, Rational, SparsePolynomial};
use crate::rank::{
    rank_exact_rational, Certainty, ExactMatrix, PrimeField, RankEngine, RankMethod, RankReport,
    SparseRow, StreamingEchelon,
};

/// Default cap on the dimension of the target space of a flattening.
pub const DEFAULT_TARGET_CAP: usize = 200_000;

/// Matrix of `D ↦ D(p)` from order-`e` operators to degree `d - e` forms.
#[derive(Clone, Debug)]
pub struct CatalecticantMatrix {
    pub n: usize,
    pub d: usize,
    pub e: usize,
    /// Row `i` is the operator `∂^β` with `β = operators.get(i)`.
    pub operators: MonomialBasis,
    /// Column `j` is the coefficient of `x^γ` with `γ = targets.get(j)`.
    pub targets: MonomialBasis,
    pub matrix: ExactMatrix,
}

impl CatalecticantMatrix {
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Row `i` read back as the polynomial `∂^β p`.
    pub fn row_polynomial(&self, i: usize) -> SparsePolynomial {
        let terms = self
            .matrix
            .row(i)
            .iter()
            .map(|(j, c)| (self.targets.get(*j).clone(), c.clone()));
        Poly::from_terms(self.n, terms).expect("row terms share the basis arity")
    }
}

/// Position of every term of `p` in `basis`, after shifting by `shift`.
fn to_row(p: &SparsePolynomial, shift: Option<&MultiIndex>, basis: &MonomialBasis) -> SparseRow<Rational> {
    let mut row: SparseRow<Rational> = p
        .terms()
        .map(|(m, c)| {
            let m = match shift {
                Some(s) => m + s,
                None => m.clone(),
            };
            let j = basis.position(&m).expect("term lies in the target basis");
            (j, c.clone())
        })
        .collect();
    row.sort_unstable_by_key(|(j, _)| *j);
    row
}

fn degree_of(p: &SparsePolynomial) -> Result<usize> {
    Ok(p.homogeneous_degree()? as usize)
}

pub fn catalecticant(p: &SparsePolynomial, e: usize) -> Result<CatalecticantMatrix> {
    catalecticant_capped(p, e, DEFAULT_TARGET_CAP)
}

pub fn catalecticant_capped(p: &SparsePolynomial, e: usize, cap: usize) -> Result<CatalecticantMatrix> {
    let d = degree_of(p)?;
    if e > d {
        return Err(Error::InvalidParameter(format!("derivative order {e} exceeds degree {d}")));
    }
    let n = p.n();
    let operators = MonomialBasis::with_cap(n, e, cap)?;
    let targets = MonomialBasis::with_cap(n, d - e, cap)?;
    let rows: Vec<_> = operators
        .monomials()
        .par_iter()
        .map(|beta| to_row(&p.diff(beta), None, &targets))
        .collect();
    let matrix = ExactMatrix::from_sparse_rows(targets.len(), rows)?;
    Ok(CatalecticantMatrix { n, d, e, operators, targets, matrix })
}

pub fn catalecticant_rank(p: &SparsePolynomial, e: usize, engine: &RankEngine) -> Result<RankReport> {
    engine.rank(&catalecticant(p, e)?.matrix)
}

/// Whether `{∂_i(h · q_n) : h a degree-d monomial}` spans all forms of
/// degree `d + 1`.
pub fn first_derivative_span_check(n: usize, d: usize, engine: &RankEngine) -> Result<bool> {
    let q = crate::families::power_sum(n, 2)?;
    let sources = MonomialBasis::new(n, d)?;
    let targets = MonomialBasis::new(n, d + 1)?;
    let mut rows = Vec::with_capacity(sources.len() * n);
    for h in sources.iter() {
        let hq = q.mul_monomial(h);
        for i in 0..n {
            rows.push(to_row(&hq.diff_var(i), None, &targets));
        }
    }
    let m = ExactMatrix::from_sparse_rows(targets.len(), rows)?;
    Ok(engine.rank(&m)?.rank == targets.len())
}

/// Dimension of `span{x^γ ∂^β p : |γ| = τ, |β| = e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedPartialSpace {
    pub n: usize,
    pub d: usize,
    pub e: usize,
    pub tau: usize,
    pub dim: usize,
    /// `binom(n+e-1, e) * binom(n+τ-1, τ)` products spanning the space.
    pub generator_count: usize,
    /// Generators left after dropping zero and proportional duplicates.
    pub distinct_generators: usize,
    pub target_dim: usize,
    pub certainty: Certainty,
    pub method: RankMethod,
    pub primes: Vec<u64>,
}

impl ShiftedPartialSpace {
    /// `min(#generators, dim of the target space)`.
    pub fn upper_bound(&self) -> usize {
        self.generator_count.min(self.target_dim)
    }
}

/// Scales so the leading coefficient is one; proportional rows then hash
/// equal.
fn normalize(row: &mut SparseRow<Rational>) {
    if let Some((_, lead)) = row.first() {
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, v) in row.iter_mut() {
                *v = &*v * &inv;
            }
        }
    }
}

fn row_hash(row: &SparseRow<Rational>) -> u64 {
    let mut h = DefaultHasher::new();
    row.hash(&mut h);
    h.finish()
}

pub fn shifted_partials_dim(p: &SparsePolynomial, e: usize, tau: usize, engine: &RankEngine) -> Result<ShiftedPartialSpace> {
    shifted_partials_dim_capped(p, e, tau, engine, DEFAULT_TARGET_CAP)
}

pub fn shifted_partials_dim_capped(
    p: &SparsePolynomial,
    e: usize,
    tau: usize,
    engine: &RankEngine,
    cap: usize,
) -> Result<ShiftedPartialSpace> {
    let d = degree_of(p)?;
    if e > d {
        return Err(Error::InvalidParameter(format!("derivative order {e} exceeds degree {d}")));
    }
    let n = p.n();
    let target_size = monomial_count_u128(n, d - e + tau);
    if target_size > cap as u128 {
        return Err(Error::TooLarge { what: "shifted-partial target space", size: target_size, cap });
    }
    let targets = MonomialBasis::with_cap(n, d - e + tau, cap)?;
    let operators = MonomialBasis::with_cap(n, e, cap)?;
    let shifts = MonomialBasis::with_cap(n, tau, cap)?;
    let generator_count = operators.len() * shifts.len();

    let derivatives: Vec<SparsePolynomial> = operators
        .monomials()
        .par_iter()
        .map(|beta| p.diff(beta))
        .filter(|q| !q.is_zero())
        .collect();
    let shifted: Vec<SparseRow<Rational>> = derivatives
        .par_iter()
        .flat_map_iter(|q| {
            shifts.iter().map(|g| {
                let mut row = to_row(q, Some(g), &targets);
                normalize(&mut row);
                row
            })
        })
        .collect();
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut rows: Vec<SparseRow<Rational>> = Vec::with_capacity(shifted.len());
    for row in shifted {
        let bucket = buckets.entry(row_hash(&row)).or_default();
        if bucket.iter().any(|&k| rows[k] == row) {
            continue;
        }
        bucket.push(rows.len());
        rows.push(row);
    }
    let distinct_generators = rows.len();
    let report = stream_rank(rows, targets.len(), engine)?;
    Ok(ShiftedPartialSpace {
        n,
        d,
        e,
        tau,
        dim: report.rank,
        generator_count,
        distinct_generators,
        target_dim: targets.len(),
        certainty: report.certainty,
        method: report.method,
        primes: report.primes,
    })
}

/// Rank of a row list that is consumed incrementally: one echelon per prime,
/// stopping as soon as the rank reaches `cols`.
fn stream_rank(rows: Vec<SparseRow<Rational>>, cols: usize, engine: &RankEngine) -> Result<RankReport> {
    let start = Instant::now();
    let full = rows.len().min(cols);
    if full == 0 {
        return Ok(RankReport {
            rows: rows.len(),
            cols,
            rank: 0,
            certainty: Certainty::Exact,
            method: RankMethod::Trivial,
            primes: Vec::new(),
            elapsed: start.elapsed(),
        });
    }
    let per_prime: Vec<(u64, Result<usize>)> = engine
        .primes()
        .par_iter()
        .map(|&p| {
            let run = || -> Result<usize> {
                let field = PrimeField::new(p)?;
                let mut ech = StreamingEchelon::new(field);
                for row in &rows {
                    let mut reduced = Vec::with_capacity(row.len());
                    for (j, v) in row {
                        let r = field.reduce_rational(v)?;
                        if r != 0 {
                            reduced.push((*j, r));
                        }
                    }
                    ech.insert(reduced);
                    if ech.rank() == full {
                        break;
                    }
                }
                Ok(ech.rank())
            };
            (p, run())
        })
        .collect();
    let mut used = Vec::new();
    let mut ranks = Vec::new();
    for (p, r) in per_prime {
        match r {
            Ok(r) => {
                used.push(p);
                ranks.push(r);
            }
            Err(Error::BadPrime(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let rank = *ranks.iter().max().ok_or(Error::AllPrimesBad)?;
    let mut report = RankReport {
        rows: rows.len(),
        cols,
        rank,
        certainty: if rank == full {
            Certainty::Exact
        } else if ranks.len() >= 3 && ranks.iter().all(|&r| r == rank) {
            Certainty::ProbabilisticExact
        } else {
            Certainty::CertifiedLowerBound
        },
        method: RankMethod::Modular,
        primes: used,
        elapsed: start.elapsed(),
    };
    if report.certainty != Certainty::Exact
        && engine.confirm_exact
        && rows.len().saturating_mul(cols) <= engine.dense_cap
    {
        let m = ExactMatrix::from_sparse_rows(cols, rows)?;
        report.rank = rank_exact_rational(&m, engine.dense_cap)?.rank;
        report.certainty = Certainty::Exact;
        report.method = RankMethod::ModularThenRational;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `binom(n+s+τ-1, s+τ)`: the least possible dimension of the degree
/// `t + τ` part of an ideal generated by `binom(n+s-1, s)` independent forms
/// of degree `t ≥ s`.
pub fn macaulay_lower_bound(n: usize, s: usize, tau: usize) -> BigUint {
    monomial_count(n, s + tau)
}

/// `binom(m,s)^2 · binom(n+τ-1, τ)`: shifted partials of the permanent,
/// ignoring every syzygy.
pub fn perm_crude_upper_bound(m: usize, s: usize, n: usize, tau: usize) -> BigUint {
    let b = binomial(m as u64, s as u64);
    &b * &b * monomial_count(n, tau)
}

/// Exact comparison `binom(n+s+τ-1, s+τ) > binom(m,s)^2 · binom(n+τ-1, τ)`.
pub fn nestimate_holds(n: usize, m: usize, s: usize, tau: usize) -> bool {
    macaulay_lower_bound(n, s, tau) > perm_crude_upper_bound(m, s, n, tau)
}

/// The cheap sufficient condition `(n+τ)/(τ+s) > m^2`; false when `τ+s = 0`.
pub fn nestimate_sufficient(n: usize, m: usize, s: usize, tau: usize) -> bool {
    let denom = (tau + s) as u128;
    denom > 0 && (n + tau) as u128 > (m as u128) * (m as u128) * denom
}

/// Best border-rank lower bound from ordinary flattenings:
/// `max_e rank(p_{e,d-e})`.
#[derive(Clone, Debug, Serialize)]
pub struct FlatteningBound {
    pub bound: usize,
    pub best_e: usize,
    pub reports: Vec<RankReport>,
}

pub fn flattening_lower_bound(p: &SparsePolynomial, engine: &RankEngine) -> Result<FlatteningBound> {
    let d = degree_of(p)?;
    // Ranks are symmetric in e <-> d - e.
    let reports: Vec<RankReport> = (0..=d / 2)
        .map(|e| catalecticant_rank(p, e, engine))
        .collect::<Result<_>>()?;
    let (best_e, best) = reports
        .iter()
        .enumerate()
        .max_by_key(|(e, r)| (r.rank, std::cmp::Reverse(*e)))
        .expect("at least e = 0 is present");
    Ok(FlatteningBound { bound: best.rank, best_e, reports })
}

/// Full-rank value `min(binom(n+e-1, e), binom(n+d-e-1, d-e))`.
pub fn full_flattening_rank(n: usize, d: usize, e: usize) -> BigUint {
    monomial_count(n, e).min(monomial_count(n, d - e))
}
