use flatrank::families::{
    bierman, complete_symmetric, f_family, ftilde_family, power_sum, qm_odd_trace_vanishes, random_homogeneous,
    verify_imm_diagonal_specialization, verify_pow_specialization, GENERIC_BOUND,
};
use flatrank::flattening::{catalecticant_capped, flattening_lower_bound, full_flattening_rank};
use flatrank::koszul::{apriori_bound, fknkosz_bound, koszul_matrix_capped};
use flatrank::lgv::{distinct_count, gv_rank, hnd_gv_crosscheck};
use flatrank::{Error, SparsePolynomial};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::Suite;
use crate::commands::Ctx;
use crate::output::{label, CsvRow, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub check: &'static str,
    pub params: Params,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certainty: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn csv_rows(&self, ctx: &Ctx) -> Vec<CsvRow> {
        self.checks
            .iter()
            .map(|c| {
                let mut row = CsvRow::new("verify", &c.params, &ctx.config);
                row.check = Some(format!("{}/{}", c.suite, c.check));
                row.status = Some(label(&c.status));
                row.certainty = c.certainty.clone();
                row.detail = Some(c.detail.clone());
                row
            })
            .collect()
    }
}

/// What a single check produced before classification.
struct Verdict {
    ok: bool,
    certainty: Option<String>,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, certainty: None, detail: detail.into() }
}

/// Size-limit errors mean the case was not attempted at the configured caps.
fn is_cap_error(e: &Error) -> bool {
    matches!(e, Error::TooLarge { .. } | Error::BasisTooLarge { .. } | Error::UseModularPath { .. })
}

struct Recorder {
    suite: &'static str,
    checks: Vec<CheckOutcome>,
}

impl Recorder {
    fn record(&mut self, check: &'static str, params: Params, run: impl FnOnce() -> flatrank::Result<Verdict>) {
        let (status, certainty, detail) = match run() {
            Ok(v) => (if v.ok { Status::Pass } else { Status::Fail }, v.certainty, v.detail),
            Err(e) if is_cap_error(&e) => (Status::Skipped, None, e.to_string()),
            Err(e) => (Status::Fail, None, e.to_string()),
        };
        self.checks.push(CheckOutcome { suite: self.suite, check, params, status, certainty, detail });
    }
}

fn named(name: &str) -> Params {
    Params { family: Some(name.to_string()), ..Default::default() }
}

pub fn run(suite: Suite, ctx: &Ctx) -> VerifyReport {
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Flattenings, Suite::Specializations, Suite::Lgv, Suite::Koszul],
        _ => std::slice::from_ref(&suite),
    };
    let mut checks = Vec::new();
    for s in suites {
        let mut rec = Recorder { suite: suite_name(*s), checks: Vec::new() };
        match s {
            Suite::Flattenings => flattenings(&mut rec, ctx),
            Suite::Specializations => specializations(&mut rec),
            Suite::Lgv => lgv(&mut rec, ctx),
            Suite::Koszul => koszul(&mut rec, ctx),
            Suite::All => unreachable!(),
        }
        checks.extend(rec.checks);
    }
    let count = |st| checks.iter().filter(|c| c.status == st).count();
    VerifyReport {
        suite: suite_name(suite).to_string(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
        checks,
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Flattenings => "flattenings",
        Suite::Specializations => "specializations",
        Suite::Lgv => "lgv",
        Suite::Koszul => "koszul",
        Suite::All => "all",
    }
}

fn full_rank(ctx: &Ctx, p: &SparsePolynomial, d: usize, e: usize) -> flatrank::Result<Verdict> {
    let cat = catalecticant_capped(p, e, ctx.target_cap())?;
    let report = ctx.engine.rank(&cat.matrix)?;
    let expected = full_flattening_rank(p.n(), d, e);
    Ok(Verdict {
        ok: BigUint::from(report.rank) == expected,
        certainty: Some(label(&report.certainty)),
        detail: format!("rank {} of {}x{}, expected {expected}", report.rank, report.rows, report.cols),
    })
}

fn flattenings(rec: &mut Recorder, ctx: &Ctx) {
    for n in 1..=4 {
        for d in 1..=5 {
            for e in 0..=d {
                let params = Params { n: Some(n), d: Some(d), e: Some(e), ..named("complete") };
                rec.record("full-rank", params, || full_rank(ctx, &complete_symmetric(n, d)?, d, e));
            }
            let params = Params { n: Some(n), d: Some(d), ..named("complete") };
            rec.record("border-rank-bound", params, || {
                let b = flattening_lower_bound(&complete_symmetric(n, d)?, &ctx.engine)?;
                let expected = full_flattening_rank(n, d, d / 2);
                Ok(verdict(BigUint::from(b.bound) == expected, format!("bound {} at e={}, expected {expected}", b.bound, b.best_e)))
            });
        }
    }
    for n in 1..=4 {
        for k in 1..=3 {
            for e in 0..=2 * k {
                let params = Params { n: Some(n), k: Some(k), e: Some(e), ..named("f") };
                rec.record("full-rank", params, || full_rank(ctx, &f_family(n, k)?, 2 * k, e));
            }
            for e in 0..=k {
                let params = Params { n: Some(n), k: Some(k), e: Some(e), ..named("f") };
                rec.record("rows-divisible", params, || {
                    let cat = catalecticant_capped(&f_family(n, k)?, e, ctx.target_cap())?;
                    let divisor = power_sum(n, 2)?.pow((k - e) as u32);
                    let bad = (0..cat.nrows()).find(|&i| cat.row_polynomial(i).div_exact(&divisor).is_none());
                    Ok(match bad {
                        None => verdict(true, format!("{} rows divisible by q^{}", cat.nrows(), k - e)),
                        Some(i) => verdict(false, format!("row {i} not divisible by q^{}", k - e)),
                    })
                });
            }
        }
    }
    for n in 1..=4 {
        for k in 1..=2 {
            for e in 0..=2 * k + 1 {
                let params = Params { n: Some(n), k: Some(k), e: Some(e), ..named("ftilde") };
                rec.record("full-rank", params, || full_rank(ctx, &ftilde_family(n, k)?, 2 * k + 1, e));
            }
        }
    }
    for n in 1..=3 {
        for d in 1..=4 {
            for e in 0..=d {
                let params = Params { n: Some(n), d: Some(d), e: Some(e), ..named("bierman") };
                rec.record("full-rank", params, || full_rank(ctx, &bierman(n, d)?, d, e));
            }
        }
    }
}

fn specializations(rec: &mut Recorder) {
    for n in 1..=5 {
        for k in 1..=3 {
            let params = Params { n: Some(n), k: Some(k), ..named("pow") };
            rec.record("pow-specializes-to-f", params, || {
                Ok(verdict(verify_pow_specialization(n, k)?, "trace of the 2k-th power equals 2 f_{n,k}"))
            });
            let params = Params { n: Some(n), k: Some(k), ..named("pow") };
            rec.record("odd-trace-vanishes", params, || {
                Ok(verdict(qm_odd_trace_vanishes(n, k)?, "trace of the (2k+1)-th power is zero"))
            });
        }
    }
    for m in 2..=3 {
        let params = Params { m: Some(m), n: Some(m * m), ..named("imm") };
        rec.record("imm-diagonal", params, || {
            Ok(verdict(verify_imm_diagonal_specialization(m, m * m)?, "diagonal slots give the power sum"))
        });
    }
}

fn lgv(rec: &mut Recorder, ctx: &Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed);
    for _ in 0..100 {
        let width = rng.gen_range(1..=3);
        let len = rng.gen_range(1..=8);
        let tuples: Vec<Vec<u32>> = (0..len).map(|_| (0..width).map(|_| rng.gen_range(0..=6)).collect()).collect();
        let params = Params { n: Some(len), m: Some(width), ..Default::default() };
        rec.record("rank-equals-distinct", params, || {
            let report = gv_rank(&tuples, &ctx.engine)?;
            let distinct = distinct_count(&tuples);
            Ok(Verdict {
                ok: report.rank == distinct,
                certainty: Some(label(&report.certainty)),
                detail: format!("rank {} distinct {distinct} tuples {tuples:?}", report.rank),
            })
        });
    }
    for (n, k) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let params = Params { n: Some(n), k: Some(k), ..named("complete") };
        rec.record("complete-gv-crosscheck", params, || {
            Ok(verdict(hnd_gv_crosscheck(n, k)?, "middle flattening of h against its GV matrix"))
        });
    }
}

/// `bound - rank` of the q=1, s=k Koszul flattening of a degree `2k+1` form.
fn koszul_gap(ctx: &Ctx, p: &SparsePolynomial, k: usize, q: usize) -> flatrank::Result<(BigInt, usize, String)> {
    let km = koszul_matrix_capped(p, k, q, ctx.koszul_cap())?;
    let report = ctx.engine.rank(&km.matrix)?;
    Ok((apriori_bound(p.n(), k, q) - BigInt::from(report.rank), report.rank, label(&report.certainty)))
}

fn koszul(rec: &mut Recorder, ctx: &Ctx) {
    for n in 3..=4 {
        for k in 1..=2 {
            let bound = apriori_bound(n, k, 1);
            let expected = BigInt::from(((n, k) == (3, 2)) as u8);
            let params = Params { n: Some(n), k: Some(k), d: Some(2 * k + 1), s: Some(k), q: Some(1), ..named("generic") };
            rec.record("koszul-pattern", params, || {
                let mut last = String::new();
                for attempt in 0..=3u64 {
                    let seed = ctx.config.seed.wrapping_add(1000 * attempt + 10 * n as u64 + k as u64);
                    let p = random_homogeneous(n, 2 * k + 1, GENERIC_BOUND, seed)?;
                    let (gap, rank, certainty) = koszul_gap(ctx, &p, k, 1)?;
                    last = format!("rank {rank}, bound {bound}, expected gap {expected}, family seed {seed}");
                    if gap == expected {
                        return Ok(Verdict { ok: true, certainty: Some(certainty), detail: format!("{last}, {attempt} reseeds") });
                    }
                }
                Ok(verdict(false, format!("{last}, gap persists after 3 reseeds")))
            });
            let expected = BigInt::from((k % 2 == 0) as u8);
            for name in ["complete", "ftilde"] {
                let params = Params { n: Some(n), k: Some(k), s: Some(k), q: Some(1), ..named(name) };
                rec.record("koszul-pattern", params, || {
                    let p = if name == "complete" { complete_symmetric(n, 2 * k + 1)? } else { ftilde_family(n, k)? };
                    let (gap, rank, certainty) = koszul_gap(ctx, &p, k, 1)?;
                    Ok(Verdict {
                        ok: gap == expected,
                        certainty: Some(certainty),
                        detail: format!("rank {rank}, bound {bound}, expected gap {expected}"),
                    })
                });
            }
        }
    }
    for (n, q) in [(4, 1), (5, 1), (5, 2)] {
        for k in 1..=2 {
            let params = Params { n: Some(n), k: Some(k), s: Some(k), q: Some(q), ..named("ftilde") };
            rec.record("koszul-lower-bound", params, || {
                let lower = fknkosz_bound(n, k, q)?;
                let km = koszul_matrix_capped(&ftilde_family(n, k)?, k, q, ctx.koszul_cap())?;
                let report = ctx.engine.rank(&km.matrix)?;
                Ok(Verdict {
                    ok: BigUint::from(report.rank) >= lower,
                    certainty: Some(label(&report.certainty)),
                    detail: format!("rank {} >= {lower}", report.rank),
                })
            });
        }
    }
}
