use flatrank::families::{family_catalog, Family};
use flatrank::flattening::{catalecticant_capped, shifted_partials_dim_capped, DEFAULT_TARGET_CAP};
use flatrank::koszul::{apriori_bound, koszul_matrix_capped, skew_symmetry_check, DEFAULT_KOSZUL_CAP};
use flatrank::lgv::gv_summary;
use flatrank::{Error, RankEngine, RankReport, Rational, SparsePolynomial};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::output::{label, Config, CsvRow, Params};

/// Shared per-run settings.
pub struct Ctx {
    pub engine: RankEngine,
    pub cap: Option<usize>,
    pub config: Config,
}

impl Ctx {
    pub fn build(&self, family: &Family) -> flatrank::Result<SparsePolynomial> {
        match self.cap {
            Some(cap) => family.build_capped(cap),
            None => family.build(),
        }
    }

    pub fn target_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_TARGET_CAP)
    }

    pub fn koszul_cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_KOSZUL_CAP)
    }
}

/// Integers as JSON numbers when they fit, decimal strings otherwise.
pub fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(v.to_string()),
    }
}

fn rational_string(r: &Rational) -> String {
    r.to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct RankFields {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub full_rank: bool,
    pub certainty: String,
    pub method: String,
    pub primes: Vec<u64>,
}

impl From<&RankReport> for RankFields {
    fn from(r: &RankReport) -> Self {
        RankFields {
            rows: r.rows,
            cols: r.cols,
            rank: r.rank,
            full_rank: r.is_full(),
            certainty: label(&r.certainty),
            method: label(&r.method),
            primes: r.primes.clone(),
        }
    }
}

impl RankFields {
    pub fn fill(&self, row: &mut CsvRow) {
        row.rows = Some(self.rows);
        row.cols = Some(self.cols);
        row.rank = Some(self.rank);
        row.full_rank = Some(self.full_rank);
        row.certainty = Some(self.certainty.clone());
        row.method = Some(self.method.clone());
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatRecord {
    pub params: Params,
    #[serde(flatten)]
    pub rank: RankFields,
}

pub fn catalecticant(ctx: &Ctx, family: &Family, e: Option<usize>) -> flatrank::Result<Vec<CatRecord>> {
    let p = ctx.build(family)?;
    let d = family.degree();
    let es: Vec<usize> = match e {
        Some(e) => vec![e],
        None => (0..=d).collect(),
    };
    es.into_iter()
        .map(|e| {
            let cat = catalecticant_capped(&p, e, ctx.target_cap())?;
            let report = ctx.engine.rank(&cat.matrix)?;
            Ok(CatRecord {
                params: Params::of(family).with(|q| q.e = Some(e)),
                rank: RankFields::from(&report),
            })
        })
        .collect()
}

pub fn catalecticant_csv(records: &[CatRecord], config: &Config) -> Vec<CsvRow> {
    records
        .iter()
        .map(|r| {
            let mut row = CsvRow::new("catalecticant", &r.params, config);
            r.rank.fill(&mut row);
            row
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftedRecord {
    pub params: Params,
    /// Distinct spanning products.
    pub rows: usize,
    /// Dimension of the target space.
    pub cols: usize,
    pub rank: usize,
    /// Whether the span reaches `min(#products, target dimension)`.
    pub full_rank: bool,
    pub generator_count: usize,
    pub upper_bound: usize,
    pub certainty: String,
    pub method: String,
    pub primes: Vec<u64>,
}

pub fn shifted(ctx: &Ctx, family: &Family, e: usize, tau: usize) -> flatrank::Result<ShiftedRecord> {
    let p = ctx.build(family)?;
    let s = shifted_partials_dim_capped(&p, e, tau, &ctx.engine, ctx.target_cap())?;
    Ok(ShiftedRecord {
        params: Params::of(family).with(|q| {
            q.e = Some(e);
            q.tau = Some(tau);
        }),
        rows: s.distinct_generators,
        cols: s.target_dim,
        rank: s.dim,
        full_rank: s.dim == s.upper_bound(),
        generator_count: s.generator_count,
        upper_bound: s.upper_bound(),
        certainty: label(&s.certainty),
        method: label(&s.method),
        primes: s.primes.clone(),
    })
}

pub fn shifted_csv(r: &ShiftedRecord, config: &Config) -> CsvRow {
    let mut row = CsvRow::new("shifted", &r.params, config);
    row.rows = Some(r.rows);
    row.cols = Some(r.cols);
    row.rank = Some(r.rank);
    row.bound = Some(r.upper_bound.to_string());
    row.rank_equals_bound = Some(r.rank == r.upper_bound);
    row.full_rank = Some(r.full_rank);
    row.certainty = Some(r.certainty.clone());
    row.method = Some(r.method.clone());
    row
}

#[derive(Clone, Debug, Serialize)]
pub struct SkewRecord {
    pub skew: bool,
    pub symmetric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulRecord {
    pub params: Params,
    #[serde(flatten)]
    pub rank: RankFields,
    /// Present for odd degree `2k+1` at `s = k`.
    pub apriori: Option<Value>,
    pub rank_equals_apriori: Option<bool>,
    pub ratio: String,
    pub border_rank_lb: Value,
    pub denominator: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skew: Option<SkewRecord>,
}

/// Degree-`d` families take `d = 2k+1` when only `--k` is given.
pub fn koszul_family_args(mut args: flatrank::families::FamilyArgs) -> flatrank::families::FamilyArgs {
    if args.d.is_none() {
        if let Some(k) = args.k {
            args.d = Some(2 * k + 1);
        }
    }
    args
}

pub fn koszul(ctx: &Ctx, family: &Family, s: Option<usize>, q: usize, check_skew: bool) -> flatrank::Result<KoszulRecord> {
    let p = ctx.build(family)?;
    let n = p.n();
    let d = family.degree();
    let s = s.unwrap_or(d / 2);
    let km = koszul_matrix_capped(&p, s, q, ctx.koszul_cap())?;
    let report = ctx.engine.rank(&km.matrix)?;
    let denominator = BigInt::from(flatrank::combinatorics::binomial(n as u64 - 1, q as u64));
    let ratio = Rational::new(BigInt::from(report.rank), denominator.clone());
    let apriori = (d % 2 == 1 && s == d / 2).then(|| apriori_bound(n, s, q));
    let skew = if check_skew {
        let c = skew_symmetry_check(&p, q, &ctx.engine)?;
        Some(SkewRecord { skew: c.skew, symmetric: c.symmetric })
    } else {
        None
    };
    Ok(KoszulRecord {
        params: Params::of(family).with(|x| {
            x.s = Some(s);
            x.q = Some(q);
        }),
        rank: RankFields::from(&report),
        rank_equals_apriori: apriori.as_ref().map(|a| *a == BigInt::from(report.rank)),
        apriori: apriori.as_ref().map(big_json),
        ratio: rational_string(&ratio),
        border_rank_lb: big_json(&ratio.ceil().to_integer()),
        denominator: big_json(&denominator),
        skew,
    })
}

pub fn koszul_csv(r: &KoszulRecord, config: &Config) -> CsvRow {
    let mut row = CsvRow::new("koszul", &r.params, config);
    r.rank.fill(&mut row);
    row.bound = r.apriori.as_ref().map(value_string);
    row.rank_equals_bound = r.rank_equals_apriori;
    row.detail = Some(format!(
        "ratio={} border_rank_lb={}{}",
        r.ratio,
        value_string(&r.border_rank_lb),
        r.skew.as_ref().map_or(String::new(), |s| format!(" skew={}", s.skew))
    ));
    row
}

pub fn value_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LgvRecord {
    pub tuples: Vec<Vec<u32>>,
    pub rank: usize,
    pub distinct: usize,
    pub definite: bool,
    pub semidefinite: bool,
    pub certainty: String,
    pub method: String,
}

pub fn parse_tuples(s: &str) -> flatrank::Result<Vec<Vec<u32>>> {
    serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("--tuples must be a JSON list of integer lists: {e}")))
}

pub fn lgv(ctx: &Ctx, tuples: Vec<Vec<u32>>) -> flatrank::Result<LgvRecord> {
    let g = gv_summary(&tuples, &ctx.engine)?;
    Ok(LgvRecord {
        tuples,
        rank: g.rank,
        distinct: g.distinct,
        definite: g.definite,
        semidefinite: g.semidefinite,
        certainty: label(&g.report.certainty),
        method: label(&g.report.method),
    })
}

pub fn lgv_csv(r: &LgvRecord, config: &Config) -> CsvRow {
    let mut row = CsvRow::new("lgv", &Params::default(), config);
    row.rows = Some(r.tuples.len());
    row.cols = Some(r.tuples.len());
    row.rank = Some(r.rank);
    row.bound = Some(r.distinct.to_string());
    row.rank_equals_bound = Some(r.rank == r.distinct);
    row.full_rank = Some(r.definite);
    row.certainty = Some(r.certainty.clone());
    row.method = Some(r.method.clone());
    row.detail = Some(format!("tuples={}", serde_json::to_string(&r.tuples).unwrap_or_default()));
    row
}

pub fn family_list() -> Value {
    serde_json::to_value(family_catalog()).expect("catalog serializes")
}
