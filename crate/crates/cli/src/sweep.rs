use flatrank::families::{Family, FamilyArgs};
use flatrank::flattening::{catalecticant_capped, full_flattening_rank, shifted_partials_dim_capped};
use flatrank::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::args::{SweepKind, SweepRanges};
use crate::commands::{koszul, koszul_family_args, value_string, Ctx};
use crate::output::{label, CsvRow, Params};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub params: Params,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub rank: Option<usize>,
    pub bound: Option<Value>,
    pub rank_equals_bound: Option<bool>,
    pub certainty: Option<String>,
    pub method: Option<String>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl SweepRow {
    fn skipped(params: Params, err: &Error) -> Self {
        SweepRow {
            params,
            rows: None,
            cols: None,
            rank: None,
            bound: None,
            rank_equals_bound: None,
            certainty: None,
            method: None,
            status: "skipped",
            detail: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub kind: String,
    pub family: String,
    pub rows: Vec<SweepRow>,
}

pub fn csv_rows(table: &SweepTable, ctx: &Ctx) -> Vec<CsvRow> {
    table
        .rows
        .iter()
        .map(|r| {
            let mut row = CsvRow::new(&format!("sweep-{}", table.kind), &r.params, &ctx.config);
            row.rows = r.rows;
            row.cols = r.cols;
            row.rank = r.rank;
            row.bound = r.bound.as_ref().map(value_string);
            row.rank_equals_bound = r.rank_equals_bound;
            row.certainty = r.certainty.clone();
            row.method = r.method.clone();
            row.status = Some(r.status.to_string());
            row.detail = r.detail.clone();
            row
        })
        .collect()
}

/// One unit of sweep work, in parameter order.
struct Case {
    family: Result<Family, Error>,
    params: Params,
    e: Option<usize>,
    tau: Option<usize>,
    s: Option<usize>,
    q: usize,
}

fn axis(values: &Option<Vec<usize>>) -> Vec<Option<usize>> {
    match values {
        Some(v) => v.iter().copied().map(Some).collect(),
        None => vec![None],
    }
}

/// Family parameter combinations, or an error naming a missing parameter.
type Combination = (FamilyArgs, Result<Family, Error>);

fn families(name: &str, ranges: &SweepRanges, seed: u64, kind: SweepKind) -> Result<Vec<Combination>, Error> {
    let mut out = Vec::new();
    for n in axis(&ranges.n) {
        for d in axis(&ranges.d) {
            for k in axis(&ranges.k) {
                for m in axis(&ranges.m) {
                    let mut args = FamilyArgs { n, d, k, m, seed: Some(seed) };
                    if kind == SweepKind::Koszul {
                        args = koszul_family_args(args);
                    }
                    let fam = Family::from_name(name, &args);
                    out.push((args, fam));
                }
            }
        }
    }
    // a parameter missing from every combination is a usage error, not a skipped case
    if let Some((_, Err(e @ Error::InvalidParameter(_)))) = out.first() {
        if out.iter().all(|(_, f)| f.is_err()) {
            return Err(e.clone());
        }
    }
    Ok(out)
}

fn cases(kind: SweepKind, name: &str, ranges: &SweepRanges, seed: u64) -> Result<Vec<Case>, Error> {
    if kind == SweepKind::Shifted && (ranges.e.is_none() || ranges.tau.is_none()) {
        return Err(Error::InvalidParameter("shifted sweeps need --e and --tau".into()));
    }
    let mut out = Vec::new();
    for (args, family) in families(name, ranges, seed, kind)? {
        let base = match &family {
            Ok(f) => Params::of(f),
            Err(_) => Params {
                family: Some(name.to_string()),
                n: args.n,
                d: args.d,
                k: args.k,
                m: args.m,
                ..Default::default()
            },
        };
        let base = if kind == SweepKind::Koszul { base.with(|p| p.k = p.k.or(args.k)) } else { base };
        let degree = family.as_ref().map(|f| f.degree()).unwrap_or(0);
        let push = |out: &mut Vec<Case>, e, tau, s, q| {
            let params = base.clone().with(|p| {
                p.e = e;
                p.tau = tau;
                p.s = s;
                p.q = if kind == SweepKind::Koszul { Some(q) } else { None };
            });
            out.push(Case { family: family.clone(), params, e, tau, s, q });
        };
        match kind {
            SweepKind::Catalecticant => {
                let es = ranges.e.clone().unwrap_or_else(|| (0..=degree).collect());
                for e in es {
                    push(&mut out, Some(e), None, None, 0);
                }
            }
            SweepKind::Shifted => {
                for &e in ranges.e.as_deref().unwrap_or_default() {
                    for &tau in ranges.tau.as_deref().unwrap_or_default() {
                        push(&mut out, Some(e), Some(tau), None, 0);
                    }
                }
            }
            SweepKind::Koszul => {
                let ss = axis(&ranges.s).into_iter().map(|s| s.or(Some(degree / 2)));
                let qs = ranges.q.clone().unwrap_or_else(|| vec![1]);
                for s in ss {
                    for &q in &qs {
                        push(&mut out, None, None, s, q);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn run_case(kind: SweepKind, case: &Case, ctx: &Ctx) -> SweepRow {
    let family = match &case.family {
        Ok(f) => f,
        Err(e) => return SweepRow::skipped(case.params.clone(), e),
    };
    let result = match kind {
        SweepKind::Catalecticant => catalecticant_row(ctx, family, case),
        SweepKind::Shifted => shifted_row(ctx, family, case),
        SweepKind::Koszul => koszul_row(ctx, family, case),
    };
    result.unwrap_or_else(|e| SweepRow::skipped(case.params.clone(), &e))
}

fn catalecticant_row(ctx: &Ctx, family: &Family, case: &Case) -> flatrank::Result<SweepRow> {
    let p = ctx.build(family)?;
    let e = case.e.unwrap_or(0);
    let cat = catalecticant_capped(&p, e, ctx.target_cap())?;
    let report = ctx.engine.rank(&cat.matrix)?;
    let bound = full_flattening_rank(p.n(), family.degree(), e);
    Ok(SweepRow {
        params: case.params.clone(),
        rows: Some(report.rows),
        cols: Some(report.cols),
        rank: Some(report.rank),
        rank_equals_bound: Some(bound == report.rank.into()),
        bound: Some(Value::String(bound.to_string())),
        certainty: Some(label(&report.certainty)),
        method: Some(label(&report.method)),
        status: "ok",
        detail: None,
    })
}

fn shifted_row(ctx: &Ctx, family: &Family, case: &Case) -> flatrank::Result<SweepRow> {
    let p = ctx.build(family)?;
    let (e, tau) = (case.e.unwrap_or(0), case.tau.unwrap_or(0));
    let s = shifted_partials_dim_capped(&p, e, tau, &ctx.engine, ctx.target_cap())?;
    let bound = s.upper_bound();
    Ok(SweepRow {
        params: case.params.clone(),
        rows: Some(s.distinct_generators),
        cols: Some(s.target_dim),
        rank: Some(s.dim),
        bound: Some(Value::from(bound)),
        rank_equals_bound: Some(s.dim == bound),
        certainty: Some(label(&s.certainty)),
        method: Some(label(&s.method)),
        status: "ok",
        detail: None,
    })
}

fn koszul_row(ctx: &Ctx, family: &Family, case: &Case) -> flatrank::Result<SweepRow> {
    let r = koszul(ctx, family, case.s, case.q, false)?;
    Ok(SweepRow {
        params: case.params.clone(),
        rows: Some(r.rank.rows),
        cols: Some(r.rank.cols),
        rank: Some(r.rank.rank),
        bound: r.apriori.clone(),
        rank_equals_bound: r.rank_equals_apriori,
        certainty: Some(r.rank.certainty.clone()),
        method: Some(r.rank.method.clone()),
        status: "ok",
        detail: Some(format!("ratio={} border_rank_lb={}", r.ratio, value_string(&r.border_rank_lb))),
    })
}

pub fn run(kind: SweepKind, family: &str, ranges: &SweepRanges, ctx: &Ctx) -> flatrank::Result<SweepTable> {
    let cases = cases(kind, family, ranges, ctx.config.seed)?;
    // rayon's indexed collect keeps parameter order regardless of completion order
    let rows = cases.par_iter().map(|c| run_case(kind, c, ctx)).collect();
    Ok(SweepTable { kind: label_kind(kind).to_string(), family: family.to_string(), rows })
}

fn label_kind(kind: SweepKind) -> &'static str {
    match kind {
        SweepKind::Catalecticant => "catalecticant",
        SweepKind::Koszul => "koszul",
        SweepKind::Shifted => "shifted",
    }
}
