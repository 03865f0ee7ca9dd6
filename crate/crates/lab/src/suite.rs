//! The verification suite: independent jobs over shared systems, merged by
//! job name.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use hpol_core::dynamics::{golden_alpha, DenjoyMap, MapSpec, System};
use hpol_core::verify::{
    band_for, build_an, classify_and_verify, verify_cover, verify_isometry, verify_product,
    ISOMETRY_TOL, POWER_TOL, PRODUCT_TOL, Y_BAND,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::VerifyConfig;
use crate::output::TaggedTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    Isometry,
    Cover,
    An,
    Product,
    Classify,
}

/// `{check, params, expected, measured, pass}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub params: Value,
    pub expected: Value,
    pub measured: Value,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct JobOutput {
    pub verdict: Verdict,
    pub tables: Vec<TaggedTable>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
enum Job {
    Isometry,
    Cover(usize),
    An,
    Product,
    Classify(usize),
}

/// Shared systems, built on first use.
struct Context<'a> {
    config: &'a VerifyConfig,
    seed: u64,
    denjoy: OnceLock<System>,
}

impl Context<'_> {
    fn denjoy(&self) -> &System {
        self.denjoy.get_or_init(|| System::Denjoy(DenjoyMap::golden()))
    }
}

fn jobs(config: &VerifyConfig, sel: Selector) -> Vec<Job> {
    let mut out = Vec::new();
    let want = |s: Selector| sel == Selector::All || sel == s;
    if want(Selector::Isometry) {
        out.push(Job::Isometry);
    }
    if want(Selector::Cover) {
        out.extend((0..config.cover.n.len()).map(Job::Cover));
    }
    if want(Selector::An) {
        out.push(Job::An);
    }
    if want(Selector::Product) {
        out.push(Job::Product);
    }
    if want(Selector::Classify) {
        out.extend((0..config.classify.len()).map(Job::Classify));
    }
    out
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run_job(ctx: &Context, job: &Job) -> Result<JobOutput> {
    let t0 = Instant::now();
    let c = ctx.config;
    let seed = ctx.seed;
    let mut tables = Vec::new();
    let verdict = match *job {
        Job::Isometry => {
            let r = verify_isometry(c.isometry.alpha, c.isometry.trials, seed)?;
            Verdict {
                check: "isometry".into(),
                params: json!({"alpha": c.isometry.alpha, "trials": c.isometry.trials, "seed": seed}),
                expected: json!({"max_deviation_at_most": ISOMETRY_TOL}),
                pass: r.pass,
                measured: to_value(&r),
            }
        }
        Job::Cover(i) => {
            let n = c.cover.n[i];
            let f = c.cover.system.lift_map()?;
            let r = verify_cover(&f, n, c.cover.eps, c.cover.arcs, c.cover.pairs, seed)?;
            Verdict {
                check: format!("cover/n={n:05}"),
                params: json!({
                    "system": c.cover.system, "n": n, "eps": c.cover.eps,
                    "arcs": c.cover.arcs, "pairs": c.cover.pairs, "seed": seed,
                }),
                expected: json!({
                    "covers_circle": true,
                    "base_diameter_below": 0.5 * c.cover.eps,
                    "covered_fraction": 1.0,
                    "pair_distance_below": c.cover.eps,
                    "family_count": "N^2",
                }),
                pass: r.pass,
                measured: to_value(&r),
            }
        }
        Job::An => {
            let d = match ctx.denjoy() {
                System::Denjoy(d) => d,
                System::Lift(_) => unreachable!(),
            };
            let r = build_an(d, c.an.eps, c.an.max_level, c.an.witness_level)?;
            Verdict {
                check: "an".into(),
                params: to_value(&c.an),
                expected: json!({
                    "size_at_least_level": true,
                    "separation_at_least": r.separation_bound,
                }),
                pass: r.pass,
                measured: to_value(&r),
            }
        }
        Job::Product => {
            let sys = ctx.denjoy();
            let p = &c.product;
            let r = verify_product(sys, &p.nw, &p.y, p.arcs, p.steps, seed)?;
            tables.push(TaggedTable {
                system: "denjoy".into(),
                target: "nw".into(),
                table: r.nw.table.clone(),
            });
            tables.push(TaggedTable {
                system: "denjoy".into(),
                target: "product".into(),
                table: r.y.table.clone(),
            });
            Verdict {
                check: "product".into(),
                params: json!({"config": p, "seed": seed}),
                expected: json!({
                    "slope_y_band": Y_BAND,
                    "product_gap_at_most": PRODUCT_TOL,
                    "conjugacy_mismatches": 0,
                }),
                pass: r.pass,
                measured: to_value(&r),
            }
        }
        Job::Classify(i) => {
            let cc = &c.classify[i];
            let owned;
            let golden = MapSpec::Denjoy {
                alpha: golden_alpha(),
            };
            let sys = if cc.system.map == golden && cc.system.power == 1 {
                ctx.denjoy()
            } else {
                owned = cc.system.build()?;
                &owned
            };
            let r = classify_and_verify(&cc.system, sys, &cc.hyperspace, cc.base.as_ref())?;
            tables.push(TaggedTable {
                system: cc.system.name.clone(),
                target: "hyperspace".into(),
                table: r.run.table.clone(),
            });
            let mut expected = json!({"h_pol": r.expected, "band": band_for(r.expected)});
            if r.reduction.is_some() {
                expected["power_slope_tol"] = json!(POWER_TOL);
            }
            Verdict {
                check: format!("classify/{}", cc.system.name),
                params: to_value(cc),
                expected,
                pass: r.pass,
                measured: to_value(&r),
            }
        }
    };
    Ok(JobOutput {
        verdict,
        tables,
        seconds: t0.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    /// Sorted by check name.
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<TaggedTable>,
    pub timings: BTreeMap<String, f64>,
}

impl SuiteResult {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Runs the selected checks concurrently on the current rayon pool.
pub fn run_suite(config: &VerifyConfig, sel: Selector, seed: u64) -> Result<SuiteResult> {
    let ctx = Context {
        config,
        seed,
        denjoy: OnceLock::new(),
    };
    let list = jobs(config, sel);
    if list.is_empty() {
        return Err(anyhow!("no checks selected"));
    }
    let mut outs = list
        .par_iter()
        .map(|j| run_job(&ctx, j))
        .collect::<Result<Vec<_>>>()?;
    outs.sort_by(|a, b| a.verdict.check.cmp(&b.verdict.check));
    let timings = outs
        .iter()
        .map(|o| (o.verdict.check.clone(), o.seconds))
        .collect();
    let tables = outs.iter().flat_map(|o| o.tables.iter().cloned()).collect();
    Ok(SuiteResult {
        verdicts: outs.into_iter().map(|o| o.verdict).collect(),
        tables,
        timings,
    })
}
