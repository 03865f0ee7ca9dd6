use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hpol_core::dynamics::{MapSpec, SystemDescriptor};
use hpol_core::entropy::{assemble, prepare, run_scale, EntropyEstimate, GrowthTable, Target};
use hpol_core::verify::band_for;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{load_json, RunConfig, VerifyConfig};
use crate::output::{write_growth_csv, write_json, write_jsonl, write_plot, TaggedTable};
use crate::suite::{run_suite, Selector};

/// Exit code when every check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when a check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, configuration and budget errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hpol", version, about = "Polynomial entropy of circle maps and their hyperspaces")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed; overrides the seed of an estimation config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Built-in systems.
    Systems {
        #[command(subcommand)]
        action: SystemsCmd,
    },
    /// Estimate polynomial entropy from a JSON run config.
    Estimate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the verification checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        check: Selector,
        /// JSON file overriding the default check settings.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SystemsCmd {
    /// List the built-in systems and their classification.
    List,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        anyhow::ensure!(t > 0, "--threads must be positive");
        pool = pool.num_threads(t);
    }
    let pool = pool.build()?;
    pool.install(|| match &cli.cmd {
        Cmd::Systems {
            action: SystemsCmd::List,
        } => systems_list(),
        Cmd::Estimate { config } => estimate(config, &cli.out, cli.seed),
        Cmd::Verify { check, config } => verify(*check, config.as_deref(), &cli.out, cli.seed.unwrap_or(0)),
    })
}

fn parameter_ranges(map: &MapSpec) -> &'static str {
    match map {
        MapSpec::Rotation { .. } => "alpha in [0, 1)",
        MapSpec::Arnold { .. } => "omega real, |k| < 1",
        MapSpec::RationalMs { .. } => "gcd(p, q) = 1, q >= 1, |k| < 1",
        MapSpec::Denjoy { .. } => "alpha irrational in (0, 1)",
    }
}

fn map_kind(map: &MapSpec) -> String {
    match *map {
        MapSpec::Rotation { alpha } => format!("rotation alpha={alpha}"),
        MapSpec::Arnold { omega, k } => format!("arnold omega={omega} k={k}"),
        MapSpec::RationalMs { p, q, k } => format!("rational_ms p={p} q={q} k={k}"),
        MapSpec::Denjoy { alpha } => format!("denjoy alpha={alpha}"),
    }
}

fn systems_list() -> Result<i32> {
    println!(
        "{:<12} {:<44} {:<32} {:<7} {:<10} {}",
        "name", "map", "parameters", "nw", "conjugate", "h_pol(C(f))"
    );
    for d in SystemDescriptor::builtins() {
        let c = d.classify()?;
        let nw = serde_json::to_value(c.nw_kind)?;
        println!(
            "{:<12} {:<44} {:<32} {:<7} {:<10} {}",
            d.name,
            map_kind(&d.map),
            parameter_ranges(&d.map),
            nw.as_str().unwrap_or_default(),
            c.conjugate_to_rotation,
            c.expected_hyperspace_hpol
        );
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct SanityCheck {
    name: &'static str,
    pass: bool,
    detail: serde_json::Value,
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    sample_size: usize,
    table: &'a GrowthTable,
    estimate: &'a EntropyEstimate,
    checks: Vec<SanityCheck>,
}

fn create_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))
}

fn estimate(path: &Path, out: &Path, seed: Option<u64>) -> Result<i32> {
    let mut config: RunConfig = load_json(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.validate()?;
    let t0 = Instant::now();
    let system = config.system.build()?;
    let cache = prepare(&system, config.target, &config.protocol)?;
    let t_prepare = t0.elapsed().as_secs_f64();
    let ns = &config.protocol.n;
    let timed = config
        .protocol
        .eps
        .par_iter()
        .map(|&e| {
            let t = Instant::now();
            run_scale(&cache, e, ns).map(|s| (s, t.elapsed().as_secs_f64()))
        })
        .collect::<hpol_core::error::Result<Vec<_>>>()?;
    let (scales, scale_secs): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    let run = assemble(cache.len(), ns, scales)?;

    let mut checks = vec![
        SanityCheck {
            name: "separated_monotone",
            pass: run.table.is_monotone(),
            detail: json!(null),
        },
        SanityCheck {
            name: "spanning_below_separated",
            pass: run.table.spanning_below_separated(),
            detail: json!(null),
        },
    ];
    if config.target == Target::Hyperspace {
        let class = config.system.classify()?;
        let band = band_for(class.expected_hyperspace_hpol);
        let m = run.estimate.estimate;
        checks.push(SanityCheck {
            name: "classification_band",
            pass: m >= band.0 && m <= band.1,
            detail: json!({"expected": class.expected_hyperspace_hpol, "band": band, "measured": m}),
        });
    }

    create_out(out)?;
    let report = EstimateReport {
        tool: "hpol",
        version: env!("CARGO_PKG_VERSION"),
        config: &config,
        sample_size: run.sample_size,
        table: &run.table,
        estimate: &run.estimate,
        checks,
    };
    write_json(&out.join("report.json"), &report)?;
    let tagged = TaggedTable {
        system: config.system.name.clone(),
        target: config.target.name().into(),
        table: run.table.clone(),
    };
    write_growth_csv(&out.join("growth.csv"), &[tagged])?;
    write_plot(&out.join("growth.dat"), &run.table)?;
    let scale_timings: BTreeMap<String, f64> = config
        .protocol
        .eps
        .iter()
        .zip(&scale_secs)
        .map(|(e, s)| (format!("eps={e}"), *s))
        .collect();
    write_json(
        &out.join("timings.json"),
        &json!({
            "prepare_seconds": t_prepare,
            "scale_seconds": scale_timings,
            "total_seconds": t0.elapsed().as_secs_f64(),
        }),
    )?;
    println!(
        "{} {}: h_pol ~ {:.3} (sample {}{})",
        config.system.name,
        config.target.name(),
        run.estimate.estimate,
        run.sample_size,
        if run.estimate.poor_fit { ", poor fit" } else { "" }
    );
    Ok(EXIT_PASS)
}

fn verify(sel: Selector, config: Option<&Path>, out: &Path, seed: u64) -> Result<i32> {
    let config: VerifyConfig = match config {
        Some(p) => load_json(p)?,
        None => VerifyConfig::default(),
    };
    let res = run_suite(&config, sel, seed)?;
    create_out(out)?;
    write_jsonl(&out.join("verdicts.jsonl"), &res.verdicts)?;
    write_growth_csv(&out.join("growth.csv"), &res.tables)?;
    write_json(&out.join("timings.json"), &res.timings)?;
    for v in &res.verdicts {
        println!("{:<4} {}", if v.pass { "PASS" } else { "FAIL" }, v.check);
    }
    Ok(if res.all_pass() { EXIT_PASS } else { EXIT_FAIL })
}
