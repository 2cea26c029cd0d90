//! torgrow: torsion growth experiments on split metabelian groups.
//!
//! Subcommands: `compute` (single-point probe), `sequence` (growth CSV),
//! `verify` (inequality suites), `fit` (exponential base from a CSV).
//! Exit codes: 0 success / all checks hold, 1 check failure, 2 usage or
//! config error.

mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use scenario::Scenario;
use torgrow::intlinalg::log2_bigint;
use torgrow::verify::{
    check_commutator_suite, check_exp_grid, check_fin_lemma, check_growth_suite, check_ma_grid,
    check_t_multiplicativity, check_torsion_lemma_corpus, growth_sequence, BoundReport,
    GrowthRecord,
};

#[derive(Parser)]
#[command(name = "torgrow", version, about = "torsion growth of subgroup abelianizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the abelianization invariants of one schedule step
    Compute {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Step parameter to probe (defaults to the first schedule entry)
        #[arg(long)]
        step: Option<i64>,
    },
    /// Run the whole schedule and emit the growth CSV
    Sequence {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Output CSV path (defaults to the scenario's `out`, then stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of worker threads for schedule evaluation
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run verification suites and write a report
    Verify {
        /// One of: multiplicativity, fin, torsion-lemma, ma, exp, growth,
        /// commutator, all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report file (defaults to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the exponential base and tail ratios from a sequence CSV
    Fit {
        /// CSV produced by `sequence`
        csv: PathBuf,
        #[arg(long, default_value_t = 0.3)]
        tail_fraction: f64,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
    },
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario config path
    #[arg(long)]
    scenario: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(all_hold) => {
            if all_hold {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Compute { scenario, step } => {
            let (scn, group, subgroups) = load(&scenario.scenario)?;
            let _ = scn;
            let target = match step {
                Some(s) => subgroups
                    .iter()
                    .find(|(n, _)| *n == s)
                    .ok_or(format!("no schedule entry with step {s}"))?,
                None => subgroups.first().expect("schedule is non-empty"),
            };
            let records =
                growth_sequence(&group, std::slice::from_ref(target)).map_err(stringify)?;
            let r = &records[0];
            println!(
                "step={} torsion={} log2_torsion={} free_rank={} index={} a={} m={}",
                r.step,
                r.torsion,
                real(r.log2_torsion),
                r.free_rank,
                r.index,
                r.a,
                r.m
            );
            Ok(true)
        }
        Command::Sequence {
            scenario,
            out,
            jobs,
        } => {
            let (scn, group, subgroups) = load(&scenario.scenario)?;
            let jobs = jobs.or(scn.options.jobs).unwrap_or(1).max(1);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| e.to_string())?;
            let records: Vec<GrowthRecord> = pool
                .install(|| {
                    subgroups
                        .par_iter()
                        .map(|entry| {
                            growth_sequence(&group, std::slice::from_ref(entry))
                                .map(|mut v| v.pop().expect("one record per entry"))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .map_err(stringify)?;
            let csv = render_csv(&records);
            match out.or(scn.options.out) {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Command::Verify { suite, seed, out } => {
            let reports = run_suites(&suite, seed)?;
            let mut text = format!("# suite={suite} seed={seed}\n");
            text.push_str("label,lhs,rhs,holds,slack_log2\n");
            for r in &reports {
                let label = r.label.replace(',', ";");
                text.push_str(&format!(
                    "{label},{},{},{},{}\n",
                    r.lhs,
                    r.rhs,
                    r.holds,
                    real(r.slack_log2)
                ));
            }
            let all_hold = reports.iter().all(|r| r.holds);
            text.push_str(&format!(
                "# {} checks; {}\n",
                reports.len(),
                if all_hold { "all hold" } else { "FAILURES PRESENT" }
            ));
            match out {
                Some(path) => std::fs::write(&path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(all_hold)
        }
        Command::Fit {
            csv,
            tail_fraction,
            threshold,
        } => {
            let text = std::fs::read_to_string(&csv)
                .map_err(|e| format!("cannot read {}: {e}", csv.display()))?;
            let rows = parse_csv(&text)?;
            let d_hat = rows
                .iter()
                .map(|(torsion, index, _)| (log2_bigint(torsion) / index).exp2())
                .fold(1.0_f64, f64::max);
            let ratios: Vec<f64> = rows
                .iter()
                .map(|(torsion, index, _)| log2_bigint(torsion) * std::f64::consts::LN_2 / index)
                .collect();
            let tail_len = ((rows.len() as f64 * tail_fraction).ceil() as usize)
                .clamp(1, rows.len());
            let tail = &ratios[rows.len() - tail_len..];
            let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            println!("records={}", rows.len());
            println!("d_hat={}", real(d_hat));
            println!("tail_len={tail_len}");
            println!("tail_ratio_max={}", real(tail_max));
            println!("final_ratio={}", real(*ratios.last().unwrap()));
            println!(
                "tail_below_threshold={}",
                if tail_max < threshold { "yes" } else { "no" }
            );
            Ok(true)
        }
    }
}

fn stringify(e: torgrow::Error) -> String {
    e.to_string()
}

type LoadedScenario = (
    Scenario,
    torgrow::metabelian::SplitMetabelianGroup,
    Vec<(i64, torgrow::metabelian::StandardSubgroup)>,
);

fn load(path: &Path) -> Result<LoadedScenario, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let scn = Scenario::parse(&text)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let group = scn.group().map_err(stringify)?;
    let subgroups = scn.subgroups(&group).map_err(stringify)?;
    Ok((scn, group, subgroups))
}

/// Reals print with 15 significant digits; exact integers as decimal
/// strings.
fn real(x: f64) -> String {
    format!("{x:.14e}")
}

fn render_csv(records: &[GrowthRecord]) -> String {
    let mut out = String::from("step,index,a,m,torsion,log2_torsion,ratio,free_rank\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.step,
            r.index,
            r.a,
            r.m,
            r.torsion,
            real(r.log2_torsion),
            real(r.ratio),
            r.free_rank
        ));
    }
    out
}

/// Parses a sequence CSV back into (torsion, index, step) triples.
fn parse_csv(text: &str) -> Result<Vec<(BigInt, f64, i64)>, String> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err("empty CSV".into());
    };
    if header != "step,index,a,m,torsion,log2_torsion,ratio,free_rank" {
        return Err(format!("row 1: unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(format!("row {}: expected 8 fields, found {}", idx + 1, fields.len()));
        }
        let step: i64 = fields[0]
            .parse()
            .map_err(|_| format!("row {}: bad step {:?}", idx + 1, fields[0]))?;
        let index: BigInt = fields[1]
            .parse()
            .map_err(|_| format!("row {}: bad index {:?}", idx + 1, fields[1]))?;
        let torsion: BigInt = fields[4]
            .parse()
            .map_err(|_| format!("row {}: bad torsion {:?}", idx + 1, fields[4]))?;
        let index_f = index
            .to_f64()
            .ok_or(format!("row {}: index out of range", idx + 1))?;
        rows.push((torsion, index_f, step));
    }
    if rows.is_empty() {
        return Err("CSV has no data rows".into());
    }
    Ok(rows)
}

fn run_suites(suite: &str, seed: u64) -> Result<Vec<BoundReport>, String> {
    let single = |name: &str| -> Result<Vec<BoundReport>, String> {
        match name {
            "multiplicativity" => Ok(check_t_multiplicativity(500, seed)),
            "fin" => Ok(check_fin_lemma(500, seed.wrapping_add(1))),
            "torsion-lemma" => Ok(check_torsion_lemma_corpus(1000, seed.wrapping_add(2))),
            "ma" => {
                let mut reports = check_ma_grid(2, 6).map_err(stringify)?;
                reports.extend(check_ma_grid(3, 6).map_err(stringify)?);
                Ok(reports)
            }
            "exp" => check_exp_grid(2, 20).map_err(stringify),
            "growth" => check_growth_suite().map_err(stringify),
            "commutator" => Ok(check_commutator_suite(2, 8, 32)),
            other => Err(format!("unknown suite {other:?}")),
        }
    };
    if suite == "all" {
        let mut reports = Vec::new();
        for name in [
            "multiplicativity",
            "fin",
            "torsion-lemma",
            "ma",
            "exp",
            "growth",
            "commutator",
        ] {
            reports.extend(single(name)?);
        }
        Ok(reports)
    } else {
        single(suite)
    }
}
