//! Scenario configuration: a flat, sectioned key-value text format.
//!
//! ```text
//! # growth experiment
//! [family]
//! name = lamplighter      # lamplighter | bs | free-wreath
//! m = 2                   # lamplighter modulus
//! r = 1                   # top rank
//! # k = 2                 # bs multiplier
//!
//! [schedule]
//! range = 1..12           # scalar steps: P = n Z^r, n inclusive on both ends
//! # ideal_rule = unit-plus-power   # with range: f_n = 1 + x0^n per step
//! # step = n=4                     # explicit scalar step
//! # step = n=4 f=1+x0+x0^3         # scalar step with ideal polynomial
//! # step = lattice=16,4;0,64       # row-major basis entries; columns generate P
//!
//! [options]
//! seed = 42
//! out = results.csv
//! suite = all
//! tail_fraction = 0.3
//! threshold = 0.05
//! jobs = 1
//! ```
//!
//! Every parse error carries the offending line number and field.

use std::fmt;
use std::path::PathBuf;

use torgrow::groupring::{LaurentElt, Sublattice};
use torgrow::intlinalg::IntMatrix;
use torgrow::metabelian::{SplitMetabelianGroup, StandardSubgroup};

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Lamplighter { m: u64, r: usize },
    Bs { k: u64 },
    FreeWreath { r: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeSpec {
    Scale(i64),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepSpec {
    pub step: i64,
    pub lattice: LatticeSpec,
    pub ideal: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
    pub tail_fraction: Option<f64>,
    pub threshold: Option<f64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub family: FamilySpec,
    pub schedule: Vec<StepSpec>,
    pub options: Options,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ConfigError> {
        let mut family_fields: Vec<(usize, String, String)> = Vec::new();
        let mut schedule_fields: Vec<(usize, String, String)> = Vec::new();
        let mut option_fields: Vec<(usize, String, String)> = Vec::new();
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return err(lineno, "unterminated section header");
                };
                section = match name {
                    "family" => Some("family"),
                    "schedule" => Some("schedule"),
                    "options" => Some("options"),
                    other => return err(lineno, format!("unknown section [{other}]")),
                };
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(lineno, format!("expected key = value, found {line:?}"));
            };
            let entry = (lineno, key.trim().to_string(), value.trim().to_string());
            match section {
                Some("family") => family_fields.push(entry),
                Some("schedule") => schedule_fields.push(entry),
                Some("options") => option_fields.push(entry),
                _ => return err(lineno, "field outside of any [section]"),
            }
        }

        let family = parse_family(&family_fields)?;
        let rank = match &family {
            FamilySpec::Lamplighter { r, .. } | FamilySpec::FreeWreath { r } => *r,
            FamilySpec::Bs { .. } => 1,
        };
        let schedule = parse_schedule(&schedule_fields, rank)?;
        if schedule.is_empty() {
            let line = schedule_fields.first().map_or(1, |f| f.0);
            return err(line, "schedule is empty: give a range or at least one step");
        }
        let options = parse_options(&option_fields)?;
        Ok(Scenario {
            family,
            schedule,
            options,
        })
    }

    /// Builds the family group.
    pub fn group(&self) -> Result<SplitMetabelianGroup, torgrow::Error> {
        match self.family {
            FamilySpec::Lamplighter { m, r } => SplitMetabelianGroup::lamplighter(m, r),
            FamilySpec::Bs { k } => SplitMetabelianGroup::bs_module(k),
            FamilySpec::FreeWreath { r } => SplitMetabelianGroup::free_wreath(r),
        }
    }

    /// Realizes the schedule into standard subgroups.
    pub fn subgroups(
        &self,
        group: &SplitMetabelianGroup,
    ) -> Result<Vec<(i64, StandardSubgroup)>, torgrow::Error> {
        self.schedule
            .iter()
            .map(|spec| {
                let lattice = match &spec.lattice {
                    LatticeSpec::Scale(n) => Sublattice::scaled(group.top_rank(), *n)?,
                    LatticeSpec::Matrix(rows) => {
                        Sublattice::from_basis(IntMatrix::from_rows(rows))?
                    }
                };
                let h = match &spec.ideal {
                    Some(src) => {
                        let f = LaurentElt::parse(src, 1)?;
                        group.subgroup_from_ideal(&f, lattice)?
                    }
                    None => group.subgroup_from_lattice(lattice)?,
                };
                Ok((spec.step, h))
            })
            .collect()
    }
}

fn parse_family(fields: &[(usize, String, String)]) -> Result<FamilySpec, ConfigError> {
    let mut name: Option<(usize, String)> = None;
    let mut m: Option<u64> = None;
    let mut r: Option<usize> = None;
    let mut k: Option<u64> = None;
    for (line, key, value) in fields {
        match key.as_str() {
            "name" => name = Some((*line, value.clone())),
            "m" => m = Some(parse_number(*line, "m", value)?),
            "r" => r = Some(parse_number(*line, "r", value)?),
            "k" => k = Some(parse_number(*line, "k", value)?),
            other => return err(*line, format!("unknown family field {other:?}")),
        }
    }
    let Some((line, name)) = name else {
        return err(1, "missing [family] section with a name field");
    };
    match name.as_str() {
        "lamplighter" => Ok(FamilySpec::Lamplighter {
            m: m.ok_or(ConfigError {
                line,
                message: "lamplighter needs m".into(),
            })?,
            r: r.unwrap_or(1),
        }),
        "bs" => Ok(FamilySpec::Bs {
            k: k.ok_or(ConfigError {
                line,
                message: "bs needs k".into(),
            })?,
        }),
        "free-wreath" => Ok(FamilySpec::FreeWreath { r: r.unwrap_or(1) }),
        other => err(line, format!("unknown family {other:?}")),
    }
}

fn parse_schedule(
    fields: &[(usize, String, String)],
    rank: usize,
) -> Result<Vec<StepSpec>, ConfigError> {
    let mut range: Option<(i64, i64)> = None;
    let mut ideal_rule: Option<(usize, String)> = None;
    let mut explicit: Vec<StepSpec> = Vec::new();
    for (line, key, value) in fields {
        match key.as_str() {
            "range" => {
                let Some((a, b)) = value.split_once("..") else {
                    return err(*line, format!("range must look like 1..12, found {value:?}"));
                };
                let start = parse_number(*line, "range start", a.trim())?;
                let end = parse_number(*line, "range end", b.trim())?;
                if start > end || start < 1 {
                    return err(*line, format!("bad range {start}..{end}"));
                }
                range = Some((start, end));
            }
            "ideal_rule" => ideal_rule = Some((*line, value.clone())),
            "step" => explicit.push(parse_step(*line, value)?),
            other => return err(*line, format!("unknown schedule field {other:?}")),
        }
    }
    let mut out = Vec::new();
    if let Some((start, end)) = range {
        for n in start..=end {
            let ideal = match &ideal_rule {
                Some((line, rule)) => match rule.as_str() {
                    "unit-plus-power" => {
                        if rank != 1 {
                            return err(*line, "ideal_rule needs a rank-1 family");
                        }
                        Some(format!("1 + x0^{n}"))
                    }
                    other => return err(*line, format!("unknown ideal_rule {other:?}")),
                },
                None => None,
            };
            out.push(StepSpec {
                step: n,
                lattice: LatticeSpec::Scale(n),
                ideal,
            });
        }
    } else if let Some((line, _)) = ideal_rule {
        return err(line, "ideal_rule needs a range");
    }
    out.extend(explicit);
    Ok(out)
}

fn parse_step(line: usize, value: &str) -> Result<StepSpec, ConfigError> {
    let mut step: Option<i64> = None;
    let mut lattice: Option<LatticeSpec> = None;
    let mut ideal: Option<String> = None;
    for token in value.split_whitespace() {
        let Some((key, val)) = token.split_once('=') else {
            return err(line, format!("step fields look like n=4, found {token:?}"));
        };
        match key {
            "n" => {
                let n: i64 = parse_number(line, "n", val)?;
                step = Some(n);
                lattice = Some(LatticeSpec::Scale(n));
            }
            "lattice" => {
                let rows = val
                    .split(';')
                    .map(|row| {
                        row.split(',')
                            .map(|entry| parse_number(line, "lattice entry", entry.trim()))
                            .collect::<Result<Vec<i64>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                    return err(line, "lattice matrix must be square");
                }
                if step.is_none() {
                    step = Some(0);
                }
                lattice = Some(LatticeSpec::Matrix(rows));
            }
            "f" => ideal = Some(val.to_string()),
            other => return err(line, format!("unknown step field {other:?}")),
        }
    }
    let Some(lattice) = lattice else {
        return err(line, "step needs n=... or lattice=...");
    };
    Ok(StepSpec {
        step: step.unwrap_or(0),
        lattice,
        ideal,
    })
}

fn parse_options(fields: &[(usize, String, String)]) -> Result<Options, ConfigError> {
    let mut options = Options::default();
    for (line, key, value) in fields {
        match key.as_str() {
            "seed" => options.seed = Some(parse_number(*line, "seed", value)?),
            "out" => options.out = Some(PathBuf::from(value)),
            "suite" => options.suite = Some(value.clone()),
            "tail_fraction" => {
                options.tail_fraction = Some(parse_number(*line, "tail_fraction", value)?)
            }
            "threshold" => options.threshold = Some(parse_number(*line, "threshold", value)?),
            "jobs" => options.jobs = Some(parse_number(*line, "jobs", value)?),
            other => return err(*line, format!("unknown option {other:?}")),
        }
    }
    Ok(options)
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    what: &str,
    value: &str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError {
        line,
        message: format!("invalid {what}: {value:?}"),
    })
}
