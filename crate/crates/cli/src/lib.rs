//! Command-line front end: load relation specs, run the definability test
//! and the witness pipeline, evaluate formulas, and emit plot-ready CSV
//! grids.
//!
//! Exit codes are a stable contract: 0 for a definite positive verdict, 1
//! for a definite negative, 2 for usage or spec errors, 3 when a budget ran
//! out before a definite verdict. Everything is deterministic: identical
//! configuration yields byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use presburger_witness::formula::{eval_bounded, parse, BoundedStructure};
use presburger_witness::muchnik::{muchnik_test, s_shiftable, Evidence};
use presburger_witness::periodicity::{
    is_expanding, lcm_witness, minimal_period, ExpandingConfig, Set1D, WindowedSet,
};
use presburger_witness::pipeline::{check_period_exceeds_shift, extract_witness, PipelineError};
use presburger_witness::relation::{parse_relation_spec, BuiltinOracle, Point, Relation};
use presburger_witness::{Budget, Verdict3};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "pwitness",
    about = "Detect non-definability in (ℕ,+,<) and extract non-periodic witness sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the three-valued definability test and print the evidence.
    CheckDefinable(CheckDefinableArgs),
    /// Run the witness pipeline and print the trace and witness prefix.
    Witness(WitnessArgs),
    /// Emit a CSV grid of membership, cube codes and shiftability.
    CubeMap(CubeMapArgs),
    /// Evaluate a formula under the bounded semantics.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct RelationSource {
    /// Name of a built-in oracle (squares_times_N, odd_le_square,
    /// prime_divides, prime_divides_shifted, full, empty).
    #[arg(long, conflicts_with = "spec")]
    pub builtin: Option<String>,
    /// Path to a relation spec file.
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Largest cube radius tried by the cube-size search.
    #[arg(long, default_value_t = 3)]
    pub max_k: u64,
    /// Largest shift bound examined.
    #[arg(long, default_value_t = 4)]
    pub max_s: u64,
    /// Largest depth threshold sampled for "for every t".
    #[arg(long, default_value_t = 32)]
    pub max_t: u64,
    /// Coordinate ceiling for corner searches.
    #[arg(long, default_value_t = 2_000)]
    pub coord_bound: u64,
    /// Window for periodicity evidence and section scans.
    #[arg(long, default_value_t = 1_000)]
    pub window: u64,
    /// Quantifier bound for formula evaluation.
    #[arg(long, default_value_t = 64)]
    pub qbound: u64,
    /// Recurrence count standing in for "appears infinitely often".
    #[arg(long, default_value_t = 3)]
    pub theta: u64,
    /// How many witness values to produce.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Lines,
}

impl Format {
    fn name(&self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Lines => "lines",
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckDefinableArgs {
    #[command(flatten)]
    pub source: RelationSource,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub source: RelationSource,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Treat the (two-dimensional) relation directly as a family of rows and
    /// run the common-period construction on it.
    #[arg(long)]
    pub family: bool,
}

#[derive(Args, Debug)]
pub struct CubeMapArgs {
    #[command(flatten)]
    pub source: RelationSource,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Shift bound for the shiftability column.
    #[arg(long, default_value_t = 1)]
    pub s: u64,
    /// Cube radius for the cube-code column.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Grid extent as `N` (square) or `N0xN1`.
    #[arg(long, default_value = "26x6")]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: RelationSource,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// The formula text.
    pub formula: String,
    /// Assignment of the free variables, e.g. `x=11,y=3`.
    #[arg(long, default_value = "")]
    pub assign: String,
}

/// Everything a command run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn usage_error(message: impl Into<String>) -> CmdOutput {
    CmdOutput {
        stdout: String::new(),
        stderr: format!("error: {}\n", message.into()),
        code: EXIT_USAGE,
    }
}

/// Parses an argv and runs the selected command.
pub fn run_from_args<I, S>(argv: I) -> CmdOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli.command),
        Err(e) => CmdOutput {
            stdout: String::new(),
            stderr: e.to_string(),
            code: if e.use_stderr() { EXIT_USAGE } else { EXIT_POSITIVE },
        },
    }
}

pub fn run(command: Command) -> CmdOutput {
    match command {
        Command::CheckDefinable(args) => cmd_check_definable(args),
        Command::Witness(args) => cmd_witness(args),
        Command::CubeMap(args) => cmd_cube_map(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

fn to_budget(args: &BudgetArgs) -> Result<Budget, CmdOutput> {
    Budget {
        max_k: args.max_k,
        max_s: args.max_s,
        max_t: args.max_t,
        coord_bound: args.coord_bound,
        window: args.window,
        theta: args.theta,
        ..Budget::default()
    }
    .validated()
    .map_err(usage_error)
}

/// Loads the relation. Built-in oracles get an evaluation bound derived from
/// the budgets so every in-budget query is answerable.
fn load_relation(source: &RelationSource, args: &BudgetArgs) -> Result<(String, Relation), CmdOutput> {
    match (&source.builtin, &source.spec) {
        (Some(name), None) => {
            let oracle = BuiltinOracle::by_name(name)
                .ok_or_else(|| usage_error(format!("unknown builtin oracle `{name}`")))?;
            let dim = oracle.fixed_dimension().unwrap_or(2);
            let bound = args
                .coord_bound
                .max(args.window)
                .max(args.qbound)
                .saturating_add(2 * (args.max_k + args.max_s))
                .saturating_add(64);
            let rel = Relation::builtin(oracle, dim, bound)
                .map_err(|e| usage_error(e.to_string()))?;
            Ok((name.clone(), rel))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage_error(format!("cannot read `{path}`: {e}")))?;
            parse_relation_spec(&text).map_err(|e| usage_error(e.to_string()))
        }
        _ => Err(usage_error("exactly one of --builtin or --spec is required")),
    }
}

fn config_line(command: &str, name: &str, rel: &Relation, args: &BudgetArgs) -> String {
    format!(
        "config: command={command} relation={name} ({}) max-k={} max-s={} max-t={} \
         coord-bound={} window={} qbound={} theta={} count={} format={}\n",
        rel.describe(),
        args.max_k,
        args.max_s,
        args.max_t,
        args.coord_bound,
        args.window,
        args.qbound,
        args.theta,
        args.count,
        args.format.name(),
    )
}

fn cmd_check_definable(args: CheckDefinableArgs) -> CmdOutput {
    if args.budget.format == Format::Csv {
        return usage_error("check-definable does not produce CSV");
    }
    let budget = match to_budget(&args.budget) {
        Ok(b) => b,
        Err(e) => return e,
    };
    let (name, rel) = match load_relation(&args.source, &args.budget) {
        Ok(v) => v,
        Err(e) => return e,
    };
    let mut out = config_line("check-definable", &name, &rel, &args.budget);
    match muchnik_test(&rel, &budget) {
        Ok(Verdict3::Holds(evidence)) => {
            if args.budget.format == Format::Lines {
                out.push_str("verdict=not-definable\n");
                out.push_str(&format!("property={}\n", evidence.property_name()));
                match &evidence {
                    Evidence::Local { rows } => {
                        for row in rows {
                            let corners: Vec<String> = row
                                .corners
                                .iter()
                                .map(|(t, c)| format!("t={t}:{c}"))
                                .collect();
                            out.push_str(&format!(
                                "s={} K={} corners={}\n",
                                row.s,
                                row.k,
                                corners.join(";")
                            ));
                        }
                    }
                    Evidence::Section { index, value, .. } => {
                        out.push_str(&format!("section=i={index},j={value}\n"));
                    }
                    Evidence::NotPeriodic1D { certificate } => {
                        out.push_str(&format!("certificate={certificate}\n"));
                    }
                }
            } else {
                out.push_str("verdict: NOT-DEFINABLE\n");
                out.push_str(&format!("{evidence}"));
                if !out.ends_with('\n') {
                    out.push('\n');
                }
            }
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_POSITIVE,
            }
        }
        Ok(Verdict3::Fails) => {
            out.push_str(if args.budget.format == Format::Lines {
                "verdict=definable\n"
            } else {
                "verdict: DEFINABLE (semilinear)\n"
            });
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_NEGATIVE,
            }
        }
        Ok(Verdict3::Unknown(e)) => {
            out.push_str(&format!("verdict: UNKNOWN ({e})\n"));
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_UNKNOWN,
            }
        }
        Err(e) => usage_error(e.to_string()),
    }
}

/// Periodicity and expanding verdicts for a produced prefix, printed on its
/// natural window.
fn prefix_verdicts(values: &[u64]) -> String {
    let mut out = String::new();
    match values.last() {
        Some(&last) if last >= 9 && values.len() >= 2 => {
            let set = Set1D::Windowed(WindowedSet::from_values(values, last));
            match minimal_period(&set) {
                Ok(cert) => {
                    let _ = writeln!(out, "periodicity: {cert}");
                }
                Err(e) => {
                    let _ = writeln!(out, "periodicity: unavailable ({e})");
                }
            }
            match is_expanding(&set, last, &ExpandingConfig::default()) {
                Verdict3::Holds(ev) => {
                    let maxima: Vec<String> =
                        ev.gap_maxima.iter().map(|g| g.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "expanding: holds B={} gap-maxima=[{}]",
                        ev.window,
                        maxima.join(",")
                    );
                }
                Verdict3::Fails => {
                    let _ = writeln!(out, "expanding: fails B={last}");
                }
                Verdict3::Unknown(e) => {
                    let _ = writeln!(out, "expanding: unknown ({e})");
                }
            }
        }
        _ => {
            let _ = writeln!(out, "periodicity: prefix too short");
        }
    }
    out
}

fn cmd_witness(args: WitnessArgs) -> CmdOutput {
    if args.budget.format == Format::Csv {
        return usage_error("witness does not produce CSV");
    }
    let budget = match to_budget(&args.budget) {
        Ok(b) => b,
        Err(e) => return e,
    };
    let (name, rel) = match load_relation(&args.source, &args.budget) {
        Ok(v) => v,
        Err(e) => return e,
    };
    let mut out = config_line("witness", &name, &rel, &args.budget);

    if args.family {
        if rel.dimension() != 2 {
            return usage_error("--family requires a relation of dimension 2");
        }
        let stream = match lcm_witness(&rel, args.budget.count, budget.window) {
            Ok(s) => s,
            Err(e) => return usage_error(e.to_string()),
        };
        out.push_str("branch: lcm-family\n");
        let values: Vec<String> = stream.values.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "witness ({}): [{}]\n",
            stream.provenance,
            values.join(",")
        ));
        if let Some(e) = &stream.exhausted {
            out.push_str(&format!("witness exhausted: {e}\n"));
        }
        out.push_str(&prefix_verdicts(&stream.values));
        return CmdOutput {
            stdout: out,
            stderr: String::new(),
            code: EXIT_POSITIVE,
        };
    }

    // The pipeline's precondition is a relation judged non-definable.
    match muchnik_test(&rel, &budget) {
        Ok(Verdict3::Holds(_)) => {}
        Ok(Verdict3::Fails) => {
            out.push_str("verdict: DEFINABLE (semilinear); no witness exists\n");
            return CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_NEGATIVE,
            };
        }
        Ok(Verdict3::Unknown(e)) => {
            out.push_str(&format!("verdict: UNKNOWN ({e}); refusing to guess a witness\n"));
            return CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_UNKNOWN,
            };
        }
        Err(e) => return usage_error(e.to_string()),
    }

    match extract_witness(&rel, &budget, args.budget.count) {
        Ok(trace) => {
            if args.budget.format == Format::Lines {
                out.push_str(&trace.lines());
            } else {
                out.push_str(&trace.to_string());
            }
            out.push_str(&prefix_verdicts(&trace.witness.values));
            if !check_period_exceeds_shift(&trace) {
                out.push_str("warning: an empirical norm-set period did not exceed its shift bound\n");
            }
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_POSITIVE,
            }
        }
        Err(PipelineError::DefinableInput) => {
            out.push_str("error: definable input; no witness exists\n");
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_NEGATIVE,
            }
        }
        Err(PipelineError::Unresolved(e)) => {
            out.push_str(&format!("witness: UNKNOWN ({e})\n"));
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: EXIT_UNKNOWN,
            }
        }
        Err(e) => usage_error(e.to_string()),
    }
}

fn parse_grid(text: &str) -> Result<(u64, u64), CmdOutput> {
    let parts: Vec<&str> = text.split('x').collect();
    match parts.as_slice() {
        [n] => {
            let n = n
                .parse()
                .map_err(|_| usage_error(format!("bad grid `{text}`")))?;
            Ok((n, n))
        }
        [a, b] => {
            let a = a
                .parse()
                .map_err(|_| usage_error(format!("bad grid `{text}`")))?;
            let b = b
                .parse()
                .map_err(|_| usage_error(format!("bad grid `{text}`")))?;
            Ok((a, b))
        }
        _ => Err(usage_error(format!("bad grid `{text}`"))),
    }
}

fn cmd_cube_map(args: CubeMapArgs) -> CmdOutput {
    let (name, rel) = match load_relation(&args.source, &args.budget) {
        Ok(v) => v,
        Err(e) => return e,
    };
    if rel.dimension() != 2 {
        return usage_error("cube-map requires a relation of dimension 2");
    }
    if args.s < 1 {
        return usage_error("--s must be >= 1");
    }
    let (w0, w1) = match parse_grid(&args.grid) {
        Ok(v) => v,
        Err(e) => return e,
    };
    // The stderr side carries the config echo; stdout is pure CSV.
    let stderr = config_line("cube-map", &name, &rel, &args.budget);
    let mut out = String::from("x0,x1,in_R,cube_code,s_shiftable\n");
    for x0 in 0..=w0 {
        for x1 in 0..=w1 {
            let p = Point::new(vec![x0, x1]);
            let in_r = match rel.contains(&p) {
                Ok(b) => b,
                Err(e) => return usage_error(e.to_string()),
            };
            let cube = match rel.cube_at(&p, args.k) {
                Ok(c) => c,
                Err(e) => return usage_error(e.to_string()),
            };
            let mut code: u64 = 0;
            let mut cell = 0u64;
            presburger_witness::relation::Cube::for_each_offset(args.k, 2, |off| {
                if cube.contains_offset(off) {
                    code |= 1 << cell;
                }
                cell += 1;
            });
            let shiftable = match s_shiftable(&rel, args.s, args.k, &p) {
                Ok(b) => b,
                Err(e) => return usage_error(e.to_string()),
            };
            let _ = writeln!(
                out,
                "{x0},{x1},{},{code},{}",
                u8::from(in_r),
                u8::from(shiftable)
            );
        }
    }
    CmdOutput {
        stdout: out,
        stderr,
        code: EXIT_POSITIVE,
    }
}

fn parse_assignment(text: &str) -> Result<BTreeMap<String, u64>, CmdOutput> {
    let mut map = BTreeMap::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (var, value) = part
            .split_once('=')
            .ok_or_else(|| usage_error(format!("bad assignment `{part}` (want var=value)")))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| usage_error(format!("bad value in `{part}`")))?;
        map.insert(var.trim().to_string(), value);
    }
    Ok(map)
}

fn cmd_eval(args: EvalArgs) -> CmdOutput {
    if args.budget.format == Format::Csv {
        return usage_error("eval does not produce CSV");
    }
    let (name, rel) = match load_relation(&args.source, &args.budget) {
        Ok(v) => v,
        Err(e) => return e,
    };
    let phi = match parse(&args.formula) {
        Ok(p) => p,
        Err(e) => return usage_error(e.to_string()),
    };
    let assignment = match parse_assignment(&args.assign) {
        Ok(a) => a,
        Err(e) => return e,
    };
    let structure = BoundedStructure::new(&rel, args.budget.qbound);
    let mut out = config_line("eval", &name, &rel, &args.budget);
    match eval_bounded(&phi, &structure, &assignment) {
        Ok(value) => {
            out.push_str(&format!(
                "formula: {phi}\nresult: {value} (Q={})\n",
                args.budget.qbound
            ));
            CmdOutput {
                stdout: out,
                stderr: String::new(),
                code: if value { EXIT_POSITIVE } else { EXIT_NEGATIVE },
            }
        }
        Err(e) => usage_error(e.to_string()),
    }
}
