//! The `powerbracket` command line.
//!
//! Exit codes: 0 on success, 1 when the input fails validation (axiom
//! violations, an invalid biquandle), 2 on usage and I/O errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::biquandle::{Biquandle, BiquandleError};
use crate::catalog;
use crate::diagram::LinkDiagram;
use crate::homset::{counting_invariant, enumerate_colorings};
use crate::linktable;
use crate::powerbracket::{Membership, PowerBracket, VerifyOptions};
use crate::search::{search_space_estimate, search_with, Mode, SearchConfig};
use crate::statesum::{invariant, InvariantResult};

#[derive(Parser, Debug)]
#[command(name = "powerbracket", version, about = "Biquandle power brackets over Z/m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the biquandle axioms for a pair of operation tables.
    CheckBiquandle {
        #[arg(long)]
        biquandle: String,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Check every power bracket axiom.
    VerifyBracket {
        #[arg(long)]
        bracket: String,
        #[command(flatten)]
        membership: MembershipArgs,
        /// Stop at the first violation.
        #[arg(long)]
        first_violation: bool,
        /// Stop after this many violations.
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Count (or list) the colourings of a link by a biquandle.
    Colorings {
        #[arg(long)]
        link: String,
        #[arg(long)]
        biquandle: String,
        /// Print every colouring.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Evaluate the power bracket invariant of one link.
    Eval {
        #[arg(long)]
        link: String,
        #[arg(long)]
        bracket: String,
        /// Also print the raw multiset.
        #[arg(long)]
        multiset: bool,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Evaluate a bracket on every bundled link, grouped by polynomial.
    Tabulate {
        #[arg(long)]
        bracket: String,
        /// Comma-separated link names; defaults to the whole table.
        #[arg(long, value_delimiter = ',')]
        links: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        fmt: FormatArg,
    },
    /// Search for power brackets over a biquandle and modulus.
    Search(SearchArgs),
    /// Size of the search space.
    Estimate {
        #[arg(long)]
        n: u32,
        #[arg(long = "mod")]
        modulus: u64,
        #[command(flatten)]
        fmt: FormatArg,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    biquandle: String,
    #[arg(long = "mod")]
    modulus: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Randomized)]
    mode: ModeArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Candidate budget for randomized mode.
    #[arg(long)]
    budget: Option<u64>,
    /// Write each bracket found to `<dir>/bracket-<k>.bkt`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_results: Option<usize>,
    /// Skip delta = 0 on every nonempty set.
    #[arg(long)]
    skip_trivial: bool,
    /// A bracket to test before searching.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    membership: MembershipArgs,
    #[command(flatten)]
    fmt: FormatArg,
}

#[derive(Args, Debug)]
struct MembershipArgs {
    /// Quantifier reading for the one-component type II equations.
    #[arg(long, value_enum, default_value_t = MembershipArg::Intersection)]
    membership: MembershipArg,
    /// Quantify both type II equations over `C1 ∪ C2`; same as
    /// `--membership strict`.
    #[arg(long)]
    also_derivation_variants: bool,
}

impl MembershipArgs {
    fn get(&self) -> Membership {
        if self.also_derivation_variants {
            return Membership::Strict;
        }
        match self.membership {
            MembershipArg::Intersection => Membership::Intersection,
            MembershipArg::Definition => Membership::Definition,
            MembershipArg::Derivation => Membership::Derivation,
            MembershipArg::Strict => Membership::Strict,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MembershipArg {
    Intersection,
    Definition,
    Derivation,
    Strict,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Exhaustive,
    Randomized,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

type CliResult = Result<i32, Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::CheckBiquandle { biquandle, fmt } => check_biquandle(&biquandle, fmt.format, out),
        Command::VerifyBracket {
            bracket,
            membership,
            first_violation,
            cap,
            fmt,
        } => {
            let b = resolve_bracket(&bracket)?;
            let opts = VerifyOptions {
                membership: membership.get(),
                cap,
                first_violation,
            };
            let report = b.verify(&opts);
            let valid = report.is_empty();
            if fmt.format == Format::Json {
                emit_json(
                    out,
                    &json!({
                        "valid": valid,
                        "membership": opts.membership,
                        "violations": report.violations,
                        "truncated": report.truncated,
                    }),
                )?;
            } else if valid {
                line(out, "valid")?;
            } else {
                line(
                    out,
                    &format!(
                        "invalid: {} violation(s){}",
                        report.violations.len(),
                        if report.truncated { " (truncated)" } else { "" }
                    ),
                )?;
                for v in &report.violations {
                    line(out, &format!("  {v}"))?;
                }
            }
            Ok(if valid { 0 } else { 1 })
        }
        Command::Colorings {
            link,
            biquandle,
            list,
            fmt,
        } => {
            let d = resolve_link(&link)?;
            let x = resolve_biquandle(&biquandle)?;
            let count = counting_invariant(&d, &x);
            let cols = if list { enumerate_colorings(&d, &x) } else { Vec::new() };
            if fmt.format == Format::Json {
                let mut v = json!({ "link": d.name(), "count": count });
                if list {
                    v["semiarcs"] = json!(d.semiarcs());
                    v["colorings"] = json!(cols);
                }
                emit_json(out, &v)?;
            } else {
                line(out, &count.to_string())?;
                for c in &cols {
                    let arcs: Vec<String> = c.pairs(&d).iter().map(|(s, v)| format!("{s}:{v}")).collect();
                    let mut text = arcs.join(" ");
                    if !c.loops.is_empty() {
                        let loops: Vec<String> = c.loops.iter().map(|v| v.to_string()).collect();
                        text.push_str(&format!(" loops:{}", loops.join(",")));
                    }
                    line(out, &text)?;
                }
            }
            Ok(0)
        }
        Command::Eval {
            link,
            bracket,
            multiset,
            fmt,
        } => {
            let d = resolve_link(&link)?;
            let b = resolve_bracket(&bracket)?;
            let r = invariant(&d, b.biquandle(), &b).map_err(usage)?;
            if fmt.format == Format::Json {
                emit_json(out, &EvalJson::new(d.name(), &r))?;
            } else {
                line(out, &r.to_polynomial())?;
                if multiset {
                    line(out, &format_multiset(&r))?;
                }
            }
            Ok(0)
        }
        Command::Tabulate {
            bracket,
            links,
            jobs,
            fmt,
        } => tabulate(&bracket, links, jobs, fmt.format, out),
        Command::Search(args) => search_cmd(args, out),
        Command::Estimate { n, modulus, fmt } => {
            let e = search_space_estimate(n, modulus).map_err(usage)?;
            if fmt.format == Format::Json {
                emit_json(out, &e)?;
            } else {
                line(out, &format!("quoted formula 4n^(2m+1)(2^n-1)^m: {}", e.quoted_formula))?;
                line(out, &format!("naive parameter count: {}", e.naive))?;
            }
            Ok(0)
        }
    }
}

fn check_biquandle(arg: &str, format: Format, out: &mut dyn Write) -> CliResult {
    let text = read_named(arg, catalog::biquandle_text)?;
    match Biquandle::parse(&text) {
        Ok(x) => {
            let orbits = x.orbit_decomposition();
            if format == Format::Json {
                emit_json(out, &json!({ "valid": true, "order": x.order(), "orbits": orbits }))?;
            } else {
                line(out, "valid")?;
                let blocks: Vec<String> = orbits
                    .iter()
                    .map(|b| format!("{{{}}}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                line(out, &format!("orbits: {}", blocks.join(" ")))?;
            }
            Ok(0)
        }
        Err(BiquandleError::Axioms(violations)) => {
            if format == Format::Json {
                emit_json(out, &json!({ "valid": false, "violations": violations }))?;
            } else {
                line(out, &format!("invalid: {} violation(s)", violations.len()))?;
                for v in &violations {
                    line(out, &format!("  {v}"))?;
                }
            }
            Ok(1)
        }
        Err(e) => Err(usage(format!("{arg}: {e}"))),
    }
}

#[derive(Serialize)]
struct EvalJson {
    link: String,
    polynomial: String,
    modulus: u32,
    colorings: u64,
    /// Residue (as a string key) to multiplicity.
    multiset: BTreeMap<String, u64>,
}

impl EvalJson {
    fn new(name: &str, r: &InvariantResult) -> Self {
        Self {
            link: name.to_string(),
            polynomial: r.to_polynomial(),
            modulus: r.modulus,
            colorings: r.total(),
            multiset: r.multiset.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

fn format_multiset(r: &InvariantResult) -> String {
    let parts: Vec<String> = r.multiset.iter().map(|(v, k)| format!("{v}x{k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn tabulate(bracket: &str, links: Option<Vec<String>>, jobs: usize, format: Format, out: &mut dyn Write) -> CliResult {
    use rayon::prelude::*;
    let b = resolve_bracket(bracket)?;
    let names: Vec<String> = links.unwrap_or_else(|| linktable::list().into_iter().map(String::from).collect());
    let diagrams: Vec<LinkDiagram> = names.iter().map(|n| resolve_link(n)).collect::<Result<_, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(usage)?;
    let results: Vec<InvariantResult> = pool
        .install(|| {
            diagrams
                .par_iter()
                .map(|d| invariant(d, b.biquandle(), &b))
                .collect::<Result<_, _>>()
        })
        .map_err(usage)?;
    let mut rows: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (name, r) in names.iter().zip(&results) {
        rows.entry(r.to_polynomial()).or_default().push(name.clone());
    }
    if format == Format::Json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(p, l)| json!({ "polynomial": p, "links": l }))
            .collect();
        let each: Vec<_> = names.iter().zip(&results).map(|(n, r)| EvalJson::new(n, r)).collect();
        emit_json(out, &json!({ "rows": rows, "results": each }))?;
    } else {
        let width = rows.keys().map(|p| p.chars().count()).max().unwrap_or(0);
        for (p, l) in &rows {
            line(out, &format!("{p:<width$} | {}", l.join(", ")))?;
        }
    }
    Ok(0)
}

fn search_cmd(args: SearchArgs, out: &mut dyn Write) -> CliResult {
    let x = resolve_biquandle(&args.biquandle)?;
    let initial = args.initial.as_deref().map(resolve_bracket).transpose()?;
    let cfg = SearchConfig {
        biquandle: x,
        modulus: args.modulus,
        mode: match args.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Randomized => Mode::Randomized,
        },
        seed: args.seed,
        max_candidates: args.budget,
        max_results: args.max_results,
        membership: args.membership.get(),
        skip_trivial: args.skip_trivial,
        block_filter: true,
        initial,
        jobs: args.jobs,
    };
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    }
    let mut found: Vec<PowerBracket> = Vec::new();
    let mut io_error = None;
    let stats = search_with(&cfg, |b| {
        if let Some(dir) = &args.out {
            let path = dir.join(format!("bracket-{}.bkt", found.len() + 1));
            if let Err(e) = std::fs::write(&path, b.serialize()) {
                io_error = Some(format!("{}: {e}", path.display()));
                return ControlFlow::Break(());
            }
        }
        found.push(b.clone());
        ControlFlow::Continue(())
    })
    .map_err(usage)?;
    if let Some(e) = io_error {
        return Err(usage(e));
    }
    if args.fmt.format == Format::Json {
        let brackets: Vec<String> = found.iter().map(|b| b.serialize()).collect();
        emit_json(out, &json!({ "stats": stats, "brackets": brackets }))?;
    } else {
        line(
            out,
            &format!(
                "tested {} candidates, found {} bracket(s)",
                stats.candidates, stats.emitted
            ),
        )?;
        if args.out.is_none() {
            for (i, b) in found.iter().enumerate() {
                line(out, &format!("# bracket {}", i + 1))?;
                write!(out, "{}", b.serialize()).map_err(|e| usage(e.to_string()))?;
            }
        }
    }
    Ok(0)
}

// Argument resolution: an existing file wins, then bundled names.

fn read_named(arg: &str, bundled: fn(&str) -> Option<&'static str>) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")));
    }
    bundled(arg)
        .map(String::from)
        .ok_or_else(|| usage(format!("{arg}: no such file or bundled name")))
}

fn resolve_bracket(arg: &str) -> Result<PowerBracket, Failure> {
    let text = read_named(arg, catalog::bracket_text)?;
    PowerBracket::parse(&text).map_err(|e| usage(format!("{arg}: {e}")))
}

fn resolve_biquandle(arg: &str) -> Result<Biquandle, Failure> {
    let text = read_named(arg, catalog::biquandle_text)?;
    Biquandle::parse(&text).map_err(|e| usage(format!("{arg}: {e}")))
}

fn resolve_link(arg: &str) -> Result<LinkDiagram, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
        let d = LinkDiagram::parse(&text).map_err(|e| usage(format!("{arg}: {e}")))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
        return Ok(if d.name().is_empty() { d.with_name(stem) } else { d });
    }
    if linktable::list().contains(&arg) {
        return linktable::load(arg)
            .map(|e| e.diagram)
            .map_err(|e| usage(e.to_string()));
    }
    linktable::load_move(arg).map_err(|_| usage(format!("{arg}: no such file or bundled link")))
}

fn line(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| usage(e.to_string()))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    line(out, &text)
}
