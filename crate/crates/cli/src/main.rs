use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use balvoa_core::appendix::{self, AppendixRow, Listed};
use balvoa_core::arith::Q;
use balvoa_core::dgm::{classify_realization, LatticeCatalog, Realization};
use balvoa_core::elimination::{run_pipeline, Config, Report, Stage, Status};
use balvoa_core::qseries::{compare_with_published, derive_moment_identities};
use balvoa_core::rootsys::{enumerate_brs, parse_symbol};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "balvoa", version, about = "Balanced root systems of holomorphic VOAs and their elimination tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the balanced semisimple root systems with central charge c and abelian rank f.
    Enumerate {
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 0)]
        f: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the elimination tests on root systems given by symbol.
    Test {
        #[arg(required = true)]
        symbols: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether root systems are realized by lattice theories or DGM orbifolds.
    Classify {
        #[arg(required = true)]
        symbols: Vec<String>,
        /// Lattice catalog; the shipped rank-32 catalog when omitted.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Derive the weight-2 moment identities and check them against the published constants.
    DeriveIdentities {
        #[arg(long, default_value_t = 32)]
        c: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Re-run the tests on rows of the appendix table and compare verdicts.
    VerifyAppendix {
        /// Table in CSV form; the shipped c = 32 table when omitted.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        min_dim_v1: Option<u64>,
        #[arg(long)]
        max_dim_v1: Option<u64>,
        /// Only these row indices (comma separated).
        #[arg(long, value_delimiter = ',')]
        rows: Vec<u32>,
        /// Also compare the realization column against the classifier.
        #[arg(long)]
        realizations: bool,
        /// Write the per-row reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Stages to run, comma separated (dim, jac, char).
    #[arg(long, value_delimiter = ',', default_value = "dim,jac,char")]
    stages: Vec<String>,
    #[arg(long, default_value_t = 20_000)]
    max_nodes: u64,
    /// Wall-clock limit per stage in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    #[arg(long, default_value_t = 3)]
    char_depth: usize,
    #[arg(long, default_value_t = 4_000)]
    max_variables: usize,
    #[arg(long, default_value_t = 2_000_000)]
    module_cap: usize,
    /// Treat conformal-weight-1 modules as unknowns.
    #[arg(long)]
    weight_one: bool,
    /// Omit sums of pairs of Cartan probes in the Jacobi test.
    #[arg(long)]
    no_pairs: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Keep timings in the output (they make it non-reproducible).
    #[arg(long)]
    timings: bool,
}

impl RunArgs {
    fn config(&self) -> Result<Config> {
        let mut cfg = Config::default();
        cfg.stages = self
            .stages
            .iter()
            .map(|s| Stage::parse(s).with_context(|| format!("unknown stage {s:?}")))
            .collect::<Result<_>>()?;
        cfg.char_depth = self.char_depth;
        cfg.max_variables = self.max_variables;
        cfg.module_cap = self.module_cap;
        cfg.weight_one_modules = self.weight_one;
        cfg.h_pairs = !self.no_pairs;
        cfg.budget.max_nodes = self.max_nodes;
        cfg.budget.time_limit = self.time_limit.map(Duration::from_secs);
        Ok(cfg)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        Ok(rayon::ThreadPoolBuilder::new().num_threads(self.threads.max(1)).build()?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

/// Failures that map to the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn parse_c(text: &str) -> Result<Q> {
    text.parse::<Q>().map_err(|_| usage(format!("invalid central charge {text:?}")))
}

fn strip_timings(r: &mut Report) {
    for s in &mut r.stages {
        s.millis = 0;
    }
    r.verdict.elapsed = Duration::ZERO;
}

fn run_reports(symbols: &[String], run: &RunArgs) -> Result<Vec<Report>> {
    let cfg = run.config().map_err(|e| usage(e.to_string()))?;
    let systems = symbols
        .iter()
        .map(|s| parse_symbol(s).map_err(|e| usage(format!("{s}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let pool = run.pool()?;
    let mut reports = pool.install(|| {
        systems.par_iter().map(|rs| run_pipeline(rs, &cfg).map_err(|e| usage(format!("{rs}: {e}")))).collect::<Result<Vec<_>>>()
    })?;
    if !run.timings {
        reports.iter_mut().for_each(strip_timings);
    }
    Ok(reports)
}

fn verdict_text(r: &Report) -> String {
    match r.verdict.stage {
        Some(s) => format!("{} ({s})", r.verdict.status),
        None => r.verdict.status.to_string(),
    }
}

fn cmd_enumerate(out: &mut impl Write, c: &str, f: u32, format: Format) -> Result<()> {
    let c = parse_c(c)?;
    let list = enumerate_brs(&c, f)?;
    #[derive(Serialize)]
    struct Row {
        index: usize,
        dim_v1: u64,
        symbol: String,
    }
    let rows: Vec<Row> =
        list.iter().enumerate().map(|(i, rs)| Row { index: i + 1, dim_v1: rs.dim(), symbol: rs.symbol() }).collect();
    match format {
        Format::Text => {
            for r in &rows {
                writeln!(out, "{}", r.symbol)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
    }
    Ok(())
}

fn cmd_test(out: &mut impl Write, symbols: &[String], run: &RunArgs, format: Format) -> Result<()> {
    let reports = run_reports(symbols, run)?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["symbol", "d1", "status", "stage", "detail"])?;
            for r in &reports {
                let stage = r.verdict.stage.map(|s| s.to_string()).unwrap_or_default();
                w.write_record([&r.symbol, &r.d1.to_string(), &r.verdict.status.to_string(), &stage, &r.verdict.detail])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(out, "{}  d1={}  {}", r.symbol, r.d1, verdict_text(r))?;
                for s in &r.stages {
                    writeln!(out, "  {:<5} {:<12} {}", s.name, s.status.to_string(), s.detail)?;
                }
            }
        }
    }
    Ok(())
}

fn load_catalog(path: Option<&PathBuf>) -> Result<LatticeCatalog> {
    match path {
        None => Ok(LatticeCatalog::rank32()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            text.parse().map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_classify(out: &mut impl Write, symbols: &[String], catalog: Option<&PathBuf>) -> Result<()> {
    let cat = load_catalog(catalog)?;
    for s in symbols {
        let rs = parse_symbol(s).map_err(|e| usage(format!("{s}: {e}")))?;
        let r = classify_realization(&rs, Some(&cat));
        let note = if r == Realization::Open && rs.central_charge() != Q::from_integer(cat.rank.into()) {
            format!("  (no catalog of rank {})", rs.central_charge())
        } else {
            String::new()
        };
        writeln!(out, "{}\t{r}{note}", rs.symbol())?;
    }
    Ok(())
}

fn cmd_derive_identities(out: &mut impl Write, c: u32, format: Format) -> Result<bool> {
    let set = derive_moment_identities(c).map_err(|e| usage(e.to_string()))?;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&set)?)?,
        _ => {
            writeln!(out, "c = {c}")?;
            for id in &set.identities {
                writeln!(out, "  [degree {:>2}, weight {:>2}]  {id}", id.degree, id.weight)?;
            }
            for (n, k, dim) in &set.underdetermined {
                writeln!(out, "  [degree {n:>2}, weight {k:>2}]  skipped: {dim}-dimensional form space")?;
            }
        }
    }
    match compare_with_published(&set) {
        Ok(()) => {
            writeln!(out, "all constants agree with the published identities")?;
            Ok(true)
        }
        Err(e) => {
            writeln!(out, "MISMATCH: {e}")?;
            Ok(false)
        }
    }
}

/// What the table says about one stage, given the stages that ran before it.
fn expectation(listed: Listed, stage: Stage) -> Option<bool> {
    let order = |s: Stage| [Stage::Dim, Stage::Jac, Stage::Char].iter().position(|t| *t == s).unwrap();
    match listed.ruled_out_by() {
        Some(s) if s == stage => Some(true),
        Some(s) if order(stage) < order(s) => Some(false),
        Some(_) => None,
        None if listed == Listed::Pass => Some(false),
        // unknown rows: only the dimension test is known to pass, apart from two rows it never finished
        None => (stage == Stage::Dim).then_some(false),
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    mismatches: Vec<String>,
    undecided: Vec<String>,
}

fn compare_row(row: &AppendixRow, rep: &Report, tally: &mut Tally) {
    for rec in &rep.stages {
        let stage = Stage::parse(&rec.name).expect("stage names round trip");
        let Some(expect_out) = expectation(row.verdict, stage) else { continue };
        tally.checked += 1;
        let line = format!(
            "row {:>3} {:<28} {:<4} table {:<7} ours {}",
            row.index,
            row.symbol,
            stage,
            row.verdict.name(),
            rec.status
        );
        match rec.status {
            Status::Inconclusive => tally.undecided.push(line),
            Status::RuledOut if !expect_out => tally.mismatches.push(line),
            Status::Passed if expect_out => tally.mismatches.push(line),
            _ => {}
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify_appendix(
    out: &mut impl Write,
    fixture: Option<&PathBuf>,
    min_dim: Option<u64>,
    max_dim: Option<u64>,
    only: &[u32],
    realizations: bool,
    report_path: Option<&PathBuf>,
    run: &RunArgs,
) -> Result<bool> {
    let rows = match fixture {
        None => appendix::c32_rows(),
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            appendix::read_rows(f).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
    };
    let selected: Vec<&AppendixRow> = rows
        .iter()
        .filter(|r| min_dim.is_none_or(|m| r.dim_v1 >= m))
        .filter(|r| max_dim.is_none_or(|m| r.dim_v1 <= m))
        .filter(|r| only.is_empty() || only.contains(&r.index))
        .collect();
    let symbols: Vec<String> = selected.iter().map(|r| r.symbol.clone()).collect();
    let reports = run_reports(&symbols, run)?;
    let mut tally = Tally::default();
    for (row, rep) in selected.iter().zip(&reports) {
        compare_row(row, rep, &mut tally);
    }
    if realizations {
        let cat = LatticeCatalog::rank32();
        for row in selected.iter().filter(|r| r.verdict == Listed::Pass) {
            let ours = classify_realization(&row.root_system()?, Some(&cat));
            tally.checked += 1;
            if ours != row.realization {
                tally.mismatches.push(format!(
                    "row {:>3} {:<28} realization table {} ours {ours}",
                    row.index, row.symbol, row.realization
                ));
            }
        }
    }
    if let Some(p) = report_path {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        serde_json::to_writer_pretty(f, &reports)?;
    }
    for line in &tally.mismatches {
        writeln!(out, "MISMATCH  {line}")?;
    }
    for line in &tally.undecided {
        writeln!(out, "UNDECIDED {line}")?;
    }
    writeln!(
        out,
        "{} rows, {} comparisons, {} mismatches, {} undecided",
        selected.len(),
        tally.checked,
        tally.mismatches.len(),
        tally.undecided.len()
    )?;
    Ok(tally.mismatches.is_empty())
}

fn dispatch(cli: Cli) -> Result<u8> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let ok = match &cli.command {
        Command::Enumerate { c, f, format } => cmd_enumerate(&mut out, c, *f, *format).map(|_| true)?,
        Command::Test { symbols, run, format } => cmd_test(&mut out, symbols, run, *format).map(|_| true)?,
        Command::Classify { symbols, catalog } => cmd_classify(&mut out, symbols, catalog.as_ref()).map(|_| true)?,
        Command::DeriveIdentities { c, format } => cmd_derive_identities(&mut out, *c, *format)?,
        Command::VerifyAppendix { fixture, min_dim_v1, max_dim_v1, rows, realizations, report, run } => {
            cmd_verify_appendix(
                &mut out,
                fixture.as_ref(),
                *min_dim_v1,
                *max_dim_v1,
                rows,
                *realizations,
                report.as_ref(),
                run,
            )?
        }
    };
    out.flush()?;
    Ok(if ok { 0 } else { EXIT_MISMATCH })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_INTERNAL)
            }
        }
    }
}
