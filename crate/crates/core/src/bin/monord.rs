use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use monord::census::{
    census, gorenstein_n4_families, match_family, CensusQuery, CensusResult, Filter,
};
use monord::classify::{classify_with, ClassificationReport};
use monord::duality::{dual_level, is_projective, lattice_violation, LatticeType};
use monord::format::{parse_level, parse_vector};
use monord::level::{normalize_positive, DEFAULT_SEARCH_CAP};
use monord::oracle::{bass_oracle_with_budget, overorders_with_budget, BassOracleVerdict};
use monord::{Error, LevelMatrix, Limits};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

/// Classify monomial orders over a local field from their level matrices.
///
/// Level files hold `n` on the first line and then `n` rows of `n` integers;
/// `#` comments and blank lines are ignored. A file starting with `{` is read
/// as JSON: {"n": 2, "m": [[0, 0], [1, 0]]}. Use `-` for standard input.
///
/// Exit status: 0 success, 1 negative verdict for the queried predicate,
/// 2 input error, 3 classifier and oracle disagree.
#[derive(Debug, Parser)]
#[command(name = "monord", version)]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Config {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest n for which n! permutation searches are attempted.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP, global = true,
          value_parser = positive_usize)]
    search_cap: usize,

    /// Largest candidate count an enumeration may visit.
    #[arg(long, env = "MONORD_BUDGET", default_value_t = monord::oracle::DEFAULT_BUDGET,
          global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl Config {
    fn limits(&self) -> Limits {
        Limits {
            search_cap: self.search_cap,
            budget: self.budget,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the order condition; exit 1 and print the first violation if it fails.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the full classification report.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Cross-check the Bass verdict against brute-force overorder enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the dual level, raw and with its first row normalized to zero.
    Dual { file: PathBuf },
    /// Decide whether a lattice type is projective over the order.
    Projective {
        file: PathBuf,
        /// Lattice exponents, e.g. `0,1,1`.
        #[arg(long = "type", allow_hyphen_values = true)]
        lattice: String,
    },
    /// Enumerate every order containing the given one.
    Overorders {
        file: PathBuf,
        /// Print every overorder, not only the count.
        #[arg(long)]
        dump: bool,
    },
    /// Enumerate orders of size n up to conjugation and classify each class.
    Census {
        #[arg(long)]
        n: usize,
        /// Entries of the zero-first-row representatives range over [0, bound].
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Keep only classes passing every listed filter
        /// (gorenstein, eichler, hereditary, bass, upper_triangular).
        #[arg(long = "filter")]
        filters: Vec<Filter>,
        /// Print every class.
        #[arg(long)]
        dump: bool,
        /// Match Gorenstein classes against the bundled size-4 family table.
        #[arg(long)]
        families: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: format!("{}: {err}", path.display()),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("monord: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    let cfg = &cli.config;
    match &cli.command {
        Command::Check { files } => cmd_check(cfg, files, out),
        Command::Classify { files, oracle } => cmd_classify(cfg, files, *oracle, out),
        Command::Dual { file } => cmd_dual(cfg, file, out),
        Command::Projective { file, lattice } => cmd_projective(cfg, file, lattice, out),
        Command::Overorders { file, dump } => cmd_overorders(cfg, file, *dump, out),
        Command::Census {
            n,
            bound,
            filters,
            dump,
            families,
        } => cmd_census(cfg, *n, *bound, filters, *dump, *families, out),
    }
}

fn read_level(path: &Path) -> std::result::Result<LevelMatrix, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(path, e))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(path, e))?
    };
    parse_level(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Failure {
            code: EXIT_INPUT,
            message: format!("{}:{line}:{column}: {message}", path.display()),
        },
        other => Failure::input(path, other),
    })
}

fn io_fail(e: io::Error) -> Failure {
    // reader went away (`| head`): stop quietly
    if e.kind() == io::ErrorKind::BrokenPipe {
        return Failure {
            code: 0,
            message: String::new(),
        };
    }
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

fn library_fail(path: &Path, e: Error) -> Failure {
    Failure::input(path, e)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(cfg: &Config, files: &[PathBuf], out: &mut impl Write) -> Outcome {
    let mut code = EXIT_OK;
    for path in files {
        let m = read_level(path)?;
        let violation = m.order_violation();
        if violation.is_some() {
            code = EXIT_NEGATIVE;
        }
        match cfg.format {
            Format::Json => writeln!(
                out,
                "{}",
                json!({
                    "file": path.display().to_string(),
                    "is_order": violation.is_none(),
                    "violation": violation,
                })
            ),
            Format::Text => match violation {
                None => writeln!(out, "{}: order", path.display()),
                Some(v) => writeln!(out, "{}: not an order: {v}", path.display()),
            },
        }
        .map_err(io_fail)?;
    }
    Ok(code)
}

fn render_report(r: &ClassificationReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "level             {}", r.level)?;
    if !r.is_order {
        let v = r
            .witnesses
            .order_violation
            .expect("non-orders carry a violation");
        return writeln!(out, "order             no ({v})");
    }
    writeln!(out, "order             yes")?;
    if let Some(c) = &r.canonical {
        writeln!(out, "canonical         {c}")?;
    }
    writeln!(out, "upper triangular  {}", yes_no(r.is_upper_triangular))?;
    writeln!(
        out,
        "gorenstein        {}",
        yes_no(r.is_gorenstein == Some(true))
    )?;
    match &r.eichler {
        None => writeln!(out, "eichler           no")?,
        Some(s) => {
            let inv: Vec<String> = s.invariant().iter().map(usize::to_string).collect();
            write!(
                out,
                "eichler           yes, period {}, invariant ({})",
                s.period(),
                inv.join(",")
            )?;
            match s.a() {
                Some(a) => writeln!(out, ", a = {a}")?,
                None => writeln!(out)?,
            }
        }
    }
    writeln!(
        out,
        "hereditary        {}",
        yes_no(r.is_hereditary == Some(true))
    )?;
    let reason = serde_json::to_value(r.bass_reason).expect("reason serializes");
    writeln!(
        out,
        "bass              {} ({})",
        yes_no(r.is_bass == Some(true)),
        reason.as_str().unwrap_or("-")
    )
}

fn cmd_classify(cfg: &Config, files: &[PathBuf], oracle: bool, out: &mut impl Write) -> Outcome {
    let mut code = EXIT_OK;
    for path in files {
        let m = read_level(path)?;
        let report = classify_with(&m, cfg.search_cap).map_err(|e| library_fail(path, e))?;
        if !report.is_order {
            code = code.max(EXIT_NEGATIVE);
        }
        let check: Option<BassOracleVerdict> = if oracle && report.is_order {
            Some(bass_oracle_with_budget(&m, cfg.budget).map_err(|e| library_fail(path, e))?)
        } else {
            None
        };
        let agrees = check.as_ref().map(|c| Some(c.is_bass) == report.is_bass);
        if agrees == Some(false) {
            code = EXIT_DISAGREE;
        }
        match cfg.format {
            Format::Json => {
                let value = match &check {
                    None => json!({ "file": path.display().to_string(), "report": report }),
                    Some(c) => json!({
                        "file": path.display().to_string(),
                        "report": report,
                        "oracle": c,
                        "oracle_agrees": agrees,
                    }),
                };
                writeln!(out, "{value}").map_err(io_fail)?;
            }
            Format::Text => {
                if files.len() > 1 {
                    writeln!(out, "== {}", path.display()).map_err(io_fail)?;
                }
                render_report(&report, out).map_err(io_fail)?;
                if let Some(c) = &check {
                    write!(
                        out,
                        "oracle bass       {} ({} overorders",
                        yes_no(c.is_bass),
                        c.overorder_count
                    )
                    .map_err(io_fail)?;
                    match &c.witness {
                        Some(w) => writeln!(out, ", non-Gorenstein overorder {w})"),
                        None => writeln!(out, ")"),
                    }
                    .map_err(io_fail)?;
                    writeln!(out, "oracle agrees     {}", yes_no(agrees == Some(true)))
                        .map_err(io_fail)?;
                }
            }
        }
        if agrees == Some(false) {
            eprintln!(
                "monord: {}: classifier and overorder oracle disagree on the Bass verdict",
                path.display()
            );
        }
    }
    Ok(code)
}

fn cmd_dual(cfg: &Config, path: &Path, out: &mut impl Write) -> Outcome {
    let m = read_level(path)?;
    let dual = dual_level(&m).map_err(|e| library_fail(path, e))?;
    match cfg.format {
        Format::Json => writeln!(out, "{}", json!(dual)),
        Format::Text => writeln!(
            out,
            "raw         {}\nnormalized  {}",
            dual.raw, dual.normalized
        ),
    }
    .map_err(io_fail)?;
    Ok(EXIT_OK)
}

fn cmd_projective(cfg: &Config, path: &Path, lattice: &str, out: &mut impl Write) -> Outcome {
    let m = read_level(path)?;
    let l = LatticeType(parse_vector(lattice).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("--type: {e}"),
    })?);
    if let Some((row, col)) = lattice_violation(&m, &l).map_err(|e| library_fail(path, e))? {
        return Err(library_fail(path, Error::NotALattice { row, col }));
    }
    // move the order and the lattice to zero first row together
    let pos = normalize_positive(&m).map_err(|e| library_fail(path, e))?;
    let shifted = LatticeType(pos.applied.act_on_type(&l.0));
    let witness = is_projective(&pos.level, &shifted).map_err(|e| library_fail(path, e))?;
    match cfg.format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({
                "normalized_level": pos.level,
                "normalized_type": shifted,
                "is_projective": witness.is_some(),
                "witness": witness,
            })
        ),
        Format::Text => match witness {
            Some(w) => writeln!(
                out,
                "projective: type {:?} = column {} of {} shifted by {}",
                shifted.0,
                w.column + 1,
                pos.level,
                w.shift
            ),
            None => writeln!(
                out,
                "not projective: type {:?} is no shifted column of {}",
                shifted.0, pos.level
            ),
        },
    }
    .map_err(io_fail)?;
    Ok(if witness.is_some() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_overorders(cfg: &Config, path: &Path, dump: bool, out: &mut impl Write) -> Outcome {
    let m = read_level(path)?;
    let set = overorders_with_budget(&m, cfg.budget).map_err(|e| library_fail(path, e))?;
    match cfg.format {
        Format::Json => {
            let value = if dump {
                json!({ "base": set.base, "count": set.members.len(), "members": set.members })
            } else {
                json!({ "base": set.base, "count": set.members.len() })
            };
            writeln!(out, "{value}").map_err(io_fail)?;
        }
        Format::Text => {
            writeln!(out, "{} overorders of {}", set.members.len(), set.base).map_err(io_fail)?;
            if dump {
                for member in &set.members {
                    writeln!(out, "{member}").map_err(io_fail)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn census_fail(e: Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: format!("census: {e}"),
    }
}

fn cmd_census(
    cfg: &Config,
    n: usize,
    bound: i64,
    filters: &[Filter],
    dump: bool,
    families: bool,
    out: &mut impl Write,
) -> Outcome {
    let q = CensusQuery {
        n,
        bound,
        filters: filters.to_vec(),
    };
    let result = census(&q, &cfg.limits()).map_err(census_fail)?;
    let family_rows = if families {
        if n != 4 {
            return Err(Failure {
                code: EXIT_INPUT,
                message: "--families needs --n 4".into(),
            });
        }
        Some(family_table(&result, bound))
    } else {
        None
    };

    match cfg.format {
        Format::Json => {
            for class in &result.classes {
                writeln!(out, "{}", json!(class)).map_err(io_fail)?;
            }
            let mut summary = json!({
                "query": result.query,
                "candidates": result.candidates,
                "orders": result.orders,
                "totals": result.totals,
            });
            if let Some(rows) = &family_rows {
                summary["families"] = json!(rows);
            }
            writeln!(out, "{summary}").map_err(io_fail)?;
        }
        Format::Text => {
            render_census(&result, dump, out).map_err(io_fail)?;
            if let Some(rows) = &family_rows {
                render_families(rows, out).map_err(io_fail)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(serde::Serialize)]
struct FamilyRow {
    family: String,
    /// In-bound parameter choices with their class, if present in the census.
    instantiations: Vec<(String, Option<LevelMatrix>)>,
}

#[derive(serde::Serialize)]
struct FamilyTable {
    rows: Vec<FamilyRow>,
    unmatched_gorenstein_classes: Vec<LevelMatrix>,
}

fn family_table(result: &CensusResult, bound: i64) -> FamilyTable {
    let fams = gorenstein_n4_families();
    let gorenstein: Vec<&LevelMatrix> = result
        .classes
        .iter()
        .filter(|c| c.report.is_gorenstein == Some(true))
        .map(|c| &c.canonical)
        .collect();
    let mut matched = vec![false; gorenstein.len()];
    let rows = fams
        .iter()
        .map(|fam| {
            let instantiations = fam
                .instantiations_within(bound)
                .into_iter()
                .map(|p| {
                    let hit = gorenstein
                        .iter()
                        .position(|c| match_family(c, fam) == Some(p));
                    if let Some(i) = hit {
                        matched[i] = true;
                    }
                    (p.to_string(), hit.map(|i| gorenstein[i].clone()))
                })
                .collect();
            FamilyRow {
                family: fam.name.clone(),
                instantiations,
            }
        })
        .collect();
    let unmatched_gorenstein_classes = gorenstein
        .iter()
        .zip(&matched)
        .filter(|(_, &m)| !m)
        .map(|(c, _)| (*c).clone())
        .collect();
    FamilyTable {
        rows,
        unmatched_gorenstein_classes,
    }
}

fn render_census(r: &CensusResult, dump: bool, out: &mut impl Write) -> io::Result<()> {
    let filters: Vec<&str> = r.query.filters.iter().map(|f| f.name()).collect();
    writeln!(
        out,
        "census n = {}, bound = {}, filters = [{}]",
        r.query.n,
        r.query.bound,
        filters.join(", ")
    )?;
    writeln!(out, "candidates        {}", r.candidates)?;
    writeln!(out, "orders            {}", r.orders)?;
    writeln!(out, "classes           {}", r.totals.classes)?;
    for f in Filter::ALL {
        writeln!(out, "  {:<18}{}", f.name(), r.totals.get(f))?;
    }
    if dump {
        for c in &r.classes {
            let rep = &c.report;
            let mut tags = Vec::new();
            if rep.is_gorenstein == Some(true) {
                tags.push("gorenstein".to_string());
            }
            if let Some(s) = &rep.eichler {
                tags.push(format!("eichler t={}", s.period()));
            }
            if rep.is_hereditary == Some(true) {
                tags.push("hereditary".into());
            }
            if rep.is_bass == Some(true) {
                tags.push("bass".into());
            }
            writeln!(out, "{}  x{}  {}", c.canonical, c.count, tags.join(", "))?;
        }
    }
    Ok(())
}

fn render_families(t: &FamilyTable, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "families")?;
    for row in &t.rows {
        for (params, hit) in &row.instantiations {
            match hit {
                Some(c) => writeln!(out, "  {:<18}{:<12}{c}", row.family, params)?,
                None => writeln!(out, "  {:<18}{:<12}MISSING", row.family, params)?,
            }
        }
    }
    for c in &t.unmatched_gorenstein_classes {
        writeln!(out, "  unmatched Gorenstein class {c}")?;
    }
    Ok(())
}
