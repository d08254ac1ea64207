//! Command-line driver: verify coefficient vectors, emit the explicit odd-m
//! witness, run box searches, tabulate invariants over parameter ranges, and
//! run the built-in identity suites.
//!
//! Exit codes: 0 on success (and criterion true), 1 when the computation
//! succeeded but the criterion is false (or a search found nothing), 2 on
//! usage errors (bad flags, malformed or out-of-shape input, ceiling
//! exceeded), 3 on internal assertion failures.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cpacs_core::{
    acs_criterion, explicit_witness, hirzebruch_check, invariants, run_selftest, search_witnesses,
    SacsCoefficients, SearchBox, SearchError, SearchLimits, SearchMode, TopologyError,
    WitnessRecord,
};

const SCHEMA_VERSION: &str = "1";
const CEILING_ENV: &str = "CPACS_SEARCH_CEILING";

#[derive(Parser)]
#[command(
    name = "cpacs",
    version,
    about = "Exact witness search for almost complex structures on connected sums of \
             complex projective spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum RecordFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum SearchFormat {
    #[default]
    Text,
    Json,
    Jsonl,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum TableFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum ModeArg {
    #[default]
    BruteForce,
    Decomposed,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the witness criterion for a coefficient vector read from a
    /// JSON file
    Verify {
        /// Path to a coefficient JSON file (or any JSON object with a
        /// "coeffs" field in that schema)
        #[arg(long)]
        coeffs: PathBuf,
        /// Cross-check against the file's m
        #[arg(long)]
        m: Option<u32>,
        /// Cross-check against the file's n
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: RecordFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Construct the explicit witness for odd m and verify it
    Witness {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t)]
        format: RecordFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate a coefficient box and report every witness in it
    Search {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Every coefficient ranges over [-bound, bound]
        #[arg(long)]
        bound: i64,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        format: SearchFormat,
        /// Candidate/table-row ceiling override (also via CPACS_SEARCH_CEILING)
        #[arg(long)]
        ceiling: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate chi, sigma, the mod-4 congruence, and the explicit witness
    /// over 1 <= m <= m-max, 1 <= n <= n-max
    Table {
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t)]
        format: TableFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in identity suites and report pass/fail counts
    Selftest {
        #[arg(long, value_enum, default_value_t)]
        format: RecordFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<SearchError> for CliError {
    fn from(err: SearchError) -> Self {
        match err {
            SearchError::Internal(msg) => CliError::Internal(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<TopologyError> for CliError {
    fn from(err: TopologyError) -> Self {
        CliError::Usage(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal assertion failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn record_text(record: &WitnessRecord) -> String {
    let inv = invariants(record.m, record.n).expect("record parameters are valid");
    let mut out = String::new();
    let _ = writeln!(out, "m        = {}", record.m);
    let _ = writeln!(out, "n        = {}", record.n);
    let _ = writeln!(out, "dim      = {}", inv.dimension);
    let _ = writeln!(out, "coeffs   : {}", record.coeffs.describe());
    let _ = writeln!(out, "chi      = {}", record.chi);
    let _ = writeln!(out, "sigma    = {}", inv.signature);
    let _ = writeln!(out, "c_top    = {}", record.c_top);
    let verdict = if record.verdict {
        "witness (c_top == chi)"
    } else {
        "not a witness (c_top != chi)"
    };
    let _ = writeln!(out, "verdict  : {verdict}");
    out
}

fn record_json(record: &WitnessRecord) -> String {
    let value = serde_json::json!({
        "schema": SCHEMA_VERSION,
        "record": record,
    });
    format!(
        "{}\n",
        serde_json::to_string_pretty(&value).expect("serializable")
    )
}

fn render_record(
    record: &WitnessRecord,
    format: RecordFormat,
    output: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let content = match format {
        RecordFormat::Text => record_text(record),
        RecordFormat::Json => record_json(record),
    };
    emit(output, &content)?;
    Ok(if record.verdict { 0 } else { 1 })
}

fn load_coefficients(path: &PathBuf) -> Result<SacsCoefficients, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&raw)
        .map_err(|e| CliError::usage(format!("{}: malformed JSON: {e}", path.display())))?;
    let coeff_value = match value.get("coeffs") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(coeff_value).map_err(|e| {
        CliError::usage(format!(
            "{}: invalid coefficient vector: {e}",
            path.display()
        ))
    })
}

fn search_limits(ceiling: Option<u64>) -> Result<SearchLimits, CliError> {
    if let Some(c) = ceiling {
        return Ok(SearchLimits::with_ceiling(c));
    }
    match std::env::var(CEILING_ENV) {
        Ok(raw) => {
            let c: u64 = raw.parse().map_err(|_| {
                CliError::usage(format!("{CEILING_ENV}={raw} is not a nonnegative integer"))
            })?;
            Ok(SearchLimits::with_ceiling(c))
        }
        Err(_) => Ok(SearchLimits::default()),
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Verify {
            coeffs,
            m,
            n,
            format,
            output,
        } => {
            let parsed = load_coefficients(&coeffs)?;
            if let Some(m) = m {
                if m != parsed.m() {
                    return Err(CliError::usage(format!(
                        "--m {m} does not match the file's m = {}",
                        parsed.m()
                    )));
                }
            }
            if let Some(n) = n {
                if n != parsed.n() {
                    return Err(CliError::usage(format!(
                        "--n {n} does not match the file's n = {}",
                        parsed.n()
                    )));
                }
            }
            let record = acs_criterion(&parsed);
            render_record(&record, format, &output)
        }

        Command::Witness {
            m,
            n,
            format,
            output,
        } => {
            let witness = explicit_witness(m, n)?;
            let record = acs_criterion(&witness);
            render_record(&record, format, &output)
        }

        Command::Search {
            m,
            n,
            bound,
            mode,
            format,
            ceiling,
            output,
        } => {
            let box_ = SearchBox::new(m, n, bound)?;
            let limits = search_limits(ceiling)?;
            let start = Instant::now();
            let (records, mode_name) = match mode {
                ModeArg::BruteForce => (
                    search_witnesses(&box_, SearchMode::BruteForce, &limits)?,
                    "brute-force",
                ),
                ModeArg::Decomposed => (
                    search_witnesses(&box_, SearchMode::Decomposed, &limits)?,
                    "decomposed",
                ),
                ModeArg::Both => {
                    let brute = search_witnesses(&box_, SearchMode::BruteForce, &limits)?;
                    let decomposed = search_witnesses(&box_, SearchMode::Decomposed, &limits)?;
                    if brute != decomposed {
                        return Err(CliError::Internal(format!(
                            "modes disagree: brute-force found {} witnesses, decomposed {}",
                            brute.len(),
                            decomposed.len()
                        )));
                    }
                    (brute, "both")
                }
            };
            let elapsed = start.elapsed();
            let candidates = box_
                .candidate_count()
                .map(|c| c.to_string())
                .unwrap_or_else(|| "overflow".into());

            let content = match format {
                SearchFormat::Text => {
                    let mut out = String::new();
                    for record in &records {
                        let _ = writeln!(
                            out,
                            "{}  (c_top = {}, chi = {})",
                            record.coeffs.describe(),
                            record.c_top,
                            record.chi
                        );
                    }
                    let _ = writeln!(out, "witnesses: {}", records.len());
                    out
                }
                SearchFormat::Json => {
                    let value = serde_json::json!({
                        "schema": SCHEMA_VERSION,
                        "m": m,
                        "n": n,
                        "bound": bound,
                        "mode": mode_name,
                        "count": records.len(),
                        "records": records,
                    });
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&value).expect("serializable")
                    )
                }
                SearchFormat::Jsonl => {
                    let mut out = String::new();
                    for record in &records {
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::to_string(record).expect("serializable")
                        );
                    }
                    out
                }
            };
            emit(&output, &content)?;
            eprintln!(
                "# searched {candidates} candidates (mode {mode_name}) in {:.1} ms: {} witnesses",
                elapsed.as_secs_f64() * 1e3,
                records.len()
            );
            Ok(if records.is_empty() { 1 } else { 0 })
        }

        Command::Table {
            m_max,
            n_max,
            format,
            output,
        } => {
            if m_max == 0 || n_max == 0 {
                return Err(CliError::usage("--m-max and --n-max must be at least 1"));
            }
            let mut rows = Vec::new();
            for m in 1..=m_max {
                for n in 1..=n_max {
                    let inv = invariants(m, n)?;
                    let congruent = hirzebruch_check(m, n)?;
                    let witness = if m % 2 == 1 {
                        Some(acs_criterion(&explicit_witness(m, n)?))
                    } else {
                        None
                    };
                    rows.push((inv, congruent, witness));
                }
            }
            let content = match format {
                TableFormat::Text => {
                    let mut out = String::new();
                    let _ = writeln!(
                        out,
                        "{:<4}{:<4}{:<8}{:<7}{:<12}{:<14}verdict",
                        "m", "n", "chi", "sigma", "hirzebruch", "c_top"
                    );
                    for (inv, congruent, witness) in &rows {
                        let (c_top, verdict) = match witness {
                            Some(rec) => (rec.c_top.to_string(), rec.verdict.to_string()),
                            None => ("-".into(), "-".into()),
                        };
                        let _ = writeln!(
                            out,
                            "{:<4}{:<4}{:<8}{:<7}{:<12}{:<14}{}",
                            inv.m, inv.n, inv.euler, inv.signature, congruent, c_top, verdict
                        );
                    }
                    out
                }
                TableFormat::Csv => {
                    let mut out = String::from("m,n,chi,sigma,hirzebruch,c_top,verdict\n");
                    for (inv, congruent, witness) in &rows {
                        let (c_top, verdict) = match witness {
                            Some(rec) => (rec.c_top.to_string(), rec.verdict.to_string()),
                            None => (String::new(), String::new()),
                        };
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            inv.m, inv.n, inv.euler, inv.signature, congruent, c_top, verdict
                        );
                    }
                    out
                }
                TableFormat::Json => {
                    let json_rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(inv, congruent, witness)| {
                            serde_json::json!({
                                "m": inv.m,
                                "n": inv.n,
                                "chi": inv.euler,
                                "sigma": inv.signature,
                                "hirzebruch": congruent,
                                "c_top": witness.as_ref().map(|r| r.c_top.to_string()),
                                "verdict": witness.as_ref().map(|r| r.verdict),
                            })
                        })
                        .collect();
                    let value = serde_json::json!({
                        "schema": SCHEMA_VERSION,
                        "rows": json_rows,
                    });
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&value).expect("serializable")
                    )
                }
            };
            emit(&output, &content)?;
            Ok(0)
        }

        Command::Selftest { format, output } => {
            let results = run_selftest();
            let failures: u32 = results.iter().map(|r| r.failures).sum();
            let content = match format {
                RecordFormat::Text => {
                    let mut out = String::new();
                    for r in &results {
                        let status = if r.failures == 0 { "PASS" } else { "FAIL" };
                        let _ = writeln!(
                            out,
                            "{status}  {:<22} {} cases, {} failures",
                            r.name, r.cases, r.failures
                        );
                        if let Some(detail) = &r.detail {
                            let _ = writeln!(out, "      first failure: {detail}");
                        }
                    }
                    let total: u32 = results.iter().map(|r| r.cases).sum();
                    let _ = writeln!(
                        out,
                        "selftest: {} ({total} checks, {failures} failures)",
                        if failures == 0 { "PASS" } else { "FAIL" }
                    );
                    out
                }
                RecordFormat::Json => {
                    let value = serde_json::json!({
                        "schema": SCHEMA_VERSION,
                        "passed": failures == 0,
                        "results": results,
                    });
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&value).expect("serializable")
                    )
                }
            };
            emit(&output, &content)?;
            if failures == 0 {
                Ok(0)
            } else {
                Err(CliError::Internal(format!(
                    "{failures} selftest checks failed"
                )))
            }
        }
    }
}
