//! `tieknot` command surface. `execute_command` never touches the real
//! stdout/stderr so it can be driven from tests.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tieknot_core::classify::{analyze_sequence, load_reference_table, ReferenceTable};
use tieknot_core::diagram::{build_diagram, build_sequence_diagram, to_gauss_code, TieDiagram};
use tieknot_core::grammar::{enumerate_sequences, parse_sequence, validate_fm, TieSequence};
use tieknot_core::render::render_svg;
use tieknot_core::rewrite::{reduce_fully, DiagramWord};
use tieknot_core::tables::{compute_rows, summarize, write_csv};
use tieknot_core::verify::run_all;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "tieknot", version, about = "Tie sequences, tie knot diagrams and their knot types")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Pd,
    Gauss,
    Svg,
}

#[derive(Args)]
struct TableArg {
    /// Reference knot table (JSON lines); defaults to the bundled one
    #[arg(long, env = "TIEKNOT_TABLE")]
    table_path: Option<PathBuf>,
}

impl TableArg {
    fn load(&self) -> Result<ReferenceTable> {
        match &self.table_path {
            None => Ok(ReferenceTable::builtin()),
            Some(p) => {
                let f = File::open(p).with_context(|| format!("cannot open reference table {}", p.display()))?;
                load_reference_table(BufReader::new(f))
                    .with_context(|| format!("bad reference table {}", p.display()))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every valid tie sequence in a length range
    Enumerate {
        #[arg(long, default_value_t = 3)]
        min: usize,
        #[arg(long, default_value_t = 9)]
        max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a sequence against the tie rules
    Validate {
        sequence: String,
        /// Length limit for rule 4; unlimited by default
        #[arg(long)]
        max: Option<usize>,
    },
    /// Reduce a sequence to normal form
    Reduce {
        sequence: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Export the knot diagram of a sequence or diagram word
    Diagram {
        sequence: String,
        #[arg(long, value_enum, default_value = "pd")]
        format: Format,
        /// Use the diagram of the reduced word
        #[arg(long)]
        reduced: bool,
    },
    /// Name the knot type of one or more sequences
    Classify {
        #[arg(required = true)]
        sequences: Vec<String>,
        #[command(flatten)]
        table: TableArg,
    },
    /// Reproduce the classification table or its summaries
    Table {
        #[arg(long, conflicts_with = "summary")]
        appendix: bool,
        #[arg(long)]
        summary: bool,
        #[command(flatten)]
        table: TableArg,
    },
    /// Draw a diagram as SVG
    Render {
        sequence: String,
        #[arg(long)]
        reduced: bool,
    },
    /// Run the self-check suite
    Verify {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        table: TableArg,
    },
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn execute_command<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { exit_code: 2, stdout: String::new(), stderr: text }
            } else {
                CommandResult { exit_code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = CommandResult::default();
    if let Err(e) = run(cli.command, &mut out) {
        out.exit_code = 1;
        out.stderr.push_str(&format!("error: {e:#}\n"));
    }
    out
}

fn sequence(text: &str) -> Result<TieSequence> {
    parse_sequence(text).with_context(|| format!("cannot parse {text:?}"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("payloads serialize") + "\n"
}

fn diagram_for(text: &str, reduced: bool) -> Result<TieDiagram> {
    if let Ok(seq) = parse_sequence(text) {
        if reduced {
            let (r, _) = reduce_fully(&seq)?;
            return Ok(build_diagram(r.word())?);
        }
        return Ok(build_sequence_diagram(&seq)?);
    }
    let word: DiagramWord = text.parse().with_context(|| format!("cannot parse {text:?}"))?;
    Ok(build_diagram(&word)?)
}

fn run(command: Command, out: &mut CommandResult) -> Result<()> {
    match command {
        Command::Enumerate { min, max, format } => {
            let seqs = enumerate_sequences(min, max)?;
            let texts: Vec<String> = seqs.iter().map(|s| s.to_string()).collect();
            out.stdout = match format {
                Format::Json => to_json(&texts),
                Format::Text => texts.iter().map(|t| format!("{t}\n")).collect(),
                _ => bail!("enumerate supports --format text or json"),
            };
        }
        Command::Validate { sequence: text, max } => {
            let report = validate_fm(&sequence(&text)?, max);
            out.stdout = to_json(&report);
            if !report.valid {
                out.exit_code = 1;
                out.stderr = format!("{text} breaks {} rule(s)\n", report.violations.len());
            }
        }
        Command::Reduce { sequence: text, trace, format } => {
            let seq = sequence(&text)?;
            let (reduced, steps) = reduce_fully(&seq)?;
            out.stdout = match format {
                Format::Json => {
                    let mut v = json!({ "sequence": seq, "reduced": reduced, "shape": reduced.shape() });
                    if trace {
                        v["trace"] = serde_json::to_value(&steps)?;
                    }
                    to_json(&v)
                }
                Format::Text => {
                    let mut s = format!("{}\n", reduced.word());
                    if trace {
                        s.push_str(&steps.to_json_lines());
                    }
                    s
                }
                _ => bail!("reduce supports --format text or json"),
            };
        }
        Command::Diagram { sequence: text, format, reduced } => {
            let d = diagram_for(&text, reduced)?;
            out.stdout = match format {
                Format::Pd | Format::Json => d.pd_code().to_json() + "\n",
                Format::Gauss => format!("{}\n", to_gauss_code(&d)),
                Format::Svg => render_svg(&d, &text),
                _ => bail!("diagram supports --format pd, gauss or svg"),
            };
        }
        Command::Classify { sequences, table } => {
            let table = table.load()?;
            for text in sequences {
                let seq = sequence(&text)?;
                let c = analyze_sequence(&seq, &table)?;
                out.stdout.push_str(&to_json(&json!({
                    "sequence": seq,
                    "knot": c.knot.to_string(),
                    "chirality": c.knot.chirality,
                    "family": c.family.label(),
                    "determinant": c.fingerprint.determinant,
                    "jones": c.fingerprint.jones.to_string(),
                })));
            }
        }
        Command::Table { appendix, summary, table } => {
            if !appendix && !summary {
                bail!("table needs --appendix or --summary");
            }
            let rows = compute_rows(&table.load()?)?;
            out.stdout = if appendix { write_csv(&rows)? } else { to_json(&summarize(&rows)) };
        }
        Command::Render { sequence: text, reduced } => {
            out.stdout = render_svg(&diagram_for(&text, reduced)?, &text);
        }
        Command::Verify { format, table } => {
            let results = run_all(&table.load()?);
            let passed = results.iter().filter(|r| r.passed).count();
            out.stdout = match format {
                Format::Json => to_json(&json!({ "passed": passed, "total": results.len(), "criteria": results })),
                _ => {
                    let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
                    s.push_str(&format!("{passed} of {} criteria passed\n", results.len()));
                    s
                }
            };
            if passed != results.len() {
                out.exit_code = 1;
                out.stderr = format!("{} criteria failed\n", results.len() - passed);
            }
        }
    }
    Ok(())
}
