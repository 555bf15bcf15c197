//! Command-line front end for `lacuna-core`.
//!
//! [`run`] executes one parsed [`Cli`] invocation and returns the exit status
//! together with the rendered output; the binary only handles the process
//! boundary. Exit status 0 means a definitive answer, 2 means the budget ran
//! out (or a split found nothing to cut), 1 means an error.

#![warn(missing_docs)]

pub mod formats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lacuna_core::corpus::{entries, entry};
use lacuna_core::engine::{
    build_lacunary, certify_dimension, split_lacunary, Certification, DimensionCertificate, LacunaryOutcome,
    SplitOutcome,
};
use lacuna_core::linalg::{finite_support_kernel, KernelBasis};
use lacuna_core::operator::{FiniteSolution, OperatorSpec};
use lacuna_core::rational::to_canonical;
use lacuna_core::sequence::{SequenceSpec, Window};
use serde::Serialize;

use formats::{
    parse_certificate, parse_operator, parse_sequence, to_json, CertificateJson, EntryJson, KernelBasisJson,
    LacunaryJson, ManifestEntry, OperatorJson, SequenceJson,
};

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(
    name = "lacuna",
    version,
    about = "Certify infinite-dimensional solution spaces of linear difference equations"
)]
pub struct Cli {
    #[allow(missing_docs)]
    #[command(subcommand)]
    pub command: Command,
    #[allow(missing_docs)]
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Output destination and rendering.
#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Output rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON, byte-stable.
    Json,
    /// Human-readable summary.
    Text,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a sequence satisfies every equation inside a window.
    Check {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        #[allow(missing_docs)]
        #[arg(long)]
        sequence: PathBuf,
        /// LO:HI
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
    },
    /// Basis of the solutions supported inside a window.
    Kernel {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        /// LO:HI
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
    },
    /// Find k disjoint finite-support solutions.
    Certify {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        /// Required lower bound on the dimension.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Largest window half-width tried.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Cut a solution into finite-support pieces at long runs of zeros.
    Split {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        #[allow(missing_docs)]
        #[arg(long)]
        sequence: PathBuf,
        /// LO:HI
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
        /// Keep at most this many pieces (all when absent).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_pieces: Option<u64>,
    },
    /// Stack finite-support blocks with growing gaps.
    Build {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        /// Gap the profile has to reach.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        gap: i64,
        /// Search radius around the origin.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Re-check a kernel basis, dimension certificate or lacunary prefix.
    Verify {
        #[allow(missing_docs)]
        #[arg(long)]
        operator: PathBuf,
        /// Serialized object to check.
        certificate: PathBuf,
    },
    /// Emit a corpus entry, or the manifest when no name is given.
    Corpus {
        /// Entry name.
        name: Option<String>,
        /// Which part of the entry to emit.
        #[arg(long, value_enum, default_value_t = Part::Entry)]
        part: Part,
        /// Re-run the entry's known facts instead of emitting it.
        #[arg(long)]
        check: bool,
    },
}

/// Part of a corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    /// Name, operator, sequence and facts.
    Entry,
    /// Operator only, in the operator format.
    Operator,
    /// Sequence only, in the sequence format.
    Sequence,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Definitive answer.
    Success,
    /// Budget exhausted or nothing to report.
    Inconclusive,
}

impl Status {
    /// Numeric exit code.
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Inconclusive => 2,
        }
    }
}

/// Exit code for errors.
pub const ERROR_CODE: i32 = 1;

/// Status and rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    #[allow(missing_docs)]
    pub status: Status,
    #[allow(missing_docs)]
    pub body: String,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("IoError reading {}", path.display()))
}

fn load_operator(path: &Path) -> anyhow::Result<OperatorSpec> {
    parse_operator(&read(path)?).with_context(|| path.display().to_string())
}

fn load_sequence(path: &Path) -> anyhow::Result<SequenceSpec> {
    parse_sequence(&read(path)?).with_context(|| path.display().to_string())
}

#[derive(Serialize)]
struct Outcome {
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    largest_kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<[i64; 2]>,
}

impl Outcome {
    fn new(outcome: &'static str) -> Self {
        Outcome { outcome, largest_kernel_dim: None, kind: None, window: None }
    }
}

fn solution_line(out: &mut String, s: &FiniteSolution) {
    let vals: Vec<String> = s.values().iter().map(to_canonical).collect();
    let _ = writeln!(out, "  [{}, {}] {}", s.min_support(), s.max_support(), vals.join(" "));
}

fn kernel_text(k: &KernelBasis) -> String {
    let w = k.window();
    let mut out = format!("kernel on [{}, {}]: dimension {}\n", w.lo(), w.hi(), k.dim());
    k.solutions().iter().for_each(|s| solution_line(&mut out, s));
    out
}

fn certificate_text(c: &DimensionCertificate) -> String {
    let mut out = format!("certified dimension >= {} on [{}, {}]\n", c.k, c.window.lo(), c.window.hi());
    c.solutions.iter().for_each(|s| solution_line(&mut out, s));
    out
}

fn render<T: Serialize>(format: Format, json: &T, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => to_json(json),
        Format::Text => text(),
    }
}

/// Executes one invocation. Errors map to exit code [`ERROR_CODE`]; their
/// message starts with the library error name.
pub fn run(cli: &Cli) -> anyhow::Result<Report> {
    let fmt = cli.output.format;
    let ok = |body| Ok(Report { status: Status::Success, body });
    let inconclusive = |body| Ok(Report { status: Status::Inconclusive, body });
    match &cli.command {
        Command::Check { operator, sequence, window } => {
            let op = load_operator(operator)?;
            let x = load_sequence(sequence)?;
            op.windowed_residual_check(&x, window)?;
            let mut o = Outcome::new("satisfied");
            o.window = Some([window.lo(), window.hi()]);
            ok(render(fmt, &o, || format!("satisfied on [{}, {}]\n", window.lo(), window.hi())))
        }
        Command::Kernel { operator, window } => {
            let k = finite_support_kernel(&load_operator(operator)?, window)?;
            ok(render(fmt, &KernelBasisJson::from(&k), || kernel_text(&k)))
        }
        Command::Certify { operator, k, budget } => {
            let op = load_operator(operator)?;
            match certify_dimension(&op, usize::try_from(*k)?, *budget)? {
                Certification::Certified(c) => ok(render(fmt, &CertificateJson::from(&c), || certificate_text(&c))),
                Certification::Inconclusive { largest_kernel_dim } => {
                    let mut o = Outcome::new("inconclusive");
                    o.largest_kernel_dim = Some(largest_kernel_dim);
                    inconclusive(render(fmt, &o, || {
                        format!("inconclusive: largest kernel dimension {largest_kernel_dim} < {k}\n")
                    }))
                }
            }
        }
        Command::Split { operator, sequence, window, max_pieces } => {
            let op = load_operator(operator)?;
            let x = load_sequence(sequence)?;
            let max = max_pieces.map_or(Ok(usize::MAX), usize::try_from)?;
            match split_lacunary(&op, &x, window, max)? {
                SplitOutcome::Pieces(pieces) => {
                    let c = DimensionCertificate { k: pieces.len(), window: *window, solutions: pieces };
                    ok(render(fmt, &CertificateJson::from(&c), || certificate_text(&c)))
                }
                SplitOutcome::NoCuts => inconclusive(render(fmt, &Outcome::new("no_cuts"), || "no cuts\n".into())),
            }
        }
        Command::Build { operator, gap, budget } => match build_lacunary(&load_operator(operator)?, *gap, *budget)? {
            LacunaryOutcome::Built(p) => ok(render(fmt, &LacunaryJson::from(&p), || {
                let mut out = format!("{:?} ray, gaps {:?}\n", p.ray, p.gap_profile);
                p.blocks.iter().for_each(|s| solution_line(&mut out, s));
                out
            })),
            LacunaryOutcome::Inconclusive => {
                inconclusive(render(fmt, &Outcome::new("inconclusive"), || "inconclusive\n".into()))
            }
        },
        Command::Verify { operator, certificate } => {
            let op = load_operator(operator)?;
            let c = parse_certificate(&read(certificate)?).with_context(|| certificate.display().to_string())?;
            c.verify(&op)?;
            let mut o = Outcome::new("verified");
            o.kind = Some(c.kind());
            ok(render(fmt, &o, || format!("verified {}\n", c.kind())))
        }
        Command::Corpus { name: None, check, .. } => {
            let all = entries();
            if *check {
                let mut text = String::new();
                for e in &all {
                    let bad = e.failing_facts()?;
                    if !bad.is_empty() {
                        bail!("VerificationFailure: {} facts {bad:?} do not hold", e.name);
                    }
                    let _ = writeln!(text, "{}: {} facts hold", e.name, e.known_facts.len());
                }
                return ok(render(fmt, &Outcome::new("verified"), || text));
            }
            let manifest: Vec<ManifestEntry> = all
                .iter()
                .map(|e| ManifestEntry {
                    name: e.name.clone(),
                    has_sequence: e.sequence.is_some(),
                    known_facts: EntryJson::from(e).known_facts,
                })
                .collect();
            ok(render(fmt, &manifest, || manifest.iter().map(|m| format!("{}\n", m.name)).collect()))
        }
        Command::Corpus { name: Some(name), part, check } => {
            let Some(e) = entry(name) else { bail!("UnknownEntry: no corpus entry named {name:?}") };
            if *check {
                let bad = e.failing_facts()?;
                if !bad.is_empty() {
                    bail!("VerificationFailure: facts {bad:?} of {name} do not hold");
                }
                let text = format!("{name}: {} facts hold\n", e.known_facts.len());
                return ok(render(fmt, &Outcome::new("verified"), || text));
            }
            let body = match part {
                Part::Entry => to_json(&EntryJson::from(&e)),
                Part::Operator => to_json(&OperatorJson::from(&e.operator)),
                Part::Sequence => match &e.sequence {
                    Some(s) => to_json(&SequenceJson::from(s)),
                    None => bail!("UnknownEntry: {name} has no sequence"),
                },
            };
            ok(body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_parse() {
        assert_eq!(parse_window("-3:5").unwrap(), Window::new(-3, 5).unwrap());
        assert!(parse_window("5:-3").unwrap_err().starts_with("InvalidWindow"));
        assert!(parse_window("5").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
