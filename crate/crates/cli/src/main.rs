use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use tracklab::pipeline::{self, classify_components, Item, Op, PipelineError};
use tracklab::render::NetLayout;
use tracklab::verify::{run_suite, Suite, VerifyOptions};
use tracklab_core::classify::{enumerate_and_verify, tetra_weights, EnumerationOptions};
use tracklab_core::complex::tetrahedron;
use tracklab_core::io::{parse_document, Document};
use tracklab_core::pattern::pattern_from_weights;
use tracklab_core::spattern::underlying_of_state;

#[derive(Parser)]
#[command(name = "tracklab", version, about = "Tracks and singular patterns on the tetrahedron")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify each component of a pattern.
    Classify {
        /// Pattern document ("-" for stdin).
        input: Option<PathBuf>,
        /// Six weights in the order uv,wz,uz,vw,uw,vz instead of a document.
        #[arg(long, value_delimiter = ',', conflicts_with = "input")]
        weights: Option<Vec<u32>>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Enumerate every track on the tetrahedron up to a total weight.
    Enumerate {
        #[arg(long, default_value_t = 24)]
        max_weight: u32,
        /// Write the full enumeration report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Check every vector instead of one per symmetry orbit.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        single_thread: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 24)]
        max_weight: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw a pattern or spattern on the unfolded tetrahedron.
    Render {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Apply a sequence of operations to a document.
    Pipeline {
        input: PathBuf,
        /// classify, underlying, uncross, remove-pair[=A,B] or analyze.
        #[arg(required = true)]
        ops: Vec<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print every intermediate value to stderr as a JSON line.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Json,
}

/// Failures that are the input's fault map to exit code 2; everything
/// else is reported through `Ok(false)`.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load(path: &Path) -> Result<Document> {
    parse_document(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Classify { input, weights, output } => {
            let p = match (input, weights) {
                (_, Some(w)) => {
                    let w: [u32; 6] = w.try_into().map_err(|_| anyhow::anyhow!("expected six weights"))?;
                    pattern_from_weights(&tetrahedron(), &tetra_weights(w))?
                }
                (Some(path), None) => match load(&path)? {
                    Document::Pattern(d) => d.to_pattern()?,
                    other => bail!("classify takes a pattern document, got a {}", other.kind()),
                },
                (None, None) => bail!("give an input document or --weights"),
            };
            let (v, ok) = classify_components(&p);
            emit(output.as_deref(), &pretty(&v)?)?;
            Ok(ok)
        }
        Command::Enumerate { max_weight, report, no_symmetry, single_thread } => {
            let opts = EnumerationOptions { symmetry_reduction: !no_symmetry, parallel: !single_thread };
            let r = enumerate_and_verify(max_weight, opts);
            println!(
                "max weight {}: {} vectors, {} realizable, {} tracks, weights {:?}, {} violations",
                r.max_total_weight,
                r.vectors_examined,
                r.patterns_realized,
                r.tracks.len(),
                r.realized_track_weights,
                r.violations.len()
            );
            for v in &r.violations {
                println!("violation {:?}: {}", v.weights, v.message);
            }
            if let Some(path) = report {
                emit(Some(&path), &pretty(&r)?)?;
            }
            Ok(r.violations.is_empty())
        }
        Command::Verify { suite, max_weight, seed, cases, report } => {
            let r = run_suite(suite, VerifyOptions { max_weight, seed, cases });
            for c in &r.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(path) = report {
                emit(Some(&path), &pretty(&r)?)?;
            }
            Ok(r.passed)
        }
        Command::Render { input, format, output } => {
            let net = NetLayout::tetrahedron();
            let (state, title, with_underlying) = match load(&input)? {
                Document::Pattern(d) => {
                    let p = d.to_pattern()?;
                    (tracklab_core::spattern::SingularState::from_pattern(&p), d.name.unwrap_or_default(), false)
                }
                Document::Spattern(d) => (d.to_state()?, d.name.clone().unwrap_or_default(), true),
                Document::Trace(_) => bail!("render takes a pattern or spattern document"),
            };
            let mut panels = vec![net.place(&state, &title)?];
            if with_underlying {
                if let Ok(u) = underlying_of_state(&state) {
                    let s = tracklab_core::spattern::SingularState::from_pattern(&u);
                    panels.push(net.place(&s, "underlying pattern")?);
                }
            }
            let text = match format {
                Format::Svg => net.svg(&panels),
                Format::Json => pretty(&serde_json::json!({ "version": 1, "layout": net, "panels": panels }))?,
            };
            emit(output.as_deref(), &text)?;
            Ok(true)
        }
        Command::Pipeline { input, ops, output, trace } => {
            let ops: Vec<Op> = ops
                .iter()
                .enumerate()
                .map(|(i, s)| s.parse::<Op>().map_err(|e| anyhow::anyhow!("op {}: {e}", i + 1)))
                .collect::<Result<_>>()?;
            let item = Item::from_document(&load(&input)?)?;
            let observe = |i: usize, op: &Op, it: &Item| {
                if trace {
                    let line = serde_json::json!({ "step": i, "op": op.to_string(), "kind": it.kind(), "value": it.to_json() });
                    eprintln!("{line}");
                }
            };
            match pipeline::run(item, &ops, observe) {
                Ok(out) => {
                    emit(output.as_deref(), &pretty(&out.to_json())?)?;
                    Ok(true)
                }
                Err(e @ PipelineError::Mismatch { .. }) => Err(e.into()),
                Err(e @ PipelineError::Failed { .. }) => {
                    eprintln!("{e}");
                    Ok(false)
                }
            }
        }
    }
}
