use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cyclewall::aut::{acyl_witness, aut_decompose, witness_fixator_check, AutElementData};
use cyclewall::davis::{ball_to_dot, ball_to_json, build_ball_with_budget, squares_to_dot, squares_to_json, subdivide};
use cyclewall::verify::{run_verify, Suite, VerifyConfig};
use cyclewall::{reference, Error, GroupElement, Presentation, SCHEMA};

#[derive(Parser)]
#[command(name = "cyclewall", version, about = "Words, Davis complexes, tree-walls and automorphisms of cyclic products of groups")]
struct Cli {
    /// Presentation file (JSON), or one of the built-in names
    /// c5_z2, c5_z3, c5_mixed, c6_mixed.
    #[arg(long, global = true, default_value = "c5_mixed")]
    presentation: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print canonical forms. Reads one word per line from stdin when no
    /// word is given.
    Reduce { words: Vec<String> },
    /// Export a ball of the Davis complex.
    Ball {
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Export the square subdivision instead.
        #[arg(long)]
        subdivide: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the audits of one module, or of all of them.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// Truncation length L for stabilizer searches.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall-clock time per check (makes reports differ between runs).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Automorphism tools.
    #[command(subcommand)]
    Aut(AutCommand),
}

#[derive(Subcommand)]
enum AutCommand {
    /// Recover (g, σ, φ) from generator images. The input is a JSON list,
    /// per vertex, of the images of that vertex group's generators.
    Decompose {
        /// Images file; stdin when omitted.
        images: Option<PathBuf>,
    },
    /// Build the element whose local-automorphism fixator is trivial.
    Witness,
    /// Local automorphisms fixing a group element (the witness by default).
    Fixator { element: Option<String> },
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn budget_bytes() -> Result<u64, Error> {
    match std::env::var("CYCLEWALL_MEM_MB") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(|mb| mb << 20)
            .map_err(|_| Error::Parse(format!("CYCLEWALL_MEM_MB must be a whole number of MiB, got {v:?}"))),
        Err(_) => Ok(cyclewall::davis::DEFAULT_BUDGET_BYTES),
    }
}

fn load_presentation(spec: &str) -> Result<Presentation, Error> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidPresentation(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text)
            .map_err(|e| Error::InvalidPresentation(format!("{}: {e}", path.display())));
    }
    reference::by_name(spec).ok_or_else(|| {
        Error::InvalidPresentation(format!("{spec:?} is neither a file nor a built-in presentation"))
    })
}

fn emit(out: &Output, text: &str) -> Result<(), Error> {
    let io_err = |e: io::Error| Error::Resource(e.to_string());
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(io_err),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io_err)
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<u8, Error> {
    let p = load_presentation(&cli.presentation)?;
    match cli.command {
        Command::Reduce { words } => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let io_err = |e: io::Error| Error::Resource(e.to_string());
            if words.is_empty() {
                for line in io::stdin().lock().lines() {
                    let line = line.map_err(io_err)?;
                    writeln!(w, "{}", p.parse_element(&line)?).map_err(io_err)?;
                }
            } else {
                for word in &words {
                    writeln!(w, "{}", p.parse_element(word)?).map_err(io_err)?;
                }
            }
            w.flush().map_err(io_err)?;
            Ok(0)
        }
        Command::Ball {
            radius,
            format,
            subdivide: sub,
            out,
        } => {
            let b = build_ball_with_budget(&p, radius, budget_bytes()?)?;
            let text = match (format, sub) {
                (Format::Json, false) => pretty(&ball_to_json(&b)),
                (Format::Json, true) => pretty(&squares_to_json(&b, &subdivide(&b))),
                (Format::Dot, false) => ball_to_dot(&b),
                (Format::Dot, true) => squares_to_dot(&subdivide(&b)),
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            radius,
            depth,
            seed,
            timings,
            out,
        } => {
            let cfg = VerifyConfig {
                radius,
                depth,
                seed,
                budget_bytes: budget_bytes()?,
                timings,
            };
            let report = run_verify(&p, suite, &cfg)?;
            emit(&out, &(report.to_json() + "\n"))?;
            Ok(report.exit_code() as u8)
        }
        Command::Aut(cmd) => aut(&p, cmd),
    }
}

fn aut(p: &Presentation, cmd: AutCommand) -> Result<u8, Error> {
    let stdout = Output { output: None };
    match cmd {
        AutCommand::Decompose { images } => {
            let text = match images {
                Some(path) => std::fs::read_to_string(&path).map_err(|e| Error::Resource(format!("{}: {e}", path.display())))?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map_err(|e| Error::Resource(e.to_string()))?;
                    s
                }
            };
            let raw: Vec<Vec<String>> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let images = raw
                .iter()
                .map(|row| row.iter().map(|w| p.parse_element(w)).collect::<Result<Vec<GroupElement>, Error>>())
                .collect::<Result<Vec<_>, Error>>()?;
            let a = aut_decompose(p, &images)?;
            let data: AutElementData = a.to_data();
            emit(&stdout, &pretty(&json!({"schema": SCHEMA, "automorphism": data, "display": a.to_string()})))?;
            Ok(0)
        }
        AutCommand::Witness => {
            let w = acyl_witness(p)?;
            emit(&stdout, &pretty(&json!({"schema": SCHEMA, "witness": w})))?;
            Ok(0)
        }
        AutCommand::Fixator { element } => {
            let g = match element {
                Some(text) => p.parse_element(&text)?,
                None => acyl_witness(p)?.element,
            };
            let fx = witness_fixator_check(p, &g)?;
            emit(&stdout, &pretty(&json!({"schema": SCHEMA, "fixator": fx})))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
