//! Argument parsing and dispatch for the `elene` command.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use elene::expressivity::wl1_distinguish;
use elene::graph::{generate, read_edge_list, write_edge_list, Family};
use elene::vectorize::graph_signature_with_threads;
use elene::{Error, Graph, Mode};

use crate::bench::{run_grid, BenchFamily, BenchGrid};
use crate::checks::{self, Suite};
use crate::exit_code;
use crate::records::{encode, write_records, Format};

#[derive(Debug, Parser)]
#[command(name = "elene", version, about = "Ego-network encodings of graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Nd,
    Ed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Nd => Mode::Nd,
            ModeArg::Ed => Mode::Ed,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Rook,
    Shrikhande,
    Cycle,
    Triangles,
    Regular,
    Ba,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode every node (and edge) of an edge-list file.
    Encode {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "nd")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "quads")]
        format: Format,
        /// Degree capacity of vector layouts; defaults to the maximum degree.
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, env = "ELENE_THREADS")]
        threads: Option<usize>,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a graph from a built-in family as an edge list.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Node count (cycle, regular, ba) or side length (rook).
        #[arg(long)]
        n: Option<usize>,
        /// Degree (regular) or edges per new node (ba).
        #[arg(long)]
        d: Option<usize>,
        /// Number of triangles.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two graphs by their encodings or by 1-WL.
    Distinguish {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value = "nd")]
        mode: ModeArg,
        /// Use 1-WL color refinement instead of the encodings.
        #[arg(long)]
        wl1: bool,
        #[arg(long, env = "ELENE_THREADS")]
        threads: Option<usize>,
    },
    /// Time encodings over a grid of generated graphs and write CSV rows.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "regular")]
        families: Vec<BenchFamily>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long = "k-list", value_delimiter = ',', default_value = "1")]
        ks: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "nd")]
        modes: Vec<ModeArg>,
        #[arg(long = "threads-list", value_delimiter = ',', default_value = "1")]
        threads: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        seed: u64,
        /// CSV file; standard output if omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run self-checks and print one PASS/FAIL line each.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

fn threads_or_default(threads: Option<usize>) -> usize {
    threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn sink<'a>(path: Option<&Path>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(out),
    })
}

fn need<T>(value: Option<T>, flag: &str, family: FamilyArg) -> Result<T> {
    match value {
        Some(v) => Ok(v),
        None => Err(Error::InvalidParams(format!("--{flag} is required for {family:?}")).into()),
    }
}

/// Runs a parsed command, writing its standard output to `out`, and
/// returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Encode {
            input,
            k,
            mode,
            format,
            dmax,
            threads,
            output,
        } => {
            let g = read_graph(&input)?;
            let enc = encode(&g, k, mode.into(), threads_or_default(threads))?;
            write_records(&g, &enc, format, dmax, sink(output.as_deref(), out)?)?;
        }
        Command::Generate {
            family,
            n,
            d,
            t,
            seed,
            output,
        } => {
            let f = match family {
                FamilyArg::Rook => Family::Rook { n: need(n, "n", family)? },
                FamilyArg::Shrikhande => Family::Shrikhande,
                FamilyArg::Cycle => Family::Cycle { n: need(n, "n", family)? },
                FamilyArg::Triangles => Family::DisjointTriangles { t: need(t, "t", family)? },
                FamilyArg::Regular => Family::RandomRegular {
                    n: need(n, "n", family)?,
                    d: need(d, "d", family)?,
                    seed: need(seed, "seed", family)?,
                },
                FamilyArg::Ba => Family::BarabasiAlbert {
                    n: need(n, "n", family)?,
                    m_min: need(d, "d", family)?,
                    seed: need(seed, "seed", family)?,
                },
            };
            let g = generate(f)?;
            let mut w = sink(output.as_deref(), out)?;
            write_edge_list(&g, &mut w)?;
            w.flush()?;
        }
        Command::Distinguish {
            g1,
            g2,
            k,
            mode,
            wl1,
            threads,
        } => {
            let (a, b) = (read_graph(&g1)?, read_graph(&g2)?);
            let (differ, detail) = if wl1 {
                (wl1_distinguish(&a, &b), format!("1-WL on {} and {} nodes", a.node_count(), b.node_count()))
            } else {
                let t = threads_or_default(threads);
                let sa = graph_signature_with_threads(&a, k, mode.into(), t)?;
                let sb = graph_signature_with_threads(&b, k, mode.into(), t)?;
                (sa != sb, format!("signatures of {} and {} records", sa.len(), sb.len()))
            };
            let verdict = if differ { "DISTINGUISHED" } else { "EQUIVALENT" };
            writeln!(out, "{verdict} ({detail})")?;
        }
        Command::Bench {
            families,
            sizes,
            degrees,
            ks,
            modes,
            threads,
            repeats,
            seed,
            csv,
        } => {
            let grid = BenchGrid {
                families,
                sizes,
                degrees,
                ks,
                modes: modes.into_iter().map(Mode::from).collect(),
                threads,
                repeats,
                seed,
            };
            run_grid(&grid, sink(csv.as_deref(), out)?)?;
        }
        Command::Check { suite } => {
            let outcomes = checks::run(suite);
            for o in &outcomes {
                writeln!(out, "{}", o.line())?;
            }
            if outcomes.iter().any(|o| !o.pass) {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status. Errors and usage messages go to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code() as u8;
        }
    };
    let code = match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e) as u8
        }
    };
    let _ = out.flush();
    code
}
