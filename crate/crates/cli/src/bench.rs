//! Scaling benchmark over generated graph families.

use std::io::Write;
use std::time::Instant;

use anyhow::{ensure, Result};
use elene::graph::{generate, Family};
use elene::{Graph, Mode};
use serde::Serialize;

use crate::alloc;
use crate::records::{encode, nonzeros};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchFamily {
    /// Random `d`-regular graphs.
    Regular,
    /// Barabási-Albert graphs with `d` edges per new node.
    Ba,
}

impl BenchFamily {
    pub fn name(self) -> &'static str {
        match self {
            BenchFamily::Regular => "regular",
            BenchFamily::Ba => "ba",
        }
    }

    pub fn build(self, n: usize, d: usize, seed: u64) -> Result<Graph> {
        let family = match self {
            BenchFamily::Regular => Family::RandomRegular { n, d, seed },
            BenchFamily::Ba => Family::BarabasiAlbert { n, m_min: d, seed },
        };
        Ok(generate(family)?)
    }
}

/// One CSV row. Field order is the header order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub mode: String,
    pub threads: usize,
    pub wall_s: f64,
    pub edges_traversed: u64,
    pub nonzeros: u64,
    pub peak_bytes: u64,
}

pub const HEADER: &str = "family,n,d,k,mode,threads,wall_s,edges_traversed,nonzeros,peak_bytes";

#[derive(Debug, Clone)]
pub struct BenchGrid {
    pub families: Vec<BenchFamily>,
    pub sizes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub ks: Vec<usize>,
    pub modes: Vec<Mode>,
    pub threads: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Nd => "nd",
        Mode::Ed => "ed",
    }
}

/// Times encoding plus vectorization of `g`. Graph generation is not
/// timed.
pub fn measure(
    family: BenchFamily,
    d: usize,
    g: &Graph,
    k: usize,
    mode: Mode,
    threads: usize,
) -> Result<BenchRecord> {
    let base = alloc::reset_peak();
    let start = Instant::now();
    let enc = encode(g, k, mode, threads)?;
    let nz = nonzeros(g, &enc)?;
    let wall_s = start.elapsed().as_secs_f64();
    let peak_bytes = alloc::peak().saturating_sub(base) as u64;
    Ok(BenchRecord {
        family: family.name().into(),
        n: g.node_count(),
        d,
        k,
        mode: mode_name(mode).into(),
        threads,
        wall_s,
        edges_traversed: enc.edges_traversed,
        nonzeros: nz,
        peak_bytes,
    })
}

/// Runs every grid point `repeats` times, writing one CSV row per run.
pub fn run_grid(grid: &BenchGrid, out: impl Write) -> Result<Vec<BenchRecord>> {
    ensure!(
        !grid.families.is_empty()
            && !grid.sizes.is_empty()
            && !grid.degrees.is_empty()
            && !grid.ks.is_empty()
            && !grid.modes.is_empty()
            && !grid.threads.is_empty()
            && grid.repeats > 0,
        elene::Error::InvalidParams("every benchmark grid axis needs at least one value".into())
    );
    let mut w = csv::Writer::from_writer(out);
    let mut records = Vec::new();
    for &family in &grid.families {
        for &n in &grid.sizes {
            for &d in &grid.degrees {
                let g = family.build(n, d, grid.seed)?;
                for &k in &grid.ks {
                    for &mode in &grid.modes {
                        for &threads in &grid.threads {
                            for _ in 0..grid.repeats {
                                let r = measure(family, d, &g, k, mode, threads)?;
                                w.serialize(&r)?;
                                w.flush()?;
                                records.push(r);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(records)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    cov / var
}
