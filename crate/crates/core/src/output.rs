//! CSV and JSON emitters for sweep results, and the community listing.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cliques::VertexSet;
use crate::components::ComponentSummary;
use crate::error::{Error, Result};
use crate::experiment::{ExperimentConfig, SweepResult};
use crate::graph::LabeledGraph;
use crate::seed::RNG_ALGORITHM;

pub const CSV_HEADER: [&str; 13] = [
    "variant",
    "k",
    "ell",
    "n",
    "p",
    "mu",
    "sigma_theory",
    "trial",
    "seed",
    "clique_count",
    "c1",
    "c2",
    "frac_c1",
];

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid(format!("unknown format {other:?}"))),
        }
    }
}

/// One trial, flattened with its grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub variant: String,
    pub k: usize,
    pub ell: usize,
    pub n: u64,
    pub p: f64,
    pub mu: f64,
    pub sigma_theory: Option<f64>,
    pub trial: u32,
    pub seed: u64,
    pub clique_count: usize,
    pub c1: usize,
    pub c2: usize,
    pub frac_c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub tool_version: String,
    pub rng_algorithm: String,
}

/// Rows in (grid point, trial) order.
pub fn rows(sweep: &SweepResult) -> Vec<Row> {
    let cfg = &sweep.config;
    sweep
        .points
        .iter()
        .flat_map(|pt| {
            pt.results.iter().map(move |r| Row {
                variant: cfg.variant.name().to_string(),
                k: cfg.k,
                ell: cfg.ell,
                n: cfg.n,
                p: pt.p,
                mu: pt.mu,
                sigma_theory: pt.sigma_theory,
                trial: r.trial,
                seed: r.seed,
                clique_count: r.clique_count,
                c1: r.c1,
                c2: r.c2,
                frac_c1: r.frac_c1,
            })
        })
        .collect()
}

/// Writes the header and one line per row. Floats use the shortest
/// representation that round-trips; a missing `sigma_theory` is empty.
pub fn write_csv<W: Write>(rows: &[Row], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.variant.clone(),
            r.k.to_string(),
            r.ell.to_string(),
            r.n.to_string(),
            r.p.to_string(),
            r.mu.to_string(),
            r.sigma_theory.map(|s| s.to_string()).unwrap_or_default(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.clique_count.to_string(),
            r.c1.to_string(),
            r.c2.to_string(),
            r.frac_c1.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[Row]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Reads rows back from CSV produced by [`write_csv`].
pub fn read_csv<R: io::Read>(reader: R) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn json_report(sweep: &SweepResult) -> JsonReport {
    JsonReport {
        config: sweep.config.clone(),
        rows: rows(sweep),
        tool_version: TOOL_VERSION.to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
    }
}

pub fn write_json<W: Write>(sweep: &SweepResult, mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, &json_report(sweep))?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Writes `sweep` to `path`, or to stdout when `path` is `None`.
pub fn emit(sweep: &SweepResult, format: Format, path: Option<&Path>) -> Result<()> {
    let writer: Box<dyn Write> = match path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(&rows(sweep), writer),
        Format::Json => write_json(sweep, writer),
    }
}

/// One line per component, largest first: the member cliques as
/// comma-joined vertex labels, separated by spaces.
pub fn write_communities<W: Write, S: VertexSet>(
    graph: &LabeledGraph,
    cliques: &[S],
    summary: &ComponentSummary,
    mut writer: W,
) -> Result<()> {
    for members in summary.members() {
        let line = members
            .iter()
            .map(|&c| {
                cliques[c]
                    .vertices()
                    .iter()
                    .map(|&v| graph.label(v))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(writer, "{line}")?;
    }
    writer.flush()?;
    Ok(())
}
