//! Command-line front end shared by the `ebqn` binary and the tests.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{self, AsymMemoryConfig, AsymPositionConfig, SingleConfig, SweepSymmetricConfig, TopologyConfig};
use crate::error::Result;
use crate::experiments::{sweep_memory, sweep_position, sweep_symmetric_grid, TopologyComparison};
use crate::network::Protocol;
use crate::output::{format_g, write_table, Format, Record};
use crate::scenario::run_request;

const MS: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "ebqn", version, about = "Noisy graph-state manipulation in entanglement-based quantum networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity of one Bell-pair request.
    Single(CommonArgs),
    /// Optimal patterns and regimes over a (p, T) grid of symmetric chains.
    SweepSymmetric(CommonArgs),
    /// Fidelity against the dephasing time of one faulty memory.
    AsymMemory(CommonArgs),
    /// Fidelity against the position of one shifted node.
    AsymPosition(CommonArgs),
    /// Custom against basic placement of the chain on a random network.
    TopologyCompare(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML or JSON config; defaults reproduce the reference setup.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Restrict to one protocol.
    #[arg(long)]
    pub protocol: Option<Protocol>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// One `single` result row.
#[derive(Clone, Debug, Serialize)]
pub struct SingleRow {
    pub protocol: Protocol,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub hops: usize,
    pub pattern: String,
    pub maximizers: Vec<String>,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub usable: bool,
    pub target_exposure_ms: f64,
    /// Keyed by qubit counted from 1.
    pub exposures_ms: BTreeMap<usize, f64>,
}

impl Record for SingleRow {
    const HEADER: &'static [&'static str] = &["protocol", "N", "a", "b", "hops", "pattern", "F", "usable", "target_exposure_ms"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.protocol.to_string(),
            self.n.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.hops.to_string(),
            self.pattern.clone(),
            format_g(self.fidelity),
            self.usable.to_string(),
            format_g(self.target_exposure_ms),
        ]
    }
}

/// Runs a command and returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Single(a) => single(a),
        Command::SweepSymmetric(a) => {
            let c: SweepSymmetricConfig = config::load(a.config.as_deref())?;
            let rows = sweep_symmetric_grid(&c.sweep(a.protocol))?;
            Ok(vec![write_table(&rows, &a.out, "sweep_symmetric", a.format)?])
        }
        Command::AsymMemory(a) => {
            let c: AsymMemoryConfig = config::load(a.config.as_deref())?;
            let rows = sweep_memory(&c.sweep(a.protocol)?)?;
            Ok(vec![write_table(&rows, &a.out, "asym_memory", a.format)?])
        }
        Command::AsymPosition(a) => {
            let c: AsymPositionConfig = config::load(a.config.as_deref())?;
            let rows = sweep_position(&c.sweep(a.protocol)?)?;
            Ok(vec![write_table(&rows, &a.out, "asym_position", a.format)?])
        }
        Command::TopologyCompare(a) => topology(a),
    }
}

fn single(a: &CommonArgs) -> Result<Vec<PathBuf>> {
    let c: SingleConfig = config::load(a.config.as_deref())?;
    let rows = c
        .scenarios(a.protocol)?
        .iter()
        .map(|s| {
            let r = run_request(s)?;
            Ok(SingleRow {
                protocol: s.protocol,
                n: s.len(),
                a: s.request.a + 1,
                b: s.request.b + 1,
                hops: r.hops,
                pattern: r.pattern,
                maximizers: r.maximizers,
                fidelity: r.fidelity,
                usable: r.usable,
                target_exposure_ms: r.target_exposure / MS,
                exposures_ms: r.exposures.into_iter().map(|(q, t)| (q + 1, t / MS)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![write_table(&rows, &a.out, "single", a.format)?])
}

fn topology(a: &CommonArgs) -> Result<Vec<PathBuf>> {
    let c: TopologyConfig = config::load(a.config.as_deref())?;
    let cmp = c.comparison(a.protocol, a.seed);
    let out = cmp.run()?;
    let mut files = vec![
        write_table(&out.hops, &a.out, "topology_compare", a.format)?,
        write_table(&out.pairs, &a.out, "topology_pairs", a.format)?,
    ];
    if c.ablations {
        let no_deph = TopologyComparison {
            dephasing: false,
            hop_cap: Some(out.hop_cap),
            ..cmp.clone()
        };
        let no_depol = TopologyComparison {
            p: 0.0,
            hop_cap: Some(out.hop_cap),
            ..cmp
        };
        files.push(write_table(&no_deph.run()?.hops, &a.out, "topology_compare_no_dephasing", a.format)?);
        files.push(write_table(&no_depol.run()?.hops, &a.out, "topology_compare_no_depolarizing", a.format)?);
    }
    Ok(files)
}
