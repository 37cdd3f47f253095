//! Config files for the command-line experiments. TOML or JSON (by file
//! extension); distances in km, times in ms, processing in µs, qubits and
//! nodes counted from 1.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::experiments::{log_grid, lin_grid, AsymmetrySweep, SymmetricSweep, TopologyComparison};
use crate::network::{EntanglementTopology, NetworkGeometry, Protocol, Request, FIBER_SPEED, PROCESSING_TIME};
use crate::pattern::DEFAULT_SEARCH_CAP;
use crate::scenario::{NetworkScenario, PatternChoice};

const KM: f64 = 1e3;
const MS: f64 = 1e-3;
const US: f64 = 1e-6;

/// Reads a config, or the defaults when `path` is `None`.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)?;
    parse(&text, path.extension().and_then(|e| e.to_str()) == Some("json"))
}

pub fn parse<T: DeserializeOwned>(text: &str, json: bool) -> Result<T> {
    if json {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

fn to_index(one_based: usize, len: usize, what: &str) -> Result<usize> {
    if one_based == 0 || one_based > len {
        return Err(Error::Config(format!("{what} {one_based} outside 1..={len}")));
    }
    Ok(one_based - 1)
}

fn protocols(list: &Option<Vec<Protocol>>, cli: Option<Protocol>) -> Vec<Protocol> {
    match (cli, list) {
        (Some(p), _) => vec![p],
        (None, Some(l)) => l.clone(),
        (None, None) => Protocol::ALL.to_vec(),
    }
}

/// Timing of the classical network.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TimingConfig {
    pub speed_km_per_ms: f64,
    pub processing_us: f64,
    pub offset_us: f64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            speed_km_per_ms: FIBER_SPEED / KM * MS,
            processing_us: PROCESSING_TIME / US,
            offset_us: 0.0,
        }
    }
}

impl TimingConfig {
    fn apply(&self, g: NetworkGeometry) -> Result<NetworkGeometry> {
        g.with_speed(self.speed_km_per_ms * KM / MS)?
            .with_processing(self.processing_us * US)?
            .with_offset(self.offset_us * US)
    }
}

/// One request, `single` subcommand.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SingleConfig {
    /// Chain length; implied by any per-qubit list.
    pub n: usize,
    pub protocols: Option<Vec<Protocol>>,
    pub spacing_km: f64,
    /// Link lengths, overriding `spacing_km`.
    pub spacings_km: Option<Vec<f64>>,
    /// Planar node positions, overriding both spacing keys.
    pub positions_km: Option<Vec<[f64; 2]>>,
    pub p: f64,
    pub p_per_qubit: Option<Vec<f64>>,
    /// `inf` (TOML) disables dephasing.
    pub t_ms: f64,
    /// `inf` or `null` entries disable dephasing of that qubit.
    pub t_ms_per_qubit: Option<Vec<Option<f64>>>,
    /// Target qubits; defaults to the chain ends.
    pub request: Option<[usize; 2]>,
    /// `"all-x"`, `"optimize"`, or a string over {x, y} for the inner qubits.
    pub pattern: String,
    /// Node of each qubit; defaults to the basic placement.
    pub placement: Option<Vec<usize>>,
    pub start_node: Option<usize>,
    pub coordinator: Option<usize>,
    pub search_cap: usize,
    pub timing: TimingConfig,
}

impl Default for SingleConfig {
    fn default() -> Self {
        SingleConfig {
            n: 7,
            protocols: None,
            spacing_km: 15.0,
            spacings_km: None,
            positions_km: None,
            p: 0.01,
            p_per_qubit: None,
            t_ms: 100.0,
            t_ms_per_qubit: None,
            request: None,
            pattern: "all-x".into(),
            placement: None,
            start_node: None,
            coordinator: None,
            search_cap: DEFAULT_SEARCH_CAP,
            timing: TimingConfig::default(),
        }
    }
}

impl SingleConfig {
    /// Chain length after reconciling the per-qubit lists.
    pub fn chain_len(&self) -> Result<usize> {
        let mut sizes = vec![];
        if let Some(v) = &self.p_per_qubit {
            sizes.push(("p_per_qubit", v.len()));
        }
        if let Some(v) = &self.t_ms_per_qubit {
            sizes.push(("t_ms_per_qubit", v.len()));
        }
        if let Some(v) = &self.positions_km {
            sizes.push(("positions_km", v.len()));
        } else if let Some(v) = &self.spacings_km {
            sizes.push(("spacings_km", v.len() + 1));
        }
        if let Some(v) = &self.placement {
            sizes.push(("placement", v.len()));
        }
        let n = sizes.first().map_or(self.n, |s| s.1);
        if let Some((key, len)) = sizes.iter().find(|s| s.1 != n) {
            return Err(Error::Config(format!("{key} describes {len} qubits, expected {n}")));
        }
        Ok(n)
    }

    pub fn scenarios(&self, cli_protocol: Option<Protocol>) -> Result<Vec<NetworkScenario>> {
        let n = self.chain_len()?;
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        let geometry = if let Some(pos) = &self.positions_km {
            NetworkGeometry::new(pos.iter().map(|p| [p[0] * KM, p[1] * KM]).collect())?
        } else if let Some(sp) = &self.spacings_km {
            NetworkGeometry::from_spacings(&sp.iter().map(|d| d * KM).collect::<Vec<_>>())?
        } else {
            NetworkGeometry::line(n, self.spacing_km * KM)?
        };
        let geometry = self.timing.apply(geometry)?;
        let topology = match &self.placement {
            Some(nodes) => EntanglementTopology::from_placement(
                nodes.iter().map(|&k| to_index(k, n, "node")).collect::<Result<_>>()?,
            )?,
            None => EntanglementTopology::basic(n),
        };
        let [a, b] = self.request.unwrap_or([1, n]);
        let request = Request::new(to_index(a, n, "qubit")?, to_index(b, n, "qubit")?)?;
        let pattern = match self.pattern.trim() {
            "optimize" => PatternChoice::Optimize,
            "all-x" => PatternChoice::AllX,
            s => PatternChoice::Fixed(s.to_string()),
        };
        let depolarizing = self.p_per_qubit.clone().unwrap_or_else(|| vec![self.p; n]);
        let dephasing_time = self
            .t_ms_per_qubit
            .clone()
            .unwrap_or_else(|| vec![Some(self.t_ms); n])
            .into_iter()
            .map(|t| t.map_or(f64::INFINITY, |t| t * MS))
            .collect::<Vec<_>>();
        let start_node = self.start_node.map(|k| to_index(k, n, "start node")).transpose()?;
        let coordinator = self.coordinator.map(|k| to_index(k, n, "coordinator")).transpose()?;
        protocols(&self.protocols, cli_protocol)
            .into_iter()
            .map(|protocol| {
                let s = NetworkScenario {
                    geometry: geometry.clone(),
                    topology: topology.clone(),
                    protocol,
                    start_node,
                    coordinator,
                    depolarizing: depolarizing.clone(),
                    dephasing_time: dephasing_time.clone(),
                    request,
                    pattern: pattern.clone(),
                    search_cap: self.search_cap,
                };
                s.validate()?;
                Ok(s)
            })
            .collect()
    }
}

/// `sweep-symmetric` subcommand.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSymmetricConfig {
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub t_ms: Vec<f64>,
    pub spacing_km: f64,
    pub protocols: Option<Vec<Protocol>>,
    pub search_cap: usize,
}

impl Default for SweepSymmetricConfig {
    fn default() -> Self {
        let d = SymmetricSweep::default();
        SweepSymmetricConfig {
            n: d.n,
            p: d.p,
            t_ms: d.t.iter().map(|t| t / MS).collect(),
            spacing_km: d.spacing / KM,
            protocols: None,
            search_cap: d.search_cap,
        }
    }
}

impl SweepSymmetricConfig {
    pub fn sweep(&self, cli_protocol: Option<Protocol>) -> SymmetricSweep {
        SymmetricSweep {
            n: self.n.clone(),
            p: self.p.clone(),
            t: self.t_ms.iter().map(|t| t * MS).collect(),
            protocols: protocols(&self.protocols, cli_protocol),
            spacing: self.spacing_km * KM,
            search_cap: self.search_cap,
        }
    }
}

/// `asym-memory` subcommand.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AsymMemoryConfig {
    pub n: usize,
    pub p: f64,
    pub t_ms: f64,
    pub spacing_km: f64,
    pub protocols: Option<Vec<Protocol>>,
    /// Faulty qubits; empty means each one in turn.
    pub qubits: Vec<usize>,
    pub faulty_t_ms: Vec<f64>,
}

impl Default for AsymMemoryConfig {
    fn default() -> Self {
        let d = AsymmetrySweep::memory_default();
        AsymMemoryConfig {
            n: d.n,
            p: d.p,
            t_ms: d.t / MS,
            spacing_km: d.spacing / KM,
            protocols: None,
            qubits: Vec::new(),
            faulty_t_ms: log_grid(0.1, 100.0, d.values.len()),
        }
    }
}

impl AsymMemoryConfig {
    pub fn sweep(&self, cli_protocol: Option<Protocol>) -> Result<AsymmetrySweep> {
        Ok(AsymmetrySweep {
            n: self.n,
            p: self.p,
            t: self.t_ms * MS,
            spacing: self.spacing_km * KM,
            protocols: protocols(&self.protocols, cli_protocol),
            qubits: self.qubits.iter().map(|&q| to_index(q, self.n, "qubit")).collect::<Result<_>>()?,
            values: self.faulty_t_ms.iter().map(|t| t * MS).collect(),
        })
    }
}

/// `asym-position` subcommand.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AsymPositionConfig {
    pub n: usize,
    pub p: f64,
    pub t_ms: f64,
    pub spacing_km: f64,
    pub protocols: Option<Vec<Protocol>>,
    /// Shifted qubits; empty means each one in turn.
    pub qubits: Vec<usize>,
    /// Distance of the shifted node to its predecessor.
    pub d_km: Vec<f64>,
}

impl Default for AsymPositionConfig {
    fn default() -> Self {
        let d = AsymmetrySweep::position_default();
        AsymPositionConfig {
            n: d.n,
            p: d.p,
            t_ms: d.t / MS,
            spacing_km: d.spacing / KM,
            protocols: None,
            qubits: Vec::new(),
            d_km: lin_grid(5.0, 25.0, d.values.len()),
        }
    }
}

impl AsymPositionConfig {
    pub fn sweep(&self, cli_protocol: Option<Protocol>) -> Result<AsymmetrySweep> {
        Ok(AsymmetrySweep {
            n: self.n,
            p: self.p,
            t: self.t_ms * MS,
            spacing: self.spacing_km * KM,
            protocols: protocols(&self.protocols, cli_protocol),
            qubits: self.qubits.iter().map(|&q| to_index(q, self.n, "qubit")).collect::<Result<_>>()?,
            values: self.d_km.iter().map(|d| d * KM).collect(),
        })
    }
}

/// `topology-compare` subcommand.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    pub nodes: usize,
    pub min_spacing_km: f64,
    pub max_spacing_km: f64,
    pub p: f64,
    pub t_min_ms: f64,
    pub t_max_ms: f64,
    pub protocols: Option<Vec<Protocol>>,
    pub instances: usize,
    pub hop_cap: Option<usize>,
    pub identity_permutation: bool,
    /// Also run without dephasing and without depolarization.
    pub ablations: bool,
    pub seed: u64,
}

impl Default for TopologyConfig {
    fn default() -> Self {
        let d = TopologyComparison::default();
        TopologyConfig {
            nodes: d.nodes,
            min_spacing_km: d.min_spacing / KM,
            max_spacing_km: d.max_spacing / KM,
            p: d.p,
            t_min_ms: d.t_min / MS,
            t_max_ms: d.t_max / MS,
            protocols: None,
            instances: d.instances,
            hop_cap: d.hop_cap,
            identity_permutation: d.identity_permutation,
            ablations: true,
            seed: d.seed,
        }
    }
}

impl TopologyConfig {
    pub fn comparison(&self, cli_protocol: Option<Protocol>, cli_seed: Option<u64>) -> TopologyComparison {
        TopologyComparison {
            nodes: self.nodes,
            min_spacing: self.min_spacing_km * KM,
            max_spacing: self.max_spacing_km * KM,
            p: self.p,
            t_min: self.t_min_ms * MS,
            t_max: self.t_max_ms * MS,
            protocols: protocols(&self.protocols, cli_protocol),
            instances: self.instances,
            hop_cap: self.hop_cap,
            identity_permutation: self.identity_permutation,
            dephasing: true,
            seed: cli_seed.unwrap_or(self.seed),
        }
    }
}
