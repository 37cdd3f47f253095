//! Parameter sweeps over symmetric chains, single asymmetries and random
//! networks with basic or custom placements of the resource chain.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{EntanglementTopology, NetworkGeometry, Protocol, Request};
use crate::output::{format_g, Record};
use crate::pattern::Regime;
use crate::scenario::{run_request, NetworkScenario, PatternChoice, USABLE_FIDELITY};

const KM: f64 = 1e3;
const MS: f64 = 1e-3;

/// Pattern string of the depolarizing-regime candidate: x everywhere.
pub fn depolarizing_candidate(n: usize) -> String {
    "x".repeat(n.saturating_sub(2))
}

/// Pattern string of the dephasing-regime candidate for an `n`-chain with
/// targets at the ends. Local: y on the first two inner qubits. Central: y
/// on qubits `n/2 - 1`, `n/2`, `n/2 + 1` (counted from 1), i.e. around the
/// coordinator. Odd chains have a single optimal pattern, all x.
pub fn dephasing_candidate(protocol: Protocol, n: usize) -> String {
    let inner = n.saturating_sub(2);
    if n % 2 == 1 {
        return depolarizing_candidate(n);
    }
    (0..inner)
        .map(|i| {
            // inner index i is qubit i + 2 counted from 1
            let q = i + 2;
            let y = match protocol {
                Protocol::Local => i < 2,
                Protocol::Central => q + 1 >= n / 2 && q <= n / 2 + 1,
            };
            if y {
                'y'
            } else {
                'x'
            }
        })
        .collect()
}

/// One point of a symmetric sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricRow {
    pub p: f64,
    #[serde(rename = "T_ms")]
    pub t_ms: f64,
    pub protocol: Protocol,
    #[serde(rename = "N")]
    pub n: usize,
    pub best_pattern: String,
    #[serde(rename = "best_F")]
    pub best_f: f64,
    pub maximizers: Vec<String>,
    #[serde(rename = "F_depol_pattern")]
    pub f_depol_pattern: f64,
    #[serde(rename = "F_deph_pattern")]
    pub f_deph_pattern: f64,
    pub regime: Regime,
}

impl Record for SymmetricRow {
    const HEADER: &'static [&'static str] = &[
        "p",
        "T_ms",
        "protocol",
        "N",
        "best_pattern",
        "best_F",
        "F_depol_pattern",
        "F_deph_pattern",
        "regime",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            format_g(self.p),
            format_g(self.t_ms),
            self.protocol.to_string(),
            self.n.to_string(),
            self.best_pattern.clone(),
            format_g(self.best_f),
            format_g(self.f_depol_pattern),
            format_g(self.f_deph_pattern),
            self.regime.to_string(),
        ]
    }
}

/// Symmetric chain between its end nodes.
#[derive(Clone, Debug)]
pub struct SymmetricSweep {
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    /// Dephasing times, seconds.
    pub t: Vec<f64>,
    pub protocols: Vec<Protocol>,
    /// Inter-node distance, meters.
    pub spacing: f64,
    pub search_cap: usize,
}

impl Default for SymmetricSweep {
    fn default() -> Self {
        SymmetricSweep {
            n: vec![6],
            p: log_grid(1e-3, 0.1, 5),
            t: log_grid(1.0 * MS, 100.0 * MS, 5),
            protocols: Protocol::ALL.to_vec(),
            spacing: 15.0 * KM,
            search_cap: crate::pattern::DEFAULT_SEARCH_CAP,
        }
    }
}

/// `count` points from `lo` to `hi` evenly spaced in log scale.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo * (hi / lo).powf(i as f64 / (count - 1) as f64)
                }
            })
            .collect(),
    }
}

/// `count` points from `lo` to `hi` evenly spaced.
pub fn lin_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| if i == count - 1 { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
            .collect(),
    }
}

/// Evaluates one grid point of a symmetric sweep.
pub fn symmetric_point(n: usize, p: f64, t: f64, protocol: Protocol, spacing: f64, search_cap: usize) -> Result<SymmetricRow> {
    let mut s = NetworkScenario::symmetric_chain(n, spacing, p, t, protocol)?;
    s.search_cap = search_cap;
    let prep = s.prepare()?;
    let opt = prep.optimize()?;
    let eval = |pat: &str| -> Result<f64> { prep.fidelity(&prep.parse_pattern(pat)?) };
    let f_depol = eval(&depolarizing_candidate(n))?;
    let f_deph = eval(&dephasing_candidate(protocol, n))?;
    Ok(SymmetricRow {
        p,
        t_ms: t / MS,
        protocol,
        n,
        best_pattern: prep.pattern_string(opt.representative()),
        best_f: opt.fidelity,
        maximizers: opt.maximizers.iter().map(|m| prep.pattern_string(m)).collect(),
        f_depol_pattern: f_depol,
        f_deph_pattern: f_deph,
        regime: Regime::classify(f_depol, f_deph, opt.fidelity),
    })
}

/// Rows ordered by N, protocol, p, T.
pub fn sweep_symmetric_grid(sweep: &SymmetricSweep) -> Result<Vec<SymmetricRow>> {
    if sweep.n.is_empty() || sweep.p.is_empty() || sweep.t.is_empty() || sweep.protocols.is_empty() {
        return Err(Error::Config("empty sweep grid".into()));
    }
    let mut points = Vec::new();
    for &n in &sweep.n {
        if n < 3 {
            return Err(Error::ChainTooShort(n));
        }
        if n > sweep.search_cap {
            return Err(Error::SearchTooLarge(n, sweep.search_cap));
        }
        for &protocol in &sweep.protocols {
            for &p in &sweep.p {
                for &t in &sweep.t {
                    points.push((n, protocol, p, t));
                }
            }
        }
    }
    points
        .par_iter()
        .map(|&(n, protocol, p, t)| symmetric_point(n, p, t, protocol, sweep.spacing, sweep.search_cap))
        .collect()
}

/// One point of an asymmetry sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymmetryRow {
    pub protocol: Protocol,
    pub n: usize,
    /// Counted from 1.
    pub qubit: usize,
    /// Faulty dephasing time in ms, or distance to the previous node in km.
    pub value: f64,
    pub fidelity: f64,
}

/// Row of the faulty-memory sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemoryRow {
    pub protocol: Protocol,
    #[serde(rename = "N")]
    pub n: usize,
    pub faulty_qubit: usize,
    #[serde(rename = "T_ms")]
    pub t_ms: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
}

/// Row of the shifted-node sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionRow {
    pub protocol: Protocol,
    #[serde(rename = "N")]
    pub n: usize,
    pub shifted_qubit: usize,
    pub d_km: f64,
    #[serde(rename = "F")]
    pub fidelity: f64,
}

impl From<AsymmetryRow> for MemoryRow {
    fn from(r: AsymmetryRow) -> Self {
        MemoryRow { protocol: r.protocol, n: r.n, faulty_qubit: r.qubit, t_ms: r.value, fidelity: r.fidelity }
    }
}

impl From<AsymmetryRow> for PositionRow {
    fn from(r: AsymmetryRow) -> Self {
        PositionRow { protocol: r.protocol, n: r.n, shifted_qubit: r.qubit, d_km: r.value, fidelity: r.fidelity }
    }
}

impl Record for MemoryRow {
    const HEADER: &'static [&'static str] = &["protocol", "N", "faulty_qubit", "T_ms", "F"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.protocol.to_string(),
            self.n.to_string(),
            self.faulty_qubit.to_string(),
            format_g(self.t_ms),
            format_g(self.fidelity),
        ]
    }
}

impl Record for PositionRow {
    const HEADER: &'static [&'static str] = &["protocol", "N", "shifted_qubit", "d_km", "F"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.protocol.to_string(),
            self.n.to_string(),
            self.shifted_qubit.to_string(),
            format_g(self.d_km),
            format_g(self.fidelity),
        ]
    }
}

/// Symmetric all-x chain with one swept element.
#[derive(Clone, Debug)]
pub struct AsymmetrySweep {
    pub n: usize,
    pub p: f64,
    /// Dephasing time of the healthy memories, seconds.
    pub t: f64,
    /// Meters.
    pub spacing: f64,
    pub protocols: Vec<Protocol>,
    /// Swept qubits, 0-based; empty means all.
    pub qubits: Vec<usize>,
    /// Faulty dephasing times (s) or distances to the previous node (m).
    pub values: Vec<f64>,
}

impl AsymmetrySweep {
    /// Faulty memory between 0.1 ms and 100 ms in a 7-chain.
    pub fn memory_default() -> Self {
        AsymmetrySweep {
            n: 7,
            p: 0.01,
            t: 100.0 * MS,
            spacing: 15.0 * KM,
            protocols: Protocol::ALL.to_vec(),
            qubits: Vec::new(),
            values: log_grid(0.1 * MS, 100.0 * MS, 31),
        }
    }

    /// One node shifted between 5 km and 25 km from its predecessor in a
    /// 5-chain.
    pub fn position_default() -> Self {
        AsymmetrySweep {
            n: 5,
            p: 0.01,
            t: 100.0 * MS,
            spacing: 15.0 * KM,
            protocols: Protocol::ALL.to_vec(),
            qubits: Vec::new(),
            values: lin_grid(5.0 * KM, 25.0 * KM, 21),
        }
    }

    fn qubits(&self) -> Result<Vec<usize>> {
        if let Some(&q) = self.qubits.iter().find(|&&q| q >= self.n) {
            return Err(Error::Config(format!("qubit {} outside a {}-chain", q + 1, self.n)));
        }
        Ok(if self.qubits.is_empty() { (0..self.n).collect() } else { self.qubits.clone() })
    }

    fn template(&self, protocol: Protocol) -> Result<NetworkScenario> {
        if self.values.is_empty() || self.protocols.is_empty() {
            return Err(Error::Config("empty sweep range".into()));
        }
        let mut s = NetworkScenario::symmetric_chain(self.n, self.spacing, self.p, self.t, protocol)?;
        s.pattern = PatternChoice::AllX;
        Ok(s)
    }

    fn run(&self, apply: impl Fn(&mut NetworkScenario, usize, f64) -> Result<()> + Sync, unit: f64) -> Result<Vec<AsymmetryRow>> {
        let qubits = self.qubits()?;
        let mut jobs = Vec::new();
        for &protocol in &self.protocols {
            let template = self.template(protocol)?;
            for &q in &qubits {
                for &v in &self.values {
                    jobs.push((template.clone(), q, v));
                }
            }
        }
        jobs.into_par_iter()
            .map(|(mut s, q, v)| {
                apply(&mut s, q, v)?;
                Ok(AsymmetryRow {
                    protocol: s.protocol,
                    n: self.n,
                    qubit: q + 1,
                    value: v / unit,
                    fidelity: run_request(&s)?.fidelity,
                })
            })
            .collect()
    }
}

/// Fidelity against the dephasing time of one faulty memory.
pub fn sweep_memory(sweep: &AsymmetrySweep) -> Result<Vec<MemoryRow>> {
    if let Some(&t) = sweep.values.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::InvalidTime(format!("faulty dephasing time {t} s is not positive")));
    }
    let rows = sweep.run(
        |s, q, t| {
            s.dephasing_time[q] = t;
            Ok(())
        },
        MS,
    )?;
    Ok(rows.into_iter().map(MemoryRow::from).collect())
}

/// Fidelity against the position of one node, moved along the line so that
/// it is `d` from its predecessor and `2·spacing − d` from its successor.
/// End nodes have only one of the two.
pub fn sweep_position(sweep: &AsymmetrySweep) -> Result<Vec<PositionRow>> {
    if let Some(&d) = sweep.values.iter().find(|d| !(**d > 0.0 && **d < 2.0 * sweep.spacing)) {
        return Err(Error::Config(format!(
            "shift {} km must lie strictly between 0 and {} km",
            d / KM,
            2.0 * sweep.spacing / KM
        )));
    }
    let rows = sweep.run(
        |s, node, d| {
            s.geometry = shifted_line(sweep.n, sweep.spacing, node, d)?;
            Ok(())
        },
        KM,
    )?;
    Ok(rows.into_iter().map(PositionRow::from).collect())
}

/// Equally spaced line with node `shifted` displaced by `d − spacing`.
pub fn shifted_line(n: usize, spacing: f64, shifted: usize, d: f64) -> Result<NetworkGeometry> {
    let positions = (0..n)
        .map(|i| {
            let x = i as f64 * spacing;
            [if i == shifted { x + d - spacing } else { x }, 0.0]
        })
        .collect();
    NetworkGeometry::new(positions)
}

/// Random network with a custom placement of the resource chain.
#[derive(Clone, Debug)]
pub struct TopologyComparison {
    pub nodes: usize,
    /// Step range of the random walk, meters.
    pub min_spacing: f64,
    pub max_spacing: f64,
    pub p: f64,
    /// Dephasing time range of the node memories, seconds.
    pub t_min: f64,
    pub t_max: f64,
    pub protocols: Vec<Protocol>,
    /// Independent random networks pooled together.
    pub instances: usize,
    /// Largest hop count reported; default is the largest with at least
    /// [`MIN_PAIRS`] pairs.
    pub hop_cap: Option<usize>,
    /// Place qubit `i` on node `i`, which makes both topologies equal.
    pub identity_permutation: bool,
    /// With `false` the memories are still drawn but never dephase.
    pub dephasing: bool,
    pub seed: u64,
}

/// Pairs needed at a hop count for it to be reported by default.
pub const MIN_PAIRS: usize = 5;

impl Default for TopologyComparison {
    fn default() -> Self {
        TopologyComparison {
            nodes: 100,
            min_spacing: 5.0 * KM,
            max_spacing: 25.0 * KM,
            p: 0.01,
            t_min: 10.0 * MS,
            t_max: 100.0 * MS,
            protocols: Protocol::ALL.to_vec(),
            instances: 1,
            hop_cap: None,
            identity_permutation: false,
            dephasing: true,
            seed: 0,
        }
    }
}

/// Which placement of the resource chain a row refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Custom,
    Basic,
}

impl TopologyKind {
    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Custom => "custom",
            TopologyKind::Basic => "basic",
        }
    }
}

/// Random draws of one instance.
#[derive(Clone, Debug)]
pub struct NetworkInstance {
    pub geometry: NetworkGeometry,
    /// Per node, seconds.
    pub memories: Vec<f64>,
    pub custom: EntanglementTopology,
}

/// Node pair served in both topologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodePair {
    /// Nodes of the lower and higher custom-chain qubit.
    pub a: usize,
    pub b: usize,
    pub custom_hops: usize,
}

/// One evaluated pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRow {
    pub instance: usize,
    pub protocol: Protocol,
    pub topology: TopologyKind,
    /// Hops in the custom topology, which groups the pairs.
    pub hops: usize,
    /// Hops in the evaluated topology.
    pub own_hops: usize,
    /// Nodes counted from 1.
    pub node_a: usize,
    pub node_b: usize,
    #[serde(rename = "F")]
    pub fidelity: f64,
}

impl Record for PairRow {
    const HEADER: &'static [&'static str] = &["instance", "protocol", "topology", "hops", "own_hops", "node_a", "node_b", "F"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.instance.to_string(),
            self.protocol.to_string(),
            self.topology.name().into(),
            self.hops.to_string(),
            self.own_hops.to_string(),
            self.node_a.to_string(),
            self.node_b.to_string(),
            format_g(self.fidelity),
        ]
    }
}

/// Aggregate per protocol, topology and hop count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopRow {
    pub protocol: Protocol,
    pub topology: TopologyKind,
    pub hops: usize,
    #[serde(rename = "mean_F")]
    pub mean_f: f64,
    #[serde(rename = "std_F")]
    pub std_f: f64,
    pub n_pairs: usize,
    pub usable_pct: f64,
}

impl Record for HopRow {
    const HEADER: &'static [&'static str] = &["protocol", "topology", "hops", "mean_F", "std_F", "n_pairs", "usable_pct"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.protocol.to_string(),
            self.topology.name().into(),
            self.hops.to_string(),
            format_g(self.mean_f),
            format_g(self.std_f),
            self.n_pairs.to_string(),
            format_g(self.usable_pct),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologyOutcome {
    pub hops: Vec<HopRow>,
    pub pairs: Vec<PairRow>,
    pub hop_cap: usize,
}

const STREAM_GEOMETRY: u64 = 0;
const STREAM_MEMORIES: u64 = 1;
const STREAM_PERMUTATION: u64 = 2;

impl TopologyComparison {
    fn validate(&self) -> Result<()> {
        if self.nodes < 4 {
            return Err(Error::Config(format!("{} nodes leave no interior pairs", self.nodes)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidProbability(self.p));
        }
        if !(self.t_min > 0.0 && self.t_max >= self.t_min) {
            return Err(Error::InvalidTime(format!("memory range [{}, {}] s", self.t_min, self.t_max)));
        }
        if self.instances == 0 || self.protocols.is_empty() {
            return Err(Error::Config("nothing to evaluate".into()));
        }
        Ok(())
    }

    /// ChaCha8 seeded with `seed`, on stream `3·instance + purpose`, so each
    /// kind of draw is independent of the others.
    fn rng(&self, instance: usize, purpose: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(3 * instance as u64 + purpose);
        rng
    }

    pub fn instance(&self, index: usize) -> Result<NetworkInstance> {
        self.validate()?;
        let geometry = NetworkGeometry::random_walk(
            &mut self.rng(index, STREAM_GEOMETRY),
            self.nodes,
            self.min_spacing,
            self.max_spacing,
        )?;
        let mut rng = self.rng(index, STREAM_MEMORIES);
        let memories = (0..self.nodes).map(|_| rng.random_range(self.t_min..=self.t_max)).collect();
        let mut node_of: Vec<usize> = (0..self.nodes).collect();
        if !self.identity_permutation {
            node_of.shuffle(&mut self.rng(index, STREAM_PERMUTATION));
        }
        Ok(NetworkInstance {
            geometry,
            memories,
            custom: EntanglementTopology::from_placement(node_of)?,
        })
    }

    /// Pairs `h` hops apart in the custom chain whose qubits are interior
    /// in both topologies, so both outer neighbors are always measured.
    pub fn pairs(&self, inst: &NetworkInstance, hops: usize) -> Vec<NodePair> {
        let n = self.nodes;
        let interior = |q: usize| q >= 1 && q + 2 <= n;
        (1..n.saturating_sub(1 + hops))
            .map(|q| (q, q + hops))
            .filter(|&(_, r)| interior(r))
            .map(|(q, r)| NodePair {
                a: inst.custom.node_of(q),
                b: inst.custom.node_of(r),
                custom_hops: hops,
            })
            .filter(|p| interior(p.a) && interior(p.b))
            .collect()
    }

    fn scenario(&self, inst: &NetworkInstance, topo: EntanglementTopology, pair: &NodePair, protocol: Protocol) -> Result<NetworkScenario> {
        let request = Request::new(topo.qubit_at(pair.a), topo.qubit_at(pair.b))?;
        let n = self.nodes;
        let dephasing_time = (0..n)
            .map(|q| if self.dephasing { inst.memories[topo.node_of(q)] } else { f64::INFINITY })
            .collect();
        Ok(NetworkScenario {
            geometry: inst.geometry.clone(),
            topology: topo,
            protocol,
            start_node: None,
            coordinator: None,
            depolarizing: vec![self.p; n],
            dephasing_time,
            request,
            pattern: PatternChoice::AllX,
            search_cap: crate::pattern::DEFAULT_SEARCH_CAP,
        })
    }

    pub fn run(&self) -> Result<TopologyOutcome> {
        self.validate()?;
        let instances = (0..self.instances).map(|i| self.instance(i)).collect::<Result<Vec<_>>>()?;
        let count = |h: usize| instances.iter().map(|inst| self.pairs(inst, h).len()).sum::<usize>();
        let hop_cap = match self.hop_cap {
            Some(c) => c,
            None => (1..self.nodes).take_while(|&h| count(h) >= MIN_PAIRS).last().unwrap_or(0),
        };
        let mut jobs = Vec::new();
        for (i, inst) in instances.iter().enumerate() {
            for h in 1..=hop_cap {
                for pair in self.pairs(inst, h) {
                    for &protocol in &self.protocols {
                        for kind in [TopologyKind::Custom, TopologyKind::Basic] {
                            jobs.push((i, pair, protocol, kind));
                        }
                    }
                }
            }
        }
        let mut pairs: Vec<PairRow> = jobs
            .par_iter()
            .map(|&(i, pair, protocol, kind)| {
                let inst = &instances[i];
                let topo = match kind {
                    TopologyKind::Custom => inst.custom.clone(),
                    TopologyKind::Basic => EntanglementTopology::basic(self.nodes),
                };
                let s = self.scenario(inst, topo, &pair, protocol)?;
                let r = run_request(&s)?;
                Ok(PairRow {
                    instance: i,
                    protocol,
                    topology: kind,
                    hops: pair.custom_hops,
                    own_hops: r.hops,
                    node_a: pair.a + 1,
                    node_b: pair.b + 1,
                    fidelity: r.fidelity,
                })
            })
            .collect::<Result<_>>()?;
        // protocol, topology, hops, then draw order
        pairs.sort_by_key(|r| (r.protocol, r.topology, r.hops));
        let mut hops = Vec::new();
        for &protocol in &self.protocols {
            for kind in [TopologyKind::Custom, TopologyKind::Basic] {
                for h in 1..=hop_cap {
                    let f: Vec<f64> = pairs
                        .iter()
                        .filter(|r| r.protocol == protocol && r.topology == kind && r.hops == h)
                        .map(|r| r.fidelity)
                        .collect();
                    if f.is_empty() {
                        continue;
                    }
                    let (mean, std) = mean_std(&f);
                    let usable = f.iter().filter(|&&x| x >= USABLE_FIDELITY).count();
                    hops.push(HopRow {
                        protocol,
                        topology: kind,
                        hops: h,
                        mean_f: mean,
                        std_f: std,
                        n_pairs: f.len(),
                        usable_pct: 100.0 * usable as f64 / f.len() as f64,
                    });
                }
            }
        }
        Ok(TopologyOutcome { hops, pairs, hop_cap })
    }
}

/// Mean and population standard deviation.
pub fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
