//! End-to-end evaluation of a Bell-pair request on a chain resource state.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::network::{delays, DelayProfile, EntanglementTopology, NetworkGeometry, Protocol, Request};
use crate::nsf::{
    assemble_fidelity, dephasing_channel, dephasing_probability, depolarizing_channel, CompiledStrategy,
    DenseOracle, PauliChannel,
};
use crate::pattern::{enumerate_over, exhaustive_search, pattern_to_strategy, MeasurementPattern, Optimum, Strategy};
use crate::pauli::Basis;

/// Fidelity at or above which a pair still counts as entangled.
pub const USABLE_FIDELITY: f64 = 0.5;

/// How the inner qubits are measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternChoice {
    /// x on every inner qubit.
    AllX,
    /// Pattern string, character `i` for the `i`-th inner qubit counted from
    /// the lower chain position.
    Fixed(String),
    /// Exhaustive search over all x/y patterns.
    Optimize,
}

#[derive(Clone, Debug)]
pub struct NetworkScenario {
    pub geometry: NetworkGeometry,
    pub topology: EntanglementTopology,
    pub protocol: Protocol,
    /// Node that starts the local protocol; defaults to the node of target `a`.
    pub start_node: Option<usize>,
    /// Coordinator of the central protocol; defaults to node `⌈N/2⌉`.
    pub coordinator: Option<usize>,
    /// Per chain qubit.
    pub depolarizing: Vec<f64>,
    /// Per chain qubit, seconds; infinite for a perfect memory.
    pub dephasing_time: Vec<f64>,
    pub request: Request,
    pub pattern: PatternChoice,
    /// Longest target-to-target path (targets included) searched exhaustively.
    pub search_cap: usize,
}

impl NetworkScenario {
    /// Equally spaced line, basic topology, same noise everywhere, Bell pair
    /// between the chain ends, all-x pattern.
    pub fn symmetric_chain(n: usize, spacing: f64, p: f64, dephasing_time: f64, protocol: Protocol) -> Result<Self> {
        if n < 2 {
            return Err(Error::ChainTooShort(n));
        }
        Ok(NetworkScenario {
            geometry: NetworkGeometry::line(n, spacing)?,
            topology: EntanglementTopology::basic(n),
            protocol,
            start_node: None,
            coordinator: None,
            depolarizing: vec![p; n],
            dephasing_time: vec![dephasing_time; n],
            request: Request::new(0, n - 1)?,
            pattern: PatternChoice::AllX,
            search_cap: crate::pattern::DEFAULT_SEARCH_CAP,
        })
    }

    pub fn len(&self) -> usize {
        self.topology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topology.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.geometry.len() != n || self.depolarizing.len() != n || self.dephasing_time.len() != n {
            return Err(Error::InvalidScenario(format!(
                "sizes disagree: {} nodes, {} qubits, {} depolarizing strengths, {} dephasing times",
                self.geometry.len(),
                n,
                self.depolarizing.len(),
                self.dephasing_time.len()
            )));
        }
        if let Some(&p) = self.depolarizing.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(p));
        }
        if let Some(&t) = self.dephasing_time.iter().find(|t| !(**t > 0.0)) {
            return Err(Error::InvalidTime(format!("dephasing time {t} s is not positive")));
        }
        self.topology.hops(&self.request)?;
        Ok(())
    }

    pub fn delays(&self) -> Result<DelayProfile> {
        delays(
            self.protocol,
            &self.geometry,
            &self.topology,
            &self.request,
            self.start_node,
            self.coordinator,
        )
    }

    /// Everything about the request that does not depend on the pattern.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let n = self.len();
        let inv = self.topology.involved(&self.request)?;
        let delays = self.delays()?;
        let (lo, hi) = (self.request.a.min(self.request.b), self.request.a.max(self.request.b));
        // Outer neighbors are z-measured, which cuts the rest of the chain
        // off: the target only sees the segment between them.
        let first = inv.outer().fold(lo, usize::min);
        let last = inv.outer().fold(hi, usize::max);
        let labels: Vec<usize> = (first..=last).collect();
        let g0 = GraphState::path(n, &labels)?;
        let target = GraphState::path(n, &[lo, hi])?;
        let mut channels = Vec::with_capacity(2 * labels.len());
        for &q in &labels {
            let t = delays
                .exposure(q, &self.request)
                .expect("every qubit of the segment is measured or a target");
            let p = self.depolarizing[q];
            if p > 0.0 {
                channels.push(depolarizing_channel(n, q, p)?);
            }
            let dq = dephasing_probability(t, self.dephasing_time[q])?;
            if dq > 0.0 {
                channels.push(dephasing_channel(n, q, dq)?);
            }
        }
        Ok(Prepared {
            g0,
            target,
            inner: inv.inner.clone(),
            outer: inv.outer().collect(),
            channels,
            hops: hi - lo,
            delays,
            request: self.request,
            search_cap: self.search_cap,
        })
    }
}

/// A request with its resource segment, noise channels and exposures fixed.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub g0: GraphState,
    pub target: GraphState,
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub channels: Vec<PauliChannel>,
    pub hops: usize,
    pub delays: DelayProfile,
    pub request: Request,
    pub search_cap: usize,
}

impl Prepared {
    pub fn all_x(&self) -> MeasurementPattern {
        MeasurementPattern::from_pairs(self.inner.iter().map(|&v| (v, Basis::X)))
    }

    pub fn parse_pattern(&self, s: &str) -> Result<MeasurementPattern> {
        MeasurementPattern::from_chain_string(s, &self.inner)
    }

    pub fn pattern_string(&self, p: &MeasurementPattern) -> String {
        p.to_chain_string(&self.inner).expect("pattern covers the inner qubits")
    }

    /// Outer neighbors in z first, then the inner qubits in chain order.
    pub fn strategy(&self, pattern: &MeasurementPattern) -> Result<Strategy> {
        if pattern.bases.keys().copied().ne(self.inner.iter().copied()) {
            return Err(Error::InvalidPattern(format!(
                "pattern {pattern} does not cover the inner qubits {:?}",
                self.inner
            )));
        }
        if pattern.bases.values().any(|&b| b == Basis::Z) {
            return Err(Error::InvalidPattern("z on an inner qubit cuts the path".into()));
        }
        let mut full = pattern.clone();
        let mut order = self.outer.clone();
        for &v in &self.outer {
            full.bases.insert(v, Basis::Z);
        }
        order.extend(&self.inner);
        pattern_to_strategy(&full, &self.g0, Some(&order))
    }

    pub fn fidelity(&self, pattern: &MeasurementPattern) -> Result<f64> {
        let compiled = CompiledStrategy::new(&self.strategy(pattern)?, &self.g0)?;
        debug_assert_eq!(compiled.final_graph().vertex_set(), self.target.vertex_set());
        let out = self
            .channels
            .iter()
            .map(|ch| compiled.propagate(ch))
            .collect::<Result<Vec<_>>>()?;
        assemble_fidelity(&out, compiled.final_graph())
    }

    /// Dense reference for the same request; limited to small segments.
    pub fn dense_oracle(&self) -> Result<DenseOracle> {
        DenseOracle::new(&self.g0, &self.channels)
    }

    pub fn dense_fidelity(&self, oracle: &DenseOracle, pattern: &MeasurementPattern) -> Result<f64> {
        let s = self.strategy(pattern)?;
        let target = s.final_graph(&self.g0)?;
        oracle.fidelity(&s, &target)
    }

    pub fn patterns(&self) -> Result<Vec<MeasurementPattern>> {
        enumerate_over(&self.inner)
    }

    pub fn optimize(&self) -> Result<Optimum> {
        let len = self.inner.len() + 2;
        if len > self.search_cap {
            return Err(Error::SearchTooLarge(len, self.search_cap));
        }
        exhaustive_search(&self.patterns()?, |p| self.fidelity(p))
    }
}

/// Outcome of one request.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub fidelity: f64,
    pub pattern: String,
    /// All patterns within the tie tolerance when optimizing.
    pub maximizers: Vec<String>,
    /// Exposure per involved qubit, seconds.
    pub exposures: BTreeMap<usize, f64>,
    pub target_exposure: f64,
    pub hops: usize,
    pub usable: bool,
}

pub fn run_request(scenario: &NetworkScenario) -> Result<ScenarioResult> {
    let prep = scenario.prepare()?;
    let (pattern, fidelity, maximizers) = match &scenario.pattern {
        PatternChoice::AllX => {
            let p = prep.all_x();
            let f = prep.fidelity(&p)?;
            (p, f, Vec::new())
        }
        PatternChoice::Fixed(s) => {
            let p = prep.parse_pattern(s)?;
            let f = prep.fidelity(&p)?;
            (p, f, Vec::new())
        }
        PatternChoice::Optimize => {
            let opt = prep.optimize()?;
            let names = opt.maximizers.iter().map(|p| prep.pattern_string(p)).collect();
            (opt.representative().clone(), opt.fidelity, names)
        }
    };
    let mut exposures = prep.delays.measured.clone();
    exposures.insert(scenario.request.a, prep.delays.target);
    exposures.insert(scenario.request.b, prep.delays.target);
    Ok(ScenarioResult {
        fidelity,
        pattern: prep.pattern_string(&pattern),
        maximizers,
        exposures,
        target_exposure: prep.delays.target,
        hops: prep.hops,
        usable: fidelity >= USABLE_FIDELITY,
    })
}

/// Best patterns for a scenario, regardless of its pattern choice.
pub fn optimize_pattern(scenario: &NetworkScenario) -> Result<Optimum> {
    scenario.prepare()?.optimize()
}
