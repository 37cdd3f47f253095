//! Network geometry, placement of the resource chain on the nodes, and the
//! exposure times each protocol imposes on the involved qubits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in optical fiber, m/s.
pub const FIBER_SPEED: f64 = 2e8;

/// Default processing time of a node, s.
pub const PROCESSING_TIME: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Nodes relay the request along a chain of classical channels.
    Local,
    /// A coordinator commands every node over a star of classical channels.
    Central,
}

impl Protocol {
    pub const ALL: [Protocol; 2] = [Protocol::Local, Protocol::Central];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Local => "local",
            Protocol::Central => "central",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "local" => Ok(Protocol::Local),
            "central" => Ok(Protocol::Central),
            other => Err(Error::Config(format!("unknown protocol {other:?}"))),
        }
    }
}

/// Node positions (meters) with the timing parameters of the classical
/// network. Consecutive nodes are linked by the chain of classical channels.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkGeometry {
    positions: Vec<[f64; 2]>,
    /// Cumulative chain length up to each node.
    prefix: Vec<f64>,
    pub speed: f64,
    pub processing: Vec<f64>,
    /// Storage time before the request arrives, added to every exposure.
    pub offset: f64,
}

impl NetworkGeometry {
    pub fn new(positions: Vec<[f64; 2]>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidScenario("geometry has no nodes".into()));
        }
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidScenario("node positions must be finite".into()));
        }
        let mut prefix = Vec::with_capacity(positions.len());
        let mut acc = 0.0;
        prefix.push(0.0);
        for w in positions.windows(2) {
            acc += euclid(w[0], w[1]);
            prefix.push(acc);
        }
        let n = positions.len();
        Ok(NetworkGeometry {
            positions,
            prefix,
            speed: FIBER_SPEED,
            processing: vec![PROCESSING_TIME; n],
            offset: 0.0,
        })
    }

    /// Nodes on a line with the given consecutive distances (meters).
    pub fn from_spacings(spacings: &[f64]) -> Result<Self> {
        if spacings.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::InvalidScenario("spacings must be non-negative".into()));
        }
        let mut x = 0.0;
        let mut positions = vec![[0.0, 0.0]];
        for d in spacings {
            x += d;
            positions.push([x, 0.0]);
        }
        Self::new(positions)
    }

    /// `n` equally spaced nodes on a line.
    pub fn line(n: usize, spacing: f64) -> Result<Self> {
        Self::from_spacings(&vec![spacing; n.saturating_sub(1)])
    }

    /// Planar chain: step lengths uniform in `[min, max]` meters, each
    /// heading within a right angle of the previous one.
    pub fn random_walk<R: Rng>(rng: &mut R, n: usize, min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max >= min) {
            return Err(Error::InvalidScenario(format!("invalid step range [{min}, {max}]")));
        }
        let mut positions = Vec::with_capacity(n);
        let mut p = [0.0, 0.0];
        let mut heading: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        positions.push(p);
        for _ in 1..n {
            let step = rng.random_range(min..=max);
            heading += rng.random_range(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2);
            p = [p[0] + step * heading.cos(), p[1] + step * heading.sin()];
            positions.push(p);
        }
        Self::new(positions)
    }

    pub fn with_speed(mut self, speed: f64) -> Result<Self> {
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(Error::InvalidScenario(format!("signal speed {speed} must be positive")));
        }
        self.speed = speed;
        Ok(self)
    }

    pub fn with_processing(mut self, tau: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidScenario(format!("processing time {tau} must be non-negative")));
        }
        self.processing = vec![tau; self.len()];
        Ok(self)
    }

    pub fn with_offset(mut self, t0: f64) -> Result<Self> {
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(Error::InvalidScenario(format!("time offset {t0} must be non-negative")));
        }
        self.offset = t0;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// Length of the classical channel between nodes `i` and `i + 1`.
    pub fn link_length(&self, i: usize) -> f64 {
        self.prefix[i + 1] - self.prefix[i]
    }

    /// Distance along the chain of classical channels.
    pub fn chain_distance(&self, i: usize, j: usize) -> f64 {
        (self.prefix[i] - self.prefix[j]).abs()
    }

    /// Straight-line distance, the length of a star link.
    pub fn direct_distance(&self, i: usize, j: usize) -> f64 {
        euclid(self.positions[i], self.positions[j])
    }

    /// Length of the classical path between two nodes.
    pub fn path_distance(&self, i: usize, j: usize, structure: ChannelStructure) -> f64 {
        if i == j {
            return 0.0;
        }
        match structure {
            ChannelStructure::Chain => self.chain_distance(i, j),
            ChannelStructure::Star { coordinator: c } if i == c || j == c => self.direct_distance(i, j),
            ChannelStructure::Star { coordinator: c } => self.direct_distance(i, c) + self.direct_distance(c, j),
        }
    }

    /// Default coordinator: node `⌈N/2⌉` counted from 1.
    pub fn default_coordinator(&self) -> usize {
        self.len().div_ceil(2) - 1
    }

    fn check(&self) -> Result<()> {
        if self.processing.len() != self.len() {
            return Err(Error::InvalidScenario(format!(
                "{} processing times for {} nodes",
                self.processing.len(),
                self.len()
            )));
        }
        if self.processing.iter().any(|t| !(*t >= 0.0)) || !(self.speed > 0.0) || !(self.offset >= 0.0) {
            return Err(Error::InvalidScenario("invalid timing parameters".into()));
        }
        Ok(())
    }
}

fn euclid(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelStructure {
    Chain,
    Star { coordinator: usize },
}

/// Placement of the resource chain `0 - 1 - … - (N-1)` on the nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntanglementTopology {
    node_of: Vec<usize>,
    qubit_at: Vec<usize>,
}

impl EntanglementTopology {
    /// Neighboring qubits on neighboring nodes.
    pub fn basic(n: usize) -> Self {
        EntanglementTopology {
            node_of: (0..n).collect(),
            qubit_at: (0..n).collect(),
        }
    }

    /// `node_of[q]` is the node holding chain qubit `q`.
    pub fn from_placement(node_of: Vec<usize>) -> Result<Self> {
        let n = node_of.len();
        let mut qubit_at = vec![usize::MAX; n];
        for (q, &node) in node_of.iter().enumerate() {
            if node >= n || qubit_at[node] != usize::MAX {
                return Err(Error::InvalidScenario("placement is not a permutation of the nodes".into()));
            }
            qubit_at[node] = q;
        }
        Ok(EntanglementTopology { node_of, qubit_at })
    }

    pub fn len(&self) -> usize {
        self.node_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_of.is_empty()
    }

    pub fn node_of(&self, q: usize) -> usize {
        self.node_of[q]
    }

    pub fn qubit_at(&self, node: usize) -> usize {
        self.qubit_at[node]
    }

    pub fn placement(&self) -> &[usize] {
        &self.node_of
    }

    pub fn is_basic(&self) -> bool {
        self.node_of.iter().enumerate().all(|(q, &n)| q == n)
    }

    /// Number of resource edges between the two targets.
    pub fn hops(&self, request: &Request) -> Result<usize> {
        self.check(request)?;
        Ok(request.a.abs_diff(request.b))
    }

    fn check(&self, request: &Request) -> Result<()> {
        for q in [request.a, request.b] {
            if q >= self.len() {
                return Err(Error::UnknownVertex(q));
            }
        }
        Ok(())
    }

    /// Qubits to measure: the path between the targets and the chain
    /// neighbors just outside it.
    pub fn involved(&self, request: &Request) -> Result<Involved> {
        self.check(request)?;
        let (lo, hi) = (request.a.min(request.b), request.a.max(request.b));
        let below = lo.checked_sub(1);
        let above = (hi + 1 < self.len()).then_some(hi + 1);
        let (outer_a, outer_b) = if request.a < request.b { (below, above) } else { (above, below) };
        Ok(Involved {
            inner: (lo + 1..hi).collect(),
            outer_a,
            outer_b,
        })
    }
}

/// Bipartite request between chain qubits `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub a: usize,
    pub b: usize,
}

impl Request {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidScenario(format!("request targets coincide ({a})")));
        }
        Ok(Request { a, b })
    }
}

/// Qubits measured to serve a request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involved {
    /// Path qubits in chain order from the lower target.
    pub inner: Vec<usize>,
    pub outer_a: Option<usize>,
    pub outer_b: Option<usize>,
}

impl Involved {
    pub fn outer(&self) -> impl Iterator<Item = usize> + '_ {
        self.outer_a.into_iter().chain(self.outer_b)
    }

    pub fn measured(&self) -> impl Iterator<Item = usize> + '_ {
        self.outer().chain(self.inner.iter().copied())
    }
}

/// Exposure times in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayProfile {
    pub measured: BTreeMap<usize, f64>,
    /// Shared by both targets, which wait for each other.
    pub target: f64,
}

impl DelayProfile {
    /// Exposure of qubit `q`, given the request it serves.
    pub fn exposure(&self, q: usize, request: &Request) -> Option<f64> {
        if q == request.a || q == request.b {
            Some(self.target)
        } else {
            self.measured.get(&q).copied()
        }
    }
}

fn max_or_zero(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Exposures under the local protocol, started by `start` (default: the
/// node of target `a`).
pub fn delays_local(
    geom: &NetworkGeometry,
    topo: &EntanglementTopology,
    request: &Request,
    start: Option<usize>,
) -> Result<DelayProfile> {
    geom.check()?;
    check_sizes(geom, topo)?;
    let inv = topo.involved(request)?;
    let start = start.unwrap_or(topo.node_of(request.a));
    if start >= geom.len() {
        return Err(Error::InvalidScenario(format!("start node {start} out of range")));
    }
    let nu = geom.speed;
    let d = |i: usize, j: usize| geom.chain_distance(i, j);
    let measured = inv
        .measured()
        .map(|q| {
            let n = topo.node_of(q);
            (q, d(start, n) / nu + geom.processing[n] + geom.offset)
        })
        .collect();
    let g = |xi: usize, outer: Option<usize>| {
        let target_node = topo.node_of(xi);
        max_or_zero(outer.into_iter().chain(inv.inner.iter().copied()).map(|q| {
            let n = topo.node_of(q);
            (d(start, n) + d(target_node, n)) / nu + geom.processing[n]
        }))
    };
    let target = g(request.a, inv.outer_a).max(g(request.b, inv.outer_b)) + geom.offset;
    Ok(DelayProfile { measured, target })
}

/// Exposures under the central protocol with the given coordinator node
/// (default: node `⌈N/2⌉` counted from 1).
pub fn delays_central(
    geom: &NetworkGeometry,
    topo: &EntanglementTopology,
    request: &Request,
    coordinator: Option<usize>,
) -> Result<DelayProfile> {
    geom.check()?;
    check_sizes(geom, topo)?;
    let inv = topo.involved(request)?;
    let c = coordinator.unwrap_or(geom.default_coordinator());
    if c >= geom.len() {
        return Err(Error::InvalidScenario(format!("coordinator {c} out of range")));
    }
    let nu = geom.speed;
    let d = |n: usize| geom.direct_distance(c, n);
    let measured = inv
        .measured()
        .map(|q| {
            let n = topo.node_of(q);
            (q, d(n) / nu + geom.processing[n] + geom.offset)
        })
        .collect();
    let f = |xi: usize, outer: Option<usize>| {
        d(topo.node_of(xi)) / nu
            + max_or_zero(outer.into_iter().chain(inv.inner.iter().copied()).map(|q| {
                let n = topo.node_of(q);
                2.0 * d(n) / nu + geom.processing[n]
            }))
    };
    let target = f(request.a, inv.outer_a).max(f(request.b, inv.outer_b)) + geom.offset;
    Ok(DelayProfile { measured, target })
}

/// Exposures under either protocol with its default parameters overridden
/// by `start` / `coordinator`.
pub fn delays(
    protocol: Protocol,
    geom: &NetworkGeometry,
    topo: &EntanglementTopology,
    request: &Request,
    start: Option<usize>,
    coordinator: Option<usize>,
) -> Result<DelayProfile> {
    match protocol {
        Protocol::Local => delays_local(geom, topo, request, start),
        Protocol::Central => delays_central(geom, topo, request, coordinator),
    }
}

fn check_sizes(geom: &NetworkGeometry, topo: &EntanglementTopology) -> Result<()> {
    if geom.len() != topo.len() {
        return Err(Error::InvalidScenario(format!(
            "{} nodes but {} qubits in the resource chain",
            geom.len(),
            topo.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const KM: f64 = 1e3;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15 + 1e-12 * b.abs()
    }

    #[test]
    fn distances() {
        let g = NetworkGeometry::line(4, 15.0 * KM).unwrap();
        assert_eq!(g.path_distance(0, 1, ChannelStructure::Chain), 15000.0);
        assert_eq!(g.path_distance(0, 2, ChannelStructure::Chain), 30000.0);
        assert_eq!(g.path_distance(2, 2, ChannelStructure::Chain), 0.0);
        let star = ChannelStructure::Star { coordinator: 1 };
        assert_eq!(g.path_distance(1, 3, star), 30000.0);
        assert_eq!(g.path_distance(0, 3, star), 15000.0 + 30000.0);
        let bent = NetworkGeometry::new(vec![[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]]).unwrap();
        assert_eq!(bent.chain_distance(0, 2), 7.0);
        assert_eq!(bent.direct_distance(0, 2), 5.0);
        assert_eq!(bent.link_length(1), 4.0);
    }

    #[test]
    fn default_coordinator_is_middle() {
        for (n, c) in [(3, 1), (5, 2), (6, 2), (7, 3), (100, 49)] {
            assert_eq!(NetworkGeometry::line(n, 1.0).unwrap().default_coordinator(), c);
        }
    }

    #[test]
    fn hops_and_involved() {
        let t = EntanglementTopology::basic(7);
        assert_eq!(t.hops(&Request::new(2, 3).unwrap()).unwrap(), 1);
        assert_eq!(t.hops(&Request::new(0, 6).unwrap()).unwrap(), 6);
        assert_eq!(t.hops(&Request::new(5, 1).unwrap()).unwrap(), 4);
        let inv = t.involved(&Request::new(5, 1).unwrap()).unwrap();
        assert_eq!(inv.inner, vec![2, 3, 4]);
        assert_eq!((inv.outer_a, inv.outer_b), (Some(6), Some(0)));
        let ends = t.involved(&Request::new(0, 6).unwrap()).unwrap();
        assert_eq!(ends.outer().count(), 0);
        assert!(t.hops(&Request::new(0, 7).unwrap()).is_err());
        assert!(Request::new(3, 3).is_err());
    }

    #[test]
    fn placement_must_be_a_permutation() {
        assert!(EntanglementTopology::from_placement(vec![0, 0, 1]).is_err());
        assert!(EntanglementTopology::from_placement(vec![0, 3, 1]).is_err());
        let t = EntanglementTopology::from_placement(vec![2, 0, 1]).unwrap();
        assert_eq!(t.qubit_at(2), 0);
        assert!(!t.is_basic());
        assert!(EntanglementTopology::from_placement(vec![0, 1, 2]).unwrap().is_basic());
    }

    #[test]
    fn three_node_local_values() {
        let g = NetworkGeometry::line(3, 15.0 * KM).unwrap();
        let t = EntanglementTopology::basic(3);
        let r = Request::new(0, 2).unwrap();
        let d = delays_local(&g, &t, &r, None).unwrap();
        assert!(close(d.measured[&1], 76e-6));
        assert!(close(d.target, 151e-6));
    }

    #[test]
    fn three_node_central_values() {
        let g = NetworkGeometry::line(3, 15.0 * KM).unwrap();
        let t = EntanglementTopology::basic(3);
        let r = Request::new(0, 2).unwrap();
        let d = delays_central(&g, &t, &r, None).unwrap();
        assert!(close(d.measured[&1], 1e-6));
        assert!(close(d.target, 76e-6));
    }

    #[test]
    fn zero_distances_and_processing() {
        let g = NetworkGeometry::line(5, 0.0).unwrap().with_processing(0.0).unwrap();
        let t = EntanglementTopology::basic(5);
        let r = Request::new(1, 3).unwrap();
        for p in Protocol::ALL {
            let d = delays(p, &g, &t, &r, None, None).unwrap();
            assert_eq!(d.target, 0.0);
            assert!(d.measured.values().all(|&x| x == 0.0));
            assert_eq!(d.measured.len(), 3);
        }
    }

    #[test]
    fn offset_is_added_everywhere() {
        let g = NetworkGeometry::line(4, 10.0 * KM).unwrap();
        let shifted = g.clone().with_offset(1e-3).unwrap();
        let t = EntanglementTopology::basic(4);
        let r = Request::new(1, 3).unwrap();
        for p in Protocol::ALL {
            let a = delays(p, &g, &t, &r, None, None).unwrap();
            let b = delays(p, &shifted, &t, &r, None, None).unwrap();
            assert!(close(b.target, a.target + 1e-3));
            for (q, x) in &a.measured {
                assert!(close(b.measured[q], x + 1e-3));
            }
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = NetworkGeometry::line(4, 1.0).unwrap();
        let t = EntanglementTopology::basic(5);
        assert!(delays_local(&g, &t, &Request::new(0, 3).unwrap(), None).is_err());
        assert!(delays_central(&g, &t, &Request::new(0, 3).unwrap(), Some(9)).is_err());
    }
}
