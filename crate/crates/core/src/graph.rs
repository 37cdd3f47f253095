//! Graph states: local complementation, Pauli-measurement graph rules and
//! the outcome-dependent correction operators that go with them.

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::pauli::{Basis, CliffordGate, Pauli, PauliString, Sign};

/// Largest graph on which exact stabilizer evaluation is allowed.
pub const EXACT_TARGET_LIMIT: usize = 10;

/// Undirected simple graph over a fixed label space.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphState {
    vertices: BitSet,
    adj: Vec<BitSet>,
}

/// Correction unitaries `U_{α,+}` and `U_{α,-}` for one Pauli measurement.
///
/// The gates within each list act on distinct qubits and commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionPair {
    pub u_plus: Vec<CliffordGate>,
    pub u_minus: Vec<CliffordGate>,
}

impl GraphState {
    /// Graph with no vertices over `label_space` labels.
    pub fn empty(label_space: usize) -> Self {
        GraphState {
            vertices: BitSet::new(label_space),
            adj: vec![BitSet::new(label_space); label_space],
        }
    }

    /// Graph whose vertices are all labels in `0..n`, without edges.
    pub fn isolated(n: usize) -> Self {
        let mut g = GraphState::empty(n);
        for v in 0..n {
            g.vertices.insert(v);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = GraphState::isolated(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Path graph visiting `labels` in order, over label space `label_space`.
    pub fn path(label_space: usize, labels: &[usize]) -> Result<Self> {
        let mut g = GraphState::empty(label_space);
        for &v in labels {
            if v >= label_space {
                return Err(Error::UnknownVertex(v));
            }
            g.vertices.insert(v);
        }
        for pair in labels.windows(2) {
            g.add_edge(pair[0], pair[1])?;
        }
        Ok(g)
    }

    /// Chain `0 – 1 – … – n-1`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<usize> = (0..n).collect();
        GraphState::path(n, &labels).expect("labels are in range")
    }

    pub fn label_space(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_set(&self) -> &BitSet {
        &self.vertices
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(v)
    }

    fn require(&self, v: usize) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || !self.contains(u) || !self.contains(v) {
            return Err(Error::InvalidEdge(u, v));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.vertices
            .iter()
            .flat_map(|u| self.adj[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// Lowest-labeled neighbor, the default special neighbor of an x measurement.
    pub fn default_special_neighbor(&self, v: usize) -> Option<usize> {
        self.adj.get(v).and_then(BitSet::first)
    }

    /// Graph with the subgraph induced by `N_v` complemented.
    pub fn local_complement(&self, v: usize) -> Result<GraphState> {
        self.require(v)?;
        let mut g = self.clone();
        g.local_complement_mut(v);
        Ok(g)
    }

    pub(crate) fn local_complement_mut(&mut self, v: usize) {
        let nv = self.adj[v].clone();
        for u in nv.iter() {
            self.adj[u].xor_with(&nv);
            // u ∈ N_v, so the xor set the self-loop bit
            self.adj[u].toggle(u);
        }
    }

    pub(crate) fn remove_vertex_mut(&mut self, v: usize) {
        let empty = BitSet::new(self.label_space());
        let nv = std::mem::replace(&mut self.adj[v], empty);
        for u in nv.iter() {
            self.adj[u].remove(v);
        }
        self.vertices.remove(v);
    }

    /// Resolves the special neighbor of a measurement: only x measurements
    /// of non-isolated vertices carry one, defaulting to the lowest label.
    pub fn resolve_special_neighbor(&self, v: usize, basis: Basis, w0: Option<usize>) -> Result<Option<usize>> {
        self.require(v)?;
        if basis != Basis::X {
            return Ok(None);
        }
        let nv = &self.adj[v];
        match w0 {
            None => Ok(nv.first()),
            Some(w) if nv.contains(w) => Ok(Some(w)),
            Some(_) => Err(Error::InvalidSpecialNeighbor { vertex: v, w0 }),
        }
    }

    /// Graph after measuring `v` in `basis`; the measured vertex is removed.
    pub fn measure_update(&self, v: usize, basis: Basis, w0: Option<usize>) -> Result<GraphState> {
        let w0 = self.resolve_special_neighbor(v, basis, w0)?;
        let mut g = self.clone();
        g.measure_update_mut(v, basis, w0);
        Ok(g)
    }

    /// In-place measurement rule; `w0` must already be resolved.
    pub(crate) fn measure_update_mut(&mut self, v: usize, basis: Basis, w0: Option<usize>) {
        match (basis, w0) {
            (Basis::Z, _) | (Basis::X, None) => {}
            (Basis::Y, _) => self.local_complement_mut(v),
            (Basis::X, Some(w)) => {
                self.local_complement_mut(w);
                self.local_complement_mut(v);
                self.remove_vertex_mut(v);
                self.local_complement_mut(w);
                return;
            }
        }
        self.remove_vertex_mut(v);
    }

    /// `U_{α,±}` for measuring `v` in `basis`, evaluated on this graph.
    pub fn correction_operators(&self, v: usize, basis: Basis, w0: Option<usize>) -> Result<CorrectionPair> {
        let w0 = self.resolve_special_neighbor(v, basis, w0)?;
        Ok(self.correction_operators_resolved(v, basis, w0))
    }

    pub(crate) fn correction_operators_resolved(&self, v: usize, basis: Basis, w0: Option<usize>) -> CorrectionPair {
        let n = self.label_space();
        let nv = &self.adj[v];
        let z_gate = |set: &BitSet| -> Vec<CliffordGate> {
            if set.is_empty() {
                Vec::new()
            } else {
                vec![CliffordGate::Pauli(PauliString::z_on(n, set.iter()))]
            }
        };
        match (basis, w0) {
            (Basis::Z, _) => CorrectionPair {
                u_plus: Vec::new(),
                u_minus: z_gate(nv),
            },
            (Basis::Y, _) => CorrectionPair {
                u_plus: nv.iter().map(|w| CliffordGate::SqrtZ(w, Sign::Minus)).collect(),
                u_minus: nv.iter().map(|w| CliffordGate::SqrtZ(w, Sign::Plus)).collect(),
            },
            (Basis::X, None) => CorrectionPair {
                u_plus: Vec::new(),
                u_minus: Vec::new(),
            },
            (Basis::X, Some(w)) => {
                let nw = &self.adj[w];
                // N_v − N_w0 − {w0}
                let mut plus_set = nv.clone();
                plus_set.difference_with(nw);
                plus_set.remove(w);
                // N_w0 − N_v − {v}
                let mut minus_set = nw.clone();
                minus_set.difference_with(nv);
                minus_set.remove(v);
                let mut u_plus = vec![CliffordGate::SqrtY(w, Sign::Plus)];
                u_plus.extend(z_gate(&plus_set));
                let mut u_minus = vec![CliffordGate::SqrtY(w, Sign::Minus)];
                u_minus.extend(z_gate(&minus_set));
                CorrectionPair { u_plus, u_minus }
            }
        }
    }

    /// The Pauli operator `U_{α,-}·U_{α,+}†` by which the two outcome
    /// branches of a measurement differ, in Hermitian form.
    pub fn byproduct_operator(&self, v: usize, basis: Basis, w0: Option<usize>) -> Result<PauliString> {
        let w0 = self.resolve_special_neighbor(v, basis, w0)?;
        Ok(self.byproduct_resolved(v, basis, w0))
    }

    pub(crate) fn byproduct_resolved(&self, v: usize, basis: Basis, w0: Option<usize>) -> PauliString {
        let n = self.label_space();
        match (basis, w0) {
            (Basis::Z, _) | (Basis::Y, _) => PauliString::z_on(n, self.adj[v].iter()),
            (Basis::X, None) => PauliString::identity(n),
            (Basis::X, Some(w)) => {
                let mut sym = self.adj[v].clone();
                sym.xor_with(&self.adj[w]);
                sym.remove(v);
                sym.remove(w);
                let mut p = PauliString::z_on(n, sym.iter());
                p.set_component(w, Pauli::Y);
                p
            }
        }
    }

    /// Stabilizer generator `K_v = X_v ∏_{w ∈ N_v} Z_w`.
    pub fn generator(&self, v: usize) -> PauliString {
        let mut k = PauliString::z_on(self.label_space(), self.adj[v].iter());
        k.set_component(v, Pauli::X);
        k
    }

    /// True iff `p` equals `±1` times an element of the stabilizer group.
    pub fn stabilizer_contains(&self, p: &PauliString) -> Result<bool> {
        if self.vertex_count() > EXACT_TARGET_LIMIT {
            return Err(Error::GraphTooLarge {
                vertices: self.vertex_count(),
                limit: EXACT_TARGET_LIMIT,
            });
        }
        if p.label_space() != self.label_space() {
            return Err(Error::LabelSpaceMismatch {
                left: p.label_space(),
                right: self.label_space(),
            });
        }
        if !p.support().is_subset(&self.vertices) {
            return Ok(false);
        }
        // The x-part fixes the generator subset uniquely.
        let mut product = PauliString::identity(self.label_space());
        for v in p.x_bits().iter() {
            product.mul_assign_right(&self.generator(v));
        }
        if !product.eq_projective(p) {
            return Ok(false);
        }
        let rel = p.multiply(&product.adjoint())?;
        Ok(rel.phase().is_real())
    }

    /// Subgraph induced on `keep`, same label space.
    pub fn induced(&self, keep: &BitSet) -> GraphState {
        let mut g = GraphState::empty(self.label_space());
        for v in self.vertices.iter().filter(|&v| keep.contains(v)) {
            g.vertices.insert(v);
        }
        for v in g.vertices.iter() {
            let mut row = self.adj[v].clone();
            row.and_with(keep);
            g.adj[v] = row;
        }
        g
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertex_count: self.label_space(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// Every label in `0..vertex_count` becomes a vertex.
    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        GraphState::from_edges(json.vertex_count, &edges)
    }
}

impl std::fmt::Debug for GraphState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GraphState")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Adjacency-list JSON form: `{"vertex_count": n, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertex_count: usize,
    pub edges: Vec<[usize; 2]>,
}
