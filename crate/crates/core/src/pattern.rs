//! Strategies (ordered measurement sequences with corrections after every
//! step) and measurement patterns (unordered Pauli measurements followed by a
//! single correction round), with the translation between the two.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphState;
use crate::pauli::Basis;

/// Longest chain searched exhaustively unless overridden.
pub const DEFAULT_SEARCH_CAP: usize = 12;

/// Fidelities closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Dead-band around zero for the regime classification.
pub const REGIME_DEAD_BAND: f64 = 1e-9;

/// One measurement of a strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub vertex: usize,
    pub basis: Basis,
    /// Special neighbor, only for x measurements of non-isolated vertices.
    pub special: Option<usize>,
}

impl Step {
    pub fn new(vertex: usize, basis: Basis) -> Self {
        Step {
            vertex,
            basis,
            special: None,
        }
    }
}

/// Ordered sequence of measurements, each followed by its correction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub steps: Vec<Step>,
}

impl Strategy {
    pub fn new(steps: Vec<Step>) -> Self {
        Strategy { steps }
    }

    /// Builds a strategy from `(vertex, basis)` pairs, filling in the
    /// default special neighbor of each x step.
    pub fn with_default_specials(g0: &GraphState, steps: &[(usize, Basis)]) -> Result<Self> {
        let mut g = g0.clone();
        let mut out = Vec::with_capacity(steps.len());
        for &(v, basis) in steps {
            if !g.contains(v) {
                return Err(Error::InvalidStrategy(format!("vertex {v} is not in the graph at its step")));
            }
            let special = g.resolve_special_neighbor(v, basis, None)?;
            g.measure_update_mut(v, basis, special);
            out.push(Step { vertex: v, basis, special });
        }
        Ok(Strategy { steps: out })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Graphs `G_0, …, G_n`, where `G_j` is the graph before step `j` and
    /// `G_n` the final one. Fails on an invalid strategy.
    pub fn graph_sequence(&self, g0: &GraphState) -> Result<Vec<GraphState>> {
        let mut seq = Vec::with_capacity(self.steps.len() + 1);
        let mut g = g0.clone();
        for step in &self.steps {
            check_step(&g, step)?;
            let next = {
                let mut h = g.clone();
                h.measure_update_mut(step.vertex, step.basis, step.special);
                h
            };
            seq.push(std::mem::replace(&mut g, next));
        }
        seq.push(g);
        Ok(seq)
    }

    /// Graph left after the whole strategy.
    pub fn final_graph(&self, g0: &GraphState) -> Result<GraphState> {
        let mut g = g0.clone();
        for step in &self.steps {
            check_step(&g, step)?;
            g.measure_update_mut(step.vertex, step.basis, step.special);
        }
        Ok(g)
    }
}

fn check_step(g: &GraphState, step: &Step) -> Result<()> {
    let v = step.vertex;
    if !g.contains(v) {
        return Err(Error::InvalidStrategy(format!(
            "vertex {v} is measured twice or not in the graph"
        )));
    }
    let needs_special = step.basis == Basis::X && g.degree(v) > 0;
    match step.special {
        None if needs_special => Err(Error::InvalidStrategy(format!(
            "x measurement of {v} needs a special neighbor"
        ))),
        Some(w) if !needs_special => Err(Error::InvalidStrategy(format!(
            "special neighbor {w} given for a step on {v} that takes none"
        ))),
        Some(w) if !g.neighbors(v).contains(w) => Err(Error::InvalidSpecialNeighbor { vertex: v, w0: Some(w) }),
        _ => Ok(()),
    }
}

/// Unordered assignment of measurement bases to vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MeasurementPattern {
    pub bases: BTreeMap<usize, Basis>,
}

impl MeasurementPattern {
    pub fn new(bases: BTreeMap<usize, Basis>) -> Self {
        MeasurementPattern { bases }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Basis)>) -> Self {
        MeasurementPattern {
            bases: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, v: usize) -> Option<Basis> {
        self.bases.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Reads a pattern string such as `"xyyx"`, character `i` for `inner[i]`.
    pub fn from_chain_string(s: &str, inner: &[usize]) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != inner.len() {
            return Err(Error::InvalidPattern(format!(
                "{s:?} has {} symbols for {} inner qubits",
                chars.len(),
                inner.len()
            )));
        }
        let mut bases = BTreeMap::new();
        for (&v, &c) in inner.iter().zip(&chars) {
            let b = Basis::from_symbol(c.to_ascii_lowercase())
                .ok_or_else(|| Error::InvalidPattern(format!("unknown basis symbol {c:?} in {s:?}")))?;
            bases.insert(v, b);
        }
        Ok(MeasurementPattern { bases })
    }

    /// Pattern string over `inner`, in the given order.
    pub fn to_chain_string(&self, inner: &[usize]) -> Result<String> {
        inner
            .iter()
            .map(|v| {
                self.get(*v)
                    .map(Basis::symbol)
                    .ok_or_else(|| Error::InvalidPattern(format!("no basis for vertex {v}")))
            })
            .collect()
    }

    /// Pattern string in ascending vertex order.
    pub fn symbols(&self) -> String {
        self.bases.values().map(|b| b.symbol()).collect()
    }
}

impl fmt::Display for MeasurementPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bases.iter().map(|(v, b)| format!("{v}:{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn swap(b: Basis, pair: (Basis, Basis)) -> Basis {
    if b == pair.0 {
        pair.1
    } else if b == pair.1 {
        pair.0
    } else {
        b
    }
}

/// Basis exchange a step imposes on measurements that come after it, and
/// the vertices it applies to.
fn later_swaps(g: &GraphState, step: &Step) -> (Vec<usize>, (Basis, Basis)) {
    match step.basis {
        Basis::Z => (Vec::new(), (Basis::X, Basis::X)),
        Basis::Y => (g.neighbors(step.vertex).iter().collect(), (Basis::X, Basis::Y)),
        Basis::X => (step.special.into_iter().collect(), (Basis::X, Basis::Z)),
    }
}

/// Measurement pattern equivalent to a strategy: the bases one would measure
/// on the uncorrected state and correct for once at the end. Signs of the
/// measurement outcomes are not tracked.
pub fn strategy_to_pattern(strategy: &Strategy, g0: &GraphState) -> Result<MeasurementPattern> {
    let graphs = strategy.graph_sequence(g0)?;
    let mut mu: BTreeMap<usize, Basis> = strategy.steps.iter().map(|s| (s.vertex, s.basis)).collect();
    let position: BTreeMap<usize, usize> = strategy.steps.iter().enumerate().map(|(j, s)| (s.vertex, j)).collect();
    for (j, step) in strategy.steps.iter().enumerate().rev() {
        let (targets, pair) = later_swaps(&graphs[j], step);
        for i in targets {
            if let Some(&k) = position.get(&i) {
                assert!(k > j, "vertex {i} measured at step {k} is still present at step {j}");
                let b = mu[&i];
                mu.insert(i, swap(b, pair));
            }
        }
    }
    Ok(MeasurementPattern { bases: mu })
}

/// Strategy measuring the pattern's vertices in `order` (ascending labels by
/// default) with default special neighbors, whose pattern is `pattern`.
pub fn pattern_to_strategy(
    pattern: &MeasurementPattern,
    g0: &GraphState,
    order: Option<&[usize]>,
) -> Result<Strategy> {
    let default_order: Vec<usize>;
    let order = match order {
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != o.len() || !sorted.iter().copied().eq(pattern.bases.keys().copied()) {
                return Err(Error::InvalidPattern(
                    "measurement order is not a permutation of the pattern's vertices".into(),
                ));
            }
            o
        }
        None => {
            default_order = pattern.bases.keys().copied().collect();
            &default_order
        }
    };
    let mut cur = pattern.bases.clone();
    let mut g = g0.clone();
    let mut steps = Vec::with_capacity(order.len());
    for &v in order {
        if !g.contains(v) {
            return Err(Error::InvalidPattern(format!("vertex {v} is not in the graph")));
        }
        let basis = cur[&v];
        let special = g.resolve_special_neighbor(v, basis, None)?;
        let step = Step { vertex: v, basis, special };
        let (targets, pair) = later_swaps(&g, &step);
        for i in targets {
            if let Some(b) = cur.get_mut(&i) {
                *b = swap(*b, pair);
            }
        }
        g.measure_update_mut(v, basis, special);
        steps.push(step);
    }
    let strategy = Strategy { steps };
    debug_assert_eq!(&strategy_to_pattern(&strategy, g0)?, pattern);
    Ok(strategy)
}

/// Inner vertices of a chain `0 - 1 - … - (n-1)` with targets at the ends.
pub fn chain_inner(n: usize) -> Result<Vec<usize>> {
    if n < 3 {
        return Err(Error::ChainTooShort(n));
    }
    Ok((1..n - 1).collect())
}

/// All x/y assignments to the inner vertices of an `n`-chain, in
/// lexicographic order of their pattern strings (x before y).
pub fn enumerate_patterns(n: usize) -> Result<Vec<MeasurementPattern>> {
    let inner = chain_inner(n)?;
    enumerate_over(&inner)
}

/// All x/y assignments to `inner`, lexicographic in the given vertex order.
pub fn enumerate_over(inner: &[usize]) -> Result<Vec<MeasurementPattern>> {
    let k = inner.len();
    if k >= usize::BITS as usize - 1 {
        return Err(Error::SearchTooLarge(k, usize::BITS as usize - 2));
    }
    Ok((0..1usize << k)
        .map(|m| MeasurementPattern {
            bases: inner
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, if (m >> (k - 1 - i)) & 1 == 1 { Basis::Y } else { Basis::X }))
                .collect(),
        })
        .collect())
}

/// Maximizers of an exhaustive search.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    /// All patterns within [`TIE_TOLERANCE`] of the best, in enumeration order.
    pub maximizers: Vec<MeasurementPattern>,
    pub fidelity: f64,
}

impl Optimum {
    /// Lexicographically smallest maximizer.
    pub fn representative(&self) -> &MeasurementPattern {
        &self.maximizers[0]
    }

    pub fn contains(&self, p: &MeasurementPattern) -> bool {
        self.maximizers.contains(p)
    }
}

/// Evaluates `fidelity` on every pattern (in parallel) and collects the
/// maximizers. `patterns` must be in enumeration order.
pub fn exhaustive_search<F>(patterns: &[MeasurementPattern], fidelity: F) -> Result<Optimum>
where
    F: Fn(&MeasurementPattern) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let values: Vec<f64> = patterns.par_iter().map(&fidelity).collect::<Result<_>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximizers = patterns
        .iter()
        .zip(&values)
        .filter(|(_, f)| best - **f <= TIE_TOLERANCE)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(Optimum {
        maximizers,
        fidelity: best,
    })
}

/// Which noise kind the better of two candidate patterns is suited to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Depolarizing,
    Dephasing,
    Transitional,
    Unentangled,
}

impl Regime {
    /// Classifies from the fidelities of the depolarizing-regime and
    /// dephasing-regime candidate patterns and the best fidelity over all
    /// patterns.
    pub fn classify(f_depol: f64, f_deph: f64, best: f64) -> Regime {
        if best < 0.5 {
            Regime::Unentangled
        } else if f_depol - f_deph > REGIME_DEAD_BAND {
            Regime::Depolarizing
        } else if f_deph - f_depol > REGIME_DEAD_BAND {
            Regime::Dephasing
        } else {
            Regime::Transitional
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Depolarizing => "depolarizing",
            Regime::Dephasing => "dephasing",
            Regime::Transitional => "transitional",
            Regime::Unentangled => "unentangled",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
