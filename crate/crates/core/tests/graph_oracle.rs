//! State-vector checks of the graph measurement rules and correction operators.

use ebqn::dense::{eigenvector, gates_matrix, pauli_string_matrix, StateVector};
use ebqn::graph::GraphState;
use ebqn::pauli::{conjugate_by_product, Basis, CliffordGate, Pauli, PauliString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> GraphState {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    GraphState::from_edges(n, &edges).unwrap()
}

/// `U† ⟨α,±|_v |G⟩ ∝ |G'⟩` for every vertex, basis, outcome and special neighbor.
#[test]
fn corrected_branches_are_the_updated_graph_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for trial in 0..60 {
        let n = 2 + trial % 6;
        let g = random_graph(&mut rng, n, 0.5);
        let psi = StateVector::graph_state(&g);
        for v in 0..n {
            for basis in Basis::ALL {
                let specials: Vec<Option<usize>> = if basis == Basis::X && g.degree(v) > 0 {
                    g.neighbors(v).iter().map(Some).collect()
                } else {
                    vec![None]
                };
                for w0 in specials {
                    let after = g.measure_update(v, basis, w0).unwrap();
                    let target = StateVector::graph_state(&after);
                    let pair = g.correction_operators(v, basis, w0).unwrap();
                    for (plus, u) in [(true, &pair.u_plus), (false, &pair.u_minus)] {
                        let mut branch = psi.project_out(v, eigenvector(basis, plus));
                        let p = branch.norm_sqr();
                        if p < 1e-12 {
                            // isolated vertex measured in x: deterministic outcome
                            assert!(g.degree(v) == 0 && basis == Basis::X);
                            continue;
                        }
                        branch.apply_adjoint_of(u);
                        let overlap = target.overlap_sqr(&branch) / p;
                        assert!(
                            (overlap - 1.0).abs() < 1e-12,
                            "graph {:?}, v={v}, basis={basis}, w0={w0:?}, plus={plus}: overlap {overlap}",
                            g.edges()
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 500);
}

/// The byproduct is a Pauli: conjugating by `U_-·U_+†` acts like the byproduct on every generator.
#[test]
fn byproduct_matches_composed_corrections() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..80 {
        let n = 2 + trial % 7;
        let g = random_graph(&mut rng, n, 0.45);
        for v in 0..n {
            for basis in Basis::ALL {
                let w0 = g.default_special_neighbor(v).filter(|_| basis == Basis::X);
                let pair = g.correction_operators(v, basis, w0).unwrap();
                let b = g.byproduct_operator(v, basis, w0).unwrap();
                assert!(!b.support().contains(v));
                // C = U_- U_+†, as a gate list applied right-to-left under conjugation
                let mut composed: Vec<CliffordGate> = pair.u_minus.clone();
                composed.extend(pair.u_plus.iter().map(CliffordGate::inverse));
                for q in 0..n {
                    for letter in [Pauli::X, Pauli::Z] {
                        let p = PauliString::single(n, q, letter);
                        let image = conjugate_by_product(&p, &composed);
                        let expected = if b.commutes(&p).unwrap() {
                            p.clone()
                        } else {
                            p.clone().with_phase(ebqn::pauli::Phase::MINUS_ONE)
                        };
                        assert_eq!(image, expected, "v={v} basis={basis} q={q}");
                    }
                }
            }
        }
    }
}

/// Dense check of the byproduct with phases: `U_- U_+†` equals the byproduct up to a global phase.
#[test]
fn byproduct_dense_examples() {
    // chain 1-2-3-4 in label space 5, x on 2 with w0 = 1 gives Y1 Z3
    let labels = [1, 2, 3, 4];
    let g = GraphState::path(5, &labels).unwrap();
    let pair = g.correction_operators(2, Basis::X, Some(1)).unwrap();
    let um = gates_matrix(&pair.u_minus, &labels);
    let up = gates_matrix(&pair.u_plus, &labels);
    let c = um.mul(&up.adjoint());
    let b = pauli_string_matrix(&PauliString::from_letters(5, [(1, Pauli::Y), (3, Pauli::Z)]), &labels);
    let ratio = c.data.iter().zip(&b.data).find(|(_, y)| y.norm() > 0.5).map(|(x, y)| x / y).unwrap();
    assert!((ratio.norm() - 1.0).abs() < 1e-12);
    let scaled: Vec<_> = b.data.iter().map(|y| y * ratio).collect();
    let diff = c.data.iter().zip(&scaled).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-12);

    // y on the middle of a 3-chain: √(iZ)√(iZ) = iZ per qubit
    let labels3 = [1, 2, 3];
    let g3 = GraphState::path(4, &labels3).unwrap();
    let pair = g3.correction_operators(2, Basis::Y, None).unwrap();
    let c = gates_matrix(&pair.u_minus, &labels3).mul(&gates_matrix(&pair.u_plus, &labels3).adjoint());
    let zz = pauli_string_matrix(&PauliString::z_on(4, [1, 3]), &labels3);
    let scaled: Vec<_> = zz.data.iter().map(|y| y * num_complex::Complex64::new(-1.0, 0.0)).collect();
    let diff = c.data.iter().zip(&scaled).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-12, "(iZ)⊗(iZ) = -Z⊗Z");
}

/// Different special neighbors give graphs that are related by a local
/// Clifford and lie in the same local-complementation orbit.
#[test]
fn special_neighbor_choices_are_lc_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for trial in 0..40 {
        let n = 3 + trial % 4;
        let g = random_graph(&mut rng, n, 0.6);
        for v in 0..n {
            let nbrs: Vec<usize> = g.neighbors(v).iter().collect();
            for &w in &nbrs {
                for &w2 in &nbrs {
                    if w == w2 {
                        continue;
                    }
                    let a = g.measure_update(v, Basis::X, Some(w)).unwrap();
                    let b = g.measure_update(v, Basis::X, Some(w2)).unwrap();
                    // Both corrected states come from the same projected state, so
                    // they differ by a local Clifford: check state-level equivalence
                    // through the correction operators themselves.
                    let psi = StateVector::graph_state(&g);
                    let mut branch = psi.project_out(v, eigenvector(Basis::X, true));
                    let pa = g.correction_operators(v, Basis::X, Some(w)).unwrap();
                    let pb = g.correction_operators(v, Basis::X, Some(w2)).unwrap();
                    branch.apply_adjoint_of(&pa.u_plus);
                    let sa = StateVector::graph_state(&a);
                    assert!((sa.overlap_sqr(&branch) * 2.0 - 1.0).abs() < 1e-12);
                    let mut to_b = branch.clone();
                    for gate in &pa.u_plus {
                        to_b.apply_gate(gate);
                    }
                    to_b.apply_adjoint_of(&pb.u_plus);
                    let sb = StateVector::graph_state(&b);
                    assert!((sb.overlap_sqr(&to_b) * 2.0 - 1.0).abs() < 1e-12);
                    // and the two graphs are local-complementation equivalent
                    assert!(lc_orbit_contains(&a, &b, 4));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 20);
}

/// Breadth-first search over local complementations up to `depth` steps.
fn lc_orbit_contains(start: &GraphState, goal: &GraphState, depth: usize) -> bool {
    let mut frontier = vec![start.clone()];
    let mut seen = vec![start.clone()];
    for _ in 0..=depth {
        if frontier.iter().any(|g| g == goal) {
            return true;
        }
        let mut next = Vec::new();
        for g in &frontier {
            for v in g.vertices() {
                let h = g.local_complement(v).unwrap();
                if !seen.contains(&h) {
                    seen.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    false
}
