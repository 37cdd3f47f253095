use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{GraphState, EXACT_TARGET_LIMIT};
use crate::pauli::PauliString;

use super::channel::PauliChannel;

/// Fidelity of the noisy target: all channels are convolved into a weight
/// map over the projective Pauli group on the target vertices, and the
/// weight of the stabilizer elements is summed.
pub fn assemble_fidelity(channels: &[PauliChannel], target: &GraphState) -> Result<f64> {
    let m = target.vertex_count();
    if m > EXACT_TARGET_LIMIT {
        return Err(Error::GraphTooLarge {
            vertices: m,
            limit: EXACT_TARGET_LIMIT,
        });
    }
    let labels: Vec<usize> = target.vertices().collect();
    let n = target.label_space();
    let mut weights = vec![0.0f64; 1 << (2 * m)];
    weights[0] = 1.0;
    let mut next = vec![0.0f64; weights.len()];
    for ch in channels {
        if ch.label_space() != n {
            return Err(Error::LabelSpaceMismatch {
                left: ch.label_space(),
                right: n,
            });
        }
        let terms = ch
            .terms()
            .iter()
            .map(|(w, p)| Ok((*w, index_of(p, target.vertex_set(), &labels)?)))
            .collect::<Result<Vec<_>>>()?;
        if terms.iter().all(|&(_, k)| k == 0) {
            continue;
        }
        next.iter_mut().for_each(|x| *x = 0.0);
        for (e, &we) in weights.iter().enumerate() {
            if we == 0.0 {
                continue;
            }
            for &(w, k) in &terms {
                next[e ^ k] += we * w;
            }
        }
        std::mem::swap(&mut weights, &mut next);
    }
    let mut f = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        if w != 0.0 && target.stabilizer_contains(&from_index(k, &labels, n))? {
            f += w;
        }
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Two bits per target vertex, `x` then `z`, in ascending label order.
fn index_of(p: &PauliString, vertices: &BitSet, labels: &[usize]) -> Result<usize> {
    if !p.support().is_subset(vertices) {
        return Err(Error::SupportLeak);
    }
    let mut k = 0;
    for (j, &v) in labels.iter().enumerate() {
        if p.x_bits().contains(v) {
            k |= 1 << (2 * j);
        }
        if p.z_bits().contains(v) {
            k |= 1 << (2 * j + 1);
        }
    }
    Ok(k)
}

fn from_index(k: usize, labels: &[usize], n: usize) -> PauliString {
    let mut x = BitSet::new(n);
    let mut z = BitSet::new(n);
    for (j, &v) in labels.iter().enumerate() {
        x.set(v, (k >> (2 * j)) & 1 == 1);
        z.set(v, (k >> (2 * j + 1)) & 1 == 1);
    }
    PauliString::from_bits(x, z)
}
