//! Dense state-vector and density-matrix arithmetic for small registers.
//!
//! Used only as an independent reference for the stabilizer-level code.
//! Qubit `j` of a register is bit `j` of the basis index; registers carry
//! the vertex label stored at each position.

use num_complex::Complex64 as C64;

use crate::graph::GraphState;
use crate::pauli::{Basis, CliffordGate, Pauli, PauliString, Sign};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Largest register the dense routines accept.
pub const DENSE_LIMIT: usize = 12;

pub type Mat2 = [[C64; 2]; 2];

pub fn pauli_mat(p: Pauli) -> Mat2 {
    match p {
        Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// `√(±iσ) = (1 ± iσ)/√2`.
pub fn sqrt_mat(axis: Pauli, sign: Sign) -> Mat2 {
    let s = if sign == Sign::Plus { 1.0 } else { -1.0 };
    let sigma = pauli_mat(axis);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = [[ZERO; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let id = if a == b { ONE } else { ZERO };
            m[a][b] = (id + I * s * sigma[a][b]) * r;
        }
    }
    m
}

pub fn adjoint2(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Eigenvector of `basis` with eigenvalue `+1` (`plus`) or `-1`.
pub fn eigenvector(basis: Basis, plus: bool) -> [C64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let s = if plus { 1.0 } else { -1.0 };
    match basis {
        Basis::X => [C64::new(r, 0.0), C64::new(s * r, 0.0)],
        Basis::Y => [C64::new(r, 0.0), C64::new(0.0, s * r)],
        Basis::Z => {
            if plus {
                [ONE, ZERO]
            } else {
                [ZERO, ONE]
            }
        }
    }
}

/// Dense square matrix over a labeled register.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Matrix { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Matrix { dim: n, data }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Embeds a single-qubit matrix at register position `q`.
    pub fn single(register: usize, q: usize, m: &Mat2) -> Matrix {
        let dim = 1 << register;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                if (i ^ j) & !(1 << q) != 0 {
                    continue;
                }
                data[i * dim + j] = m[(i >> q) & 1][(j >> q) & 1];
            }
        }
        Matrix { dim, data }
    }
}

fn position(labels: &[usize], v: usize) -> usize {
    labels
        .iter()
        .position(|&l| l == v)
        .unwrap_or_else(|| panic!("vertex {v} not in register {labels:?}"))
}

/// Full matrix of a Pauli string (phase included) on the labeled register.
pub fn pauli_string_matrix(p: &PauliString, labels: &[usize]) -> Matrix {
    let mut m = Matrix::identity(1 << labels.len());
    for v in p.support().iter() {
        let q = position(labels, v);
        m = m.mul(&Matrix::single(labels.len(), q, &pauli_mat(p.component(v))));
    }
    let c = match p.phase().power() {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    };
    m.data.iter_mut().for_each(|x| *x *= c);
    m
}

/// Full matrix of a Clifford gate on the labeled register.
pub fn gate_matrix(g: &CliffordGate, labels: &[usize]) -> Matrix {
    let n = labels.len();
    match g {
        CliffordGate::CZ(a, b) => {
            let (qa, qb) = (position(labels, *a), position(labels, *b));
            let mut m = Matrix::identity(1 << n);
            for i in 0..(1 << n) {
                if (i >> qa) & 1 == 1 && (i >> qb) & 1 == 1 {
                    m.data[i * (1 << n) + i] = -ONE;
                }
            }
            m
        }
        CliffordGate::SqrtX(q, s) => Matrix::single(n, position(labels, *q), &sqrt_mat(Pauli::X, *s)),
        CliffordGate::SqrtY(q, s) => Matrix::single(n, position(labels, *q), &sqrt_mat(Pauli::Y, *s)),
        CliffordGate::SqrtZ(q, s) => Matrix::single(n, position(labels, *q), &sqrt_mat(Pauli::Z, *s)),
        CliffordGate::Pauli(p) => pauli_string_matrix(p, labels),
    }
}

/// Product `g_1 g_2 ⋯ g_n` of a gate list as a matrix.
pub fn gates_matrix(gates: &[CliffordGate], labels: &[usize]) -> Matrix {
    gates
        .iter()
        .fold(Matrix::identity(1 << labels.len()), |acc, g| acc.mul(&gate_matrix(g, labels)))
}

/// Pure state on a labeled register.
#[derive(Clone, Debug)]
pub struct StateVector {
    pub labels: Vec<usize>,
    pub amps: Vec<C64>,
}

impl StateVector {
    /// `∏ CZ |+⟩^{⊗V}` with the register ordered by ascending label.
    pub fn graph_state(g: &GraphState) -> Self {
        let labels: Vec<usize> = g.vertices().collect();
        assert!(labels.len() <= DENSE_LIMIT);
        let dim = 1usize << labels.len();
        let amp = C64::new((dim as f64).sqrt().recip(), 0.0);
        let mut amps = vec![amp; dim];
        let edges: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| (position(&labels, u), position(&labels, v)))
            .collect();
        for (i, a) in amps.iter_mut().enumerate() {
            let parity = edges.iter().filter(|&&(u, v)| (i >> u) & 1 == 1 && (i >> v) & 1 == 1).count();
            if parity % 2 == 1 {
                *a = -*a;
            }
        }
        StateVector { labels, amps }
    }

    pub fn apply_single(&mut self, v: usize, m: &Mat2) {
        let q = position(&self.labels, v);
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &CliffordGate) {
        match g {
            CliffordGate::SqrtX(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::X, *s)),
            CliffordGate::SqrtY(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::Y, *s)),
            CliffordGate::SqrtZ(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::Z, *s)),
            _ => {
                let m = gate_matrix(g, &self.labels);
                self.amps = (0..m.dim)
                    .map(|i| (0..m.dim).map(|j| m.get(i, j) * self.amps[j]).sum())
                    .collect();
            }
        }
    }

    /// Applies `(g_1⋯g_n)†`.
    pub fn apply_adjoint_of(&mut self, gates: &[CliffordGate]) {
        for g in gates.iter() {
            self.apply_gate(&g.inverse());
        }
    }

    /// Contracts qubit `v` with `⟨e|` and drops it. The result is not normalized.
    pub fn project_out(&self, v: usize, e: [C64; 2]) -> StateVector {
        let q = position(&self.labels, v);
        let mut labels = self.labels.clone();
        labels.remove(q);
        let low = (1usize << q) - 1;
        let amps = (0..self.amps.len() / 2)
            .map(|r| {
                let i0 = (r & low) | ((r & !low) << 1);
                let i1 = i0 | (1 << q);
                e[0].conj() * self.amps[i0] + e[1].conj() * self.amps[i1]
            })
            .collect();
        StateVector { labels, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²` for states over the same register.
    pub fn overlap_sqr(&self, other: &StateVector) -> f64 {
        assert_eq!(self.labels, other.labels);
        let ip: C64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        ip.norm_sqr()
    }
}

/// Density matrix on a labeled register, row-major.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub labels: Vec<usize>,
    pub data: Vec<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let dim = psi.amps.len();
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = psi.amps[i] * psi.amps[j].conj();
            }
        }
        DensityMatrix {
            labels: psi.labels.clone(),
            data,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).sum()
    }

    fn masks(&self, p: &PauliString) -> (usize, usize) {
        let mut xm = 0;
        let mut zm = 0;
        for v in p.support().iter() {
            let q = position(&self.labels, v);
            let (x, z) = p.component(v).bits();
            if x {
                xm |= 1 << q;
            }
            if z {
                zm |= 1 << q;
            }
        }
        (xm, zm)
    }

    /// `ρ ↦ Σ_k w_k P_k ρ P_k†`.
    pub fn apply_pauli_mixture(&mut self, terms: &[(f64, PauliString)]) {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for (w, p) in terms {
            if *w == 0.0 {
                continue;
            }
            let (xm, zm) = self.masks(p);
            // (PρP†)[i⊕x, j⊕x] = (-1)^{z·(i⊕j)} ρ[i, j]
            for i in 0..d {
                for j in 0..d {
                    let sign = if ((i ^ j) & zm).count_ones() % 2 == 1 { -*w } else { *w };
                    out[(i ^ xm) * d + (j ^ xm)] += self.data[i * d + j] * sign;
                }
            }
        }
        self.data = out;
    }

    /// `ρ ↦ U ρ U†` for a single-qubit `U` on vertex `v`.
    pub fn apply_single(&mut self, v: usize, m: &Mat2) {
        let q = position(&self.labels, v);
        let d = self.dim();
        let bit = 1 << q;
        // rows
        for j in 0..d {
            for i in 0..d {
                if i & bit == 0 {
                    let (a0, a1) = (self.data[i * d + j], self.data[(i | bit) * d + j]);
                    self.data[i * d + j] = m[0][0] * a0 + m[0][1] * a1;
                    self.data[(i | bit) * d + j] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
        }
        // columns, with U†
        for i in 0..d {
            let row = &mut self.data[i * d..(i + 1) * d];
            for j in 0..d {
                if j & bit == 0 {
                    let (a0, a1) = (row[j], row[j | bit]);
                    row[j] = a0 * m[0][0].conj() + a1 * m[0][1].conj();
                    row[j | bit] = a0 * m[1][0].conj() + a1 * m[1][1].conj();
                }
            }
        }
    }

    /// `ρ ↦ g ρ g†`.
    pub fn apply_gate(&mut self, g: &CliffordGate) {
        match g {
            CliffordGate::SqrtX(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::X, *s)),
            CliffordGate::SqrtY(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::Y, *s)),
            CliffordGate::SqrtZ(q, s) => self.apply_single(*q, &sqrt_mat(Pauli::Z, *s)),
            CliffordGate::Pauli(p) => self.apply_pauli_mixture(&[(1.0, p.clone())]),
            CliffordGate::CZ(a, b) => {
                let (qa, qb) = (position(&self.labels, *a), position(&self.labels, *b));
                let d = self.dim();
                let odd = |i: usize| (i >> qa) & (i >> qb) & 1 == 1;
                for i in 0..d {
                    for j in 0..d {
                        if odd(i) ^ odd(j) {
                            self.data[i * d + j] = -self.data[i * d + j];
                        }
                    }
                }
            }
        }
    }

    /// `⟨e|_v ρ |e⟩_v` with qubit `v` removed. Not renormalized.
    pub fn project_out(&self, v: usize, e: [C64; 2]) -> DensityMatrix {
        let q = position(&self.labels, v);
        let mut labels = self.labels.clone();
        labels.remove(q);
        let d = self.dim();
        let r = d / 2;
        let low = (1usize << q) - 1;
        let expand = |k: usize| (k & low) | ((k & !low) << 1);
        let bit = 1 << q;
        let mut data = vec![ZERO; r * r];
        for a in 0..r {
            let i0 = expand(a);
            for b in 0..r {
                let j0 = expand(b);
                let mut acc = ZERO;
                for (x, ex) in e.iter().enumerate() {
                    let i = i0 | if x == 1 { bit } else { 0 };
                    for (y, ey) in e.iter().enumerate() {
                        let j = j0 | if y == 1 { bit } else { 0 };
                        acc += ex.conj() * self.data[i * d + j] * ey;
                    }
                }
                data[a * r + b] = acc;
            }
        }
        DensityMatrix { labels, data }
    }

    pub fn add_assign(&mut self, other: &DensityMatrix) {
        assert_eq!(self.labels, other.labels);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// `⟨ψ|ρ|ψ⟩`, with `ψ` on the same register.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        assert_eq!(self.labels, psi.labels);
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            let mut row = ZERO;
            for j in 0..d {
                row += self.data[i * d + j] * psi.amps[j];
            }
            acc += psi.amps[i].conj() * row;
        }
        acc.re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_convention() {
        let m = sqrt_mat(Pauli::Z, Sign::Minus);
        let e = C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        assert!((m[0][0] - e).norm() < 1e-15);
        assert!((m[1][1] - e.conj()).norm() < 1e-15);
        assert!(m[0][1].norm() < 1e-15);
    }

    #[test]
    fn bell_graph_state_fidelity() {
        let g = GraphState::from_edges(2, &[(0, 1)]).unwrap();
        let psi = StateVector::graph_state(&g);
        let rho = DensityMatrix::from_pure(&psi);
        assert!((rho.expectation(&psi) - 1.0).abs() < 1e-14);
        assert!((rho.trace() - 1.0).abs() < 1e-14);
    }
}
