//! Multi-qubit Pauli operators with exact phase, and their conjugation by
//! the local Cliffords and CZ gates that appear in graph-state manipulation.
//!
//! A [`PauliString`] is stored in symplectic form `i^k · X^x · Z^z`, where
//! `x` and `z` are bit vectors over the vertex label space. The letter form
//! used for display and for [`PauliString::phase`] rewrites each `XZ` on one
//! qubit as `-i·Y`.
//!
//! Square-root gates follow one convention throughout the crate:
//! `√(±iσ) = (1 ± iσ)/√2 = exp(±iπσ/4)`, so `√(-iZ) = diag(e^{-iπ/4}, e^{iπ/4})`.
//! With it, `σx·√(-iσz) = -√(-iσz)·σy` and `σy·√(-iσz) = √(-iσz)·σx`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(x, z)` bits of the letter.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// Pauli measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Basis::X => 'x',
            Basis::Y => 'y',
            Basis::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Basis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Basis::X),
            'y' => Some(Basis::Y),
            'z' => Some(Basis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One of the four unit phases, stored as a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    /// True for `±1`.
    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.0 as usize])
    }
}

/// Multi-qubit Pauli operator with exact phase over a fixed label space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitSet,
    z: BitSet,
    /// Power of `i` in the symplectic form `i^k X^x Z^z`.
    k: u8,
}

impl PauliString {
    pub fn identity(label_space: usize) -> Self {
        PauliString {
            x: BitSet::new(label_space),
            z: BitSet::new(label_space),
            k: 0,
        }
    }

    pub fn single(label_space: usize, vertex: usize, pauli: Pauli) -> Self {
        let mut p = PauliString::identity(label_space);
        p.set_component(vertex, pauli);
        p
    }

    /// Builds `+1 · ⊗ letters`; repeated vertices are not allowed.
    pub fn from_letters(label_space: usize, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        let mut p = PauliString::identity(label_space);
        for (v, letter) in letters {
            debug_assert_eq!(p.component(v), Pauli::I, "vertex {v} repeated");
            p.set_component(v, letter);
        }
        p
    }

    /// `⊗_{v ∈ vertices} Z_v`.
    pub fn z_on(label_space: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        PauliString::from_letters(label_space, vertices.into_iter().map(|v| (v, Pauli::Z)))
    }

    /// Builds from symplectic parts with letter-form phase `+1`.
    pub fn from_bits(x: BitSet, z: BitSet) -> Self {
        assert_eq!(x.len(), z.len());
        let ys = x.intersection_count(&z);
        PauliString { x, z, k: (ys % 4) as u8 }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.k = (phase.0 + self.y_count()) % 4;
        self
    }

    pub fn label_space(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitSet {
        &self.x
    }

    pub fn z_bits(&self) -> &BitSet {
        &self.z
    }

    fn y_count(&self) -> u8 {
        (self.x.intersection_count(&self.z) % 4) as u8
    }

    /// Coefficient in front of the tensor product of letters.
    pub fn phase(&self) -> Phase {
        Phase::from_power(self.k + 4 - self.y_count())
    }

    pub fn component(&self, v: usize) -> Pauli {
        Pauli::from_bits(self.x.contains(v), self.z.contains(v))
    }

    /// Replaces the letter on `v`, keeping the letter-form phase.
    pub fn set_component(&mut self, v: usize, pauli: Pauli) {
        let phase = self.phase();
        let (x, z) = pauli.bits();
        self.x.set(v, x);
        self.z.set(v, z);
        self.k = (phase.0 + self.y_count()) % 4;
    }

    pub fn support(&self) -> BitSet {
        let mut s = self.x.clone();
        s.or_with(&self.z);
        s
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.z.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.support().count()
    }

    fn check_space(&self, other: &PauliString) -> Result<()> {
        if self.label_space() != other.label_space() {
            return Err(Error::LabelSpaceMismatch {
                left: self.label_space(),
                right: other.label_space(),
            });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_space(other)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self ← self · other`. Label spaces must match.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        debug_assert_eq!(self.label_space(), other.label_space());
        // X^a Z^b X^c Z^d = (-1)^{b·c} X^{a+c} Z^{b+d}
        let swap = self.z.intersection_count(&other.x) as u8;
        self.k = (self.k + other.k + 2 * (swap % 2)) % 4;
        self.x.xor_with(&other.x);
        self.z.xor_with(&other.z);
    }

    /// True iff the two operators commute.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        (self.x.intersection_count(&other.z) + self.z.intersection_count(&other.x)).is_multiple_of(2)
    }

    /// True iff the single-qubit part on `v` commutes with `pauli`.
    pub fn commutes_at(&self, v: usize, pauli: Pauli) -> bool {
        let (px, pz) = pauli.bits();
        let (x, z) = (self.x.contains(v), self.z.contains(v));
        !((x && pz) ^ (z && px))
    }

    /// Equality up to a global phase.
    pub fn eq_projective(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// The Hermitian representative with letter-form phase `+1`.
    pub fn hermitian(&self) -> PauliString {
        PauliString::from_bits(self.x.clone(), self.z.clone())
    }

    pub fn adjoint(&self) -> PauliString {
        // (i^k X^x Z^z)† = i^{-k} Z^z X^x = i^{-k} (-1)^{x·z} X^x Z^z
        let ys = self.x.intersection_count(&self.z) as u8 % 2;
        let mut out = self.clone();
        out.k = (4 - self.k + 2 * ys) % 4;
        out
    }

    /// Drops the component on `v` and returns it.
    pub fn take(&mut self, v: usize) -> Pauli {
        let letter = self.component(v);
        if letter != Pauli::I {
            self.set_component(v, Pauli::I);
        }
        letter
    }

    /// Copy keeping only the components inside `keep` (letter phase kept).
    pub fn restricted(&self, keep: &BitSet) -> PauliString {
        let phase = self.phase();
        let mut x = self.x.clone();
        let mut z = self.z.clone();
        x.and_with(keep);
        z.and_with(keep);
        PauliString::from_bits(x, z).with_phase(phase)
    }

    /// Conjugation `g† · self · g`.
    pub fn conjugated(&self, gate: &CliffordGate) -> PauliString {
        let mut out = self.clone();
        out.conjugate_in_place(gate);
        out
    }

    pub fn conjugate_in_place(&mut self, gate: &CliffordGate) {
        match *gate {
            CliffordGate::CZ(a, b) => {
                // Images: X_a → X_a Z_b, X_b → Z_a X_b, Z unchanged.
                let (xa, za) = (self.x.contains(a), self.z.contains(a));
                let (xb, zb) = (self.x.contains(b), self.z.contains(b));
                let n = self.label_space();
                self.x.remove(a);
                self.z.remove(a);
                self.x.remove(b);
                self.z.remove(b);
                // Factor order X_a^xa Z_a^za X_b^xb Z_b^zb is valid for the
                // cleared string since different qubits commute.
                let mut acc = PauliString::identity(n);
                if xa {
                    acc.mul_assign_right(&PauliString::from_letters(n, [(a, Pauli::X), (b, Pauli::Z)]));
                }
                if za {
                    acc.mul_assign_right(&PauliString::single(n, a, Pauli::Z));
                }
                if xb {
                    acc.mul_assign_right(&PauliString::from_letters(n, [(a, Pauli::Z), (b, Pauli::X)]));
                }
                if zb {
                    acc.mul_assign_right(&PauliString::single(n, b, Pauli::Z));
                }
                self.mul_assign_right(&acc);
            }
            CliffordGate::SqrtX(q, s) => self.conjugate_sqrt(q, Pauli::X, s),
            CliffordGate::SqrtY(q, s) => self.conjugate_sqrt(q, Pauli::Y, s),
            CliffordGate::SqrtZ(q, s) => self.conjugate_sqrt(q, Pauli::Z, s),
            CliffordGate::Pauli(ref q) => {
                if !self.commutes_unchecked(q) {
                    self.k = (self.k + 2) % 4;
                }
            }
        }
    }

    fn conjugate_sqrt(&mut self, q: usize, axis: Pauli, sign: Sign) {
        // For g = (1 + s·iσ)/√2: g†Pg = P if [P,σ] = 0, else s·i·P·σ.
        if self.commutes_at(q, axis) {
            return;
        }
        let sigma = PauliString::single(self.label_space(), q, axis);
        self.mul_assign_right(&sigma);
        self.k = (self.k + if sign == Sign::Plus { 1 } else { 3 }) % 4;
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase())?;
        if self.is_identity() {
            return f.write_str("I");
        }
        for (i, v) in self.support().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let letter = match self.component(v) {
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
                Pauli::I => unreachable!(),
            };
            write!(f, "{letter}{v}")?;
        }
        Ok(())
    }
}

/// Sign in `√(±iσ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Clifford gates used by graph-state corrections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    CZ(usize, usize),
    /// `√(±iσx)` on one qubit.
    SqrtX(usize, Sign),
    SqrtY(usize, Sign),
    SqrtZ(usize, Sign),
    Pauli(PauliString),
}

impl CliffordGate {
    pub fn inverse(&self) -> CliffordGate {
        match self {
            CliffordGate::CZ(a, b) => CliffordGate::CZ(*a, *b),
            CliffordGate::SqrtX(q, s) => CliffordGate::SqrtX(*q, s.flipped()),
            CliffordGate::SqrtY(q, s) => CliffordGate::SqrtY(*q, s.flipped()),
            CliffordGate::SqrtZ(q, s) => CliffordGate::SqrtZ(*q, s.flipped()),
            CliffordGate::Pauli(p) => CliffordGate::Pauli(p.adjoint()),
        }
    }

    /// Vertices the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            CliffordGate::CZ(a, b) => vec![*a, *b],
            CliffordGate::SqrtX(q, _) | CliffordGate::SqrtY(q, _) | CliffordGate::SqrtZ(q, _) => vec![*q],
            CliffordGate::Pauli(p) => p.support().iter().collect(),
        }
    }
}

/// Conjugates `p` by the product `g_1 g_2 ⋯ g_n` of a gate list, i.e.
/// `(g_1⋯g_n)† p (g_1⋯g_n)`.
pub fn conjugate_by_product(p: &PauliString, gates: &[CliffordGate]) -> PauliString {
    let mut out = p.clone();
    for g in gates {
        out.conjugate_in_place(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(v: usize, p: Pauli) -> PauliString {
        PauliString::single(4, v, p)
    }

    #[test]
    fn x_times_y_is_i_z() {
        let prod = single(1, Pauli::X).multiply(&single(1, Pauli::Y)).unwrap();
        assert!(prod.eq_projective(&single(1, Pauli::Z)));
        assert_eq!(prod.phase(), Phase::I);
    }

    #[test]
    fn involution_and_identity() {
        let p = PauliString::from_letters(4, [(1, Pauli::Z), (2, Pauli::X)]);
        let sq = p.multiply(&p).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.phase(), Phase::ONE);
        let id = PauliString::identity(4);
        assert_eq!(id.multiply(&p).unwrap(), p);
        let y = single(3, Pauli::Y);
        assert_eq!(y.multiply(&y).unwrap(), id);
    }

    #[test]
    fn mismatched_label_space_is_an_error() {
        let a = PauliString::identity(3);
        let b = PauliString::identity(4);
        assert!(matches!(a.multiply(&b), Err(Error::LabelSpaceMismatch { .. })));
        assert!(a.commutes(&b).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!single(1, Pauli::X).commutes(&single(1, Pauli::Z)).unwrap());
        assert!(single(1, Pauli::X).commutes(&single(2, Pauli::Z)).unwrap());
        let a = PauliString::from_letters(4, [(1, Pauli::X), (2, Pauli::Z)]);
        let b = PauliString::from_letters(4, [(1, Pauli::Z), (2, Pauli::X)]);
        assert!(a.commutes(&b).unwrap());
    }

    #[test]
    fn key_commutation_relations() {
        // σx√(-iσz) = -√(-iσz)σy  ⇔  g†Xg = -Y
        let g = CliffordGate::SqrtZ(1, Sign::Minus);
        assert_eq!(single(1, Pauli::X).conjugated(&g), single(1, Pauli::Y).with_phase(Phase::MINUS_ONE));
        // σy√(-iσz) = √(-iσz)σx
        assert_eq!(single(1, Pauli::Y).conjugated(&g), single(1, Pauli::X));
        // σx√(iσy) = -√(iσy)σz
        let h = CliffordGate::SqrtY(1, Sign::Plus);
        assert_eq!(single(1, Pauli::X).conjugated(&h), single(1, Pauli::Z).with_phase(Phase::MINUS_ONE));
        // σz√(iσy) = √(iσy)σx
        assert_eq!(single(1, Pauli::Z).conjugated(&h), single(1, Pauli::X));
    }

    #[test]
    fn cz_and_disjoint_conjugation() {
        let x1 = single(1, Pauli::X);
        let img = x1.conjugated(&CliffordGate::CZ(1, 2));
        assert_eq!(img, PauliString::from_letters(4, [(1, Pauli::X), (2, Pauli::Z)]));
        let z1 = single(1, Pauli::Z);
        assert_eq!(z1.conjugated(&CliffordGate::SqrtX(2, Sign::Plus)), z1);
    }

    #[test]
    fn adjoint_of_phased_strings() {
        let p = single(1, Pauli::Y).with_phase(Phase::I);
        let adj = p.adjoint();
        assert_eq!(adj.phase(), Phase::MINUS_I);
        assert!(p.multiply(&adj).unwrap().is_identity());
        assert_eq!(p.multiply(&adj).unwrap().phase(), Phase::ONE);
    }

    #[test]
    fn display_uses_letters() {
        let p = PauliString::from_letters(4, [(1, Pauli::Y), (3, Pauli::Z)]).with_phase(Phase::MINUS_I);
        assert_eq!(p.to_string(), "-iY1 Z3");
        assert_eq!(PauliString::identity(2).to_string(), "+I");
    }
}
