//! The (η, φ) model of 𝐇¹_dR for one ℙ¹: a class is a pair with η ∈ H⁰(Ω(Z))
//! and φ ∈ O(Y)/k, standing for the differential η − dΦ on the complement of an
//! auxiliary point, where Φ is any lift of φ regular along Y.
//!
//! Coordinates: η = g·dt / D_Z with D_Z the finite part of Z and
//! deg g ≤ deg D_Z + n_∞(Z) − 2 (coefficients of g); φ by monomial jets at each
//! place of Y, with the constant jet of the first place dropped.

use crate::exactfield::{KPoly, KRatFunc, NfElem, Scalar};
use crate::projline::ModulusTriple;

use super::uv::{blocks_of, mono, LocalBlock};

#[derive(Clone, Debug)]
pub struct Ambient {
    pub triple: ModulusTriple,
    pub y: Vec<LocalBlock>,
    pub z: Vec<LocalBlock>,
    pub dz: KPoly,
    pub eta_dim: usize,
    pub phi_full: usize,
    proto: NfElem,
}

impl Ambient {
    /// `t` must have a single component.
    pub fn new(t: &ModulusTriple, proto: &NfElem) -> Self {
        assert_eq!(t.comps, 1);
        let y = blocks_of(&t.y, proto);
        let z = blocks_of(&t.z, proto);
        let dz = t.z.finite_poly(0).unwrap_or_else(|| KPoly::one(proto));
        let zdeg = t.z.degree();
        let eta_dim = zdeg.saturating_sub(1);
        let phi_full = y.iter().map(|b| b.jet_dim()).sum();
        Ambient { triple: t.clone(), y, z, dz, eta_dim, phi_full, proto: proto.clone() }
    }

    pub fn phi_dim(&self) -> usize {
        self.phi_full.saturating_sub(1)
    }

    pub fn dim(&self) -> usize {
        self.eta_dim + self.phi_dim()
    }

    pub fn proto(&self) -> &NfElem {
        &self.proto
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.eta_dim).map(|i| format!("eta:t^{}dt/DZ", i)).collect();
        let mut first = true;
        for b in &self.y {
            for i in 0..b.jet_dim() {
                if first {
                    first = false;
                    continue;
                }
                out.push(format!("phi:{}[{}]", b.place.label(), i));
            }
        }
        out
    }

    /// η as its dt-coefficient.
    pub fn eta_fn(&self, x: &[NfElem]) -> KRatFunc {
        let g = KPoly::new(x[..self.eta_dim].to_vec(), self.proto.zero_like());
        KRatFunc::new(g, self.dz.clone()).expect("nonzero")
    }

    /// Coordinates of h dt, or None if it is not in H⁰(Ω(Z)).
    pub fn eta_coords(&self, h: &KRatFunc) -> Option<Vec<NfElem>> {
        if h.is_zero() {
            return Some(vec![self.proto.zero_like(); self.eta_dim]);
        }
        let (g, r) = h.num().mul(&self.dz).divrem(h.den());
        if !r.is_zero() || g.deg0() >= self.eta_dim {
            return None;
        }
        Some(g.coeff_vec(self.eta_dim))
    }

    /// Full jets of φ, one per place of Y (first constant set to 0).
    pub fn phi_jets(&self, x: &[NfElem]) -> Vec<KPoly> {
        let mut full = Vec::with_capacity(self.phi_full);
        if self.phi_full > 0 {
            full.push(self.proto.zero_like());
            full.extend_from_slice(&x[self.eta_dim..]);
        }
        let mut out = Vec::with_capacity(self.y.len());
        let mut k = 0;
        for b in &self.y {
            out.push(KPoly::new(full[k..k + b.jet_dim()].to_vec(), self.proto.zero_like()));
            k += b.jet_dim();
        }
        out
    }

    /// Normalized coordinates of φ from full jets (modulo global constants).
    pub fn phi_coords(&self, jets: &[KPoly]) -> Vec<NfElem> {
        let mut full = Vec::with_capacity(self.phi_full);
        let mut starts = Vec::new();
        for (b, j) in self.y.iter().zip(jets) {
            starts.push(full.len());
            full.extend(mono(&j.rem(&b.modulus(b.n)), b.jet_dim()));
        }
        if full.is_empty() {
            return full;
        }
        let c = full[0].clone();
        for s in starts {
            full[s] = full[s].sub(&c);
        }
        full.remove(0);
        full
    }

    pub fn encode(&self, h: &KRatFunc, jets: &[KPoly]) -> Option<Vec<NfElem>> {
        let mut v = self.eta_coords(h)?;
        v.extend(self.phi_coords(jets));
        Some(v)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<NfElem> {
        let mut e = vec![self.proto.zero_like(); self.dim()];
        e[i] = self.proto.one_like();
        e
    }

    /// Jets of a global function at the places of Y.
    pub fn restrict_to_y(&self, f: &KRatFunc) -> Option<Vec<KPoly>> {
        self.y.iter().map(|b| b.jet(f)).collect()
    }
}
