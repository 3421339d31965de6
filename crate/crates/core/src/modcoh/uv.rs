//! Local pieces attached to a divisor D on one ℙ¹: jet blocks, the spaces
//! U(D) ⊂ O(D) and V(D), their d-isomorphisms, and the residue pairing.

use crate::exactfield::{KMatrix, KPoly, KRatFunc, NfElem, Scalar};
use crate::projline::local::{chart_poly, differential_in_chart, jet_at, principal_part, residue, s_chart};
use crate::projline::{Divisor, Place, PlaceKind};

/// One term n·P of a divisor, with its chart polynomial (p, or s at ∞).
#[derive(Clone, Debug)]
pub struct LocalBlock {
    pub place: Place,
    pub n: usize,
    pub chart: KPoly,
    pub delta: usize,
}

impl LocalBlock {
    pub fn new(place: &Place, n: u32, proto: &NfElem) -> Self {
        let chart = chart_poly(place, proto);
        let delta = chart.deg0();
        LocalBlock { place: place.clone(), n: n as usize, chart, delta }
    }

    /// dim k[t]/p^n
    pub fn jet_dim(&self) -> usize {
        self.n * self.delta
    }

    pub fn modulus(&self, m: usize) -> KPoly {
        self.chart.pow(m)
    }

    pub fn proto(&self) -> &NfElem {
        self.chart.proto()
    }

    /// Jet of a global function at this block (None if it has a pole here).
    pub fn jet(&self, f: &KRatFunc) -> Option<KPoly> {
        jet_at(f, &self.place, self.n)
    }

    /// The jet polynomial J (chart variable) read back as a rational function of t.
    pub fn jet_as_function(&self, j: &KPoly) -> KRatFunc {
        let f = KRatFunc::from_poly(j.clone());
        match self.place.kind {
            PlaceKind::Finite(_) => f,
            PlaceKind::Infinity => s_chart(&f),
        }
    }

    /// Derivative in the chart variable of a jet, reduced mod chart^(n-1).
    pub fn d_jet(&self, j: &KPoly) -> KPoly {
        j.derivative().rem(&self.modulus(self.n - 1))
    }

    /// p-adic digits J = Σ d_j p^j, j < m.
    pub fn digits(&self, j: &KPoly, m: usize) -> Vec<KPoly> {
        let mut out = Vec::with_capacity(m);
        let mut rest = j.clone();
        for _ in 0..m {
            let (q, r) = rest.divrem(&self.chart);
            out.push(r);
            rest = q;
        }
        assert!(rest.is_zero(), "jet exceeds its block");
        out
    }
}

pub fn blocks_of(d: &Divisor, proto: &NfElem) -> Vec<LocalBlock> {
    d.terms().iter().map(|(p, n)| LocalBlock::new(p, *n, proto)).collect()
}

/// Coordinates of a polynomial of degree < len in the monomial basis.
pub fn mono(j: &KPoly, len: usize) -> Vec<NfElem> {
    assert!(j.degree().map_or(true, |d| d < len), "polynomial too long for its block");
    j.coeff_vec(len)
}

/// U(D) = H⁰(I_{D_red}/I_D): per block with n ≥ 2, basis t^i·p^j (1 ≤ j < n, i < deg p), ordered by j then i.
#[derive(Clone, Debug)]
pub struct USpace {
    pub blocks: Vec<LocalBlock>,
    proto: NfElem,
}

/// V(D) = H⁰(I_{D_red} I_D^{-1}/O): per block with n ≥ 2, basis t^i/p^j (finite) or t^j (at ∞), 1 ≤ j < n.
#[derive(Clone, Debug)]
pub struct VSpace {
    pub blocks: Vec<LocalBlock>,
    proto: NfElem,
}

fn nonreduced(d: &Divisor, proto: &NfElem) -> Vec<LocalBlock> {
    blocks_of(d, proto).into_iter().filter(|b| b.n >= 2).collect()
}

fn block_dims(blocks: &[LocalBlock]) -> Vec<usize> {
    blocks.iter().map(|b| (b.n - 1) * b.delta).collect()
}

impl USpace {
    pub fn new(d: &Divisor, proto: &NfElem) -> Self {
        USpace { blocks: nonreduced(d, proto), proto: proto.clone() }
    }

    pub fn dim(&self) -> usize {
        block_dims(&self.blocks).iter().sum()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for j in 1..b.n {
                for i in 0..b.delta {
                    out.push(match b.place.kind {
                        PlaceKind::Infinity => format!("U:s^{}@{}", j, b.place.label()),
                        PlaceKind::Finite(_) => format!("U:t^{}*p^{}@{}", i, j, b.place.label()),
                    });
                }
            }
        }
        out
    }

    /// Jets (one per block) of a coordinate vector.
    pub fn jets(&self, x: &[NfElem]) -> Vec<KPoly> {
        let mut out = Vec::new();
        let mut k = 0;
        for b in &self.blocks {
            let mut acc = KPoly::zero(&self.proto);
            let mut pj = b.chart.clone();
            for _ in 1..b.n {
                for i in 0..b.delta {
                    acc = acc.add(&pj.shift(i).scale(&x[k]));
                    k += 1;
                }
                pj = pj.mul(&b.chart);
            }
            out.push(acc.rem(&b.modulus(b.n)));
        }
        out
    }

    /// Inverse of `jets` on jets divisible by the chart polynomial.
    pub fn coords(&self, jets: &[KPoly]) -> Vec<NfElem> {
        let mut out = Vec::with_capacity(self.dim());
        for (b, j) in self.blocks.iter().zip(jets) {
            let dg = b.digits(&j.rem(&b.modulus(b.n)), b.n);
            assert!(dg[0].is_zero(), "jet is not in the nilradical");
            for d in dg.iter().skip(1) {
                out.extend(mono(d, b.delta));
            }
        }
        out
    }

    /// The isomorphism u ↦ du into ⊕ Ω/m^{n-1}Ω, in monomial coordinates of the chart.
    pub fn d_matrix(&self) -> KMatrix {
        let dims = block_dims(&self.blocks);
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![self.proto.zero_like(); n];
            e[k] = self.proto.one_like();
            cols.push(self.d_vec(&self.jets(&e), &dims));
        }
        KMatrix::from_cols(&cols, n, &self.proto)
    }

    fn d_vec(&self, jets: &[KPoly], dims: &[usize]) -> Vec<NfElem> {
        let mut out = Vec::new();
        for ((b, j), d) in self.blocks.iter().zip(jets).zip(dims) {
            out.extend(mono(&b.d_jet(j), *d));
        }
        out
    }

    /// Solves du = (given differential jets mod p^(n-1)) for u.
    pub fn d_inverse(&self, dj: &[KPoly]) -> Vec<NfElem> {
        let dims = block_dims(&self.blocks);
        let mut rhs = Vec::new();
        for ((b, j), d) in self.blocks.iter().zip(dj).zip(&dims) {
            rhs.extend(mono(&j.rem(&b.modulus(b.n - 1)), *d));
        }
        self.d_matrix().solve_vec(&rhs).expect("d is an isomorphism on U")
    }
}

impl VSpace {
    pub fn new(d: &Divisor, proto: &NfElem) -> Self {
        VSpace { blocks: nonreduced(d, proto), proto: proto.clone() }
    }

    pub fn dim(&self) -> usize {
        block_dims(&self.blocks).iter().sum()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for j in 1..b.n {
                for i in 0..b.delta {
                    out.push(match b.place.kind {
                        PlaceKind::Infinity => format!("V:t^{}", j),
                        PlaceKind::Finite(_) => format!("V:t^{}/p^{}@{}", i, j, b.place.label()),
                    });
                }
            }
        }
        out
    }

    /// The canonical global representative v̂ (sum of principal parts, no constant).
    pub fn func(&self, x: &[NfElem]) -> KRatFunc {
        let mut acc = KRatFunc::from_poly(KPoly::zero(&self.proto));
        let mut k = 0;
        for b in &self.blocks {
            match b.place.kind {
                PlaceKind::Infinity => {
                    for j in 1..b.n {
                        acc = acc.add(&KRatFunc::from_poly(KPoly::monomial(x[k].clone(), j)));
                        k += 1;
                    }
                }
                PlaceKind::Finite(_) => {
                    // Σ_j g_j / p^j = (Σ_j g_j p^(n-1-j)) / p^(n-1)
                    let mut num = KPoly::zero(&self.proto);
                    for j in 1..b.n {
                        let mut g = KPoly::zero(&self.proto);
                        for i in 0..b.delta {
                            g = g.add(&KPoly::monomial(x[k].clone(), i));
                            k += 1;
                        }
                        num = num.add(&g.mul(&b.chart.pow(b.n - 1 - j)));
                    }
                    acc = acc.add(&KRatFunc::new(num, b.chart.pow(b.n - 1)).expect("nonzero"));
                }
            }
        }
        acc
    }

    /// Coordinates of the polar parts of F at the blocks (poles of order < n only).
    pub fn coords_of_func(&self, f: &KRatFunc) -> Vec<NfElem> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            match &b.place.kind {
                PlaceKind::Infinity => {
                    let (q, _) = f.num().divrem(f.den());
                    assert!(q.deg0() < b.n, "pole at infinity exceeds the block");
                    for j in 1..b.n {
                        out.push(q.coeff(j));
                    }
                }
                PlaceKind::Finite(p) => {
                    let (r, m) = principal_part(f, p);
                    assert!(m < b.n, "pole exceeds the block");
                    let mut coeff = vec![KPoly::zero(&self.proto); b.n];
                    if m > 0 {
                        // R/p^m = Σ_j r_j p^j / p^m
                        for (j, rj) in b.digits(&r, m).into_iter().enumerate() {
                            coeff[m - j] = rj;
                        }
                    }
                    for c in coeff.iter().skip(1) {
                        out.extend(mono(c, b.delta));
                    }
                }
            }
        }
        out
    }

    /// The isomorphism v ↦ dv̂ into ⊕ m^{-n}Ω/m^{-1}Ω, written R/p^n with R mod p^(n-1).
    pub fn d_matrix(&self) -> KMatrix {
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![self.proto.zero_like(); n];
            e[k] = self.proto.one_like();
            let dv = self.func(&e).derivative();
            let mut col = Vec::new();
            for b in &self.blocks {
                let c = differential_in_chart(&dv, &b.place);
                let (r, m) = principal_part(&c, &b.chart);
                let r = if m == 0 { r } else { r.mul(&b.chart.pow(b.n - m)) };
                col.extend(mono(&r.rem(&b.modulus(b.n - 1)), (b.n - 1) * b.delta));
            }
            cols.push(col);
        }
        KMatrix::from_cols(&cols, n, &self.proto)
    }
}

/// ⟨u, v⟩ = Σ_P res_P(u·dv̂); rows index U, columns index V.
pub fn uv_gram(u: &USpace, v: &VSpace) -> KMatrix {
    let proto = u.proto.clone();
    let mut g = KMatrix::zeros(u.dim(), v.dim(), &proto);
    let dvs: Vec<KRatFunc> = (0..v.dim())
        .map(|j| {
            let mut e = vec![proto.zero_like(); v.dim()];
            e[j] = proto.one_like();
            v.func(&e).derivative()
        })
        .collect();
    for i in 0..u.dim() {
        let mut e = vec![proto.zero_like(); u.dim()];
        e[i] = proto.one_like();
        let jets = u.jets(&e);
        for (b, jet) in u.blocks.iter().zip(&jets) {
            if jet.is_zero() {
                continue;
            }
            let uf = b.jet_as_function(jet);
            for (j, dv) in dvs.iter().enumerate() {
                let r = residue(&uf.mul(dv), &b.place).expect("squarefree place");
                g.set(i, j, g.get(i, j).add(&r));
            }
        }
    }
    g
}

/// First auxiliary rational point among 0, 1, −1, 2, −2, … avoiding the given places and points.
pub fn aux_point(places: &[Place], avoid: &[NfElem], proto: &NfElem) -> NfElem {
    for k in 0..200i64 {
        let v = if k % 2 == 0 { -(k / 2) } else { (k + 1) / 2 };
        let w = proto.from_int_like(v);
        let hits = places.iter().any(|p| p.poly().map_or(false, |q| q.eval(&w).is_zero()));
        if !hits && !avoid.contains(&w) {
            return w;
        }
    }
    panic!("no auxiliary point among the first 200 integers")
}

/// A global function with prescribed jets at the blocks, regular away from one
/// auxiliary point (or from ∞ when ∞ is not among the blocks).
pub fn lift_jets(blocks: &[LocalBlock], jets: &[KPoly], proto: &NfElem) -> KRatFunc {
    if blocks.iter().all(|b| !b.place.is_infinity()) {
        let parts: Vec<(KPoly, KPoly)> = blocks.iter().zip(jets).map(|(b, j)| (b.modulus(b.n), j.clone())).collect();
        return KRatFunc::from_poly(crate::projline::local::crt(&parts, proto));
    }
    let places: Vec<Place> = blocks.iter().map(|b| b.place.clone()).collect();
    let w = aux_point(&places, &[], proto);
    let big_n: usize = blocks.iter().map(|b| b.jet_dim()).sum();
    let tw = KPoly::linear(&w).pow(big_n);
    let mut rows: Vec<Vec<NfElem>> = Vec::new();
    let mut rhs: Vec<NfElem> = Vec::new();
    for (b, j) in blocks.iter().zip(jets) {
        match b.place.kind {
            PlaceKind::Finite(_) => {
                let m = b.modulus(b.n);
                let cols: Vec<Vec<NfElem>> = (0..=big_n).map(|i| KPoly::monomial(proto.one_like(), i).rem(&m).coeff_vec(b.jet_dim())).collect();
                let target = j.mul(&tw).rem(&m).coeff_vec(b.jet_dim());
                for r in 0..b.jet_dim() {
                    rows.push(cols.iter().map(|c| c[r].clone()).collect());
                    rhs.push(target[r].clone());
                }
            }
            PlaceKind::Infinity => {
                // (1 - w s)^N
                let one_ws = KPoly::new(vec![proto.one_like(), w.neg()], proto.zero_like()).pow(big_n);
                let target = j.mul(&one_ws).coeff_vec(b.n);
                for r in 0..b.n {
                    let mut row = vec![proto.zero_like(); big_n + 1];
                    row[big_n - r] = proto.one_like();
                    rows.push(row);
                    rhs.push(target[r].clone());
                }
            }
        }
    }
    let a = KMatrix::from_rows(rows, proto);
    let g = a.solve_vec(&rhs).expect("interpolation system is solvable");
    KRatFunc::new(KPoly::new(g, proto.zero_like()), tw).expect("nonzero")
}
