//! Canonical decomposition on one ℙ¹:
//! 𝐇¹(Y, Z) ≅ 𝐇¹(Y_red, Z_red) ⊕ U(Y) ⊕ V(Z).
//!
//! a lifts a reduced class (η_r, φ_r) to (η_r, φ) with dφ + η_r ≡ 0 mod m^{n−1}Ω
//! along Y. b removes the V-part of η and restricts to Y_red. The U-projection
//! reads off d⁻¹(dφ + η) along Y, and V enters as v ↦ (dv̂, −v̂|_Y).

use crate::exactfield::{KMatrix, KPoly, KRatFunc, NfElem, Scalar};
use crate::projline::local::diff_jet_at;
use crate::projline::ModulusTriple;

use super::ambient::Ambient;
use super::uv::{USpace, VSpace};

#[derive(Clone, Debug)]
pub struct GradedP1 {
    pub amb: Ambient,
    pub red: Ambient,
    pub u: USpace,
    pub v: VSpace,
    /// red → amb
    pub a: KMatrix,
    /// amb → red
    pub b: KMatrix,
    pub pi_u: KMatrix,
    pub iota_u: KMatrix,
    pub pi_v: KMatrix,
    pub iota_v: KMatrix,
    /// amb → [red | U | V]
    pub to_graded: KMatrix,
    /// [red | U | V] → amb
    pub from_graded: KMatrix,
}

fn cols_to_matrix(cols: Vec<Vec<NfElem>>, rows: usize, proto: &NfElem) -> KMatrix {
    KMatrix::from_cols(&cols, rows, proto)
}

impl GradedP1 {
    pub fn new(t: &ModulusTriple, proto: &NfElem) -> Self {
        let amb = Ambient::new(t, proto);
        let red = Ambient::new(&t.red(), proto);
        let u = USpace::new(&t.y, proto);
        let v = VSpace::new(&t.z, proto);
        let zero_f = KRatFunc::from_poly(KPoly::zero(proto));

        // U-blocks are the places of Y with multiplicity ≥ 2, in order.
        let u_of_y: Vec<usize> = amb.y.iter().enumerate().filter(|(_, b)| b.n >= 2).map(|(i, _)| i).collect();

        let du_of = |h: &KRatFunc, jets: &[KPoly]| -> Vec<NfElem> {
            let dj: Vec<KPoly> = u_of_y
                .iter()
                .map(|&i| {
                    let b = &amb.y[i];
                    let dh = diff_jet_at(h, &b.place, b.n - 1).expect("η is regular along Y");
                    b.d_jet(&jets[i]).add(&dh)
                })
                .collect();
            u.d_inverse(&dj)
        };

        // a
        let mut a_cols = Vec::with_capacity(red.dim());
        for i in 0..red.dim() {
            let e = red.basis_vector(i);
            let h = red.eta_fn(&e);
            let jets0 = red.phi_jets(&e);
            let corr = u.jets(&du_of(&h, &jets0));
            let mut jets = jets0.clone();
            for (k, &yi) in u_of_y.iter().enumerate() {
                jets[yi] = jets[yi].sub(&corr[k]);
            }
            a_cols.push(amb.encode(&h, &jets).expect("reduced differential lies in H⁰(Ω(Z))"));
        }
        let a = cols_to_matrix(a_cols, amb.dim(), proto);

        // V-part of η: solve η = η_r + dv̂ in the basis [red η-basis | dV-basis].
        let mut split_cols = Vec::with_capacity(amb.eta_dim);
        for i in 0..red.eta_dim {
            let h = red.eta_fn(&red.basis_vector(i));
            split_cols.push(amb.eta_coords(&h).expect("simple poles"));
        }
        let v_dim = v.dim();
        let v_funcs: Vec<KRatFunc> = (0..v_dim).map(|j| v.func(&unit(v_dim, j, proto))).collect();
        for f in &v_funcs {
            split_cols.push(amb.eta_coords(&f.derivative()).expect("dv̂ lies in H⁰(Ω(Z))"));
        }
        let split = cols_to_matrix(split_cols, amb.eta_dim, proto).inverse().expect("η splits into reduced and exact parts");

        let mut b_cols = Vec::with_capacity(amb.dim());
        let mut pu_cols = Vec::with_capacity(amb.dim());
        let mut pv_cols = Vec::with_capacity(amb.dim());
        for i in 0..amb.dim() {
            let e = amb.basis_vector(i);
            let h = amb.eta_fn(&e);
            let jets = amb.phi_jets(&e);
            let sv = split.mul_vec(&e[..amb.eta_dim]);
            let (eta_r, vpart) = sv.split_at(red.eta_dim);
            let vhat = v.func(vpart);
            // (φ + v̂)|_{Y_red}
            let red_jets: Vec<KPoly> = amb
                .y
                .iter()
                .zip(&jets)
                .zip(&red.y)
                .map(|((b, j), rb)| {
                    let vj = rb.jet(&vhat).expect("v̂ is regular along Y");
                    j.rem(&rb.modulus(1)).add(&vj).rem(&b.modulus(1))
                })
                .collect();
            let mut col = eta_r.to_vec();
            col.extend(red.phi_coords(&red_jets));
            b_cols.push(col);
            pu_cols.push(du_of(&h, &jets));
            pv_cols.push(vpart.to_vec());
        }
        let b = cols_to_matrix(b_cols, red.dim(), proto);
        let pi_u = cols_to_matrix(pu_cols, u.dim(), proto);
        let pi_v = cols_to_matrix(pv_cols, v_dim, proto);

        let mut iu_cols = Vec::with_capacity(u.dim());
        for j in 0..u.dim() {
            let uj = u.jets(&unit(u.dim(), j, proto));
            let mut jets: Vec<KPoly> = amb.y.iter().map(|_| KPoly::zero(proto)).collect();
            for (k, &yi) in u_of_y.iter().enumerate() {
                jets[yi] = uj[k].clone();
            }
            iu_cols.push(amb.encode(&zero_f, &jets).expect("zero η"));
        }
        let iota_u = cols_to_matrix(iu_cols, amb.dim(), proto);

        let mut iv_cols = Vec::with_capacity(v_dim);
        for f in &v_funcs {
            let jets: Vec<KPoly> = amb.restrict_to_y(f).expect("v̂ is regular along Y").iter().map(|j| j.neg()).collect();
            iv_cols.push(amb.encode(&f.derivative(), &jets).expect("dv̂ lies in H⁰(Ω(Z))"));
        }
        let iota_v = cols_to_matrix(iv_cols, amb.dim(), proto);

        let to_graded = b.vstack(&pi_u).vstack(&pi_v);
        let from_graded = a.hstack(&iota_u).hstack(&iota_v);
        GradedP1 { amb, red, u, v, a, b, pi_u, iota_u, pi_v, iota_v, to_graded, from_graded }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.red.dim(), self.u.dim(), self.v.dim())
    }
}

pub(crate) fn unit(n: usize, j: usize, proto: &NfElem) -> Vec<NfElem> {
    let mut e = vec![proto.zero_like(); n];
    e[j] = proto.one_like();
    e
}
