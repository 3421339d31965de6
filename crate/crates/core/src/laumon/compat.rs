use serde::Serialize;

use crate::exactfield::{KMatrix, NfElem, Scalar};
use crate::modcoh::ambient::Ambient;
use crate::modcoh::{self, hdr_compute_over, hdr_dim_oracle, hdr_pull_graded, Dims};
use crate::projline::local::residue;
use crate::projline::{CurveMap, ModulusTriple};

use super::construct::{lm_construct_over, lm_pull, CompGeom, Layout};
use super::{r_dr, realize, LaumonError, LmDims, RdRSpace};

#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub triple: String,
    pub lm: LmDims,
    pub rdr: RdRSpace,
    pub graded: Dims,
    pub oracle: usize,
}

fn mismatch(block: &str, expected: impl ToString, got: impl ToString) -> LaumonError {
    LaumonError::Mismatch { block: block.into(), expected: expected.to_string(), got: got.to_string() }
}

/// The φ ∈ O(Y_red)/k whose residue pairing against H⁰(Ω(Y_red)) is the i-th
/// coordinate functional, in the reduced ambient's φ coordinates.
fn phi_columns(g: &CompGeom, red: &Ambient) -> Result<Vec<Vec<NfElem>>, LaumonError> {
    let proto = red.proto();
    let n = red.phi_dim();
    if n != g.t_dim {
        return Err(mismatch("del/T", n, g.t_dim));
    }
    let mut gram = KMatrix::zeros(n, n, proto);
    for m in 0..n {
        let e = {
            let mut v = vec![proto.zero_like(); red.eta_dim + n];
            v[red.eta_dim + m] = proto.one_like();
            v
        };
        let jets = red.phi_jets(&e);
        for k in 0..n {
            let w = g.omega(k);
            let s = red.y.iter().zip(&jets).fold(proto.zero_like(), |acc, (b, j)| {
                acc.add(&residue(&b.jet_as_function(j).mul(&w), &b.place).expect("squarefree place"))
            });
            gram.set(k, m, s);
        }
    }
    let inv = gram.inverse().map_err(|_| mismatch("del/T", "perfect residue pairing", "degenerate"))?;
    Ok(inv.columns())
}

/// del = LieT ⊕ L⊗k → reduced block of 𝐇¹, column by column.
pub fn del_iso(t: &ModulusTriple, proto: &NfElem) -> Result<KMatrix, LaumonError> {
    let lay = Layout::new(t, proto)?;
    let reds: Vec<Ambient> = (0..t.comps).map(|c| Ambient::new(&t.component(c).red(), proto)).collect();
    let red_total: usize = reds.iter().map(|r| r.dim()).sum();
    let (nt, nl) = (lay.t.1, lay.l.1);
    let mut m = KMatrix::zeros(red_total, nt + nl, proto);
    let mut ro = 0;
    for (c, (g, red)) in lay.comps.iter().zip(&reds).enumerate() {
        if red.dim() != g.t_dim + g.l_dim {
            return Err(mismatch("del", red.dim(), g.t_dim + g.l_dim));
        }
        for (i, col) in phi_columns(g, red)?.into_iter().enumerate() {
            for (r, x) in col.into_iter().enumerate() {
                m.set(ro + red.eta_dim + r, lay.t.0[c] + i, x);
            }
        }
        for j in 0..g.l_dim {
            let mut e = vec![proto.zero_like(); g.l_dim];
            e[j] = proto.one_like();
            let eta = g.eta_of(&g.l_full(&e));
            let x = red.eta_coords(&eta).ok_or_else(|| mismatch("del/L", "log form with poles on Z_red", "other poles"))?;
            for (r, v) in x.into_iter().enumerate() {
                m.set(ro + r, nt + lay.l.0[c] + j, v);
            }
        }
        ro += red.dim();
    }
    Ok(m)
}

fn suffixed(labels: Vec<String>, c: usize) -> Vec<String> {
    labels.into_iter().map(|l| format!("{}@{}", l, c)).collect()
}

/// Matches R_dR(LM(T)) against the canonical decomposition of 𝐇¹(T).
pub fn compati_check(t: &ModulusTriple) -> Result<CompatReport, LaumonError> {
    let proto = modcoh::proto_of(t, None);
    let h = hdr_compute_over(t, &proto);
    let m = lm_construct_over(t, &proto)?;
    let r = r_dr(&m);
    let d = h.dims();
    let labels = h.basis_labels();
    let lay = Layout::new(t, &proto)?;
    let u_labels: Vec<String> = lay.comps.iter().enumerate().flat_map(|(c, g)| suffixed(g.u.labels(), c)).collect();
    let v_labels: Vec<String> = lay.comps.iter().enumerate().flat_map(|(c, g)| suffixed(g.v.labels(), c)).collect();
    if r.uni != d.u || u_labels[..] != labels[d.red..d.red + d.u] {
        return Err(mismatch("uni", format!("{:?}", &labels[d.red..d.red + d.u]), format!("{:?}", u_labels)));
    }
    if r.inf != d.v || v_labels[..] != labels[d.red + d.u..] {
        return Err(mismatch("inf", format!("{:?}", &labels[d.red + d.u..]), format!("{:?}", v_labels)));
    }
    if r.del != d.red {
        return Err(mismatch("del", d.red, r.del));
    }
    let iso = del_iso(t, &proto)?;
    if iso.rank() != d.red {
        return Err(mismatch("del", "isomorphism", format!("rank {}", iso.rank())));
    }
    let oracle = hdr_dim_oracle(t);
    if r.total() != oracle {
        return Err(mismatch("total", oracle, r.total()));
    }
    Ok(CompatReport { triple: t.to_string(), lm: m.dims(), rdr: r, graded: d, oracle })
}

/// The realization square for f : src → dst, compared blockwise with f* on 𝐇¹.
pub fn compati_square(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<(), LaumonError> {
    let proto = modcoh::proto_of(src, Some(f.maps[0].proto()));
    let (hs, hd) = (hdr_compute_over(src, &proto), hdr_compute_over(dst, &proto));
    let g = hdr_pull_graded(f, &hs, &hd)?;
    let mor = lm_pull(f, src, dst)?;
    let (ms, md) = (lm_construct_over(src, &proto)?, lm_construct_over(dst, &proto)?);
    let r = realize(&mor, &ms, &md)?;
    let (a, b) = (hs.dims(), hd.dims());
    let rows = [(0, a.red), (a.red, a.u), (a.red + a.u, a.v)];
    let cols = [(0, b.red), (b.red, b.u), (b.red + b.u, b.v)];
    for (x, &(r0, nr)) in rows.iter().enumerate() {
        for (y, &(c0, nc)) in cols.iter().enumerate() {
            if x != y && !g.block(r0, c0, nr, nc).is_zero() {
                return Err(mismatch("graded", "block diagonal", format!("nonzero block ({}, {})", x, y)));
            }
        }
    }
    let (is, id) = (del_iso(src, &proto)?, del_iso(dst, &proto)?);
    if g.block(0, 0, a.red, b.red).mul(&id) != is.mul(&r.del) {
        return Err(mismatch("del", "red block of f*", "different map"));
    }
    if g.block(a.red, b.red, a.u, b.u) != r.uni {
        return Err(mismatch("uni", "U block of f*", "different map"));
    }
    if g.block(a.red + a.u, b.red + b.u, a.v, b.v) != r.inf {
        return Err(mismatch("inf", "V block of f*", "different map"));
    }
    Ok(())
}
