//! Linear Laumon 1-motives [F → G] with trivial abelian part.
//!
//! A motive is recorded by four spaces: L (the étale part of F, tensored up to k),
//! Vinf = Lie F_inf, LieT = Lie of the torus part of G and LieU = Lie G_uni,
//! together with the Lie-level structure maps. `u_inf` is the map Vinf → LieT ⊕ LieU
//! and `et_uni` is the unipotent component of the map on L. The étale map itself is
//! kept as explicit unit classes when they exist.

mod compat;
mod construct;
mod local;

#[cfg(test)]
mod tests;

pub use compat::{compati_check, compati_square, del_iso, CompatReport};
pub use construct::{lm_construct, lm_construct_over, lm_pull, lm_pull_capped, LmMorphism, TORSION_BOUND};
pub use local::{equal_up_to_torsion, hensel_root, log_unipotent};

use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{KMatrix, KRatFunc, NfElem, Scalar};
use crate::modcoh::ModcohError;
use crate::projline::{Divisor, GeomError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LaumonError {
    #[error("filtration index {0} is out of range")]
    BadIndex(usize),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("{what}: expected shape {want:?}, got {got:?}")]
    Shape { what: &'static str, want: (usize, usize), got: (usize, usize) },
    #[error("{block} block mismatch: expected {expected}, got {got}")]
    Mismatch { block: String, expected: String, got: String },
    #[error("tau square does not commute: {0}")]
    TauSquare(String),
    #[error(transparent)]
    Modcoh(#[from] ModcohError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A rational function on one component, read in (O/I_Y)^× modulo k^×.
#[derive(Clone, Debug)]
pub struct UnitClass {
    pub comp: usize,
    pub func: KRatFunc,
    /// The modulus on that component, relabeled to component 0.
    pub modulus: Divisor,
}

#[derive(Clone, Debug)]
pub enum UEt {
    Abstract,
    Witnesses(Vec<UnitClass>),
}

impl UEt {
    fn reduce_modulus(&self) -> UEt {
        match self {
            UEt::Abstract => UEt::Abstract,
            UEt::Witnesses(w) => UEt::Witnesses(w.iter().map(|u| UnitClass { modulus: u.modulus.red(), ..u.clone() }).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LmDims {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "Vinf")]
    pub vinf: usize,
    #[serde(rename = "LieT")]
    pub lie_t: usize,
    #[serde(rename = "LieU")]
    pub lie_u: usize,
}

impl LmDims {
    pub fn total(&self) -> usize {
        self.l + self.vinf + self.lie_t + self.lie_u
    }
}

#[derive(Clone, Debug)]
pub struct LinearLaumonMotive {
    pub l: usize,
    pub vinf: usize,
    pub lie_t: usize,
    pub lie_u: usize,
    /// Vinf → LieT ⊕ LieU, rows ordered T then U.
    pub u_inf: KMatrix,
    /// L⊗k → LieU.
    pub et_uni: KMatrix,
    pub u_et: UEt,
    proto: NfElem,
}

fn check_shape(what: &'static str, m: &KMatrix, want: (usize, usize)) -> Result<(), LaumonError> {
    let got = (m.rows(), m.cols());
    if got != want {
        return Err(LaumonError::Shape { what, want, got });
    }
    Ok(())
}

impl LinearLaumonMotive {
    #[allow(clippy::too_many_arguments)]
    pub fn new(l: usize, vinf: usize, lie_t: usize, lie_u: usize, u_inf: KMatrix, et_uni: KMatrix, u_et: UEt, proto: &NfElem) -> Result<Self, LaumonError> {
        check_shape("u_inf", &u_inf, (lie_t + lie_u, vinf))?;
        check_shape("et_uni", &et_uni, (lie_u, l))?;
        if let UEt::Witnesses(w) = &u_et {
            if w.len() != l {
                return Err(LaumonError::Shape { what: "u_et", want: (l, 1), got: (w.len(), 1) });
            }
        }
        Ok(LinearLaumonMotive { l, vinf, lie_t, lie_u, u_inf, et_uni, u_et, proto: proto.clone() })
    }

    /// A motive with the given dimensions and zero structure maps.
    pub fn from_dims(d: LmDims, proto: &NfElem) -> Self {
        let u_et = if d.l == 0 { UEt::Witnesses(Vec::new()) } else { UEt::Abstract };
        LinearLaumonMotive {
            l: d.l,
            vinf: d.vinf,
            lie_t: d.lie_t,
            lie_u: d.lie_u,
            u_inf: KMatrix::zeros(d.lie_t + d.lie_u, d.vinf, proto),
            et_uni: KMatrix::zeros(d.lie_u, d.l, proto),
            u_et,
            proto: proto.clone(),
        }
    }

    pub fn zero(proto: &NfElem) -> Self {
        Self::from_dims(LmDims { l: 0, vinf: 0, lie_t: 0, lie_u: 0 }, proto)
    }

    pub fn proto(&self) -> &NfElem {
        &self.proto
    }

    pub fn dims(&self) -> LmDims {
        LmDims { l: self.l, vinf: self.vinf, lie_t: self.lie_t, lie_u: self.lie_u }
    }

    pub fn u_inf_t(&self) -> KMatrix {
        self.u_inf.block(0, 0, self.lie_t, self.vinf)
    }

    pub fn u_inf_u(&self) -> KMatrix {
        self.u_inf.block(self.lie_t, 0, self.lie_u, self.vinf)
    }

    /// v_M : Ext(M_×, G_a)^* = (L⊗k) ⊕ Vinf → Lie G_uni.
    pub fn v_m(&self) -> KMatrix {
        self.et_uni.hstack(&self.u_inf_u())
    }

    /// Equality of dimensions and of the Lie-level structure maps.
    pub fn same_linear_data(&self, o: &Self) -> bool {
        self.dims() == o.dims() && self.u_inf == o.u_inf && self.et_uni == o.et_uni
    }
}

pub fn fil(m: &LinearLaumonMotive, i: usize) -> Result<LinearLaumonMotive, LaumonError> {
    let p = &m.proto;
    match i {
        0 => Ok(m.clone()),
        1 => Ok(LinearLaumonMotive { vinf: 0, u_inf: KMatrix::zeros(m.lie_t + m.lie_u, 0, p), ..m.clone() }),
        2 => Ok(LinearLaumonMotive {
            l: 0,
            vinf: 0,
            lie_t: 0,
            lie_u: m.lie_u,
            u_inf: KMatrix::zeros(m.lie_u, 0, p),
            et_uni: KMatrix::zeros(m.lie_u, 0, p),
            u_et: UEt::Witnesses(Vec::new()),
            proto: p.clone(),
        }),
        3 => Ok(LinearLaumonMotive::zero(p)),
        _ => Err(LaumonError::BadIndex(i)),
    }
}

/// Graded pieces: Gr⁰ = F_inf[1], Gr¹ = M_Del = [F_ét → G_sa], Gr² = [0 → G_uni].
pub fn gr(m: &LinearLaumonMotive, i: usize) -> Result<LinearLaumonMotive, LaumonError> {
    let p = &m.proto;
    match i {
        0 => Ok(LinearLaumonMotive::from_dims(LmDims { l: 0, vinf: m.vinf, lie_t: 0, lie_u: 0 }, p)),
        1 => Ok(LinearLaumonMotive {
            l: m.l,
            vinf: 0,
            lie_t: m.lie_t,
            lie_u: 0,
            u_inf: KMatrix::zeros(m.lie_t, 0, p),
            et_uni: KMatrix::zeros(0, m.l, p),
            u_et: m.u_et.reduce_modulus(),
            proto: p.clone(),
        }),
        2 => fil(m, 2),
        _ => Err(LaumonError::BadIndex(i)),
    }
}

/// The quotient fil¹M → Gr¹(fil¹M), oriented like `lm_pull` (Gr¹ is the source
/// of the matrices, fil¹ the target). Its realization kernel is the fil² shadow.
pub fn gr1_quotient(m: &LinearLaumonMotive) -> Result<(LinearLaumonMotive, LinearLaumonMotive, LmMorphism), LaumonError> {
    let p = &m.proto;
    let f1 = fil(m, 1)?;
    let g1 = gr(&f1, 1)?;
    let q = LmMorphism {
        l: KMatrix::identity(f1.l, p),
        vinf: KMatrix::zeros(g1.vinf, f1.vinf, p),
        lie_t: KMatrix::identity(f1.lie_t, p),
        lie_u: KMatrix::zeros(g1.lie_u, f1.lie_u, p),
    };
    Ok((f1, g1, q))
}

/// M_× = M / fil² = [F → G_sa].
pub fn times(m: &LinearLaumonMotive) -> LinearLaumonMotive {
    LinearLaumonMotive {
        lie_u: 0,
        u_inf: m.u_inf_t(),
        et_uni: KMatrix::zeros(0, m.l, &m.proto),
        u_et: m.u_et.reduce_modulus(),
        ..m.clone()
    }
}

/// Dimension-level Cartier dual: étale ↔ torus, unipotent ↔ infinitesimal.
pub fn cartier_dual_dims(m: &LinearLaumonMotive) -> LinearLaumonMotive {
    LinearLaumonMotive::from_dims(LmDims { l: m.lie_t, vinf: m.lie_u, lie_t: m.l, lie_u: m.vinf }, &m.proto)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RdRSpace {
    pub del: usize,
    pub inf: usize,
    pub uni: usize,
}

impl RdRSpace {
    pub fn total(&self) -> usize {
        self.del + self.inf + self.uni
    }
}

/// Lie-level data of M^♯ = [F → G^♯].
///
/// Lie G^♯ has coordinates [U | L | V | T], Lie G has [T | U] and
/// Lie G_×^♮ has [L | V | T].
#[derive(Clone, Debug)]
pub struct Sharp {
    pub dims: LmDims,
    /// Ext(M_×, G_a)^* = (L⊗k) ⊕ Vinf.
    pub ext_dual: usize,
    /// G_uni → G^♯
    pub j: KMatrix,
    /// G_uni → G
    pub i: KMatrix,
    /// G^♯ → G
    pub p: KMatrix,
    /// G^♯ → G_×^♮
    pub q: KMatrix,
    /// G_×^♮ → G
    pub v_nat: KMatrix,
    /// The canonical retraction G^♯ → G_uni.
    pub s: KMatrix,
    /// Lie G^♯ → del ⊕ inf ⊕ uni, with del = LieT ⊕ L⊗k.
    pub to_graded: KMatrix,
    pub rdr: RdRSpace,
}

impl Sharp {
    pub fn dim(&self) -> usize {
        self.rdr.total()
    }

    /// i∘s = p − v^♮∘q, s∘j = id, q∘j = 0 and the graded map is invertible.
    pub fn splitting_holds(&self) -> bool {
        let lhs = self.i.mul(&self.s);
        let rhs = self.p.sub(&self.v_nat.mul(&self.q));
        let id = KMatrix::identity(self.dims.lie_u, self.s.proto());
        lhs == rhs && self.s.mul(&self.j) == id && self.q.mul(&self.j).is_zero() && self.to_graded.rank() == self.dim()
    }
}

pub fn sharp(m: &LinearLaumonMotive) -> Sharp {
    let pr = &m.proto;
    let (u, l, v, t) = (m.lie_u, m.l, m.vinf, m.lie_t);
    let e = l + v;
    let n = u + e + t;
    let id = |k: usize| KMatrix::identity(k, pr);
    let mut j = KMatrix::zeros(n, u, pr);
    j.set_block(0, 0, &id(u));
    let mut i = KMatrix::zeros(t + u, u, pr);
    i.set_block(t, 0, &id(u));
    let mut p = KMatrix::zeros(t + u, n, pr);
    p.set_block(0, u + e, &id(t));
    p.set_block(t, 0, &id(u));
    let mut q = KMatrix::zeros(e + t, n, pr);
    q.set_block(0, u, &id(e + t));
    let vm = m.v_m();
    let mut v_nat = KMatrix::zeros(t + u, e + t, pr);
    v_nat.set_block(0, e, &id(t));
    v_nat.set_block(t, 0, &vm);
    let mut s = KMatrix::zeros(u, n, pr);
    s.set_block(0, 0, &id(u));
    s.set_block(0, u, &vm.scale(&pr.one_like().neg()));
    // del = [T | L], inf = V, uni = s
    let mut g = KMatrix::zeros(n, n, pr);
    g.set_block(0, u + e, &id(t));
    g.set_block(t, u, &id(l));
    g.set_block(t + l, u + l, &id(v));
    g.set_block(t + l + v, 0, &s);
    Sharp {
        dims: m.dims(),
        ext_dual: e,
        j,
        i,
        p,
        q,
        v_nat,
        s,
        to_graded: g,
        rdr: RdRSpace { del: t + l, inf: v, uni: u },
    }
}

pub fn r_dr(m: &LinearLaumonMotive) -> RdRSpace {
    sharp(m).rdr
}

/// The realization of a morphism, split into its three graded blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct RdRMap {
    pub del: KMatrix,
    pub inf: KMatrix,
    pub uni: KMatrix,
}

/// R_dR of a morphism dst → src, as a graded map. Fails if the structure maps
/// are not compatible, which shows up as an off-diagonal block.
pub fn realize(mor: &LmMorphism, src: &LinearLaumonMotive, dst: &LinearLaumonMotive) -> Result<RdRMap, LaumonError> {
    let (ss, sd) = (sharp(src), sharp(dst));
    let pr = &src.proto;
    // the morphism on Lie G^♯ in [U | L | V | T] coordinates
    let mut d = KMatrix::zeros(ss.dim(), sd.dim(), pr);
    let (us, ls, vs) = (src.lie_u, src.l, src.vinf);
    let (ud, ld, vd) = (dst.lie_u, dst.l, dst.vinf);
    d.set_block(0, 0, &mor.lie_u);
    d.set_block(us, ud, &mor.l);
    d.set_block(us + ls, ud + ld, &mor.vinf);
    d.set_block(us + ls + vs, ud + ld + vd, &mor.lie_t);
    let inv = sd.to_graded.inverse().map_err(|e| LaumonError::TauSquare(e.to_string()))?;
    let g = ss.to_graded.mul(&d).mul(&inv);
    let (a, b) = (ss.rdr, sd.rdr);
    let offs = |r: RdRSpace| [(0, r.del), (r.del, r.inf), (r.del + r.inf, r.uni)];
    for (x, (r0, nr)) in offs(a).into_iter().enumerate() {
        for (y, (c0, nc)) in offs(b).into_iter().enumerate() {
            if x != y && !g.block(r0, c0, nr, nc).is_zero() {
                return Err(LaumonError::TauSquare(format!("realization mixes graded blocks {} and {}", x, y)));
            }
        }
    }
    Ok(RdRMap {
        del: g.block(0, 0, a.del, b.del),
        inf: g.block(a.del, b.del, a.inf, b.inf),
        uni: g.block(a.del + a.inf, b.del + b.inf, a.uni, b.uni),
    })
}
