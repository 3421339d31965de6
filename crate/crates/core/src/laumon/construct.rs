use num_traits::ToPrimitive;

use crate::exactfield::{KMatrix, KPoly, KRatFunc, NfElem, Scalar};
use crate::modcoh::uv::{blocks_of, mono};
use crate::modcoh::{self, LocalBlock, USpace, VSpace};
use crate::projline::local::{crt, diff_jet_at, pull_function, push_differential, residue, trace_mod};
use crate::projline::{bar_violations, CurveMap, ModulusTriple, PlaceKind, RationalMap};

use super::local::equal_up_to_torsion;
use super::{LaumonError, LinearLaumonMotive, UEt, UnitClass};

/// Search bound for the torsion order when comparing unit classes.
pub const TORSION_BOUND: u32 = 24;

/// The local data of LM on one component.
#[derive(Clone, Debug)]
pub(crate) struct CompGeom {
    pub triple: ModulusTriple,
    pub zred: Vec<LocalBlock>,
    pub z: Vec<LocalBlock>,
    pub yred_fin: KPoly,
    pub t_dim: usize,
    pub l_dim: usize,
    pub u: USpace,
    pub v: VSpace,
    proto: NfElem,
}

impl CompGeom {
    pub fn new(t: &ModulusTriple, proto: &NfElem) -> Self {
        let zred = blocks_of(&t.z.red(), proto);
        let l_full: usize = zred.iter().map(|b| b.delta).sum();
        let yred = t.y.red();
        CompGeom {
            triple: t.clone(),
            z: blocks_of(&t.z, proto),
            zred,
            yred_fin: yred.finite_poly(0).unwrap_or_else(|| KPoly::one(proto)),
            t_dim: yred.degree().saturating_sub(1),
            l_dim: l_full.saturating_sub(1),
            u: USpace::new(&t.y, proto),
            v: VSpace::new(&t.z, proto),
            proto: proto.clone(),
        }
    }

    fn zero(&self) -> NfElem {
        self.proto.zero_like()
    }

    /// ω_i = t^i dt / D with D the finite part of Y_red; a basis of H⁰(Ω(Y_red)).
    pub fn omega(&self, i: usize) -> KRatFunc {
        KRatFunc::new(KPoly::monomial(self.proto.one_like(), i), self.yred_fin.clone()).expect("nonzero")
    }

    pub fn omega_coords(&self, h: &KRatFunc) -> Option<Vec<NfElem>> {
        if h.is_zero() {
            return Some(vec![self.zero(); self.t_dim]);
        }
        let (g, r) = h.num().mul(&self.yred_fin).divrem(h.den());
        if !r.is_zero() || g.deg0() >= self.t_dim {
            return None;
        }
        Some(g.coeff_vec(self.t_dim))
    }

    /// Functions on Z_red with total trace zero, from coordinates that omit the
    /// constant term at the first place.
    pub fn l_full(&self, x: &[NfElem]) -> Vec<KPoly> {
        if self.zred.is_empty() {
            return Vec::new();
        }
        let mut full = vec![self.zero()];
        full.extend_from_slice(x);
        let mut jets = Vec::with_capacity(self.zred.len());
        let mut k = 0;
        for b in &self.zred {
            jets.push(KPoly::new(full[k..k + b.delta].to_vec(), self.zero()));
            k += b.delta;
        }
        let tr = self.zred.iter().zip(&jets).fold(self.zero(), |acc, (b, j)| acc.add(&trace_mod(j, &b.chart)));
        let c0 = tr.neg().div(&self.proto.from_int_like(self.zred[0].delta as i64)).expect("char 0");
        jets[0] = jets[0].add(&KPoly::constant(c0));
        jets
    }

    pub fn l_coords(&self, jets: &[KPoly]) -> Vec<NfElem> {
        let mut full = Vec::new();
        for (b, j) in self.zred.iter().zip(jets) {
            full.extend(mono(&j.rem(&b.chart), b.delta));
        }
        if !full.is_empty() {
            full.remove(0);
        }
        full
    }

    /// The logarithmic form with residue function ρ along Z_red (dt-coefficient).
    pub fn eta_of(&self, rho: &[KPoly]) -> KRatFunc {
        let mut acc = KRatFunc::from_poly(KPoly::zero(&self.proto));
        for (b, r) in self.zred.iter().zip(rho) {
            if let PlaceKind::Finite(p) = &b.place.kind {
                let num = r.mul(&p.derivative()).rem(p);
                acc = acc.add(&KRatFunc::new(num, p.clone()).expect("nonzero"));
            }
        }
        acc
    }

    /// The u ∈ U(Y) with du ≡ h dt along Y.
    pub fn u_of_form(&self, h: &KRatFunc) -> Vec<NfElem> {
        let dj: Vec<KPoly> = self.u.blocks.iter().map(|b| diff_jet_at(h, &b.place, b.n - 1).expect("form regular along Y")).collect();
        self.u.d_inverse(&dj)
    }

    fn unit(&self, n: usize, j: usize) -> Vec<NfElem> {
        let mut e = vec![self.zero(); n];
        e[j] = self.proto.one_like();
        e
    }

    /// Vinf → LieT ⊕ LieU for this component.
    fn u_inf(&self) -> KMatrix {
        let (nt, nu, nv) = (self.t_dim, self.u.dim(), self.v.dim());
        let mut cols = Vec::with_capacity(nv);
        for j in 0..nv {
            let vh = self.v.func(&self.unit(nv, j));
            let mut col = Vec::with_capacity(nt + nu);
            for i in 0..nt {
                let h = vh.mul(&self.omega(i));
                let s = self.z.iter().fold(self.zero(), |acc, b| acc.add(&residue(&h, &b.place).expect("squarefree place")));
                col.push(s);
            }
            col.extend(self.u_of_form(&vh.derivative()).into_iter().map(|x| x.neg()));
            cols.push(col);
        }
        KMatrix::from_cols(&cols, nt + nu, &self.proto)
    }

    /// L⊗k → LieU, the unipotent logarithm of the étale map.
    fn et_uni(&self) -> KMatrix {
        let cols: Vec<Vec<NfElem>> = (0..self.l_dim).map(|j| self.u_of_form(&self.eta_of(&self.l_full(&self.unit(self.l_dim, j))))).collect();
        KMatrix::from_cols(&cols, self.u.dim(), &self.proto)
    }

    /// Rational functions with divisor P_i − P_0 when every place of Z_red is rational.
    fn witnesses(&self, comp: usize) -> Option<Vec<UnitClass>> {
        if self.zred.iter().any(|b| b.delta != 1) {
            return None;
        }
        let lin = |b: &LocalBlock| match &b.place.kind {
            PlaceKind::Finite(p) => KRatFunc::from_poly(p.clone()),
            PlaceKind::Infinity => KRatFunc::constant(self.proto.one_like()),
        };
        let base = self.zred.first().map(lin);
        Some(
            self.zred
                .iter()
                .skip(1)
                .map(|b| UnitClass { comp, func: lin(b).div(base.as_ref().expect("nonempty")).expect("nonzero"), modulus: self.triple.y.clone() })
                .collect(),
        )
    }
}

fn offsets(sizes: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut out = Vec::new();
    let mut acc = 0;
    for s in sizes {
        out.push(acc);
        acc += s;
    }
    (out, acc)
}

pub(crate) struct Layout {
    pub comps: Vec<CompGeom>,
    pub l: (Vec<usize>, usize),
    pub v: (Vec<usize>, usize),
    pub t: (Vec<usize>, usize),
    pub u: (Vec<usize>, usize),
}

impl Layout {
    pub fn new(t: &ModulusTriple, proto: &NfElem) -> Result<Self, LaumonError> {
        if t.comps == 0 {
            return Err(LaumonError::UnsupportedGeometry("empty curve".into()));
        }
        let comps: Vec<CompGeom> = (0..t.comps).map(|c| CompGeom::new(&t.component(c), proto)).collect();
        Ok(Layout {
            l: offsets(comps.iter().map(|g| g.l_dim)),
            v: offsets(comps.iter().map(|g| g.v.dim())),
            t: offsets(comps.iter().map(|g| g.t_dim)),
            u: offsets(comps.iter().map(|g| g.u.dim())),
            comps,
        })
    }
}

pub fn lm_construct_over(t: &ModulusTriple, proto: &NfElem) -> Result<LinearLaumonMotive, LaumonError> {
    let lay = Layout::new(t, proto)?;
    let (nl, nv, nt, nu) = (lay.l.1, lay.v.1, lay.t.1, lay.u.1);
    let mut u_inf = KMatrix::zeros(nt + nu, nv, proto);
    let mut et_uni = KMatrix::zeros(nu, nl, proto);
    let mut wit = Some(Vec::new());
    for (c, g) in lay.comps.iter().enumerate() {
        let m = g.u_inf();
        u_inf.set_block(lay.t.0[c], lay.v.0[c], &m.block(0, 0, g.t_dim, g.v.dim()));
        u_inf.set_block(nt + lay.u.0[c], lay.v.0[c], &m.block(g.t_dim, 0, g.u.dim(), g.v.dim()));
        et_uni.set_block(lay.u.0[c], lay.l.0[c], &g.et_uni());
        wit = match (wit, g.witnesses(c)) {
            (Some(mut acc), Some(w)) => {
                acc.extend(w);
                Some(acc)
            }
            _ => None,
        };
    }
    let u_et = wit.map_or(UEt::Abstract, UEt::Witnesses);
    LinearLaumonMotive::new(nl, nv, nt, nu, u_inf, et_uni, u_et, proto)
}

/// LM(X, Y, Z) = [F(X, Z) → J(X, Y)].
pub fn lm_construct(t: &ModulusTriple) -> Result<LinearLaumonMotive, LaumonError> {
    lm_construct_over(t, &modcoh::proto_of(t, None))
}

/// LM(f) : LM(dst) → LM(src), one matrix per constituent.
#[derive(Clone, Debug, PartialEq)]
pub struct LmMorphism {
    pub l: KMatrix,
    pub vinf: KMatrix,
    pub lie_t: KMatrix,
    pub lie_u: KMatrix,
}

impl LmMorphism {
    /// self ∘ o
    pub fn mul(&self, o: &LmMorphism) -> LmMorphism {
        LmMorphism { l: self.l.mul(&o.l), vinf: self.vinf.mul(&o.vinf), lie_t: self.lie_t.mul(&o.lie_t), lie_u: self.lie_u.mul(&o.lie_u) }
    }

    pub fn is_identity(&self) -> bool {
        [&self.l, &self.vinf, &self.lie_t, &self.lie_u].iter().all(|m| m.is_square() && m.is_identity())
    }

    pub fn g_map(&self) -> KMatrix {
        self.lie_t.direct_sum(&self.lie_u)
    }
}

/// The idempotent of k[t]/(chart) supported on the zeros of g (g | chart).
fn idempotent(chart: &KPoly, g: &KPoly, proto: &NfElem) -> KPoly {
    if g.deg0() == 0 {
        return KPoly::zero(proto);
    }
    if g.deg0() == chart.deg0() {
        return KPoly::one(proto);
    }
    crt(&[(g.clone(), KPoly::one(proto)), (chart.exact_div(g), KPoly::zero(proto))], proto)
}

/// Cycle pullback on L⊗k: ρ′ ↦ (x ↦ e_x·ρ′(f(x))). Places are squarefree but
/// not necessarily prime, so multiplicities are distributed with idempotents.
fn l_pull(f: &RationalMap, gs: &CompGeom, gd: &CompGeom) -> KMatrix {
    let proto = &gs.proto;
    let pulled_places: Vec<_> = gd.zred.iter().map(|bd| f.pullback_place(&bd.place)).collect();
    // weight[i][k]: the multiplicity function of f*(P′_k) on the i-th source place
    let weight: Vec<Vec<KPoly>> = gs
        .zred
        .iter()
        .map(|b| {
            pulled_places
                .iter()
                .map(|d| {
                    d.terms().iter().fold(KPoly::zero(proto), |acc, (q, e)| {
                        let g = match (&q.kind, &b.place.kind) {
                            (PlaceKind::Finite(qp), PlaceKind::Finite(_)) => qp.gcd(&b.chart),
                            (PlaceKind::Infinity, PlaceKind::Infinity) => b.chart.clone(),
                            _ => KPoly::one(proto),
                        };
                        acc.add(&idempotent(&b.chart, &g, proto).scale(&proto.from_int_like(*e as i64)))
                    })
                })
                .collect()
        })
        .collect();
    let mut cols = Vec::with_capacity(gd.l_dim);
    for j in 0..gd.l_dim {
        let rho = gd.l_full(&gd.unit(gd.l_dim, j));
        let pulled: Vec<KPoly> = gs
            .zred
            .iter()
            .zip(&weight)
            .map(|(b, w)| {
                let mut acc = KPoly::zero(proto);
                for (k, wk) in w.iter().enumerate() {
                    if wk.is_zero() {
                        continue;
                    }
                    let h = pull_function(f, &gd.zred[k].jet_as_function(&rho[k]));
                    acc = acc.add(&b.jet(&h).expect("regular at the preimage").mul(wk));
                }
                acc.rem(&b.chart)
            })
            .collect();
        cols.push(gs.l_coords(&pulled));
    }
    KMatrix::from_cols(&cols, gs.l_dim, proto)
}

fn t_pull(f: &RationalMap, gs: &CompGeom, gd: &CompGeom) -> Result<KMatrix, LaumonError> {
    let mut m = KMatrix::zeros(gs.t_dim, gd.t_dim, &gs.proto);
    for i in 0..gs.t_dim {
        let h = push_differential(f, &gs.omega(i))?;
        let c = gd.omega_coords(&h).ok_or_else(|| LaumonError::NotAMorphism("trace of a log form acquires poles off Y′_red".into()))?;
        for (j, x) in c.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

fn integer(x: &NfElem) -> Option<i64> {
    x.as_rational().filter(|q| q.is_integer()).and_then(|q| q.to_integer().to_i64())
}

fn unit_power(f: &KRatFunc, e: i64) -> KRatFunc {
    let base = if e < 0 { f.inv().expect("nonzero") } else { f.clone() };
    base.pow(e.unsigned_abs() as u32)
}

/// Checks the u_et square: pulling back a witness agrees with the pulled-back cycle
/// in (O/I_Y)^× up to k^× and torsion. Returns the largest torsion order used.
fn check_et_square(f: &CurveMap, mor: &LmMorphism, src: &Layout, ws: &[UnitClass], wd: &[UnitClass], cap: u32) -> Result<u32, LaumonError> {
    let mut worst = 1;
    for (j, w) in wd.iter().enumerate() {
        for (c, fc) in f.maps.iter().enumerate() {
            if fc.dst != w.comp {
                continue;
            }
            let gs = &src.comps[c];
            let pulled = pull_function(&modcoh::single(fc), &w.func);
            let mut expected = KRatFunc::constant(gs.proto.one_like());
            for i in 0..gs.l_dim {
                let e = integer(mor.l.get(src.l.0[c] + i, j)).ok_or_else(|| LaumonError::TauSquare("non-integral cycle pullback".into()))?;
                expected = expected.mul(&unit_power(&ws[src.l.0[c] + i].func, e));
            }
            match equal_up_to_torsion(&pulled, &expected, &gs.triple.y, &gs.proto, cap) {
                Some(m) => worst = worst.max(m),
                None => return Err(LaumonError::TauSquare(format!("unit class {} on component {}", j, c))),
            }
        }
    }
    Ok(worst)
}

/// LM(f) for a morphism f : src → dst, with both τ-squares checked.
pub fn lm_pull(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<LmMorphism, LaumonError> {
    lm_pull_capped(f, src, dst, TORSION_BOUND)
}

/// `lm_pull` with an explicit bound on the torsion allowed in the étale square.
pub fn lm_pull_capped(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple, torsion_cap: u32) -> Result<LmMorphism, LaumonError> {
    if let Some(v) = bar_violations(f, src, dst)?.first() {
        return Err(LaumonError::NotAMorphism(format!("condition ({}) {}", v.condition, v.inequality)));
    }
    let proto = modcoh::proto_of(src, Some(f.maps[0].proto()));
    let (ls, ld) = (Layout::new(src, &proto)?, Layout::new(dst, &proto)?);
    let mut mor = LmMorphism {
        l: KMatrix::zeros(ls.l.1, ld.l.1, &proto),
        vinf: KMatrix::zeros(ls.v.1, ld.v.1, &proto),
        lie_t: KMatrix::zeros(ls.t.1, ld.t.1, &proto),
        lie_u: KMatrix::zeros(ls.u.1, ld.u.1, &proto),
    };
    for (c, fc) in f.maps.iter().enumerate() {
        let d = fc.dst;
        let fs = modcoh::single(fc);
        let (gs, gd) = (&ls.comps[c], &ld.comps[d]);
        mor.l.set_block(ls.l.0[c], ld.l.0[d], &l_pull(&fs, gs, gd));
        mor.vinf.set_block(ls.v.0[c], ld.v.0[d], &modcoh::v_pull(&fs, &gs.triple.z, &gd.triple.z)?);
        mor.lie_t.set_block(ls.t.0[c], ld.t.0[d], &t_pull(&fs, gs, gd)?);
        mor.lie_u.set_block(ls.u.0[c], ld.u.0[d], &modcoh::u_pull(&fs, &gs.triple.y, &gd.triple.y)?);
    }
    let (ms, md) = (lm_construct_over(src, &proto)?, lm_construct_over(dst, &proto)?);
    if ms.u_inf.mul(&mor.vinf) != mor.g_map().mul(&md.u_inf) {
        return Err(LaumonError::TauSquare("u_inf".into()));
    }
    if ms.et_uni.mul(&mor.l) != mor.lie_u.mul(&md.et_uni) {
        return Err(LaumonError::TauSquare("unipotent part of u_et".into()));
    }
    if let (UEt::Witnesses(ws), UEt::Witnesses(wd)) = (&ms.u_et, &md.u_et) {
        check_et_square(f, &mor, &ls, ws, wd, torsion_cap)?;
    }
    Ok(mor)
}
