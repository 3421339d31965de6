use std::fmt;

use crate::exactfield::{homogeneous_compose, KPoly, KRatFunc, NfElem, Scalar};

use super::divisor::{Divisor, Place, PlaceKind};
use super::GeomError;

/// t′ = num(t)/den(t) from component `src` to component `dst`.
#[derive(Clone, PartialEq)]
pub struct RationalMap {
    num: KPoly,
    den: KPoly,
    pub src: usize,
    pub dst: usize,
}

impl RationalMap {
    pub fn new(num: KPoly, den: KPoly, src: usize, dst: usize) -> Result<Self, GeomError> {
        if den.is_zero() {
            return Err(GeomError::ConstantMap);
        }
        let f = KRatFunc::new(num, den).map_err(|_| GeomError::ConstantMap)?;
        if f.num().deg0() == 0 && f.den().deg0() == 0 {
            return Err(GeomError::ConstantMap);
        }
        Ok(RationalMap { num: f.num().clone(), den: f.den().clone(), src, dst })
    }

    pub fn identity(proto: &NfElem, comp: usize) -> Self {
        RationalMap { num: KPoly::var(proto), den: KPoly::one(proto), src: comp, dst: comp }
    }

    /// t ↦ a·t + b
    pub fn affine(a: &NfElem, b: &NfElem) -> Self {
        let num = KPoly::new(vec![b.clone(), a.clone()], a.zero_like());
        RationalMap::new(num, KPoly::one(a), 0, 0).expect("a ≠ 0")
    }

    pub fn num(&self) -> &KPoly {
        &self.num
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn proto(&self) -> &NfElem {
        self.num.proto()
    }

    pub fn as_ratfunc(&self) -> KRatFunc {
        KRatFunc::new(self.num.clone(), self.den.clone()).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn is_identity(&self) -> bool {
        self.den.degree() == Some(0) && self.num == KPoly::var(self.proto())
    }

    /// self ∘ g, i.e. t ↦ self(g(t)).
    pub fn compose(&self, g: &RationalMap) -> RationalMap {
        assert_eq!(g.dst, self.src, "components do not compose");
        let f = self.as_ratfunc().compose(&g.num, &g.den).expect("nonconstant composite");
        RationalMap { num: f.num().clone(), den: f.den().clone(), src: g.src, dst: self.dst }
    }

    /// f*(P) for a single place of the target component.
    pub fn pullback_place(&self, p: &Place) -> Divisor {
        let deg_f = self.degree();
        let mut terms: Vec<(Place, u32)> = Vec::new();
        match &p.kind {
            PlaceKind::Finite(poly) => {
                let pt = homogeneous_compose(poly, &self.num, &self.den);
                for (s, m) in pt.squarefree_decomposition() {
                    terms.push((Place::finite(self.src, s), m as u32));
                }
                let at_inf = poly.deg0() * deg_f - pt.deg0();
                if at_inf > 0 {
                    terms.push((Place::infinity(self.src), at_inf as u32));
                }
            }
            PlaceKind::Infinity => {
                for (s, m) in self.den.squarefree_decomposition() {
                    terms.push((Place::finite(self.src, s), m as u32));
                }
                let excess = self.num.deg0().saturating_sub(self.den.deg0());
                if excess > 0 {
                    terms.push((Place::infinity(self.src), excess as u32));
                }
            }
        }
        Divisor::from_terms(terms).expect("pullback places are monic squarefree")
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)?;
        if self.src != 0 || self.dst != 0 {
            write!(f, " [{}->{}]", self.src, self.dst)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A finite morphism between disjoint unions of ℙ¹: one rational map per source component.
#[derive(Clone, PartialEq, Debug)]
pub struct CurveMap {
    pub src_comps: usize,
    pub dst_comps: usize,
    pub maps: Vec<RationalMap>,
}

impl CurveMap {
    pub fn single(f: RationalMap) -> Self {
        CurveMap { src_comps: 1, dst_comps: 1, maps: vec![f] }
    }

    pub fn new(src_comps: usize, dst_comps: usize, maps: Vec<RationalMap>) -> Result<Self, GeomError> {
        if maps.len() != src_comps {
            return Err(GeomError::BadComponent(format!("{} maps for {} source components", maps.len(), src_comps)));
        }
        for (c, m) in maps.iter().enumerate() {
            if m.src != c || m.dst >= dst_comps {
                return Err(GeomError::BadComponent(format!("map {} has components {}->{}", c, m.src, m.dst)));
            }
        }
        Ok(CurveMap { src_comps, dst_comps, maps })
    }

    pub fn identity(proto: &NfElem, comps: usize) -> Self {
        CurveMap { src_comps: comps, dst_comps: comps, maps: (0..comps).map(|c| RationalMap::identity(proto, c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.src_comps == self.dst_comps && self.maps.iter().enumerate().all(|(c, m)| m.dst == c && m.is_identity())
    }

    /// self ∘ g
    pub fn compose(&self, g: &CurveMap) -> CurveMap {
        assert_eq!(g.dst_comps, self.src_comps);
        let maps = g.maps.iter().map(|gm| self.maps[gm.dst].compose(gm)).collect();
        CurveMap { src_comps: g.src_comps, dst_comps: self.dst_comps, maps }
    }

    pub fn pullback(&self, d: &Divisor) -> Divisor {
        let mut acc = Divisor::zero();
        for m in &self.maps {
            for (p, mult) in d.terms() {
                if p.comp == m.dst {
                    acc = acc.add(&m.pullback_place(p).scale(*mult));
                }
            }
        }
        acc
    }
}

impl fmt::Display for CurveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maps.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}
