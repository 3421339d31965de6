use std::cmp::Ordering;
use std::fmt;

use crate::exactfield::{KPoly, NfElem, NumberField, Scalar};

use super::GeomError;

#[derive(Clone, PartialEq, Eq)]
pub enum PlaceKind {
    /// monic squarefree polynomial; the place is its zero set
    Finite(KPoly),
    Infinity,
}

/// A reduced effective divisor supported at one "place": either the zeros of a
/// squarefree polynomial or the point at infinity of one component.
#[derive(Clone, PartialEq, Eq)]
pub struct Place {
    pub comp: usize,
    pub kind: PlaceKind,
}

impl Place {
    pub fn finite(comp: usize, p: KPoly) -> Self {
        Place { comp, kind: PlaceKind::Finite(p) }
    }

    pub fn infinity(comp: usize) -> Self {
        Place { comp, kind: PlaceKind::Infinity }
    }

    /// The rational point t = a.
    pub fn point(comp: usize, a: &NfElem) -> Self {
        Place::finite(comp, KPoly::linear(a))
    }

    pub fn degree(&self) -> usize {
        match &self.kind {
            PlaceKind::Finite(p) => p.deg0(),
            PlaceKind::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self.kind, PlaceKind::Infinity)
    }

    pub fn poly(&self) -> Option<&KPoly> {
        match &self.kind {
            PlaceKind::Finite(p) => Some(p),
            PlaceKind::Infinity => None,
        }
    }

    /// Some(a) when the place is the single rational point t = a.
    pub fn rational_point(&self) -> Option<NfElem> {
        match &self.kind {
            PlaceKind::Finite(p) if p.deg0() == 1 => Some(p.coeff(0).neg()),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        let base = match &self.kind {
            PlaceKind::Finite(p) => format!("({})", p),
            PlaceKind::Infinity => "inf".to_string(),
        };
        if self.comp == 0 {
            base
        } else {
            format!("{}@{}", base, self.comp)
        }
    }
}

impl Ord for Place {
    fn cmp(&self, o: &Self) -> Ordering {
        self.comp.cmp(&o.comp).then_with(|| match (&self.kind, &o.kind) {
            (PlaceKind::Infinity, PlaceKind::Infinity) => Ordering::Equal,
            (PlaceKind::Finite(_), PlaceKind::Infinity) => Ordering::Less,
            (PlaceKind::Infinity, PlaceKind::Finite(_)) => Ordering::Greater,
            (PlaceKind::Finite(a), PlaceKind::Finite(b)) => a.deg0().cmp(&b.deg0()).then_with(|| {
                for i in (0..a.deg0()).rev() {
                    let c = a.coeff(i).coeffs().cmp(b.coeff(i).coeffs());
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        })
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Pairwise coprime monic squarefree polynomials whose products recover every input.
pub fn gcd_free_basis(inputs: &[KPoly]) -> Vec<KPoly> {
    let mut basis: Vec<KPoly> = Vec::new();
    for p in inputs {
        let mut rest = p.monic();
        let mut next = Vec::with_capacity(basis.len() + 2);
        for b in basis.drain(..) {
            if rest.deg0() == 0 {
                next.push(b);
                continue;
            }
            let g = b.gcd(&rest);
            if g.deg0() == 0 {
                next.push(b);
                continue;
            }
            let cof = b.exact_div(&g);
            if cof.deg0() > 0 {
                next.push(cof);
            }
            rest = rest.exact_div(&g);
            next.push(g);
        }
        if rest.deg0() > 0 {
            next.push(rest.monic());
        }
        basis = next;
    }
    basis.sort_by(|a, b| Place::finite(0, a.clone()).cmp(&Place::finite(0, b.clone())));
    basis
}

/// Effective divisor in gcd-free form. The representation is not unique
/// (V(t²−1) and (1) + (−1) are the same divisor), so equality refines first.
#[derive(Clone, Default)]
pub struct Divisor {
    terms: Vec<(Place, u32)>,
}

impl PartialEq for Divisor {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms || self.refine(o).iter().all(|(_, a, b)| a == b)
    }
}

impl Eq for Divisor {}

impl Divisor {
    pub fn zero() -> Self {
        Divisor { terms: Vec::new() }
    }

    /// Canonicalizes arbitrary terms: places are checked, then refined to a
    /// common gcd-free basis per component with multiplicities added.
    pub fn from_terms(terms: Vec<(Place, u32)>) -> Result<Self, GeomError> {
        for (p, _) in &terms {
            if let Some(poly) = p.poly() {
                if poly.deg0() == 0 {
                    return Err(GeomError::ConstantPlace);
                }
                if !poly.is_monic() {
                    return Err(GeomError::NotMonic(format!("{}", poly)));
                }
                if !poly.is_squarefree() {
                    return Err(GeomError::NotSquarefree(format!("{}", poly)));
                }
            }
        }
        let mut comps: Vec<usize> = terms.iter().map(|t| t.0.comp).collect();
        comps.sort();
        comps.dedup();
        let mut out = Vec::new();
        for c in comps {
            let here: Vec<&(Place, u32)> = terms.iter().filter(|t| t.0.comp == c && t.1 > 0).collect();
            let polys: Vec<KPoly> = here.iter().filter_map(|t| t.0.poly().cloned()).collect();
            for b in gcd_free_basis(&polys) {
                let m: u32 = here.iter().filter(|t| t.0.poly().map_or(false, |p| b.divides(p))).map(|t| t.1).sum();
                if m > 0 {
                    out.push((Place::finite(c, b), m));
                }
            }
            let mi: u32 = here.iter().filter(|t| t.0.is_infinity()).map(|t| t.1).sum();
            if mi > 0 {
                out.push((Place::infinity(c), mi));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Divisor { terms: out })
    }

    pub fn single(p: Place, m: u32) -> Self {
        Divisor::from_terms(vec![(p, m)]).expect("valid place")
    }

    pub fn terms(&self) -> &[(Place, u32)] {
        &self.terms
    }

    pub fn places(&self) -> Vec<Place> {
        self.terms.iter().map(|t| t.0.clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(p, m)| p.degree() * *m as usize).sum()
    }

    pub fn degree_on(&self, comp: usize) -> usize {
        self.on_comp(comp).degree()
    }

    pub fn red(&self) -> Self {
        Divisor { terms: self.terms.iter().map(|(p, _)| (p.clone(), 1)).collect() }
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.iter().all(|t| t.1 == 1)
    }

    pub fn on_comp(&self, comp: usize) -> Self {
        Divisor { terms: self.terms.iter().filter(|t| t.0.comp == comp).cloned().collect() }
    }

    pub fn max_comp(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.0.comp).max()
    }

    /// Moves every term to another component index.
    pub fn relabel(&self, comp: usize) -> Self {
        let mut terms: Vec<(Place, u32)> =
            self.terms.iter().map(|(p, m)| (Place { comp, kind: p.kind.clone() }, *m)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Divisor::from_terms(terms).expect("relabeling keeps validity")
    }

    pub fn finite_poly(&self, comp: usize) -> Option<KPoly> {
        let mut acc: Option<KPoly> = None;
        for (p, m) in &self.terms {
            if p.comp != comp {
                continue;
            }
            if let Some(poly) = p.poly() {
                let f = poly.pow(*m as usize);
                acc = Some(match acc {
                    None => f,
                    Some(a) => a.mul(&f),
                });
            }
        }
        acc
    }

    pub fn mult_at_infinity(&self, comp: usize) -> u32 {
        self.terms.iter().find(|t| t.0.comp == comp && t.0.is_infinity()).map_or(0, |t| t.1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Divisor::from_terms(t).expect("sum of valid divisors")
    }

    pub fn scale(&self, k: u32) -> Self {
        Divisor { terms: self.terms.iter().filter(|_| k > 0).map(|(p, m)| (p.clone(), m * k)).collect() }
    }

    /// Common refinement: places of a gcd-free basis for both divisors with both multiplicities.
    pub fn refine(&self, o: &Self) -> Vec<(Place, u32, u32)> {
        let mut comps: Vec<usize> = self.terms.iter().chain(o.terms.iter()).map(|t| t.0.comp).collect();
        comps.sort();
        comps.dedup();
        let mut out = Vec::new();
        for c in comps {
            let polys: Vec<KPoly> = self.terms.iter().chain(o.terms.iter()).filter(|t| t.0.comp == c).filter_map(|t| t.0.poly().cloned()).collect();
            let mult = |d: &Divisor, b: &KPoly| -> u32 {
                d.terms.iter().filter(|t| t.0.comp == c && t.0.poly().map_or(false, |p| b.divides(p))).map(|t| t.1).sum()
            };
            for b in gcd_free_basis(&polys) {
                let (x, y) = (mult(self, &b), mult(o, &b));
                out.push((Place::finite(c, b), x, y));
            }
            let (x, y) = (self.mult_at_infinity(c), o.mult_at_infinity(c));
            if x + y > 0 {
                out.push((Place::infinity(c), x, y));
            }
        }
        out
    }

    pub fn leq(&self, o: &Self) -> bool {
        self.refine(o).iter().all(|(_, a, b)| a <= b)
    }

    /// self - o when o ≤ self.
    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        let r = self.refine(o);
        if r.iter().any(|(_, a, b)| a < b) {
            return None;
        }
        Some(Divisor::from_terms(r.into_iter().filter(|t| t.1 > t.2).map(|(p, a, b)| (p, a - b)).collect()).expect("valid"))
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.refine(o).iter().all(|(_, a, b)| *a == 0 || *b == 0)
    }

    pub fn field(&self) -> Option<NumberField> {
        self.terms.iter().find_map(|t| t.0.poly().map(|p| p.proto().field().clone()))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, m)| format!("{}*{}", m, p.label())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
