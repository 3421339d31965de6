//! Deterministic instance corpus: triples over a fixed place pool, a fixed map
//! pool, minimal-pullback morphisms between them and a few disjoint unions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use modmot::exactfield::{KPoly, NfElem, NumberField};
use modmot::projline::{is_morphism_bar, parse_poly, CurveMap, Divisor, GeomError, ModulusTriple, Place, RationalMap};

use crate::config::SuiteConfig;

/// Bumped whenever the place pool, the map pool or the sampling changes.
pub const CORPUS_VERSION: &str = "pool-1:t,t-1,t+1,t^2-2,inf;maps-1:at,t-1,t^2,composites";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("bad field spec {0:?}")]
    Field(String),
    #[error("bad multiplier {0:?}: {1}")]
    Multiplier(String, String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub label: String,
    pub map: CurveMap,
    pub src: ModulusTriple,
    pub dst: ModulusTriple,
}

/// f : A → B followed by g : B → C.
#[derive(Clone, Debug)]
pub struct ComposablePair {
    pub f: Morphism,
    pub g: Morphism,
}

#[derive(Clone, Debug)]
pub struct Union {
    pub parts: Vec<ModulusTriple>,
    pub total: ModulusTriple,
    /// parts[i] → total, the i-th summand inclusion
    pub inclusions: Vec<CurveMap>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub version: &'static str,
    pub field_spec: String,
    pub field: NumberField,
    pub triples: Vec<ModulusTriple>,
    pub morphisms: Vec<Morphism>,
    pub pairs: Vec<ComposablePair>,
    pub unions: Vec<Union>,
}

impl Corpus {
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn field_name(&self) -> String {
        field_name(&self.field_spec)
    }
}

pub fn field_name(spec: &str) -> String {
    match NumberField::parse(spec) {
        Ok(k) if k.is_rationals() => "Q".into(),
        _ => format!("Q[g]/({})", spec),
    }
}

fn place_pool(k: &NumberField) -> Vec<Place> {
    let poly = |s: &str| parse_poly(k, s).expect("pool polynomial");
    vec![
        Place::finite(0, poly("t")),
        Place::finite(0, poly("t-1")),
        Place::finite(0, poly("t+1")),
        Place::finite(0, poly("t^2-2")),
        Place::infinity(0),
    ]
}

/// All (Y, Z) with disjoint supports in the pool and deg Y + deg Z ≤ cap.
fn enumerate_triples(pool: &[Place], cap: usize) -> Vec<ModulusTriple> {
    fn rec(pool: &[Place], i: usize, left: usize, y: &mut Vec<(Place, u32)>, z: &mut Vec<(Place, u32)>, out: &mut Vec<ModulusTriple>) {
        if i == pool.len() {
            let y = Divisor::from_terms(y.clone()).expect("pool places");
            let z = Divisor::from_terms(z.clone()).expect("pool places");
            out.push(ModulusTriple::p1(y, z).expect("disjoint by construction"));
            return;
        }
        rec(pool, i + 1, left, y, z, out);
        let d = pool[i].degree();
        let mut m = 1;
        while m * d <= left {
            y.push((pool[i].clone(), m as u32));
            rec(pool, i + 1, left - m * d, y, z, out);
            y.pop();
            z.push((pool[i].clone(), m as u32));
            rec(pool, i + 1, left - m * d, y, z, out);
            z.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(pool, 0, cap, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort_by_key(|t| t.y.degree() + t.z.degree());
    out
}

pub fn parse_multipliers(k: &NumberField, given: &[String]) -> Result<Vec<NfElem>, CorpusError> {
    if given.is_empty() {
        let mut out = vec![k.from_int(2)];
        if !k.is_rationals() {
            out.push(k.generator());
        }
        return Ok(out);
    }
    given
        .iter()
        .map(|s| {
            let p = parse_poly(k, s).map_err(|e| CorpusError::Multiplier(s.clone(), e.to_string()))?;
            if !p.is_constant() || p.is_zero() {
                return Err(CorpusError::Multiplier(s.clone(), "expected a nonzero constant".into()));
            }
            Ok(p.coeff(0))
        })
        .collect()
}

/// The base maps t ↦ at, t ↦ t − 1 and t ↦ t², as (label, map).
pub fn base_maps(k: &NumberField, mults: &[NfElem]) -> Vec<(String, RationalMap)> {
    let zero = k.zero();
    let mut out: Vec<(String, RationalMap)> = mults.iter().map(|a| (format!("t->({})t", a), RationalMap::affine(a, &zero))).collect();
    out.push(("t->t-1".into(), RationalMap::affine(&k.one(), &k.from_int(-1))));
    let sq = RationalMap::new(KPoly::monomial(k.one(), 2), KPoly::one(&zero), 0, 0).expect("nonconstant");
    out.push(("t->t^2".into(), sq));
    out
}

/// Identity, the base maps and all their two-fold composites, without repeats.
pub fn map_pool(k: &NumberField, mults: &[NfElem]) -> Vec<(String, RationalMap)> {
    let base = base_maps(k, mults);
    let mut out = vec![("id".to_string(), RationalMap::identity(&k.zero(), 0))];
    let mut push = |label: String, m: RationalMap| {
        if !out.iter().any(|(_, x)| x.num() == m.num() && x.den() == m.den()) {
            out.push((label, m));
        }
    };
    for (l, m) in &base {
        push(l.clone(), m.clone());
    }
    for (lg, g) in &base {
        for (lf, f) in &base {
            push(format!("({})o({})", lg, lf), g.compose(f));
        }
    }
    out
}

/// The smallest source making f a morphism onto dst: Y = f*Y′ and
/// Z = (f*Z′)_red + f*(Z′ − Z′_red).
pub fn minimal_source(f: &CurveMap, dst: &ModulusTriple) -> Result<ModulusTriple, GeomError> {
    let y = f.pullback(&dst.y);
    let zn = dst.z.checked_sub(&dst.z.red()).expect("Z >= Z_red");
    let z = f.pullback(&dst.z).red().add(&f.pullback(&zn));
    ModulusTriple::new(f.src_comps, y, z)
}

fn degree(t: &ModulusTriple) -> usize {
    t.y.degree() + t.z.degree()
}

/// Candidate morphisms into dst along f: the minimal source, and the same with
/// Y reduced when that differs.
fn morphisms_into(label: &str, f: &CurveMap, dst: &ModulusTriple, cap: usize) -> Vec<Morphism> {
    let Ok(src) = minimal_source(f, dst) else { return Vec::new() };
    let mut out = Vec::new();
    let mut sources = vec![src.clone()];
    if !src.y.is_reduced() {
        if let Ok(r) = ModulusTriple::new(src.comps, src.y.red(), src.z.clone()) {
            sources.push(r);
        }
    }
    for s in sources {
        if degree(&s) <= cap && is_morphism_bar(f, &s, dst) {
            out.push(Morphism { label: label.to_string(), map: f.clone(), src: s, dst: dst.clone() });
        }
    }
    out
}

fn inclusion(k: &NumberField, comps: usize, target: usize) -> CurveMap {
    let m = RationalMap::new(KPoly::var(&k.zero()), KPoly::one(&k.zero()), 0, target).expect("identity");
    CurveMap::new(1, comps, vec![m]).expect("single source component")
}

fn union_of(k: &NumberField, parts: Vec<ModulusTriple>) -> Union {
    let total = parts[1..].iter().fold(parts[0].clone(), |acc, p| acc.disjoint_union(p));
    let inclusions = (0..parts.len()).map(|i| inclusion(k, parts.len(), i)).collect();
    Union { parts, total, inclusions }
}

/// The cyclic relabeling T₀ ⊔ … ⊔ T_{r−1} → T₁ ⊔ … ⊔ T₀, sending component c to c − 1.
fn rotation(k: &NumberField, u: &Union) -> Morphism {
    let r = u.parts.len();
    let maps = (0..r)
        .map(|c| RationalMap::new(KPoly::var(&k.zero()), KPoly::one(&k.zero()), c, (c + r - 1) % r).expect("identity"))
        .collect();
    let map = CurveMap::new(r, r, maps).expect("components");
    let mut rot = u.parts.clone();
    rot.rotate_left(1);
    let dst = union_of(k, rot).total;
    Morphism { label: format!("rotate{}", r), map, src: u.total.clone(), dst }
}

pub fn corpus_generate(cfg: &SuiteConfig, field_spec: &str) -> Result<Corpus, CorpusError> {
    let k = NumberField::parse(field_spec).map_err(|_| CorpusError::Field(field_spec.to_string()))?;
    let mut corpus = Corpus { version: CORPUS_VERSION, field_spec: field_spec.to_string(), field: k.clone(), triples: Vec::new(), morphisms: Vec::new(), pairs: Vec::new(), unions: Vec::new() };
    if cfg.max_deg == 0 || cfg.max_comps == 0 {
        return Ok(corpus);
    }
    let mults = parse_multipliers(&k, &cfg.multipliers)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let triples = enumerate_triples(&place_pool(&k), cfg.max_deg);

    // Rejection sampling over a seeded shuffle of (target, map) keys: pulling
    // back every candidate up front is far more work than the sample needs.
    let pool = map_pool(&k, &mults);
    let mut keys: Vec<(usize, usize)> = (0..triples.len())
        .flat_map(|t| (0..pool.len()).map(move |m| (t, m)))
        .filter(|&(t, m)| pool[m].1.degree() * triples[t].y.degree() <= cfg.max_deg)
        .collect();
    keys.shuffle(&mut rng);
    let mut chosen: Vec<((usize, usize), Vec<Morphism>)> = Vec::new();
    let mut count = 0;
    for key @ (t, m) in keys {
        if count >= cfg.morphisms {
            break;
        }
        let (label, f) = &pool[m];
        let mut found = morphisms_into(label, &CurveMap::single(f.clone()), &triples[t], cfg.max_deg);
        found.truncate(cfg.morphisms - count);
        if !found.is_empty() {
            count += found.len();
            chosen.push((key, found));
        }
    }
    chosen.sort_by_key(|(key, _)| *key);
    let mut morphisms: Vec<Morphism> = chosen.into_iter().flat_map(|(_, m)| m).collect();

    let base: Vec<(String, RationalMap)> = std::iter::once(("id".to_string(), RationalMap::identity(&k.zero(), 0))).chain(base_maps(&k, &mults)).collect();
    let mut pair_keys: Vec<(usize, usize)> = (0..morphisms.len()).flat_map(|g| (0..base.len()).map(move |f| (g, f))).collect();
    pair_keys.shuffle(&mut rng);
    let mut pairs: Vec<((usize, usize), Vec<ComposablePair>)> = Vec::new();
    let mut count = 0;
    for key @ (g, f) in pair_keys {
        if count >= cfg.pairs {
            break;
        }
        let (label, fm) = &base[f];
        let g = &morphisms[g];
        let mut found: Vec<ComposablePair> =
            morphisms_into(label, &CurveMap::single(fm.clone()), &g.src, cfg.max_deg).into_iter().map(|fm| ComposablePair { f: fm, g: g.clone() }).collect();
        found.truncate(cfg.pairs - count);
        if !found.is_empty() {
            count += found.len();
            pairs.push((key, found));
        }
    }
    pairs.sort_by_key(|(key, _)| *key);
    let pairs: Vec<ComposablePair> = pairs.into_iter().flat_map(|(_, p)| p).collect();

    let mut unions = Vec::new();
    if cfg.max_comps >= 2 && triples.len() >= 2 {
        for _ in 0..cfg.unions {
            let r = rng.gen_range(2..=cfg.max_comps);
            let parts: Vec<ModulusTriple> = (0..r).map(|_| triples[rng.gen_range(0..triples.len())].clone()).collect();
            unions.push(union_of(&k, parts));
        }
    }
    morphisms.extend(unions.iter().map(|u| rotation(&k, u)));

    corpus.triples = triples;
    corpus.morphisms = morphisms;
    corpus.pairs = pairs;
    corpus.unions = unions;
    Ok(corpus)
}

/// A short identity for a morphism, used in witnesses.
pub fn describe(m: &Morphism) -> String {
    format!("{} [{}] : {} -> {}", m.label, m.map, m.src, m.dst)
}
