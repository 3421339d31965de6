//! Finite quiver representations over ℚ, their intertwiner algebras End(T|_E),
//! the dual coalgebras with their comodules, directed systems over nested
//! subquivers, and the representation of the quiver of the P_n = (ℙ¹, n[∞], ∅).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exactfield::{restrict_scalars, FieldError, NfElem, NumberField, QMatrix, Scalar, Q};
use crate::modcoh::{hdr_compute_over, hdr_pull_graded, ModcohError};
use crate::projline::{parse_divisor, CurveMap, ModulusTriple, RationalMap};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NoriError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("edge {label}: matrix is {got:?}, expected {want:?}")]
    ShapeMismatch { label: String, got: (usize, usize), want: (usize, usize) },
    #[error("duplicate edge label {0}")]
    DuplicateLabel(String),
    #[error("axiom violated: {0}")]
    AxiomViolation(String),
    #[error("empty multiplier list or zero multiplier")]
    BadMultipliers,
    #[error(transparent)]
    Modcoh(#[from] ModcohError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Whether an edge p → q acts T(p) → T(q) or T(q) → T(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub label: String,
    pub matrix: QMatrix,
}

#[derive(Clone, Debug)]
pub struct QuiverRep {
    pub variance: Variance,
    pub vertices: Vec<(String, usize)>,
    pub edges: Vec<Edge>,
}

fn qzero() -> Q {
    Q::from_integer(0.into())
}

impl QuiverRep {
    pub fn new(variance: Variance, vertices: Vec<(String, usize)>, edges: Vec<Edge>) -> Result<Self, NoriError> {
        let rep = QuiverRep { variance, vertices, edges };
        let mut seen = std::collections::BTreeSet::new();
        for e in &rep.edges {
            if !seen.insert(e.label.clone()) {
                return Err(NoriError::DuplicateLabel(e.label.clone()));
            }
            let (a, b) = rep.action(e)?;
            let want = (rep.dim(&b)?, rep.dim(&a)?);
            let got = (e.matrix.rows(), e.matrix.cols());
            if got != want {
                return Err(NoriError::ShapeMismatch { label: e.label.clone(), got, want });
            }
        }
        Ok(rep)
    }

    pub fn dim(&self, v: &str) -> Result<usize, NoriError> {
        self.vertices.iter().find(|x| x.0 == v).map(|x| x.1).ok_or_else(|| NoriError::UnknownVertex(v.to_string()))
    }

    /// (domain vertex, codomain vertex) of the linear map attached to an edge.
    fn action(&self, e: &Edge) -> Result<(String, String), NoriError> {
        self.dim(&e.src)?;
        self.dim(&e.dst)?;
        Ok(match self.variance {
            Variance::Covariant => (e.src.clone(), e.dst.clone()),
            Variance::Contravariant => (e.dst.clone(), e.src.clone()),
        })
    }

    /// Same representation with T(v) re-based by P_v (new coordinates x′ = P_v x).
    pub fn rebase(&self, change: &BTreeMap<String, QMatrix>) -> Result<QuiverRep, NoriError> {
        let mut edges = Vec::new();
        for e in &self.edges {
            let (a, b) = self.action(e)?;
            let pa = change[&a].inverse()?;
            edges.push(Edge { matrix: change[&b].mul(&e.matrix).mul(&pa), ..e.clone() });
        }
        QuiverRep::new(self.variance, self.vertices.clone(), edges)
    }
}

/// End(T|_E) with an echelonized basis of block tuples.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub vertices: Vec<String>,
    pub dims: Vec<usize>,
    /// Each basis element as one block per vertex of E.
    pub basis: Vec<Vec<QMatrix>>,
    pivots: Vec<usize>,
    flat: Vec<Vec<Q>>,
    /// structure[i][j][k]: b_i·b_j = Σ_k structure[i][j][k]·b_k
    pub structure: Vec<Vec<Vec<Q>>>,
    pub unit: Vec<Q>,
}

fn flatten(blocks: &[QMatrix]) -> Vec<Q> {
    blocks.iter().flat_map(|b| b.entries().to_vec()).collect()
}

fn unflatten(x: &[Q], dims: &[usize]) -> Vec<QMatrix> {
    let mut out = Vec::with_capacity(dims.len());
    let mut k = 0;
    for &d in dims {
        out.push(QMatrix::from_fn(d, d, &qzero(), |i, j| x[k + i * d + j].clone()));
        k += d * d;
    }
    out
}

/// Columns of `basis` restricted to those satisfying e_b·A = A·e_a.
fn intersect(basis: Vec<Vec<Q>>, constraint: impl Fn(&[Q]) -> Vec<Q>) -> Vec<Vec<Q>> {
    if basis.is_empty() {
        return basis;
    }
    let images: Vec<Vec<Q>> = basis.iter().map(|x| constraint(x)).collect();
    let rows = images[0].len();
    if rows == 0 {
        return basis;
    }
    let m = QMatrix::from_cols(&images, rows, &qzero());
    let ker = m.kernel();
    (0..ker.cols())
        .map(|c| {
            let coeffs = ker.col(c);
            let mut acc = vec![qzero(); basis[0].len()];
            for (x, a) in basis.iter().zip(&coeffs) {
                if a.is_zero() {
                    continue;
                }
                for (t, v) in acc.iter_mut().zip(x) {
                    *t = t.add(&v.mul(a));
                }
            }
            acc
        })
        .collect()
}

fn commutator(eb: &QMatrix, a: &QMatrix, ea: &QMatrix) -> Vec<Q> {
    eb.mul(a).sub(&a.mul(ea)).entries().to_vec()
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a block tuple in the basis, None if it is not an intertwiner.
    pub fn coords(&self, blocks: &[QMatrix]) -> Option<Vec<Q>> {
        let x = flatten(blocks);
        let c: Vec<Q> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        let mut acc = vec![qzero(); x.len()];
        for (b, a) in self.flat.iter().zip(&c) {
            for (t, v) in acc.iter_mut().zip(b) {
                *t = t.add(&v.mul(a));
            }
        }
        (acc == x).then_some(c)
    }

    pub fn product(&self, x: &[QMatrix], y: &[QMatrix]) -> Vec<QMatrix> {
        x.iter().zip(y).map(|(a, b)| a.mul(b)).collect()
    }

    pub fn identity_tuple(&self) -> Vec<QMatrix> {
        self.dims.iter().map(|&d| QMatrix::identity(d, &qzero())).collect()
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize, NoriError> {
        self.vertices.iter().position(|x| x == v).ok_or_else(|| NoriError::UnknownVertex(v.to_string()))
    }
}

/// All tuples (e_q)_{q ∈ E} with e_q∘T(m) = T(m)∘e_p for the edges m: p → q inside E.
pub fn end_compute(rep: &QuiverRep, e: &[&str]) -> Result<EndAlgebra, NoriError> {
    let vertices: Vec<String> = e.iter().map(|s| s.to_string()).collect();
    let dims: Vec<usize> = vertices.iter().map(|v| rep.dim(v)).collect::<Result<_, _>>()?;
    let idx: BTreeMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let offs: Vec<usize> = dims.iter().scan(0, |s, d| {
        let o = *s;
        *s += d * d;
        Some(o)
    }).collect();
    let n_amb: usize = dims.iter().map(|d| d * d).sum();

    let mut loops: Vec<Vec<&QMatrix>> = vec![Vec::new(); vertices.len()];
    let mut cross = Vec::new();
    for edge in &rep.edges {
        let (a, b) = rep.action(edge)?;
        let (Some(&ia), Some(&ib)) = (idx.get(a.as_str()), idx.get(b.as_str())) else { continue };
        if ia == ib {
            loops[ia].push(&edge.matrix);
        } else {
            cross.push((ia, ib, &edge.matrix));
        }
    }

    // vertex-local commutants first, then the edges between vertices
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (v, &d) in dims.iter().enumerate() {
        let mut local: Vec<Vec<Q>> = (0..d * d).map(|k| {
            let mut x = vec![qzero(); d * d];
            x[k] = Q::from_integer(1.into());
            x
        }).collect();
        for a in &loops[v] {
            local = intersect(local, |x| {
                let m = QMatrix::from_fn(d, d, &qzero(), |i, j| x[i * d + j].clone());
                commutator(&m, a, &m)
            });
        }
        for x in local {
            let mut full = vec![qzero(); n_amb];
            full[offs[v]..offs[v] + d * d].clone_from_slice(&x);
            basis.push(full);
        }
    }
    for (ia, ib, a) in cross {
        basis = intersect(basis, |x| {
            let blocks = unflatten(x, &dims);
            commutator(&blocks[ib], a, &blocks[ia])
        });
    }

    // deterministic echelon form
    let (flat, pivots) = if basis.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let r = QMatrix::from_rows(basis, &qzero()).rref();
        let flat: Vec<Vec<Q>> = (0..r.pivots.len()).map(|i| r.matrix.row(i)).collect();
        (flat, r.pivots.clone())
    };
    let blocks: Vec<Vec<QMatrix>> = flat.iter().map(|x| unflatten(x, &dims)).collect();
    let mut alg = EndAlgebra { vertices, dims, basis: blocks, pivots, flat, structure: Vec::new(), unit: Vec::new() };

    let n = alg.dim();
    let mut structure = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = alg.product(&alg.basis[i], &alg.basis[j]);
            structure[i][j] = alg.coords(&p).ok_or_else(|| NoriError::AxiomViolation("intertwiners not closed under products".into()))?;
        }
    }
    alg.unit = alg.coords(&alg.identity_tuple()).ok_or_else(|| NoriError::AxiomViolation("identity is not an intertwiner".into()))?;
    alg.structure = structure;
    Ok(alg)
}

/// C = End(T|_E)^∨ with Δ(c_k)(b_i ⊗ b_j) = c_k(b_j·b_i) and ε(c_k) = c_k(1).
#[derive(Clone, Debug)]
pub struct DualCoalgebra {
    pub dim: usize,
    /// (dim², dim); row i·dim + j is the coefficient of c_i ⊗ c_j.
    pub comultiplication: QMatrix,
    pub counit: Vec<Q>,
}

impl DualCoalgebra {
    pub fn axioms_hold(&self) -> bool {
        let n = self.dim;
        let id = QMatrix::identity(n, &qzero());
        let d = &self.comultiplication;
        let left = d.kron(&id).mul(d);
        let right = id.kron(d).mul(d);
        let eps = QMatrix::from_rows(vec![self.counit.clone()], &qzero());
        left == right && eps.kron(&id).mul(d).is_identity() && id.kron(&eps).mul(d).is_identity()
    }
}

pub fn coalgebra_dual(a: &EndAlgebra) -> Result<DualCoalgebra, NoriError> {
    let n = a.dim();
    let delta = QMatrix::from_fn(n * n, n, &qzero(), |r, k| {
        let (i, j) = (r / n, r % n);
        a.structure[j][i][k].clone()
    });
    let c = DualCoalgebra { dim: n, comultiplication: delta, counit: a.unit.clone() };
    if !c.axioms_hold() {
        return Err(NoriError::AxiomViolation("coalgebra axioms".into()));
    }
    Ok(c)
}

/// Left C-comodule structure ρ(v) = Σ_i c_i ⊗ b_i·v on T(p).
#[derive(Clone, Debug)]
pub struct Comodule {
    pub dim: usize,
    /// (coalgebra dim · dim, dim); row i·dim + r is the coefficient of c_i ⊗ e_r.
    pub coaction: QMatrix,
}

impl Comodule {
    pub fn axioms_hold(&self, c: &DualCoalgebra) -> bool {
        let idv = QMatrix::identity(self.dim, &qzero());
        let idc = QMatrix::identity(c.dim, &qzero());
        let rho = &self.coaction;
        let left = c.comultiplication.kron(&idv).mul(rho);
        let right = idc.kron(rho).mul(rho);
        let eps = QMatrix::from_rows(vec![c.counit.clone()], &qzero());
        left == right && eps.kron(&idv).mul(rho).is_identity()
    }

    /// Dimension of the span of the coefficient maps (rank of the coaction read as dim × (n·dim)).
    pub fn coefficient_rank(&self, c: &DualCoalgebra) -> usize {
        let d = self.dim;
        QMatrix::from_fn(c.dim, d * d, &qzero(), |i, rc| self.coaction.get(i * d + rc / d, rc % d).clone()).rank()
    }
}

pub fn comodule_structure(a: &EndAlgebra, c: &DualCoalgebra, p: &str) -> Result<Comodule, NoriError> {
    let v = a.vertex_index(p)?;
    let d = a.dims[v];
    let n = a.dim();
    let rho = QMatrix::from_fn(n * d, d, &qzero(), |r, col| a.basis[r / d][v].get(r % d, col).clone());
    let m = Comodule { dim: d, coaction: rho };
    if !m.axioms_hold(c) {
        return Err(NoriError::AxiomViolation(format!("comodule axioms at {}", p)));
    }
    Ok(m)
}

/// One step of a directed system: End(E_i), its coalgebra, and the map C_{E_i} → C_{E_{i+1}}.
#[derive(Clone, Debug)]
pub struct SystemStep {
    pub end: EndAlgebra,
    pub coalgebra: DualCoalgebra,
    /// Transpose of the restriction End(E_{i+1}) → End(E_i); None for the last step.
    pub transition: Option<QMatrix>,
    pub transition_rank: Option<usize>,
}

pub fn directed_system(rep: &QuiverRep, chain: &[Vec<&str>]) -> Result<Vec<SystemStep>, NoriError> {
    let ends: Vec<EndAlgebra> = chain.iter().map(|e| end_compute(rep, e)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (i, a) in ends.iter().enumerate() {
        let coalgebra = coalgebra_dual(a)?;
        let (transition, rank) = match ends.get(i + 1) {
            None => (None, None),
            Some(next) => {
                let cols: Vec<Vec<Q>> = next
                    .basis
                    .iter()
                    .map(|b| {
                        let restricted: Vec<QMatrix> = a.vertices.iter().map(|v| b[next.vertex_index(v).expect("nested chain")].clone()).collect();
                        a.coords(&restricted).ok_or_else(|| NoriError::AxiomViolation("restriction is not an intertwiner".into()))
                    })
                    .collect::<Result<_, _>>()?;
                let r = QMatrix::from_cols(&cols, a.dim(), &qzero());
                let t = r.transpose();
                let rank = t.rank();
                (Some(t), Some(rank))
            }
        };
        out.push(SystemStep { end: a.clone(), coalgebra, transition, transition_rank: rank });
    }
    Ok(out)
}

/// e_p·K ⊆ K for every e in End(T|_E).
pub fn kernel_is_submodule(a: &EndAlgebra, p: &str, k: &[Vec<Q>]) -> Result<bool, NoriError> {
    let v = a.vertex_index(p)?;
    let d = a.dims[v];
    if k.is_empty() {
        return Ok(true);
    }
    let km = QMatrix::from_cols(k, d, &qzero());
    let r = km.rank();
    for b in &a.basis {
        if km.hstack(&b[v].mul(&km)).rank() != r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// {2, γ, γ+1, …, γ+n_max−1} without zeros or repeats.
pub fn default_multipliers(k: &NumberField, n_max: usize) -> Vec<NfElem> {
    let g = k.generator();
    let mut out = vec![k.from_int(2)];
    for i in 0..n_max as i64 {
        let x = g.add(&k.from_int(i));
        if !x.is_zero() && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn mpo_vertex(n: usize) -> String {
    format!("P{}", n)
}

/// The quiver of P_n = (ℙ¹, n[∞], ∅), 2 ≤ n ≤ n_max: self-loops t ↦ at (a ∈ A) and
/// t ↦ t − 1, and identity edges P_n → P_m for m ≥ n, acting contravariantly by
/// pullback on 𝐇¹_dR, restricted to ℚ.
pub fn mpo_build(n_max: usize, k: &NumberField, mults: &[NfElem]) -> Result<QuiverRep, NoriError> {
    if mults.is_empty() || mults.iter().any(|a| a.is_zero()) {
        return Err(NoriError::BadMultipliers);
    }
    let proto = k.zero();
    let triples: Vec<ModulusTriple> = (2..=n_max)
        .map(|n| ModulusTriple::p1(parse_divisor(k, &format!("{}*inf", n)).expect("valid divisor"), parse_divisor(k, "").expect("empty")).expect("valid triple"))
        .collect();
    let cohs: Vec<_> = triples.iter().map(|t| hdr_compute_over(t, &proto)).collect();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, g) in cohs.iter().enumerate() {
        let n = i + 2;
        vertices.push((mpo_vertex(n), g.dims().total * k.degree()));
        let mut self_maps: Vec<(String, RationalMap)> = mults.iter().map(|a| (format!("scale[{}]@{}", a, mpo_vertex(n)), RationalMap::affine(a, &proto.zero_like()))).collect();
        self_maps.push((format!("shift@{}", mpo_vertex(n)), RationalMap::affine(&proto.one_like(), &proto.one_like().neg())));
        for (label, f) in self_maps {
            let m = hdr_pull_graded(&CurveMap::single(f), g, g)?;
            edges.push(Edge { src: mpo_vertex(n), dst: mpo_vertex(n), label, matrix: restrict_scalars(k, &m) });
        }
    }
    for (i, gi) in cohs.iter().enumerate() {
        for (j, gj) in cohs.iter().enumerate().skip(i) {
            let id = CurveMap::identity(&proto, 1);
            let m = hdr_pull_graded(&id, gi, gj)?;
            edges.push(Edge { src: mpo_vertex(i + 2), dst: mpo_vertex(j + 2), label: format!("id:{}->{}", mpo_vertex(i + 2), mpo_vertex(j + 2)), matrix: restrict_scalars(k, &m) });
        }
    }
    QuiverRep::new(Variance::Contravariant, vertices, edges)
}

/// The tuple (λ acting on every vertex) for λ = γ^l, l < [k:ℚ], on the P_n representation.
pub fn diagonal_field_image(rep: &QuiverRep, e: &[&str], k: &NumberField) -> Result<Vec<Vec<QMatrix>>, NoriError> {
    let mut out = Vec::new();
    let mut pw = k.one();
    for _ in 0..k.degree() {
        let m = QMatrix::from_rows(pw.mult_matrix(), &qzero());
        let blocks = e
            .iter()
            .map(|v| {
                let d = rep.dim(v)? / k.degree();
                Ok(QMatrix::identity(d, &qzero()).kron(&m))
            })
            .collect::<Result<Vec<_>, NoriError>>()?;
        out.push(blocks);
        pw = pw.mul(&k.generator());
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
