//! De Rham cohomology 𝐇¹ of curves with modulus (X, Y, Z), X a finite union of
//! copies of ℙ¹, together with the local spaces U and V, the canonical
//! decomposition, duality and functoriality.
//!
//! Classes are stored per component in the (η, φ) model of [`ambient`]; the
//! graded coordinates [red | U | V] are obtained through explicit change-of-basis
//! matrices, so every operation is exact linear algebra over k.

pub mod ambient;
mod cech;
mod functor;
pub mod graded;
pub mod uv;

pub use cech::{cech_dim, cech_truncated, CechDim};
pub use graded::GradedP1;
pub use uv::{uv_gram, LocalBlock, USpace, VSpace};

use thiserror::Error;

use crate::exactfield::{KMatrix, NfElem, Scalar};
use crate::projline::{bar_violations, under_violations, CurveMap, Divisor, GeomError, ModulusTriple, RationalMap};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModcohError {
    #[error("U and V were built for different divisors")]
    MismatchedDivisor,
    #[error("condition ({case}) violated: {inequality}")]
    ConditionViolated { case: u8, inequality: String },
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("input divisors are not reduced")]
    NonReducedInput,
    #[error("supports of Y and Z overlap")]
    SupportsOverlap,
    #[error("truncation {given} is below the required {required}")]
    TruncationTooSmall { given: usize, required: usize },
    #[error("Čech dimension changed between N = {n} ({at_n}) and N + 5 ({at_n5})")]
    TruncationUnstable { n: usize, at_n: usize, at_n5: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Dims {
    pub red: usize,
    pub u: usize,
    pub v: usize,
    pub total: usize,
}

/// 𝐇¹_dR(X, Y_red, Z_red) for reduced input.
#[derive(Clone, Debug)]
pub struct ReducedCoh {
    pub triple: ModulusTriple,
    pub dim: usize,
    pub basis_labels: Vec<String>,
}

/// 𝐇¹_dR(X, Y, Z) with its canonical decomposition.
#[derive(Clone, Debug)]
pub struct GradedCoh {
    pub triple: ModulusTriple,
    pub parts: Vec<GradedP1>,
    proto: NfElem,
}

fn prefix_offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut acc = 0;
    sizes
        .map(|s| {
            let o = acc;
            acc += s;
            o
        })
        .collect()
}

impl GradedCoh {
    pub fn proto(&self) -> &NfElem {
        &self.proto
    }

    pub fn dims(&self) -> Dims {
        let (mut red, mut u, mut v) = (0, 0, 0);
        for p in &self.parts {
            let (r, a, b) = p.dims();
            red += r;
            u += a;
            v += b;
        }
        Dims { red, u, v, total: red + u + v }
    }

    pub fn ambient_dim(&self) -> usize {
        self.parts.iter().map(|p| p.amb.dim()).sum()
    }

    pub fn ambient_offsets(&self) -> Vec<usize> {
        prefix_offsets(self.parts.iter().map(|p| p.amb.dim()))
    }

    /// Offsets of component c's red, U and V blocks in graded coordinates.
    fn graded_offsets(&self) -> Vec<(usize, usize, usize)> {
        let d = self.dims();
        let r = prefix_offsets(self.parts.iter().map(|p| p.red.dim()));
        let u = prefix_offsets(self.parts.iter().map(|p| p.u.dim()));
        let v = prefix_offsets(self.parts.iter().map(|p| p.v.dim()));
        (0..self.parts.len()).map(|c| (r[c], d.red + u[c], d.red + d.u + v[c])).collect()
    }

    /// Ambient → graded [red | U | V].
    pub fn to_graded(&self) -> KMatrix {
        let n = self.ambient_dim();
        let mut m = KMatrix::zeros(n, n, &self.proto);
        for ((p, ao), (ro, uo, vo)) in self.parts.iter().zip(self.ambient_offsets()).zip(self.graded_offsets()) {
            m.set_block(ro, ao, &p.b);
            m.set_block(uo, ao, &p.pi_u);
            m.set_block(vo, ao, &p.pi_v);
        }
        m
    }

    /// Graded → ambient.
    pub fn from_graded(&self) -> KMatrix {
        let n = self.ambient_dim();
        let mut m = KMatrix::zeros(n, n, &self.proto);
        for ((p, ao), (ro, uo, vo)) in self.parts.iter().zip(self.ambient_offsets()).zip(self.graded_offsets()) {
            m.set_block(ao, ro, &p.a);
            m.set_block(ao, uo, &p.iota_u);
            m.set_block(ao, vo, &p.iota_v);
        }
        m
    }

    fn block_diag(&self, f: impl Fn(&GradedP1) -> &KMatrix) -> KMatrix {
        let mut acc = KMatrix::zeros(0, 0, &self.proto);
        for p in &self.parts {
            acc = acc.direct_sum(f(p));
        }
        acc
    }

    /// a: 𝐇¹(Y_red, Z_red) → 𝐇¹(Y, Z) in ambient coordinates.
    pub fn a_map(&self) -> KMatrix {
        self.block_diag(|p| &p.a)
    }

    /// b: 𝐇¹(Y, Z) → 𝐇¹(Y_red, Z_red) in ambient coordinates.
    pub fn b_map(&self) -> KMatrix {
        self.block_diag(|p| &p.b)
    }

    pub fn reduced(&self) -> ReducedCoh {
        let mut labels = Vec::new();
        for (c, p) in self.parts.iter().enumerate() {
            labels.extend(p.red.labels().into_iter().map(|l| format!("{}@{}", l, c)));
        }
        ReducedCoh { triple: self.triple.red(), dim: self.dims().red, basis_labels: labels }
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let mut out = self.reduced().basis_labels;
        for (c, p) in self.parts.iter().enumerate() {
            out.extend(p.u.labels().into_iter().map(|l| format!("{}@{}", l, c)));
        }
        for (c, p) in self.parts.iter().enumerate() {
            out.extend(p.v.labels().into_iter().map(|l| format!("{}@{}", l, c)));
        }
        out
    }
}

pub(crate) fn proto_of(t: &ModulusTriple, fallback: Option<&NfElem>) -> NfElem {
    t.y.field().or_else(|| t.z.field()).map(|k| k.zero()).or_else(|| fallback.cloned()).unwrap_or_else(|| crate::exactfield::NumberField::rationals().zero())
}

/// The canonical decomposition of 𝐇¹_dR(X, Y, Z) over the field of `proto`.
pub fn hdr_compute_over(t: &ModulusTriple, proto: &NfElem) -> GradedCoh {
    let parts = (0..t.comps).map(|c| GradedP1::new(&t.component(c), proto)).collect();
    GradedCoh { triple: t.clone(), parts, proto: proto.clone() }
}

/// The canonical decomposition, over the field the divisors are defined over (ℚ if both are empty).
pub fn hdr_compute(t: &ModulusTriple) -> GradedCoh {
    hdr_compute_over(t, &proto_of(t, None))
}

pub fn hdr_reduced(t: &ModulusTriple) -> Result<ReducedCoh, ModcohError> {
    if !t.is_reduced() {
        return Err(ModcohError::NonReducedInput);
    }
    Ok(hdr_compute(t).reduced())
}

/// Per component with degrees (y, z): y + z − 2 + [y = 0] + [z = 0], and 0 when y = z = 0.
pub fn hdr_dim_oracle(t: &ModulusTriple) -> usize {
    (0..t.comps)
        .map(|c| {
            let (y, z) = (t.y.degree_on(c), t.z.degree_on(c));
            if y == 0 && z == 0 {
                0
            } else {
                y + z + usize::from(y == 0) + usize::from(z == 0) - 2
            }
        })
        .sum()
}

pub(crate) fn single(f: &RationalMap) -> RationalMap {
    RationalMap::new(f.num().clone(), f.den().clone(), 0, 0).expect("nonconstant")
}

fn ambient_pull(f: &CurveMap, src: &GradedCoh, dst: &GradedCoh) -> Result<KMatrix, ModcohError> {
    let so = src.ambient_offsets();
    let d_o = dst.ambient_offsets();
    let mut m = KMatrix::zeros(src.ambient_dim(), dst.ambient_dim(), &src.proto);
    for (c, fc) in f.maps.iter().enumerate() {
        let d = fc.dst;
        let block = functor::pull_ambient(&single(fc), &src.parts[c].amb, &dst.parts[d].amb)?;
        m.set_block(so[c], d_o[d], &block);
    }
    Ok(m)
}

fn ambient_push(f: &CurveMap, src: &GradedCoh, dst: &GradedCoh) -> Result<KMatrix, ModcohError> {
    let so = src.ambient_offsets();
    let d_o = dst.ambient_offsets();
    let mut m = KMatrix::zeros(dst.ambient_dim(), src.ambient_dim(), &src.proto);
    for (c, fc) in f.maps.iter().enumerate() {
        let d = fc.dst;
        let block = functor::push_ambient(&single(fc), &src.parts[c].amb, &dst.parts[d].amb)?;
        let cur = m.block(d_o[d], so[c], block.rows(), block.cols());
        m.set_block(d_o[d], so[c], &cur.add(&block));
    }
    Ok(m)
}

/// f*: 𝐇¹(dst) → 𝐇¹(src) in graded coordinates, from precomputed decompositions.
pub fn hdr_pull_graded(f: &CurveMap, src: &GradedCoh, dst: &GradedCoh) -> Result<KMatrix, ModcohError> {
    let v = bar_violations(f, &src.triple, &dst.triple)?;
    if let Some(x) = v.first() {
        return Err(ModcohError::NotAMorphism(format!("condition ({}) {}", x.condition, x.inequality)));
    }
    Ok(src.to_graded().mul(&ambient_pull(f, src, dst)?).mul(&dst.from_graded()))
}

pub fn hdr_pull(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<KMatrix, ModcohError> {
    let proto = proto_of(src, Some(f.maps[0].proto()));
    hdr_pull_graded(f, &hdr_compute_over(src, &proto), &hdr_compute_over(dst, &proto))
}

/// f_*: 𝐇¹(src) → 𝐇¹(dst) for a morphism of the mirrored category, graded coordinates.
pub fn hdr_push_graded(f: &CurveMap, src: &GradedCoh, dst: &GradedCoh) -> Result<KMatrix, ModcohError> {
    let v = under_violations(f, &src.triple, &dst.triple)?;
    if let Some(x) = v.first() {
        return Err(ModcohError::NotAMorphism(format!("condition ({}) {}", x.condition, x.inequality)));
    }
    Ok(dst.to_graded().mul(&ambient_push(f, src, dst)?).mul(&src.from_graded()))
}

pub fn hdr_push(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple) -> Result<KMatrix, ModcohError> {
    let proto = proto_of(src, Some(f.maps[0].proto()));
    hdr_push_graded(f, &hdr_compute_over(src, &proto), &hdr_compute_over(dst, &proto))
}

/// Pairing between 𝐇¹(X, Y, Z) and 𝐇¹(X, Z, Y) in ambient coordinates.
pub fn duality_ambient(g: &GradedCoh, dual: &GradedCoh) -> KMatrix {
    let mut acc = KMatrix::zeros(0, 0, &g.proto);
    for (p, q) in g.parts.iter().zip(&dual.parts) {
        acc = acc.direct_sum(&functor::gram_ambient(&p.amb, &q.amb));
    }
    acc
}

/// Gram matrix of the duality pairing in graded coordinates (rows: (X,Y,Z), columns: (X,Z,Y)).
pub fn hdr_duality_graded(g: &GradedCoh, dual: &GradedCoh) -> KMatrix {
    g.from_graded().transpose().mul(&duality_ambient(g, dual)).mul(&dual.from_graded())
}

pub fn hdr_duality(t: &ModulusTriple) -> KMatrix {
    let proto = proto_of(t, None);
    hdr_duality_graded(&hdr_compute_over(t, &proto), &hdr_compute_over(&t.swap(), &proto))
}

// ---- U and V on a single ℙ¹ ----------------------------------------------

pub fn u_space(d: &Divisor, proto: &NfElem) -> USpace {
    USpace::new(&d.relabel(0), proto)
}

pub fn v_space(d: &Divisor, proto: &NfElem) -> VSpace {
    VSpace::new(&d.relabel(0), proto)
}

/// Σ_P res_P(u·dv̂) for u ∈ U(D), v ∈ V(D).
pub fn uv_pairing(u: &USpace, x: &[NfElem], v: &VSpace, y: &[NfElem]) -> Result<NfElem, ModcohError> {
    let same = u.blocks.len() == v.blocks.len() && u.blocks.iter().zip(&v.blocks).all(|(a, b)| a.place == b.place && a.n == b.n);
    if !same {
        return Err(ModcohError::MismatchedDivisor);
    }
    let g = uv_gram(u, v);
    let gy = g.mul_vec(y);
    Ok(x.iter().zip(&gy).fold(g.proto().zero_like(), |acc, (a, b)| acc.add(&a.mul(b))))
}

fn case1(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<(), ModcohError> {
    if !d.leq(&CurveMap::single(single(f)).pullback(dp)) {
        return Err(ModcohError::ConditionViolated { case: 1, inequality: "D <= f*D'".into() });
    }
    Ok(())
}

fn case2(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<(), ModcohError> {
    let fm = CurveMap::single(single(f));
    let nd = d.checked_sub(&d.red()).expect("D >= D_red");
    let ndp = dp.checked_sub(&dp.red()).expect("D' >= D'_red");
    if !fm.pullback(&ndp).leq(&nd) {
        return Err(ModcohError::ConditionViolated { case: 2, inequality: "D - D_red >= f*(D' - D'_red)".into() });
    }
    if !fm.pullback(dp).red().leq(&d.red()) {
        return Err(ModcohError::ConditionViolated { case: 2, inequality: "D_red >= (f*D')_red".into() });
    }
    Ok(())
}

fn norm(f: &RationalMap, d: &Divisor, dp: &Divisor) -> (RationalMap, Divisor, Divisor) {
    (single(f), d.relabel(0), dp.relabel(0))
}

/// f*: U(D′) → U(D), requires D ≤ f*D′.
pub fn u_pull(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<KMatrix, ModcohError> {
    let (f, d, dp) = norm(f, d, dp);
    case1(&f, &d, &dp)?;
    let proto = f.proto().clone();
    functor::u_pull_blocks(&f, &USpace::new(&d, &proto), &uv::blocks_of(&dp, &proto), &USpace::new(&dp, &proto))
}

/// f_*: V(D) → V(D′), requires D ≤ f*D′.
pub fn v_push(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<KMatrix, ModcohError> {
    let (f, d, dp) = norm(f, d, dp);
    case1(&f, &d, &dp)?;
    let proto = f.proto().clone();
    functor::v_push_blocks(&f, &VSpace::new(&d, &proto), &VSpace::new(&dp, &proto))
}

/// f*: V(D′) → V(D), requires the second set of inequalities.
pub fn v_pull(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<KMatrix, ModcohError> {
    let (f, d, dp) = norm(f, d, dp);
    case2(&f, &d, &dp)?;
    let proto = f.proto().clone();
    Ok(functor::v_pull_blocks(&f, &VSpace::new(&d, &proto), &VSpace::new(&dp, &proto)))
}

/// f_*: U(D) → U(D′), requires the second set of inequalities.
pub fn u_push(f: &RationalMap, d: &Divisor, dp: &Divisor) -> Result<KMatrix, ModcohError> {
    let (f, d, dp) = norm(f, d, dp);
    case2(&f, &d, &dp)?;
    let proto = f.proto().clone();
    functor::u_push_blocks(&f, &uv::blocks_of(&d, &proto), &USpace::new(&d, &proto), &USpace::new(&dp, &proto))
}

#[cfg(test)]
mod tests;
