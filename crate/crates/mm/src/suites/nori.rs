use serde_json::{json, Value};

use modmot::exactfield::{express_generator_in_powers, q, qf, restrict_scalars, KMatrix, KPoly, NfElem, NumberField, QMatrix, Scalar, Q};
use modmot::modcoh::{hdr_compute_over, hdr_pull, hdr_pull_graded};
use modmot::noriquiver::{
    coalgebra_dual, comodule_structure, default_multipliers, diagonal_field_image, directed_system, end_compute, kernel_is_submodule, mpo_build, mpo_vertex, Edge,
    EndAlgebra, QuiverRep, Variance,
};
use modmot::projline::{is_morphism_bar, parse_divisor, CurveMap, ModulusTriple, RationalMap};

use super::{check_each, check_once, flip, flip_at, label, mat, Ctx};
use crate::corpus::parse_multipliers;
use crate::report::Report;

/// ℚ(√2) and ℚ(γ) with γ³ = 2.
pub const NORI_FIELDS: [&str; 2] = ["-2,0,1", "-2,0,0,1"];

fn field(spec: &str) -> NumberField {
    NumberField::parse(spec).expect("fixed field")
}

fn field_label(suite: &str, what: &str, spec: &str) -> String {
    format!("{}/{} [{}]", suite, what, crate::corpus::field_name(spec))
}

fn multipliers(ctx: &Ctx, k: &NumberField) -> Result<Vec<NfElem>, Value> {
    if ctx.cfg.multipliers.is_empty() {
        Ok(default_multipliers(k, ctx.cfg.nori_n_max))
    } else {
        parse_multipliers(k, &ctx.cfg.multipliers).map_err(|e| json!(e.to_string()))
    }
}

fn p_n(k: &NumberField, n: usize) -> ModulusTriple {
    ModulusTriple::p1(parse_divisor(k, &format!("{}*inf", n)).expect("n*inf"), parse_divisor(k, "").expect("empty")).expect("valid")
}

struct Mpo {
    rep: QuiverRep,
    vertices: Vec<String>,
    end: EndAlgebra,
    mults: Vec<NfElem>,
}

fn mpo(ctx: &Ctx, k: &NumberField) -> Result<Mpo, Value> {
    let n_max = ctx.cfg.nori_n_max;
    let mults = multipliers(ctx, k)?;
    let rep = mpo_build(n_max, k, &mults).map_err(|e| json!(e.to_string()))?;
    let vertices: Vec<String> = (2..=n_max).map(mpo_vertex).collect();
    let e: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let end = end_compute(&rep, &e).map_err(|e| json!(e.to_string()))?;
    Ok(Mpo { rep, vertices, end, mults })
}

fn flat(blocks: &[QMatrix]) -> Vec<Q> {
    blocks.iter().flat_map(|b| b.entries().to_vec()).collect()
}

fn edge<'a>(rep: &'a QuiverRep, label: &str) -> Result<&'a Edge, Value> {
    rep.edges.iter().find(|e| e.label == label).ok_or_else(|| json!({ "missing_edge": label }))
}

/// diag(a⁻¹, …, a^{1−n}) on H¹(P_n) = s·k[s]/(sⁿ).
fn scaling_matrix(a: &NfElem, n: usize) -> KMatrix {
    let inv = a.inv().expect("nonzero multiplier");
    let mut m = KMatrix::zeros(n - 1, n - 1, &a.zero_like());
    let mut p = inv.clone();
    for i in 0..n - 1 {
        m.set(i, i, p.clone());
        p = p.mul(&inv);
    }
    m
}

/// The algebra map s ↦ s + s² + ⋯ + s^{n−1} on s·k[s]/(sⁿ), in the basis s, …, s^{n−1}.
fn shift_matrix(k: &NumberField, n: usize) -> KMatrix {
    let proto = k.zero();
    let sigma = (1..n).fold(KPoly::zero(&proto), |acc, i| acc.add(&KPoly::monomial(k.one(), i)));
    let mut m = KMatrix::zeros(n - 1, n - 1, &proto);
    let mut pw = KPoly::one(&proto);
    for j in 0..n - 1 {
        pw = pw.mul(&sigma).truncate(n);
        for i in 0..n - 1 {
            m.set(i, j, pw.coeff(i + 1));
        }
    }
    m
}

pub fn nori_end(ctx: &Ctx, report: &mut Report) {
    let n_max = ctx.cfg.nori_n_max;
    for (fi, spec) in NORI_FIELDS.iter().enumerate() {
        let k = field(spec);
        let built = mpo(ctx, &k);
        report.checks.push(check_once(field_label("nori-end", "dim_Q End(T|E) = [k:Q]", spec), || {
            let m = built.as_ref().map_err(Clone::clone)?;
            if m.end.dim() == k.degree() {
                Ok(1)
            } else {
                Err(json!({ "n_max": n_max, "end_dim": m.end.dim(), "degree": k.degree() }))
            }
        }));
        report.checks.push(check_once(field_label("nori-end", "End(T|E) is the diagonal image of k", spec), || {
            let m = built.as_ref().map_err(Clone::clone)?;
            let e: Vec<&str> = m.vertices.iter().map(String::as_str).collect();
            let diag = diagonal_field_image(&m.rep, &e, &k).map_err(|e| json!(e.to_string()))?;
            for (l, t) in diag.iter().enumerate() {
                if m.end.coords(t).is_none() {
                    return Err(json!({ "power_of_generator": l, "not_an_intertwiner": true }));
                }
            }
            let cols: Vec<Vec<Q>> = diag.iter().map(|t| flat(t)).collect();
            let rank = QMatrix::from_cols(&cols, cols[0].len(), &q(0)).rank();
            if rank == k.degree() && rank == m.end.dim() {
                Ok(diag.len())
            } else {
                Err(json!({ "diagonal_rank": rank, "end_dim": m.end.dim() }))
            }
        }));
        report.checks.push(check_once(field_label("nori-end", "scaling edges are diag(a^-1, ..., a^(1-n))", spec), || {
            let m = built.as_ref().map_err(Clone::clone)?;
            let mut seen = 0;
            for n in 2..=n_max {
                let g = hdr_compute_over(&p_n(&k, n), &k.zero());
                for a in &m.mults {
                    let mut expected = restrict_scalars(&k, &scaling_matrix(a, n));
                    if ctx.cfg.inject_fault && fi == 0 && seen == 0 {
                        expected = flip(&expected);
                    }
                    let direct = hdr_pull_graded(&CurveMap::single(RationalMap::affine(a, &k.zero())), &g, &g).map_err(|e| json!(e.to_string()))?;
                    let e = edge(&m.rep, &format!("scale[{}]@{}", a, mpo_vertex(n)))?;
                    if e.matrix != expected || restrict_scalars(&k, &direct) != expected {
                        return Err(json!({ "n": n, "a": a.to_string(), "expected": mat(&expected), "edge": mat(&e.matrix), "hdr_pull": mat(&direct) }));
                    }
                    seen += 1;
                }
            }
            Ok(seen)
        }));
        report.checks.push(check_once(field_label("nori-end", "shift edge is s -> s + ... + s^(n-1)", spec), || {
            let m = built.as_ref().map_err(Clone::clone)?;
            for n in 2..=n_max {
                let g = hdr_compute_over(&p_n(&k, n), &k.zero());
                let expected = restrict_scalars(&k, &shift_matrix(&k, n));
                let shift = RationalMap::affine(&k.one(), &k.from_int(-1));
                let direct = hdr_pull_graded(&CurveMap::single(shift), &g, &g).map_err(|e| json!(e.to_string()))?;
                let e = edge(&m.rep, &format!("shift@{}", mpo_vertex(n)))?;
                if e.matrix != expected || restrict_scalars(&k, &direct) != expected {
                    return Err(json!({ "n": n, "expected": mat(&expected), "edge": mat(&e.matrix), "hdr_pull": mat(&direct) }));
                }
            }
            Ok(n_max - 1)
        }));
    }
}

fn qm(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), &q(0))
}

fn one_vertex(d: usize, loops: Vec<QMatrix>) -> QuiverRep {
    let edges = loops.into_iter().enumerate().map(|(i, m)| Edge { src: "v".into(), dst: "v".into(), label: format!("e{}", i), matrix: m }).collect();
    QuiverRep::new(Variance::Covariant, vec![("v".into(), d)], edges).expect("fixture")
}

/// Every End algebra the run produces: the two fixtures, the P_n restrictions
/// over both test fields and each step of their directed systems.
fn algebras(ctx: &Ctx) -> Result<Vec<(String, EndAlgebra)>, Value> {
    let err = |e: modmot::noriquiver::NoriError| json!(e.to_string());
    let mut out = vec![
        ("M2(Q)".to_string(), end_compute(&one_vertex(2, vec![]), &["v"]).map_err(err)?),
        ("nilpotent commutant".to_string(), end_compute(&one_vertex(2, vec![qm(&[&[0, 1], &[0, 0]])]), &["v"]).map_err(err)?),
    ];
    for spec in NORI_FIELDS {
        let k = field(spec);
        let m = mpo(ctx, &k)?;
        let chain: Vec<Vec<&str>> = (1..=m.vertices.len()).map(|i| m.vertices[..i].iter().map(String::as_str).collect()).collect();
        for (i, step) in directed_system(&m.rep, &chain).map_err(err)?.into_iter().enumerate() {
            out.push((format!("{} E = P2..P{}", crate::corpus::field_name(spec), i + 2), step.end));
        }
    }
    Ok(out)
}

pub fn coalgebra(ctx: &Ctx, report: &mut Report) {
    let algs = match algebras(ctx) {
        Ok(a) => a,
        Err(w) => {
            report.checks.push(check_once("coalgebra/build End algebras", || Err(w)));
            return;
        }
    };
    report.checks.push(check_once("coalgebra/fixture End dims are 4 and 2", || {
        let (a, b) = (algs[0].1.dim(), algs[1].1.dim());
        if (a, b) == (4, 2) {
            Ok(2)
        } else {
            Err(json!({ "M2": a, "nilpotent": b }))
        }
    }));
    report.checks.push(check_each("coalgebra/coassociativity and counit", &algs, |i, (name, a)| {
        let mut c = coalgebra_dual(a).map_err(|e| json!({ "algebra": name, "error": e.to_string() }))?;
        if ctx.cfg.inject_fault && i == 0 {
            c.comultiplication = flip(&c.comultiplication);
        }
        if c.axioms_hold() {
            Ok(())
        } else {
            Err(json!({ "algebra": name, "comultiplication": mat(&c.comultiplication) }))
        }
    }));
    report.checks.push(check_each("coalgebra/comodule axioms at every vertex", &algs, |_, (name, a)| {
        let c = coalgebra_dual(a).map_err(|e| json!({ "algebra": name, "error": e.to_string() }))?;
        for v in &a.vertices {
            let m = comodule_structure(a, &c, v).map_err(|e| json!({ "algebra": name, "vertex": v, "error": e.to_string() }))?;
            if !m.axioms_hold(&c) {
                return Err(json!({ "algebra": name, "vertex": v, "coaction": mat(&m.coaction) }));
            }
        }
        Ok(())
    }));
}

pub fn lemma(ctx: &Ctx, report: &mut Report) {
    let cases: Vec<(&str, u32)> = NORI_FIELDS.iter().flat_map(|f| (1..=6).map(move |mu| (*f, mu))).collect();
    report.checks.push(check_each("lemma/generator as a combination of mu-th powers, mu = 1..6", &cases, |i, &(spec, mu)| {
        let k = field(spec);
        let mut pc = express_generator_in_powers(&k, mu).map_err(|e| json!({ "field": spec, "mu": mu, "error": e.to_string() }))?;
        if ctx.cfg.inject_fault && i == 0 {
            pc.coefficients[0] += q(1);
        }
        if pc.evaluate(&k) == k.generator() {
            Ok(())
        } else {
            let coeffs: Vec<String> = pc.coefficients.iter().map(|c| c.to_string()).collect();
            Err(json!({ "field": spec, "mu": mu, "coefficients": coeffs, "value": pc.evaluate(&k).to_string() }))
        }
    }));
    report.checks.push(check_once("lemma/mu = 2 over Q(sqrt 2) gives (-3/4, 1/2)", || {
        let pc = express_generator_in_powers(&field(NORI_FIELDS[0]), 2).map_err(|e| json!(e.to_string()))?;
        if pc.coefficients == vec![qf(-3, 4), qf(1, 2)] && !pc.extended {
            Ok(1)
        } else {
            Err(json!({ "coefficients": pc.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(), "extended": pc.extended }))
        }
    }));
}

/// Maps between the P_n that stay inside the quiver's vertex set, for the submodule check.
fn ayoub_maps(k: &NumberField, mults: &[NfElem], n_max: usize) -> Vec<(String, CurveMap, usize, usize)> {
    let zero = k.zero();
    let mut pool: Vec<(String, RationalMap)> = vec![("id".into(), RationalMap::identity(&zero, 0)), ("t->t-1".into(), RationalMap::affine(&k.one(), &k.from_int(-1)))];
    pool.extend(mults.iter().take(2).map(|a| (format!("t->({})t", a), RationalMap::affine(a, &zero))));
    for e in 2..=3 {
        pool.push((format!("t->t^{}", e), RationalMap::new(KPoly::monomial(k.one(), e), KPoly::one(&zero), 0, 0).expect("nonconstant")));
    }
    let mut out = Vec::new();
    for (label, f) in pool {
        let f = CurveMap::single(f);
        for m in 2..=n_max {
            for n in 2..=n_max {
                if is_morphism_bar(&f, &p_n(k, m), &p_n(k, n)) {
                    out.push((label.clone(), f.clone(), m, n));
                }
            }
        }
    }
    out
}

pub fn ayoub(ctx: &Ctx, report: &mut Report) {
    for corpus in &ctx.corpora {
        let proto = corpus.field.zero();
        report.checks.push(check_each(label("ayoub", "S(i)+S(j) is an isomorphism on disjoint unions", corpus), &corpus.unions, |_, u| {
            let total = hdr_compute_over(&u.total, &proto);
            let mut stacked: Option<KMatrix> = None;
            for (part, inc) in u.parts.iter().zip(&u.inclusions) {
                let p = hdr_pull_graded(inc, &hdr_compute_over(part, &proto), &total).map_err(|e| json!({ "union": u.total.to_string(), "error": e.to_string() }))?;
                stacked = Some(match stacked {
                    None => p,
                    Some(s) => s.vstack(&p),
                });
            }
            let s = stacked.expect("unions have parts");
            if s.is_square() && s.rank() == s.rows() {
                Ok(())
            } else {
                Err(json!({ "union": u.total.to_string(), "restrictions": mat(&s) }))
            }
        }));
    }

    let n_max = ctx.cfg.nori_n_max;
    for spec in NORI_FIELDS {
        let k = field(spec);
        let built = match mpo(ctx, &k) {
            Ok(m) => m,
            Err(w) => {
                report.checks.push(check_once(field_label("ayoub", "build End(T|E)", spec), || Err(w)));
                continue;
            }
        };
        let maps = ayoub_maps(&k, &built.mults, n_max);
        let kernels: Vec<Vec<Vec<Q>>> = maps
            .iter()
            .map(|(_, f, m, n)| {
                let pull = hdr_pull(f, &p_n(&k, *m), &p_n(&k, *n)).expect("filtered by the morphism predicate");
                restrict_scalars(&k, &pull).kernel().columns()
            })
            .collect();
        let target = kernels.iter().position(|kv| !kv.is_empty());
        report.checks.push(check_each(field_label("ayoub", "kernels of realization maps are End(T|E)-submodules", spec), &maps, |i, (label, f, m, n)| {
            let mut kv = kernels[i].clone();
            if ctx.inject(i, target) {
                let col = QMatrix::from_cols(&kv[..1], kv[0].len(), &q(0));
                kv[0] = flip_at(&col, 0, 0).col(0);
            }
            let v = mpo_vertex(*n);
            match kernel_is_submodule(&built.end, &v, &kv) {
                Ok(true) => Ok(()),
                Ok(false) => Err(json!({ "map": label, "curve_map": f.to_string(), "from": mpo_vertex(*m), "to": v, "kernel_dim": kv.len() })),
                Err(e) => Err(json!({ "map": label, "error": e.to_string() })),
            }
        }));
        let nontrivial = kernels.iter().filter(|kv| !kv.is_empty()).count();
        report.checks.push(check_once(field_label("ayoub", "at least 20 realization maps checked", spec), || {
            if maps.len() >= 20 {
                Ok(maps.len())
            } else {
                Err(json!({ "maps": maps.len(), "nontrivial_kernels": nontrivial }))
            }
        }));
    }
}
