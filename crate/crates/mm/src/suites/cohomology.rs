use rayon::prelude::*;
use serde_json::{json, Value};

use modmot::exactfield::{KMatrix, KPoly, KRatFunc, NfElem, NumberField, Scalar};
use modmot::laumon::{lm_pull_capped, LmMorphism};
use modmot::modcoh::{
    cech_truncated, hdr_compute_over, hdr_dim_oracle, hdr_duality_graded, hdr_pull_graded, hdr_push_graded, u_space, uv_gram, v_space, Dims, GradedCoh,
};
use modmot::projline::{parse_divisor, residue, CurveMap, ModulusTriple, Place};

use super::{check_each, check_once, flip, label, mat, Ctx};
use crate::corpus::{describe, Morphism};
use crate::report::{DimRow, Report};

fn degree(t: &ModulusTriple) -> usize {
    t.y.degree() + t.z.degree()
}

fn dims_json(d: Dims) -> Value {
    json!({ "red": d.red, "U": d.u, "V": d.v, "total": d.total })
}

fn first_index<T>(items: &[T], p: impl Fn(&T) -> bool) -> Option<usize> {
    items.iter().position(p)
}

/// The first (row block, column block) of a graded matrix that should vanish but does not.
pub(crate) fn off_block(g: &KMatrix, a: Dims, b: Dims) -> Option<(usize, usize)> {
    let rows = [(0, a.red), (a.red, a.u), (a.red + a.u, a.v)];
    let cols = [(0, b.red), (b.red, b.u), (b.red + b.u, b.v)];
    for (x, &(r0, nr)) in rows.iter().enumerate() {
        for (y, &(c0, nc)) in cols.iter().enumerate() {
            if x != y && !g.block(r0, c0, nr, nc).is_zero() {
                return Some((x, y));
            }
        }
    }
    None
}

fn coh_pair(m: &Morphism, k: &NumberField) -> (GradedCoh, GradedCoh) {
    let p = k.zero();
    (hdr_compute_over(&m.src, &p), hdr_compute_over(&m.dst, &p))
}

fn nonempty_morphism(m: &Morphism) -> bool {
    hdr_dim_oracle(&m.src) > 0 && hdr_dim_oracle(&m.dst) > 0
}

fn named_examples() -> Vec<(&'static str, String, String, usize)> {
    let mut out = vec![("(0)+(1) | inf", "(t)+(t-1)".to_string(), "inf".to_string(), 1), ("2(0) | 3inf", "2*(t)".into(), "3*inf".into(), 3)];
    for n in 1..=6 {
        out.push(("n*inf | 0", format!("{}*inf", n), String::new(), n - 1));
    }
    out
}

pub fn dims(ctx: &Ctx, report: &mut Report) {
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let proto = corpus.field.zero();
        let ts = ctx.instances(c);
        let hs = ctx.cohs(c);
        let trunc = ctx.cfg.truncation;
        report.checks.push(check_each(label("dims", "hdr = cech(N) = cech(N+5) = oracle", corpus), ts, |i, t| {
            let d = hs[i].dims();
            let n = trunc.unwrap_or(degree(t) + 4);
            let w = |extra: Value| json!({ "triple": t.to_string(), "truncation": n, "hdr": dims_json(d), "detail": extra });
            let cech = cech_truncated(t, n, &proto).map_err(|e| w(json!(e.to_string())))?;
            let oracle = hdr_dim_oracle(t);
            if d.total == cech.dim && cech.dim == oracle {
                Ok(())
            } else {
                Err(w(json!({ "cech": cech.dim, "oracle": oracle })))
            }
        }));

        let target = first_index(hs, |h| h.ambient_dim() > 0);
        report.checks.push(check_each(label("dims", "graded basis change is invertible", corpus), hs, |i, h| {
            let mut p = h.to_graded().mul(&h.from_graded());
            if ctx.inject(i, target) {
                p = flip(&p);
            }
            if p.is_identity() {
                Ok(())
            } else {
                Err(json!({ "triple": h.triple.to_string(), "to_graded*from_graded": mat(&p) }))
            }
        }));

        if corpus.field.is_rationals() && !corpus.is_empty() {
            let k = corpus.field.clone();
            report.checks.push(check_once(label("dims", "named examples", corpus), || {
                let ex = named_examples();
                for (name, y, z, want) in &ex {
                    let t = ModulusTriple::p1(parse_divisor(&k, y).expect("example"), parse_divisor(&k, z).expect("example")).expect("example");
                    let h = hdr_compute_over(&t, &k.zero()).dims().total;
                    let cech = cech_truncated(&t, degree(&t) + 4, &k.zero()).map(|c| c.dim).map_err(|e| json!({ "example": name, "error": e.to_string() }))?;
                    let oracle = hdr_dim_oracle(&t);
                    if h != *want || cech != *want || oracle != *want {
                        return Err(json!({ "example": name, "triple": t.to_string(), "want": want, "hdr": h, "cech": cech, "oracle": oracle }));
                    }
                }
                Ok(ex.len())
            }));
        }

        for (t, h) in ts.iter().zip(hs) {
            let d = h.dims();
            report.dimensions.push(DimRow {
                field: corpus.field_name(),
                y: t.y.to_string(),
                z: t.z.to_string(),
                red: d.red,
                u: d.u,
                v: d.v,
                total: d.total,
                oracle: hdr_dim_oracle(t),
            });
        }
    }
}

pub fn decomposition(ctx: &Ctx, report: &mut Report) {
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let ts = ctx.instances(c);
        let hs = ctx.cohs(c);
        let target = first_index(hs, |h| h.dims().red > 0);
        report.checks.push(check_each(label("decomposition", "b o a = id", corpus), hs, |i, h| {
            let mut p = h.b_map().mul(&h.a_map());
            if ctx.inject(i, target) {
                p = flip(&p);
            }
            if p.is_identity() {
                Ok(())
            } else {
                Err(json!({ "triple": h.triple.to_string(), "b*a": mat(&p) }))
            }
        }));

        report.checks.push(check_each(label("decomposition", "dim = red + (deg Y - deg Y_red) + (deg Z - deg Z_red)", corpus), ts, |i, t| {
            let d = hs[i].dims();
            let u = t.y.degree() - t.y.red().degree();
            let v = t.z.degree() - t.z.red().degree();
            let red = hdr_dim_oracle(&t.red());
            if d.u == u && d.v == v && d.red == red && d.total == hdr_dim_oracle(t) {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "graded": dims_json(d), "expected": { "red": red, "U": u, "V": v } }))
            }
        }));

        let k = &corpus.field;
        report.checks.push(check_each(label("decomposition", "pullbacks preserve the decomposition", corpus), &corpus.morphisms, |_, m| {
            let (hs, hd) = coh_pair(m, k);
            let g = hdr_pull_graded(&m.map, &hs, &hd).map_err(|e| json!({ "morphism": describe(m), "error": e.to_string() }))?;
            match off_block(&g, hs.dims(), hd.dims()) {
                None => Ok(()),
                Some(b) => Err(json!({ "morphism": describe(m), "nonzero_block": b, "pullback": mat(&g) })),
            }
        }));
    }
}

pub fn duality(ctx: &Ctx, report: &mut Report) {
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let proto = corpus.field.zero();
        let ts = ctx.instances(c);
        let hs = ctx.cohs(c);
        let singles: Vec<&ModulusTriple> = ts.iter().filter(|t| t.comps == 1).collect();
        report.checks.push(check_each(label("duality", "U x V Gram matrices are invertible", corpus), &singles, |_, t| {
            for d in [&t.y, &t.z] {
                let g = uv_gram(&u_space(d, &proto), &v_space(d, &proto));
                if !g.is_square() || g.rank() != g.rows() {
                    return Err(json!({ "triple": t.to_string(), "divisor": d.to_string(), "gram": mat(&g) }));
                }
            }
            Ok(())
        }));

        let swapped: Vec<GradedCoh> = ts.par_iter().map(|t| hdr_compute_over(&t.swap(), &proto)).collect();
        report.checks.push(check_each(label("duality", "H1 x H1 Gram matrices are invertible", corpus), hs, |i, h| {
            let g = hdr_duality_graded(h, &swapped[i]);
            if g.is_square() && g.rank() == g.rows() {
                Ok(())
            } else {
                Err(json!({ "triple": h.triple.to_string(), "gram": mat(&g) }))
            }
        }));
        report.checks.push(check_each(label("duality", "dim H1(X,Y,Z) = dim H1(X,Z,Y)", corpus), hs, |i, h| {
            let (a, b) = (h.dims().total, swapped[i].dims().total);
            if a == b {
                Ok(())
            } else {
                Err(json!({ "triple": h.triple.to_string(), "dim": a, "dim_swapped": b }))
            }
        }));

        let target = first_index(&corpus.morphisms, nonempty_morphism);
        report.checks.push(check_each(label("duality", "pushforward is the pairing transpose of pullback", corpus), &corpus.morphisms, |i, m| {
            let w = |e: String| json!({ "morphism": describe(m), "error": e });
            let (hs, hd) = coh_pair(m, &corpus.field);
            let (ss, sd) = (hdr_compute_over(&m.src.swap(), &proto), hdr_compute_over(&m.dst.swap(), &proto));
            let mut p = hdr_pull_graded(&m.map, &hs, &hd).map_err(|e| w(e.to_string()))?;
            let q = hdr_push_graded(&m.map, &ss, &sd).map_err(|e| w(e.to_string()))?;
            if ctx.inject(i, target) {
                p = flip(&p);
            }
            let lhs = p.transpose().mul(&hdr_duality_graded(&hs, &ss));
            let rhs = hdr_duality_graded(&hd, &sd).mul(&q);
            if lhs == rhs {
                Ok(())
            } else {
                Err(json!({ "morphism": describe(m), "pull": mat(&p), "push": mat(&q), "lhs": mat(&lhs), "rhs": mat(&rhs) }))
            }
        }));
    }
}

fn lm_blocks(m: &LmMorphism) -> [&KMatrix; 4] {
    [&m.l, &m.vinf, &m.lie_t, &m.lie_u]
}

/// Forms t^j dt / (D_Y · D_Z) with poles only on |Y| ∪ |Z| ∪ {∞}, and their residue sums there.
fn residue_sum_on_support(t: &ModulusTriple, proto: &NfElem, j: usize) -> Result<(String, Vec<String>), String> {
    let one = KPoly::one(proto);
    let den = t.y.finite_poly(0).unwrap_or_else(|| one.clone()).mul(&t.z.finite_poly(0).unwrap_or(one));
    let h = KRatFunc::new(KPoly::monomial(proto.one_like(), j), den).map_err(|e| e.to_string())?;
    let mut places: Vec<Place> = t.y.places().into_iter().chain(t.z.places()).filter(|p| !p.is_infinity()).collect();
    places.push(Place::infinity(0));
    let mut total = proto.zero_like();
    let mut parts = Vec::new();
    for p in &places {
        let r = residue(&h, p).map_err(|e| e.to_string())?;
        parts.push(format!("{}: {}", p.label(), r));
        total = total.add(&r);
    }
    if total.is_zero() {
        Ok((h.to_string(), parts))
    } else {
        Err(format!("form {} dt has residue sum {} ({})", h, total, parts.join(", ")))
    }
}

pub fn functoriality(ctx: &Ctx, report: &mut Report) {
    let cap = ctx.cfg.torsion_cap;
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let proto = corpus.field.zero();
        let ts = ctx.instances(c);
        let hs = ctx.cohs(c);
        report.checks.push(check_each(label("functoriality", "hdr_pull(id) = id", corpus), hs, |_, h| {
            let id = CurveMap::identity(&proto, h.triple.comps);
            let p = hdr_pull_graded(&id, h, h).map_err(|e| json!({ "triple": h.triple.to_string(), "error": e.to_string() }))?;
            if p.is_identity() {
                Ok(())
            } else {
                Err(json!({ "triple": h.triple.to_string(), "pullback": mat(&p) }))
            }
        }));
        report.checks.push(check_each(label("functoriality", "lm_pull(id) = id", corpus), ts, |_, t| {
            let id = CurveMap::identity(&proto, t.comps);
            let m = lm_pull_capped(&id, t, t, cap).map_err(|e| json!({ "triple": t.to_string(), "error": e.to_string() }))?;
            if m.is_identity() {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "blocks": lm_blocks(&m).map(mat) }))
            }
        }));

        let pairs = &corpus.pairs;
        let target = first_index(pairs, |p| hdr_dim_oracle(&p.f.src) > 0 && hdr_dim_oracle(&p.g.dst) > 0);
        let describe_pair = |p: &crate::corpus::ComposablePair| json!({ "f": describe(&p.f), "g": describe(&p.g) });
        report.checks.push(check_each(label("functoriality", "(g o f)* = f* g* on cohomology", corpus), pairs, |i, p| {
            let w = |e: String| json!({ "pair": describe_pair(p), "error": e });
            let (ha, hb) = coh_pair(&p.f, &corpus.field);
            let hc = hdr_compute_over(&p.g.dst, &proto);
            let gf = p.g.map.compose(&p.f.map);
            let mut lhs = hdr_pull_graded(&gf, &ha, &hc).map_err(|e| w(e.to_string()))?;
            let rhs = hdr_pull_graded(&p.f.map, &ha, &hb).map_err(|e| w(e.to_string()))?.mul(&hdr_pull_graded(&p.g.map, &hb, &hc).map_err(|e| w(e.to_string()))?);
            if ctx.inject(i, target) {
                lhs = flip(&lhs);
            }
            if lhs == rhs {
                Ok(())
            } else {
                Err(json!({ "pair": describe_pair(p), "composite": mat(&lhs), "product": mat(&rhs) }))
            }
        }));
        report.checks.push(check_each(label("functoriality", "LM(g o f) = LM(f) LM(g)", corpus), pairs, |_, p| {
            let w = |e: String| json!({ "pair": describe_pair(p), "error": e });
            let gf = p.g.map.compose(&p.f.map);
            let lhs = lm_pull_capped(&gf, &p.f.src, &p.g.dst, cap).map_err(|e| w(e.to_string()))?;
            let lf = lm_pull_capped(&p.f.map, &p.f.src, &p.f.dst, cap).map_err(|e| w(e.to_string()))?;
            let lg = lm_pull_capped(&p.g.map, &p.g.src, &p.g.dst, cap).map_err(|e| w(e.to_string()))?;
            let rhs = lf.mul(&lg);
            for (name, (a, b)) in ["L", "Vinf", "LieT", "LieU"].iter().zip(lm_blocks(&lhs).into_iter().zip(lm_blocks(&rhs))) {
                if a != b {
                    return Err(json!({ "pair": describe_pair(p), "block": name, "composite": mat(a), "product": mat(b) }));
                }
            }
            Ok(())
        }));
        if !corpus.is_empty() {
            let wanted = ctx.cfg.pairs;
            if wanted >= 50 {
                report.checks.push(check_once(label("functoriality", "at least 50 composable pairs", corpus), || {
                    if pairs.len() >= 50 {
                        Ok(pairs.len())
                    } else {
                        Err(json!({ "pairs": pairs.len(), "required": 50 }))
                    }
                }));
            } else {
                report.warnings.push(format!("{}: only {} composable pairs requested (criterion asks for 50)", corpus.field_name(), wanted));
            }
        }

        let singles: Vec<&ModulusTriple> = ts.iter().filter(|t| t.comps == 1 && degree(t) > 0).collect();
        report.checks.push(check_each(label("functoriality", "residue theorem on the differential corpus", corpus), &singles, |_, t| {
            for j in 0..=degree(t) + 1 {
                residue_sum_on_support(t, &proto, j).map_err(|e| json!({ "triple": t.to_string(), "error": e }))?;
            }
            Ok(())
        }));
    }
}
