use serde_json::{json, Value};

use modmot::exactfield::{KMatrix, NumberField};
use modmot::laumon::{cartier_dual_dims, compati_check, del_iso, fil, gr, gr1_quotient, lm_construct_over, lm_pull_capped, r_dr, realize, LaumonError};
use modmot::modcoh::{hdr_compute_over, hdr_dim_oracle, hdr_pull_graded};
use modmot::projline::{CurveMap, ModulusTriple};

use super::cohomology::off_block;
use super::{check_each, flip, flip_at, label, mat, Ctx};
use crate::corpus::{describe, Morphism};
use crate::report::Report;

fn err(t: &ModulusTriple) -> impl Fn(LaumonError) -> Value + '_ {
    move |e| json!({ "triple": t.to_string(), "error": e.to_string() })
}

/// f* on 𝐇¹ against the realization of LM(f), block by block. The del block is
/// compared through the del isomorphisms of source and target.
fn realization_square(f: &CurveMap, src: &ModulusTriple, dst: &ModulusTriple, k: &NumberField, cap: u32, inject: bool) -> Result<(), Value> {
    let w = |e: String| json!({ "error": e });
    let proto = k.zero();
    let (hs, hd) = (hdr_compute_over(src, &proto), hdr_compute_over(dst, &proto));
    let mut g = hdr_pull_graded(f, &hs, &hd).map_err(|e| w(e.to_string()))?;
    if inject {
        g = flip(&g);
    }
    let (a, b) = (hs.dims(), hd.dims());
    if let Some(blk) = off_block(&g, a, b) {
        return Err(json!({ "nonzero_block": blk, "pullback": mat(&g) }));
    }
    let mor = lm_pull_capped(f, src, dst, cap).map_err(|e| w(e.to_string()))?;
    let ms = lm_construct_over(src, &proto).map_err(|e| w(e.to_string()))?;
    let md = lm_construct_over(dst, &proto).map_err(|e| w(e.to_string()))?;
    let r = realize(&mor, &ms, &md).map_err(|e| w(e.to_string()))?;
    let (is, id) = (del_iso(src, &proto).map_err(|e| w(e.to_string()))?, del_iso(dst, &proto).map_err(|e| w(e.to_string()))?);
    let pairs: [(&str, KMatrix, KMatrix); 3] = [
        ("del", g.block(0, 0, a.red, b.red).mul(&id), is.mul(&r.del)),
        ("uni", g.block(a.red, b.red, a.u, b.u), r.uni.clone()),
        ("inf", g.block(a.red + a.u, b.red + b.u, a.v, b.v), r.inf.clone()),
    ];
    for (name, lhs, rhs) in pairs {
        if lhs != rhs {
            return Err(json!({ "block": name, "cohomology": mat(&lhs), "realization": mat(&rhs) }));
        }
    }
    Ok(())
}

pub fn compat(ctx: &Ctx, report: &mut Report) {
    let cap = ctx.cfg.torsion_cap;
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let ts = ctx.instances(c);
        report.checks.push(check_each(label("laumon-compat", "R_dR(LM(T)) matches H1(T) blockwise", corpus), ts, |_, t| {
            let r = compati_check(t).map_err(err(t))?;
            let (d, g) = (r.rdr, r.graded);
            if d.del == g.red && d.uni == g.u && d.inf == g.v && d.total() == g.total && g.total == r.oracle {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "report": serde_json::to_value(&r).unwrap_or_default() }))
            }
        }));
        let target = corpus.morphisms.iter().position(|m| hdr_dim_oracle(&m.src) > 0 && hdr_dim_oracle(&m.dst) > 0);
        report.checks.push(check_each(label("laumon-compat", "realization squares commute", corpus), &corpus.morphisms, |i, m: &Morphism| {
            realization_square(&m.map, &m.src, &m.dst, &corpus.field, cap, ctx.inject(i, target)).map_err(|w| json!({ "morphism": describe(m), "detail": w }))
        }));
    }
}

pub fn filtration(ctx: &Ctx, report: &mut Report) {
    let cap = ctx.cfg.torsion_cap;
    for (c, corpus) in ctx.corpora.iter().enumerate() {
        let proto = corpus.field.zero();
        let ts = ctx.instances(c);
        report.checks.push(check_each(label("filtration", "fil1 LM(X,Y,Z) = LM(X,Y,Z_red)", corpus), ts, |_, t| {
            let m = lm_construct_over(t, &proto).map_err(err(t))?;
            let tr = t.with_z_red();
            let image = lm_construct_over(&tr, &proto).map_err(err(t))?;
            let f1 = fil(&m, 1).map_err(err(t))?;
            if !image.same_linear_data(&f1) {
                return Err(json!({ "triple": t.to_string(), "fil1": format!("{:?}", f1.dims()), "LM(Z_red)": format!("{:?}", image.dims()) }));
            }
            let id = CurveMap::identity(&proto, t.comps);
            let edge = lm_pull_capped(&id, t, &tr, cap).map_err(err(t))?;
            let shape_ok = edge.vinf.rows() == m.vinf && edge.vinf.cols() == 0;
            if [&edge.l, &edge.lie_t, &edge.lie_u].iter().all(|b| b.is_identity()) && shape_ok {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "edge": [mat(&edge.l), mat(&edge.vinf), mat(&edge.lie_t), mat(&edge.lie_u)] }))
            }
        }));
        report.checks.push(check_each(label("filtration", "Gr1 dims = LM(X,Y_red,Z_red) dims", corpus), ts, |_, t| {
            let m = lm_construct_over(t, &proto).map_err(err(t))?;
            let g1 = gr(&m, 1).map_err(err(t))?.dims();
            let red = lm_construct_over(&t.red(), &proto).map_err(err(t))?.dims();
            if g1 == red {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "gr1": g1, "reduced": red }))
            }
        }));

        let hs = ctx.cohs(c);
        let target = hs.iter().position(|h| h.dims().u > 0 && h.dims().red > 0);
        report.checks.push(check_each(label("filtration", "ker[fil1 -> Gr1(fil1)] is the LieU block", corpus), ts, |i, t| {
            let m = lm_construct_over(t, &proto).map_err(err(t))?;
            let (f1, g1, q) = gr1_quotient(&m).map_err(err(t))?;
            let r = realize(&q, &g1, &f1).map_err(err(t))?;
            let mut total = r.del.direct_sum(&r.inf).direct_sum(&r.uni);
            if ctx.inject(i, target) {
                total = flip_at(&total, 0, total.cols() - 1);
            }
            let ker = total.kernel();
            let rd = r_dr(&f1);
            let fil2 = fil(&m, 2).map_err(err(t))?.lie_u;
            let in_uni = ker.block(0, 0, rd.del + rd.inf, ker.cols()).is_zero();
            if ker.cols() == fil2 && fil2 == m.lie_u && in_uni && rd.uni == m.lie_u {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "kernel": mat(&ker), "lie_u": m.lie_u, "quotient": mat(&total) }))
            }
        }));
        report.checks.push(check_each(label("filtration", "Cartier dual dims of LM(X,Y,Z) = LM(X,Z,Y) dims", corpus), ts, |_, t| {
            let m = lm_construct_over(t, &proto).map_err(err(t))?;
            let dual = cartier_dual_dims(&m).dims();
            let swapped = lm_construct_over(&t.swap(), &proto).map_err(err(t))?.dims();
            if dual == swapped {
                Ok(())
            } else {
                Err(json!({ "triple": t.to_string(), "dual": dual, "swapped": swapped }))
            }
        }));
    }
}
