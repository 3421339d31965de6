use super::*;
use crate::exactfield::{KPoly, NumberField};
use crate::modcoh::uv::blocks_of;
use crate::modcoh::{hdr_compute, hdr_dim_oracle, Dims};
use crate::projline::{parse_curve_map, parse_divisor, parse_map, CurveMap, ModulusTriple};

fn qq() -> NumberField {
    NumberField::rationals()
}

fn tri(k: &NumberField, y: &str, z: &str) -> ModulusTriple {
    ModulusTriple::p1(parse_divisor(k, y).unwrap(), parse_divisor(k, z).unwrap()).unwrap()
}

fn dims(l: usize, vinf: usize, lie_t: usize, lie_u: usize) -> LmDims {
    LmDims { l, vinf, lie_t, lie_u }
}

fn map(k: &NumberField, s: &str) -> CurveMap {
    CurveMap::single(parse_map(k, s).unwrap())
}

#[test]
fn construction_dimensions() {
    let k = qq();
    let m = lm_construct(&tri(&k, "(t)+inf", "(t-1)+(t+1)")).unwrap();
    assert_eq!(m.dims(), dims(1, 0, 1, 0));
    assert_eq!(r_dr(&m).total(), 2);
    assert_eq!(lm_construct(&tri(&k, "3*inf", "")).unwrap().dims(), dims(0, 0, 0, 2));
    assert_eq!(lm_construct(&tri(&k, "", "2*(t)")).unwrap().dims(), dims(0, 1, 0, 0));
    // P_n: only the unipotent block survives
    for n in 2..6 {
        let r = r_dr(&lm_construct(&tri(&k, &format!("{}*inf", n), "(t)")).unwrap());
        assert_eq!(r, RdRSpace { del: 0, inf: 0, uni: n - 1 });
    }
}

#[test]
fn filtration_bookkeeping() {
    let k = qq();
    let m = lm_construct(&tri(&k, "2*(t-1)+(t+1)+(t-2)", "(t)+3*inf+(t-3)")).unwrap();
    assert_eq!(m.dims(), dims(2, 2, 2, 1));
    assert_eq!(fil(&m, 1).unwrap().dims(), dims(2, 0, 2, 1));
    assert_eq!(fil(&m, 2).unwrap().dims(), dims(0, 0, 0, 1));
    assert_eq!(fil(&m, 3).unwrap().dims(), dims(0, 0, 0, 0));
    assert!(fil(&m, 0).unwrap().same_linear_data(&m));
    assert_eq!(fil(&m, 4).unwrap_err(), LaumonError::BadIndex(4));
    assert_eq!(gr(&m, 3).unwrap_err(), LaumonError::BadIndex(3));
    let g: Vec<LmDims> = (0..3).map(|i| gr(&m, i).unwrap().dims()).collect();
    assert_eq!(g[0], dims(0, 2, 0, 0));
    assert_eq!(g[1], dims(2, 0, 2, 0));
    assert_eq!(g[2], dims(0, 0, 0, 1));
    let sum = g.iter().fold(dims(0, 0, 0, 0), |a, b| dims(a.l + b.l, a.vinf + b.vinf, a.lie_t + b.lie_t, a.lie_u + b.lie_u));
    assert_eq!(sum, m.dims());
    assert_eq!(fil(&gr(&m, 0).unwrap(), 1).unwrap().dims().total(), 0);
    let x = times(&m);
    assert_eq!(x.dims(), dims(2, 2, 2, 0));
    assert!(times(&x).same_linear_data(&x));
    let free = lm_construct(&tri(&k, "(t)+(t-1)", "2*inf")).unwrap();
    assert!(times(&free).same_linear_data(&free));
    // Gr¹ of LM(X, Y, Z) has the dimensions of LM(X, Y_red, Z_red)
    let t = tri(&k, "2*(t-1)+(t+1)+(t-2)", "(t)+3*inf+(t-3)");
    assert_eq!(gr(&m, 1).unwrap().dims(), lm_construct(&t.red()).unwrap().dims());
}

#[test]
fn sharp_and_realization() {
    let k = qq();
    let p = k.zero();
    let r = |d: LmDims| r_dr(&LinearLaumonMotive::from_dims(d, &p));
    assert_eq!(r(dims(0, 0, 0, 3)), RdRSpace { del: 0, inf: 0, uni: 3 });
    assert_eq!(r(dims(1, 0, 0, 0)), RdRSpace { del: 1, inf: 0, uni: 0 });
    assert_eq!(r(dims(0, 1, 0, 0)), RdRSpace { del: 0, inf: 1, uni: 0 });
    assert_eq!(r(dims(1, 0, 1, 0)), RdRSpace { del: 2, inf: 0, uni: 0 });
    assert_eq!(r(dims(0, 0, 0, 0)).total(), 0);
    // Ext(M_×, G_a)^* for [ℤ → 0] and for F_inf[1]
    assert_eq!(sharp(&LinearLaumonMotive::from_dims(dims(1, 0, 0, 0), &p)).ext_dual, 1);
    assert_eq!(sharp(&LinearLaumonMotive::from_dims(dims(0, 2, 0, 0), &p)).ext_dual, 2);
    for (y, z) in [("3*(t)+2*inf", "2*(t-1)+(t+1)"), ("2*(t-1)+(t+1)+(t-2)", "(t)+3*inf+(t-3)"), ("4*inf", "3*(t)+(t-1)")] {
        let m = lm_construct(&tri(&k, y, z)).unwrap();
        assert!(!m.v_m().is_zero(), "v_M vanishes on ({}, {})", y, z);
        let s = sharp(&m);
        assert!(s.splitting_holds());
        assert_eq!(s.dim(), m.dims().total());
    }
}

#[test]
fn cartier_duality_dims() {
    let k = qq();
    let p = k.zero();
    let m = LinearLaumonMotive::from_dims(dims(2, 3, 1, 4), &p);
    assert_eq!(cartier_dual_dims(&cartier_dual_dims(&m)).dims(), m.dims());
    assert_eq!(cartier_dual_dims(&LinearLaumonMotive::from_dims(dims(0, 0, 0, 3), &p)).dims(), dims(0, 3, 0, 0));
    for (y, z) in [("2*(t)+inf", "(t-1)+(t+1)+2*(t-2)"), ("3*inf", ""), ("", "2*(t)"), ("(t^2-2)+2*(t)", "(t-1)+3*inf")] {
        let t = tri(&k, y, z);
        let a = cartier_dual_dims(&lm_construct(&t).unwrap()).dims();
        assert_eq!(a, lm_construct(&t.swap()).unwrap().dims(), "{}", t);
    }
}

#[test]
fn compatibility_with_cohomology() {
    let k = qq();
    let rep = compati_check(&tri(&k, "2*(t)", "3*inf")).unwrap();
    assert_eq!(rep.rdr, RdRSpace { del: 0, inf: 2, uni: 1 });
    assert_eq!(rep.graded, Dims { red: 0, u: 1, v: 2, total: 3 });
    let places = ["(t)", "(t-1)", "(t+1)", "(t^2-2)", "inf"];
    let mut n = 0;
    for my in 0..3u32 {
        for mz in 0..3u32 {
            for (i, py) in places.iter().enumerate() {
                for pz in places.iter().skip(i + 1) {
                    let y = if my == 0 { String::new() } else { format!("{}*{}", my, py) };
                    let z = if mz == 0 { String::new() } else { format!("{}*{}+(t-2)", mz, pz) };
                    let t = tri(&k, &y, &z);
                    let r = compati_check(&t).unwrap_or_else(|e| panic!("{}: {}", t, e));
                    assert_eq!(r.rdr.total(), hdr_dim_oracle(&t));
                    n += 1;
                }
            }
        }
    }
    assert!(n > 80);
}

#[test]
fn hensel_log_matches_form_inverse() {
    let k = qq();
    for (y, z) in [("3*(t^2+1)+4*inf", "(t)+(t-1)+(t+2)"), ("5*(t-3)", "(t)+inf"), ("2*(t^2-2)+3*(t)", "(t-1)+(t+1)+inf")] {
        let t = tri(&k, y, z);
        let m = lm_construct(&t).unwrap();
        let UEt::Witnesses(w) = &m.u_et else { panic!("rational Z_red expected") };
        let u = crate::modcoh::u_space(&t.y, &k.zero());
        for (j, wit) in w.iter().enumerate() {
            let jets: Vec<KPoly> = u.blocks.iter().map(|b| log_unipotent(b, &b.jet(&wit.func).unwrap())).collect();
            assert_eq!(u.coords(&jets), m.et_uni.col(j), "witness {} on {}", j, t);
        }
    }
    // the section really is a ring section along a degree-2 place
    let b = &blocks_of(&parse_divisor(&k, "4*(t^2+1)").unwrap(), &k.zero())[0];
    let theta = hensel_root(b);
    assert!(b.chart.compose(&theta).rem(&b.modulus(4)).is_zero());
}

#[test]
fn abstract_etale_part() {
    let k = qq();
    let m = lm_construct(&tri(&k, "2*(t-1)", "(t^2-2)+(t)")).unwrap();
    assert!(matches!(m.u_et, UEt::Abstract));
    assert_eq!(m.l, 2);
    let k2 = NumberField::parse("-2,0,1").unwrap();
    let m2 = lm_construct(&tri(&k2, "2*(t-1)", "(t-g)+(t+g)+(t)")).unwrap();
    assert!(matches!(m2.u_et, UEt::Witnesses(ref w) if w.len() == 2));
}

fn corpus(k: &NumberField) -> Vec<(CurveMap, ModulusTriple, ModulusTriple)> {
    let sq = map(k, "(t^2)/(1)");
    vec![
        (sq.clone(), tri(k, "2*(t-1)+(t+1)+(t-2)", "(t)+3*inf+(t-3)"), tri(k, "2*(t-1)+(t-4)", "(t)+2*inf")),
        (sq.clone(), tri(k, "2*(t-1)+(t+1)", "(t^4-2)+(t)"), tri(k, "2*(t-1)+(t-3)", "(t^2-2)+(t)")),
        (sq.clone(), tri(k, "3*(t^4+1)+(t-1)", "2*(t)+inf"), tri(k, "3*(t^2+1)+(t-1)", "(t)+inf")),
        (map(k, "(2*t+1)/(1)"), tri(k, "3*(t)+(t-1)", "2*inf+(t+1)"), tri(k, "3*(t-1)+(t-3)", "2*inf+(t+1)")),
        (map(k, "(t^2+1)/(t)"), tri(k, "2*(t-1)+(t+1)", "2*(t)+2*inf+(t^2+1)"), tri(k, "2*(t-2)+(t+2)", "inf+(t)")),
        (map(k, "(t)/(1)"), tri(k, "3*(t)", "2*(t-1)+(t+1)"), tri(k, "3*(t)", "(t-1)+(t+1)")),
    ]
}

#[test]
fn realization_squares() {
    let k = qq();
    for (f, s, d) in corpus(&k) {
        compati_square(&f, &s, &d).unwrap_or_else(|e| panic!("{} : {} -> {}: {}", f, s, d, e));
    }
    let k2 = NumberField::parse("-2,0,1").unwrap();
    let f = CurveMap::single(parse_map(&k2, "(t^2)/(1)").unwrap());
    compati_square(&f, &tri(&k2, "2*(t-1)+(t+1)", "(t-g)+(t+g)+2*inf"), &tri(&k2, "2*(t-1)", "(t-2)+inf")).unwrap();
}

#[test]
fn functoriality() {
    let k = qq();
    let t = tri(&k, "2*(t)+(t-1)", "3*inf+2*(t+1)+(t-2)");
    assert!(lm_pull(&CurveMap::identity(&k.zero(), 1), &t, &t).unwrap().is_identity());
    let sq = map(&k, "(t^2)/(1)");
    let t1 = tri(&k, "2*(t-1)", "2*inf+(t)");
    let t2 = tri(&k, "2*(t-1)+(t+1)", "3*inf+(t)");
    let t4 = tri(&k, "2*(t-1)+(t+1)+(t^2+1)", "5*inf+(t)");
    let p21 = lm_pull(&sq, &t2, &t1).unwrap();
    let p42 = lm_pull(&sq, &t4, &t2).unwrap();
    let p41 = lm_pull(&sq.compose(&sq), &t4, &t1).unwrap();
    assert_eq!(p42.mul(&p21), p41);
    // the cycle (0) − (∞) pulls back to twice itself
    assert_eq!(p21.l.get(0, 0), &k.from_int(2));
    assert!(matches!(lm_pull(&sq, &tri(&k, "2*(t-1)+(t+1)", "2*inf"), &t1), Err(LaumonError::NotAMorphism(_))));
}

#[test]
fn fil1_edge() {
    let k = qq();
    let t = tri(&k, "2*(t)+(t-1)", "3*inf+2*(t+1)+(t-2)");
    let tr = t.with_z_red();
    let id = CurveMap::identity(&k.zero(), 1);
    let mor = lm_pull(&id, &t, &tr).unwrap();
    let m = lm_construct(&t).unwrap();
    let image = lm_construct(&tr).unwrap();
    assert!(image.same_linear_data(&fil(&m, 1).unwrap()));
    for b in [&mor.l, &mor.lie_t, &mor.lie_u] {
        assert!(b.is_identity());
    }
    assert_eq!((mor.vinf.rows(), mor.vinf.cols()), (m.vinf, 0));
    compati_square(&id, &t, &tr).unwrap();
}

#[test]
fn two_components() {
    let k = qq();
    let y = parse_divisor(&k, "2*(t)@0 + (t)@1 + (t-1)@1").unwrap();
    let z = parse_divisor(&k, "inf@0 + (t-1)@0 + 2*inf@1").unwrap();
    let t = ModulusTriple::new(2, y, z).unwrap();
    let r = compati_check(&t).unwrap();
    assert_eq!(r.rdr.total(), hdr_compute(&t).dims().total);
    let swap = parse_curve_map(&k, "(t)/(1)@0->1;(t)/(1)@1->0", 2, 2).unwrap();
    let t2 = ModulusTriple::new(
        2,
        parse_divisor(&k, "(t)@0 + (t-1)@0 + 2*(t)@1").unwrap(),
        parse_divisor(&k, "2*inf@0 + inf@1 + (t-1)@1").unwrap(),
    )
    .unwrap();
    compati_square(&swap, &t, &t2).unwrap();
}

#[test]
fn torsion_tolerance() {
    let k = qq();
    let d = parse_divisor(&k, "(t)+(t-2)").unwrap();
    let p = k.zero();
    let f = crate::exactfield::KRatFunc::var(&p);
    let one = crate::exactfield::KRatFunc::constant(k.one());
    // t is 0 and 2 on the two places, so t - 1 is -1 and 1: a square root of a constant
    let g = f.sub(&one);
    assert_eq!(equal_up_to_torsion(&g, &one, &d, &p, TORSION_BOUND), Some(2));
    assert_eq!(equal_up_to_torsion(&f.add(&one), &one, &d, &p, TORSION_BOUND), None);
}

#[test]
fn fil2_is_the_kernel_of_the_gr1_quotient() {
    let k = qq();
    let t = tri(&k, "2*(t)+(t-1)+3*inf", "2*(t+1)+(t-2)");
    let m = lm_construct(&t).unwrap();
    let (f1, g1, q) = gr1_quotient(&m).unwrap();
    let r = realize(&q, &g1, &f1).unwrap();
    let total = r.del.direct_sum(&r.inf).direct_sum(&r.uni);
    let ker = total.kernel();
    assert_eq!(ker.cols(), fil(&m, 2).unwrap().lie_u);
    assert_eq!(ker.cols(), 3);
    let rd = r_dr(&f1);
    // kernel vectors live in the uni block
    assert!(ker.block(0, 0, rd.del + rd.inf, ker.cols()).is_zero());
}
