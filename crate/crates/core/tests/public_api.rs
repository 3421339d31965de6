use modmot::exactfield::{express_generator_in_powers, qf, NumberField};
use modmot::laumon::{compati_check, lm_construct};
use modmot::modcoh::{cech_dim, hdr_compute, hdr_dim_oracle, hdr_duality, hdr_pull};
use modmot::noriquiver::{coalgebra_dual, default_multipliers, end_compute, mpo_build, mpo_vertex};
use modmot::projline::{parse_curve_map, parse_divisor, ModulusTriple};

fn triple(k: &NumberField, y: &str, z: &str) -> ModulusTriple {
    ModulusTriple::new(1, parse_divisor(k, y).unwrap(), parse_divisor(k, z).unwrap()).unwrap()
}

#[test]
fn named_dimensions() {
    let k = NumberField::rationals();
    let mut cases = vec![(triple(&k, "(t)+(t-1)", "inf"), 1), (triple(&k, "2*(t)", "3*inf"), 3)];
    for n in 1..=6 {
        cases.push((triple(&k, &format!("{}*inf", n), ""), n - 1));
    }
    for (t, want) in cases {
        assert_eq!(hdr_compute(&t).dims().total, want, "{}", t);
        assert_eq!(hdr_dim_oracle(&t), want, "{}", t);
        assert_eq!(cech_dim(&t, &k.zero()).unwrap().dim, want, "{}", t);
    }
}

#[test]
fn generator_of_sqrt2_in_squares() {
    let k = NumberField::parse("-2,0,1").unwrap();
    let pc = express_generator_in_powers(&k, 2).unwrap();
    assert_eq!(pc.coefficients, vec![qf(-3, 4), qf(1, 2)]);
    assert_eq!(pc.evaluate(&k), k.generator());
}

#[test]
fn duality_pairing_is_perfect_and_identity_pulls_back_to_identity() {
    let k = NumberField::parse("-2,0,1").unwrap();
    let t = triple(&k, "2*(t)+(t^2-2)", "(t-1)+2*inf");
    let g = hdr_duality(&t);
    assert_eq!(g.rank(), hdr_dim_oracle(&t));
    let id = parse_curve_map(&k, "(t)/(1)", 1, 1).unwrap();
    assert!(hdr_pull(&id, &t, &t).unwrap().is_identity());
}

#[test]
fn laumon_motive_realizes_to_the_graded_cohomology() {
    let k = NumberField::rationals();
    let t = triple(&k, "3*(t)+(t+1)", "2*inf");
    let r = compati_check(&t).unwrap();
    assert_eq!(r.rdr.total(), r.oracle);
    assert_eq!(r.graded.total, r.oracle);
    assert!(lm_construct(&t).is_ok());
}

#[test]
fn nori_endomorphisms_of_the_power_quiver_are_the_field() {
    let k = NumberField::parse("-2,0,1").unwrap();
    let rep = mpo_build(4, &k, &default_multipliers(&k, 4)).unwrap();
    let vs: Vec<String> = (2..=4).map(mpo_vertex).collect();
    let e: Vec<&str> = vs.iter().map(|s| s.as_str()).collect();
    let a = end_compute(&rep, &e).unwrap();
    assert_eq!(a.basis.len(), 2);
    assert!(coalgebra_dual(&a).unwrap().axioms_hold());
}
