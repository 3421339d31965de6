//! Geometry of ℙ¹ and finite disjoint unions of copies of it: places,
//! gcd-free divisors, rational maps, residues, traces and the morphism
//! conditions of the two modulus categories.
//!
//! Charts: every component carries the coordinate t; near ∞ we use s = 1/t,
//! so ds = −dt/t².

mod divisor;
pub mod local;
mod map;
mod parse;
mod triple;

pub use divisor::{gcd_free_basis, Divisor, Place, PlaceKind};
pub use local::{residue, trace_along};
pub use map::{CurveMap, RationalMap};
pub use parse::{parse_curve_map, parse_divisor, parse_map, parse_poly};
pub use triple::{bar_violations, is_morphism_bar, is_morphism_under, under_violations, ModulusTriple, Violation};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("map is constant")]
    ConstantMap,
    #[error("place polynomial is constant")]
    ConstantPlace,
    #[error("place polynomial {0} is not monic")]
    NotMonic(String),
    #[error("place polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("supports of Y and Z overlap")]
    SupportsOverlap,
    #[error("component mismatch: {0}")]
    BadComponent(String),
    #[error("denominator factor {0} could not be cleared against the map")]
    PoleOnBranchLocus(String),
}

#[cfg(test)]
mod tests {
    use super::local::*;
    use super::*;
    use crate::exactfield::{KPoly, KRatFunc, NumberField, Scalar};

    fn qq() -> NumberField {
        NumberField::rationals()
    }

    fn div(k: &NumberField, s: &str) -> Divisor {
        parse_divisor(k, s).unwrap()
    }

    fn rf(k: &NumberField, n: &str, d: &str) -> KRatFunc {
        KRatFunc::new(parse_poly(k, n).unwrap(), parse_poly(k, d).unwrap()).unwrap()
    }

    #[test]
    fn reduced_divisors() {
        let k = qq();
        let d = div(&k, "3*(t) + 1*inf");
        assert_eq!(d.red(), div(&k, "(t) + inf"));
        assert_eq!(div(&k, "2*(t^2-2)").red(), div(&k, "(t^2-2)"));
        assert_eq!(d.red().red(), d.red());
        assert_eq!(d.degree(), 4);
    }

    #[test]
    fn canonical_refinement() {
        let k = qq();
        let d = div(&k, "(t^2-1) + (t-1)");
        assert_eq!(d, div(&k, "2*(t-1) + (t+1)"));
    }

    #[test]
    fn pullbacks() {
        let k = qq();
        let sq = parse_map(&k, "(t^2)/(1)").unwrap();
        let f = CurveMap::single(sq);
        assert_eq!(f.pullback(&div(&k, "(t-1)")), div(&k, "(t-1) + (t+1)"));
        assert_eq!(f.pullback(&div(&k, "inf")), div(&k, "2*inf"));
        let id = CurveMap::identity(&k.zero(), 1);
        let d = div(&k, "3*(t) + (t^2-2) + 2*inf");
        assert_eq!(id.pullback(&d), d);
        let inv = CurveMap::single(parse_map(&k, "(1)/(t)").unwrap());
        assert_eq!(inv.pullback(&div(&k, "2*(t)")), div(&k, "2*inf"));
        for d in [div(&k, "3*(t) + (t^2-2)"), div(&k, "inf + 2*(t+1)")] {
            for m in ["(t^2)/(1)", "(t^2+1)/(t-3)", "(2*t)/(1)", "(1)/(t^3)"] {
                let f = CurveMap::single(parse_map(&k, m).unwrap());
                assert_eq!(f.pullback(&d).degree(), f.maps[0].degree() * d.degree());
            }
        }
    }

    #[test]
    fn leq_with_refinement() {
        let k = NumberField::parse("-2,0,1").unwrap();
        assert!(div(&k, "(t)").leq(&div(&k, "2*(t) + inf")));
        assert!(div(&k, "(t-g)").leq(&div(&k, "(t^2-2)")));
        assert!(!div(&k, "2*(t)").leq(&div(&k, "(t)")));
    }

    #[test]
    fn morphism_examples() {
        let k = qq();
        let t = |y: &str, z: &str| ModulusTriple::p1(div(&k, y), div(&k, z)).unwrap();
        let id = CurveMap::identity(&k.zero(), 1);
        let a = t("2*(t)", "3*inf + 2*(t-1)");
        assert!(is_morphism_bar(&id, &a, &a.with_z_red()));
        assert!(is_morphism_bar(&id, &a.with_y_red(), &a));
        assert!(is_morphism_under(&id, &a.with_z_red(), &a));
        let sq = CurveMap::single(parse_map(&k, "(t^2)/(1)").unwrap());
        assert!(is_morphism_bar(&sq, &t("(t-1)+(t+1)", "3*inf"), &t("(t-1)", "2*inf")));
        assert!(!is_morphism_bar(&sq, &t("(t-1)+(t+1)", "2*inf"), &t("(t-1)", "2*inf")));
        assert!(is_morphism_under(&sq, &t("3*inf", "(t-1)+(t+1)"), &t("2*inf", "(t-1)")));
    }

    #[test]
    fn residues() {
        let k = qq();
        let t0 = Place::finite(0, parse_poly(&k, "t").unwrap());
        assert!(residue(&rf(&k, "1", "t"), &t0).unwrap().is_one());
        let p2 = Place::finite(0, parse_poly(&k, "t^2-2").unwrap());
        assert!(residue(&rf(&k, "1", "t^2-2"), &p2).unwrap().is_zero());
        assert_eq!(residue(&rf(&k, "t", "t^2-2"), &p2).unwrap(), k.from_int(1));
        // higher-order pole: d(1/t) has no residue, 1/t^3 + 5/t has residue 5
        assert_eq!(residue(&rf(&k, "1+5*t^2", "t^3"), &t0).unwrap(), k.from_int(5));
        assert_eq!(residue(&rf(&k, "1", "t"), &Place::infinity(0)).unwrap(), k.from_int(-1));
        for (n, d) in [("t^3+1", "t^2*(t-1)^3*(t^2-2)"), ("7", "(t^2+1)^2*(t+3)"), ("t^5", "(t-2)^2")] {
            assert!(residue_sum(&rf(&k, n, d)).is_zero());
        }
    }

    #[test]
    fn residue_theorem_over_quadratic_field() {
        let k = NumberField::parse("-2,0,1").unwrap();
        let h = rf(&k, "g*t^2+1", "(t-g)^2*(t^2+t+1)*t^3");
        assert!(residue_sum(&h).is_zero());
    }

    #[test]
    fn traces() {
        let k = qq();
        let sq = parse_map(&k, "(t^2)/(1)").unwrap();
        let tr = |g: KRatFunc| trace_along(&sq, &g).unwrap();
        assert_eq!(tr(rf(&k, "1", "1")), rf(&k, "2", "1"));
        assert!(tr(rf(&k, "t", "1")).is_zero());
        assert_eq!(tr(rf(&k, "t^2", "1")), rf(&k, "2*t", "1"));
        assert_eq!(tr(rf(&k, "1", "t")), rf(&k, "0", "1"));
        assert_eq!(tr(rf(&k, "1", "t^2+1")), rf(&k, "2", "t+1"));
        // Tr(dt/t) = dt′/t′ for t′ = t²: pushforward of a log form
        assert_eq!(push_differential(&sq, &rf(&k, "1", "t")).unwrap(), rf(&k, "1", "t"));
    }

    #[test]
    fn parse_errors_are_positioned() {
        let k = qq();
        match parse_divisor(&k, "3*(t) + 1*(2*t-2)") {
            Err(GeomError::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_divisor(&k, "(t^2)"), Err(GeomError::Parse { .. })));
        assert_eq!(div(&k, "3*(t) + 1*(t^2-2) + 2*inf@0").degree(), 7);
        assert_eq!(div(&k, "inf@1").terms()[0].0.comp, 1);
        let _ = KPoly::var(&k.zero());
    }

    #[test]
    fn jets() {
        let k = qq();
        let f = rf(&k, "1", "t-1");
        let inf = Place::infinity(0);
        // 1/(t-1) = s + s^2 + s^3 + ...
        assert_eq!(jet_at(&f, &inf, 4).unwrap(), parse_poly(&k, "t+t^2+t^3").unwrap());
        assert!(jet_at(&rf(&k, "t", "1"), &inf, 2).is_none());
    }
}
