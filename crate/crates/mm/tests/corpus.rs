use mm::{corpus_generate, SuiteConfig};
use modmot::projline::{is_morphism_bar, is_morphism_under};

fn small(max_deg: usize) -> SuiteConfig {
    SuiteConfig { max_deg, pairs: 20, morphisms: 40, unions: 6, ..SuiteConfig::default() }
}

fn names(cfg: &SuiteConfig, field: &str) -> Vec<String> {
    corpus_generate(cfg, field).unwrap().triples.iter().map(|t| t.to_string()).collect()
}

#[test]
fn same_seed_same_corpus() {
    let cfg = small(4);
    for f in ["", "-2,0,1"] {
        let (a, b) = (corpus_generate(&cfg, f).unwrap(), corpus_generate(&cfg, f).unwrap());
        let key = |c: &mm::Corpus| {
            (
                c.triples.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                c.morphisms.iter().map(mm::corpus::describe).collect::<Vec<_>>(),
                c.pairs.iter().map(|p| (mm::corpus::describe(&p.f), mm::corpus::describe(&p.g))).collect::<Vec<_>>(),
                c.unions.iter().map(|u| u.total.to_string()).collect::<Vec<_>>(),
            )
        };
        assert_eq!(key(&a), key(&b));
    }
}

#[test]
fn degree_two_corpus_contains_the_basic_triples() {
    let ts = names(&small(2), "");
    for want in ["(P1, Y = 1*(t), Z = 1*inf)", "(P1, Y = 2*(t), Z = 0)", "(P1, Y = 0, Z = 1*inf)"] {
        assert!(ts.iter().any(|t| t == want), "{} missing from {:?}", want, ts);
    }
    let cfg = small(2);
    for t in corpus_generate(&cfg, "").unwrap().triples {
        assert!(t.y.degree() + t.z.degree() <= 2, "{}", t);
    }
}

#[test]
fn triples_grow_with_the_degree_cap() {
    let (a, b) = (names(&small(2), ""), names(&small(3), ""));
    assert!(a.len() < b.len());
    assert!(a.iter().all(|t| b.contains(t)));
}

#[test]
fn every_morphism_satisfies_its_predicate() {
    let c = corpus_generate(&small(4), "-2,0,1").unwrap();
    assert!(!c.morphisms.is_empty());
    for m in &c.morphisms {
        assert!(is_morphism_bar(&m.map, &m.src, &m.dst), "{}", mm::corpus::describe(m));
    }
    for p in &c.pairs {
        assert_eq!(p.f.dst.to_string(), p.g.src.to_string());
        assert!(is_morphism_bar(&p.g.map.compose(&p.f.map), &p.f.src, &p.g.dst));
    }
    for u in &c.unions {
        assert_eq!(u.parts.len(), u.inclusions.len());
        for (part, i) in u.parts.iter().zip(&u.inclusions) {
            assert!(is_morphism_bar(i, part, &u.total));
            assert!(is_morphism_under(i, part, &u.total));
        }
    }
}

#[test]
fn zero_degree_cap_gives_an_empty_corpus() {
    let c = corpus_generate(&SuiteConfig::empty(), "").unwrap();
    assert!(c.is_empty() && c.morphisms.is_empty() && c.pairs.is_empty() && c.unions.is_empty());
}

#[test]
fn bad_field_is_an_error() {
    assert!(corpus_generate(&small(2), "0,0,1").is_err());
    assert!(corpus_generate(&small(2), "x").is_err());
}
