use ttk::certify::{
    certify_iwip, monoid_certify, monoid_setup, theorem_main, theorem_main_swapped, InpOutcome,
};
use ttk::examples::rank3_example;
use ttk::gates::intrinsic_gates;
use ttk::whitehead::gate_index_list;

fn words(generators: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=generators {
                let mut x: Vec<usize> = w.clone();
                x.push(g);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn positive_words_in_certified_generators_certify() {
    let r = rank3_example();
    let gens = [r.f.clone(), r.k.clone()];
    let (gates, exps) = monoid_setup(&gens).unwrap();
    assert_eq!(gates, r.gates);
    let expected = gate_index_list(&r.f, &gates).unwrap().list_string();
    for w in words(2, 4) {
        let m = monoid_certify(&gens, &exps, &gates, &w).unwrap();
        assert!(m.legalizing, "{w:?}");
        assert!(m.iwip.verdict.is_certified(), "{w:?}: {}", m.iwip.verdict);
        assert!(m.index.certified_stable && m.index.within_bound());
        assert_eq!(m.index.list_string(), expected, "{w:?}");
    }
}

#[test]
fn certified_composites_satisfy_the_criterion() {
    let r = rank3_example();
    for (f, g) in [(&r.f, &r.k), (&r.k, &r.f), (&r.f, &r.f)] {
        for report in [
            theorem_main(f, g).unwrap(),
            theorem_main_swapped(f, g).unwrap(),
        ] {
            assert!(report.certified(), "{:?}", report.failed());
            let c = report.conclusions.unwrap();
            assert!(matches!(c.inp, InpOutcome::Absent(_)));
            assert!(c.iwip.primitive && c.iwip.whitehead_connected());
            assert_eq!(intrinsic_gates(&c.composite).unwrap(), r.gates);
            assert!(c.index.certified_stable && c.index.within_bound());
            let direct = certify_iwip(&c.composite).unwrap();
            assert!(direct.verdict.is_certified());
        }
    }
}
