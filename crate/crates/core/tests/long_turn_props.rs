mod common;

use num::BigUint;
use ttk::examples::{fibonacci_gates, sign_gates};
use ttk::gates::{intrinsic_gates, is_train_track_morphism};
use ttk::long_turns::{
    count_lt, enumerate_legal_paths, enumerate_lt, expansion_profile, lt_image, lt_is_legal,
    lt_map_c, LongTurn, LtImage, EXPANSION_SEARCH_BOUND,
};
use ttk::pi1::map_is_automorphism;
use ttk::{GateStructure, GraphMap};

const TURN_CAP: u32 = 40_000;

/// Train track automorphisms with their intrinsic gates, plus the rank-2
/// ones that are train tracks for the two standard structures.
fn train_tracks() -> Vec<(GraphMap, GateStructure)> {
    let mut out = Vec::new();
    for f in common::self_maps()
        .into_iter()
        .filter(|f| map_is_automorphism(f).unwrap())
    {
        let g = intrinsic_gates(&f).unwrap();
        if is_train_track_morphism(&f, &g, &g).unwrap() {
            out.push((f, g));
        }
    }
    for f in common::rank2_maps()
        .into_iter()
        .filter(|f| map_is_automorphism(f).unwrap())
    {
        for g in [fibonacci_gates(), sign_gates()] {
            if is_train_track_morphism(&f, &g, &g).unwrap() {
                out.push((f.clone(), g));
            }
        }
    }
    out
}

fn small(gates: &GateStructure, c: usize) -> bool {
    count_lt(gates, c).0 <= BigUint::from(TURN_CAP)
}

fn image(f: &GraphMap, g: &GateStructure, t: &LongTurn) -> Option<LongTurn> {
    match lt_image(f, g, t).unwrap() {
        LtImage::Degenerate => None,
        LtImage::Turn(x) => Some(x),
    }
}

#[test]
fn legal_turns_have_legal_images() {
    let mut checked = 0;
    for (f, g) in train_tracks() {
        for c in 1..=4 {
            if !small(&g, c) {
                break;
            }
            for t in enumerate_lt(&g, c)
                .into_iter()
                .filter(|t| lt_is_legal(&g, t))
            {
                let img = image(&f, &g, &t)
                    .unwrap_or_else(|| panic!("{}: legal turn went degenerate", f.name()));
                assert!(lt_is_legal(&g, &img), "{}", f.name());
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn long_subturns_share_image_legality() {
    let mut checked = 0;
    for (f, g) in train_tracks() {
        for c in 1..=4 {
            if !small(&g, c) || count_lt(&g, c).0 > BigUint::from(4000u32) {
                break;
            }
            for t in enumerate_lt(&g, c) {
                let Some(full) = image(&f, &g, &t) else {
                    continue;
                };
                for i in 1..=c {
                    for j in 1..=c {
                        let sub =
                            LongTurn::new(&g, t.first()[..i].to_vec(), t.second()[..j].to_vec())
                                .unwrap();
                        if let Some(s) = image(&f, &g, &sub) {
                            assert_eq!(lt_is_legal(&g, &s), lt_is_legal(&g, &full), "{}", f.name());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn long_turn_images_compose() {
    let tts = train_tracks();
    let mut checked = 0;
    for (f, gf) in &tts {
        for (g, gg) in &tts {
            if gf != gg || f.source().name() != g.source().name() {
                continue;
            }
            let gof = GraphMap::compose(g, f).unwrap();
            for c in 1..=3 {
                if !small(gf, c) || count_lt(gf, c).0 > BigUint::from(3000u32) {
                    break;
                }
                for t in enumerate_lt(gf, c) {
                    let direct = image(&gof, gf, &t);
                    let stepwise = image(f, gf, &t).and_then(|x| image(g, gf, &x));
                    assert_eq!(direct, stepwise, "{} after {}", g.name(), f.name());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn long_branches_make_long_turns() {
    let mut checked = 0;
    for (f, g) in train_tracks() {
        let c = f.cancellation_bound() + 1;
        if !small(&g, c) {
            continue;
        }
        for t in enumerate_lt(&g, c) {
            assert!(image(&f, &g, &t).is_some(), "{}: {:?}", f.name(), t);
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn strong_expansion_constant_is_justified() {
    let mut checked = 0;
    for (f, g) in train_tracks() {
        let p = expansion_profile(&f, &g, EXPANSION_SEARCH_BOUND).unwrap();
        let Some(k) = p.k else { continue };
        for len in k..=3 * k {
            if !small(&g, len) {
                break;
            }
            for v in f.source().vertices() {
                for path in enumerate_legal_paths(&g, v, len) {
                    assert!(
                        f.image_dirs(path.dirs()).len() > len,
                        "{} on {:?}",
                        f.name(),
                        path
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn induced_map_on_long_turns_is_total() {
    let mut checked = 0;
    for (f, g) in train_tracks() {
        let p = expansion_profile(&f, &g, EXPANSION_SEARCH_BOUND).unwrap();
        let Some(c) = p.required_bound() else {
            continue;
        };
        if !small(&g, c) {
            continue;
        }
        let m = lt_map_c(&f, &g, c).unwrap();
        assert_eq!(m.image.len(), m.turns.len());
        assert!(m.image.iter().all(|&j| j < m.turns.len()));
        checked += 1;
    }
    assert!(checked >= 5);
}
