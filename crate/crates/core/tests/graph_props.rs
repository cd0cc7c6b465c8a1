use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttk::examples::{fibonacci, rank3_example, rose2, tribonacci};
use ttk::graph::{reduce_dirs, reverse_dirs};
use ttk::{Dir, EdgeId, EdgePath, Graph, GraphMap, TransitionMatrix, VertexId};

/// Repeatedly deletes the leftmost cancelling pair.
fn leftmost_cancellation(dirs: &[Dir]) -> Vec<Dir> {
    let mut w = dirs.to_vec();
    while let Some(i) = w.windows(2).position(|p| p[1] == p[0].reversed()) {
        w.drain(i..i + 2);
    }
    w
}

/// All paths with at most `max` edges starting anywhere in `graph`.
fn all_paths(graph: &Graph, max: usize) -> Vec<Vec<Dir>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<Dir>> = graph.directions().into_iter().map(|d| vec![d]).collect();
    for _ in 0..max {
        out.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for p in &frontier {
            let v = graph.term(*p.last().unwrap());
            for &d in graph.out_dirs(v) {
                let mut q = p.clone();
                q.push(d);
                next.push(q);
            }
        }
        frontier = next;
    }
    out
}

fn theta() -> Arc<Graph> {
    Arc::new(
        Graph::new(
            "theta",
            &["u", "w"],
            &[("a", "u", "w"), ("b", "u", "w"), ("c", "u", "w")],
        )
        .unwrap(),
    )
}

#[test]
fn reduction_matches_leftmost_cancellation_exhaustively() {
    for g in [rose2(), theta()] {
        let paths = all_paths(&g, 8);
        assert!(paths.len() > 1000);
        for p in paths {
            let r = reduce_dirs(&p);
            assert_eq!(r, leftmost_cancellation(&p));
            assert_eq!(reduce_dirs(&r), r);
            assert!(r.windows(2).all(|w| w[1] != w[0].reversed()));
        }
    }
}

#[test]
fn reversal_is_an_involution_without_fixed_points() {
    for g in [rose2(), theta()] {
        for d in g.directions() {
            assert_eq!(d.reversed().reversed(), d);
            assert_ne!(d.reversed(), d);
        }
    }
}

fn random_rose_map(
    rng: &mut ChaCha8Rng,
    name: &str,
    src: &Arc<Graph>,
    tgt: &Arc<Graph>,
) -> GraphMap {
    let dirs = tgt.directions();
    let images: Vec<Vec<Dir>> = src
        .edges()
        .map(|_| {
            (0..rng.gen_range(1..=4))
                .map(|_| dirs[rng.gen_range(0..dirs.len())])
                .collect()
        })
        .collect();
    GraphMap::new(name, src.clone(), tgt.clone(), vec![VertexId(0)], images).unwrap()
}

fn rose(rank: usize) -> Arc<Graph> {
    let labels: Vec<String> = (0..rank).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Arc::new(Graph::rose(&format!("R{rank}"), &refs).unwrap())
}

#[test]
fn transition_matrix_is_functorial_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let (a, b, c) = (
            rose(rng.gen_range(2..=4)),
            rose(rng.gen_range(2..=4)),
            rose(rng.gen_range(2..=4)),
        );
        let f = random_rose_map(&mut rng, "f", &a, &b);
        let g = random_rose_map(&mut rng, "g", &b, &c);
        let gf = GraphMap::compose(&g, &f).unwrap();
        assert_eq!(
            gf.transition_matrix(),
            g.transition_matrix().mul(&f.transition_matrix())
        );
    }
}

#[test]
fn transition_matrix_is_functorial_on_fixtures() {
    let r3 = rank3_example();
    let pairs = [
        (fibonacci(), fibonacci()),
        (fibonacci(), fibonacci().power(3).unwrap()),
        (tribonacci(), tribonacci()),
        (r3.f.clone(), r3.h.clone()),
        (r3.h.clone(), r3.f.clone()),
        (tribonacci(), r3.f.clone()),
    ];
    for (g, f) in pairs {
        let gf = GraphMap::compose(&g, &f).unwrap();
        assert_eq!(
            gf.transition_matrix(),
            g.transition_matrix().mul(&f.transition_matrix())
        );
    }
}

/// Primitivity by scanning powers up to Wielandt's bound `(n−1)² + 1`.
fn primitive_by_powers(m: &[Vec<u64>]) -> bool {
    let n = m.len();
    let mut p = m.to_vec();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&x| x > 0)) {
            return true;
        }
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| (p[i][k] * m[k][j]).min(1))
                            .sum::<u64>()
                            .min(1)
                    })
                    .collect()
            })
            .collect();
    }
    false
}

#[test]
fn primitivity_matches_power_scan_on_all_small_matrices() {
    let mut primitive = 0;
    for code in 0..3u32.pow(9) {
        let m: Vec<Vec<u64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| ((code / 3u32.pow(3 * i + j)) % 3) as u64)
                    .collect()
            })
            .collect();
        let expected = primitive_by_powers(&m);
        assert_eq!(TransitionMatrix::from_counts(m).is_primitive(), expected);
        primitive += expected as usize;
    }
    assert!(primitive > 0 && primitive < 3usize.pow(9));
}

fn dir_strategy(edges: u32) -> impl Strategy<Value = Dir> {
    (0..edges, any::<bool>()).prop_map(|(e, r)| {
        if r {
            Dir::neg(EdgeId(e))
        } else {
            Dir::pos(EdgeId(e))
        }
    })
}

fn rose_map_strategy(edges: u32) -> impl Strategy<Value = Vec<Vec<Dir>>> {
    prop::collection::vec(
        prop::collection::vec(dir_strategy(edges), 1..4),
        edges as usize,
    )
}

proptest! {
    #[test]
    fn images_of_reduced_paths_commute_with_composition(
        f in rose_map_strategy(2),
        g in rose_map_strategy(2),
        p in prop::collection::vec(dir_strategy(2), 0..=6),
    ) {
        let r = rose2();
        let f = GraphMap::new("f", r.clone(), r.clone(), vec![VertexId(0)], f).unwrap();
        let g = GraphMap::new("g", r.clone(), r.clone(), vec![VertexId(0)], g).unwrap();
        let path = EdgePath::new(&r, VertexId(0), p).unwrap();
        let gf = GraphMap::compose(&g, &f).unwrap();
        let direct = gf.apply(&path).unwrap().reduced();
        let stepwise = g.apply(&f.apply(&path).unwrap().reduced()).unwrap().reduced();
        prop_assert_eq!(direct, stepwise);
    }

    #[test]
    fn reduction_commutes_with_reversal(p in prop::collection::vec(dir_strategy(3), 0..12)) {
        prop_assert_eq!(reduce_dirs(&reverse_dirs(&p)), reverse_dirs(&reduce_dirs(&p)));
    }
}
