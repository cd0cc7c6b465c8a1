//! Seeded survey of random positive automorphisms of the rose.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{certify_iwip, InpOutcome};
use crate::error::{Error, Result};
use crate::graph::{Dir, EdgeId, Graph};
use crate::map::GraphMap;
use crate::whitehead::gate_index_list;

pub const INCONCLUSIVE_INP: &str = "Inconclusive: INP";
pub const INCONCLUSIVE_OTHER: &str = "Inconclusive: other";

pub fn rose_labels(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (1..=rank).map(|i| format!("x{i}")).collect()
    }
}

/// Product of `k ~ U[5, 25]` positive Nielsen moves `x_i ↦ x_i x_j`,
/// drawn from stream `stream` of the seeded generator.
pub fn random_positive_automorphism(rank: usize, seed: u64, stream: u64) -> Result<GraphMap> {
    if rank < 2 {
        return Err(Error::InvalidGraph("rank must be at least 2".into()));
    }
    let labels = rose_labels(rank);
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let graph = Arc::new(Graph::rose(&format!("R{rank}"), &refs)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let moves = rng.gen_range(5..=25);
    let mut images: Vec<Vec<Dir>> = (0..rank)
        .map(|i| vec![Dir::pos(EdgeId(i as u32))])
        .collect();
    for _ in 0..moves {
        let i = rng.gen_range(0..rank);
        let mut j = rng.gen_range(0..rank - 1);
        if j >= i {
            j += 1;
        }
        let tail = images[j].clone();
        images[i].extend(tail);
    }
    let vmap = vec![graph.vertices().next().unwrap()];
    GraphMap::new(&format!("phi{stream}"), graph.clone(), graph, vmap, images)
}

/// Histogram key for one sample.
pub fn classify(map: &GraphMap) -> Result<String> {
    let report = certify_iwip(map)?;
    if report.verdict.is_certified() {
        let index = gate_index_list(map, &report.gates)?;
        if !index.within_bound() {
            return Err(Error::Internal(format!(
                "certified sample `{}` has index sum {} above N - 1",
                map.name(),
                index.total
            )));
        }
        return Ok(format!("Certified {}", index.list_string()));
    }
    Ok(match report.inp {
        InpOutcome::Present(_) => INCONCLUSIVE_INP.to_string(),
        _ => INCONCLUSIVE_OTHER.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyReport {
    pub rank: usize,
    pub count: usize,
    pub seed: u64,
    pub histogram: BTreeMap<String, usize>,
}

impl SurveyReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "survey rank {} count {} seed {}\n",
            self.rank, self.count, self.seed
        );
        for (k, n) in &self.histogram {
            s += &format!("{k}: {n}\n");
        }
        s
    }
}

/// Thread count from `TTK_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("TTK_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

pub fn survey(
    rank: usize,
    count: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SurveyReport> {
    if rank < 2 {
        return Err(Error::InvalidGraph("rank must be at least 2".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let keys: Vec<Result<String>> = pool.install(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|i| classify(&random_positive_automorphism(rank, seed, i)?))
            .collect()
    });
    let mut histogram = BTreeMap::new();
    for k in keys {
        *histogram.entry(k?).or_insert(0) += 1;
    }
    Ok(SurveyReport {
        rank,
        count,
        seed,
        histogram,
    })
}
