//! Seeded random multigraphs under the weight regimes the measures need.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, WeightedMultigraph};
use crate::paths::epsilon0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Weights in `[0.3, 0.95] * epsilon0(n, m)`.
    Paths,
    /// Weights in `[0.3, 0.95] / (m (n - 1))`.
    Routes,
    /// Weights in `[0.3, 0.95] / (m n)`.
    RouteTriangle,
    /// Weights in `[0.5, 2]`.
    Forests,
    /// Weights drawn from `{1, 2, 3}`.
    IntegerForests,
}

impl Regime {
    fn tag(self) -> u64 {
        match self {
            Regime::Paths => 1,
            Regime::Routes => 2,
            Regime::RouteTriangle => 3,
            Regime::Forests => 4,
            Regime::IntegerForests => 5,
        }
    }

    /// Exclusive upper bound on single edge weights, if the regime has one.
    pub fn bound(self, n: usize, m: usize) -> Option<f64> {
        let m = m as f64;
        match self {
            Regime::Paths => Some(epsilon0(n, m as usize)),
            Regime::Routes => Some(1.0 / (m * (n - 1) as f64)),
            Regime::RouteTriangle => Some(1.0 / (m * n as f64)),
            Regime::Forests | Regime::IntegerForests => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub max_edges: usize,
    /// Largest number of parallel edges between a pair.
    pub max_multiplicity: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            count: 200,
            min_n: 2,
            max_n: 7,
            max_edges: 12,
            max_multiplicity: 2,
        }
    }
}

/// A generated graph with the multiplicity cap and weight bound it was drawn under.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusGraph {
    pub index: usize,
    pub graph: WeightedMultigraph,
    pub multiplicity: usize,
    pub bound: Option<f64>,
}

pub fn generate(regime: Regime, directed: bool, cfg: &CorpusConfig) -> Vec<CorpusGraph> {
    let stream =
        cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (regime.tag() << 1 | directed as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    (0..cfg.count)
        .map(|index| {
            let n = rng.random_range(cfg.min_n..=cfg.max_n);
            let m = rng.random_range(1..=cfg.max_multiplicity.max(1));
            let pairs = if directed {
                n * (n - 1)
            } else {
                n * (n - 1) / 2
            };
            let target = rng.random_range(1..=cfg.max_edges.min(pairs * m).max(1));
            let bound = regime.bound(n, m);
            let mut counts = vec![0usize; n * n];
            let mut edges = Vec::with_capacity(target);
            while edges.len() < target {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a == b {
                    continue;
                }
                let key = if directed {
                    a * n + b
                } else {
                    a.min(b) * n + a.max(b)
                };
                if counts[key] >= m {
                    continue;
                }
                counts[key] += 1;
                let w = match regime {
                    Regime::Forests => rng.random_range(0.5..=2.0),
                    Regime::IntegerForests => rng.random_range(1..=3) as f64,
                    _ => rng.random_range(0.3..=0.95) * bound.expect("bounded regime"),
                };
                edges.push(Edge::new(a, b, w));
            }
            let graph =
                WeightedMultigraph::new(n, directed, edges).expect("generated graph is valid");
            CorpusGraph {
                index,
                graph,
                multiplicity: m,
                bound,
            }
        })
        .collect()
}
