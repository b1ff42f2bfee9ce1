use std::fmt;

use crate::error::{ProximityError, Result};
use crate::graph::WeightedMultigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationKind {
    /// Raise the weight of the edge at this index.
    IncreaseWeight { edge: usize },
    /// Add a new edge (arc) from `k` to `t`.
    AddEdge,
}

/// A single-edge change: a weight increase or a new edge from `k` to `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub kind: PerturbationKind,
    pub k: usize,
    pub t: usize,
    pub delta: f64,
}

impl Perturbation {
    pub fn add_edge(k: usize, t: usize, delta: f64) -> Result<Self> {
        Self::validated(PerturbationKind::AddEdge, k, t, delta)
    }

    pub fn increase(g: &WeightedMultigraph, edge: usize, delta: f64) -> Result<Self> {
        let e = g.edges().get(edge).ok_or_else(|| {
            ProximityError::InvalidParameter(format!("no edge with index {edge}"))
        })?;
        Self::validated(
            PerturbationKind::IncreaseWeight { edge },
            e.tail,
            e.head,
            delta,
        )
    }

    fn validated(kind: PerturbationKind, k: usize, t: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(ProximityError::InvalidParameter(format!(
                "perturbation size must be positive, got {delta}"
            )));
        }
        Ok(Self { kind, k, t, delta })
    }

    pub fn apply(&self, g: &WeightedMultigraph) -> Result<WeightedMultigraph> {
        match self.kind {
            PerturbationKind::IncreaseWeight { edge } => g.with_weight_increase(edge, self.delta),
            PerturbationKind::AddEdge => g.with_edge(self.k, self.t, self.delta),
        }
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verb = match self.kind {
            PerturbationKind::IncreaseWeight { .. } => "increase",
            PerturbationKind::AddEdge => "add",
        };
        write!(f, "{verb}({},{},+{})", self.k + 1, self.t + 1, self.delta)
    }
}

/// Every single-edge perturbation of `g` that keeps weights below `bound`
/// (when given) and multiplicities at most `max_multiplicity`.
///
/// With a bound, increases take half the remaining slack and new edges half
/// the bound; without one both use `unbounded_delta`.
pub fn candidate_perturbations(
    g: &WeightedMultigraph,
    bound: Option<f64>,
    max_multiplicity: usize,
    unbounded_delta: f64,
) -> Vec<Perturbation> {
    let n = g.n();
    let mut out = Vec::new();
    for k in 0..n {
        for t in 0..n {
            if k == t || (!g.is_directed() && t < k) {
                continue;
            }
            if let Some(&edge) = g.edges_between(k, t).first() {
                let w = g.edges()[edge].weight;
                let delta = bound.map_or(unbounded_delta, |b| (b - w) / 2.0);
                if let Ok(p) = Perturbation::increase(g, edge, delta) {
                    out.push(p);
                }
            }
            if g.multiplicity(k, t) < max_multiplicity {
                let delta = bound.map_or(unbounded_delta, |b| b / 2.0);
                if let Ok(p) = Perturbation::add_edge(k, t, delta) {
                    out.push(p);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_delta() {
        assert!(Perturbation::add_edge(0, 1, 0.0).is_err());
        assert!(Perturbation::add_edge(0, 1, f64::NAN).is_err());
    }

    #[test]
    fn candidates_respect_bound_and_multiplicity() {
        let g = WeightedMultigraph::undirected(3, [(0, 1, 0.2)]).unwrap();
        let cands = candidate_perturbations(&g, Some(0.5), 1, 1.0);
        // increase 0-1, add 0-2, add 1-2
        assert_eq!(cands.len(), 3);
        let inc = cands
            .iter()
            .find(|p| matches!(p.kind, PerturbationKind::IncreaseWeight { .. }))
            .unwrap();
        assert!((inc.delta - 0.15).abs() < 1e-15);
        let after = inc.apply(&g).unwrap();
        assert!(after.max_weight() < 0.5);
        assert_eq!(after.edge_count(), 1);
    }

    #[test]
    fn display_is_one_based() {
        let p = Perturbation::add_edge(0, 2, 1.0).unwrap();
        assert_eq!(p.to_string(), "add(1,3,+1)");
    }
}
