//! The proximity matrix type shared by every measure, and a uniform way of
//! selecting and configuring measures.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{ProximityError, Result};
use crate::forest::{dense_forest_accessibility, forest_accessibility, DenseForestParams};
use crate::graph::WeightedMultigraph;
use crate::paths::{connection_reliability, path_accessibility, PathOptions, ReliabilityOptions};
use crate::walks::route_accessibility;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    Paths,
    Reliability,
    Routes,
    Forests,
    DenseForests,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::Paths,
        MeasureKind::Reliability,
        MeasureKind::Routes,
        MeasureKind::Forests,
        MeasureKind::DenseForests,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Paths => "paths",
            MeasureKind::Reliability => "reliability",
            MeasureKind::Routes => "routes",
            MeasureKind::Forests => "forests",
            MeasureKind::DenseForests => "dense-forests",
        }
    }

    /// Whether the measure is defined on multidigraphs.
    pub fn supports_directed(self) -> bool {
        matches!(
            self,
            MeasureKind::Paths | MeasureKind::Reliability | MeasureKind::Routes
        )
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = ProximityError;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ProximityError::InvalidParameter(format!("unknown measure '{s}'")))
    }
}

/// An `n x n` matrix of proximities together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityMatrix {
    matrix: DMatrix<f64>,
    measure: MeasureKind,
    params: Vec<(&'static str, f64)>,
    warnings: Vec<String>,
}

impl ProximityMatrix {
    pub fn new(measure: MeasureKind, matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "proximity matrix must be square");
        Self {
            matrix,
            measure,
            params: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn with_param(mut self, name: &'static str, value: f64) -> Self {
        self.params.push((name, value));
        self
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warnings.push(warning.into());
        self
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn measure(&self) -> MeasureKind {
        self.measure
    }

    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, v)| v)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

impl std::ops::Index<(usize, usize)> for ProximityMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.matrix[idx]
    }
}

/// A measure together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureConfig {
    pub kind: MeasureKind,
    /// Parameter of the forest family `(I + tau L)^-1`.
    pub tau: f64,
    /// Dense-forest parameter; `None` selects half the dense-forest threshold of each graph.
    pub alpha: Option<f64>,
    pub paths: PathOptions,
    pub reliability: ReliabilityOptions,
}

impl MeasureConfig {
    pub fn new(kind: MeasureKind) -> Self {
        Self {
            kind,
            tau: 1.0,
            alpha: None,
            paths: PathOptions::default(),
            reliability: ReliabilityOptions::default(),
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_path_options(mut self, paths: PathOptions) -> Self {
        self.paths = paths;
        self
    }

    pub fn with_reliability_options(mut self, reliability: ReliabilityOptions) -> Self {
        self.reliability = reliability;
        self
    }

    /// Resolves the dense-forest parameter for `g`.
    pub fn alpha_for(&self, g: &WeightedMultigraph) -> Result<f64> {
        match self.alpha {
            Some(a) => Ok(a),
            None => Ok(DenseForestParams::for_graph(g)?.default_alpha()),
        }
    }

    pub fn compute(&self, g: &WeightedMultigraph) -> Result<ProximityMatrix> {
        match self.kind {
            MeasureKind::Paths => Ok(path_accessibility(g, &self.paths)),
            MeasureKind::Reliability => connection_reliability(g, &self.reliability),
            MeasureKind::Routes => route_accessibility(g),
            MeasureKind::Forests => forest_accessibility(g, self.tau),
            MeasureKind::DenseForests => dense_forest_accessibility(g, self.alpha_for(g)?),
        }
    }
}
