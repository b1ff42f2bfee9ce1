//! Regenerates the property-by-measure table from a seeded corpus.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::checks::{check_monotonicity, check_property, replay, Evaluator};
use crate::axioms::corpus::{generate, CorpusConfig, Regime};
use crate::axioms::perturbation::candidate_perturbations;
use crate::axioms::report::{Property, PropertyReport, Verdict};
use crate::error::{ProximityError, Result};
use crate::graph::WeightedMultigraph;
use crate::measure::MeasureKind;
use crate::paths::ReliabilityOptions;

/// A table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    /// Holds.
    Plus,
    /// Holds under a restriction or only non-strictly.
    PlusRestricted,
    /// Holds under an additional constraint.
    PlusConstrained,
    /// Fails.
    Minus,
    /// Not applicable to the graphs the measure is defined on.
    Inapplicable,
}

impl Cell {
    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Plus => "+",
            Cell::PlusRestricted => "+*",
            Cell::PlusConstrained => "+**",
            Cell::Minus => "-",
            Cell::Inapplicable => "x",
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The expected entry for a measure and one of the ten table properties.
pub fn expected_cell(measure: MeasureKind, property: Property) -> Cell {
    use Cell::*;
    use MeasureKind as M;
    use Property as P;
    match (measure, property) {
        (M::Forests | M::DenseForests, P::Reversal) => Inapplicable,
        (
            M::Paths | M::Reliability,
            P::DiagonalMaximality | P::Triangle | P::Transit | P::Monotonicity1,
        ) => PlusRestricted,
        (M::Reliability, P::Monotonicity2) => PlusRestricted,
        (M::Routes, P::Triangle) => PlusConstrained,
        (M::Routes, P::Monotonicity3) => Minus,
        (M::DenseForests, P::Monotonicity1 | P::Monotonicity2 | P::Monotonicity3) => Minus,
        _ => Plus,
    }
}

/// A violating report with the graph it was observed on.
#[derive(Debug, Clone, PartialEq)]
pub struct TableWitness {
    pub graph: WeightedMultigraph,
    pub report: PropertyReport,
}

impl TableWitness {
    /// Recomputes the report from scratch.
    pub fn replay(&self, ev: &Evaluator) -> Result<PropertyReport> {
        replay(ev, &self.graph, &self.report)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub measure: MeasureKind,
    pub property: Property,
    /// Expected entry; `None` for properties outside the table.
    pub expected: Option<Cell>,
    pub holds: usize,
    pub nonstrict: usize,
    pub violated: usize,
    pub not_applicable: usize,
    /// Violations observed on multidigraphs.
    pub violated_directed: usize,
    /// Smallest margin among applicable checks.
    pub worst_margin: f64,
    pub witness: Option<TableWitness>,
}

impl CellResult {
    fn new(measure: MeasureKind, property: Property) -> Self {
        Self {
            measure,
            property,
            expected: Property::TABLE
                .contains(&property)
                .then(|| expected_cell(measure, property)),
            holds: 0,
            nonstrict: 0,
            violated: 0,
            not_applicable: 0,
            violated_directed: 0,
            worst_margin: f64::INFINITY,
            witness: None,
        }
    }

    fn record(&mut self, graph: &WeightedMultigraph, report: PropertyReport) {
        match report.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::HoldsNonstrict => self.nonstrict += 1,
            Verdict::Violated => {
                self.violated += 1;
                if graph.is_directed() {
                    self.violated_directed += 1;
                }
            }
            Verdict::NotApplicable => {
                self.not_applicable += 1;
                return;
            }
        }
        if report.margin < self.worst_margin {
            self.worst_margin = report.margin;
        }
        if report.verdict == Verdict::Violated && self.witness.is_none() {
            self.witness = Some(TableWitness {
                graph: graph.clone(),
                report,
            });
        }
    }

    pub fn observed(&self) -> Cell {
        if self.violated > 0 {
            Cell::Minus
        } else if self.holds + self.nonstrict == 0 {
            Cell::Inapplicable
        } else if self.nonstrict > 0 {
            Cell::PlusRestricted
        } else {
            Cell::Plus
        }
    }

    /// Whether the observation agrees with the expected entry: `+` needs every
    /// check to hold strictly, the restricted forms also accept boundary cases,
    /// and `-` needs a witness.
    /// Properties outside the table agree unless violated.
    pub fn agrees(&self) -> bool {
        let observed = self.observed();
        match self.expected {
            None => observed != Cell::Minus,
            Some(Cell::Plus) => observed == Cell::Plus,
            Some(Cell::PlusRestricted | Cell::PlusConstrained) => {
                matches!(observed, Cell::Plus | Cell::PlusRestricted)
            }
            Some(Cell::Minus) => observed == Cell::Minus && self.witness.is_some(),
            Some(Cell::Inapplicable) => observed == Cell::Inapplicable,
        }
    }

    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{} {} expected={} observed={} holds={} nonstrict={} violated={} (digraphs {}) n/a={}",
            self.measure,
            self.property,
            self.expected.map_or("?", Cell::symbol),
            self.observed(),
            self.holds,
            self.nonstrict,
            self.violated,
            self.violated_directed,
            self.not_applicable
        );
        if self.worst_margin.is_finite() {
            line.push_str(&format!(" worst={:.3e}", self.worst_margin));
        }
        if let Some(w) = &self.witness {
            line.push_str(&format!(" witness[{}]", w.report.to_line()));
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableConfig {
    pub corpus: CorpusConfig,
    /// Perturbations sampled per graph for the monotonicity rows.
    pub perturbations_per_graph: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            corpus: CorpusConfig::default(),
            perturbations_per_graph: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub cells: Vec<CellResult>,
}

impl Table1 {
    pub fn cell(&self, measure: MeasureKind, property: Property) -> &CellResult {
        self.cells
            .iter()
            .find(|c| c.measure == measure && c.property == property)
            .expect("every table cell is present")
    }

    pub fn all_agree(&self) -> bool {
        self.cells.iter().all(CellResult::agrees)
    }

    /// Observed grid, one row per property.
    pub fn render(&self) -> String {
        let mut out = format!("{:<22}", "property");
        for m in MeasureKind::ALL {
            out.push_str(&format!("{:>14}", m.name()));
        }
        out.push('\n');
        for p in Property::TABLE {
            out.push_str(&format!("{:<22}", p.name()));
            for m in MeasureKind::ALL {
                let c = self.cell(m, p);
                let mark = if c.agrees() { "" } else { "!" };
                out.push_str(&format!("{:>14}", format!("{}{mark}", c.observed())));
            }
            out.push('\n');
        }
        out
    }
}

/// The evaluator used for a measure's table rows.
pub fn table_evaluator(kind: MeasureKind) -> Evaluator {
    let mut ev = Evaluator::for_table(kind);
    // Edge sets are small, so the union-grouped inclusion-exclusion stays cheap
    // even with many paths per pair.
    ev.config.reliability = ReliabilityOptions { max_paths: 100_000 };
    ev
}

fn regimes(kind: MeasureKind, property: Property) -> Vec<(Regime, bool)> {
    match kind {
        MeasureKind::Paths | MeasureKind::Reliability => {
            vec![(Regime::Paths, false), (Regime::Paths, true)]
        }
        MeasureKind::Routes if property == Property::Triangle => {
            vec![(Regime::RouteTriangle, false)]
        }
        MeasureKind::Routes => vec![(Regime::Routes, false), (Regime::Routes, true)],
        MeasureKind::Forests | MeasureKind::DenseForests => vec![(Regime::Forests, false)],
    }
}

/// Checks the chosen properties of one measure over the corpus. Monotonicity
/// items share one pass over sampled perturbations; macrovertex needs a vertex
/// set and is rejected.
pub fn reproduce_cells(
    kind: MeasureKind,
    properties: &[Property],
    cfg: &TableConfig,
) -> Result<Vec<CellResult>> {
    let ev = table_evaluator(kind);
    let mut row: Vec<CellResult> = properties
        .iter()
        .map(|&p| CellResult::new(kind, p))
        .collect();
    let monotone = [
        Property::Monotonicity1,
        Property::Monotonicity2,
        Property::Monotonicity3,
    ];
    for (pi, &property) in properties.iter().enumerate() {
        if monotone.contains(&property) {
            continue;
        }
        if property == Property::Macrovertex {
            return Err(ProximityError::InvalidParameter(
                "macrovertex needs a graph and a vertex set".into(),
            ));
        }
        for (regime, directed) in regimes(kind, property) {
            for cg in generate(regime, directed, &cfg.corpus) {
                let report = check_property(&ev, &cg.graph, property)?;
                row[pi].record(&cg.graph, report);
            }
        }
    }
    if properties.iter().any(|p| monotone.contains(p)) {
        for (regime, directed) in regimes(kind, Property::Monotonicity1) {
            for cg in generate(regime, directed, &cfg.corpus) {
                let mut cands = candidate_perturbations(&cg.graph, cg.bound, cg.multiplicity, 1.0);
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.corpus.seed ^ (cg.index as u64) << 8);
                cands.shuffle(&mut rng);
                for p in cands.iter().take(cfg.perturbations_per_graph) {
                    for report in check_monotonicity(&ev, &cg.graph, p)? {
                        if let Some(pi) = properties.iter().position(|&q| q == report.property) {
                            row[pi].record(&cg.graph, report);
                        }
                    }
                }
            }
        }
    }
    Ok(row)
}

/// Checks every table cell over the corpus.
pub fn reproduce_table1(cfg: &TableConfig) -> Result<Table1> {
    let mut cells = Vec::new();
    for kind in MeasureKind::ALL {
        cells.extend(reproduce_cells(kind, &Property::TABLE, cfg)?);
    }
    Ok(Table1 { cells })
}
