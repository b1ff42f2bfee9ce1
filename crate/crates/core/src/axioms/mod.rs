//! Mechanical checks of the properties a proximity measure should satisfy,
//! the seeded corpus they run on, and the property table built from them.

pub mod checks;
pub mod corpus;
pub mod figures;
pub mod perturbation;
pub mod report;
pub mod table;

pub use checks::{
    check_connectivity, check_diagonal_maximality, check_disconnection, check_doubly_stochastic,
    check_macrovertex, check_metric, check_metric_axioms, check_monotonicity, check_nonnegativity,
    check_property, check_reversal, check_symmetry, check_transit, check_triangle,
    metric_transform, replay, transit_triples, validate_macrovertex, Evaluator,
};
pub use corpus::{generate, CorpusConfig, CorpusGraph, Regime};
pub use figures::{run_figure_examples, FigureCheck};
pub use perturbation::{candidate_perturbations, Perturbation, PerturbationKind};
pub use report::{Property, PropertyReport, Verdict, Witness};
pub use table::{
    expected_cell, reproduce_cells, reproduce_table1, table_evaluator, Cell, CellResult, Table1,
    TableConfig, TableWitness,
};
