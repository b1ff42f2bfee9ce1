//! One checker per normative property. Each returns a [`PropertyReport`]
//! whose margin is the signed worst slack over everything it inspected.

use nalgebra::DMatrix;

use crate::axioms::perturbation::Perturbation;
use crate::axioms::report::{
    Property, PropertyReport, Verdict, Witness, Worst, EQUALITY_TOLERANCE, STRICT_MARGIN,
};
use crate::error::{ProximityError, Result};
use crate::forest::{dense_forest_matrix, DenseForestReading};
use crate::graph::WeightedMultigraph;
use crate::measure::{MeasureConfig, MeasureKind};
use crate::paths::PathOptions;

/// A configured measure as seen by the checkers.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluator {
    pub config: MeasureConfig,
    /// How dense-forest changes are read by the monotonicity checks.
    pub reading: DenseForestReading,
}

impl Evaluator {
    pub fn new(config: MeasureConfig) -> Self {
        Self {
            config,
            reading: DenseForestReading::Pinv,
        }
    }

    /// Settings used for the property table: undirected cycles counted once
    /// on the path-accessibility diagonal and the pseudoinverse reading of
    /// dense-forest changes.
    pub fn for_table(kind: MeasureKind) -> Self {
        Self::new(MeasureConfig::new(kind).with_path_options(PathOptions::cycles_once()))
    }

    pub fn with_reading(mut self, reading: DenseForestReading) -> Self {
        self.reading = reading;
        self
    }

    pub fn kind(&self) -> MeasureKind {
        self.config.kind
    }

    pub fn applies_to(&self, g: &WeightedMultigraph) -> bool {
        !g.is_directed() || self.kind().supports_directed()
    }

    pub fn matrix(&self, g: &WeightedMultigraph) -> Result<DMatrix<f64>> {
        Ok(self.config.compute(g)?.into_matrix())
    }

    /// Change of the measure from `before` to `after`.
    pub fn response(
        &self,
        before: &WeightedMultigraph,
        after: &WeightedMultigraph,
    ) -> Result<DMatrix<f64>> {
        if self.kind() == MeasureKind::DenseForests {
            let alpha = self.config.alpha_for(before)?;
            return Ok(dense_forest_matrix(after, alpha, self.reading)?
                - dense_forest_matrix(before, alpha, self.reading)?);
        }
        Ok(self.matrix(after)? - self.matrix(before)?)
    }
}

fn report(
    property: Property,
    measure: MeasureKind,
    verdict: Verdict,
    margin: f64,
    tolerance: f64,
    vertices: Vec<usize>,
    perturbation: Option<Perturbation>,
) -> PropertyReport {
    PropertyReport {
        property,
        measure,
        verdict,
        margin,
        tolerance,
        witness: (!vertices.is_empty() || perturbation.is_some()).then_some(Witness {
            vertices,
            perturbation,
            margin,
        }),
    }
}

fn relative_residual(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs().max(b.abs()))
}

fn weights_symmetric(g: &WeightedMultigraph) -> bool {
    let e = g.weight_matrix().into_inner();
    let scale = e.iter().fold(1.0_f64, |a, v| a.max(*v));
    (0..g.n()).all(|i| (0..i).all(|j| (e[(i, j)] - e[(j, i)]).abs() <= 1e-12 * scale))
}

pub fn check_symmetry(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) || !weights_symmetric(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Symmetry,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    Ok(symmetry_of(&p, ev.kind()))
}

pub fn symmetry_of(p: &DMatrix<f64>, measure: MeasureKind) -> PropertyReport {
    let mut worst = Worst::new();
    for i in 0..p.nrows() {
        for j in 0..i {
            worst.offer(-relative_residual(p[(i, j)], p[(j, i)]), &[i, j]);
        }
    }
    let margin = worst.finite_margin().min(0.0);
    report(
        Property::Symmetry,
        measure,
        Verdict::equality(-margin),
        margin,
        EQUALITY_TOLERANCE,
        worst.vertices,
        None,
    )
}

pub fn check_nonnegativity(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Nonnegativity,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let mut worst = Worst::new();
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            worst.offer(p[(i, j)], &[i, j]);
        }
    }
    Ok(report(
        Property::Nonnegativity,
        ev.kind(),
        Verdict::nonstrict(worst.margin),
        worst.margin,
        STRICT_MARGIN,
        worst.vertices,
        None,
    ))
}

pub fn check_reversal(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !g.is_directed() || !ev.kind().supports_directed() {
        return Ok(PropertyReport::not_applicable(
            Property::Reversal,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let r = ev.matrix(&g.reversed())?;
    let mut worst = Worst::new();
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            worst.offer(-relative_residual(r[(i, j)], p[(j, i)]), &[i, j]);
        }
    }
    let margin = worst.finite_margin().min(0.0);
    Ok(report(
        Property::Reversal,
        ev.kind(),
        Verdict::equality(-margin),
        margin,
        EQUALITY_TOLERANCE,
        worst.vertices,
        None,
    ))
}

/// `p_ii > p_ij`, and also `p_ii > p_ji` for undirected graphs.
pub fn check_diagonal_maximality(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::DiagonalMaximality,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let mut worst = Worst::new();
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            if i == j {
                continue;
            }
            worst.offer(p[(i, i)] - p[(i, j)], &[i, j]);
            if !g.is_directed() {
                worst.offer(p[(i, i)] - p[(j, i)], &[j, i]);
            }
        }
    }
    let margin = worst.finite_margin();
    Ok(report(
        Property::DiagonalMaximality,
        ev.kind(),
        Verdict::strict(margin),
        margin,
        STRICT_MARGIN,
        if worst.is_empty() {
            Vec::new()
        } else {
            worst.vertices
        },
        None,
    ))
}

/// `p_ij + p_ik - p_jk <= p_ii` for all triples, strictly when `j = k != i`.
pub fn check_triangle(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if g.is_directed() || !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Triangle,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    Ok(triangle_of(&p, ev.kind()))
}

pub fn triangle_of(p: &DMatrix<f64>, measure: MeasureKind) -> PropertyReport {
    let n = p.nrows();
    let mut loose = Worst::new();
    let mut strict = Worst::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let slack = p[(i, i)] - p[(i, j)] - p[(i, k)] + p[(j, k)];
                if j == k && i != j {
                    strict.offer(slack, &[i, j, k]);
                } else {
                    loose.offer(slack, &[i, j, k]);
                }
            }
        }
    }
    let verdict =
        Verdict::strict(strict.finite_margin()).and(Verdict::nonstrict(loose.finite_margin()));
    let worst = if loose.finite_margin() < -STRICT_MARGIN || strict.is_empty() {
        loose
    } else {
        strict
    };
    let margin = worst.finite_margin();
    report(
        Property::Triangle,
        measure,
        verdict,
        margin,
        STRICT_MARGIN,
        worst.vertices,
        None,
    )
}

/// `d_ij = p_ii + p_jj - p_ij - p_ji`.
pub fn metric_transform(p: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(p.nrows(), p.ncols(), |i, j| {
        p[(i, i)] + p[(j, j)] - p[(i, j)] - p[(j, i)]
    })
}

/// Zero diagonal, symmetry, positivity off the diagonal and the triangle
/// inequality, checked over every triple.
pub fn check_metric_axioms(d: &DMatrix<f64>, measure: MeasureKind) -> PropertyReport {
    let n = d.nrows();
    let mut residual = Worst::new();
    let mut positive = Worst::new();
    let mut triangle = Worst::new();
    for i in 0..n {
        residual.offer(-d[(i, i)].abs(), &[i, i]);
        for j in 0..n {
            if i != j {
                positive.offer(d[(i, j)], &[i, j]);
                residual.offer(-relative_residual(d[(i, j)], d[(j, i)]), &[i, j]);
            }
            for k in 0..n {
                triangle.offer(d[(i, k)] + d[(k, j)] - d[(i, j)], &[i, j, k]);
            }
        }
    }
    let verdict = Verdict::equality(-residual.finite_margin().min(0.0))
        .and(Verdict::strict(positive.finite_margin()))
        .and(Verdict::nonstrict(triangle.finite_margin()));
    let parts = [
        (residual.finite_margin(), residual.vertices),
        (positive.finite_margin(), positive.vertices),
        (triangle.finite_margin(), triangle.vertices),
    ];
    let (margin, vertices) = parts
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("three parts");
    report(
        Property::MetricAxioms,
        measure,
        verdict,
        margin,
        STRICT_MARGIN,
        vertices,
        None,
    )
}

pub fn check_metric(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if g.is_directed() || !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::MetricAxioms,
            ev.kind(),
        ));
    }
    Ok(check_metric_axioms(
        &metric_transform(&ev.matrix(g)?),
        ev.kind(),
    ))
}

/// `p_ij = 0` exactly when no path leads from `i` to `j`.
pub fn check_disconnection(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Disconnection,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let reach = g.reachability();
    let mut positive = Worst::new();
    let mut zero = Worst::new();
    for i in 0..g.n() {
        for j in 0..g.n() {
            if reach[i][j] {
                positive.offer(p[(i, j)], &[i, j]);
            } else {
                zero.offer(-p[(i, j)].abs(), &[i, j]);
            }
        }
    }
    let verdict =
        Verdict::strict(positive.finite_margin()).and(Verdict::nonstrict(zero.finite_margin()));
    let worst = if zero.finite_margin() < -STRICT_MARGIN {
        zero
    } else {
        positive
    };
    let margin = worst.finite_margin();
    Ok(report(
        Property::Disconnection,
        ev.kind(),
        verdict,
        margin,
        STRICT_MARGIN,
        worst.vertices,
        None,
    ))
}

/// Positivity is transitive: `p_ij > 0` and `p_jk > 0` imply `p_ik > 0`.
pub fn check_connectivity(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Connectivity,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let n = g.n();
    let pos = |a: usize, b: usize| p[(a, b)] > STRICT_MARGIN;
    let mut worst = Worst::new();
    for i in 0..n {
        for j in 0..n {
            if !pos(i, j) {
                continue;
            }
            for k in 0..n {
                if pos(j, k) {
                    worst.offer(p[(i, k)], &[i, j, k]);
                }
            }
        }
    }
    let margin = worst.finite_margin();
    Ok(report(
        Property::Connectivity,
        ev.kind(),
        Verdict::strict(margin),
        margin,
        STRICT_MARGIN,
        worst.vertices,
        None,
    ))
}

/// Triples `(i, k, t)` of distinct vertices where `k` is reachable from `i`
/// and every path from `i` to `t` passes through `k`.
pub fn transit_triples(g: &WeightedMultigraph) -> Vec<(usize, usize, usize)> {
    let n = g.n();
    let mut out = Vec::new();
    for i in 0..n {
        let reach = g.reachable_from(i);
        for k in 0..n {
            if k == i || !reach[k] {
                continue;
            }
            let avoiding = g.reachable_avoiding(i, Some(k));
            for (t, &seen) in avoiding.iter().enumerate() {
                if t != i && t != k && !seen {
                    out.push((i, k, t));
                }
            }
        }
    }
    out
}

/// `p_ik > p_it` whenever every path from `i` to `t` passes through `k`.
pub fn check_transit(ev: &Evaluator, g: &WeightedMultigraph) -> Result<PropertyReport> {
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(Property::Transit, ev.kind()));
    }
    let p = ev.matrix(g)?;
    let mut worst = Worst::new();
    for (i, k, t) in transit_triples(g) {
        worst.offer(p[(i, k)] - p[(i, t)], &[i, k, t]);
    }
    let margin = worst.finite_margin();
    Ok(report(
        Property::Transit,
        ev.kind(),
        Verdict::strict(margin),
        margin,
        STRICT_MARGIN,
        worst.vertices,
        None,
    ))
}

/// The three monotonicity items for one perturbation.
///
/// Items 2 and 3 use vertices `i` other than `k` and `t`; an undirected edge is
/// examined in both orientations.
pub fn check_monotonicity(
    ev: &Evaluator,
    g: &WeightedMultigraph,
    perturbation: &Perturbation,
) -> Result<[PropertyReport; 3]> {
    if !ev.applies_to(g) {
        return Ok([
            PropertyReport::not_applicable(Property::Monotonicity1, ev.kind()),
            PropertyReport::not_applicable(Property::Monotonicity2, ev.kind()),
            PropertyReport::not_applicable(Property::Monotonicity3, ev.kind()),
        ]);
    }
    let after = perturbation.apply(g)?;
    let delta = ev.response(g, &after)?;
    let (k, t) = (perturbation.k, perturbation.t);
    let n = g.n();

    let mut item1 = Worst::new();
    item1.offer(delta[(k, t)], &[k, t]);
    for i in 0..n {
        for j in 0..n {
            let excluded = if g.is_directed() {
                (i, j) == (k, t)
            } else {
                (i.min(j), i.max(j)) == (k.min(t), k.max(t))
            };
            if !excluded {
                item1.offer(delta[(k, t)] - delta[(i, j)], &[i, j]);
            }
        }
    }

    let orientations: Vec<(usize, usize)> = if g.is_directed() || k == t {
        vec![(k, t)]
    } else {
        vec![(k, t), (t, k)]
    };
    let mut item2 = Worst::new();
    let mut item3 = Worst::new();
    for (k, t) in orientations {
        if k == t {
            continue;
        }
        let reach = g.reachability();
        let hyp: Vec<usize> = (0..n)
            .filter(|&i| i != k && i != t && reach[i][k] && !g.reachable_avoiding(i, Some(k))[t])
            .collect();
        for &i in &hyp {
            item2.offer(delta[(i, t)] - delta[(i, k)], &[i, k, t]);
            for &j in &hyp {
                item3.offer(-delta[(i, j)], &[i, j]);
            }
        }
    }

    let make = |property: Property, worst: Worst, strict: bool| {
        let margin = worst.finite_margin();
        let verdict = if strict {
            Verdict::strict(margin)
        } else {
            Verdict::nonstrict(margin)
        };
        let vertices = if worst.is_empty() {
            Vec::new()
        } else {
            worst.vertices
        };
        report(
            property,
            ev.kind(),
            verdict,
            margin,
            STRICT_MARGIN,
            vertices,
            Some(*perturbation),
        )
    };
    Ok([
        make(Property::Monotonicity1, item1, true),
        make(Property::Monotonicity2, item2, true),
        make(Property::Monotonicity3, item3, false),
    ])
}

/// Nonnegative entries with unit row and column sums.
pub fn check_doubly_stochastic(p: &DMatrix<f64>, measure: MeasureKind) -> PropertyReport {
    let n = p.nrows();
    let mut worst = Worst::new();
    for i in 0..n {
        worst.offer(-(p.row(i).sum() - 1.0).abs(), &[i]);
        worst.offer(-(p.column(i).sum() - 1.0).abs(), &[i]);
    }
    let sums = worst.finite_margin();
    let min_entry = p.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = Verdict::equality(-sums).and(Verdict::nonstrict(min_entry));
    let margin = sums.min(min_entry.min(0.0));
    report(
        Property::DoublyStochastic,
        measure,
        verdict,
        margin,
        EQUALITY_TOLERANCE,
        worst.vertices,
        None,
    )
}

/// Checks that `d` is a macrovertex: every outside vertex has the same total
/// weight to each member.
pub fn validate_macrovertex(g: &WeightedMultigraph, d: &[usize]) -> Result<()> {
    let n = g.n();
    if d.is_empty() {
        return Err(ProximityError::InvalidMacrovertex(
            "empty vertex set".into(),
        ));
    }
    if let Some(&v) = d.iter().find(|&&v| v >= n) {
        return Err(ProximityError::VertexOutOfRange { vertex: v, n });
    }
    let e = g.weight_matrix().into_inner();
    let inside = |v: usize| d.contains(&v);
    for k in (0..n).filter(|&k| !inside(k)) {
        for &i in d {
            for &j in d {
                if (e[(i, k)] - e[(j, k)]).abs() > 1e-12 || (e[(k, i)] - e[(k, j)]).abs() > 1e-12 {
                    return Err(ProximityError::InvalidMacrovertex(format!(
                        "vertex {} is joined to {} and {} with different weights",
                        k + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Equal proximities from every member of `d` to each outside vertex, and
/// proximities involving outside vertices unchanged by a new edge inside `d`.
pub fn check_macrovertex(
    ev: &Evaluator,
    g: &WeightedMultigraph,
    d: &[usize],
) -> Result<PropertyReport> {
    validate_macrovertex(g, d)?;
    if !ev.applies_to(g) {
        return Ok(PropertyReport::not_applicable(
            Property::Macrovertex,
            ev.kind(),
        ));
    }
    let p = ev.matrix(g)?;
    let n = g.n();
    let inside = |v: usize| d.contains(&v);
    let mut worst = Worst::new();
    for k in (0..n).filter(|&k| !inside(k)) {
        for &i in d {
            for &j in d {
                worst.offer(-(p[(i, k)] - p[(j, k)]).abs(), &[i, j, k]);
            }
        }
    }
    let mut perturbation = None;
    if d.len() >= 2 {
        let w = if g.edge_count() == 0 {
            1.0
        } else {
            0.5 * g.max_weight()
        };
        let extra = Perturbation::add_edge(d[0], d[1], w)?;
        let delta = ev.response(g, &extra.apply(g)?)?;
        for a in 0..n {
            for b in 0..n {
                if !(inside(a) && inside(b)) {
                    worst.offer(-delta[(a, b)].abs(), &[a, b]);
                }
            }
        }
        perturbation = Some(extra);
    }
    let margin = worst.finite_margin().min(0.0);
    Ok(report(
        Property::Macrovertex,
        ev.kind(),
        Verdict::equality(-margin),
        margin,
        EQUALITY_TOLERANCE,
        worst.vertices,
        perturbation,
    ))
}

/// Runs one static property (everything except monotonicity and macrovertex).
pub fn check_property(
    ev: &Evaluator,
    g: &WeightedMultigraph,
    property: Property,
) -> Result<PropertyReport> {
    match property {
        Property::Symmetry => check_symmetry(ev, g),
        Property::Nonnegativity => check_nonnegativity(ev, g),
        Property::Reversal => check_reversal(ev, g),
        Property::DiagonalMaximality => check_diagonal_maximality(ev, g),
        Property::Triangle => check_triangle(ev, g),
        Property::MetricAxioms => check_metric(ev, g),
        Property::Disconnection => check_disconnection(ev, g),
        Property::Connectivity => check_connectivity(ev, g),
        Property::Transit => check_transit(ev, g),
        Property::DoublyStochastic => {
            if ev.applies_to(g) {
                Ok(check_doubly_stochastic(&ev.matrix(g)?, ev.kind()))
            } else {
                Ok(PropertyReport::not_applicable(property, ev.kind()))
            }
        }
        Property::Monotonicity1
        | Property::Monotonicity2
        | Property::Monotonicity3
        | Property::Macrovertex => Err(ProximityError::InvalidParameter(format!(
            "{property} needs a perturbation or vertex set"
        ))),
    }
}

/// Re-runs the check that produced `report` on `g`.
pub fn replay(
    ev: &Evaluator,
    g: &WeightedMultigraph,
    report: &PropertyReport,
) -> Result<PropertyReport> {
    match report.property {
        Property::Monotonicity1 | Property::Monotonicity2 | Property::Monotonicity3 => {
            let p = report
                .witness
                .as_ref()
                .and_then(|w| w.perturbation)
                .ok_or_else(|| {
                    ProximityError::InvalidParameter("witness has no perturbation".into())
                })?;
            let reports = check_monotonicity(ev, g, &p)?;
            Ok(reports
                .into_iter()
                .find(|r| r.property == report.property)
                .expect("three items"))
        }
        property => check_property(ev, g, property),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forests() -> Evaluator {
        Evaluator::for_table(MeasureKind::Forests)
    }

    fn chain() -> WeightedMultigraph {
        WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn symmetry_of_routes_on_symmetric_digraph() {
        let g = WeightedMultigraph::directed(2, [(0, 1, 0.3), (1, 0, 0.3)]).unwrap();
        let r = check_symmetry(&Evaluator::for_table(MeasureKind::Routes), &g).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.3)]).unwrap();
        let r = check_symmetry(&Evaluator::for_table(MeasureKind::Routes), &arc).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn reversal_on_single_arc() {
        let arc = WeightedMultigraph::directed(2, [(0, 1, 0.3)]).unwrap();
        for kind in [
            MeasureKind::Paths,
            MeasureKind::Reliability,
            MeasureKind::Routes,
        ] {
            let r = check_reversal(&Evaluator::for_table(kind), &arc).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{kind}");
        }
        let r = check_reversal(&forests(), &chain()).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn reliability_with_unit_edge_is_nonstrict() {
        let g = WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let r =
            check_diagonal_maximality(&Evaluator::for_table(MeasureKind::Reliability), &g).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsNonstrict);
    }

    #[test]
    fn forest_metric_on_k2() {
        let g = WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap();
        let d = metric_transform(&forests().matrix(&g).unwrap());
        assert!((d[(0, 1)] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            check_metric_axioms(&d, MeasureKind::Forests).verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn metric_axioms_catch_a_bad_triangle() {
        let d = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]);
        let r = check_metric_axioms(&d, MeasureKind::Forests);
        assert_eq!(r.verdict, Verdict::Violated);
        assert_eq!(r.margin, -3.0);
    }

    #[test]
    fn disconnection_patterns() {
        let two = WeightedMultigraph::undirected(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let r = check_disconnection(&forests(), &two).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);

        let chain = WeightedMultigraph::directed(3, [(0, 1, 0.2), (1, 2, 0.2)]).unwrap();
        let ev = Evaluator::for_table(MeasureKind::Routes);
        assert_eq!(ev.matrix(&chain).unwrap()[(2, 0)], 0.0);
        assert_eq!(
            check_disconnection(&ev, &chain).unwrap().verdict,
            Verdict::Holds
        );
        assert_eq!(
            check_connectivity(&ev, &chain).unwrap().verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn transit_on_chain_and_triangle() {
        let r = check_transit(&forests(), &chain()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(transit_triples(&chain()).contains(&(0, 1, 2)));

        let k3 =
            WeightedMultigraph::undirected(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert!(transit_triples(&k3).is_empty());

        let light = chain().scale_weights(0.3).unwrap();
        let r = check_transit(&Evaluator::for_table(MeasureKind::Routes), &light).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn dense_forest_counterexample_violates_item1() {
        let g = WeightedMultigraph::undirected(3, [(0, 1, 1.0)]).unwrap();
        let p = Perturbation::add_edge(0, 2, 1.0).unwrap();
        let ev = Evaluator::for_table(MeasureKind::DenseForests);
        let [one, _, _] = check_monotonicity(&ev, &g, &p).unwrap();
        assert_eq!(one.verdict, Verdict::Violated);
        let forest = check_monotonicity(&forests(), &g, &p).unwrap();
        assert!(forest.iter().all(|r| r.verdict == Verdict::Holds));
    }

    #[test]
    fn routes_violate_item3_through_a_cut_vertex() {
        // 0 - 1 - 2 with a pendant 3 on 1; strengthen 1 - 2.
        let g = WeightedMultigraph::undirected(4, [(0, 1, 0.1), (1, 2, 0.1), (1, 3, 0.1)]).unwrap();
        let p = Perturbation::increase(&g, 1, 0.05).unwrap();
        let [_, _, three] =
            check_monotonicity(&Evaluator::for_table(MeasureKind::Routes), &g, &p).unwrap();
        assert_eq!(three.verdict, Verdict::Violated);
        let replayed = replay(&Evaluator::for_table(MeasureKind::Routes), &g, &three).unwrap();
        assert_eq!(replayed, three);
    }

    #[test]
    fn macrovertex_of_star_with_chord() {
        // i = 0; k, t, u = 1, 2, 3; chord u - t
        let g =
            WeightedMultigraph::undirected(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (3, 2, 1.0)])
                .unwrap();
        let r = check_macrovertex(&forests(), &g, &[1, 2, 3]).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin > -1e-12);
        assert!(matches!(
            check_macrovertex(&forests(), &g, &[0, 1]),
            Err(ProximityError::InvalidMacrovertex(_))
        ));
    }

    #[test]
    fn forest_matrix_is_doubly_stochastic() {
        let p = forests().matrix(&chain()).unwrap();
        assert_eq!(
            check_doubly_stochastic(&p, MeasureKind::Forests).verdict,
            Verdict::Holds
        );
    }

    // Arcs i1->k, k->t, t->i2, i2->k: both i1 and i2 reach t only through k,
    // yet strengthening k->t opens the route i1->k->t->i2.
    #[test]
    fn third_monotonicity_item_fails_on_digraphs() {
        let (i1, k, t, i2) = (0, 1, 2, 3);
        let g = WeightedMultigraph::directed(
            4,
            [(i1, k, 0.1), (k, t, 0.1), (t, i2, 0.1), (i2, k, 0.1)],
        )
        .unwrap();
        let p = Perturbation::increase(&g, 1, 0.05).unwrap();
        for kind in [MeasureKind::Paths, MeasureKind::Reliability] {
            let ev = Evaluator::for_table(kind);
            let [_, _, item3] = check_monotonicity(&ev, &g, &p).unwrap();
            assert_eq!(item3.verdict, Verdict::Violated, "{}", item3.to_line());
            let before = ev.matrix(&g).unwrap();
            let after = ev.matrix(&p.apply(&g).unwrap()).unwrap();
            assert!(after[(i1, i2)] > before[(i1, i2)]);
        }
        let undirected = WeightedMultigraph::undirected(
            4,
            [(i1, k, 0.1), (k, t, 0.1), (t, i2, 0.1), (i2, k, 0.1)],
        )
        .unwrap();
        let ev = Evaluator::for_table(MeasureKind::Paths);
        let p = Perturbation::increase(&undirected, 1, 0.01).unwrap();
        let [_, _, item3] = check_monotonicity(&ev, &undirected, &p).unwrap();
        assert_ne!(item3.verdict, Verdict::Violated, "{}", item3.to_line());
    }

    // Counting each undirected cycle once per orientation doubles its share of
    // the diagonal, enough for p_kk to outgrow p_kt when k-t strengthens.
    #[test]
    fn both_orientations_break_first_monotonicity_item() {
        let w = 0.43;
        assert!(w < crate::paths::epsilon0(4, 1));
        let pairs = (0..4).flat_map(|a| ((a + 1)..4).map(move |b| (a, b, w)));
        let g = WeightedMultigraph::undirected(4, pairs).unwrap();
        let p = Perturbation::increase(&g, 0, (crate::paths::epsilon0(4, 1) - w) / 2.0).unwrap();
        let mut both = Evaluator::for_table(MeasureKind::Paths);
        both.config.paths = crate::paths::PathOptions::default();
        let [item1, _, _] = check_monotonicity(&both, &g, &p).unwrap();
        assert_eq!(item1.verdict, Verdict::Violated, "{}", item1.to_line());
        let once = Evaluator::for_table(MeasureKind::Paths);
        let [item1, _, _] = check_monotonicity(&once, &g, &p).unwrap();
        assert_eq!(item1.verdict, Verdict::Holds, "{}", item1.to_line());
    }
}
