use nalgebra::DMatrix;
use proptest::prelude::*;

use vertex_proximity::axioms::report::Verdict;
use vertex_proximity::axioms::{
    check_doubly_stochastic, check_macrovertex, check_metric, check_symmetry, check_triangle,
    Evaluator,
};
use vertex_proximity::forest::{forest_accessibility, laplacian_pinv, qk_decomposition};
use vertex_proximity::linalg::{max_abs, max_abs_diff};
use vertex_proximity::oracle::{
    enum_rooted_forests, enum_routes, enum_simple_cycles, enum_simple_paths, OracleConfig,
};
use vertex_proximity::paths::{
    connection_reliability, epsilon0, path_accessibility, PathOptions, ReliabilityOptions,
};
use vertex_proximity::walks::route_accessibility;
use vertex_proximity::{Edge, MeasureKind, WeightedMultigraph};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(b.abs())
}

/// Loop-free multigraph on `min_n..=max_n` vertices (`min_n >= 2`) with
/// weights in `[0.3, 0.95] * scale(n)`.
fn multigraph(
    directed: bool,
    min_n: usize,
    max_n: usize,
    max_edges: usize,
    scale: fn(usize) -> f64,
) -> impl Strategy<Value = WeightedMultigraph> {
    (min_n..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 1..n, 0.3f64..=0.95), 0..=max_edges).prop_map(move |raw| {
            let edges = raw
                .into_iter()
                .map(|(a, off, w)| Edge::new(a, (a + off) % n, w * scale(n)))
                .collect();
            WeightedMultigraph::new(n, directed, edges).unwrap()
        })
    })
}

fn unit(_: usize) -> f64 {
    2.0
}

/// Keeps path weights under `epsilon0` even when every edge lands on one pair.
fn light(n: usize) -> f64 {
    epsilon0(n, 8).min(1.0 / (8 * (n - 1)) as f64)
}

/// Row sums of the weight matrix stay under 0.9, so walk series converge fast.
fn routes(n: usize) -> f64 {
    1.0 / (16 * (n - 1)) as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forest_matrix_is_doubly_stochastic(g in multigraph(false, 2, 7, 10, unit), tau in 0.1f64..5.0) {
        let q = forest_accessibility(&g, tau).unwrap().into_matrix();
        let r = check_doubly_stochastic(&q, MeasureKind::Forests);
        prop_assert_eq!(r.verdict, Verdict::Holds, "{}", r.to_line());
    }

    #[test]
    fn qk_coefficients_match_forest_census(g in multigraph(false, 2, 6, 8, unit)) {
        let stack = qk_decomposition(&g).unwrap();
        let census = enum_rooted_forests(&g, &OracleConfig::default()).unwrap();
        for k in 0..=census.max_edges() {
            let scale = 1f64.max(census.total(k));
            prop_assert!((stack.forest_weight(k) - census.total(k)).abs() <= 1e-9 * scale);
            if k <= stack.top() {
                prop_assert!(max_abs_diff(stack.q(k), census.pair_matrix(k)) <= 1e-9 * scale);
            }
        }
        let jbar = g.components().averaging_matrix().into_inner();
        let pinv = laplacian_pinv(&g).unwrap();
        prop_assert!(max_abs_diff(&stack.pinv(&jbar), &pinv) <= 1e-8 * 1f64.max(max_abs(&pinv)));
    }

    #[test]
    fn penrose_conditions(g in multigraph(false, 2, 12, 24, unit)) {
        let l = g.laplacian().unwrap().into_inner();
        let p = laplacian_pinv(&g).unwrap();
        let lp = &l * &p;
        let pl = &p * &l;
        prop_assert!(max_abs(&(&lp * &l - &l)) <= 1e-9);
        prop_assert!(max_abs(&(&pl * &p - &p)) <= 1e-9);
        prop_assert!(max_abs(&(lp.transpose() - &lp)) <= 1e-9);
        prop_assert!(max_abs(&(pl.transpose() - &pl)) <= 1e-9);
    }

    /// Adding an edge `k-t` of weight `d` is a rank-one change of `I + tau L`.
    #[test]
    fn forest_edge_addition_is_rank_one(
        g in multigraph(false, 2, 6, 8, unit),
        pick in (0usize..36, 0.1f64..3.0, 0.1f64..3.0),
    ) {
        let (pair, d, tau) = pick;
        let n = g.n();
        let (k, t) = (pair % n, (pair / n + 1 + pair % n) % n);
        prop_assume!(k != t);
        let q = forest_accessibility(&g, tau).unwrap().into_matrix();
        let after = forest_accessibility(&g.with_edge(k, t, d).unwrap(), tau).unwrap().into_matrix();
        let mut b = DMatrix::zeros(n, 1);
        b[k] = 1.0;
        b[t] = -1.0;
        let qb = &q * &b;
        let denom = 1.0 + tau * d * (qb[k] - qb[t]);
        let expected = &q - &qb * qb.transpose() * (tau * d / denom);
        prop_assert!(max_abs_diff(&after, &expected) <= 1e-10);
    }

    #[test]
    fn path_accessibility_matches_path_enumeration(g in multigraph(true, 2, 5, 8, light)) {
        let p = path_accessibility(&g, &PathOptions::default());
        for i in 0..g.n() {
            let cycles: f64 = enum_simple_cycles(&g, i).iter().map(|c| c.weight).sum();
            prop_assert!(rel(p.get(i, i), 1.0 + cycles) <= 1e-12);
            for j in (0..g.n()).filter(|&j| j != i) {
                let paths: f64 = enum_simple_paths(&g, i, j).iter().map(|c| c.weight).sum();
                prop_assert!(rel(p.get(i, j), paths) <= 1e-12);
            }
        }
    }

    #[test]
    fn undirected_path_cycles_counted_once_halve_the_cycle_sum(g in multigraph(false, 2, 5, 8, light)) {
        let both = path_accessibility(&g, &PathOptions::default());
        let once = path_accessibility(&g, &PathOptions::cycles_once());
        for i in 0..g.n() {
            prop_assert!(rel(once.get(i, i) - 1.0, (both.get(i, i) - 1.0) / 2.0) <= 1e-12);
        }
    }

    #[test]
    fn route_matrix_inverts_i_minus_e(g in multigraph(true, 2, 7, 14, routes)) {
        let p = route_accessibility(&g).unwrap().into_matrix();
        let n = g.n();
        let e = g.weight_matrix().into_inner();
        let residual = &p * (DMatrix::identity(n, n) - e) - DMatrix::identity(n, n);
        prop_assert!(max_abs(&residual) <= 1e-12);
    }

    #[test]
    fn route_matrix_is_the_walk_series(g in multigraph(true, 2, 5, 8, routes)) {
        let p = route_accessibility(&g).unwrap();
        for i in 0..g.n() {
            for j in 0..g.n() {
                let series: f64 = enum_routes(&g, i, j, 200).iter().sum();
                prop_assert!((p.get(i, j) - series).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn reversal_transposes(g in multigraph(true, 2, 6, 10, light)) {
        let rev = g.reversed();
        let opts = ReliabilityOptions { max_paths: 100_000 };
        let pairs = [
            (route_accessibility(&g).unwrap().into_matrix(), route_accessibility(&rev).unwrap().into_matrix()),
            (
                path_accessibility(&g, &PathOptions::default()).into_matrix(),
                path_accessibility(&rev, &PathOptions::default()).into_matrix(),
            ),
            (
                connection_reliability(&g, &opts).unwrap().into_matrix(),
                connection_reliability(&rev, &opts).unwrap().into_matrix(),
            ),
        ];
        for (a, b) in pairs {
            prop_assert!(max_abs_diff(&a, &b.transpose()) <= 1e-12);
        }
    }

    /// Both path measures are affine in any single edge weight.
    #[test]
    fn path_measures_are_affine_in_one_weight(g in multigraph(false, 2, 5, 7, light), pick in 0usize..7) {
        prop_assume!(g.edge_count() > 0);
        let e = pick % g.edge_count();
        let w = g.edges()[e].weight;
        let opts = ReliabilityOptions { max_paths: 100_000 };
        let at = |s: f64| {
            let h = g.with_weight(e, s * w).unwrap();
            (
                connection_reliability(&h, &opts).unwrap().into_matrix(),
                path_accessibility(&h, &PathOptions::default()).into_matrix(),
            )
        };
        let (r2, p2) = at(0.2);
        let (r5, p5) = at(0.5);
        let (r8, p8) = at(0.8);
        prop_assert!(max_abs(&((&r5 - &r2) - (&r8 - &r5))) <= 1e-12);
        prop_assert!(max_abs(&((&p5 - &p2) - (&p8 - &p5))) <= 1e-12);
    }

    /// Two random blocks glued at a cut vertex `k`: every `i-t` path passes
    /// through `k`, so both path measures factor there.
    #[test]
    fn path_measures_factor_through_a_cut_vertex(
        left in multigraph(false, 2, 4, 6, light),
        right in multigraph(false, 2, 4, 6, light),
    ) {
        let a = left.n();
        let n = a + right.n() - 1;
        let k = a - 1;
        let shift = |v: usize| v + k;
        let mut edges: Vec<Edge> = left.edges().to_vec();
        edges.extend(right.edges().iter().map(|e| Edge::new(shift(e.tail), shift(e.head), e.weight)));
        let g = WeightedMultigraph::new(n, false, edges).unwrap();
        let opts = ReliabilityOptions { max_paths: 100_000 };
        let r = connection_reliability(&g, &opts).unwrap();
        let p = path_accessibility(&g, &PathOptions::default());
        for i in 0..k {
            for t in (k + 1)..n {
                prop_assert!((r.get(i, t) - r.get(i, k) * r.get(k, t)).abs() <= 1e-12);
                prop_assert!((p.get(i, t) - p.get(i, k) * p.get(k, t)).abs() <= 1e-12);
            }
        }
    }

    /// Vertices 0 and 1 share every outside neighbour with equal weights.
    #[test]
    fn forest_measures_respect_macrovertices(
        rest in multigraph(false, 2, 4, 5, unit),
        links in prop::collection::vec(prop::option::of(0.5f64..2.0), 4),
        inner in prop::option::of(0.5f64..2.0),
    ) {
        let shift = 2;
        let n = rest.n() + shift;
        let mut edges: Vec<Edge> =
            rest.edges().iter().map(|e| Edge::new(e.tail + shift, e.head + shift, e.weight)).collect();
        for (v, w) in links.iter().take(rest.n()).enumerate() {
            if let Some(w) = w {
                edges.push(Edge::new(0, v + shift, *w));
                edges.push(Edge::new(1, v + shift, *w));
            }
        }
        if let Some(w) = inner {
            edges.push(Edge::new(0, 1, w));
        }
        let g = WeightedMultigraph::new(n, false, edges).unwrap();
        for kind in [MeasureKind::Forests, MeasureKind::DenseForests] {
            let r = check_macrovertex(&Evaluator::for_table(kind), &g, &[0, 1]).unwrap();
            prop_assert!(!r.is_violated(), "{}", r.to_line());
        }
    }

    #[test]
    fn symmetric_triangle_measures_give_metrics(g in multigraph(false, 2, 7, 10, unit)) {
        for kind in [MeasureKind::Forests, MeasureKind::DenseForests] {
            let ev = Evaluator::for_table(kind);
            prop_assert!(!check_symmetry(&ev, &g).unwrap().is_violated());
            prop_assert!(!check_triangle(&ev, &g).unwrap().is_violated());
            let r = check_metric(&ev, &g).unwrap();
            prop_assert!(!r.is_violated(), "{}", r.to_line());
        }
    }

    /// The implication holds for every measure, whatever the weights do to
    /// the premises.
    #[test]
    fn symmetry_and_triangle_imply_metric_for_every_measure(g in multigraph(false, 2, 6, 8, light)) {
        for kind in MeasureKind::ALL {
            let ev = Evaluator::for_table(kind);
            let premises = !check_symmetry(&ev, &g).unwrap().is_violated()
                && !check_triangle(&ev, &g).unwrap().is_violated();
            if premises {
                let r = check_metric(&ev, &g).unwrap();
                prop_assert!(!r.is_violated(), "{}", r.to_line());
            }
        }
    }

    /// `dp_ij (p_kk - p_kt)(p_tt - p_tk) = dp_kt (p_ik - p_it)(p_jt - p_jk)` for
    /// a single-edge change of the forest matrix, with `p` taken before it.
    #[test]
    fn forest_perturbation_ratio_identity(
        g in multigraph(false, 2, 6, 8, unit),
        pick in (0usize..36, 0.1f64..3.0, any::<bool>()),
    ) {
        let (pair, d, increase) = pick;
        let n = g.n();
        let (k, t) = (pair % n, (pair / n + 1 + pair % n) % n);
        prop_assume!(k != t);
        let after = match g.edges_between(k, t).first() {
            Some(&e) if increase => g.with_weight_increase(e, d).unwrap(),
            _ => g.with_edge(k, t, d).unwrap(),
        };
        let p = forest_accessibility(&g, 1.0).unwrap().into_matrix();
        let dp = forest_accessibility(&after, 1.0).unwrap().into_matrix() - &p;
        for i in 0..n {
            for j in 0..n {
                let lhs = dp[(i, j)] * (p[(k, k)] - p[(k, t)]) * (p[(t, t)] - p[(t, k)]);
                let rhs = dp[(k, t)] * (p[(i, k)] - p[(i, t)]) * (p[(j, t)] - p[(j, k)]);
                prop_assert!((lhs - rhs).abs() <= 1e-8 * 1f64.max(lhs.abs()).max(rhs.abs()));
            }
        }
    }

    #[test]
    fn truncated_route_series_matches_walk_enumeration(g in multigraph(true, 2, 6, 10, routes)) {
        let n = g.n();
        let e = g.weight_matrix().into_inner();
        let mut power = DMatrix::identity(n, n);
        let mut series = DMatrix::identity(n, n);
        for _ in 0..8 {
            power = &power * &e;
            series += &power;
        }
        for i in 0..n {
            for j in 0..n {
                let walks: f64 = enum_routes(&g, i, j, 8).iter().sum();
                prop_assert!(rel(series[(i, j)], walks) <= 1e-12);
            }
        }
    }

    #[test]
    fn measures_are_deterministic(g in multigraph(false, 2, 6, 8, light)) {
        for kind in MeasureKind::ALL {
            let ev = Evaluator::for_table(kind);
            let a = ev.matrix(&g).unwrap();
            let b = ev.matrix(&g).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
