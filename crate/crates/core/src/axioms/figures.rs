//! Three small graphs on which the measures order two proximities differently.

use std::cmp::Ordering;
use std::fmt;

use crate::axioms::checks::Evaluator;
use crate::axioms::report::STRICT_MARGIN;
use crate::error::Result;
use crate::graph::WeightedMultigraph;
use crate::measure::MeasureKind;
use crate::paths::epsilon0;

const I: usize = 0;
const K: usize = 1;
const T: usize = 2;

/// Star `i-k`, `i-t`, `i-u` with the chord `u-t`; vertices `i, k, t, u`.
pub fn figure1(w: f64) -> WeightedMultigraph {
    WeightedMultigraph::undirected(4, [(I, K, w), (I, T, w), (I, 3, w), (3, T, w)]).expect("valid")
}

/// `i` reaches `k` along two disjoint three-edge paths (through `x1`, `x2`) and
/// `t` along two three-edge paths sharing the first edge `i-x`.
pub fn figure2(w: f64) -> WeightedMultigraph {
    let (x1, a1, x2, a2, x, b1, b2) = (3, 4, 5, 6, 7, 8, 9);
    WeightedMultigraph::undirected(
        10,
        [
            (I, x1, w),
            (x1, a1, w),
            (a1, K, w),
            (I, x2, w),
            (x2, a2, w),
            (a2, K, w),
            (I, x, w),
            (x, b1, w),
            (b1, T, w),
            (x, b2, w),
            (b2, T, w),
        ],
    )
    .expect("valid")
}

/// Edges `i-k`, `i-t` and a triangle `t-a-b` hanging off `t`.
pub fn figure3(w: f64) -> WeightedMultigraph {
    let (a, b) = (3, 4);
    WeightedMultigraph::undirected(5, [(I, K, w), (I, T, w), (T, a, w), (a, b, w), (b, T, w)])
        .expect("valid")
}

/// Uniform weight for the path-based measures: half the smaller of
/// `epsilon0(n, 1)` and `1 / (n - 1)`.
pub fn light_weight(n: usize) -> f64 {
    epsilon0(n, 1).min(1.0 / (n - 1) as f64) / 2.0
}

/// One stated comparison `p_ab ? p_cd`.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCheck {
    pub figure: u8,
    pub measure: MeasureKind,
    pub lhs: (usize, usize),
    pub rhs: (usize, usize),
    pub expected: Ordering,
    pub lhs_value: f64,
    pub rhs_value: f64,
}

impl FigureCheck {
    pub fn holds(&self) -> bool {
        let diff = self.lhs_value - self.rhs_value;
        match self.expected {
            Ordering::Less => diff < -STRICT_MARGIN,
            Ordering::Greater => diff > STRICT_MARGIN,
            Ordering::Equal => diff.abs() <= 1e-12 * 1f64.max(self.rhs_value.abs()),
        }
    }
}

fn label(v: usize) -> &'static str {
    match v {
        I => "i",
        K => "k",
        T => "t",
        3 => "u",
        _ => "?",
    }
}

impl fmt::Display for FigureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.expected {
            Ordering::Less => "<",
            Ordering::Equal => "=",
            Ordering::Greater => ">",
        };
        write!(
            f,
            "figure {} {}: p_{}{} {} p_{}{} ({:.12e} vs {:.12e}) {}",
            self.figure,
            self.measure,
            label(self.lhs.0),
            label(self.lhs.1),
            op,
            label(self.rhs.0),
            label(self.rhs.1),
            self.lhs_value,
            self.rhs_value,
            if self.holds() { "ok" } else { "MISMATCH" }
        )
    }
}

/// `(lhs pair, ordering, rhs pair)`.
type Comparison = ((usize, usize), Ordering, (usize, usize));

fn expectations(figure: u8, measure: MeasureKind) -> Vec<Comparison> {
    use MeasureKind::*;
    use Ordering::*;
    match (figure, measure) {
        (1, Paths | Reliability | Routes) => vec![((I, K), Less, (I, T))],
        (1, _) => vec![((I, K), Equal, (I, T)), ((I, T), Equal, (I, 3))],
        (2, Paths) => vec![((I, K), Equal, (I, T))],
        (2, Routes) => vec![((I, K), Less, (I, T))],
        (2, _) => vec![((I, K), Greater, (I, T))],
        (3, Paths | Reliability) => vec![((I, T), Equal, (I, K))],
        (3, Routes) => vec![((I, T), Greater, (I, K))],
        (3, _) => vec![((I, T), Less, (I, K))],
        _ => Vec::new(),
    }
}

/// Every stated ordering on the three example graphs.
pub fn run_figure_examples() -> Result<Vec<FigureCheck>> {
    type Builder = fn(f64) -> WeightedMultigraph;
    let builders: [(u8, Builder, usize); 3] = [(1, figure1, 4), (2, figure2, 10), (3, figure3, 5)];
    let mut out = Vec::new();
    for (figure, build, n) in builders {
        for measure in MeasureKind::ALL {
            let w = match measure {
                MeasureKind::Forests | MeasureKind::DenseForests => 1.0,
                _ => light_weight(n),
            };
            let p = Evaluator::for_table(measure).matrix(&build(w))?;
            for (lhs, expected, rhs) in expectations(figure, measure) {
                out.push(FigureCheck {
                    figure,
                    measure,
                    lhs,
                    rhs,
                    expected,
                    lhs_value: p[lhs],
                    rhs_value: p[rhs],
                });
            }
        }
    }
    Ok(out)
}
