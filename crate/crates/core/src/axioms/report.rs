use std::fmt;
use std::str::FromStr;

use crate::axioms::perturbation::Perturbation;
use crate::error::ProximityError;
use crate::measure::MeasureKind;

/// Slack a strict inequality must exceed.
pub const STRICT_MARGIN: f64 = 1e-12;
/// Residual allowed for an equality.
pub const EQUALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Symmetry,
    Nonnegativity,
    Reversal,
    DiagonalMaximality,
    Triangle,
    MetricAxioms,
    Disconnection,
    Connectivity,
    Transit,
    Monotonicity1,
    Monotonicity2,
    Monotonicity3,
    DoublyStochastic,
    Macrovertex,
}

impl Property {
    pub const ALL: [Property; 14] = [
        Property::Symmetry,
        Property::Nonnegativity,
        Property::Reversal,
        Property::DiagonalMaximality,
        Property::Triangle,
        Property::MetricAxioms,
        Property::Disconnection,
        Property::Connectivity,
        Property::Transit,
        Property::Monotonicity1,
        Property::Monotonicity2,
        Property::Monotonicity3,
        Property::DoublyStochastic,
        Property::Macrovertex,
    ];

    /// The ten rows of the property table.
    pub const TABLE: [Property; 10] = [
        Property::Symmetry,
        Property::Nonnegativity,
        Property::Reversal,
        Property::DiagonalMaximality,
        Property::Triangle,
        Property::Disconnection,
        Property::Transit,
        Property::Monotonicity1,
        Property::Monotonicity2,
        Property::Monotonicity3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Symmetry => "symmetry",
            Property::Nonnegativity => "nonnegativity",
            Property::Reversal => "reversal",
            Property::DiagonalMaximality => "diagonal-maximality",
            Property::Triangle => "triangle",
            Property::MetricAxioms => "metric",
            Property::Disconnection => "disconnection",
            Property::Connectivity => "connectivity",
            Property::Transit => "transit",
            Property::Monotonicity1 => "monotonicity-1",
            Property::Monotonicity2 => "monotonicity-2",
            Property::Monotonicity3 => "monotonicity-3",
            Property::DoublyStochastic => "doubly-stochastic",
            Property::Macrovertex => "macrovertex",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = ProximityError;

    fn from_str(s: &str) -> Result<Self, ProximityError> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ProximityError::InvalidParameter(format!("unknown property '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    HoldsNonstrict,
    Violated,
    NotApplicable,
}

impl Verdict {
    /// Verdict for a strict inequality with the given worst slack.
    pub fn strict(margin: f64) -> Self {
        if margin > STRICT_MARGIN {
            Verdict::Holds
        } else if margin >= -STRICT_MARGIN {
            Verdict::HoldsNonstrict
        } else {
            Verdict::Violated
        }
    }

    /// Verdict for a non-strict inequality with the given worst slack.
    pub fn nonstrict(margin: f64) -> Self {
        if margin >= -STRICT_MARGIN {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// Verdict for an equality with the given residual.
    pub fn equality(residual: f64) -> Self {
        if residual <= EQUALITY_TOLERANCE {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// The weaker of two verdicts on parts of one property.
    pub fn and(self, other: Verdict) -> Verdict {
        self.max(other)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsNonstrict => "holds-nonstrict",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a property is tightest: the vertices involved (0-based), the
/// perturbation applied if any, and the signed slack there.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub vertices: Vec<usize>,
    pub perturbation: Option<Perturbation>,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub property: Property,
    pub measure: MeasureKind,
    pub verdict: Verdict,
    /// Signed worst slack; negative means violated. Residual-type checks report
    /// the negated residual.
    pub margin: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn not_applicable(property: Property, measure: MeasureKind) -> Self {
        Self {
            property,
            measure,
            verdict: Verdict::NotApplicable,
            margin: 0.0,
            tolerance: 0.0,
            witness: None,
        }
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// One line: `<measure> <property> <verdict> <margin> [witness...]`,
    /// witness vertices 1-based.
    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{} {} {} {:.6e}",
            self.measure, self.property, self.verdict, self.margin
        );
        if let Some(w) = &self.witness {
            let vs: Vec<String> = w.vertices.iter().map(|v| (v + 1).to_string()).collect();
            line.push_str(&format!(" vertices={}", vs.join(",")));
            if let Some(p) = &w.perturbation {
                line.push_str(&format!(" perturbation={p}"));
            }
        }
        line
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Tracks the smallest slack seen and where it occurred.
#[derive(Debug, Clone)]
pub(crate) struct Worst {
    pub margin: f64,
    pub vertices: Vec<usize>,
}

impl Worst {
    pub fn new() -> Self {
        Self {
            margin: f64::INFINITY,
            vertices: Vec::new(),
        }
    }

    pub fn offer(&mut self, margin: f64, vertices: &[usize]) {
        if margin < self.margin {
            self.margin = margin;
            self.vertices = vertices.to_vec();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.margin == f64::INFINITY
    }

    /// Finite margin, with an empty check counting as comfortably satisfied.
    pub fn finite_margin(&self) -> f64 {
        if self.is_empty() {
            f64::MAX
        } else {
            self.margin
        }
    }
}
