//! The four verbs, rendered to strings so they can be tested without a process.

use std::fmt;
use std::str::FromStr;

use vertex_proximity::axioms::{
    candidate_perturbations, check_macrovertex, check_monotonicity, check_property, generate,
    reproduce_cells, run_figure_examples, table_evaluator, CorpusConfig, Evaluator, Property,
    PropertyReport, Regime, TableConfig, Verdict,
};
use vertex_proximity::forest::{
    dense_forest_delta, laplacian_pinv, qk_decomposition, DenseForestReading,
};
use vertex_proximity::paths::epsilon0;
use vertex_proximity::{MeasureConfig, MeasureKind, ProximityError, WeightedMultigraph};

use crate::graph_file::{serialize_graph, ParseError};
use crate::output::{fmt_g, render_matrix};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or arguments; exit status 2.
    Parse(String),
    /// A measure precondition or check failed; exit status 1.
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<ProximityError> for CliError {
    fn from(e: ProximityError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

/// Text for standard output and whether the run succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub success: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            success: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Measure(MeasureKind),
    LaplacianPinv,
    Qk,
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "laplacian-pinv" => Ok(Selector::LaplacianPinv),
            "qk" => Ok(Selector::Qk),
            _ => s.parse().map(Selector::Measure).map_err(|_| {
                format!(
                    "unknown measure '{s}' (expected paths, reliability, routes, forests, \
                     dense-forests, laplacian-pinv or qk)"
                )
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Matrix,
    Report,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "matrix" => Ok(Format::Matrix),
            "report" => Ok(Format::Report),
            _ => Err(format!("unknown format '{s}' (expected matrix or report)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tau: f64,
    /// `None` selects half the dense-forest threshold of the graph.
    pub alpha: Option<f64>,
    pub scale: f64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tau: 1.0,
            alpha: None,
            scale: 1.0,
            format: Format::Matrix,
        }
    }
}

impl RunConfig {
    fn measure_config(&self, kind: MeasureKind) -> MeasureConfig {
        let mut cfg = table_evaluator(kind).config.with_tau(self.tau);
        cfg.alpha = self.alpha;
        cfg
    }

    fn prepare(&self, g: &WeightedMultigraph) -> Result<WeightedMultigraph, CliError> {
        if self.scale == 1.0 {
            Ok(g.clone())
        } else {
            Ok(g.scale_weights(self.scale)?)
        }
    }
}

fn header(name: &str, g: &WeightedMultigraph, params: &[(&str, f64)]) -> String {
    let mut line = format!(
        "# {name} n={} {}",
        g.n(),
        if g.is_directed() {
            "directed"
        } else {
            "undirected"
        }
    );
    for (key, value) in params {
        line.push_str(&format!(" {key}={}", fmt_g(*value)));
    }
    line.push('\n');
    line
}

pub fn compute(
    selector: Selector,
    g: &WeightedMultigraph,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let g = cfg.prepare(g)?;
    let scale = ("scale", cfg.scale);
    match selector {
        Selector::Measure(kind) => {
            let mc = cfg.measure_config(kind);
            let p = mc.compute(&g)?;
            let mut params = vec![scale];
            params.extend(p.params().iter().map(|&(k, v)| (k, v)));
            let mut stdout = header(kind.name(), &g, &params);
            let mut stderr = String::new();
            for w in p.warnings() {
                match cfg.format {
                    Format::Report => stdout.push_str(&format!("# warning: {w}\n")),
                    Format::Matrix => stderr.push_str(&format!("warning: {w}\n")),
                }
            }
            stdout.push_str(&render_matrix(p.matrix()));
            Ok(Outcome {
                stdout,
                stderr,
                success: true,
            })
        }
        Selector::LaplacianPinv => {
            let p = laplacian_pinv(&g)?;
            let mut stdout = header("laplacian-pinv", &g, &[scale]);
            stdout.push_str(&render_matrix(&p));
            Ok(Outcome::ok(stdout))
        }
        Selector::Qk => {
            let stack = qk_decomposition(&g)?;
            let mut stdout = header(
                "qk",
                &g,
                &[scale, ("components", stack.components() as f64)],
            );
            for k in 0..=stack.top() {
                stdout.push_str(&format!(
                    "# k={k} forest_weight={}\n",
                    fmt_g(stack.forest_weight(k))
                ));
                stdout.push_str(&render_matrix(stack.q(k)));
            }
            Ok(Outcome::ok(stdout))
        }
    }
}

/// `all` expands to the ten table properties.
pub fn parse_properties(list: &str) -> Result<Vec<Property>, CliError> {
    if list == "all" {
        return Ok(Property::TABLE.to_vec());
    }
    list.split(',')
        .map(|name| {
            name.trim()
                .parse()
                .map_err(|e: ProximityError| CliError::Parse(e.to_string()))
        })
        .collect()
}

/// Parses a comma-separated list of 1-based vertices.
pub fn parse_vertex_set(list: &str) -> Result<Vec<usize>, CliError> {
    list.split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(CliError::Parse(format!("invalid vertex '{s}' in set"))),
        })
        .collect()
}

/// Largest weight each measure's perturbations may reach on `g`.
fn perturbation_bound(kind: MeasureKind, g: &WeightedMultigraph, m: usize) -> Option<f64> {
    let n = g.n();
    match kind {
        MeasureKind::Paths | MeasureKind::Reliability if n >= 2 => Some(epsilon0(n, m)),
        MeasureKind::Routes if n >= 2 => Some(1.0 / (m * (n - 1)) as f64),
        _ => None,
    }
}

/// The weakest of several reports for one property, ties broken by margin.
fn weakest(reports: impl IntoIterator<Item = PropertyReport>) -> Option<PropertyReport> {
    reports
        .into_iter()
        .fold(None, |acc: Option<PropertyReport>, r| match acc {
            None => Some(r),
            Some(a) => {
                let worse =
                    r.verdict > a.verdict || (r.verdict == a.verdict && r.margin < a.margin);
                Some(if worse { r } else { a })
            }
        })
}

fn single_graph_reports(
    ev: &Evaluator,
    g: &WeightedMultigraph,
    properties: &[Property],
    set: Option<&[usize]>,
) -> Result<Vec<PropertyReport>, CliError> {
    let m = g.max_multiplicity().max(1);
    let perturbations = candidate_perturbations(g, perturbation_bound(ev.kind(), g, m), m, 1.0);
    let mut monotone: Vec<[PropertyReport; 3]> = Vec::new();
    if properties
        .iter()
        .any(|p| p.name().starts_with("monotonicity"))
    {
        for p in &perturbations {
            monotone.push(check_monotonicity(ev, g, p)?);
        }
    }
    let mut out = Vec::new();
    for &property in properties {
        let report = match property {
            Property::Monotonicity1 | Property::Monotonicity2 | Property::Monotonicity3 => {
                let item = monotone
                    .iter()
                    .map(|r| r.iter().find(|x| x.property == property).cloned());
                weakest(item.flatten())
                    .unwrap_or_else(|| PropertyReport::not_applicable(property, ev.kind()))
            }
            Property::Macrovertex => {
                let set = set.ok_or_else(|| CliError::Parse("macrovertex needs --set".into()))?;
                check_macrovertex(ev, g, set)?
            }
            _ => check_property(ev, g, property)?,
        };
        out.push(report);
    }
    Ok(out)
}

/// Checks properties on one graph, or over the seeded corpus when `g` is `None`.
pub fn check(
    kind: MeasureKind,
    properties: &[Property],
    g: Option<&WeightedMultigraph>,
    set: Option<&[usize]>,
    corpus: &CorpusConfig,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let mut stdout = String::new();
    let success = match g {
        Some(g) => {
            let g = cfg.prepare(g)?;
            let ev = Evaluator::new(cfg.measure_config(kind));
            stdout.push_str(&header(
                &format!("check {kind}"),
                &g,
                &[("scale", cfg.scale)],
            ));
            let reports = single_graph_reports(&ev, &g, properties, set)?;
            for r in &reports {
                stdout.push_str(&r.to_line());
                stdout.push('\n');
            }
            // A check that cannot run on this graph at all is a rejection.
            !reports.iter().any(PropertyReport::is_violated)
                && reports.iter().any(|r| r.verdict != Verdict::NotApplicable)
        }
        None => {
            stdout.push_str(&format!(
                "# check {kind} corpus seed={} count={}\n",
                corpus.seed, corpus.count
            ));
            let table = TableConfig {
                corpus: *corpus,
                ..TableConfig::default()
            };
            let cells = reproduce_cells(kind, properties, &table)?;
            for c in &cells {
                stdout.push_str(&c.to_line());
                stdout.push('\n');
            }
            cells.iter().all(|c| c.agrees())
        }
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        success,
    })
}

/// The three example graphs plus the four pinned pseudoinverse changes.
pub fn examples() -> Result<Outcome, CliError> {
    let mut stdout = String::new();
    let mut success = true;
    for c in run_figure_examples()? {
        success &= c.holds();
        stdout.push_str(&format!("{c}\n"));
    }
    let before = WeightedMultigraph::undirected(3, [(0, 1, 1.0)])?;
    let after = before.with_edge(0, 2, 1.0)?;
    let d = dense_forest_delta(&before, &after, 1.0, DenseForestReading::Pinv)?;
    for ((i, j), expected, label) in [
        ((0, 2), -1.0 / 9.0, "-1/9"),
        ((0, 1), 5.0 / 36.0, "5/36"),
        ((1, 2), -4.0 / 9.0, "-4/9"),
        ((1, 1), 11.0 / 36.0, "11/36"),
    ] {
        let ok = (d[(i, j)] - expected).abs() <= 1e-12;
        success &= ok;
        stdout.push_str(&format!(
            "pseudoinverse change p_{}{} = {label}: {} {}\n",
            i + 1,
            j + 1,
            fmt_g(d[(i, j)]),
            if ok { "ok" } else { "MISMATCH" }
        ));
    }
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        success,
    })
}

pub fn parse_regime(s: &str) -> Result<Regime, CliError> {
    match s {
        "paths" => Ok(Regime::Paths),
        "routes" => Ok(Regime::Routes),
        "route-triangle" => Ok(Regime::RouteTriangle),
        "forests" => Ok(Regime::Forests),
        "integer-forests" => Ok(Regime::IntegerForests),
        _ => Err(CliError::Parse(format!(
            "unknown regime '{s}' (expected paths, routes, route-triangle, forests or integer-forests)"
        ))),
    }
}

/// Corpus graphs as `(file name, contents)` pairs.
pub fn corpus_files(regime: Regime, directed: bool, cfg: &CorpusConfig) -> Vec<(String, String)> {
    generate(regime, directed, cfg)
        .into_iter()
        .map(|cg| {
            let mut text = format!(
                "# corpus seed={} index={} multiplicity={}",
                cfg.seed, cg.index, cg.multiplicity
            );
            if let Some(b) = cg.bound {
                text.push_str(&format!(" bound={}", fmt_g(b)));
            }
            text.push('\n');
            text.push_str(&serialize_graph(&cg.graph));
            (format!("graph-{:04}.txt", cg.index + 1), text)
        })
        .collect()
}
