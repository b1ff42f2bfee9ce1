//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! undirected
//! vertices 3
//! edge 1 2 0.5
//! edge 1 2 0.25
//! ```
//!
//! Vertices are 1-based in the file and 0-based in the returned graph. Repeated
//! `edge` lines are parallel edges.

use std::fmt;

use vertex_proximity::{Edge, WeightedMultigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, or `None` for problems found at end of input.
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn eof(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "end of input: {}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

pub fn parse_graph(text: &str) -> Result<WeightedMultigraph, ParseError> {
    let mut directed = None;
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "directed" | "undirected" => {
                if tokens.len() != 1 {
                    return Err(ParseError::at(line, "orientation line takes no arguments"));
                }
                if directed.is_some() {
                    return Err(ParseError::at(line, "orientation given twice"));
                }
                if !edges.is_empty() {
                    return Err(ParseError::at(line, "orientation must precede the edges"));
                }
                directed = Some(tokens[0] == "directed");
            }
            "vertices" => {
                if n.is_some() {
                    return Err(ParseError::at(line, "vertex count given twice"));
                }
                let [_, count] = tokens[..] else {
                    return Err(ParseError::at(line, "expected 'vertices N'"));
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("invalid vertex count '{count}'")))?;
                if count == 0 {
                    return Err(ParseError::at(line, "a graph needs at least one vertex"));
                }
                n = Some(count);
            }
            "edge" => {
                let Some(count) = n else {
                    return Err(ParseError::at(line, "'vertices N' must precede the edges"));
                };
                if directed.is_none() {
                    return Err(ParseError::at(line, "orientation must precede the edges"));
                }
                let [_, u, v, w] = tokens[..] else {
                    return Err(ParseError::at(line, "expected 'edge U V W'"));
                };
                let vertex = |s: &str| -> Result<usize, ParseError> {
                    let x: usize = s
                        .parse()
                        .map_err(|_| ParseError::at(line, format!("invalid vertex '{s}'")))?;
                    if x == 0 || x > count {
                        return Err(ParseError::at(
                            line,
                            format!("vertex {x} out of range 1..={count}"),
                        ));
                    }
                    Ok(x - 1)
                };
                let (u, v) = (vertex(u)?, vertex(v)?);
                let weight: f64 = w
                    .parse()
                    .map_err(|_| ParseError::at(line, format!("invalid weight '{w}'")))?;
                if !(weight.is_finite() && weight > 0.0) {
                    return Err(ParseError::at(
                        line,
                        format!("weight must be positive and finite, got {w}"),
                    ));
                }
                edges.push(Edge::new(u, v, weight));
            }
            other => return Err(ParseError::at(line, format!("unknown keyword '{other}'"))),
        }
    }
    let directed = directed.ok_or_else(|| ParseError::eof("missing 'directed' or 'undirected'"))?;
    let n = n.ok_or_else(|| ParseError::eof("missing 'vertices N'"))?;
    WeightedMultigraph::new(n, directed, edges).map_err(|e| ParseError::eof(e.to_string()))
}

/// Inverse of [`parse_graph`]; weights use the shortest exact decimal form.
pub fn serialize_graph(g: &WeightedMultigraph) -> String {
    let mut out = String::new();
    out.push_str(if g.is_directed() {
        "directed\n"
    } else {
        "undirected\n"
    });
    out.push_str(&format!("vertices {}\n", g.n()));
    for e in g.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            e.tail + 1,
            e.head + 1,
            e.weight
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2() {
        let g = parse_graph("undirected\nvertices 2\nedge 1 2 1\n").unwrap();
        assert_eq!(g, WeightedMultigraph::undirected(2, [(0, 1, 1.0)]).unwrap());
    }

    #[test]
    fn repeated_lines_are_parallel_edges() {
        let g = parse_graph(
            "# two parallel edges\ndirected\nvertices 2\nedge 1 2 0.2\nedge 1 2 0.3 # second\n",
        )
        .unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert!(g.is_directed());
    }

    #[test]
    fn out_of_range_vertex_names_the_line() {
        let err = parse_graph("undirected\nvertices 3\nedge 1 4 1\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn rejects_bad_weights_and_keywords() {
        for (text, line) in [
            ("undirected\nvertices 2\nedge 1 2 0\n", 3),
            ("undirected\nvertices 2\nedge 1 2 -1\n", 3),
            ("undirected\nvertices 2\nedge 1 2 x\n", 3),
            ("undirected\nvertex 2\n", 2),
            ("vertices 2\nedge 1 2 1\n", 2),
            ("undirected\nvertices 0\n", 2),
        ] {
            assert_eq!(parse_graph(text).unwrap_err().line, Some(line), "{text}");
        }
        assert_eq!(parse_graph("undirected\n").unwrap_err().line, None);
    }

    #[test]
    fn round_trip() {
        let g = WeightedMultigraph::directed(
            4,
            [(0, 1, 0.1), (0, 1, 1.0 / 3.0), (3, 2, 2.5e-7), (2, 2, 1.0)],
        )
        .unwrap();
        let text = serialize_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }
}
