//! Interaction graphs: vertices are spins, edges are equal-strength x-x couplings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph with edges stored as sorted `(i, j)` pairs, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and
    /// duplicate edges (in either orientation).
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::invalid("graph must have at least one vertex"));
        }
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop on vertex {a}")));
            }
            Error::check_index("vertices", a, n_vertices)?;
            Error::check_index("vertices", b, n_vertices)?;
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Graph {
            n_vertices,
            edges: out,
        })
    }

    /// Graph with no edges.
    pub fn empty(n_vertices: usize) -> Result<Self> {
        Graph::new(n_vertices, [])
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges incident to `l`.
    pub fn degree(&self, l: usize) -> Result<usize> {
        Error::check_index("vertices", l, self.n_vertices)?;
        Ok(self.edges.iter().filter(|&&(a, b)| a == l || b == l).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.n_vertices]; self.n_vertices];
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        m
    }

    pub fn preset(p: Preset) -> Result<Self> {
        match p {
            Preset::Valencia => Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]),
            Preset::Complete(n) => {
                Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            }
            Preset::Path(n) => Graph::new(n, (1..n).map(|i| (i - 1, i))),
            Preset::Ring(n) => {
                if n < 3 {
                    return Err(Error::invalid(format!("ring needs at least 3 vertices, got {n}")));
                }
                Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
            }
        }
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Self> {
        match format {
            GraphFormat::EdgeList => parse_edge_list(text),
            GraphFormat::Json => parse_json(text),
            GraphFormat::Adjacency => parse_adjacency(text),
        }
    }

    pub fn serialize(&self, format: GraphFormat) -> String {
        match format {
            GraphFormat::EdgeList => {
                let mut s = format!("{}\n", self.n_vertices);
                for (a, b) in &self.edges {
                    s.push_str(&format!("{a} {b}\n"));
                }
                s
            }
            GraphFormat::Json => serde_json::to_string(&self.to_json()).expect("graph json"),
            GraphFormat::Adjacency => {
                let mut s = format!("{}\n", self.n_vertices);
                for row in self.adjacency() {
                    let row: Vec<String> = row.iter().map(u8::to_string).collect();
                    s.push_str(&row.join(" "));
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: Some(self.n_vertices),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// JSON shape of a graph: `{"n": 5, "edges": [[0, 1], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
    Adjacency,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            "adjacency" | "adj" => Ok(GraphFormat::Adjacency),
            _ => Err(Error::invalid(format!("unknown graph format '{s}'"))),
        }
    }
}

/// Named graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Five spins in the T-shaped coupling map of a 5-qubit device:
    /// edges (0,1), (1,2), (1,3), (3,4).
    Valencia,
    Complete(usize),
    Path(usize),
    Ring(usize),
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `valencia`, `complete(5)`, `complete:5`, and likewise for `path`/`ring`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "valencia" {
            return Ok(Preset::Valencia);
        }
        let (name, arg) = if let Some((name, rest)) = s.split_once('(') {
            let arg = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::invalid(format!("unbalanced preset '{s}'")))?;
            (name, arg)
        } else if let Some((name, arg)) = s.split_once(':') {
            (name, arg)
        } else {
            return Err(Error::invalid(format!("unknown preset '{s}'")));
        };
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad vertex count in preset '{s}'")))?;
        match name.trim() {
            "complete" => Ok(Preset::Complete(n)),
            "path" => Ok(Preset::Path(n)),
            "ring" => Ok(Preset::Ring(n)),
            _ => Err(Error::invalid(format!("unknown preset '{s}'"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Valencia => write!(f, "valencia"),
            Preset::Complete(n) => write!(f, "complete({n})"),
            Preset::Path(n) => write!(f, "path({n})"),
            Preset::Ring(n) => write!(f, "ring({n})"),
        }
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got '{tok}'")))
}

fn infer_count(edges: &[(usize, usize)]) -> Result<usize> {
    edges
        .iter()
        .map(|&(a, b)| a.max(b) + 1)
        .max()
        .ok_or_else(|| Error::invalid("no vertex count given and no edges to infer it from"))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (k, (line, l)) in content_lines(text).enumerate() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match (k, toks.as_slice()) {
            (0, [count]) => n = Some(parse_index(count, line)?),
            (_, [a, b]) => edges.push((parse_index(a, line)?, parse_index(b, line)?)),
            _ => return Err(Error::parse(line, format!("expected 'i j', got '{l}'"))),
        }
    }
    let n = match n {
        Some(n) => n,
        None => infer_count(&edges)?,
    };
    Graph::new(n, edges)
}

fn parse_json(text: &str) -> Result<Graph> {
    let raw: GraphJson = serde_json::from_str(text)?;
    let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
    let n = match raw.n {
        Some(n) => n,
        None => infer_count(&edges)?,
    };
    Graph::new(n, edges)
}

fn parse_adjacency(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let n = parse_index(first, line)?;
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        let row = l
            .split_whitespace()
            .map(|tok| match tok {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                _ => Err(Error::parse(
                    line,
                    format!("adjacency entries must be 0 or 1, got '{tok}'"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::parse(line, format!("expected {n} entries, got {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(line, format!("expected {n} rows, got {}", rows.len())));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if rows[i][i] != 0 {
            return Err(Error::invalid(format!("self-loop on vertex {i}")));
        }
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                return Err(Error::invalid(format!("adjacency matrix asymmetric at ({i}, {j})")));
            }
            if rows[i][j] == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_valencia_edge_list() {
        let g = Graph::parse("5\n0 1\n1 2\n1 3\n3 4", GraphFormat::EdgeList).unwrap();
        assert_eq!(g, Graph::preset(Preset::Valencia).unwrap());
        assert_eq!(g.edges().len(), 4);
    }

    #[test]
    fn single_vertex_without_edges() {
        let g = Graph::parse("1\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.n_vertices(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn edge_list_comments_and_inferred_count() {
        let g = Graph::parse("# a path\n0 1\n\n# tail\n1 2\n", GraphFormat::EdgeList).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn complete_from_adjacency() {
        let text = "5\n0 1 1 1 1\n1 0 1 1 1\n1 1 0 1 1\n1 1 1 0 1\n1 1 1 1 0\n";
        let g = Graph::parse(text, GraphFormat::Adjacency).unwrap();
        assert_eq!(g.edges().len(), 10);
        assert_eq!(g, Graph::preset(Preset::Complete(5)).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            ("3\n0 0\n", GraphFormat::EdgeList),
            ("3\n0 3\n", GraphFormat::EdgeList),
            ("3\n0 1\n1 0\n", GraphFormat::EdgeList),
            ("3\n0 x\n", GraphFormat::EdgeList),
            ("3\n0 1 2\n", GraphFormat::EdgeList),
            ("2\n0 1\n0 0\n", GraphFormat::Adjacency),
            ("2\n0 2\n2 0\n", GraphFormat::Adjacency),
            ("2\n1 1\n1 0\n", GraphFormat::Adjacency),
            ("2\n0 0.5\n0.5 0\n", GraphFormat::Adjacency),
            ("2\n0 1\n", GraphFormat::Adjacency),
            (r#"{"n": 2, "edges": [[0, 2]]}"#, GraphFormat::Json),
            (r#"{"n": 2, "edges": [[0]]}"#, GraphFormat::Json),
            (r#"{"edges": []}"#, GraphFormat::Json),
        ];
        for (text, fmt) in bad {
            assert!(Graph::parse(text, fmt).is_err(), "{text:?} should fail");
        }
    }

    #[test]
    fn json_with_isolated_vertices() {
        let g = Graph::parse(r#"{"n": 4, "edges": [[1, 0]]}"#, GraphFormat::Json).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.degrees(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn degrees_of_named_graphs() {
        let v = Graph::preset(Preset::Valencia).unwrap();
        assert_eq!(v.degrees(), vec![1, 3, 1, 2, 1]);
        assert_eq!(v.degree(1).unwrap(), 3);
        assert_eq!(v.degree(3).unwrap(), 2);
        assert!(v.degree(5).is_err());
        let k5 = Graph::preset(Preset::Complete(5)).unwrap();
        assert!((0..5).all(|l| k5.degree(l).unwrap() == 4));
    }

    #[test]
    fn presets() {
        assert_eq!(Graph::preset(Preset::Path(2)).unwrap().edges(), &[(0, 1)]);
        assert_eq!(Graph::preset(Preset::Ring(4)).unwrap().edges().len(), 4);
        assert!(Graph::preset(Preset::Ring(2)).is_err());
        assert!(Graph::preset(Preset::Complete(0)).is_err());
        assert_eq!(Graph::preset(Preset::Path(1)).unwrap().edges().len(), 0);
        assert_eq!("complete(5)".parse::<Preset>().unwrap(), Preset::Complete(5));
        assert_eq!("ring:6".parse::<Preset>().unwrap(), Preset::Ring(6));
        assert_eq!("Valencia".parse::<Preset>().unwrap(), Preset::Valencia);
        assert!("star(3)".parse::<Preset>().is_err());
    }
}
