//! Text formats: edge lists, degree sequences and space coordinate CSVs.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, MultiGraph};
use crate::space::SocialSpace;

/// Parameters recorded as `#`-prefixed header comments of an edge list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeListMeta {
    pub alpha: Option<f64>,
    pub b: Option<f64>,
    pub seed: Option<u64>,
}

/// Write a simple graph as `u v` lines, 0-based ids, lexicographically
/// sorted, with parameter header comments.
pub fn write_edge_list<W: Write>(w: &mut W, g: &Graph, meta: &EdgeListMeta) -> Result<()> {
    writeln!(w, "# nodes {}", g.n_nodes())?;
    if let Some(alpha) = meta.alpha {
        writeln!(w, "# alpha {alpha}")?;
    }
    if let Some(b) = meta.b {
        writeln!(w, "# b {b}")?;
    }
    if let Some(seed) = meta.seed {
        writeln!(w, "# seed {seed}")?;
    }
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Read a simple graph written by [`write_edge_list`]. Unknown header
/// comments are ignored; without a `# nodes` header the node count is
/// inferred from the largest id.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<(Graph, EdgeListMeta)> {
    let mut meta = EdgeListMeta::default();
    let mut declared_nodes: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = 0usize;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("nodes"), Some(v)) => declared_nodes = Some(parse_field(v, lineno, "nodes")?),
                (Some("alpha"), Some(v)) => meta.alpha = Some(parse_field(v, lineno, "alpha")?),
                (Some("b"), Some(v)) => meta.b = Some(parse_field(v, lineno, "b")?),
                (Some("seed"), Some(v)) => meta.seed = Some(parse_field(v, lineno, "seed")?),
                _ => {}
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let u: usize = parse_field(parts.next().unwrap_or(""), lineno, "edge endpoint")?;
        let v: usize = parse_field(parts.next().unwrap_or(""), lineno, "edge endpoint")?;
        if u == v {
            return Err(Error::Parse(format!(
                "line {}: self-loop {u} {v} not allowed in a simple graph",
                lineno + 1
            )));
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }
    let n = declared_nodes.unwrap_or(if edges.is_empty() { 0 } else { max_id + 1 });
    let mut g = Graph::new(n);
    for (u, v) in edges {
        g.add_edge(u, v)?;
    }
    Ok((g, meta))
}

fn parse_field<T: std::str::FromStr>(s: &str, lineno: usize, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {}: bad {what} value `{s}`", lineno + 1)))
}

/// Write a multigraph: parallel edges repeat their line, self-loops appear
/// as `u u`.
pub fn write_multigraph_edge_list<W: Write>(w: &mut W, mg: &MultiGraph) -> Result<()> {
    writeln!(w, "# nodes {}", mg.n_nodes())?;
    let mut edges: Vec<(usize, usize)> = mg.edges().collect();
    edges.sort_unstable();
    for (u, v) in edges {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Write a degree sequence, one integer per line.
pub fn write_degree_sequence<W: Write>(w: &mut W, degrees: &[usize]) -> Result<()> {
    for d in degrees {
        writeln!(w, "{d}")?;
    }
    Ok(())
}

/// Read a degree sequence written by [`write_degree_sequence`].
pub fn read_degree_sequence<R: BufRead>(r: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_field(line, lineno, "degree")?);
    }
    Ok(out)
}

/// Export agent coordinates as CSV: header `agent,dim0,...,dim{m-1}`, one
/// row per agent, 17 significant digits.
pub fn write_space_csv<W: Write>(w: &mut W, space: &SocialSpace) -> Result<()> {
    let dims: Vec<String> = (0..space.dims()).map(|k| format!("dim{k}")).collect();
    writeln!(w, "agent,{}", dims.join(","))?;
    for i in 0..space.n_agents() {
        let coords: Vec<String> = space.coord(i).iter().map(|c| format!("{c:.16e}")).collect();
        writeln!(w, "{i},{}", coords.join(","))?;
    }
    Ok(())
}
