//! Structural measures: global clustering, degree assortativity, average
//! shortest path length, degree Gini coefficient, small-world scaling fit
//! and bootstrap bounds.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Global clustering (transitivity): `3 * triangles / connected triples`.
///
/// Returns `None` when the graph has no connected triples. This is the
/// whole-graph ratio, not the mean of per-node clustering coefficients.
pub fn global_clustering(g: &Graph) -> Option<f64> {
    let triples: u64 = g
        .degrees()
        .iter()
        .map(|&d| (d as u64) * (d.saturating_sub(1) as u64) / 2)
        .sum();
    if triples == 0 {
        return None;
    }
    let (offsets, nbrs) = g.adjacency_csr();
    // Sum over edges of |N(u) ∩ N(v)| counts each triangle once per edge,
    // i.e. exactly 3 * triangles.
    let closed: u64 = (0..g.n_nodes())
        .into_par_iter()
        .map(|u| {
            let un = &nbrs[offsets[u]..offsets[u + 1]];
            let mut acc = 0u64;
            for &v in un.iter().filter(|&&v| (v as usize) > u) {
                let vn = &nbrs[offsets[v as usize]..offsets[v as usize + 1]];
                acc += sorted_intersection_size(un, vn);
            }
            acc
        })
        .sum();
    Some(closed as f64 / triples as f64)
}

fn sorted_intersection_size(a: &[u32], b: &[u32]) -> u64 {
    let mut count = 0;
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Degree assortativity: Pearson correlation of degrees across edge
/// endpoints, each edge counted in both orientations.
///
/// Computed with exact integer sums, so e.g. a star yields exactly -1.
/// Returns `None` for edgeless graphs and when the endpoint-degree variance
/// is zero (regular graphs).
pub fn degree_assortativity(g: &Graph) -> Option<f64> {
    if g.n_edges() == 0 {
        return None;
    }
    let deg = g.degrees();
    let mut s1: i128 = 0; // sum of endpoint degrees over directed pairs
    let mut s2: i128 = 0; // sum of squared endpoint degrees
    let mut sxy: i128 = 0; // sum of products
    for (u, v) in g.edges() {
        let du = deg[u] as i128;
        let dv = deg[v] as i128;
        s1 += du + dv;
        s2 += du * du + dv * dv;
        sxy += 2 * du * dv;
    }
    let n = 2 * g.n_edges() as i128;
    let num = n * sxy - s1 * s1;
    let den = n * s2 - s1 * s1;
    if den == 0 {
        return None;
    }
    Some(num as f64 / den as f64)
}

/// Connected components as node lists; nodes ascending within components,
/// components ordered by their smallest node.
fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n_nodes();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest connected component (ties broken toward the one containing the
/// smallest node).
pub fn largest_component(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for comp in components(g) {
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}

/// How average shortest paths are estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathLengthMode {
    /// BFS from every node of the largest component.
    Exact,
    /// BFS from `sources` distinct nodes sampled uniformly from the largest
    /// component; equals `Exact` when `sources` covers the component.
    Sampled { sources: usize, seed: u64 },
}

impl PathLengthMode {
    /// Exact up to 4000 nodes, 512 sampled sources beyond (keeps sweeps at
    /// large N affordable).
    pub fn auto(n_nodes: usize, seed: u64) -> Self {
        if n_nodes < 4000 {
            PathLengthMode::Exact
        } else {
            PathLengthMode::Sampled { sources: 512, seed }
        }
    }
}

/// Mean shortest-path distance over reachable pairs within the largest
/// connected component. `None` when that component has fewer than 2 nodes.
pub fn average_path_length(g: &Graph, mode: PathLengthMode) -> Option<f64> {
    let lcc = largest_component(g);
    average_path_length_in(g, &lcc, mode)
}

fn average_path_length_in(g: &Graph, lcc: &[usize], mode: PathLengthMode) -> Option<f64> {
    if lcc.len() < 2 {
        return None;
    }
    let sources: Vec<usize> = match mode {
        PathLengthMode::Exact => lcc.to_vec(),
        PathLengthMode::Sampled { sources, seed } => {
            let s = sources.max(1).min(lcc.len());
            if s == lcc.len() {
                lcc.to_vec()
            } else {
                let mut pool = lcc.to_vec();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for t in 0..s {
                    let pick = rng.random_range(t..pool.len());
                    pool.swap(t, pick);
                }
                pool.truncate(s);
                pool
            }
        }
    };
    let (offsets, nbrs) = g.adjacency_csr();
    let n = g.n_nodes();
    let total: u64 = sources
        .par_iter()
        .map(|&src| bfs_distance_sum(&offsets, &nbrs, n, src))
        .sum();
    let pairs = sources.len() as u64 * (lcc.len() as u64 - 1);
    Some(total as f64 / pairs as f64)
}

fn bfs_distance_sum(offsets: &[usize], nbrs: &[u32], n: usize, src: usize) -> u64 {
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; n];
    dist[src] = 0;
    let mut queue = VecDeque::from([src as u32]);
    let mut sum = 0u64;
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize];
        for &v in &nbrs[offsets[u as usize]..offsets[u as usize + 1]] {
            if dist[v as usize] == UNSEEN {
                dist[v as usize] = d + 1;
                sum += (d + 1) as u64;
                queue.push_back(v);
            }
        }
    }
    sum
}

/// Gini coefficient of a degree vector:
/// `sum_ij |k_i - k_j| / (2 N^2 kbar)`, in `[0, 1 - 1/N]`.
///
/// Exact integer arithmetic over the sorted vector. `None` when every
/// degree is zero.
pub fn gini_coefficient(degrees: &[usize]) -> Option<f64> {
    if degrees.is_empty() {
        return None;
    }
    let total: u128 = degrees.iter().map(|&d| d as u128).sum();
    if total == 0 {
        return None;
    }
    let mut sorted: Vec<u64> = degrees.iter().map(|&d| d as u64).collect();
    sorted.sort_unstable();
    let n = sorted.len() as i128;
    // sum_{i<j} (x_(j) - x_(i)) = sum_i (2i - n + 1) x_(i) over the sorted
    // vector; the double sum over ordered pairs is twice that.
    let weighted: i128 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2 * i as i128 - n + 1) * x as i128)
        .sum();
    Some(weighted as f64 / (n as f64 * total as f64))
}

/// Pearson correlation between average path length and `ln N`.
///
/// `points` are `(n_nodes, avg_path_length)` pairs; at least 3 with
/// distinct sizes are required, and both coordinates must vary.
pub fn small_world_fit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "small-world fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, l)| l).collect();
    let n = points.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for k in 0..points.len() {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx).powi(2);
        syy += (ys[k] - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidParameter(
            "small-world fit input has zero variance".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Bootstrap envelope of the mean: resample `values` with replacement
/// `n_boot` times and return the (min, max) of the replicate means.
pub fn bootstrap_bounds(values: &[f64], n_boot: usize, seed: u64) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput("bootstrap values".into()));
    }
    if n_boot == 0 {
        return Err(Error::InvalidParameter("n_boot must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..n_boot {
        let mut acc = 0.0;
        for _ in 0..values.len() {
            acc += values[rng.random_range(0..values.len())];
        }
        let mean = acc / values.len() as f64;
        lo = lo.min(mean);
        hi = hi.max(mean);
    }
    Ok((lo, hi))
}

/// One row of structural measures for a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub mean_degree: f64,
    pub clustering: Option<f64>,
    pub assortativity: Option<f64>,
    pub avg_path_length: Option<f64>,
    pub gini: Option<f64>,
    /// Fraction of nodes in the largest connected component; path lengths
    /// are computed within that component.
    pub lcc_fraction: f64,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str =
        "n_nodes,n_edges,mean_degree,clustering,assortativity,avg_path_length,gini,lcc_fraction";

    pub fn compute(g: &Graph, path_mode: PathLengthMode) -> MetricsReport {
        let lcc = largest_component(g);
        MetricsReport {
            n_nodes: g.n_nodes(),
            n_edges: g.n_edges(),
            mean_degree: g.mean_degree(),
            clustering: global_clustering(g),
            assortativity: degree_assortativity(g),
            avg_path_length: average_path_length_in(g, &lcc, path_mode),
            gini: gini_coefficient(&g.degrees()),
            lcc_fraction: lcc.len() as f64 / g.n_nodes().max(1) as f64,
        }
    }

    /// CSV cells in header order; undefined values serialize as empty
    /// cells, never as 0.
    pub fn csv_fields(&self) -> Vec<String> {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        vec![
            self.n_nodes.to_string(),
            self.n_edges.to_string(),
            self.mean_degree.to_string(),
            opt(self.clustering),
            opt(self.assortativity),
            opt(self.avg_path_length),
            opt(self.gini),
            self.lcc_fraction.to_string(),
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.csv_fields().join(",")
    }
}
