#![allow(dead_code)]

//! Brute-force reference implementations and tiny-graph generators used to
//! validate the metric implementations. Everything here is deliberately
//! naive and independent of the library's algorithms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sdanet::Graph;

/// Transitivity by scanning all node triples: triangles are triples with
/// all three edges, connected triples are center nodes with an unordered
/// pair of neighbors.
pub fn oracle_clustering(g: &Graph) -> Option<f64> {
    let n = g.n_nodes();
    let mut triangles = 0u64;
    let mut triples = 0u64;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let ab = g.has_edge(a, b);
                let bc = g.has_edge(b, c);
                let ac = g.has_edge(a, c);
                if ab && bc && ac {
                    triangles += 1;
                }
                // Count each of the three possible centers separately.
                if ab && ac {
                    triples += 1;
                }
                if ab && bc {
                    triples += 1;
                }
                if ac && bc {
                    triples += 1;
                }
            }
        }
    }
    if triples == 0 {
        None
    } else {
        Some(3.0 * triangles as f64 / triples as f64)
    }
}

/// Pearson correlation over the explicit list of ordered endpoint-degree
/// pairs (each edge in both directions).
pub fn oracle_assortativity(g: &Graph) -> Option<f64> {
    if g.n_edges() == 0 {
        return None;
    }
    let deg = g.degrees();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (u, v) in g.edges() {
        xs.push(deg[u] as f64);
        ys.push(deg[v] as f64);
        xs.push(deg[v] as f64);
        ys.push(deg[u] as f64);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for k in 0..xs.len() {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx).powi(2);
        syy += (ys[k] - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Average shortest path by Floyd-Warshall, restricted to the largest
/// component (ties toward the component containing the smallest node).
pub fn oracle_avg_path_length(g: &Graph) -> Option<f64> {
    let n = g.n_nodes();
    const INF: u64 = u64::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for i in 0..n {
        dist[i][i] = 0;
    }
    for (u, v) in g.edges() {
        dist[u][v] = 1;
        dist[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = dist[i][k] + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    // Components from reachability.
    let mut assigned = vec![false; n];
    let mut best: Vec<usize> = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&j| dist[i][j] < INF).collect();
        for &j in &comp {
            assigned[j] = true;
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    if best.len() < 2 {
        return None;
    }
    let mut total = 0u64;
    let mut pairs = 0u64;
    for (idx, &i) in best.iter().enumerate() {
        for &j in &best[idx + 1..] {
            total += dist[i][j];
            pairs += 1;
        }
    }
    Some(total as f64 / pairs as f64)
}

/// Gini coefficient by the direct O(N^2) double sum.
pub fn oracle_gini(degrees: &[usize]) -> Option<f64> {
    let n = degrees.len();
    if n == 0 {
        return None;
    }
    let total: f64 = degrees.iter().map(|&d| d as f64).sum();
    if total == 0.0 {
        return None;
    }
    let mean = total / n as f64;
    let mut acc = 0.0;
    for &a in degrees {
        for &b in degrees {
            acc += (a as f64 - b as f64).abs();
        }
    }
    Some(acc / (2.0 * (n * n) as f64 * mean))
}

/// Erdos-Renyi style random graph for oracle comparisons.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// Compare two optional metric values: both undefined, or both within tol.
pub fn agree(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        _ => false,
    }
}
