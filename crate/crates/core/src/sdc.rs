//! Social distance configuration model: a configuration model whose stub
//! pairings are drawn proportionally to SDA connection probabilities, plus
//! the degree-sequence generators it is studied with.
//!
//! The sampler realizes an arbitrary even-sum degree sequence exactly, as a
//! multigraph. Self-loops, repeat pairs and pairs with zero model
//! probability are kept available at a tiny floor probability
//! (`p_malformed`), which is what guarantees termination without any
//! graphicality test on the sequence.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, MultiGraph};
use crate::sda::ProbabilityMatrix;

/// Default floor probability for malformed edges (self-loops, repeats,
/// zero-probability pairs).
pub const DEFAULT_P_MALFORMED: f64 = 1e-9;

/// Distribution family a degree sequence was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeFamily {
    Poisson,
    NegativeBinomial,
    PowerLaw,
    UserProvided,
}

impl DegreeFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegreeFamily::Poisson => "poisson",
            DegreeFamily::NegativeBinomial => "negative_binomial",
            DegreeFamily::PowerLaw => "power_law",
            DegreeFamily::UserProvided => "user_provided",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "poisson" => Ok(DegreeFamily::Poisson),
            "negative_binomial" | "negbinom" => Ok(DegreeFamily::NegativeBinomial),
            "power_law" | "powerlaw" => Ok(DegreeFamily::PowerLaw),
            "user_provided" => Ok(DegreeFamily::UserProvided),
            other => Err(Error::Parse(format!("unknown degree family `{other}`"))),
        }
    }
}

/// Node degrees with an even sum, tagged by generating family.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    family: DegreeFamily,
    target_mean: f64,
}

impl DegreeSequence {
    /// Wrap an explicit sequence; the sum must be even.
    pub fn from_degrees(degrees: Vec<usize>) -> Result<Self> {
        let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        if !sum.is_multiple_of(2) {
            return Err(Error::OddDegreeSum(sum));
        }
        if degrees.is_empty() {
            return Err(Error::EmptyInput("degree sequence".into()));
        }
        let target_mean = sum as f64 / degrees.len() as f64;
        Ok(DegreeSequence {
            degrees,
            family: DegreeFamily::UserProvided,
            target_mean,
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn family(&self) -> DegreeFamily {
        self.family
    }

    pub fn target_mean(&self) -> f64 {
        self.target_mean
    }

    pub fn sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() as f64 / self.degrees.len() as f64
    }
}

/// If the sum is odd, bump one uniformly chosen node by 1. Nodes already at
/// `cap` are redrawn so the fix always lands (an all-capped sequence sums
/// to `n * cap`, which is even whenever n * (n-1) is).
fn fix_parity(degrees: &mut [usize], cap: Option<usize>, rng: &mut ChaCha8Rng) {
    let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
    if sum.is_multiple_of(2) {
        return;
    }
    loop {
        let i = rng.random_range(0..degrees.len());
        if cap.is_none_or(|c| degrees[i] < c) {
            degrees[i] += 1;
            return;
        }
    }
}

/// I.i.d. Poisson degrees with the given mean, parity-fixed.
pub fn poisson_sequence(n: usize, mean: f64, seed: u64) -> Result<DegreeSequence> {
    if !(mean > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "poisson mean must be positive, got {mean}"
        )));
    }
    let dist = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<usize> = (0..n).map(|_| dist.sample(&mut rng) as usize).collect();
    fix_parity(&mut degrees, None, &mut rng);
    Ok(DegreeSequence {
        degrees,
        family: DegreeFamily::Poisson,
        target_mean: mean,
    })
}

/// I.i.d. negative binomial degrees with size 1 and success probability
/// 1/31 (a geometric with mean 30), parity-fixed.
pub fn negative_binomial_sequence(n: usize, seed: u64) -> DegreeSequence {
    let dist = Geometric::new(1.0 / 31.0).expect("valid success probability");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<usize> = (0..n).map(|_| dist.sample(&mut rng) as usize).collect();
    fix_parity(&mut degrees, None, &mut rng);
    DegreeSequence {
        degrees,
        family: DegreeFamily::NegativeBinomial,
        target_mean: 30.0,
    }
}

/// Power-law-tailed degrees with a controlled mean, built by running a
/// preferential attachment growth process.
///
/// New nodes attach `m = round(target_mean / 2)` edges to distinct existing
/// nodes with probability proportional to current degree, starting from a
/// clique on `m + 1` nodes; this pins the mean degree near `target_mean`
/// and keeps every degree below the system size. The process imposes an
/// artificial lower bound of `m`, so uniform integer noise on `[-m, m]` is
/// added per node, then values are clamped to `[0, n-1]` and parity-fixed.
pub fn power_law_sequence(n: usize, target_mean: f64, seed: u64) -> Result<DegreeSequence> {
    if !(target_mean >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "target_mean must be >= 2 so that at least one edge attaches per node, got {target_mean}"
        )));
    }
    let m = (target_mean / 2.0).round() as usize;
    if n <= m {
        return Err(Error::InvalidParameter(format!(
            "n = {n} too small for preferential attachment with m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = vec![0usize; n];

    // Endpoint pool: each node appears once per incident edge, so a uniform
    // index is a degree-proportional draw.
    let mut pool: Vec<u32> = Vec::new();
    for i in 0..=m {
        for j in (i + 1)..=m {
            pool.push(i as u32);
            pool.push(j as u32);
            degrees[i] += 1;
            degrees[j] += 1;
        }
    }
    let mut targets: Vec<u32> = Vec::with_capacity(m);
    for new_node in (m + 1)..n {
        // Weights frozen at arrival: draws index the pool as it was before
        // this node's edges are added.
        let snapshot = pool.len();
        targets.clear();
        while targets.len() < m {
            let t = pool[rng.random_range(0..snapshot)];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            pool.push(t);
            pool.push(new_node as u32);
            degrees[t as usize] += 1;
            degrees[new_node] += 1;
        }
    }

    let cap = n - 1;
    for d in degrees.iter_mut() {
        let noise = rng.random_range(-(m as i64)..=(m as i64));
        let noisy = (*d as i64 + noise).clamp(0, cap as i64);
        *d = noisy as usize;
    }
    fix_parity(&mut degrees, Some(cap), &mut rng);
    Ok(DegreeSequence {
        degrees,
        family: DegreeFamily::PowerLaw,
        target_mean,
    })
}

/// Parameters of the stub-matching sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdcParams {
    /// Floor probability assigned to self-loops, already-connected pairs
    /// and zero-probability pairs. Must be in (0, 1).
    pub p_malformed: f64,
    pub seed: u64,
}

impl SdcParams {
    pub fn new(p_malformed: f64, seed: u64) -> Result<Self> {
        if !(p_malformed > 0.0 && p_malformed < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p_malformed must lie in (0, 1), got {p_malformed}"
            )));
        }
        Ok(SdcParams { p_malformed, seed })
    }

    pub fn with_seed(seed: u64) -> Self {
        SdcParams {
            p_malformed: DEFAULT_P_MALFORMED,
            seed,
        }
    }
}

/// Mutable weight matrix with incrementally maintained row sums.
struct WeightTable {
    n: usize,
    w: Vec<f64>,
    row_sums: Vec<f64>,
}

impl WeightTable {
    fn new(probs: &ProbabilityMatrix, p_malformed: f64) -> Self {
        let n = probs.n();
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            let row = probs.row(i);
            for j in 0..n {
                let p = row[j];
                // Zero entries (including the diagonal) are raised to the
                // malformed floor so every pairing stays reachable.
                w[i * n + j] = if p == 0.0 { p_malformed } else { p };
            }
        }
        let row_sums = (0..n).map(|i| w[i * n..(i + 1) * n].iter().sum()).collect();
        WeightTable { n, w, row_sums }
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        let slot = &mut self.w[i * self.n + j];
        let delta = value - *slot;
        *slot = value;
        self.row_sums[i] += delta;
        // Incremental updates can drift near zero; restore the exact sum so
        // live rows never appear dead.
        if self.row_sums[i] <= 0.0 {
            self.recompute_row(i);
        }
    }

    fn recompute_row(&mut self, i: usize) {
        self.row_sums[i] = self.w[i * self.n..(i + 1) * self.n].iter().sum();
    }

    /// Zero row and column of an exhausted node so it can no longer be
    /// selected on either side of a pairing.
    fn kill_node(&mut self, v: usize) {
        for k in 0..self.n {
            let slot = &mut self.w[k * self.n + v];
            if *slot != 0.0 {
                let value = *slot;
                *slot = 0.0;
                self.row_sums[k] -= value;
                // Same drift guard as `set`: a live row must never show a
                // non-positive sum or it becomes unselectable.
                if self.row_sums[k] <= 0.0 {
                    self.recompute_row(k);
                }
            }
        }
        for slot in &mut self.w[v * self.n..(v + 1) * self.n] {
            *slot = 0.0;
        }
        self.row_sums[v] = 0.0;
    }

    /// Inverse-transform draw over row sums. `u` is uniform in [0, 1).
    fn draw_row(&self, u: f64) -> usize {
        let total: f64 = self.row_sums.iter().sum();
        let target = u * total;
        let mut acc = 0.0;
        let mut last_live = None;
        for (i, &rs) in self.row_sums.iter().enumerate() {
            if rs > 0.0 {
                last_live = Some(i);
                acc += rs;
                if target < acc {
                    return i;
                }
            }
        }
        last_live.expect("a live row must exist while stubs remain")
    }

    /// Inverse-transform draw within row `i`, optionally excluding the
    /// diagonal (when node `i` has no stub left to pay for a self-loop).
    fn draw_in_row(&self, i: usize, exclude_diag: bool, u: f64) -> usize {
        let row = &self.w[i * self.n..(i + 1) * self.n];
        let mut denom = self.row_sums[i];
        if exclude_diag {
            denom -= row[i];
        }
        let target = u * denom;
        let mut acc = 0.0;
        let mut last_live = None;
        for (j, &weight) in row.iter().enumerate() {
            if exclude_diag && j == i {
                continue;
            }
            if weight > 0.0 {
                last_live = Some(j);
                acc += weight;
                if target < acc {
                    return j;
                }
            }
        }
        last_live.expect("a live partner must exist while stubs remain")
    }
}

/// Realize a degree sequence as a multigraph, pairing stubs with
/// probability proportional to the SDA connection probabilities.
///
/// The procedure: raise zero entries of the probability matrix (including
/// the diagonal) to `p_malformed`; disable nodes with zero degree; then
/// repeatedly pick a node proportionally to its row sum, pick its partner
/// proportionally to the weights within the row, place the edge and drop
/// the connected pair's weight to `p_malformed`. A node's row and column
/// are zeroed the moment its stub count reaches zero, which is what makes
/// the realized degrees match the input exactly.
pub fn sdc_sample(
    probs: &ProbabilityMatrix,
    seq: &DegreeSequence,
    params: &SdcParams,
) -> Result<MultiGraph> {
    let n = probs.n();
    if seq.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "degree sequence has {} entries but probability matrix is {n} x {n}",
            seq.len()
        )));
    }
    SdcParams::new(params.p_malformed, params.seed)?;
    let total_stubs = seq.sum();
    if !total_stubs.is_multiple_of(2) {
        return Err(Error::OddDegreeSum(total_stubs));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut table = WeightTable::new(probs, params.p_malformed);
    let mut stubs: Vec<usize> = seq.degrees().to_vec();
    for (v, &count) in stubs.iter().enumerate() {
        if count == 0 {
            table.kill_node(v);
        }
    }

    let mut mg = MultiGraph::new(n);
    let mut remaining = total_stubs;
    while remaining > 0 {
        let i = table.draw_row(rng.random::<f64>());
        stubs[i] -= 1;
        let j = table.draw_in_row(i, stubs[i] == 0, rng.random::<f64>());
        stubs[j] -= 1;
        mg.add_edge(i, j)?;
        if i != j {
            table.set(i, j, params.p_malformed);
            table.set(j, i, params.p_malformed);
        }
        if stubs[i] == 0 {
            table.kill_node(i);
        }
        if j != i && stubs[j] == 0 {
            table.kill_node(j);
        }
        remaining -= 2;
    }
    debug_assert_eq!(mg.degrees(), seq.degrees());
    Ok(mg)
}

/// Counts of edges dropped by [`simplify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimplifyReport {
    pub parallel_removed: usize,
    pub self_loops_removed: usize,
}

impl SimplifyReport {
    pub fn total_removed(&self) -> usize {
        self.parallel_removed + self.self_loops_removed
    }
}

/// Collapse parallel edges and drop self-loops, reporting what was removed.
pub fn simplify(mg: &MultiGraph) -> (Graph, SimplifyReport) {
    let mut g = Graph::new(mg.n_nodes());
    let mut report = SimplifyReport::default();
    for (u, v) in mg.edges() {
        if u == v {
            report.self_loops_removed += 1;
        } else if !g.add_edge(u, v).expect("nodes in range") {
            report.parallel_removed += 1;
        }
    }
    (g, report)
}
