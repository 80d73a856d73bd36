//! Social spaces: latent coordinates for agents and pairwise distances.
//!
//! Agents live in an `m`-dimensional metric space; tie probabilities are
//! derived from the distances between them. Three coordinate distributions
//! are supported: uniform on the unit cube, a mixture of equally sized
//! Gaussian clusters, and independent standard lognormals.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on dense pairwise allocations: 2 GiB.
pub const DEFAULT_MEMORY_CAP_BYTES: u64 = 2 << 30;

/// Standard deviation of Gaussian-cluster centroids around the origin.
/// Within-cluster noise has unit standard deviation per dimension, so this
/// yields visibly separated but overlapping groups.
pub const CLUSTER_CENTROID_STD: f64 = 4.0;

/// Coordinate distribution used to place agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFamily {
    /// Each coordinate i.i.d. uniform on `[0, 1]`.
    Uniform,
    /// Equally sized spherical groups: unit Gaussian noise around
    /// per-cluster centroids drawn from `Normal(0, CLUSTER_CENTROID_STD^2)`.
    GaussianClusters,
    /// Each coordinate i.i.d. standard lognormal (log-mean 0, log-sd 1).
    Lognormal,
}

impl SpaceFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpaceFamily::Uniform => "uniform",
            SpaceFamily::GaussianClusters => "gaussian_clusters",
            SpaceFamily::Lognormal => "lognormal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SpaceFamily::Uniform),
            "gaussian_clusters" | "clusters" => Ok(SpaceFamily::GaussianClusters),
            "lognormal" => Ok(SpaceFamily::Lognormal),
            other => Err(Error::Parse(format!("unknown space family `{other}`"))),
        }
    }
}

/// Recipe for sampling a [`SocialSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    pub family: SpaceFamily,
    pub dims: usize,
    pub n_agents: usize,
    pub seed: u64,
    /// Number of groups for [`SpaceFamily::GaussianClusters`]; ignored otherwise.
    pub cluster_count: usize,
}

impl SpaceSpec {
    /// Spec with the default of 4 clusters.
    pub fn new(family: SpaceFamily, dims: usize, n_agents: usize, seed: u64) -> Self {
        SpaceSpec {
            family,
            dims,
            n_agents,
            seed,
            cluster_count: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_agents must be >= 2, got {}",
                self.n_agents
            )));
        }
        if self.dims < 1 {
            return Err(Error::InvalidParameter("dims must be >= 1".into()));
        }
        if self.family == SpaceFamily::GaussianClusters && self.cluster_count < 1 {
            return Err(Error::InvalidParameter("cluster_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Agent coordinates: an `N x m` row-major matrix.
#[derive(Debug, Clone)]
pub struct SocialSpace {
    coords: Vec<f64>,
    n_agents: usize,
    dims: usize,
    cluster_labels: Option<Vec<u32>>,
}

impl SocialSpace {
    /// Build from explicit coordinates (row-major, `n_agents * dims` entries).
    pub fn from_coords(coords: Vec<f64>, n_agents: usize, dims: usize) -> Result<Self> {
        if n_agents < 2 || dims < 1 {
            return Err(Error::InvalidParameter(
                "space requires n_agents >= 2 and dims >= 1".into(),
            ));
        }
        if coords.len() != n_agents * dims {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                n_agents * dims,
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "all coordinates must be finite".into(),
            ));
        }
        Ok(SocialSpace {
            coords,
            n_agents,
            dims,
            cluster_labels: None,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Coordinate row of agent `i`.
    pub fn coord(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dims..(i + 1) * self.dims]
    }

    /// Cluster label per agent; present only for Gaussian-cluster spaces.
    pub fn cluster_labels(&self) -> Option<&[u32]> {
        self.cluster_labels.as_deref()
    }
}

/// Sample agent positions according to `spec`. Deterministic per seed.
pub fn sample_space(spec: &SpaceSpec) -> Result<SocialSpace> {
    spec.validate()?;
    let n = spec.n_agents;
    let m = spec.dims;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords = Vec::with_capacity(n * m);
    let mut labels = None;

    match spec.family {
        SpaceFamily::Uniform => {
            for _ in 0..n * m {
                coords.push(rng.random::<f64>());
            }
        }
        SpaceFamily::GaussianClusters => {
            let k = spec.cluster_count;
            let centroid_dist = Normal::new(0.0, CLUSTER_CENTROID_STD).expect("valid sd");
            let noise = Normal::new(0.0, 1.0).expect("valid sd");
            let mut centroids = Vec::with_capacity(k * m);
            for _ in 0..k * m {
                centroids.push(centroid_dist.sample(&mut rng));
            }
            // Round-robin assignment keeps cluster sizes within one of each other.
            let lab: Vec<u32> = (0..n).map(|i| (i % k) as u32).collect();
            for &c in &lab {
                let centroid = &centroids[c as usize * m..(c as usize + 1) * m];
                for &center in centroid {
                    coords.push(center + noise.sample(&mut rng));
                }
            }
            labels = Some(lab);
        }
        SpaceFamily::Lognormal => {
            let dist = LogNormal::new(0.0, 1.0).expect("valid sd");
            for _ in 0..n * m {
                coords.push(dist.sample(&mut rng));
            }
        }
    }

    Ok(SocialSpace {
        coords,
        n_agents: n,
        dims: m,
        cluster_labels: labels,
    })
}

/// Distance metric on the social space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    Manhattan,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            other => Err(Error::Parse(format!("unknown metric `{other}`"))),
        }
    }
}

// Accumulates dimensions in index order so dense and on-demand backings
// produce bit-identical values.
fn metric_distance(a: &[f64], b: &[f64], metric: Metric) -> f64 {
    match metric {
        Metric::Euclidean => {
            let mut acc = 0.0;
            for k in 0..a.len() {
                let d = a[k] - b[k];
                acc += d * d;
            }
            acc.sqrt()
        }
        Metric::Manhattan => {
            let mut acc = 0.0;
            for k in 0..a.len() {
                acc += (a[k] - b[k]).abs();
            }
            acc
        }
    }
}

/// Distance between agents `i` and `j` with index checking.
pub fn pairwise_distance(space: &SocialSpace, i: usize, j: usize, metric: Metric) -> Result<f64> {
    let n = space.n_agents();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    Ok(metric_distance(space.coord(i), space.coord(j), metric))
}

/// Backing strategy for pairwise distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderMode {
    /// Materialize the full `N x N` matrix (subject to the memory cap).
    Dense,
    /// Recompute each distance from coordinates on demand.
    OnDemand,
}

/// Pairwise distances over a [`SocialSpace`], either materialized or computed
/// per query. Read-only after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct DistanceProvider {
    space: SocialSpace,
    metric: Metric,
    dense: Option<Vec<f64>>,
    cap_bytes: u64,
}

/// Bytes required to hold a dense `n x n` matrix of f64.
pub fn dense_matrix_bytes(n: usize) -> u128 {
    (n as u128) * (n as u128) * 8
}

/// Whether a dense `n x n` f64 matrix fits under `cap_bytes`.
pub fn dense_fits(n: usize, cap_bytes: u64) -> bool {
    dense_matrix_bytes(n) <= cap_bytes as u128
}

/// Build a provider with the default 2 GiB cap on dense allocations.
pub fn build_distance_provider(
    space: SocialSpace,
    metric: Metric,
    mode: ProviderMode,
) -> Result<DistanceProvider> {
    build_distance_provider_with_cap(space, metric, mode, DEFAULT_MEMORY_CAP_BYTES)
}

/// Build a provider with an explicit memory cap (bytes) for dense mode.
pub fn build_distance_provider_with_cap(
    space: SocialSpace,
    metric: Metric,
    mode: ProviderMode,
    cap_bytes: u64,
) -> Result<DistanceProvider> {
    let n = space.n_agents();
    let dense = match mode {
        ProviderMode::OnDemand => None,
        ProviderMode::Dense => {
            if !dense_fits(n, cap_bytes) {
                return Err(Error::MemoryCapExceeded {
                    required_bytes: dense_matrix_bytes(n),
                    cap_bytes,
                });
            }
            let mut matrix = vec![0.0; n * n];
            matrix.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                let a = space.coord(i);
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = metric_distance(a, space.coord(j), metric);
                }
            });
            Some(matrix)
        }
    };
    Ok(DistanceProvider {
        space,
        metric,
        dense,
        cap_bytes,
    })
}

impl DistanceProvider {
    pub fn n_agents(&self) -> usize {
        self.space.n_agents()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn space(&self) -> &SocialSpace {
        &self.space
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// Memory cap this provider was built with; dense derived matrices
    /// (e.g. connection probabilities) honor the same cap.
    pub fn cap_bytes(&self) -> u64 {
        self.cap_bytes
    }

    /// Distance between agents `i` and `j`. Indices must be in range.
    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.n_agents() && j < self.n_agents());
        match &self.dense {
            Some(matrix) => matrix[i * self.n_agents() + j],
            None => metric_distance(self.space.coord(i), self.space.coord(j), self.metric),
        }
    }

    /// Off-diagonal pair distances `(i < j)` in lexicographic order, if the
    /// list fits under the cap. Used by calibration for the starting bracket.
    pub(crate) fn collect_pair_distances(&self) -> Option<Vec<f64>> {
        let n = self.n_agents();
        let n_pairs = n * (n - 1) / 2;
        if (n_pairs as u128) * 8 > self.cap_bytes as u128 {
            return None;
        }
        let mut out = Vec::with_capacity(n_pairs);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.distance(i, j));
            }
        }
        Some(out)
    }

    /// Deterministic strided subsample of pair distances for very large N,
    /// capped at roughly 2^20 entries.
    pub(crate) fn sample_pair_distances(&self) -> Vec<f64> {
        let n = self.n_agents();
        let n_pairs = n * (n - 1) / 2;
        let target = 1usize << 20;
        let stride = (n_pairs / target).max(1);
        let mut out = Vec::with_capacity(n_pairs.min(target) + 1);
        let mut idx = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if idx.is_multiple_of(stride) {
                    out.push(self.distance(i, j));
                }
                idx += 1;
            }
        }
        out
    }
}
