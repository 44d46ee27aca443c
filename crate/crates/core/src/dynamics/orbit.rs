use serde::{Deserialize, Serialize};

use super::selfmap::SelfMap;
use crate::error::Result;
use crate::kernel::{kobayashi, Element};
use crate::par::Execution;

/// Slack for the monotonicity of orbit norms.
const MONOTONE_SLACK: f64 = 1e-15;

/// Tail points merged into one limit-point estimate.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Latest member of the cluster.
    pub representative: Element,
    /// Orbit indices `n` of the members, increasing.
    pub members: Vec<usize>,
    /// Largest coordinate distance between two members.
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub representative: Vec<[f64; 2]>,
    pub norm: f64,
    pub multiplicity: usize,
    pub diameter: f64,
}

impl Cluster {
    pub fn record(&self) -> ClusterRecord {
        ClusterRecord {
            representative: self.representative.to_pairs(),
            norm: self.representative.norm(),
            multiplicity: self.members.len(),
            diameter: self.diameter,
        }
    }
}

/// `a, f(a), …, f^N(a)` with tail analysis.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub start: Element,
    /// `f^n(a)` for `n = 1..=N`.
    pub points: Vec<Element>,
    pub norms: Vec<f64>,
    /// `κ(f^{n−1}(a), f^n(a))`, infinite once rounding reaches the sphere.
    pub steps: Vec<f64>,
    /// First `n` at which clamping to the ball was needed.
    pub saturated_at: Option<usize>,
    /// Norms are non-decreasing from this `n` on.
    pub stagnation_index: usize,
    /// Points in the tail: the last `⌈N/4⌉`.
    pub tail_len: usize,
    pub clusters: Vec<Cluster>,
}

impl OrbitRecord {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(self.start.norm(), f64::max)
    }

    /// Tail points with their orbit indices.
    pub fn tail(&self) -> impl Iterator<Item = (usize, &Element)> {
        let n = self.points.len();
        (n - self.tail_len..n).map(move |k| (k + 1, &self.points[k]))
    }

    /// More clusters than half the tail: the limit set looks infinite.
    pub fn finite_omega(&self) -> bool {
        self.clusters.len() * 2 <= self.tail_len.max(1)
    }

    pub fn cluster_records(&self) -> Vec<ClusterRecord> {
        self.clusters.iter().map(Cluster::record).collect()
    }
}

/// Iterates `f` from `a` for `n` steps and clusters the last quarter.
pub fn orbit(f: &SelfMap, a: &Element, n: usize, cluster_tol: f64) -> Result<OrbitRecord> {
    a.require_in_ball()?;
    let mut points = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut saturated_at = None;
    let mut x = a.clone();
    for k in 1..=n {
        let (y, sat) = f.apply_clamped(&x)?;
        if sat && saturated_at.is_none() {
            saturated_at = Some(k);
        }
        steps.push(kobayashi(&x, &y).unwrap_or(f64::INFINITY));
        norms.push(y.norm());
        points.push(y.clone());
        x = y;
    }
    let mut stagnation_index = n.max(1);
    for k in (1..n).rev() {
        if norms[k] + MONOTONE_SLACK < norms[k - 1] {
            break;
        }
        stagnation_index = k;
    }
    if n == 0 {
        stagnation_index = 0;
    }
    let tail_len = n.div_ceil(4);
    let clusters = cluster_tail(&points[n - tail_len..], n - tail_len + 1, cluster_tol);
    Ok(OrbitRecord {
        start: a.clone(),
        points,
        norms,
        steps,
        saturated_at,
        stagnation_index,
        tail_len,
        clusters,
    })
}

/// Complete-linkage agglomerative clustering; `first_index` is the orbit index of `points[0]`.
pub fn cluster_tail(points: &[Element], first_index: usize, tol: f64) -> Vec<Cluster> {
    let m = points.len();
    let mut dist = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = points[i].dist(&points[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    // linkage[a][b]: largest distance between members of groups a and b
    let mut linkage = dist.clone();
    let mut alive: Vec<bool> = vec![true; m];
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..m {
            if !alive[a] {
                continue;
            }
            for b in a + 1..m {
                if alive[b] && linkage[a][b] <= tol && best.is_none_or(|(d, _, _)| linkage[a][b] < d) {
                    best = Some((linkage[a][b], a, b));
                }
            }
        }
        let Some((_, a, b)) = best else { break };
        let moved = std::mem::take(&mut groups[b]);
        groups[a].extend(moved);
        alive[b] = false;
        for c in 0..m {
            if alive[c] && c != a {
                let l = linkage[a][c].max(linkage[b][c]);
                linkage[a][c] = l;
                linkage[c][a] = l;
            }
        }
    }
    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .zip(alive)
        .filter(|(_, alive)| *alive)
        .map(|(mut g, _)| {
            g.sort_unstable();
            let diameter = g
                .iter()
                .flat_map(|&i| g.iter().map(move |&j| (i, j)))
                .map(|(i, j)| dist[i][j])
                .fold(0.0, f64::max);
            let last = *g.last().expect("clusters are nonempty");
            Cluster {
                representative: points[last].clone(),
                members: g.iter().map(|&i| i + first_index).collect(),
                diameter,
            }
        })
        .collect();
    clusters.sort_by_key(|c| c.members[0]);
    clusters
}

/// Orbits of several starts, computed concurrently in input order.
pub fn limit_functions(f: &SelfMap, starts: &[Element], n: usize, cluster_tol: f64, exec: Execution) -> Result<Vec<OrbitRecord>> {
    exec.map(starts, |a| orbit(f, a, n, cluster_tol)).into_iter().collect()
}
