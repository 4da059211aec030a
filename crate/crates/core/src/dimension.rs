//! `(R, S)`-dimension of finite metric spaces.
//!
//! A cover by `n + 1` families of diameter-`<= S` sets, each family
//! `R`-disjoint, exists iff the points admit a coloring with `n + 1` colors in
//! which every `<R`-component (connected component of "same color and
//! distance `< R`") has diameter at most `S`. Given such a cover, color each
//! point by a family containing it: two same-colored points closer than `R`
//! lie in one set of that family, so each `<R`-component sits inside a set.
//! Conversely the `<R`-components of a valid coloring are the sets. The exact
//! solver searches colorings.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cover::{color_families, same_color_components, verify_cover, Cover, CoverReport, CoverSet};
use crate::error::{Error, Result};
use crate::metric::{distance_matrix, Dist, MetricSpace};

/// Largest space handed to the exact solver by default.
pub const DEFAULT_POINT_CAP: usize = 60;
/// Largest space for the exhaustive oracle.
pub const EXHAUSTIVE_CAP: usize = 12;
pub const DEFAULT_NODE_LIMIT: u64 = 500_000_000;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolverStats {
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct RSDimResult {
    pub r: Dist,
    pub s: Dist,
    pub n: usize,
    /// Family index per point.
    pub coloring: Vec<usize>,
    /// Largest diameter of a `<R`-component of a color class.
    pub diameter: Dist,
    pub stats: SolverStats,
}

impl RSDimResult {
    /// The witness as families of `<R`-components.
    pub fn cover<M: MetricSpace + ?Sized>(&self, space: &M) -> Result<Cover> {
        Cover::from_coloring(space, &self.coloring, self.r)
    }

    pub fn verify<M: MetricSpace + ?Sized>(&self, space: &M) -> Result<CoverReport> {
        Ok(verify_cover(space, &self.cover(space)?, self.r, self.s))
    }
}

fn check_witness<M: MetricSpace + ?Sized>(space: &M, res: &mut RSDimResult) -> Result<()> {
    let rep = res.verify(space)?;
    res.diameter = rep.max_set_diameter;
    if !rep.is_valid() || rep.family_count > res.n + 1 {
        return Err(Error::Verification(format!(
            "witness for (R, S) = ({}, {}) with n = {} fails: {:?}",
            res.r,
            res.s,
            res.n,
            rep.violations.first()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ExactOptions {
    pub point_cap: usize,
    pub node_limit: u64,
    /// Branching order; input order when `None`.
    pub order: Option<Vec<usize>>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            point_cap: DEFAULT_POINT_CAP,
            node_limit: DEFAULT_NODE_LIMIT,
            order: None,
        }
    }
}

/// Points sorted by distance from point 0, ties by index. For a Cayley graph
/// this is a BFS order from the identity.
pub fn bfs_order<M: MetricSpace + ?Sized>(space: &M) -> Vec<usize> {
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by_key(|&p| (space.distance(0, p), p));
    order
}

struct Search<'a> {
    n: usize,
    d: &'a [Dist],
    r: Dist,
    s: Dist,
    colors: usize,
    color: Vec<usize>,
    comp: Vec<usize>,
    diam: Vec<Dist>,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn dist(&self, p: usize, q: usize) -> Dist {
        self.d[p * self.n + q]
    }

    fn run(&mut self, p: usize, used: usize) -> Result<bool> {
        if p == self.n {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::ResourceCap {
                what: "exact solver nodes",
                limit: self.limit as usize,
            });
        }
        let mut labels = Vec::new();
        let mut members = Vec::new();
        for c in 0..self.colors.min(used + 1) {
            labels.clear();
            for q in 0..p {
                if self.color[q] == c && self.dist(p, q) < self.r && !labels.contains(&self.comp[q]) {
                    labels.push(self.comp[q]);
                }
            }
            members.clear();
            members.extend((0..p).filter(|&q| self.color[q] == c && labels.contains(&self.comp[q])));
            let mut diam = labels.iter().map(|&l| self.diam[l]).max().unwrap_or(0);
            for (i, &a) in members.iter().enumerate() {
                diam = diam.max(self.dist(p, a));
                for &b in &members[i + 1..] {
                    if self.comp[a] != self.comp[b] {
                        diam = diam.max(self.dist(a, b));
                    }
                }
            }
            if diam > self.s {
                continue;
            }
            let saved: Vec<usize> = members.iter().map(|&q| self.comp[q]).collect();
            for &q in &members {
                self.comp[q] = p;
            }
            self.comp[p] = p;
            self.diam[p] = diam;
            self.color[p] = c;
            if self.run(p + 1, used.max(c + 1))? {
                return Ok(true);
            }
            for (&q, &old) in members.iter().zip(&saved) {
                self.comp[q] = old;
            }
            self.color[p] = usize::MAX;
        }
        Ok(false)
    }
}

/// Least `n <= n_cap` with an `(R, S)` witness of `n + 1` families, by
/// branch and bound over colorings.
pub fn rs_dim_exact<M: MetricSpace + ?Sized>(space: &M, r: Dist, s: Dist, n_cap: usize) -> Result<RSDimResult> {
    rs_dim_exact_with(space, r, s, n_cap, &ExactOptions::default())
}

pub fn rs_dim_exact_with<M: MetricSpace + ?Sized>(
    space: &M,
    r: Dist,
    s: Dist,
    n_cap: usize,
    options: &ExactOptions,
) -> Result<RSDimResult> {
    let start = Instant::now();
    let n = space.len();
    if n > options.point_cap {
        return Err(Error::ResourceCap {
            what: "exact solver points",
            limit: options.point_cap,
        });
    }
    let order = match &options.order {
        Some(o) => {
            let mut sorted = o.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidParameter("branching order is not a permutation".into()));
            }
            o.clone()
        }
        None => (0..n).collect(),
    };
    let full = distance_matrix(space);
    let mut d = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = full[order[i] * n + order[j]];
        }
    }
    let mut nodes = 0;
    for k in 0..=n_cap {
        let mut search = Search {
            n,
            d: &d,
            r,
            s,
            colors: k + 1,
            color: vec![usize::MAX; n],
            comp: (0..n).collect(),
            diam: vec![0; n],
            nodes: 0,
            limit: options.node_limit.saturating_sub(nodes),
        };
        let found = search.run(0, 0)?;
        nodes += search.nodes;
        if found {
            let mut coloring = vec![0; n];
            for (i, &p) in order.iter().enumerate() {
                coloring[p] = search.color[i];
            }
            let mut res = RSDimResult {
                r,
                s,
                n: k,
                coloring,
                diameter: 0,
                stats: SolverStats {
                    nodes,
                    elapsed: start.elapsed(),
                },
            };
            check_witness(space, &mut res)?;
            return Ok(res);
        }
    }
    Err(Error::ExceedsCap { n_cap })
}

/// Whether a coloring is valid, computed from scratch.
fn coloring_valid(n: usize, d: &[Dist], colors: &[usize], r: Dist, s: Dist) -> bool {
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        comp.clear();
        while let Some(p) = stack.pop() {
            comp.push(p);
            for q in 0..n {
                if !seen[q] && colors[q] == colors[p] && d[p * n + q] < r {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        for &a in &comp {
            for &b in &comp {
                if d[a * n + b] > s {
                    return false;
                }
            }
        }
    }
    true
}

/// Advance a restricted growth string with entries below `k`.
fn next_rgs(colors: &mut [usize], k: usize) -> bool {
    for i in (1..colors.len()).rev() {
        let prefix_max = colors[..i].iter().copied().max().unwrap_or(0);
        if colors[i] + 1 < k && colors[i] <= prefix_max {
            colors[i] += 1;
            colors[i + 1..].iter_mut().for_each(|c| *c = 0);
            return true;
        }
    }
    false
}

/// Minimal `n` by trying every coloring (as a restricted growth string) with
/// `1, 2, ...` colors. Independent of the exact solver; for tests.
pub fn rs_dim_exhaustive<M: MetricSpace + ?Sized>(space: &M, r: Dist, s: Dist) -> Result<RSDimResult> {
    let start = Instant::now();
    let n = space.len();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::ResourceCap {
            what: "exhaustive solver points",
            limit: EXHAUSTIVE_CAP,
        });
    }
    let d = distance_matrix(space);
    let mut nodes = 0u64;
    for k in 1..=n.max(1) {
        // colors[i] <= 1 + max(colors[..i]), colors[0] = 0, all < k
        let mut colors = vec![0usize; n];
        loop {
            nodes += 1;
            if coloring_valid(n, &d, &colors, r, s) {
                let diameter = same_color_components(space, &colors, r)
                    .iter()
                    .map(|c| space.set_diameter(c))
                    .max()
                    .unwrap_or(0);
                return Ok(RSDimResult {
                    r,
                    s,
                    n: k - 1,
                    coloring: colors,
                    diameter,
                    stats: SolverStats {
                        nodes,
                        elapsed: start.elapsed(),
                    },
                });
            }
            if !next_rgs(&mut colors, k) {
                break;
            }
        }
    }
    // only reachable for the empty space
    Ok(RSDimResult {
        r,
        s,
        n: 0,
        coloring: Vec::new(),
        diameter: 0,
        stats: SolverStats {
            nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Farthest-point-first ball carving: repeatedly take the uncarved point
/// farthest from all earlier centers and carve its `radius`-ball out of the
/// uncarved points. Clusters have diameter at most `2 radius`.
pub fn fpf_clusters<M: MetricSpace + ?Sized>(space: &M, radius: Dist) -> Vec<Vec<usize>> {
    let n = space.len();
    if n == 0 {
        return Vec::new();
    }
    let graph = space.graph_neighbors(0).is_some();
    let mut carved = vec![false; n];
    let mut mindist = vec![Dist::MAX; n];
    let mut buckets: Vec<Vec<u32>> = Vec::new();
    let mut remaining = n;
    let mut clusters = Vec::new();
    let mut center = 0;
    loop {
        let mut cluster = Vec::new();
        for (p, _) in space.neighborhood(&[center], radius) {
            if !carved[p] {
                carved[p] = true;
                cluster.push(p);
            }
        }
        remaining -= cluster.len();
        clusters.push(cluster);
        if remaining == 0 {
            break;
        }
        if graph {
            // BFS from the new center, pruned where it does not improve
            mindist[center] = 0;
            let mut frontier = vec![center];
            let mut level = 0;
            while !frontier.is_empty() {
                level += 1;
                let mut next = Vec::new();
                for &v in &frontier {
                    for &w in space.graph_neighbors(v).expect("graph metric") {
                        let w = w as usize;
                        if level < mindist[w] {
                            mindist[w] = level;
                            next.push(w);
                            if !carved[w] {
                                let b = level as usize;
                                if buckets.len() <= b {
                                    buckets.resize(b + 1, Vec::new());
                                }
                                buckets[b].push(w as u32);
                            }
                        }
                    }
                }
                frontier = next;
            }
            center = loop {
                let top = buckets.len() - 1;
                match buckets[top].pop() {
                    Some(v) => {
                        let v = v as usize;
                        if !carved[v] && mindist[v] as usize == top {
                            break v;
                        }
                    }
                    None => {
                        buckets.pop();
                    }
                }
            };
        } else {
            for (p, md) in mindist.iter_mut().enumerate() {
                *md = (*md).min(space.distance(center, p));
            }
            center = (0..n)
                .filter(|&p| !carved[p])
                .max_by_key(|&p| (mindist[p], std::cmp::Reverse(p)))
                .expect("points remain");
        }
    }
    clusters
}

/// Upper bound: FPF clusters of radius `⌊S/2⌋`, then greedy coloring of the
/// graph joining clusters closer than `R`. The witness is verified.
pub fn rs_dim_greedy<M: MetricSpace + ?Sized>(space: &M, r: Dist, s: Dist) -> Result<RSDimResult> {
    let start = Instant::now();
    let clusters = fpf_clusters(space, s / 2);
    let count = clusters.len() as u64;
    let flat = Cover::single_family(clusters.into_iter().map(CoverSet::new).collect());
    let colored = color_families(space, &flat, r);
    let mut coloring = vec![0; space.len()];
    for (f, _, set) in colored.sets() {
        for &p in &set.points {
            coloring[p] = f;
        }
    }
    let mut res = RSDimResult {
        r,
        s,
        n: colored.family_count().saturating_sub(1),
        coloring,
        diameter: 0,
        stats: SolverStats {
            nodes: count,
            elapsed: start.elapsed(),
        },
    };
    check_witness(space, &mut res)?;
    Ok(res)
}

/// Verify an externally produced coloring and package it as a result.
pub fn witness_from_coloring<M: MetricSpace + ?Sized>(
    space: &M,
    coloring: Vec<usize>,
    r: Dist,
    s: Dist,
) -> Result<RSDimResult> {
    if coloring.len() != space.len() {
        return Err(Error::Shape {
            expected: space.len(),
            found: coloring.len(),
        });
    }
    let n = coloring.iter().copied().max().unwrap_or(0);
    let mut res = RSDimResult {
        r,
        s,
        n,
        coloring,
        diameter: 0,
        stats: SolverStats::default(),
    };
    check_witness(space, &mut res)?;
    Ok(res)
}
