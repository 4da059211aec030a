//! Finite metric spaces with integer distances.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Dist = u32;

/// A finite metric space on points `0..len()`.
///
/// Graph-backed implementations override [`neighborhood`](Self::neighborhood)
/// with a truncated BFS; the defaults are brute force.
pub trait MetricSpace: Sync {
    fn len(&self) -> usize;

    fn distance(&self, p: usize, q: usize) -> Dist;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every point within `radius` of some source, with its distance to the
    /// source set. Sorted by point.
    fn neighborhood(&self, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)> {
        (0..self.len())
            .filter_map(|p| {
                let d = sources.iter().map(|&s| self.distance(s, p)).min()?;
                (d <= radius).then_some((p, d))
            })
            .collect()
    }

    fn set_diameter(&self, set: &[usize]) -> Dist {
        let mut best = 0;
        for (i, &p) in set.iter().enumerate() {
            for &q in &set[i + 1..] {
                best = best.max(self.distance(p, q));
            }
        }
        best
    }

    /// Unit-length edges when the metric is a graph metric.
    fn graph_neighbors(&self, _p: usize) -> Option<&[u32]> {
        None
    }

    fn diameter(&self) -> Dist {
        let all: Vec<usize> = (0..self.len()).collect();
        self.set_diameter(&all)
    }
}

impl<M: MetricSpace + ?Sized> MetricSpace for &M {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn distance(&self, p: usize, q: usize) -> Dist {
        (**self).distance(p, q)
    }
    fn neighborhood(&self, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)> {
        (**self).neighborhood(sources, radius)
    }
    fn set_diameter(&self, set: &[usize]) -> Dist {
        (**self).set_diameter(set)
    }
    fn graph_neighbors(&self, p: usize) -> Option<&[u32]> {
        (**self).graph_neighbors(p)
    }
    fn diameter(&self) -> Dist {
        (**self).diameter()
    }
}

/// Dense distance matrix of any space.
pub fn distance_matrix<M: MetricSpace + ?Sized>(space: &M) -> Vec<Dist> {
    let n = space.len();
    let mut out = vec![0; n * n];
    for p in 0..n {
        for q in p + 1..n {
            let d = space.distance(p, q);
            out[p * n + q] = d;
            out[q * n + p] = d;
        }
    }
    out
}

/// A metric given by an explicit distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMetric {
    n: usize,
    d: Vec<Dist>,
}

impl ExplicitMetric {
    /// Checks the metric axioms exhaustively.
    pub fn new(n: usize, d: Vec<Dist>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "distance matrix has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        for p in 0..n {
            if d[p * n + p] != 0 {
                return Err(Error::InvalidParameter(format!("d({p},{p}) != 0")));
            }
            for q in 0..n {
                if d[p * n + q] != d[q * n + p] {
                    return Err(Error::InvalidParameter(format!("d({p},{q}) is not symmetric")));
                }
                if p != q && d[p * n + q] == 0 {
                    return Err(Error::InvalidParameter(format!("d({p},{q}) = 0 for distinct points")));
                }
                for r in 0..n {
                    if d[p * n + r] > d[p * n + q] + d[q * n + r] {
                        return Err(Error::InvalidParameter(format!(
                            "triangle inequality fails for ({p},{q},{r})"
                        )));
                    }
                }
            }
        }
        Ok(Self { n, d })
    }

    /// Copy of another space's metric.
    pub fn from_space<M: MetricSpace + ?Sized>(space: &M) -> Self {
        Self {
            n: space.len(),
            d: distance_matrix(space),
        }
    }

    /// The cycle graph `C_n`.
    pub fn cycle(n: usize) -> Self {
        let d = (0..n * n)
            .map(|k| {
                let (p, q) = (k / n, k % n);
                let diff = p.abs_diff(q);
                diff.min(n - diff) as Dist
            })
            .collect();
        Self { n, d }
    }

    /// The path graph `P_n`.
    pub fn path(n: usize) -> Self {
        let d = (0..n * n).map(|k| (k / n).abs_diff(k % n) as Dist).collect();
        Self { n, d }
    }

    pub fn matrix(&self) -> &[Dist] {
        &self.d
    }
}

impl MetricSpace for ExplicitMetric {
    fn len(&self) -> usize {
        self.n
    }

    fn distance(&self, p: usize, q: usize) -> Dist {
        self.d[p * self.n + q]
    }
}

/// Multi-source BFS over an adjacency oracle, truncated at `radius`.
///
/// Visited vertices live in a hash map so the cost tracks the size of the
/// neighbourhood rather than the size of the graph.
pub(crate) fn bfs_truncated<'a, F>(n: usize, neighbors: F, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)>
where
    F: Fn(usize) -> &'a [u32],
{
    let mut seen: HashMap<usize, Dist> = HashMap::new();
    let mut frontier = Vec::new();
    for &s in sources {
        debug_assert!(s < n);
        if seen.insert(s, 0).is_none() {
            frontier.push(s);
        }
    }
    let mut level = 0;
    while !frontier.is_empty() && level < radius && seen.len() < n {
        level += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in neighbors(v) {
                let w = w as usize;
                if let Entry::Vacant(e) = seen.entry(w) {
                    e.insert(level);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<(usize, Dist)> = seen.into_iter().collect();
    out.sort_unstable();
    out
}
