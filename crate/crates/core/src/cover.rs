//! Covers by families of sets and their verification.
//!
//! Points are the indices `0..space.len()` of a [`MetricSpace`]. A set is at
//! distance `< R` from another exactly when it meets the other's
//! `(R-1)`-neighbourhood, and a ball `B(x, R)` meets a set exactly when `x`
//! lies in the set's `R`-neighbourhood; both checks below are dilations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Dist, MetricSpace};

/// Provenance of a set built around a center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetMeta {
    pub component: usize,
    /// Vertex id of the center inside its component.
    pub center: usize,
    pub radius: Dist,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSet {
    /// Sorted, duplicate-free point indices.
    pub points: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<SetMeta>,
}

impl CoverSet {
    pub fn new(mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        Self { points, meta: None }
    }

    pub fn with_meta(mut self, meta: SetMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// Families `U_0, ..., U_n` of point sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub families: Vec<Vec<CoverSet>>,
}

impl Cover {
    pub fn new(families: Vec<Vec<CoverSet>>) -> Self {
        Self { families }
    }

    pub fn single_family(sets: Vec<CoverSet>) -> Self {
        Self { families: vec![sets] }
    }

    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    pub fn set_count(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }

    /// `(family, index, set)` in family order.
    pub fn sets(&self) -> impl Iterator<Item = (usize, usize, &CoverSet)> {
        self.families
            .iter()
            .enumerate()
            .flat_map(|(f, fam)| fam.iter().enumerate().map(move |(i, s)| (f, i, s)))
    }

    /// Drop empty families, keeping order.
    pub fn compact(mut self) -> Self {
        self.families.retain(|f| !f.is_empty());
        self
    }

    /// Expand a point coloring into families: each color class splits into
    /// its `<R`-components (same color, linked by distance `< R`).
    pub fn from_coloring<M: MetricSpace + ?Sized>(space: &M, colors: &[usize], r: Dist) -> Result<Self> {
        if colors.len() != space.len() {
            return Err(Error::Shape {
                expected: space.len(),
                found: colors.len(),
            });
        }
        let n_colors = colors.iter().copied().max().map_or(0, |c| c + 1);
        let comps = same_color_components(space, colors, r);
        let mut families: Vec<Vec<CoverSet>> = vec![Vec::new(); n_colors];
        for comp in comps {
            let c = colors[comp[0]];
            families[c].push(CoverSet::new(comp));
        }
        Ok(Self { families })
    }

    /// Point coloring by first containing family, or `None` for uncovered points.
    pub fn to_coloring(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (f, _, set) in self.sets() {
            for &p in &set.points {
                if p < n && out[p].is_none() {
                    out[p] = Some(f);
                }
            }
        }
        out
    }
}

/// Connected components of "same color and distance `< R`", each sorted,
/// listed by smallest point.
pub fn same_color_components<M: MetricSpace + ?Sized>(space: &M, colors: &[usize], r: Dist) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    if r > 1 && n > 0 && space.graph_neighbors(0).is_some() {
        graph_links(space, colors, r, &mut uf);
    } else if r > 0 {
        for p in 0..n {
            for (q, _) in space.neighborhood(&[p], r - 1) {
                if q > p && colors[q] == colors[p] {
                    uf.union(p, q);
                }
            }
        }
    }
    uf.groups()
}

/// Same-color links on a graph metric without a ball per point.
///
/// Per color, a multi-source BFS of radius `⌊(R-1)/2⌋` assigns each vertex
/// its nearest class point. Two class points are joined when an edge `uv`
/// separates their territories with `d(u) + 1 + d(v) <= R - 1`. Along a
/// shortest path of length `L < R` between class points, consecutive
/// territory owners are at most `L` apart, so every link is found.
fn graph_links<M: MetricSpace + ?Sized>(space: &M, colors: &[usize], r: Dist, uf: &mut UnionFind) {
    let n = space.len();
    let reach = r - 1;
    let half = reach / 2;
    let n_colors = colors.iter().copied().max().map_or(0, |c| c + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_colors];
    for (p, &c) in colors.iter().enumerate() {
        classes[c].push(p);
    }
    let neighbors = |v: usize| space.graph_neighbors(v).expect("graph metric");
    let mut owner = vec![usize::MAX; n];
    let mut depth = vec![0 as Dist; n];
    let mut touched = Vec::new();
    for class in &classes {
        touched.clear();
        let mut frontier = class.clone();
        for &p in class {
            owner[p] = p;
            depth[p] = 0;
            touched.push(p);
        }
        for level in 1..=half {
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in neighbors(v) {
                    let w = w as usize;
                    if owner[w] == usize::MAX {
                        owner[w] = owner[v];
                        depth[w] = level;
                        touched.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        for &u in &touched {
            for &v in neighbors(u) {
                let v = v as usize;
                if owner[v] != usize::MAX && owner[v] != owner[u] && depth[u] + 1 + depth[v] <= reach {
                    uf.union(owner[u], owner[v]);
                }
            }
        }
        for &u in &touched {
            owner[u] = usize::MAX;
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so groups() is order independent
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for p in 0..n {
            let r = self.find(p);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(p);
        }
        out
    }
}

/// A failed property together with the object that breaks it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptySet {
        family: usize,
        set: usize,
    },
    InvalidPoint {
        family: usize,
        set: usize,
        point: usize,
    },
    Uncovered {
        point: usize,
    },
    Oversized {
        family: usize,
        set: usize,
        diameter: Dist,
    },
    ClosePair {
        family: usize,
        first: usize,
        second: usize,
        distance: Dist,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub r: Dist,
    pub s: Dist,
    pub point_count: usize,
    pub family_count: usize,
    pub set_count: usize,
    pub is_cover: bool,
    pub max_set_diameter: Dist,
    /// Per family, the least distance between two of its sets when that is
    /// below `R`; `None` when the family is `R`-disjoint.
    pub family_min_distance: Vec<Option<Dist>>,
    pub r_multiplicity: usize,
    /// A point attaining the multiplicity.
    pub multiplicity_point: Option<usize>,
    pub violations: Vec<Violation>,
}

impl CoverReport {
    /// Covering, bounded diameters and `R`-disjoint families all hold.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Every family `R`-disjoint.
    pub fn families_disjoint(&self) -> bool {
        self.family_min_distance.iter().all(Option::is_none)
    }
}

/// For each point, the `(family, set)` pairs containing it, in CSR layout.
struct Owners {
    start: Vec<usize>,
    entries: Vec<(u32, u32)>,
}

impl Owners {
    fn new(n: usize, cover: &Cover) -> Self {
        let mut count = vec![0usize; n + 1];
        for (_, _, set) in cover.sets() {
            for &p in &set.points {
                count[p + 1] += 1;
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut entries = vec![(0, 0); count[n]];
        for (f, i, set) in cover.sets() {
            for &p in &set.points {
                entries[fill[p]] = (f as u32, i as u32);
                fill[p] += 1;
            }
        }
        Self { start: count, entries }
    }

    fn of(&self, p: usize) -> &[(u32, u32)] {
        &self.entries[self.start[p]..self.start[p + 1]]
    }
}

fn structural_violations(n: usize, cover: &Cover) -> Vec<Violation> {
    let mut out = Vec::new();
    for (f, i, set) in cover.sets() {
        if set.is_empty() {
            out.push(Violation::EmptySet { family: f, set: i });
        } else if let Some(&p) = set.points.iter().find(|&&p| p >= n) {
            out.push(Violation::InvalidPoint {
                family: f,
                set: i,
                point: p,
            });
        }
    }
    out
}

/// Check coverage, `diam U <= S` and `R`-disjointness of every family, and
/// compute the `R`-multiplicity, in one dilation pass per set.
pub fn verify_cover<M: MetricSpace + ?Sized>(space: &M, cover: &Cover, r: Dist, s: Dist) -> CoverReport {
    let n = space.len();
    let mut violations = structural_violations(n, cover);
    let sets: Vec<(usize, usize, &CoverSet)> = cover.sets().collect();
    let mut report = CoverReport {
        r,
        s,
        point_count: n,
        family_count: cover.family_count(),
        set_count: sets.len(),
        is_cover: false,
        max_set_diameter: 0,
        family_min_distance: vec![None; cover.family_count()],
        r_multiplicity: 0,
        multiplicity_point: None,
        violations: Vec::new(),
    };
    if !violations.is_empty() {
        report.violations = violations;
        return report;
    }

    let owners = Owners::new(n, cover);
    if let Some(p) = (0..n).find(|&p| owners.of(p).is_empty()) {
        violations.push(Violation::Uncovered { point: p });
    } else {
        report.is_cover = true;
    }

    // (diameter, points within R, closest same-family set below R)
    type SetCheck = (Dist, Vec<u32>, Option<(Dist, usize)>);
    let per_set: Vec<SetCheck> = sets
        .par_iter()
        .map(|&(f, i, set)| {
            let diameter = space.set_diameter(&set.points);
            let reach = space.neighborhood(&set.points, r);
            let mut close: Option<(Dist, usize)> = None;
            let mut hit = Vec::with_capacity(reach.len());
            for &(p, d) in &reach {
                hit.push(p as u32);
                if d < r {
                    for &(g, j) in owners.of(p) {
                        let (g, j) = (g as usize, j as usize);
                        if g == f && j != i && close.is_none_or(|(cd, cj)| (d, j) < (cd, cj)) {
                            close = Some((d, j));
                        }
                    }
                }
            }
            (diameter, hit, close)
        })
        .collect();

    let mut counter = vec![0usize; n];
    let mut oversized: Option<Violation> = None;
    let mut close_by_family: Vec<Option<(Dist, usize, usize)>> = vec![None; cover.family_count()];
    for (&(f, i, _), (diameter, hit, close)) in sets.iter().zip(&per_set) {
        report.max_set_diameter = report.max_set_diameter.max(*diameter);
        if *diameter > s && oversized.is_none() {
            oversized = Some(Violation::Oversized {
                family: f,
                set: i,
                diameter: *diameter,
            });
        }
        for &p in hit {
            counter[p as usize] += 1;
        }
        if let Some((d, j)) = *close {
            let cand = (d, i.min(j), i.max(j));
            if close_by_family[f].is_none_or(|c| cand < c) {
                close_by_family[f] = Some(cand);
            }
        }
    }
    violations.extend(oversized);
    for (f, c) in close_by_family.iter().enumerate() {
        if let Some((d, a, b)) = *c {
            report.family_min_distance[f] = Some(d);
            violations.push(Violation::ClosePair {
                family: f,
                first: a,
                second: b,
                distance: d,
            });
        }
    }
    if let Some((p, &m)) = counter
        .iter()
        .enumerate()
        .max_by_key(|&(p, &m)| (m, std::cmp::Reverse(p)))
    {
        report.r_multiplicity = m;
        report.multiplicity_point = Some(p);
    }
    report.violations = violations;
    report
}

/// `max_x |{U : U ∩ B(x, R) ≠ ∅}|` over all sets of all families, with a
/// point attaining it.
pub fn r_multiplicity<M: MetricSpace + ?Sized>(space: &M, cover: &Cover, r: Dist) -> (usize, Option<usize>) {
    let n = space.len();
    let sets: Vec<&CoverSet> = cover.sets().map(|(_, _, s)| s).collect();
    let reached: Vec<Vec<usize>> = sets
        .par_iter()
        .map(|set| {
            let pts: Vec<usize> = set.points.iter().copied().filter(|&p| p < n).collect();
            space.neighborhood(&pts, r).into_iter().map(|(p, _)| p).collect()
        })
        .collect();
    let mut counter = vec![0usize; n];
    for list in reached {
        for p in list {
            counter[p] += 1;
        }
    }
    match counter
        .iter()
        .enumerate()
        .max_by_key(|&(p, &m)| (m, std::cmp::Reverse(p)))
    {
        Some((p, &m)) => (m, Some(p)),
        None => (0, None),
    }
}

/// Regroup all sets of a cover into `R`-disjoint families by greedy coloring
/// of the graph joining sets at distance `< R` (largest degree first, ties by
/// position). Returns the recolored cover.
pub fn color_families<M: MetricSpace + ?Sized>(space: &M, cover: &Cover, r: Dist) -> Cover {
    let n = space.len();
    let sets: Vec<CoverSet> = cover.sets().map(|(_, _, s)| s.clone()).collect();
    if sets.is_empty() {
        return Cover::default();
    }
    let flat = Cover::single_family(sets);
    let owners = Owners::new(n, &flat);
    let sets = &flat.families[0];
    let adjacency: Vec<Vec<usize>> = sets
        .par_iter()
        .enumerate()
        .map(|(i, set)| {
            let mut nb = Vec::new();
            if r > 0 {
                for (p, _) in space.neighborhood(&set.points, r - 1) {
                    nb.extend(owners.of(p).iter().map(|&(_, j)| j as usize).filter(|&j| j != i));
                }
            }
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(adjacency[i].len()), i));
    let mut color = vec![usize::MAX; sets.len()];
    let mut used = Vec::new();
    for &i in &order {
        used.clear();
        used.extend(adjacency[i].iter().map(|&j| color[j]).filter(|&c| c != usize::MAX));
        used.sort_unstable();
        used.dedup();
        let c = used
            .iter()
            .enumerate()
            .find(|&(k, &c)| k != c)
            .map_or(used.len(), |(k, _)| k);
        color[i] = c;
    }
    let k = color.iter().copied().max().unwrap_or(0) + 1;
    let mut families = vec![Vec::new(); k];
    for (i, set) in sets.iter().enumerate() {
        families[color[i]].push(set.clone());
    }
    Cover::new(families)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::ExplicitMetric;

    fn arc(a: usize, b: usize) -> CoverSet {
        CoverSet::new((a..=b).collect())
    }

    /// Per-point, per-set intersection count straight from the definition.
    fn naive_multiplicity<M: MetricSpace>(space: &M, cover: &Cover, r: Dist) -> usize {
        (0..space.len())
            .map(|x| {
                cover
                    .sets()
                    .filter(|(_, _, s)| s.points.iter().any(|&p| space.distance(x, p) <= r))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn c12_two_families() {
        let c = ExplicitMetric::cycle(12);
        let cover = Cover::new(vec![vec![arc(0, 2), arc(6, 8)], vec![arc(3, 5), arc(9, 11)]]);
        let rep = verify_cover(&c, &cover, 2, 3);
        assert!(rep.is_valid(), "{rep:?}");
        assert_eq!(rep.max_set_diameter, 2);
        assert_eq!(rep.family_count - 1, 1);

        let one = Cover::single_family(vec![arc(0, 2), arc(3, 5), arc(6, 8), arc(9, 11)]);
        let rep = verify_cover(&c, &one, 2, 3);
        assert!(rep.is_cover);
        assert_eq!(
            rep.violations,
            vec![Violation::ClosePair {
                family: 0,
                first: 0,
                second: 1,
                distance: 1
            }]
        );
        assert_eq!(rep.family_min_distance, vec![Some(1)]);
    }

    #[test]
    fn empty_cover_is_not_a_cover() {
        let c = ExplicitMetric::cycle(4);
        let rep = verify_cover(&c, &Cover::default(), 1, 1);
        assert!(!rep.is_cover);
        assert_eq!(rep.violations, vec![Violation::Uncovered { point: 0 }]);
    }

    #[test]
    fn oversized_and_empty_sets() {
        let p = ExplicitMetric::path(6);
        let rep = verify_cover(&p, &Cover::single_family(vec![arc(0, 5)]), 1, 4);
        assert_eq!(
            rep.violations,
            vec![Violation::Oversized {
                family: 0,
                set: 0,
                diameter: 5
            }]
        );
        let rep = verify_cover(&p, &Cover::single_family(vec![CoverSet::new(vec![])]), 1, 4);
        assert_eq!(rep.violations, vec![Violation::EmptySet { family: 0, set: 0 }]);
    }

    #[test]
    fn multiplicity_examples() {
        let c = ExplicitMetric::cycle(12);
        let singletons = Cover::single_family((0..12).map(|p| CoverSet::new(vec![p])).collect());
        assert_eq!(r_multiplicity(&c, &singletons, 0).0, 1);
        let whole = Cover::single_family(vec![arc(0, 11)]);
        for r in 0..8 {
            assert_eq!(r_multiplicity(&c, &whole, r).0, 1);
        }
        // radius-2 arcs around 0, 3, 6, 9
        let arcs = Cover::single_family(
            [0usize, 3, 6, 9]
                .iter()
                .map(|&x| CoverSet::new((0..5).map(|k| (x + 10 + k) % 12).collect()))
                .collect(),
        );
        assert_eq!(r_multiplicity(&c, &arcs, 2).0, 3);
        assert_eq!(naive_multiplicity(&c, &arcs, 2), 3);
        assert_eq!(verify_cover(&c, &arcs, 2, 4).r_multiplicity, 3);
    }

    #[test]
    fn multiplicity_matches_naive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [5usize, 12, 30] {
            let c = ExplicitMetric::cycle(n);
            for _ in 0..20 {
                let sets = (0..rng.gen_range(1..8))
                    .map(|_| CoverSet::new((0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..n)).collect()))
                    .collect();
                let cover = Cover::single_family(sets);
                for r in 0..4 {
                    assert_eq!(r_multiplicity(&c, &cover, r).0, naive_multiplicity(&c, &cover, r));
                }
            }
        }
    }

    #[test]
    fn coloring_round_trip() {
        let c = ExplicitMetric::cycle(12);
        let colors: Vec<usize> = (0..12).map(|p| (p / 3) % 2).collect();
        let cover = Cover::from_coloring(&c, &colors, 2).unwrap();
        assert_eq!(cover.family_count(), 2);
        assert_eq!(cover.families[0], vec![arc(0, 2), arc(6, 8)]);
        assert!(verify_cover(&c, &cover, 2, 2).is_valid());
        let back: Vec<usize> = cover.to_coloring(12).into_iter().map(Option::unwrap).collect();
        assert_eq!(back, colors);
    }

    #[test]
    fn recoloring_separates_close_sets() {
        let c = ExplicitMetric::cycle(12);
        let one = Cover::single_family(vec![arc(0, 2), arc(3, 5), arc(6, 8), arc(9, 11)]);
        let fixed = color_families(&c, &one, 2);
        assert_eq!(fixed.family_count(), 2);
        assert!(verify_cover(&c, &fixed, 2, 2).is_valid());
    }
}
