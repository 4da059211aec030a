//! Finite truncations of box spaces and coarse disjoint unions of balls.
//!
//! A coarse union places finitely many metric spaces side by side; two points
//! in different components `i != j` are at distance `diam_i + diam_j`.
//! Points are addressed either as [`Point`] pairs or by a global index that
//! runs through the components in order.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::group::{CongruenceQuotient, Coord, Filtration, GroupElement, GroupSpec};
use crate::metric::{Dist, MetricSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub component: usize,
    pub vertex: usize,
}

/// Components glued with the sum-of-diameters metric.
#[derive(Debug)]
pub struct CoarseUnion<M> {
    components: Vec<M>,
    diameters: Vec<Dist>,
    offsets: Vec<usize>,
}

impl<M: MetricSpace> CoarseUnion<M> {
    pub fn new(components: Vec<M>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "a coarse union needs at least one component".into(),
            ));
        }
        let diameters = components.iter().map(|c| c.diameter()).collect();
        let mut offsets = Vec::with_capacity(components.len() + 1);
        let mut acc = 0;
        for c in &components {
            offsets.push(acc);
            acc += c.len();
        }
        offsets.push(acc);
        Ok(Self {
            components,
            diameters,
            offsets,
        })
    }

    pub fn components(&self) -> &[M] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &M {
        &self.components[i]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn diameters(&self) -> &[Dist] {
        &self.diameters
    }

    /// Global index range of component `i`.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn global(&self, p: Point) -> Result<usize> {
        if p.component >= self.components.len() || p.vertex >= self.components[p.component].len() {
            return Err(Error::InvalidPoint(p.vertex));
        }
        Ok(self.offsets[p.component] + p.vertex)
    }

    pub fn locate(&self, global: usize) -> Result<Point> {
        if global >= *self.offsets.last().unwrap() {
            return Err(Error::InvalidPoint(global));
        }
        let component = self.offsets.partition_point(|&o| o <= global) - 1;
        Ok(Point {
            component,
            vertex: global - self.offsets[component],
        })
    }

    fn locate_unchecked(&self, global: usize) -> Point {
        self.locate(global).expect("global index in range")
    }

    /// Distance between two addressed points.
    pub fn point_distance(&self, p: Point, q: Point) -> Result<Dist> {
        self.global(p)?;
        self.global(q)?;
        Ok(if p.component == q.component {
            self.components[p.component].distance(p.vertex, q.vertex)
        } else {
            self.diameters[p.component] + self.diameters[q.component]
        })
    }

    /// Components touched by a set of global indices, ascending.
    pub fn components_of(&self, set: &[usize]) -> Vec<usize> {
        let mut comps: Vec<usize> = set.iter().map(|&g| self.locate_unchecked(g).component).collect();
        comps.sort_unstable();
        comps.dedup();
        comps
    }
}

impl<M: MetricSpace> MetricSpace for CoarseUnion<M> {
    fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn distance(&self, p: usize, q: usize) -> Dist {
        let (a, b) = (self.locate_unchecked(p), self.locate_unchecked(q));
        if a.component == b.component {
            self.components[a.component].distance(a.vertex, b.vertex)
        } else {
            self.diameters[a.component] + self.diameters[b.component]
        }
    }

    fn neighborhood(&self, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)> {
        let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); self.components.len()];
        for &s in sources {
            let p = self.locate_unchecked(s);
            by_comp[p.component].push(p.vertex);
        }
        let source_comps: Vec<usize> = (0..self.components.len()).filter(|&i| !by_comp[i].is_empty()).collect();
        let mut out = Vec::new();
        for (j, comp) in self.components.iter().enumerate() {
            let cross = source_comps
                .iter()
                .filter(|&&i| i != j)
                .map(|&i| self.diameters[i] + self.diameters[j])
                .min();
            let within = if by_comp[j].is_empty() {
                Vec::new()
            } else {
                comp.neighborhood(&by_comp[j], radius)
            };
            match cross {
                Some(c) if c <= radius => {
                    let mut best = vec![c; comp.len()];
                    for (v, d) in within {
                        best[v] = best[v].min(d);
                    }
                    out.extend(best.into_iter().enumerate().map(|(v, d)| (self.offsets[j] + v, d)));
                }
                _ => out.extend(within.into_iter().map(|(v, d)| (self.offsets[j] + v, d))),
            }
        }
        out
    }

    fn set_diameter(&self, set: &[usize]) -> Dist {
        let mut by_comp: HashMap<usize, Vec<usize>> = HashMap::new();
        for &g in set {
            let p = self.locate_unchecked(g);
            by_comp.entry(p.component).or_default().push(p.vertex);
        }
        let mut comps: Vec<usize> = by_comp.keys().copied().collect();
        comps.sort_unstable();
        let mut best = 0;
        for &c in &comps {
            best = best.max(self.components[c].set_diameter(&by_comp[&c]));
        }
        for (i, &a) in comps.iter().enumerate() {
            for &b in &comps[i + 1..] {
                best = best.max(self.diameters[a] + self.diameters[b]);
            }
        }
        best
    }
}

/// A finite prefix of the box space of a filtration.
#[derive(Debug)]
pub struct BoxSpace<T: Coord = i64> {
    filtration: Filtration<T>,
    union: CoarseUnion<CayleyGraph<T>>,
}

impl<T: Coord> BoxSpace<T> {
    /// Build the first `component_count` quotients of the filtration, in parallel.
    pub fn build(filtration: &Filtration<T>, component_count: usize, vertex_cap: usize) -> Result<Self> {
        Self::build_with(filtration, component_count, |q| CayleyGraph::build(q, vertex_cap))
    }

    /// Like [`build`](Self::build), with a caller-supplied graph constructor
    /// (used to route through the on-disk cache).
    pub fn build_with<F>(filtration: &Filtration<T>, component_count: usize, make: F) -> Result<Self>
    where
        F: Fn(CongruenceQuotient<T>) -> Result<CayleyGraph<T>> + Sync + Send,
    {
        if component_count == 0 || component_count > filtration.moduli().len() {
            return Err(Error::InvalidParameter(format!(
                "component count must be in 1..={}",
                filtration.moduli().len()
            )));
        }
        let quotients: Vec<_> = filtration.quotients()?.into_iter().take(component_count).collect();
        let graphs = quotients.into_par_iter().map(make).collect::<Result<Vec<_>>>()?;
        let moduli = filtration.moduli()[..component_count].to_vec();
        let filtration = Filtration::new(filtration.spec().clone(), moduli)?;
        Ok(Self {
            filtration,
            union: CoarseUnion::new(graphs)?,
        })
    }

    pub fn filtration(&self) -> &Filtration<T> {
        &self.filtration
    }

    pub fn spec(&self) -> &GroupSpec<T> {
        self.filtration.spec()
    }

    pub fn union(&self) -> &CoarseUnion<CayleyGraph<T>> {
        &self.union
    }

    pub fn components(&self) -> &[CayleyGraph<T>] {
        self.union.components()
    }

    pub fn component(&self, i: usize) -> &CayleyGraph<T> {
        self.union.component(i)
    }

    pub fn component_count(&self) -> usize {
        self.union.component_count()
    }

    pub fn diameters(&self) -> &[Dist] {
        self.union.diameters()
    }

    pub fn box_distance(&self, p: Point, q: Point) -> Result<Dist> {
        self.union.point_distance(p, q)
    }

    pub fn global(&self, p: Point) -> Result<usize> {
        self.union.global(p)
    }

    pub fn locate(&self, global: usize) -> Result<Point> {
        self.union.locate(global)
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.union.range(i)
    }
}

impl<T: Coord> MetricSpace for BoxSpace<T> {
    fn len(&self) -> usize {
        self.union.len()
    }
    fn distance(&self, p: usize, q: usize) -> Dist {
        self.union.distance(p, q)
    }
    fn neighborhood(&self, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)> {
        self.union.neighborhood(sources, radius)
    }
    fn set_diameter(&self, set: &[usize]) -> Dist {
        self.union.set_diameter(set)
    }
}

/// Largest `k` with `B_G(e, 2k) ∩ N = {e}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsometryRadius {
    pub radius: u32,
    /// `false` when the BFS budget ran out first; `radius` is then a certified
    /// lower bound.
    pub exact: bool,
    /// Word length of the shortest non-trivial kernel element, when found.
    pub kernel_length: Option<u32>,
}

/// Default cap on states visited by [`isometry_radius`].
pub const ISOMETRY_BUDGET: usize = 10_000_000;

/// BFS in `G` until the first non-trivial element of the congruence kernel.
/// A kernel hit at length `L` gives radius `⌊(L-1)/2⌋`.
pub fn isometry_radius<T: Coord>(quotient: &CongruenceQuotient<T>, budget: usize) -> Result<IsometryRadius> {
    let spec = quotient.spec();
    let gens = spec.symmetric_generators();
    let e = spec.identity();
    let mut seen: HashSet<GroupElement<T>> = HashSet::new();
    seen.insert(e.clone());
    let mut frontier = vec![e];
    let mut completed = 0u32;
    loop {
        let level = completed + 1;
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = spec.multiply(g, s)?;
                if seen.contains(&h) {
                    continue;
                }
                if quotient.in_kernel(&h) {
                    return Ok(IsometryRadius {
                        radius: (level - 1) / 2,
                        exact: true,
                        kernel_length: Some(level),
                    });
                }
                if seen.len() >= budget {
                    // every kernel element has length > completed
                    return Ok(IsometryRadius {
                        radius: completed / 2,
                        exact: false,
                        kernel_length: None,
                    });
                }
                seen.insert(h.clone());
                next.push(h);
            }
        }
        frontier = next;
        completed = level;
    }
}

/// BFS ball `B(e, k)` with word lengths, in BFS order (ties in generator order).
fn group_ball<T: Coord>(spec: &GroupSpec<T>, k: u32, cap: usize) -> Result<Vec<(GroupElement<T>, u32)>> {
    let gens = spec.symmetric_generators();
    let e = spec.identity();
    let mut seen: HashSet<GroupElement<T>> = HashSet::new();
    seen.insert(e.clone());
    let mut out = vec![(e, 0)];
    let mut start = 0;
    for level in 1..=k {
        let end = out.len();
        for idx in start..end {
            for s in &gens {
                let h = spec.multiply(&out[idx].0, s)?;
                if seen.insert(h.clone()) {
                    out.push((h, level));
                    if out.len() > cap {
                        return Err(Error::ResourceCap {
                            what: "ball size",
                            limit: cap,
                        });
                    }
                }
            }
        }
        start = end;
    }
    Ok(out)
}

/// Whether the quotient map restricted to `B_G(e, k)` is a bijection onto
/// `B_{G/N}(e, k)` that carries every labelled edge of the `G`-ball to the
/// same labelled edge in the quotient.
pub fn verify_ball_isometry<T: Coord>(quotient: &CongruenceQuotient<T>, k: u32, cap: usize) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    let spec = quotient.spec();
    let ball = group_ball(spec, k, cap)?;
    let images: Vec<GroupElement<T>> = ball.iter().map(|(g, _)| quotient.reduce(g)).collect::<Result<_>>()?;
    let mut image_index: HashMap<&GroupElement<T>, usize> = HashMap::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        if image_index.insert(img, i).is_some() {
            return Ok(false);
        }
    }
    let ball_index: HashMap<&GroupElement<T>, usize> = ball.iter().enumerate().map(|(i, (g, _))| (g, i)).collect();
    let labels: Vec<GroupElement<T>> = spec
        .symmetric_generators()
        .iter()
        .map(|s| quotient.reduce(s))
        .collect::<Result<_>>()?;
    for (i, (g, len)) in ball.iter().enumerate() {
        if *len == k {
            continue;
        }
        for (s, s_bar) in spec.symmetric_generators().iter().zip(&labels) {
            let target = spec.multiply(g, s)?;
            let Some(&j) = ball_index.get(&target) else {
                unreachable!("interior neighbour lies in the ball")
            };
            if quotient.multiply(&images[i], s_bar)? != images[j] {
                return Ok(false);
            }
        }
    }
    // the quotient ball, grown independently with reduced arithmetic
    let mut seen: HashSet<GroupElement<T>> = HashSet::new();
    let e = spec.identity();
    seen.insert(e.clone());
    let mut frontier = vec![e];
    for _ in 0..k {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &labels {
                let h = quotient.multiply(g, s)?;
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.len() == images.len() && seen.iter().all(|g| image_index.contains_key(g)))
}

/// Isometry radii along a box space and the induced scale thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryProfile {
    pub radii: Vec<IsometryRadius>,
}

impl IsometryProfile {
    pub fn compute<T: Coord>(box_space: &BoxSpace<T>, budget: usize) -> Result<Self> {
        let radii = box_space
            .components()
            .par_iter()
            .map(|g| isometry_radius(g.quotient(), budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { radii })
    }

    pub fn is_monotone(&self) -> bool {
        self.radii.windows(2).all(|w| w[0].radius <= w[1].radius)
    }

    /// Smallest component index from which every component's radius is at
    /// least `scale`; the component count when no component qualifies.
    pub fn threshold(&self, scale: u32) -> usize {
        let mut idx = self.radii.len();
        for (i, r) in self.radii.iter().enumerate().rev() {
            if r.radius >= scale {
                idx = i;
            } else {
                break;
            }
        }
        idx
    }

    /// Non-decreasing thresholds `i_k` for a list of scales.
    pub fn thresholds(&self, scales: &[u32]) -> Vec<usize> {
        let mut out = Vec::with_capacity(scales.len());
        let mut prev = 0;
        for &s in scales {
            prev = prev.max(self.threshold(s));
            out.push(prev);
        }
        out
    }
}

/// The ball `B_G(e, r)` of the infinite group with the restriction of the
/// word metric of `G`.
///
/// Points are ordered by word length, ties by coordinate vector.
#[derive(Debug)]
pub struct BallSpace<T: Coord = i64> {
    spec: GroupSpec<T>,
    radius: u32,
    points: Vec<GroupElement<T>>,
    lengths: Vec<u32>,
    index: HashMap<GroupElement<T>, usize>,
    // word lengths over B(e, 2r), enough for every difference of two points
    word_length: HashMap<GroupElement<T>, u32>,
}

impl<T: Coord> BallSpace<T> {
    pub fn new(spec: &GroupSpec<T>, radius: u32, cap: usize) -> Result<Self> {
        let big = group_ball(spec, 2 * radius, cap)?;
        let word_length: HashMap<GroupElement<T>, u32> = big.iter().cloned().collect();
        let mut inner: Vec<(GroupElement<T>, u32)> = big.into_iter().filter(|(_, l)| *l <= radius).collect();
        inner.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let (points, lengths): (Vec<_>, Vec<_>) = inner.into_iter().unzip();
        let index = points.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(Self {
            spec: spec.clone(),
            radius,
            points,
            lengths,
            index,
            word_length,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn points(&self) -> &[GroupElement<T>] {
        &self.points
    }

    pub fn word_length(&self, p: usize) -> u32 {
        self.lengths[p]
    }

    pub fn index_of(&self, g: &GroupElement<T>) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn spec(&self) -> &GroupSpec<T> {
        &self.spec
    }
}

impl<T: Coord> MetricSpace for BallSpace<T> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn distance(&self, p: usize, q: usize) -> Dist {
        if p == q {
            return 0;
        }
        let inv = self.spec.invert(&self.points[p]).expect("ball element inverse");
        let diff = self.spec.multiply(&inv, &self.points[q]).expect("ball element product");
        self.word_length[&diff]
    }

    fn diameter(&self) -> Dist {
        let cap = 2 * self.radius;
        let mut best = 0;
        for p in 0..self.len() {
            for q in p + 1..self.len() {
                best = best.max(self.distance(p, q));
                if best == cap {
                    return best;
                }
            }
        }
        best
    }
}

/// Coarse disjoint union of the balls `B_G(e, r)` for the given radii.
pub fn coarse_union_of_balls<T: Coord>(
    spec: &GroupSpec<T>,
    radii: &[u32],
    cap: usize,
) -> Result<CoarseUnion<BallSpace<T>>> {
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("radii must be strictly increasing".into()));
    }
    let balls = radii
        .par_iter()
        .map(|&r| BallSpace::new(spec, r, cap))
        .collect::<Result<Vec<_>>>()?;
    CoarseUnion::new(balls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::DEFAULT_VERTEX_CAP;

    fn z_box(moduli: Vec<u64>) -> BoxSpace<i64> {
        let f = Filtration::new(GroupSpec::free_abelian(1).unwrap(), moduli).unwrap();
        let n = f.moduli().len();
        BoxSpace::build(&f, n, DEFAULT_VERTEX_CAP).unwrap()
    }

    #[test]
    fn z_box_basics() {
        let b = z_box(vec![2, 4]);
        assert_eq!(b.diameters(), &[1, 2]);
        let p = Point {
            component: 0,
            vertex: 1,
        };
        let q = Point {
            component: 1,
            vertex: 3,
        };
        assert_eq!(b.box_distance(p, q).unwrap(), 3);
        let a = Point {
            component: 1,
            vertex: 0,
        };
        let c = Point {
            component: 1,
            vertex: 2,
        };
        assert_eq!(b.box_distance(a, c).unwrap(), 2);
        assert_eq!(b.box_distance(a, a).unwrap(), 0);
        assert!(b
            .box_distance(
                a,
                Point {
                    component: 2,
                    vertex: 0
                }
            )
            .is_err());
        assert_eq!(b.len(), 6);
        assert_eq!(
            b.locate(5).unwrap(),
            Point {
                component: 1,
                vertex: 3
            }
        );
    }

    #[test]
    fn powers_of_two_box() {
        let f = Filtration::powers(GroupSpec::<i64>::free_abelian(1).unwrap(), 2, 10).unwrap();
        let b = BoxSpace::build(&f, 10, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(b.component_count(), 10);
        for (i, g) in b.components().iter().enumerate() {
            assert_eq!(g.order(), 1 << (i + 1));
        }
        let h = Filtration::new(GroupSpec::<i64>::unitriangular(3).unwrap(), vec![2, 4, 8]).unwrap();
        let hb = BoxSpace::build(&h, 3, DEFAULT_VERTEX_CAP).unwrap();
        let orders: Vec<usize> = hb.components().iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![8, 64, 512]);
    }

    #[test]
    fn neighborhood_matches_brute_force() {
        let b = z_box(vec![2, 4, 8]);
        for radius in 0..8 {
            for sources in [vec![0], vec![3, 9], vec![1, 2, 13]] {
                let fast = b.neighborhood(&sources, radius);
                let slow: Vec<(usize, Dist)> = (0..b.len())
                    .filter_map(|p| {
                        let d = sources.iter().map(|&s| b.distance(s, p)).min().unwrap();
                        (d <= radius).then_some((p, d))
                    })
                    .collect();
                assert_eq!(fast, slow, "radius {radius} sources {sources:?}");
            }
        }
    }

    #[test]
    fn isometry_radius_examples() {
        let z = GroupSpec::<i64>::free_abelian(1).unwrap();
        let r = isometry_radius(&CongruenceQuotient::new(z, 12).unwrap(), ISOMETRY_BUDGET).unwrap();
        assert_eq!(
            r,
            IsometryRadius {
                radius: 5,
                exact: true,
                kernel_length: Some(12)
            }
        );
        let z2 = GroupSpec::<i64>::free_abelian(2).unwrap();
        let r = isometry_radius(&CongruenceQuotient::new(z2, 6).unwrap(), ISOMETRY_BUDGET).unwrap();
        assert_eq!(r.radius, 2);
        // x^4 is the shortest kernel element of UT(3) mod 4 (word oracle: L = 4)
        let h = GroupSpec::<i64>::unitriangular(3).unwrap();
        let r = isometry_radius(&CongruenceQuotient::new(h, 4).unwrap(), ISOMETRY_BUDGET).unwrap();
        assert_eq!(r.kernel_length, Some(4));
        assert_eq!(r.radius, 1);
    }

    #[test]
    fn isometry_budget_gives_lower_bound() {
        let z2 = GroupSpec::<i64>::free_abelian(2).unwrap();
        let q = CongruenceQuotient::new(z2, 40).unwrap();
        let r = isometry_radius(&q, 100).unwrap();
        assert!(!r.exact);
        assert!(r.radius <= 19);
        assert!(verify_ball_isometry(&q, r.radius, 1 << 20).unwrap());
    }

    #[test]
    fn ball_isometry_examples() {
        let z = GroupSpec::<i64>::free_abelian(1).unwrap();
        let q = CongruenceQuotient::new(z, 12).unwrap();
        assert!(verify_ball_isometry(&q, 5, 1000).unwrap());
        assert!(!verify_ball_isometry(&q, 6, 1000).unwrap());
        assert!(verify_ball_isometry(&q, 0, 1000).unwrap());
    }

    #[test]
    fn thresholds_are_monotone_and_cofinal() {
        let f = Filtration::powers(GroupSpec::<i64>::free_abelian(1).unwrap(), 2, 8).unwrap();
        let b = BoxSpace::build(&f, 8, DEFAULT_VERTEX_CAP).unwrap();
        let prof = IsometryProfile::compute(&b, ISOMETRY_BUDGET).unwrap();
        assert!(prof.is_monotone());
        let radii: Vec<u32> = prof.radii.iter().map(|r| r.radius).collect();
        assert_eq!(radii, vec![0, 1, 3, 7, 15, 31, 63, 127]);
        let t = prof.thresholds(&[1, 2, 3, 4, 100, 127]);
        assert_eq!(t, vec![1, 2, 2, 3, 7, 7]);
        assert_eq!(prof.threshold(128), 8);
    }

    #[test]
    fn union_of_balls() {
        let z = GroupSpec::<i64>::free_abelian(1).unwrap();
        let u = coarse_union_of_balls(&z, &[1, 2, 3], 1000).unwrap();
        let sizes: Vec<usize> = u.components().iter().map(|b| b.len()).collect();
        assert_eq!(sizes, vec![3, 5, 7]);
        assert_eq!(u.diameters(), &[2, 4, 6]);
        let p = u
            .global(Point {
                component: 0,
                vertex: 0,
            })
            .unwrap();
        let q = u
            .global(Point {
                component: 1,
                vertex: 0,
            })
            .unwrap();
        assert_eq!(u.distance(p, q), 6);

        let z2 = GroupSpec::<i64>::free_abelian(2).unwrap();
        let u2 = coarse_union_of_balls(&z2, &[1, 2], 1000).unwrap();
        let sizes: Vec<usize> = u2.components().iter().map(|b| b.len()).collect();
        assert_eq!(sizes, vec![5, 13]);
        assert!(coarse_union_of_balls(&z2, &[2, 1], 1000).is_err());
    }

    #[test]
    fn ball_points_in_length_order() {
        let h = GroupSpec::<i64>::unitriangular(3).unwrap();
        let b = BallSpace::new(&h, 2, 100_000).unwrap();
        assert_eq!(b.len(), 17);
        assert_eq!(b.word_length(0), 0);
        assert!((1..b.len()).all(|i| b.word_length(i - 1) <= b.word_length(i)));
        assert_eq!(b.diameter(), 4);
    }
}
