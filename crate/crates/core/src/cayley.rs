//! Cayley graphs of congruence quotients.
//!
//! Vertices are the `m^k` reduced coordinate tuples. A tuple `(c_0, ..., c_{k-1})`
//! has id `c_0 + c_1 m + ... + c_{k-1} m^{k-1}`, so the identity is vertex 0
//! and ids are reproducible across runs. Edges go `v -> v·s` for every
//! generator and its inverse; slot `2i` of a vertex holds `v·s_i` and slot
//! `2i+1` holds `v·s_i^{-1}`.
//!
//! Only distances from the identity are stored. Left multiplication is a graph
//! automorphism, so `d(u, v) = d(e, u^{-1} v)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{CongruenceQuotient, Coord, GroupElement};
use crate::metric::{bfs_truncated, Dist, MetricSpace};

pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

pub struct CayleyGraph<T: Coord = i64> {
    quotient: CongruenceQuotient<T>,
    order: usize,
    degree: usize,
    adjacency: Vec<u32>,
    labels: Vec<GroupElement<T>>,
    dist: Vec<Dist>,
    ball_sizes: Vec<usize>,
}

impl<T: Coord> fmt::Debug for CayleyGraph<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyGraph")
            .field("quotient", &self.quotient)
            .field("order", &self.order)
            .field("degree", &self.degree)
            .field("diameter", &self.diameter())
            .finish()
    }
}

impl<T: Coord> CayleyGraph<T> {
    /// Enumerate the quotient and wire up its Cayley graph under the image of
    /// the generating set.
    pub fn build(quotient: CongruenceQuotient<T>, vertex_cap: usize) -> Result<Self> {
        let order = quotient
            .order()
            .filter(|&o| o <= vertex_cap && o <= u32::MAX as usize)
            .ok_or(Error::ResourceCap {
                what: "quotient order",
                limit: vertex_cap,
            })?;
        let spec = quotient.spec();
        let labels = spec
            .symmetric_generators()
            .iter()
            .map(|g| quotient.reduce(g))
            .collect::<Result<Vec<_>>>()?;
        let degree = labels.len();
        let dim = spec.dimension();
        let mut adjacency = vec![0u32; order * degree];
        let mut coords = vec![T::zero(); dim];
        let mut prod = vec![T::zero(); dim];
        let m = quotient.modulus() as usize;
        for v in 0..order {
            decode_into(v, m, &mut coords);
            for (slot, s) in labels.iter().enumerate() {
                spec.multiply_slices(&coords, s.coords(), &mut prod)?;
                for c in prod.iter_mut() {
                    *c = quotient.reduce_coord(*c);
                }
                adjacency[v * degree + slot] = encode_slice(&prod, m) as u32;
            }
        }
        Self::from_parts(quotient, adjacency, None)
    }

    /// Assemble from a precomputed adjacency table. A supplied identity
    /// distance table is accepted only if it is a valid BFS labelling;
    /// otherwise it is recomputed.
    pub(crate) fn from_parts(
        quotient: CongruenceQuotient<T>,
        adjacency: Vec<u32>,
        dist: Option<Vec<Dist>>,
    ) -> Result<Self> {
        let order = quotient.order().ok_or(Error::Overflow("quotient order"))?;
        let labels = quotient
            .spec()
            .symmetric_generators()
            .iter()
            .map(|g| quotient.reduce(g))
            .collect::<Result<Vec<_>>>()?;
        let degree = labels.len();
        if adjacency.len() != order * degree || adjacency.iter().any(|&w| w as usize >= order) {
            return Err(Error::CacheFormat("adjacency table has the wrong shape".into()));
        }
        let mut graph = Self {
            quotient,
            order,
            degree,
            adjacency,
            labels,
            dist: Vec::new(),
            ball_sizes: Vec::new(),
        };
        graph.dist = match dist {
            Some(d) if graph.is_bfs_labelling(&d) => d,
            Some(_) => return Err(Error::CacheFormat("distance table is not a BFS labelling".into())),
            None => graph.bfs_all(0),
        };
        let reached = graph.dist.iter().filter(|&&d| d != Dist::MAX).count();
        if reached != order {
            return Err(Error::Disconnected { reached, order });
        }
        let diam = graph.dist.iter().copied().max().unwrap_or(0) as usize;
        let mut spheres = vec![0usize; diam + 1];
        for &d in &graph.dist {
            spheres[d as usize] += 1;
        }
        let mut acc = 0;
        graph.ball_sizes = spheres
            .into_iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect();
        Ok(graph)
    }

    /// `d(e) = 0`, neighbours differ by at most one, and every other vertex has
    /// a neighbour one step closer: exactly the BFS distances from `e`.
    fn is_bfs_labelling(&self, d: &[Dist]) -> bool {
        if d.len() != self.order || d.first() != Some(&0) {
            return false;
        }
        (0..self.order).all(|v| {
            let n = self.neighbors(v);
            n.iter().all(|&w| d[w as usize].abs_diff(d[v]) <= 1)
                && (v == 0 || (d[v] > 0 && n.iter().any(|&w| d[w as usize].checked_add(1) == Some(d[v]))))
        })
    }

    pub(crate) fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    pub(crate) fn identity_distances(&self) -> &[Dist] {
        &self.dist
    }

    pub fn quotient(&self) -> &CongruenceQuotient<T> {
        &self.quotient
    }

    pub fn modulus(&self) -> u64 {
        self.quotient.modulus()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of labelled edge slots per vertex, `|S ∪ S^{-1}|` counted with labels.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity_id(&self) -> usize {
        0
    }

    pub fn generator_labels(&self) -> &[GroupElement<T>] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v * self.degree..(v + 1) * self.degree]
    }

    pub fn encode(&self, element: &GroupElement<T>) -> Result<usize> {
        self.quotient.spec().check(element)?;
        let reduced = self.quotient.reduce(element)?;
        Ok(encode_slice(reduced.coords(), self.quotient.modulus() as usize))
    }

    pub fn decode(&self, id: usize) -> Result<GroupElement<T>> {
        self.check_vertex(id)?;
        let mut coords = vec![T::zero(); self.quotient.spec().dimension()];
        decode_into(id, self.quotient.modulus() as usize, &mut coords);
        Ok(GroupElement::new(coords))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order {
            Ok(())
        } else {
            Err(Error::InvalidPoint(v))
        }
    }

    pub fn distance_from_identity(&self, v: usize) -> Dist {
        self.dist[v]
    }

    /// Vertex id of `u^{-1} v`.
    pub fn difference(&self, u: usize, v: usize) -> usize {
        let dim = self.quotient.spec().dimension();
        let m = self.quotient.modulus() as usize;
        let mut a = vec![T::zero(); dim];
        let mut inv = vec![T::zero(); dim];
        let mut b = vec![T::zero(); dim];
        decode_into(u, m, &mut a);
        decode_into(v, m, &mut b);
        self.reduced_inverse(&a, &mut inv);
        self.reduced_product(&inv, &b, &mut a);
        encode_slice(&a, m)
    }

    /// Vertex id of `g · v` (left translation by the element with id `g`).
    pub fn translate(&self, g: usize, v: usize) -> usize {
        let dim = self.quotient.spec().dimension();
        let m = self.quotient.modulus() as usize;
        let mut a = vec![T::zero(); dim];
        let mut b = vec![T::zero(); dim];
        let mut out = vec![T::zero(); dim];
        decode_into(g, m, &mut a);
        decode_into(v, m, &mut b);
        self.reduced_product(&a, &b, &mut out);
        encode_slice(&out, m)
    }

    fn reduced_product(&self, a: &[T], b: &[T], out: &mut [T]) {
        // entries of reduced operands are < m, so these products cannot overflow
        // for any modulus that passed construction
        self.quotient
            .spec()
            .multiply_slices(a, b, out)
            .expect("reduced product fits the coordinate type");
        for c in out.iter_mut() {
            *c = self.quotient.reduce_coord(*c);
        }
    }

    fn reduced_inverse(&self, a: &[T], out: &mut [T]) {
        self.quotient
            .spec()
            .invert_slice(a, out)
            .expect("reduced inverse fits the coordinate type");
        for c in out.iter_mut() {
            *c = self.quotient.reduce_coord(*c);
        }
    }

    /// `|B(e, r)|`, saturating at the order.
    pub fn ball_size(&self, r: u64) -> usize {
        let idx = (r as usize).min(self.ball_sizes.len() - 1);
        self.ball_sizes[idx]
    }

    /// Eccentricity of the identity, which is the diameter by vertex-transitivity.
    pub fn diameter(&self) -> Dist {
        (self.ball_sizes.len() - 1) as Dist
    }

    /// Vertices at distance at most `r` from `center`, sorted.
    pub fn ball(&self, center: usize, r: Dist) -> Result<Vec<usize>> {
        self.check_vertex(center)?;
        Ok(bfs_truncated(self.order, |v| self.neighbors(v), &[center], r)
            .into_iter()
            .map(|(v, _)| v)
            .collect())
    }

    /// The same ball obtained by left-translating `B(e, r)`; used as a
    /// cross-check of the BFS route.
    pub fn ball_by_translation(&self, center: usize, r: Dist) -> Result<Vec<usize>> {
        self.check_vertex(center)?;
        let mut out: Vec<usize> = (0..self.order)
            .filter(|&w| self.dist[w] <= r)
            .map(|w| self.translate(center, w))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Full BFS distances from `source`; unreachable vertices get `Dist::MAX`.
    pub fn bfs_all(&self, source: usize) -> Vec<Dist> {
        let mut dist = vec![Dist::MAX; self.order];
        dist[source] = 0;
        let mut frontier = vec![source];
        let mut level = 0;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in self.neighbors(v) {
                    let w = w as usize;
                    if dist[w] == Dist::MAX {
                        dist[w] = level;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// Sphere sizes `|S(v, r)|` for `r = 0..=ecc(v)`.
    pub fn sphere_sizes_from(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let dist = self.bfs_all(v);
        let ecc = dist.iter().copied().max().unwrap_or(0) as usize;
        let mut spheres = vec![0; ecc + 1];
        for d in dist {
            spheres[d as usize] += 1;
        }
        Ok(spheres)
    }
}

impl<T: Coord> MetricSpace for CayleyGraph<T> {
    fn len(&self) -> usize {
        self.order
    }

    fn distance(&self, p: usize, q: usize) -> Dist {
        if p == q {
            return 0;
        }
        self.dist[self.difference(p, q)]
    }

    fn neighborhood(&self, sources: &[usize], radius: Dist) -> Vec<(usize, Dist)> {
        bfs_truncated(self.order, |v| self.neighbors(v), sources, radius)
    }

    fn set_diameter(&self, set: &[usize]) -> Dist {
        if set.len() == self.order {
            return CayleyGraph::diameter(self);
        }
        let dim = self.quotient.spec().dimension();
        let m = self.quotient.modulus() as usize;
        let decoded: Vec<Vec<T>> = set
            .iter()
            .map(|&v| {
                let mut c = vec![T::zero(); dim];
                decode_into(v, m, &mut c);
                c
            })
            .collect();
        let mut inv = vec![T::zero(); dim];
        let mut prod = vec![T::zero(); dim];
        let mut best = 0;
        for (i, a) in decoded.iter().enumerate() {
            self.reduced_inverse(a, &mut inv);
            for b in &decoded[i + 1..] {
                self.reduced_product(&inv, b, &mut prod);
                best = best.max(self.dist[encode_slice(&prod, m)]);
            }
        }
        best
    }

    fn graph_neighbors(&self, p: usize) -> Option<&[u32]> {
        Some(self.neighbors(p))
    }

    fn diameter(&self) -> Dist {
        CayleyGraph::diameter(self)
    }
}

pub(crate) fn encode_slice<T: Coord>(coords: &[T], m: usize) -> usize {
    coords
        .iter()
        .rev()
        .fold(0usize, |acc, c| acc * m + c.to_usize().expect("reduced coordinate"))
}

pub(crate) fn decode_into<T: Coord>(mut id: usize, m: usize, out: &mut [T]) {
    for c in out.iter_mut() {
        *c = T::from_usize(id % m).expect("coordinate below modulus");
        id /= m;
    }
}
