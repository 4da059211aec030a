//! Exact arithmetic for the built-in nilpotent groups and their congruence quotients.
//!
//! Elements are stored as flat coordinate vectors. A free abelian group of rank
//! `d` uses `d` coordinates; the unitriangular group `UT(n, Z)` uses the
//! `n(n-1)/2` entries above the diagonal, ordered by superdiagonal and then by
//! row, so for `n = 3` the layout is `(e01, e12, e02)`. Direct products
//! concatenate the coordinates of their factors.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_traits::{CheckedNeg, FromPrimitive, PrimInt, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Integer type usable as a group coordinate.
///
/// Every arithmetic step is checked; overflow surfaces as [`Error::Overflow`]
/// instead of wrapping.
pub trait Coord:
    PrimInt + Signed + CheckedNeg + FromPrimitive + ToPrimitive + Hash + Debug + Display + Send + Sync + 'static
{
}

impl<T> Coord for T where
    T: PrimInt + Signed + CheckedNeg + FromPrimitive + ToPrimitive + Hash + Debug + Display + Send + Sync + 'static
{
}

#[inline]
fn add<T: Coord>(a: T, b: T) -> Result<T> {
    a.checked_add(&b).ok_or(Error::Overflow("group multiplication"))
}

#[inline]
fn mul<T: Coord>(a: T, b: T) -> Result<T> {
    a.checked_mul(&b).ok_or(Error::Overflow("group multiplication"))
}

#[inline]
fn neg<T: Coord>(a: T) -> Result<T> {
    a.checked_neg().ok_or(Error::Overflow("group inversion"))
}

/// Which built-in group a [`GroupSpec`] describes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Unitriangular { size: usize },
    DirectProduct(Vec<GroupKind>),
}

/// Position of entry `(i, j)`, `i < j`, in the unitriangular coordinate layout.
#[inline]
fn ut_index(n: usize, i: usize, j: usize) -> usize {
    let d = j - i;
    (d - 1) * n - (d - 1) * d / 2 + i
}

impl GroupKind {
    fn validate(&self) -> Result<()> {
        match self {
            GroupKind::FreeAbelian { rank } if *rank == 0 => {
                Err(Error::InvalidParameter("free abelian rank must be at least 1".into()))
            }
            GroupKind::Unitriangular { size } if *size < 2 => {
                Err(Error::InvalidParameter("unitriangular size must be at least 2".into()))
            }
            GroupKind::DirectProduct(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidParameter(
                        "direct product needs at least one factor".into(),
                    ));
                }
                parts.iter().try_for_each(GroupKind::validate)
            }
            _ => Ok(()),
        }
    }

    /// Number of integer coordinates of an element.
    pub fn dimension(&self) -> usize {
        match self {
            GroupKind::FreeAbelian { rank } => *rank,
            GroupKind::Unitriangular { size } => size * (size - 1) / 2,
            GroupKind::DirectProduct(parts) => parts.iter().map(GroupKind::dimension).sum(),
        }
    }

    /// Number of infinite cyclic factors in a polycyclic series.
    pub fn hirsch_length(&self) -> usize {
        match self {
            GroupKind::FreeAbelian { rank } => *rank,
            // one infinite cyclic factor per superdiagonal entry
            GroupKind::Unitriangular { size } => size * (size - 1) / 2,
            GroupKind::DirectProduct(parts) => parts.iter().map(GroupKind::hirsch_length).sum(),
        }
    }

    fn default_generators<T: Coord>(&self) -> Vec<Vec<T>> {
        match self {
            GroupKind::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut v = vec![T::zero(); *rank];
                    v[i] = T::one();
                    v
                })
                .collect(),
            GroupKind::Unitriangular { size } => {
                let dim = self.dimension();
                (0..size - 1)
                    .map(|i| {
                        let mut v = vec![T::zero(); dim];
                        v[ut_index(*size, i, i + 1)] = T::one();
                        v
                    })
                    .collect()
            }
            GroupKind::DirectProduct(parts) => {
                let dim = self.dimension();
                let mut out = Vec::new();
                let mut offset = 0;
                for part in parts {
                    for g in part.default_generators::<T>() {
                        let mut v = vec![T::zero(); dim];
                        v[offset..offset + g.len()].copy_from_slice(&g);
                        out.push(v);
                    }
                    offset += part.dimension();
                }
                out
            }
        }
    }

    fn multiply_into<T: Coord>(&self, a: &[T], b: &[T], out: &mut [T]) -> Result<()> {
        match self {
            GroupKind::FreeAbelian { .. } => {
                for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
                    *o = add(x, y)?;
                }
                Ok(())
            }
            GroupKind::Unitriangular { size } => {
                let n = *size;
                for d in 1..n {
                    for i in 0..n - d {
                        let j = i + d;
                        let idx = ut_index(n, i, j);
                        let mut acc = add(a[idx], b[idx])?;
                        for k in i + 1..j {
                            acc = add(acc, mul(a[ut_index(n, i, k)], b[ut_index(n, k, j)])?)?;
                        }
                        out[idx] = acc;
                    }
                }
                Ok(())
            }
            GroupKind::DirectProduct(parts) => {
                let mut offset = 0;
                for part in parts {
                    let end = offset + part.dimension();
                    part.multiply_into(&a[offset..end], &b[offset..end], &mut out[offset..end])?;
                    offset = end;
                }
                Ok(())
            }
        }
    }

    fn invert_into<T: Coord>(&self, a: &[T], out: &mut [T]) -> Result<()> {
        match self {
            GroupKind::FreeAbelian { .. } => {
                for (o, &x) in out.iter_mut().zip(a) {
                    *o = neg(x)?;
                }
                Ok(())
            }
            GroupKind::Unitriangular { size } => {
                // X = A^{-1} solves X_ij = -A_ij - sum_{i<k<j} A_ik X_kj, filled by
                // increasing superdiagonal so every X_kj on the right is known.
                let n = *size;
                for d in 1..n {
                    for i in 0..n - d {
                        let j = i + d;
                        let idx = ut_index(n, i, j);
                        let mut acc = a[idx];
                        for k in i + 1..j {
                            acc = add(acc, mul(a[ut_index(n, i, k)], out[ut_index(n, k, j)])?)?;
                        }
                        out[idx] = neg(acc)?;
                    }
                }
                Ok(())
            }
            GroupKind::DirectProduct(parts) => {
                let mut offset = 0;
                for part in parts {
                    let end = offset + part.dimension();
                    part.invert_into(&a[offset..end], &mut out[offset..end])?;
                    offset = end;
                }
                Ok(())
            }
        }
    }
}

impl Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::FreeAbelian { rank: 1 } => write!(f, "Z"),
            GroupKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupKind::Unitriangular { size } => write!(f, "UT({size},Z)"),
            GroupKind::DirectProduct(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// An element of a built-in group, as its coordinate vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement<T: Coord = i64>(Vec<T>);

impl<T: Coord> GroupElement<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self(coords)
    }

    pub fn identity(dimension: usize) -> Self {
        Self(vec![T::zero(); dimension])
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<T> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

impl<T: Coord> Debug for GroupElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<T: Coord> From<Vec<T>> for GroupElement<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

/// A built-in group together with a fixed finite generating set.
///
/// Generators are stored one per `±` pair; inverses are implicit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec<T: Coord = i64> {
    kind: GroupKind,
    generators: Vec<GroupElement<T>>,
}

impl<T: Coord> Debug for GroupSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupSpec")
            .field("kind", &self.kind)
            .field("generators", &self.generators)
            .finish()
    }
}

impl<T: Coord> GroupSpec<T> {
    /// The group with its default generating set.
    pub fn new(kind: GroupKind) -> Result<Self> {
        kind.validate()?;
        let generators = kind.default_generators::<T>().into_iter().map(GroupElement).collect();
        Ok(Self { kind, generators })
    }

    pub fn free_abelian(rank: usize) -> Result<Self> {
        Self::new(GroupKind::FreeAbelian { rank })
    }

    pub fn unitriangular(size: usize) -> Result<Self> {
        Self::new(GroupKind::Unitriangular { size })
    }

    pub fn direct_product(factors: Vec<GroupKind>) -> Result<Self> {
        Self::new(GroupKind::DirectProduct(factors))
    }

    /// The group with an explicit generating set. Whether the set generates is
    /// only checked when a quotient Cayley graph is built (it must be connected).
    pub fn with_generators(kind: GroupKind, generators: Vec<GroupElement<T>>) -> Result<Self> {
        kind.validate()?;
        if generators.is_empty() {
            return Err(Error::InvalidParameter("generating set is empty".into()));
        }
        let dim = kind.dimension();
        for g in &generators {
            if g.0.len() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    found: g.0.len(),
                });
            }
            if g.is_identity() {
                return Err(Error::InvalidParameter("the identity cannot be a generator".into()));
            }
        }
        Ok(Self { kind, generators })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement<T>] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    pub fn hirsch_length(&self) -> usize {
        self.kind.hirsch_length()
    }

    pub fn identity(&self) -> GroupElement<T> {
        GroupElement::identity(self.dimension())
    }

    /// `s_0, s_0^{-1}, s_1, s_1^{-1}, ...`: the edge labels of the Cayley graph.
    pub fn symmetric_generators(&self) -> Vec<GroupElement<T>> {
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for g in &self.generators {
            out.push(g.clone());
            out.push(self.invert(g).expect("generator inverse fits the coordinate type"));
        }
        out
    }

    pub fn check(&self, a: &GroupElement<T>) -> Result<()> {
        let dim = self.dimension();
        if a.0.len() != dim {
            return Err(Error::Shape {
                expected: dim,
                found: a.0.len(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &GroupElement<T>, b: &GroupElement<T>) -> Result<GroupElement<T>> {
        self.check(a)?;
        self.check(b)?;
        let mut out = vec![T::zero(); self.dimension()];
        self.kind.multiply_into(&a.0, &b.0, &mut out)?;
        Ok(GroupElement(out))
    }

    pub fn invert(&self, a: &GroupElement<T>) -> Result<GroupElement<T>> {
        self.check(a)?;
        let mut out = vec![T::zero(); self.dimension()];
        self.kind.invert_into(&a.0, &mut out)?;
        Ok(GroupElement(out))
    }

    pub(crate) fn multiply_slices(&self, a: &[T], b: &[T], out: &mut [T]) -> Result<()> {
        self.kind.multiply_into(a, b, out)
    }

    pub(crate) fn invert_slice(&self, a: &[T], out: &mut [T]) -> Result<()> {
        self.kind.invert_into(a, out)
    }

    /// Evaluate a word given as generator indices with signs (`+i` / `-i`, 1-based).
    pub fn evaluate_word(&self, word: &[i32]) -> Result<GroupElement<T>> {
        let mut acc = self.identity();
        for &letter in word {
            let idx = letter.unsigned_abs() as usize;
            if letter == 0 || idx > self.generators.len() {
                return Err(Error::InvalidParameter(format!("bad word letter {letter}")));
            }
            let g = &self.generators[idx - 1];
            let g = if letter > 0 { g.clone() } else { self.invert(g)? };
            acc = self.multiply(&acc, &g)?;
        }
        Ok(acc)
    }

    /// Stable textual form used for digests: kind plus generator coordinates.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("{:?}|", self.kind);
        for g in &self.generators {
            s.push_str(&format!("{g:?};"));
        }
        s
    }
}

/// `G / N_m` where `N_m` is the set of elements whose coordinates are all
/// divisible by `m`.
///
/// Coordinate reduction is a ring map `Z -> Z/m` applied entrywise, so it is a
/// homomorphism for all built-ins, and its kernel is normal of index
/// `m^dimension`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CongruenceQuotient<T: Coord = i64> {
    spec: GroupSpec<T>,
    modulus: u64,
    modulus_t: T,
}

impl<T: Coord> Debug for CongruenceQuotient<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.spec.kind, self.modulus)
    }
}

impl<T: Coord> CongruenceQuotient<T> {
    pub fn new(spec: GroupSpec<T>, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let modulus_t = T::from_u64(modulus).ok_or(Error::Overflow("modulus conversion"))?;
        Ok(Self {
            spec,
            modulus,
            modulus_t,
        })
    }

    pub fn spec(&self) -> &GroupSpec<T> {
        &self.spec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `m^dimension`, or `None` if it does not fit in `usize`.
    pub fn order(&self) -> Option<usize> {
        let m = usize::try_from(self.modulus).ok()?;
        let mut acc: usize = 1;
        for _ in 0..self.spec.dimension() {
            acc = acc.checked_mul(m)?;
        }
        Some(acc)
    }

    #[inline]
    pub(crate) fn reduce_coord(&self, c: T) -> T {
        let r = c % self.modulus_t;
        if r < T::zero() {
            r + self.modulus_t
        } else {
            r
        }
    }

    /// Image of `a` under `G -> G/N_m`, coordinates in `[0, m)`.
    pub fn reduce(&self, a: &GroupElement<T>) -> Result<GroupElement<T>> {
        self.spec.check(a)?;
        Ok(GroupElement(a.0.iter().map(|&c| self.reduce_coord(c)).collect()))
    }

    pub fn in_kernel(&self, a: &GroupElement<T>) -> bool {
        a.0.iter().all(|&c| (c % self.modulus_t).is_zero())
    }

    /// Product in the quotient of two reduced elements.
    pub fn multiply(&self, a: &GroupElement<T>, b: &GroupElement<T>) -> Result<GroupElement<T>> {
        let p = self.spec.multiply(a, b)?;
        self.reduce(&p)
    }

    pub fn invert(&self, a: &GroupElement<T>) -> Result<GroupElement<T>> {
        let p = self.spec.invert(a)?;
        self.reduce(&p)
    }
}

/// A congruence filtration `N_{m_1} ⊇ N_{m_2} ⊇ ...` with `m_i | m_{i+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Filtration<T: Coord = i64> {
    spec: GroupSpec<T>,
    moduli: Vec<u64>,
}

impl<T: Coord> Debug for Filtration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} along {:?}", self.spec.kind, self.moduli)
    }
}

impl<T: Coord> Filtration<T> {
    pub fn new(spec: GroupSpec<T>, moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidParameter("filtration needs at least one modulus".into()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidModulus(m));
        }
        for w in moduli.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "moduli must form a strictly increasing divisibility chain: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { spec, moduli })
    }

    /// `p, p^2, ..., p^t`.
    pub fn powers(spec: GroupSpec<T>, p: u64, t: u32) -> Result<Self> {
        let moduli = (1..=t)
            .map(|i| p.checked_pow(i).ok_or(Error::Overflow("filtration modulus")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, moduli)
    }

    pub fn spec(&self) -> &GroupSpec<T> {
        &self.spec
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn quotients(&self) -> Result<Vec<CongruenceQuotient<T>>> {
        self.moduli
            .iter()
            .map(|&m| CongruenceQuotient::new(self.spec.clone(), m))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[i64]) -> GroupElement<i64> {
        GroupElement::new(v.to_vec())
    }

    /// 3x3 unitriangular matrix from (a, b, c) = (e01, e12, e02).
    fn mat3(e: &GroupElement<i64>) -> [[i64; 3]; 3] {
        let c = e.coords();
        [[1, c[0], c[2]], [0, 1, c[1]], [0, 0, 1]]
    }

    fn matmul(a: [[i64; 3]; 3], b: [[i64; 3]; 3]) -> [[i64; 3]; 3] {
        let mut out = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    #[test]
    fn free_abelian_sum() {
        let g = GroupSpec::<i64>::free_abelian(2).unwrap();
        assert_eq!(g.multiply(&el(&[1, 0]), &el(&[0, 1])).unwrap(), el(&[1, 1]));
        assert_eq!(g.invert(&el(&[3, -1])).unwrap(), el(&[-3, 1]));
    }

    #[test]
    fn heisenberg_products_match_matrices() {
        let h = GroupSpec::<i64>::unitriangular(3).unwrap();
        let x = el(&[1, 0, 0]);
        let y = el(&[0, 1, 0]);
        assert_eq!(h.multiply(&x, &y).unwrap(), el(&[1, 1, 1]));
        assert_eq!(h.multiply(&y, &x).unwrap(), el(&[1, 1, 0]));
        assert_eq!(h.invert(&el(&[1, 1, 1])).unwrap(), el(&[-1, -1, 0]));
        assert_eq!(h.invert(&h.identity()).unwrap(), h.identity());
        // matrix oracle
        let a = el(&[2, -3, 5]);
        let b = el(&[-1, 4, 7]);
        let p = h.multiply(&a, &b).unwrap();
        assert_eq!(mat3(&p), matmul(mat3(&a), mat3(&b)));
    }

    #[test]
    fn ut4_layout_and_product() {
        let g = GroupSpec::<i64>::unitriangular(4).unwrap();
        assert_eq!(g.dimension(), 6);
        assert_eq!(g.generators().len(), 3);
        // layout: (01, 12, 23, 02, 13, 03)
        assert_eq!(ut_index(4, 0, 1), 0);
        assert_eq!(ut_index(4, 2, 3), 2);
        assert_eq!(ut_index(4, 0, 2), 3);
        assert_eq!(ut_index(4, 1, 3), 4);
        assert_eq!(ut_index(4, 0, 3), 5);
        // e01 * e12 * e23 has corner 1
        let w = g.evaluate_word(&[1, 2, 3]).unwrap();
        assert_eq!(w, el(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn hirsch_lengths() {
        assert_eq!(GroupSpec::<i64>::free_abelian(3).unwrap().hirsch_length(), 3);
        assert_eq!(GroupSpec::<i64>::unitriangular(3).unwrap().hirsch_length(), 3);
        let p = GroupSpec::<i64>::direct_product(vec![
            GroupKind::FreeAbelian { rank: 1 },
            GroupKind::Unitriangular { size: 3 },
        ])
        .unwrap();
        assert_eq!(p.hirsch_length(), 4);
        assert_eq!(p.generators().len(), 3);
        assert_eq!(p.generators()[1], el(&[0, 1, 0, 0]));
    }

    #[test]
    fn overflow_is_detected() {
        let h = GroupSpec::<i32>::unitriangular(3).unwrap();
        let big = GroupElement::new(vec![i32::MAX / 2, i32::MAX / 2, 0]);
        assert!(matches!(h.multiply(&big, &big), Err(Error::Overflow(_))));
        let z = GroupSpec::<i32>::free_abelian(1).unwrap();
        let min = GroupElement::new(vec![i32::MIN]);
        assert!(matches!(z.invert(&min), Err(Error::Overflow(_))));
    }

    #[test]
    fn shape_errors() {
        let g = GroupSpec::<i64>::free_abelian(2).unwrap();
        assert!(matches!(
            g.multiply(&el(&[1]), &el(&[0, 1])),
            Err(Error::Shape { expected: 2, found: 1 })
        ));
        assert!(GroupSpec::<i64>::free_abelian(0).is_err());
        assert!(GroupSpec::<i64>::unitriangular(1).is_err());
        assert!(GroupSpec::<i64>::with_generators(GroupKind::FreeAbelian { rank: 2 }, vec![el(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn reduce_mod_examples() {
        let z = GroupSpec::<i64>::free_abelian(1).unwrap();
        let q = CongruenceQuotient::new(z, 12).unwrap();
        assert_eq!(q.reduce(&el(&[17])).unwrap(), el(&[5]));
        assert_eq!(q.reduce(&el(&[-7])).unwrap(), el(&[5]));
        assert_eq!(q.reduce(&el(&[0])).unwrap(), el(&[0]));
        assert_eq!(q.order(), Some(12));

        let h = GroupSpec::<i64>::unitriangular(3).unwrap();
        let q2 = CongruenceQuotient::new(h.clone(), 2).unwrap();
        let a = el(&[1, 1, 1]);
        let lhs = q2.reduce(&h.multiply(&a, &a).unwrap()).unwrap();
        let rhs = q2.multiply(&q2.reduce(&a).unwrap(), &q2.reduce(&a).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(CongruenceQuotient::new(h, 1).is_err());
    }

    #[test]
    fn filtration_divisibility() {
        let z = GroupSpec::<i64>::free_abelian(1).unwrap();
        assert!(Filtration::new(z.clone(), vec![2, 4, 8]).is_ok());
        assert!(Filtration::new(z.clone(), vec![3, 4]).is_err());
        assert!(Filtration::new(z.clone(), vec![4, 4]).is_err());
        assert!(Filtration::new(z.clone(), vec![]).is_err());
        let f = Filtration::powers(z, 2, 10).unwrap();
        assert_eq!(f.moduli().len(), 10);
        assert_eq!(f.moduli()[9], 1024);
    }
}
