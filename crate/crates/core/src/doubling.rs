//! Doubling radii, maximal packings and the bounded-multiplicity cover of a
//! box space of polynomial growth.
//!
//! For a growth bound `|B(e, r)| <= C r^d` and a scale `R`, set
//! `K = 4^d + 1`, let `m` be least with `(K / 4^d)^m >= C R^d`, and
//! `S_0 = 4^{m+1} R`. Each large component gets a radius `R_n = 4^i R`
//! (`i <= m`) with `|B(4 R_n)| <= K |B(R_n)|`, a maximal `R_n`-packing `X`,
//! and the sets `B(x, 2 R_n)`. Components of diameter at most `R` are covered
//! separately. The resulting cover has `R`-multiplicity at most `K`.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxspace::BoxSpace;
use crate::cayley::CayleyGraph;
use crate::cover::{verify_cover, Cover, CoverReport, CoverSet, SetMeta};
use crate::error::{Error, Result};
use crate::group::Coord;
use crate::growth::GrowthBound;
use crate::metric::{Dist, MetricSpace};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverParams {
    pub r: Dist,
    pub c: Rational,
    pub d: u32,
    /// `4^d + 1`.
    pub k: u64,
    pub m: u64,
    /// `4^{m+1} R`.
    pub s0: BigUint,
}

impl CoverParams {
    pub fn new(r: Dist, growth: &GrowthBound) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("R must be at least 1".into()));
        }
        let d = growth.degree;
        let four_d = 4u64.checked_pow(d).ok_or(Error::Overflow("4^d"))?;
        let k = four_d + 1;
        let num = growth
            .c
            .numer()
            .to_biguint()
            .ok_or_else(|| Error::InvalidParameter("growth constant must be positive".into()))?;
        let den = growth.c.denom().to_biguint().expect("positive denominator");
        let target = num * BigUint::from(r).pow(d);
        // (K / 4^d)^m >= C R^d  <=>  K^m den >= num R^d 4^{dm}
        let holds = |m: u64| -> bool {
            let m32 = u32::try_from(m).expect("exponent fits u32");
            BigUint::from(k).pow(m32) * &den >= &target * BigUint::from(four_d).pow(m32)
        };
        let m = if holds(0) {
            0
        } else {
            let mut hi = 1u64;
            while !holds(hi) {
                hi = hi
                    .checked_mul(2)
                    .filter(|&h| h <= u32::MAX as u64)
                    .ok_or(Error::Overflow("m"))?;
            }
            let mut lo = hi / 2;
            // holds(lo) is false, holds(hi) is true
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if holds(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        };
        let s0 = BigUint::from(r) << (2 * (m + 1));
        Ok(Self {
            r,
            c: growth.c.clone(),
            d,
            k,
            m,
            s0,
        })
    }

    /// `max(S_0, R)`, the diameter bound of the cover.
    pub fn s_bound(&self) -> BigUint {
        self.s0.clone().max(BigUint::from(self.r))
    }

    /// [`s_bound`](Self::s_bound) clamped to [`Dist`].
    pub fn s_bound_dist(&self) -> Dist {
        self.s_bound().to_u32().unwrap_or(Dist::MAX)
    }

    fn admits(&self, r: u64, size: usize) -> bool {
        let lhs = BigInt::from(size) * self.c.denom();
        let rhs = self.c.numer() * BigInt::from(r).pow(self.d);
        lhs <= rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DoublingRadius {
    pub radius: u64,
    /// `i` in `R_n = 4^i R`.
    pub step: u32,
    pub inner: usize,
    pub outer: usize,
}

/// Check `|B(e, r)| <= C r^d` for `1 <= r <= min(diam, S_0)`. Larger radii
/// saturate at the order and add nothing.
pub fn check_growth<T: Coord>(graph: &CayleyGraph<T>, params: &CoverParams) -> Result<()> {
    let top = graph.diameter() as u64;
    let top = params.s0.to_u64().map_or(top, |s| s.min(top));
    for r in 1..=top {
        let size = graph.ball_size(r);
        if !params.admits(r, size) {
            return Err(Error::GrowthViolation {
                radius: r as u32,
                size,
                bound: (&params.c * Rational::from_integer(BigInt::from(r).pow(params.d))).to_string(),
            });
        }
    }
    Ok(())
}

/// The smallest `R_n` in `R, 4R, 16R, ...` (at most `4^m R`) with
/// `|B(e, 4 R_n)| <= K |B(e, R_n)|`, after checking the growth precondition.
pub fn doubling_radius<T: Coord>(graph: &CayleyGraph<T>, params: &CoverParams) -> Result<DoublingRadius> {
    check_growth(graph, params)?;
    let diam = graph.diameter() as u64;
    let mut radius = params.r as u64;
    for step in 0..=params.m {
        let inner = graph.ball_size(radius);
        let outer = graph.ball_size(radius.saturating_mul(4));
        if (outer as u128) <= params.k as u128 * inner as u128 {
            return Ok(DoublingRadius {
                radius,
                step: step as u32,
                inner,
                outer,
            });
        }
        // balls saturate once radius >= diam, so the test above passed already
        debug_assert!(radius < diam);
        radius = radius.saturating_mul(4);
    }
    Err(Error::Verification(format!(
        "no doubling radius among 4^i * {} for i <= {} although the growth bound holds",
        params.r, params.m
    )))
}

fn clamp(r: u64) -> Dist {
    r.min(Dist::MAX as u64) as Dist
}

/// Greedy maximal packing: scan points in ascending order and keep `v` when
/// it is more than `2 R_n` from every kept point.
pub fn maximal_packing<M: MetricSpace + ?Sized>(space: &M, rn: u64) -> Vec<usize> {
    let n = space.len();
    let mut blocked = vec![false; n];
    let mut centers = Vec::new();
    let reach = clamp(rn.saturating_mul(2));
    for v in 0..n {
        if blocked[v] {
            continue;
        }
        centers.push(v);
        for (w, _) in space.neighborhood(&[v], reach) {
            blocked[w] = true;
        }
    }
    centers
}

/// `max_z |B(z, 3 R_n) ∩ X|` with a point attaining it.
pub fn packing_count<M: MetricSpace + ?Sized>(space: &M, centers: &[usize], rn: u64) -> (usize, usize) {
    let mut counter = vec![0usize; space.len()];
    let reach = clamp(rn.saturating_mul(3));
    let lists: Vec<Vec<(usize, Dist)>> = centers.par_iter().map(|&x| space.neighborhood(&[x], reach)).collect();
    for list in lists {
        for (z, _) in list {
            counter[z] += 1;
        }
    }
    counter
        .iter()
        .enumerate()
        .max_by_key(|&(z, &c)| (c, std::cmp::Reverse(z)))
        .map_or((0, 0), |(z, &c)| (c, z))
}

/// How components of diameter at most `R` enter the cover.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallComponents {
    /// One set `F_R`, the union of all small components.
    #[default]
    Merged,
    /// One set per small component.
    Separate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPlan {
    pub component: usize,
    pub small: bool,
    pub doubling: Option<DoublingRadius>,
    pub centers: Vec<usize>,
    /// `max_z |B(z, 3 R_n) ∩ X|`; zero for small components.
    pub packing_max: usize,
}

#[derive(Debug, Clone)]
pub struct DoublingCover {
    pub params: CoverParams,
    pub policy: SmallComponents,
    /// All sets in one family.
    pub cover: Cover,
    pub report: CoverReport,
    pub components: Vec<ComponentPlan>,
}

impl DoublingCover {
    pub fn packing_max(&self) -> usize {
        self.components.iter().map(|c| c.packing_max).max().unwrap_or(0)
    }

    /// The quantitative guarantees: a cover, `R`-multiplicity at most `K`,
    /// diameters at most `max(S_0, R)`, and the packing count at most `K`.
    pub fn certify(&self) -> Result<()> {
        let k = self.params.k as usize;
        if !self.report.is_cover {
            return Err(Error::Verification(format!(
                "not a cover: {:?}",
                self.report.violations
            )));
        }
        if self.report.r_multiplicity > k {
            return Err(Error::Verification(format!(
                "R-multiplicity {} exceeds K = {k} at point {:?}",
                self.report.r_multiplicity, self.report.multiplicity_point
            )));
        }
        if BigUint::from(self.report.max_set_diameter) > self.params.s_bound() {
            return Err(Error::Verification(format!(
                "set diameter {} exceeds max(S_0, R)",
                self.report.max_set_diameter
            )));
        }
        if let Some(c) = self.components.iter().find(|c| c.packing_max > k) {
            return Err(Error::Verification(format!(
                "packing count {} exceeds K = {k} in component {}",
                c.packing_max, c.component
            )));
        }
        Ok(())
    }
}

/// Build the cover for scale `R` and verify it. The result is not certified;
/// call [`DoublingCover::certify`].
pub fn doubling_cover<T: Coord>(
    box_space: &BoxSpace<T>,
    r: Dist,
    growth: &GrowthBound,
    policy: SmallComponents,
) -> Result<DoublingCover> {
    let params = CoverParams::new(r, growth)?;
    let plans = box_space
        .components()
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> Result<(ComponentPlan, Vec<CoverSet>)> {
            if g.diameter() <= r {
                let plan = ComponentPlan {
                    component: i,
                    small: true,
                    doubling: None,
                    centers: Vec::new(),
                    packing_max: 0,
                };
                return Ok((plan, Vec::new()));
            }
            let doubling = doubling_radius(g, &params)?;
            let centers = maximal_packing(g, doubling.radius);
            let (packing_max, _) = packing_count(g, &centers, doubling.radius);
            let offset = box_space.range(i).start;
            let radius = clamp(doubling.radius.saturating_mul(2));
            let sets = centers
                .iter()
                .map(|&x| {
                    let pts = g.ball(x, radius).expect("center is a vertex");
                    CoverSet::new(pts.into_iter().map(|v| v + offset).collect()).with_meta(SetMeta {
                        component: i,
                        center: x,
                        radius,
                    })
                })
                .collect();
            let plan = ComponentPlan {
                component: i,
                small: false,
                doubling: Some(doubling),
                centers,
                packing_max,
            };
            Ok((plan, sets))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sets = Vec::new();
    let mut merged = Vec::new();
    let mut components = Vec::with_capacity(plans.len());
    for (plan, comp_sets) in plans {
        if plan.small {
            let range = box_space.range(plan.component);
            match policy {
                SmallComponents::Merged => merged.extend(range),
                SmallComponents::Separate => sets.push(CoverSet::new(range.collect()).with_meta(SetMeta {
                    component: plan.component,
                    center: 0,
                    radius: box_space.diameters()[plan.component],
                })),
            }
        }
        sets.extend(comp_sets);
        components.push(plan);
    }
    if !merged.is_empty() {
        sets.insert(0, CoverSet::new(merged));
    }
    let cover = Cover::single_family(sets);
    let report = verify_cover(box_space, &cover, r, params.s_bound_dist());
    Ok(DoublingCover {
        params,
        policy,
        cover,
        report,
        components,
    })
}
