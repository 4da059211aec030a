//! Assembly of per-scale covers into families that are `k`-disjoint away
//! from a finite prefix of the box space.
//!
//! Given covers `U_j^k` at increasing scales `k` and thresholds `i_k`, the
//! family `Y_j^k` keeps the sets of `U_j^k` lying in a component with index
//! in `[i_k, i_{k+1})`, `F_k` is the union of the components below `i_k`, and
//! `Y_j^{>=k}` collects `Y_j^{k'}` for all `k' >= k`.

use serde::Serialize;

use crate::boxspace::BoxSpace;
use crate::cover::{verify_cover, Cover, CoverSet, Violation};
use crate::error::{Error, Result};
use crate::group::Coord;
use crate::metric::{Dist, MetricSpace};

#[derive(Debug, Clone)]
pub struct ScaleCover {
    pub scale: Dist,
    pub cover: Cover,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssembledScale {
    pub scale: Dist,
    pub threshold: usize,
    /// Points of `F_k`.
    pub finite_points: usize,
    /// `Y_j^{>=k}` for `j = 0..=n`.
    #[serde(skip)]
    pub families: Vec<Vec<CoverSet>>,
    pub set_count: usize,
    /// Per family, the least distance below `k` between two of its sets.
    pub min_distance: Vec<Option<Dist>>,
    pub violations: Vec<Violation>,
    /// Every point outside `F_k` lies in some set.
    pub covers_complement: bool,
    /// `Y_j^{>=k} = {Y \ F_k : Y in Y_j^{>=1}}` with empty sets dropped.
    pub subtraction_identity: bool,
}

impl AssembledScale {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.covers_complement && self.subtraction_identity
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyAssembly {
    pub family_count: usize,
    pub thresholds: Vec<usize>,
    pub scales: Vec<AssembledScale>,
}

impl FamilyAssembly {
    pub fn is_valid(&self) -> bool {
        self.scales.iter().all(AssembledScale::is_valid)
    }

    /// First failed check, if any.
    pub fn first_violation(&self) -> Option<(Dist, String)> {
        self.scales.iter().find(|s| !s.is_valid()).map(|s| {
            let what = if let Some(v) = s.violations.first() {
                format!("{v:?}")
            } else if !s.covers_complement {
                "complement of F_k not covered".to_string()
            } else {
                "subtraction identity fails".to_string()
            };
            (s.scale, what)
        })
    }
}

/// Component holding every point of `set`, or a straddle error naming two
/// components it meets.
fn home_component<T: Coord>(
    box_space: &BoxSpace<T>,
    set: &CoverSet,
    scale: Dist,
    family: usize,
    index: usize,
) -> Result<Option<usize>> {
    let comps = box_space.union().components_of(&set.points);
    match comps.as_slice() {
        [] => Ok(None),
        [c] => Ok(Some(*c)),
        [a, b, ..] => Err(Error::Precondition(format!(
            "set {index} of family {family} at scale {scale} straddles components {a} and {b}"
        ))),
    }
}

/// Build `Y_j^{>=k}` and `F_k` for every scale and verify them.
///
/// `thresholds[t]` is `i_k` for `covers[t]`; scales must increase and
/// thresholds must not decrease. A selected set meeting two components is a
/// precondition error.
pub fn assemble_box_families<T: Coord>(
    box_space: &BoxSpace<T>,
    covers: &[ScaleCover],
    thresholds: &[usize],
) -> Result<FamilyAssembly> {
    if covers.is_empty() || covers.len() != thresholds.len() {
        return Err(Error::InvalidParameter("need one threshold per scale cover".into()));
    }
    if covers.windows(2).any(|w| w[1].scale <= w[0].scale) {
        return Err(Error::InvalidParameter("scales must increase".into()));
    }
    if thresholds.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("thresholds must not decrease".into()));
    }
    let count = box_space.component_count();
    if thresholds.iter().any(|&i| i > count) {
        return Err(Error::InvalidParameter("threshold beyond the truncation".into()));
    }
    let n_families = covers.iter().map(|c| c.cover.family_count()).max().unwrap_or(0);

    // Y_j^k for each scale position t
    let mut per_scale: Vec<Vec<Vec<CoverSet>>> = Vec::with_capacity(covers.len());
    for (t, sc) in covers.iter().enumerate() {
        let lo = thresholds[t];
        let hi = thresholds.get(t + 1).copied().unwrap_or(count);
        let mut fams = vec![Vec::new(); n_families];
        for (j, family) in sc.cover.families.iter().enumerate() {
            for (idx, set) in family.iter().enumerate() {
                let comps = box_space.union().components_of(&set.points);
                if !comps.iter().any(|c| (lo..hi).contains(c)) {
                    continue;
                }
                if let Some(c) = home_component(box_space, set, sc.scale, j, idx)? {
                    debug_assert!((lo..hi).contains(&c));
                    fams[j].push(set.clone());
                }
            }
        }
        per_scale.push(fams);
    }

    let all_from = |t: usize| -> Vec<Vec<CoverSet>> {
        let mut fams = vec![Vec::new(); n_families];
        for layer in &per_scale[t..] {
            for (j, f) in layer.iter().enumerate() {
                fams[j].extend(f.iter().cloned());
            }
        }
        fams
    };
    let everything = all_from(0);

    let mut scales = Vec::with_capacity(covers.len());
    for (t, sc) in covers.iter().enumerate() {
        let k = sc.scale;
        let finite_end = if thresholds[t] == 0 {
            0
        } else {
            box_space.range(thresholds[t] - 1).end
        };
        let families = all_from(t);

        let subtracted: Vec<Vec<CoverSet>> = everything
            .iter()
            .map(|fam| {
                fam.iter()
                    .map(|s| CoverSet::new(s.points.iter().copied().filter(|&p| p >= finite_end).collect()))
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .collect();
        let strip = |f: &Vec<Vec<CoverSet>>| -> Vec<Vec<Vec<usize>>> {
            f.iter()
                .map(|fam| fam.iter().map(|s| s.points.clone()).collect())
                .collect()
        };
        let subtraction_identity = strip(&subtracted) == strip(&families);

        let cover = Cover::new(families.clone());
        let report = verify_cover(box_space, &cover, k, Dist::MAX);
        let violations: Vec<Violation> = report
            .violations
            .into_iter()
            .filter(|v| !matches!(v, Violation::Uncovered { .. }))
            .collect();
        let mut covered = vec![false; box_space.len()];
        for fam in &families {
            for s in fam {
                for &p in &s.points {
                    covered[p] = true;
                }
            }
        }
        let covers_complement = covered[finite_end..].iter().all(|&c| c);
        scales.push(AssembledScale {
            scale: k,
            threshold: thresholds[t],
            finite_points: finite_end,
            set_count: families.iter().map(Vec::len).sum(),
            families,
            min_distance: report.family_min_distance,
            violations,
            covers_complement,
            subtraction_identity,
        });
    }
    Ok(FamilyAssembly {
        family_count: n_families,
        thresholds: thresholds.to_vec(),
        scales,
    })
}
