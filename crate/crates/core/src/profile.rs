//! Scale profiles: for each `R`, the least number of families found with
//! some `S <= S_cap` uniformly over the components of a box space.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxspace::BoxSpace;
use crate::cayley::CayleyGraph;
use crate::cover::{color_families, verify_cover};
use crate::dimension::{bfs_order, rs_dim_exact_with, rs_dim_greedy, witness_from_coloring, ExactOptions};
use crate::doubling::{doubling_cover, SmallComponents};
use crate::error::{Error, Result};
use crate::group::Coord;
use crate::growth::GrowthBound;
use crate::lattice::structured_colorings;
use crate::metric::Dist;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMode {
    Exact,
    Greedy,
    Doubling,
}

impl fmt::Display for ProfileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileMode::Exact => "exact",
            ProfileMode::Greedy => "greedy",
            ProfileMode::Doubling => "doubling",
        })
    }
}

impl FromStr for ProfileMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ProfileMode::Exact),
            "greedy" => Ok(ProfileMode::Greedy),
            "doubling" => Ok(ProfileMode::Doubling),
            other => Err(Error::InvalidParameter(format!("unknown profile mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfileOptions {
    pub mode: ProfileMode,
    pub s_cap: Dist,
    /// Largest `n` tried by the exact solver.
    pub n_cap: usize,
    /// Required in doubling mode.
    pub growth: Option<GrowthBound>,
    pub policy: SmallComponents,
    pub exact: ExactOptions,
    /// Record wall time; when off the column is zero.
    pub timing: bool,
}

impl ProfileOptions {
    pub fn new(mode: ProfileMode, s_cap: Dist) -> Self {
        Self {
            mode,
            s_cap,
            n_cap: 8,
            growth: None,
            policy: SmallComponents::Merged,
            exact: ExactOptions::default(),
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    SCapExhausted,
    NCapExceeded,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::SCapExhausted => "s_cap_exhausted",
            RowStatus::NCapExceeded => "n_cap_exceeded",
        })
    }
}

/// The witness chosen for one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentWitness {
    pub component: usize,
    pub n: usize,
    /// Largest set diameter of the witness.
    pub s: Dist,
    pub source: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub r: Dist,
    pub s_achieved: Option<Dist>,
    pub n_achieved: Option<usize>,
    pub mode: ProfileMode,
    pub component_count: usize,
    pub hirsch_length: usize,
    pub wall_time_ms: u64,
    pub status: RowStatus,
    pub components: Vec<ComponentWitness>,
}

/// Greedy `S` values: powers of two up to the cap, and the cap.
fn greedy_scales(s_cap: Dist) -> Vec<Dist> {
    let mut out: Vec<Dist> = (1..32).map(|k| 1 << k).take_while(|&s| s <= s_cap).collect();
    if out.last() != Some(&s_cap) && s_cap >= 1 {
        out.push(s_cap);
    }
    out
}

type Witness = (Dist, usize, &'static str);

/// Verified witnesses `(diameter, n, source)` for one component.
fn greedy_witnesses<T: Coord>(g: &CayleyGraph<T>, r: Dist, s_cap: Dist) -> Result<Vec<Witness>> {
    let diam = g.diameter();
    if diam <= s_cap && r >= 1 {
        // one connected set; nothing with fewer families exists
        return Ok(vec![(diam, 0, "whole")]);
    }
    let mut out = Vec::new();
    for col in structured_colorings(g, r, s_cap) {
        if let Ok(w) = witness_from_coloring(g, col, r, s_cap) {
            out.push((w.diameter, w.n, "lattice"));
        }
    }
    for s in greedy_scales(s_cap) {
        let w = rs_dim_greedy(g, r, s)?;
        out.push((w.diameter, w.n, "greedy"));
    }
    if diam <= s_cap {
        out.push((diam, 0, "whole"));
    }
    Ok(out)
}

/// Least uniform `n` over the components and the least `S` attaining it.
fn combine(per_component: &[Vec<Witness>]) -> Option<(usize, Dist, Vec<ComponentWitness>)> {
    let mut scales: Vec<Dist> = per_component.iter().flatten().map(|w| w.0).collect();
    scales.sort_unstable();
    scales.dedup();
    let mut best: Option<(usize, Dist)> = None;
    for &s in &scales {
        let n = per_component
            .iter()
            .map(|ws| ws.iter().filter(|w| w.0 <= s).map(|w| w.1).min())
            .collect::<Option<Vec<_>>>()
            .and_then(|v| v.into_iter().max());
        if let Some(n) = n {
            if best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, s));
            }
        }
    }
    let (n, s) = best?;
    let chosen = per_component
        .iter()
        .enumerate()
        .map(|(c, ws)| {
            let w = ws
                .iter()
                .filter(|w| w.0 <= s)
                .min_by_key(|w| (w.1, w.0))
                .expect("every component has a witness at the chosen scale");
            ComponentWitness {
                component: c,
                n: w.1,
                s: w.0,
                source: w.2,
            }
        })
        .collect();
    Some((n, s, chosen))
}

fn exact_component<T: Coord>(
    g: &CayleyGraph<T>,
    r: Dist,
    s: Dist,
    n_cap: usize,
    opts: &ExactOptions,
) -> Result<Option<(usize, Dist)>> {
    match rs_dim_exact_with(g, r, s, n_cap, opts) {
        Ok(res) => Ok(Some((res.n, res.diameter))),
        Err(Error::ExceedsCap { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

type RowOutcome = (Option<(usize, Dist)>, Vec<ComponentWitness>, RowStatus);

fn exact_row<T: Coord>(box_space: &BoxSpace<T>, r: Dist, options: &ProfileOptions) -> Result<RowOutcome> {
    let opts_for = |g: &CayleyGraph<T>| ExactOptions {
        order: Some(bfs_order(g)),
        ..options.exact.clone()
    };
    let at_cap = box_space
        .components()
        .par_iter()
        .map(|g| exact_component(g, r, options.s_cap, options.n_cap, &opts_for(g)))
        .collect::<Result<Vec<_>>>()?;
    let Some(ns) = at_cap.iter().map(|x| x.map(|(n, _)| n)).collect::<Option<Vec<_>>>() else {
        return Ok((None, Vec::new(), RowStatus::NCapExceeded));
    };
    let target = ns.into_iter().max().unwrap_or(0);
    // smallest S per component reaching the uniform n; n is non-increasing in S
    let chosen = box_space
        .components()
        .par_iter()
        .enumerate()
        .map(|(c, g)| -> Result<ComponentWitness> {
            let opts = opts_for(g);
            let (mut lo, mut hi) = (0, options.s_cap);
            let mut found = exact_component(g, r, hi, target, &opts)?.expect("feasible at the cap");
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                match exact_component(g, r, mid, target, &opts)? {
                    Some(w) => {
                        found = w;
                        hi = mid;
                    }
                    None => lo = mid + 1,
                }
            }
            Ok(ComponentWitness {
                component: c,
                n: found.0,
                s: found.1,
                source: "exact",
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = chosen.iter().map(|w| w.s).max().unwrap_or(0);
    Ok((Some((target, s)), chosen, RowStatus::Ok))
}

/// One row per `R`.
pub fn asdim_profile<T: Coord>(
    box_space: &BoxSpace<T>,
    r_list: &[Dist],
    options: &ProfileOptions,
) -> Result<Vec<ProfileRow>> {
    if r_list.contains(&0) {
        return Err(Error::InvalidParameter("scales R must be positive".into()));
    }
    if options.mode == ProfileMode::Doubling && options.growth.is_none() {
        return Err(Error::InvalidParameter("doubling mode needs a growth bound".into()));
    }
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let start = Instant::now();
        let (found, components, status) = match options.mode {
            ProfileMode::Greedy => {
                let per = box_space
                    .components()
                    .par_iter()
                    .map(|g| greedy_witnesses(g, r, options.s_cap))
                    .collect::<Result<Vec<_>>>()?;
                match combine(&per) {
                    Some((n, s, chosen)) => (Some((n, s)), chosen, RowStatus::Ok),
                    None => (None, Vec::new(), RowStatus::SCapExhausted),
                }
            }
            ProfileMode::Exact => exact_row(box_space, r, options)?,
            ProfileMode::Doubling => {
                let growth = options.growth.as_ref().expect("checked above");
                let out = doubling_cover(box_space, r, growth, options.policy)?;
                out.certify()?;
                let colored = color_families(box_space, &out.cover, r);
                let rep = verify_cover(box_space, &colored, r, Dist::MAX);
                if !rep.is_valid() {
                    return Err(Error::Verification(format!(
                        "recolored cover fails: {:?}",
                        rep.violations.first()
                    )));
                }
                let n = colored.family_count().saturating_sub(1);
                if rep.max_set_diameter <= options.s_cap {
                    (Some((n, rep.max_set_diameter)), Vec::new(), RowStatus::Ok)
                } else {
                    (None, Vec::new(), RowStatus::SCapExhausted)
                }
            }
        };
        let wall_time_ms = if options.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        rows.push(ProfileRow {
            r,
            s_achieved: found.map(|f| f.1),
            n_achieved: found.map(|f| f.0),
            mode: options.mode,
            component_count: box_space.component_count(),
            hirsch_length: box_space.spec().hirsch_length(),
            wall_time_ms,
            status,
            components,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::DEFAULT_VERTEX_CAP;
    use crate::group::{Filtration, GroupSpec};

    fn z_box(t: u32) -> BoxSpace<i64> {
        let f = Filtration::powers(GroupSpec::<i64>::free_abelian(1).unwrap(), 2, t).unwrap();
        BoxSpace::build(&f, t as usize, DEFAULT_VERTEX_CAP).unwrap()
    }

    #[test]
    fn z_greedy_profile() {
        let b = z_box(10);
        let mut opts = ProfileOptions::new(ProfileMode::Greedy, 64);
        opts.timing = false;
        let rows = asdim_profile(&b, &[2, 4, 8], &opts).unwrap();
        for row in &rows {
            assert_eq!(row.n_achieved, Some(1), "{row:?}");
            assert_eq!(row.hirsch_length, 1);
            assert!(row.s_achieved.unwrap() <= 64);
        }
    }

    #[test]
    fn exact_profile_small_box() {
        let b = z_box(5);
        let mut opts = ProfileOptions::new(ProfileMode::Exact, 6);
        opts.timing = false;
        let rows = asdim_profile(&b, &[2], &opts).unwrap();
        // C_32 needs two families at S = 6; C_2 .. C_8 fit in one set
        assert_eq!(rows[0].n_achieved, Some(1));
        assert_eq!(rows[0].components[0].n, 1);
    }

    #[test]
    fn doubling_needs_growth() {
        let b = z_box(3);
        assert!(asdim_profile(&b, &[2], &ProfileOptions::new(ProfileMode::Doubling, 64)).is_err());
        assert!(asdim_profile(&b, &[0], &ProfileOptions::new(ProfileMode::Greedy, 64)).is_err());
    }

    #[test]
    fn singleton_witness_at_tiny_cap() {
        // S = 0 is always reachable with singletons, at the price of more families
        let b = z_box(6);
        let mut opts = ProfileOptions::new(ProfileMode::Greedy, 1);
        opts.timing = false;
        let rows = asdim_profile(&b, &[4], &opts).unwrap();
        assert_eq!(rows[0].status, RowStatus::Ok);
        assert_eq!(rows[0].n_achieved, Some(3));
        assert_eq!(rows[0].s_achieved, Some(1));
    }
}
