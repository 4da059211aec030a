//! Growth of balls in the infinite group and polynomial growth bounds.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{Coord, GroupElement, GroupSpec};
use crate::Rational;

/// Default cap on elements visited by infinite-group BFS.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// `|B_G(e, r)|` for `r = 0..=r_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthProfile {
    pub group: String,
    pub sizes: Vec<usize>,
}

impl GrowthProfile {
    pub fn r_max(&self) -> u32 {
        (self.sizes.len() - 1) as u32
    }

    /// Least-squares slope of `log |B(r)|` against `log r` over the top half
    /// of the profiled radii.
    pub fn log_log_slope(&self) -> Option<f64> {
        let r_max = self.r_max() as usize;
        let lo = (r_max / 2).max(1);
        if r_max < lo + 1 {
            return None;
        }
        let pts: Vec<(f64, f64)> = (lo..=r_max)
            .map(|r| ((r as f64).ln(), (self.sizes[r] as f64).ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(sxy / sxx)
    }
}

/// Breadth-first ball sizes in the (infinite) group itself.
pub fn growth_profile<T: Coord>(spec: &GroupSpec<T>, r_max: u32, state_cap: usize) -> Result<GrowthProfile> {
    let gens = spec.symmetric_generators();
    let mut seen: HashSet<GroupElement<T>> = HashSet::new();
    let e = spec.identity();
    seen.insert(e.clone());
    let mut frontier = vec![e];
    let mut sizes = vec![1];
    for _ in 0..r_max {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = spec.multiply(g, s)?;
                if !seen.contains(&h) {
                    seen.insert(h.clone());
                    next.push(h);
                    if seen.len() > state_cap {
                        return Err(Error::ResourceCap {
                            what: "growth BFS states",
                            limit: state_cap,
                        });
                    }
                }
            }
        }
        frontier = next;
        sizes.push(seen.len());
    }
    Ok(GrowthProfile {
        group: spec.kind().to_string(),
        sizes,
    })
}

/// A certificate `|B(e, r)| <= C r^d` for `1 <= r <= validated_up_to`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthBound {
    pub c: Rational,
    pub degree: u32,
    pub validated_up_to: u32,
    /// Log-log slope of the profile the bound was fitted to, if any.
    pub slope: Option<f64>,
}

impl GrowthBound {
    /// An unvalidated bound from user-supplied constants.
    pub fn new(c: Rational, degree: u32) -> Result<Self> {
        if c <= Rational::zero() {
            return Err(Error::InvalidParameter("growth constant C must be positive".into()));
        }
        Ok(Self {
            c,
            degree,
            validated_up_to: 0,
            slope: None,
        })
    }

    /// `C r^d` exactly.
    pub fn bound_at(&self, r: u64) -> Rational {
        let rd = BigInt::from(r).pow(self.degree);
        &self.c * Rational::from_integer(rd)
    }

    pub fn admits(&self, r: u64, size: usize) -> bool {
        Rational::from_integer(BigInt::from(size)) <= self.bound_at(r)
    }

    /// Check every `r >= 1` of a profile; the first violation is an error.
    pub fn validate(&mut self, profile: &GrowthProfile) -> Result<()> {
        for (r, &size) in profile.sizes.iter().enumerate().skip(1) {
            if !self.admits(r as u64, size) {
                return Err(Error::GrowthViolation {
                    radius: r as u32,
                    size,
                    bound: self.bound_at(r as u64).to_string(),
                });
            }
        }
        self.validated_up_to = self.validated_up_to.max(profile.r_max());
        Ok(())
    }

    /// The tight constant for a fixed degree: `C = max_{r >= 1} |B(r)| / r^d`.
    pub fn for_degree(profile: &GrowthProfile, degree: u32) -> Result<Self> {
        if profile.sizes.len() < 2 {
            return Err(Error::InvalidParameter("profile needs r_max >= 1".into()));
        }
        let mut c = Rational::zero();
        for (r, &size) in profile.sizes.iter().enumerate().skip(1) {
            let ratio = Rational::new(BigInt::from(size), BigInt::from(r).pow(degree));
            if ratio > c {
                c = ratio;
            }
        }
        debug_assert!(c >= Rational::one());
        Ok(Self {
            c,
            degree,
            validated_up_to: profile.r_max(),
            slope: profile.log_log_slope(),
        })
    }
}

/// Slack allowed between the measured log-log slope and the chosen degree.
pub const SLOPE_TOLERANCE: f64 = 0.25;

/// Pick the smallest candidate degree `d` whose measured slope is at most
/// `d + 0.25` and return the tight constant for it.
pub fn fit_growth(profile: &GrowthProfile, candidates: &[u32]) -> Result<GrowthBound> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no candidate degrees".into()));
    }
    if profile.r_max() < 4 {
        return Err(Error::InvalidParameter(
            "fitting needs a profile with r_max >= 4".into(),
        ));
    }
    let slope = profile.log_log_slope().expect("r_max >= 4");
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    let d = sorted
        .into_iter()
        .find(|&d| slope <= d as f64 + SLOPE_TOLERANCE)
        .ok_or_else(|| Error::InvalidParameter(format!("measured slope {slope:.3} exceeds every candidate degree")))?;
    GrowthBound::for_degree(profile, d)
}
