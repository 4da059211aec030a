//! Transfer of covers of large balls to a coloring of a small ball.
//!
//! Each input colors a ball `B(e, r_t)` of the group so that every color
//! class splits into `<R`-components of diameter at most `S`. Points of
//! `B(e, r_0)` are visited by word length, then coordinates; each takes the
//! color chosen by most inputs that still agree with every earlier choice,
//! and inputs that disagree are dropped. The output is verified before it is
//! returned.

use std::collections::HashSet;

use crate::boxspace::BallSpace;
use crate::cover::{verify_cover, Cover, CoverReport};
use crate::error::{Error, Result};
use crate::group::{Coord, GroupSpec};
use crate::metric::{Dist, MetricSpace};

/// A coloring of the points of a ball, indexed like [`BallSpace::points`].
#[derive(Debug)]
pub struct BallColoring<T: Coord = i64> {
    pub ball: BallSpace<T>,
    pub colors: Vec<usize>,
}

impl<T: Coord> BallColoring<T> {
    pub fn new(ball: BallSpace<T>, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != ball.len() {
            return Err(Error::Shape {
                expected: ball.len(),
                found: colors.len(),
            });
        }
        Ok(Self { ball, colors })
    }

    /// Color every point of `B(e, radius)` with `f(point)`.
    pub fn from_fn(spec: &GroupSpec<T>, radius: u32, cap: usize, f: impl Fn(&[T]) -> usize) -> Result<Self> {
        let ball = BallSpace::new(spec, radius, cap)?;
        let colors = ball.points().iter().map(|g| f(g.coords())).collect();
        Ok(Self { ball, colors })
    }

    /// Verification report of the coloring as an `(R, S)` cover.
    pub fn report(&self, r: Dist, s: Dist) -> Result<CoverReport> {
        let cover = Cover::from_coloring(&self.ball, &self.colors, r)?;
        Ok(verify_cover(&self.ball, &cover, r, s))
    }
}

#[derive(Debug)]
pub struct TransferResult<T: Coord = i64> {
    pub coloring: BallColoring<T>,
    pub report: CoverReport,
    /// Radii of the inputs that agree with the output everywhere.
    pub live_radii: Vec<u32>,
}

/// Transfer the inputs to `B(e, r_0)`.
///
/// Requires at least one input, `r_0 + R + S <= r_1` for the smallest input
/// radius `r_1`, and every input a valid coloring with at most `n + 1`
/// colors.
pub fn diagonal_transfer<T: Coord>(
    spec: &GroupSpec<T>,
    inputs: &[BallColoring<T>],
    n: usize,
    r: Dist,
    s: Dist,
    r0: u32,
    cap: usize,
) -> Result<TransferResult<T>> {
    let Some(r1) = inputs.iter().map(|c| c.ball.radius()).min() else {
        return Err(Error::InsufficientInputRadii("no input covers".into()));
    };
    if r0 as u64 + r as u64 + s as u64 > r1 as u64 {
        return Err(Error::InsufficientInputRadii(format!(
            "r_0 + R + S = {} exceeds the smallest input radius {r1}",
            r0 as u64 + r as u64 + s as u64
        )));
    }
    let mut radii = HashSet::new();
    for input in inputs {
        if input.ball.spec().kind() != spec.kind() || input.ball.spec().generators() != spec.generators() {
            return Err(Error::Precondition("input ball of a different group".into()));
        }
        if !radii.insert(input.ball.radius()) {
            return Err(Error::Precondition(format!(
                "input radius {} repeated",
                input.ball.radius()
            )));
        }
        if let Some(&c) = input.colors.iter().find(|&&c| c > n) {
            return Err(Error::Precondition(format!(
                "input of radius {} uses color {c} > n = {n}",
                input.ball.radius()
            )));
        }
        let rep = input.report(r, s)?;
        if !rep.is_valid() {
            return Err(Error::Precondition(format!(
                "input of radius {} is not an (R,S) cover: {:?}",
                input.ball.radius(),
                rep.violations.first()
            )));
        }
    }

    let target = BallSpace::new(spec, r0, cap)?;
    let mut live: Vec<usize> = (0..inputs.len()).collect();
    let mut colors = Vec::with_capacity(target.len());
    let mut votes = vec![0usize; n + 1];
    for g in target.points() {
        votes.iter_mut().for_each(|v| *v = 0);
        let picks: Vec<usize> = live
            .iter()
            .map(|&t| {
                let idx = inputs[t]
                    .ball
                    .index_of(g)
                    .expect("target ball lies inside every input ball");
                inputs[t].colors[idx]
            })
            .collect();
        for &c in &picks {
            votes[c] += 1;
        }
        let chosen = (0..=n)
            .max_by_key(|&c| (votes[c], std::cmp::Reverse(c)))
            .expect("n + 1 >= 1 colors");
        live = live
            .into_iter()
            .zip(&picks)
            .filter(|&(_, &c)| c == chosen)
            .map(|(t, _)| t)
            .collect();
        if live.is_empty() {
            return Err(Error::InsufficientInputRadii("every input disagreed".into()));
        }
        colors.push(chosen);
    }

    let coloring = BallColoring { ball: target, colors };
    let report = coloring.report(r, s)?;
    if !report.is_valid() {
        return Err(Error::InsufficientInputRadii(format!(
            "transferred coloring failed verification: {:?}",
            report.violations.first()
        )));
    }
    let mut live_radii: Vec<u32> = live.iter().map(|&t| inputs[t].ball.radius()).collect();
    live_radii.sort_unstable();
    Ok(TransferResult {
        coloring,
        report,
        live_radii,
    })
}

/// Alternating blocks of `len` consecutive integers, shifted by `phase`:
/// the standard `(R, len - 1)` two-coloring of `Z` for `R <= len`.
pub fn interval_coloring(x: i64, len: i64, phase: i64) -> usize {
    (x + phase).div_euclid(len).rem_euclid(2) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupSpec<i64> {
        GroupSpec::free_abelian(1).unwrap()
    }

    fn inputs(radii: impl Iterator<Item = u32>) -> Vec<BallColoring<i64>> {
        radii
            .map(|r| BallColoring::from_fn(&z(), r, 1000, |c| interval_coloring(c[0], 4, r as i64)).unwrap())
            .collect()
    }

    #[test]
    fn z_transfer() {
        let out = diagonal_transfer(&z(), &inputs(10..=30), 1, 2, 3, 4, 1000).unwrap();
        assert_eq!(out.coloring.colors.len(), 9);
        assert!(out.report.is_valid());
        assert!(!out.live_radii.is_empty());
    }

    #[test]
    fn single_input_is_restricted() {
        let one = inputs(std::iter::once(17));
        let out = diagonal_transfer(&z(), &one, 1, 2, 3, 4, 1000).unwrap();
        for (g, &c) in out.coloring.ball.points().iter().zip(&out.coloring.colors) {
            assert_eq!(c, interval_coloring(g.coords()[0], 4, 17));
        }
    }

    #[test]
    fn one_color() {
        // with R = 1 every <R-component is a single point
        let inp = vec![BallColoring::from_fn(&z(), 13, 1000, |_| 0).unwrap()];
        let out = diagonal_transfer(&z(), &inp, 0, 1, 8, 4, 1000).unwrap();
        assert!(out.coloring.colors.iter().all(|&c| c == 0));
        let inp = vec![BallColoring::from_fn(&z(), 12, 1000, |_| 0).unwrap()];
        assert!(matches!(
            diagonal_transfer(&z(), &inp, 0, 1, 8, 4, 1000),
            Err(Error::InsufficientInputRadii(_))
        ));
    }

    #[test]
    fn insufficient_inputs() {
        assert!(matches!(
            diagonal_transfer(&z(), &[], 1, 2, 3, 4, 1000),
            Err(Error::InsufficientInputRadii(_))
        ));
        assert!(matches!(
            diagonal_transfer(&z(), &inputs(5..=8), 1, 2, 3, 4, 1000),
            Err(Error::InsufficientInputRadii(_))
        ));
    }

    #[test]
    fn invalid_input_rejected() {
        // one color class spanning the whole ball
        let bad = vec![BallColoring::from_fn(&z(), 12, 1000, |_| 0).unwrap()];
        assert!(matches!(
            diagonal_transfer(&z(), &bad, 1, 2, 3, 4, 1000),
            Err(Error::Precondition(_))
        ));
        let wide = vec![BallColoring::from_fn(&z(), 12, 1000, |c| interval_coloring(c[0], 4, 0) + 1).unwrap()];
        assert!(matches!(
            diagonal_transfer(&z(), &wide, 1, 2, 3, 4, 1000),
            Err(Error::Precondition(_))
        ));
    }
}
