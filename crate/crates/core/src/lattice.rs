//! Hand-built colorings of cycles and square tori.
//!
//! On `Z / m` with generator `±1`, alternating arcs give two families. On
//! `Z^2 / m` with the standard generators, a brick wall with odd rows shifted
//! by half a brick and brick `j` of row `r` colored `(2j + (r mod 2)) mod 3`
//! gives three. Both are checked by the caller; the constructions only pick
//! sizes.

use crate::cayley::CayleyGraph;
use crate::group::{Coord, GroupKind, GroupSpec};
use crate::metric::Dist;

/// Split `total` into `parts` near-equal lengths, longer ones first.
fn split(total: usize, parts: usize) -> Vec<usize> {
    let (q, r) = (total / parts, total % parts);
    (0..parts).map(|i| q + usize::from(i < r)).collect()
}

/// Index of the block containing `x` for block lengths `lens`.
fn block_of(x: usize, bounds: &[usize]) -> usize {
    bounds.partition_point(|&b| b <= x) - 1
}

fn prefix(lens: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(lens.len());
    let mut acc = 0;
    for &l in lens {
        out.push(acc);
        acc += l;
    }
    out
}

/// Two-family coloring of the cycle `C_m` by an even number of arcs, each of
/// length between `R - 1` and `S + 1`. `None` when no arc count fits.
pub fn cycle_arcs(m: usize, r: Dist, s: Dist) -> Option<Vec<usize>> {
    let (r, s) = (r as usize, s as usize);
    let max_len = s + 1;
    let mut q = m.div_ceil(max_len).max(2);
    q += q % 2;
    if q > m || m / q < r.saturating_sub(1).max(1) {
        return None;
    }
    let bounds = prefix(&split(m, q));
    Some((0..m).map(|x| block_of(x, &bounds) % 2).collect())
}

/// Three-family brick colorings of the `m x m` torus, indexed by vertex id
/// `x + m y`: up to four brick shapes whose gaps meet the separation
/// estimates, smallest bricks first.
pub fn torus_bricks(m: usize, r: Dist, s: Dist) -> Vec<Vec<usize>> {
    let r = r as usize;
    let mut shapes = Vec::new();
    for rows in (2..=m).step_by(2) {
        let heights = split(m, rows);
        let h_min = *heights.last().unwrap();
        let h_max = heights[0];
        if h_min + 1 < r {
            break;
        }
        for cols in (3..=m).step_by(3) {
            let widths = split(m, cols);
            let w_min = *widths.last().unwrap();
            let w_max = widths[0];
            let shift = w_min / 2;
            if shift == 0 || shift + 2 < r || w_min - shift + 2 < r {
                break;
            }
            let diam = (w_max - 1).min(m / 2) + (h_max - 1).min(m / 2);
            if diam <= s as usize {
                shapes.push((diam, rows, cols));
            }
        }
    }
    shapes.sort_unstable();
    shapes
        .into_iter()
        .take(4)
        .map(|(_, rows, cols)| brick_coloring(m, rows, cols))
        .collect()
}

fn brick_coloring(m: usize, rows: usize, cols: usize) -> Vec<usize> {
    let row_bounds = prefix(&split(m, rows));
    let widths = split(m, cols);
    let shift = widths.last().unwrap() / 2;
    let col_bounds = prefix(&widths);
    let mut out = vec![0; m * m];
    for y in 0..m {
        let row = block_of(y, &row_bounds);
        for x in 0..m {
            let xs = if row % 2 == 1 { (x + m - shift) % m } else { x };
            let j = block_of(xs, &col_bounds);
            out[x + m * y] = (2 * j + row % 2) % 3;
        }
    }
    out
}

/// Candidate colorings for a graph with a known layout: cycles and square
/// tori under the standard generators. Empty for everything else.
pub fn structured_colorings<T: Coord>(graph: &CayleyGraph<T>, r: Dist, s: Dist) -> Vec<Vec<usize>> {
    let spec = graph.quotient().spec();
    let m = graph.modulus() as usize;
    let standard =
        |rank: usize| GroupSpec::<T>::free_abelian(rank).is_ok_and(|std| std.generators() == spec.generators());
    match spec.kind() {
        GroupKind::FreeAbelian { rank: 1 } if standard(1) => cycle_arcs(m, r, s).into_iter().collect(),
        GroupKind::FreeAbelian { rank: 2 } if standard(2) => torus_bricks(m, r, s),
        _ => Vec::new(),
    }
}
