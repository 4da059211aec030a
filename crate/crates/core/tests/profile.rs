//! Dimension profiles of small box spaces.

use boxdim::boxspace::BoxSpace;
use boxdim::cayley::DEFAULT_VERTEX_CAP;
use boxdim::dimension::{rs_dim_exact, rs_dim_exhaustive};
use boxdim::group::{Filtration, GroupSpec};
use boxdim::growth::GrowthBound;
use boxdim::profile::{asdim_profile, ProfileMode, ProfileOptions, RowStatus};
use boxdim::Rational;

fn powers_box(spec: GroupSpec<i64>, t: u32) -> BoxSpace<i64> {
    let f = Filtration::powers(spec, 2, t).unwrap();
    BoxSpace::build(&f, t as usize, DEFAULT_VERTEX_CAP).unwrap()
}

fn greedy(s_cap: u32) -> ProfileOptions {
    let mut o = ProfileOptions::new(ProfileMode::Greedy, s_cap);
    o.timing = false;
    o
}

#[test]
fn z_and_z2_reach_their_hirsch_length() {
    for (rank, t) in [(1usize, 10u32), (2, 8)] {
        let b = powers_box(GroupSpec::free_abelian(rank).unwrap(), t);
        let rows = asdim_profile(&b, &[2, 4, 8], &greedy(64)).unwrap();
        for row in rows {
            assert_eq!(row.status, RowStatus::Ok);
            assert_eq!(row.n_achieved, Some(rank), "rank {rank} R {}", row.r);
            assert_eq!(row.hirsch_length, rank);
            assert!(row.s_achieved.unwrap() <= 64);
            assert_eq!(row.wall_time_ms, 0);
        }
    }
}

#[test]
fn heisenberg_greedy_and_exact() {
    let b = powers_box(GroupSpec::unitriangular(3).unwrap(), 3);
    let rows = asdim_profile(&b, &[2], &greedy(64)).unwrap();
    assert!(rows[0].n_achieved.unwrap() <= 6);
    assert_eq!(rows[0].hirsch_length, 3);

    // Z/2 quotient: 8 vertices, small enough for the exhaustive oracle
    let g = b.component(0);
    assert_eq!(g.order(), 8);
    for s in 0..=4 {
        let e = rs_dim_exact(g, 2, s, 8).unwrap();
        assert_eq!(e.n, rs_dim_exhaustive(g, 2, s).unwrap().n, "S {s}");
    }
    // UT(3) mod 2 is dihedral of order 8 and its Cayley graph an 8-cycle
    assert_eq!(rs_dim_exact(g, 2, 0, 8).unwrap().n, 1);
}

#[test]
fn doubling_rows_report_caps() {
    let b = powers_box(GroupSpec::free_abelian(1).unwrap(), 6);
    let mut o = ProfileOptions::new(ProfileMode::Doubling, 1);
    o.timing = false;
    o.growth = Some(GrowthBound::new(Rational::from_integer(3.into()), 1).unwrap());
    let rows = asdim_profile(&b, &[2], &o).unwrap();
    assert_eq!(rows[0].status, RowStatus::SCapExhausted);
    assert_eq!(rows[0].n_achieved, None);
    o.s_cap = 64;
    let rows = asdim_profile(&b, &[2], &o).unwrap();
    assert_eq!(rows[0].status, RowStatus::Ok);
    assert!(rows[0].n_achieved.unwrap() <= 4);
}
