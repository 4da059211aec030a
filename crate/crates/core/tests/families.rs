//! Assembling per-scale covers into families over the whole box space.

use boxdim::boxspace::{BoxSpace, IsometryProfile, ISOMETRY_BUDGET};
use boxdim::cayley::DEFAULT_VERTEX_CAP;
use boxdim::cover::{color_families, Cover, Violation};
use boxdim::doubling::{doubling_cover, SmallComponents};
use boxdim::families::{assemble_box_families, ScaleCover};
use boxdim::group::{Filtration, GroupSpec};
use boxdim::growth::GrowthBound;
use boxdim::{Dist, Error, Rational};

fn z_box(t: u32) -> BoxSpace<i64> {
    let f = Filtration::powers(GroupSpec::free_abelian(1).unwrap(), 2, t).unwrap();
    BoxSpace::build(&f, t as usize, DEFAULT_VERTEX_CAP).unwrap()
}

/// Certified covers at each scale, recolored into `k`-disjoint families,
/// with their largest set diameters.
fn scale_covers(b: &BoxSpace<i64>, scales: &[Dist], policy: SmallComponents) -> (Vec<ScaleCover>, Vec<Dist>) {
    let growth = GrowthBound::new(Rational::from_integer(3.into()), 1).unwrap();
    let mut covers = Vec::new();
    let mut diameters = Vec::new();
    for &k in scales {
        let c = doubling_cover(b, k, &growth, policy).unwrap();
        if policy == SmallComponents::Merged {
            c.certify().unwrap();
        }
        diameters.push(c.report.max_set_diameter);
        covers.push(ScaleCover {
            scale: k,
            cover: color_families(b, &c.cover, k),
        });
    }
    (covers, diameters)
}

fn thresholds(b: &BoxSpace<i64>, scales: &[Dist], diameters: &[Dist]) -> Vec<usize> {
    let prof = IsometryProfile::compute(b, ISOMETRY_BUDGET).unwrap();
    let need: Vec<u32> = scales.iter().zip(diameters).map(|(&k, &s)| k.max(s)).collect();
    prof.thresholds(&need)
}

#[test]
fn z_assembly_passes() {
    let b = z_box(10);
    let scales = [1, 2, 3];
    let (covers, diams) = scale_covers(&b, &scales, SmallComponents::Merged);
    let th = thresholds(&b, &scales, &diams);
    assert_eq!(th, vec![3, 4, 4]);
    let asm = assemble_box_families(&b, &covers, &th).unwrap();
    assert!(asm.is_valid(), "{:?}", asm.first_violation());
    for s in &asm.scales {
        assert!(s.subtraction_identity);
        assert!(s.covers_complement);
        assert!(s.min_distance.iter().all(Option::is_none));
    }
    // F_k is the union of the components below i_k
    let finite: Vec<usize> = asm.scales.iter().map(|s| s.finite_points).collect();
    assert_eq!(finite, vec![2 + 4 + 8, 2 + 4 + 8 + 16, 2 + 4 + 8 + 16]);
}

#[test]
fn lowered_threshold_straddles() {
    let b = z_box(8);
    let scales = [1, 2];
    let (covers, _) = scale_covers(&b, &scales, SmallComponents::Merged);
    // i_2 = 0 pulls in the merged small part of the scale-2 cover
    let err = assemble_box_families(&b, &covers, &[0, 0]).unwrap_err();
    match err {
        Error::Precondition(msg) => assert!(msg.contains("straddles components 0 and 1"), "{msg}"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn lowered_threshold_breaks_disjointness() {
    let b = z_box(8);
    let scales = [4, 5];
    let (mut covers, _) = scale_covers(&b, &scales, SmallComponents::Separate);
    // Z/2 comes from the scale-4 cover and Z/4 from the scale-5 cover; they
    // are 1 + 2 = 3 apart. Put them in the same family.
    let family_of = |cover: &Cover, comp_start: usize| {
        cover
            .sets()
            .find(|(_, _, s)| s.contains(comp_start))
            .map(|(f, _, _)| f)
            .unwrap()
    };
    let f4 = family_of(&covers[0].cover, b.range(0).start);
    let f5 = family_of(&covers[1].cover, b.range(1).start);
    if f4 != f5 {
        covers[1].cover.families.swap(f4, f5);
    }
    let asm = assemble_box_families(&b, &covers, &[0, 1]).unwrap();
    assert!(!asm.is_valid());
    let (scale, _) = asm.first_violation().unwrap();
    assert_eq!(scale, 4);
    let close = asm.scales[0]
        .violations
        .iter()
        .find_map(|v| match v {
            Violation::ClosePair { distance, .. } => Some(*distance),
            _ => None,
        })
        .unwrap();
    assert_eq!(close, 3);
}

#[test]
fn bad_inputs() {
    let b = z_box(4);
    let (covers, _) = scale_covers(&b, &[1, 2], SmallComponents::Merged);
    assert!(matches!(
        assemble_box_families(&b, &covers, &[1]),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        assemble_box_families(&b, &covers, &[2, 1]),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        assemble_box_families(&b, &covers, &[1, 9]),
        Err(Error::InvalidParameter(_))
    ));
    let rev = vec![covers[1].clone(), covers[0].clone()];
    assert!(matches!(
        assemble_box_families(&b, &rev, &[1, 2]),
        Err(Error::InvalidParameter(_))
    ));
}
