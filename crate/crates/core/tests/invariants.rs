//! Cross-validation of the group classifier against the subgroup search:
//! on catalog groups with periodic cohomology, a Z/p x| Z/q witness
//! exists exactly when the period does not divide 4.

use pd3::catalog::construct_catalog_group;
use pd3::group::{classify_group, find_pq_subgroup, CatalogTag, TriState};

fn product(a: CatalogTag, b: CatalogTag) -> CatalogTag {
    CatalogTag::Product(Box::new(a), Box::new(b))
}

#[test]
fn cyclic_groups_have_period_dividing_4() {
    for n in 1..=48u64 {
        let g = construct_catalog_group(&CatalogTag::Cyclic(n), 64).unwrap();
        let p = classify_group(&g);
        assert!(p.is_cyclic);
        assert_eq!(p.period_divides_4, TriState::Yes, "cyclic({n})");
    }
}

#[test]
fn dihedral_involution_census() {
    let mut m = 3usize;
    while m <= 15 {
        let g = construct_catalog_group(&CatalogTag::Dihedral(2 * m as u64), 64).unwrap();
        let p = classify_group(&g);
        assert!(p.is_dihedral_odd);
        assert!(p.unique_central_involution.is_none(), "D_{} has no central involution", 2 * m);
        assert_eq!(g.involutions().len(), m, "D_{} has m involutions", 2 * m);
        assert_eq!(p.involution_classes, 1);
        m += 2;
    }
}

#[test]
fn pq_witness_iff_period_exceeds_4() {
    let sample: Vec<CatalogTag> = vec![
        CatalogTag::Cyclic(5),
        CatalogTag::Cyclic(12),
        CatalogTag::Dihedral(6),
        CatalogTag::Dihedral(14),
        CatalogTag::Quaternionic(3),
        CatalogTag::Quaternionic(4),
        CatalogTag::Metacyclic { m: 3, n: 4, r: 2 },  // r = -1 mod 3: period 4
        CatalogTag::Metacyclic { m: 7, n: 3, r: 2 },  // faithful odd action: period > 4
        CatalogTag::Metacyclic { m: 5, n: 4, r: 2 },  // primitive 4th root: period > 4
        CatalogTag::Metacyclic { m: 11, n: 5, r: 3 }, // period > 4
        CatalogTag::BinaryTetrahedral(1),
        CatalogTag::BinaryOctahedral(1),
        CatalogTag::Tl2(3),
        CatalogTag::Sl2(5),
        product(CatalogTag::Quaternionic(3), CatalogTag::Cyclic(3)),
        product(CatalogTag::Quaternionic(3), CatalogTag::Cyclic(9)),
        product(CatalogTag::Dihedral(6), CatalogTag::Cyclic(5)),
        product(CatalogTag::Metacyclic { m: 7, n: 3, r: 2 }, CatalogTag::Cyclic(2)),
    ];
    for tag in sample {
        let g = construct_catalog_group(&tag, 1024).unwrap();
        let profile = classify_group(&g);
        if !profile.has_periodic_cohomology {
            continue;
        }
        let witness = find_pq_subgroup(&g);
        match profile.period_divides_4 {
            TriState::Yes => {
                assert!(witness.is_none(), "{tag}: period divides 4 but a witness was found");
            }
            TriState::No | TriState::Unknown => {
                let w = witness.unwrap_or_else(|| panic!("{tag}: period exceeds 4 but no witness"));
                assert!(w.p % 2 == 1 && w.p >= 3);
                assert!(w.q == 4 || w.q % 2 == 1);
                // the witness certifies the action is by a primitive root
                let mut rk = w.r % w.p;
                let mut ord = 1;
                while rk != 1 {
                    rk = rk * w.r % w.p;
                    ord += 1;
                }
                assert_eq!(ord, w.q, "{tag}: action order mismatch");
            }
        }
    }
}

#[test]
fn non_coprime_products_are_rejected_by_the_classifier() {
    // constructed fine, but the classifier must not grant period 4
    let g = construct_catalog_group(
        &product(CatalogTag::Quaternionic(3), CatalogTag::Cyclic(2)),
        64,
    )
    .unwrap();
    let p = classify_group(&g);
    assert_eq!(p.period_divides_4, TriState::No);
    assert!(!p.has_periodic_cohomology);
}
