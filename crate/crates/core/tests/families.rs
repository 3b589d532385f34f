use orchard_core::configurations::{generate, Family, FamilySpec};
use orchard_core::incidence::{check_identities, enumerate_lines_with, spectrum, spectrum_with, Strategy};
use orchard_core::scalar::SignPolicy;

fn both(spec: FamilySpec) -> (u64, u64) {
    let c = generate(&spec).unwrap();
    let policy = SignPolicy::geometric();
    let o = enumerate_lines_with(&c, Strategy::Oracle, &policy).unwrap();
    let g = enumerate_lines_with(&c, Strategy::Geometric, &policy).unwrap();
    assert_eq!(o, g, "{:?}", spec);
    g.validate().unwrap();
    let s = spectrum_with(&c, Strategy::Geometric, &policy).unwrap();
    assert!(check_identities(&s).pass);
    (s.ordinary(), s.three_rich())
}

#[test]
fn x12_spectrum() {
    let c = generate(&FamilySpec::new(Family::BoroczkyBase, 6)).unwrap();
    let s = spectrum(&c).unwrap();
    assert_eq!(s.counts(), &[(2, 6), (3, 15), (6, 1)].into());
}

#[test]
fn boroczky_families_match_geometry() {
    for m in 3..=8 {
        assert_eq!(both(FamilySpec::new(Family::BoroczkyBase, m)).0, m as u64);
        assert_eq!(both(FamilySpec::new(Family::BoroczkyPlusOrigin, m)).0, 3 * m as u64);
        assert_eq!(both(FamilySpec::new(Family::BoroczkyMinusPole, m)).0, 3 * m as u64 - 3);
        assert_eq!(both(FamilySpec::new(Family::NearBoroczky, m)).0, 3 * m as u64);
        assert_eq!(both(FamilySpec::new(Family::BoroczkyOddMinusInfinity, m)).0, 3 * m as u64);
    }
}

#[test]
fn sylvester_matches_geometry() {
    for n in 3..=15u64 {
        let (n2, n3) = both(FamilySpec::new(Family::SylvesterAcnodal, n as i64));
        let three = u64::from(n % 3 == 0);
        assert_eq!(n2, n - 1 - 2 * three, "n = {n}");
        assert_eq!(n3, n * (n - 3) / 6 + 1, "n = {n}");
    }
}

#[test]
fn near_counterexamples_match_geometry() {
    for f in [Family::NearCeP1, Family::NearCeP2, Family::NearCeP3, Family::NearCeP4] {
        for r in 1..=4 {
            both(FamilySpec::new(f, r));
        }
    }
}
