use orchard_core::arrangement::melchior_audit;
use orchard_core::configurations::{apply_transform, Configuration};
use orchard_core::geometry::{ProjPoint, ProjTransform};
use orchard_core::incidence::{check_identities, spectrum};
use orchard_core::Error;
use proptest::prelude::*;

fn config(pts: &[(i64, i64)]) -> Option<Configuration> {
    let mut v: Vec<(i64, i64)> = pts.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() < 3 {
        return None;
    }
    Configuration::new(v.iter().map(|&(x, y)| ProjPoint::ints(x, y, 1).unwrap()).collect()).ok()
}

fn points() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, -5i64..=5), 3..25)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_count_holds(pts in points()) {
        let Some(c) = config(&pts) else { return Ok(()) };
        let s = spectrum(&c).unwrap();
        let r = check_identities(&s);
        prop_assert!(r.pass);
        prop_assert_eq!(r.residual, 0);
    }

    #[test]
    fn spectrum_ignores_order(pts in points(), rot in 0usize..25) {
        let Some(c) = config(&pts) else { return Ok(()) };
        let mut shuffled = c.points().to_vec();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let d = Configuration::new(shuffled).unwrap();
        prop_assert_eq!(spectrum(&c).unwrap(), spectrum(&d).unwrap());
    }

    #[test]
    fn spectrum_is_projectively_invariant(pts in points(), m in prop::array::uniform9(-3i64..=3)) {
        let Some(c) = config(&pts) else { return Ok(()) };
        let Ok(t) = ProjTransform::from_ints([[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]]) else { return Ok(()) };
        let moved = apply_transform(&t, &c).unwrap();
        prop_assert!(!moved.field_escape);
        prop_assert_eq!(spectrum(&c).unwrap(), spectrum(&moved.config).unwrap());
    }

    #[test]
    fn euler_and_melchior_on_random_configurations(pts in points()) {
        let Some(c) = config(&pts) else { return Ok(()) };
        match melchior_audit(&c) {
            Ok(s) => {
                prop_assert!(s.identities_hold(), "{:?}", s);
                prop_assert!(s.bad_edge_bound_holds);
                prop_assert!(s.melchior_inequality_holds);
            }
            Err(Error::DegeneratePencil) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
