use num_rational::BigRational;
use orchard_core::cubic::quasigroup::{self, psi_ell, psi_sigma, Case};
use orchard_core::cubic::singular::{to_curve, GroupElement, Kind};
use orchard_core::cubic::{chasles_check, fit_cubic, WPoint, Weierstrass};
use orchard_core::geometry::{collinear, ProjLine, ProjPoint};
use orchard_core::Error;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    small_rational().prop_filter("nonzero", |x| *x != q(0, 1))
}

fn distinct(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    a != b && b != c && a != c
}

/// collinear ⟺ zero-sum, skipping coincident points.
fn agree(kind: Kind, xs: [GroupElement; 3]) -> Result<(), TestCaseError> {
    let pts: Vec<ProjPoint> = match xs.iter().map(|g| to_curve(kind, g)).collect::<Result<_, _>>() {
        Ok(p) => p,
        Err(Error::SingularPoint) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    if !distinct(&pts[0], &pts[1], &pts[2]) {
        return Ok(());
    }
    let geo = collinear(&pts[0], &pts[1], &pts[2]).unwrap();
    prop_assert_eq!(geo, GroupElement::sum_is_identity(&xs).unwrap(), "{:?}", xs);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn nodal_law(u in nonzero_rational(), v in nonzero_rational(), w in nonzero_rational(), close in any::<bool>()) {
        let w = if close { (&u * &v).recip() } else { w };
        agree(Kind::Nodal, [GroupElement::NonzeroReal(u), GroupElement::NonzeroReal(v), GroupElement::NonzeroReal(w)])?;
    }

    #[test]
    fn cuspidal_law(s in small_rational(), t in small_rational(), u in small_rational(), close in any::<bool>()) {
        let u = if close { -(&s + &t) } else { u };
        agree(Kind::Cuspidal, [GroupElement::Real(s), GroupElement::Real(t), GroupElement::Real(u)])?;
    }

    #[test]
    fn acnodal_law(a in 0i64..12, b in 0i64..12, c in 0i64..12, close in any::<bool>()) {
        let (x, y) = (q(a, 12), q(b, 12));
        let z = if close { -(&x + &y) } else { q(c, 12) };
        agree(Kind::Acnodal, [GroupElement::turns(x), GroupElement::turns(y), GroupElement::turns(z)])?;
    }

    #[test]
    fn conic_line_laws(case in prop::sample::select(vec![Case::Secant, Case::Tangent, Case::Disjoint]), x in nonzero_rational(), y in nonzero_rational(), z in nonzero_rational(), close in any::<bool>()) {
        let z = match (case, close) {
            (_, false) => z,
            (Case::Secant, true) => (&x * &y).recip(),
            (_, true) => -(&x + &y),
        };
        // keep circle parameters at small cyclotomic orders
        let (x, y, z) = match case {
            Case::Disjoint => (x / q(12, 1), y / q(12, 1), z / q(12, 1)),
            _ => (x, y, z),
        };
        let (a, b) = (psi_sigma(case, &x).unwrap(), psi_sigma(case, &y).unwrap());
        let Ok(c) = psi_ell(case, &z) else { return Ok(()) };
        if distinct(&a, &b, &c) {
            prop_assert_eq!(collinear(&a, &b, &c).unwrap(), quasigroup::collinear(case, &x, &y, &z));
        }
    }

    #[test]
    fn elliptic_group_law(i in -3i64..=3, j in -3i64..=3, k in -3i64..=3, l in -2i64..=2) {
        // y² = x³ + 17 has independent points (−2, 3) and (−1, 4)
        let e = Weierstrass::ints(0, 17).unwrap();
        let (g, h) = (WPoint::affine(-2, 3), WPoint::affine(-1, 4));
        let p = e.add(&e.mul(&g, i).unwrap(), &e.mul(&h, l).unwrap()).unwrap();
        let r = e.mul(&g, j).unwrap();
        let s = e.mul(&h, k).unwrap();
        prop_assert!(e.contains(&p));
        prop_assert_eq!(e.add(&p, &WPoint::Infinity).unwrap(), p.clone());
        prop_assert_eq!(e.sub(&p, &p).unwrap(), WPoint::Infinity);
        let left = e.add(&e.add(&p, &r).unwrap(), &s).unwrap();
        let right = e.add(&p, &e.add(&r, &s).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn chasles_closure(c in prop::array::uniform6(prop::array::uniform3(-9i64..=9))) {
        let lines: Vec<ProjLine> = c.iter().filter_map(|l| ProjLine::ints(l[0], l[1], l[2]).ok()).collect();
        prop_assume!(lines.len() == 6);
        let a = [lines[0].clone(), lines[1].clone(), lines[2].clone()];
        let b = [lines[3].clone(), lines[4].clone(), lines[5].clone()];
        match chasles_check(&a, &b) {
            Ok(r) => prop_assert!(r.all_pass),
            Err(Error::DegenerateNinePoints) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn fitted_cubics_contain_their_points(pts in prop::collection::vec((-6i64..=6, -6i64..=6, 1i64..=3), 1..=9)) {
        let mut pts: Vec<ProjPoint> = pts.iter().map(|&(x, y, z)| ProjPoint::ints(x, y, z).unwrap()).collect();
        pts.sort_by_key(|p| format!("{p:?}"));
        pts.dedup();
        let cubics = fit_cubic(&pts).unwrap();
        prop_assert!(cubics.len() >= 10 - pts.len());
        for k in &cubics {
            for p in &pts {
                prop_assert!(k.contains(p).unwrap());
            }
        }
    }
}
