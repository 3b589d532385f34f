//! One PASS/FAIL line per acceptance criterion. Failures are reported, never hidden.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::BigRational;
use orchard_core::arrangement::melchior_audit;
use orchard_core::audits::group::{almost_group_recover, FiniteAbelianGroup};
use orchard_core::audits::sumset::{sumset_bound_check, Mode, PairSet};
use orchard_core::audits::{ngon_chord_multiplicity, Region};
use orchard_core::configurations::{generate, Configuration, Family, FamilySpec};
use orchard_core::cubic::quasigroup::{self, psi_ell, psi_sigma, Case};
use orchard_core::cubic::singular::{to_curve, GroupElement, Kind};
use orchard_core::cubic::{chasles_check, WPoint, Weierstrass};
use orchard_core::geometry::{collinear, ProjLine, ProjPoint};
use orchard_core::incidence::{check_identities, enumerate_lines_with, spectrum, Strategy};
use orchard_core::scalar::SignPolicy;
use orchard_core::structure::{cover_by_cubics, CoverCurve};
use orchard_core::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn gen(f: Family, size: i64) -> Result<Configuration, String> {
    generate(&FamilySpec::new(f, size)).map_err(|e| format!("{f:?} {size}: {e}"))
}

/// Oracle and 256-bit geometric tables agree; returns (N2, N3).
fn oracle_agrees(c: &Configuration) -> Result<(u64, u64), String> {
    let policy = SignPolicy::geometric();
    let o = enumerate_lines_with(c, Strategy::Oracle, &policy).map_err(|e| e.to_string())?;
    let g = enumerate_lines_with(c, Strategy::Geometric, &policy).map_err(|e| e.to_string())?;
    ensure(o == g, || format!("{:?}: oracle and geometric tables differ", c.family()))?;
    let s = spectrum(c).map_err(|e| e.to_string())?;
    Ok((s.ordinary(), s.three_rich()))
}

const BOROCZKY: [Family; 4] =
    [Family::BoroczkyBase, Family::BoroczkyPlusOrigin, Family::BoroczkyMinusPole, Family::BoroczkyOddMinusInfinity];
const NEAR: [Family; 4] = [Family::NearCeP1, Family::NearCeP2, Family::NearCeP3, Family::NearCeP4];

fn boroczky_families() -> Outcome {
    for m in 3..=50i64 {
        for f in BOROCZKY {
            let (n2, _) = oracle_agrees(&gen(f, m)?)?;
            let want = match f {
                Family::BoroczkyBase => m,
                Family::BoroczkyMinusPole => 3 * m - 3,
                _ => 3 * m,
            } as u64;
            ensure(n2 == want, || format!("{f:?} m={m}: N2={n2}, expected {want}"))?;
        }
    }
    Ok(())
}

fn near_boroczky() -> Outcome {
    for m in 3..=50i64 {
        let (n2, _) = oracle_agrees(&gen(Family::NearBoroczky, m)?)?;
        ensure(n2 == 3 * m as u64, || format!("m={m}: N2={n2}"))?;
    }
    Ok(())
}

fn sylvester() -> Outcome {
    for n in 3..=100u64 {
        let (n2, n3) = oracle_agrees(&gen(Family::SylvesterAcnodal, n as i64)?)?;
        let three = u64::from(n % 3 == 0);
        ensure(n2 == n - 1 - 2 * three, || format!("n={n}: N2={n2}"))?;
        ensure(n3 == n * (n - 3) / 6 + 1, || format!("n={n}: N3={n3}"))?;
    }
    Ok(())
}

fn kelly_moser() -> Outcome {
    let s = spectrum(&gen(Family::KellyMoser, 7)?).map_err(|e| e.to_string())?;
    ensure(s.ordinary() == 3 && s.three_rich() == 6, || format!("{:?}", s.counts()))
}

/// Families, near-counterexamples with at most 40 points, and 200 random configurations.
fn corpus() -> Result<Vec<Configuration>, String> {
    let mut out = Vec::new();
    for m in 3..=20 {
        for f in BOROCZKY.into_iter().chain([Family::NearBoroczky]) {
            out.push(gen(f, m)?);
        }
    }
    for n in 3..=40 {
        out.push(gen(Family::SylvesterAcnodal, n)?);
    }
    for f in NEAR {
        for r in 1.. {
            let c = gen(f, r)?;
            if c.len() > 40 {
                break;
            }
            out.push(c);
        }
    }
    out.push(gen(Family::KellyMoser, 7)?);
    for k in 3..=6 {
        out.push(gen(Family::SquareGrid, k)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..200u64 {
        let n = rng.gen_range(3..=60);
        let spec = FamilySpec::new(Family::RandomRational, n).seed(seed).radius(rng.gen_range(4..=30));
        out.push(generate(&spec).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn arrangement_identities(corpus: &[Configuration], bad_edges: bool) -> Outcome {
    let mut checked = 0;
    for c in corpus {
        match melchior_audit(c) {
            Ok(s) if bad_edges => ensure(s.bad_edge_bound_holds, || format!("{:?} n={}: bad={} > {}", c.family(), c.len(), s.bad_edges, s.bad_edge_bound))?,
            Ok(s) => ensure(s.identities_hold(), || format!("{:?} n={}: {s:?}", c.family(), c.len()))?,
            Err(Error::DegeneratePencil) => continue,
            Err(e) => return Err(format!("{:?} n={}: {e}", c.family(), c.len())),
        }
        checked += 1;
    }
    println!("    {checked} arrangements checked");
    Ok(())
}

fn double_count(corpus: &[Configuration]) -> Outcome {
    for c in corpus {
        let r = check_identities(&spectrum(c).map_err(|e| e.to_string())?);
        ensure(r.pass, || format!("{:?} n={}: residual {}", c.family(), c.len(), r.residual))?;
    }
    Ok(())
}

fn chasles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 100 {
        let mut line = || loop {
            let [a, b, c] = [(); 3].map(|_| rng.gen_range(-9i64..=9));
            if let Ok(l) = ProjLine::ints(a, b, c) {
                break l;
            }
        };
        let a = [line(), line(), line()];
        let b = [line(), line(), line()];
        match chasles_check(&a, &b) {
            Ok(r) => ensure(r.all_pass, || format!("{a:?} {b:?}: {:?}", r.flags))?,
            Err(Error::DegenerateNinePoints) => continue,
            Err(e) => return Err(e.to_string()),
        }
        done += 1;
    }
    Ok(())
}

fn cover() -> Outcome {
    let c = gen(Family::SylvesterAcnodal, 30)?;
    let cv = cover_by_cubics(&c).map_err(|e| e.to_string())?;
    ensure(cv.entries.len() == 1 && cv.is_complete(), || format!("Sylvester 30: {}", cv.to_json()))?;

    let c = gen(Family::BoroczkyBase, 8)?;
    let cv = cover_by_cubics(&c).map_err(|e| e.to_string())?;
    let eq: Vec<String> = cv
        .entries
        .iter()
        .filter_map(|e| match &e.curve {
            CoverCurve::Cubic(k) => Some(k.to_string()),
            _ => None,
        })
        .collect();
    ensure(cv.entries.len() == 1 && eq == ["x^2*z + y^2*z - z^3"], || format!("Böröczky 8: {}", cv.to_json()))?;

    let mut specs = Vec::new();
    for m in [4, 6, 8, 11] {
        specs.extend(BOROCZKY.into_iter().chain([Family::NearBoroczky]).map(|f| FamilySpec::new(f, m)));
    }
    specs.extend([12, 20, 31].map(|n| FamilySpec::new(Family::SylvesterAcnodal, n)));
    specs.extend(NEAR.map(|f| FamilySpec::new(f, 2)));
    specs.push(FamilySpec::new(Family::KellyMoser, 7));
    specs.push(FamilySpec::new(Family::SquareGrid, 4));
    for spec in specs {
        let c = generate(&spec).map_err(|e| e.to_string())?;
        let cv = cover_by_cubics(&c).map_err(|e| format!("{spec:?}: {e}"))?;
        ensure(cv.is_complete() && cv.within_budget(), || format!("{spec:?}: {}", cv.to_json()))?;
        for e in &cv.entries {
            for &i in &e.points {
                let p = &c.points()[i];
                let on = match &e.curve {
                    CoverCurve::Cubic(k) => k.contains(p),
                    CoverCurve::Line(l) => l.contains(p),
                }
                .map_err(|e| e.to_string())?;
                ensure(on, || format!("{spec:?}: point {i} not on its curve"))?;
            }
        }
    }
    Ok(())
}

fn rat(rng: &mut ChaCha8Rng, nonzero: bool) -> BigRational {
    loop {
        let x = q(rng.gen_range(-12..=12), rng.gen_range(1..=12));
        if !nonzero || x != q(0, 1) {
            return x;
        }
    }
}

fn distinct3(p: &[ProjPoint]) -> bool {
    p[0] != p[1] && p[1] != p[2] && p[0] != p[2]
}

fn group_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in [Kind::Nodal, Kind::Cuspidal, Kind::Acnodal] {
        let mut done = 0;
        while done < 500 {
            let close = rng.gen_bool(0.5);
            let xs: [GroupElement; 3] = match kind {
                Kind::Nodal => {
                    let (u, v, w) = (rat(&mut rng, true), rat(&mut rng, true), rat(&mut rng, true));
                    let w = if close { (&u * &v).recip() } else { w };
                    [u, v, w].map(GroupElement::NonzeroReal)
                }
                Kind::Cuspidal => {
                    let (s, t, u) = (rat(&mut rng, false), rat(&mut rng, false), rat(&mut rng, false));
                    let u = if close { -(&s + &t) } else { u };
                    [s, t, u].map(GroupElement::Real)
                }
                Kind::Acnodal => {
                    let mut t = || q(rng.gen_range(0..12), 12);
                    let (x, y, z) = (t(), t(), t());
                    let z = if close { -(&x + &y) } else { z };
                    [x, y, z].map(GroupElement::turns)
                }
            };
            let pts: Vec<ProjPoint> = match xs.iter().map(|g| to_curve(kind, g)).collect::<Result<_, _>>() {
                Ok(p) => p,
                Err(Error::SingularPoint) => continue,
                Err(e) => return Err(e.to_string()),
            };
            if !distinct3(&pts) {
                continue;
            }
            let geo = collinear(&pts[0], &pts[1], &pts[2]).map_err(|e| e.to_string())?;
            let alg = GroupElement::sum_is_identity(&xs).map_err(|e| e.to_string())?;
            ensure(geo == alg, || format!("{kind:?} {xs:?}: geometry {geo}, group {alg}"))?;
            done += 1;
        }
    }
    for case in [Case::Secant, Case::Tangent, Case::Disjoint] {
        let mut done = 0;
        while done < 500 {
            let scale = if case == Case::Disjoint { q(1, 12) } else { q(1, 1) };
            let (x, y) = (rat(&mut rng, true) * &scale, rat(&mut rng, true) * &scale);
            let z = match (case, rng.gen_bool(0.5)) {
                (_, false) => rat(&mut rng, true) * &scale,
                (Case::Secant, true) => (&x * &y).recip(),
                (_, true) => -(&x + &y),
            };
            let (Ok(a), Ok(b), Ok(c)) = (psi_sigma(case, &x), psi_sigma(case, &y), psi_ell(case, &z)) else { continue };
            if !distinct3(&[a.clone(), b.clone(), c.clone()]) {
                continue;
            }
            let geo = collinear(&a, &b, &c).map_err(|e| e.to_string())?;
            ensure(geo == quasigroup::collinear(case, &x, &y, &z), || format!("{case:?} {x} {y} {z}"))?;
            done += 1;
        }
    }
    let curves = [(Weierstrass::ints(0, -2), vec![WPoint::affine(3, 5)]), (Weierstrass::ints(0, 17), vec![WPoint::affine(-2, 3), WPoint::affine(-1, 4)])];
    for (e, gens) in curves {
        let e = e.map_err(|e| e.to_string())?;
        let pick = |rng: &mut ChaCha8Rng| -> Result<WPoint, String> {
            let mut p = WPoint::Infinity;
            for g in &gens {
                let k = rng.gen_range(-3..=3);
                p = e.add(&p, &e.mul(g, k).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
            }
            Ok(p)
        };
        for _ in 0..100 {
            let (p, r, s) = (pick(&mut rng)?, pick(&mut rng)?, pick(&mut rng)?);
            let add = |a: &WPoint, b: &WPoint| e.add(a, b).map_err(|x| x.to_string());
            ensure(e.contains(&p), || format!("{p:?} off curve"))?;
            ensure(add(&p, &WPoint::Infinity)? == p, || "identity".into())?;
            ensure(add(&p, &e.neg(&p).map_err(|x| x.to_string())?)? == WPoint::Infinity, || "inverse".into())?;
            ensure(add(&add(&p, &r)?, &s)? == add(&p, &add(&r, &s)?)?, || format!("associativity {p:?} {r:?} {s:?}"))?;
        }
    }
    Ok(())
}

fn planted(rng: &mut ChaCha8Rng, perturb: bool) -> (FiniteAbelianGroup, [Vec<usize>; 3], usize) {
    let shapes: [&[u64]; 5] = [&[100, 100], &[10_000], &[12, 60], &[2, 4, 8, 16], &[36, 36]];
    let g = FiniteAbelianGroup::new(shapes[rng.gen_range(0..shapes.len())].to_vec()).unwrap();
    let subs: Vec<Vec<usize>> = g.subgroups().unwrap().into_iter().filter(|h| h.len() >= 8 && h.len() * 2 <= g.order()).collect();
    let h = subs.choose(rng).unwrap().clone();
    let (x, y) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
    let coset = |s: usize| -> Vec<usize> { h.iter().map(|&e| g.add(s, e)).collect() };
    let mut a = coset(x);
    if perturb {
        a[0] = loop {
            let t = rng.gen_range(0..g.order());
            if !a.contains(&t) {
                break t;
            }
        };
    }
    let sets = [a, coset(y), coset(g.add(x, y))];
    (g, sets, h.len())
}

fn sumsets_and_groups() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for mode in [Mode::Additive, Mode::Multiplicative] {
        for _ in 0..10_000 {
            let set = |rng: &mut ChaCha8Rng| {
                let mut v: Vec<i64> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(-30..=30)).filter(|&x| mode == Mode::Additive || x != 0).collect();
                v.sort_unstable();
                v.dedup();
                v.into_iter().map(|x| q(x, 1)).collect::<Vec<_>>()
            };
            let (u, v) = (set(&mut rng), set(&mut rng));
            if u.is_empty() || v.is_empty() {
                continue;
            }
            let p = rng.gen_range(0.5..=1.0);
            let gamma = PairSet::new((0..u.len()).flat_map(|i| (0..v.len()).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)));
            let r = sumset_bound_check(&u, &v, &gamma, mode).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{mode:?}: {r:?}"))?;
        }
    }
    for _ in 0..20 {
        let (g, [a, b, c], h) = planted(&mut rng, false);
        let r = almost_group_recover(&g, &a, &b, &c, None).map_err(|e| e.to_string())?.ok_or("nothing recovered")?;
        ensure(r.max_sym_diff == 0 && r.subgroup_order == h, || format!("planted: {r:?}"))?;
    }
    for _ in 0..100 {
        let (g, [a, b, c], _) = planted(&mut rng, true);
        let r = almost_group_recover(&g, &a, &b, &c, None).map_err(|e| e.to_string())?.ok_or("nothing recovered")?;
        ensure(r.bound_holds, || format!("perturbed: {r:?}"))?;
    }
    Ok(())
}

fn chords() -> Outcome {
    for n in 3..=30 {
        let r = ngon_chord_multiplicity(n, Region::Interior).map_err(|e| e.to_string())?;
        ensure(r.max <= 7, || format!("n={n}: interior max {}", r.max))?;
    }
    let t = Instant::now();
    for n in 3..=48 {
        let r = ngon_chord_multiplicity(n, Region::All).map_err(|e| e.to_string())?;
        println!("    n={n:>2} max={} ratio={:.4} points={}", r.max, r.ratio, r.points);
    }
    let secs = t.elapsed().as_secs_f64();
    println!("    full sweep: {secs:.1}s");
    ensure(secs <= 600.0, || format!("sweep took {secs:.0}s"))
}

fn main() {
    let corpus = match corpus() {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL corpus generation: {e}");
            std::process::exit(1);
        }
    };
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Böröczky families: oracle tables match geometry, m = 3..50", Box::new(boroczky_families)),
        ("near-Böröczky configurations have 3m ordinary lines, m = 3..50", Box::new(near_boroczky)),
        ("Sylvester acnodal configurations, n = 3..100", Box::new(sylvester)),
        ("Kelly–Moser: 3 ordinary lines, 6 three-point lines", Box::new(kelly_moser)),
        ("Euler and Melchior identities on the corpus", Box::new(|| arrangement_identities(&corpus, false))),
        ("bad edges at most 16 times the ordinary lines", Box::new(|| arrangement_identities(&corpus, true))),
        ("pair double count on the corpus", Box::new(|| double_count(&corpus))),
        ("Chasles closure on 100 line triples", Box::new(chasles)),
        ("cubic covers: sizes, budgets and membership", Box::new(cover)),
        ("group laws on singular cubics, conic-line unions and elliptic curves", Box::new(group_laws)),
        ("restricted sumset bounds and almost-group recovery", Box::new(sumsets_and_groups)),
        ("polygon chord multiplicity", Box::new(chords)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
