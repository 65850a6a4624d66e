use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use orchard::conic::{involution_value, parabola_collinear, reps_collinear, ExternalPoint};
use orchard::cubic::{fit_cubics, line_divides, CubicForm};
use orchard::generators::{gen_cubic_power, gen_grid, gen_parallel_aps, gen_triangle_ratios_default};
use orchard::group_law::{cuspidal_third, menelaus_params, Triangle, WeierstrassCurve};
use orchard::rich_lines::{triple_line_count, within_pair_bound};
use orchard::surface::{int_range, tripartite_curve_count, CurveSpec};
use orchard::{
    collinear, incident, join, meet, spanned_lines, tripartite_count, Pattern, PointSet, ProjLine, ProjPoint,
    Projectivity, Rational,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn point() -> impl Strategy<Value = ProjPoint> {
    (rational(), rational()).prop_map(|(x, y)| ProjPoint::affine(&x, &y))
}

fn small_point() -> impl Strategy<Value = ProjPoint> {
    (-4i64..=4, -4i64..=4).prop_map(|(x, y)| ProjPoint::int(x, y))
}

fn matrix() -> impl Strategy<Value = Projectivity> {
    prop::array::uniform3(prop::array::uniform3(-5i64..=5))
        .prop_filter_map("singular", |m| Projectivity::from_i64(m).ok())
}

fn point_set() -> impl Strategy<Value = PointSet> {
    prop::collection::hash_set((-5i64..=5, -5i64..=5), 3..30).prop_map(|s| {
        let mut v: Vec<_> = s.into_iter().collect();
        v.sort();
        PointSet::new(v.into_iter().map(|(x, y)| ProjPoint::int(x, y)).collect()).unwrap()
    })
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn collinear_permutation_invariant(p in point(), q in point(), r in point()) {
        let c = collinear(&p, &q, &r);
        for (a, b, d) in [(&p, &r, &q), (&q, &p, &r), (&q, &r, &p), (&r, &p, &q), (&r, &q, &p)] {
            prop_assert_eq!(collinear(a, b, d), c);
        }
    }

    #[test]
    fn collinear_projectively_invariant(p in small_point(), q in small_point(), r in small_point(), m in matrix()) {
        prop_assert_eq!(collinear(&p, &q, &r), collinear(&m.apply(&p), &m.apply(&q), &m.apply(&r)));
    }

    #[test]
    fn join_and_meet(p in point(), q in point(), r in point()) {
        prop_assume!(p != q && p != r && !collinear(&p, &q, &r));
        let (l, m) = (join(&p, &q).unwrap(), join(&p, &r).unwrap());
        prop_assert!(incident(&p, &l) && incident(&q, &l));
        prop_assert_eq!(meet(&l, &m).unwrap(), p);
    }

    #[test]
    fn canonical_scaling(x in -50i64..=50, y in -50i64..=50, z in -50i64..=50, k in prop_oneof![-7i64..=-1, 1i64..=7]) {
        prop_assume!((x, y, z) != (0, 0, 0));
        prop_assert_eq!(ProjPoint::new(x, y, z).unwrap(), ProjPoint::new(k * x, k * y, k * z).unwrap());
    }

    #[test]
    fn pair_conservation_and_bound(h in point_set()) {
        let t = spanned_lines(&h).unwrap();
        let pairs: usize = t.entries().iter().map(|e| choose2(e.multiplicity)).sum();
        prop_assert_eq!(pairs, choose2(h.len()));
        prop_assert!(within_pair_bound(t.k_rich_count(3, false).unwrap(), h.len()));
    }

    #[test]
    fn single_group_tripartite(h in point_set()) {
        let labelled = PointSet::with_labels(h.points().to_vec(), vec![1; h.len()]).unwrap();
        prop_assert_eq!(
            tripartite_count(&labelled, "111".parse::<Pattern>().unwrap()).unwrap(),
            triple_line_count(&h).unwrap()
        );
    }

    #[test]
    fn counts_projectively_invariant(h in point_set(), m in matrix()) {
        let a = spanned_lines(&h).unwrap();
        let b = spanned_lines(&h.transformed(&m)).unwrap();
        for k in 2..6 {
            prop_assert_eq!(a.k_rich_count(k, true).unwrap(), b.k_rich_count(k, true).unwrap());
        }
    }

    #[test]
    fn nine_points_lie_on_a_cubic(pts in prop::collection::hash_set((-6i64..=6, -6i64..=6), 9)) {
        let pts: Vec<ProjPoint> = pts.into_iter().map(|(x, y)| ProjPoint::int(x, y)).collect();
        let basis = fit_cubics(&pts).unwrap();
        prop_assert!(!basis.is_empty());
        for f in &basis {
            prop_assert!(pts.iter().all(|p| f.contains(p)));
        }
    }

    #[test]
    fn dividing_line_contains_its_points(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, t in rational()) {
        prop_assume!((a, b) != (0, 0));
        let l = ProjLine::new(a, b, c).unwrap();
        let f = CubicForm::from_lines([&l, &ProjLine::new(1, 2, 3).unwrap(), &ProjLine::new(0, 1, -7).unwrap()]);
        prop_assert!(line_divides(&f, &l));
        prop_assert!(f.contains(&l.lift(&t).unwrap()));
    }

    #[test]
    fn form_homogeneity(x in -9i64..=9, y in -9i64..=9, z in -9i64..=9, lam in 2i64..=9) {
        let f = CubicForm::weierstrass(&Rational::from_integer(0.into()), &Rational::from_integer(17.into())).to_form();
        let g = |x: i64, y: i64, z: i64| -> BigInt {
            f.terms().iter().map(|(e, c)| c * BigInt::from(x).pow(e[0]) * BigInt::from(y).pow(e[1]) * BigInt::from(z).pow(e[2])).sum()
        };
        prop_assert_eq!(g(lam * x, lam * y, lam * z), BigInt::from(lam).pow(3) * g(x, y, z));
    }

    #[test]
    fn cuspidal_third_is_an_involution(p in rational(), q in rational()) {
        prop_assume!(p != q);
        let r = cuspidal_third(&p, &q).unwrap();
        prop_assume!(r != p && r != q);
        prop_assert_eq!(cuspidal_third(&p, &r).unwrap(), q);
    }

    #[test]
    fn weierstrass_closure(k in -6i64..=6, l in -6i64..=6) {
        let c = WeierstrassCurve::new(Rational::from_integer(0.into()), Rational::from_integer(17.into())).unwrap();
        let (p, q) = (ProjPoint::int(-2, 3), ProjPoint::int(-1, 4));
        let (a, b) = (c.mul(&p, k).unwrap(), c.mul(&q, l).unwrap());
        let r = c.third(&a, &b).unwrap();
        prop_assert!(c.contains(&r));
        prop_assert_eq!(c.add(&a, &b).unwrap(), c.add(&b, &a).unwrap());
    }

    #[test]
    fn menelaus_transversals(
        v in prop::array::uniform3((-9i64..=9, -9i64..=9)),
        l in prop::array::uniform3(-9i64..=9),
    ) {
        let verts = v.map(|(x, y)| ProjPoint::int(x, y));
        prop_assume!(!collinear(&verts[0], &verts[1], &verts[2]));
        let tri = Triangle::new(verts[0].clone(), verts[1].clone(), verts[2].clone()).unwrap();
        let line = ProjLine::new(l[0], l[1], l[2]);
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        let xs: Vec<ProjPoint> = (0..3).filter_map(|i| meet(&tri.side(i), &line).ok()).collect();
        prop_assume!(xs.len() == 3 && xs.iter().all(|x| !tri.vertices().contains(x)));
        let (_, ok) = menelaus_params(&tri, [&xs[0], &xs[1], &xs[2]]).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn conic_properties(a in rational(), b in rational(), x in rational(), y in rational()) {
        prop_assume!(&a * &a != b && x != y);
        let e = ExternalPoint::new(a.clone(), b).unwrap();
        prop_assert_eq!(parabola_collinear(&x, &y, &e).unwrap(), parabola_collinear(&y, &x, &e).unwrap());
        if x != a {
            let z = involution_value(&e, &x).unwrap();
            if z != a {
                prop_assert_eq!(involution_value(&e, &z).unwrap(), x);
            }
        }
    }

    #[test]
    fn representatives_reflect_collinearity(p in prop::array::uniform3((rational(), rational()))) {
        let es: Vec<ExternalPoint> = p.iter().filter_map(|(a, b)| ExternalPoint::new(a.clone(), b.clone()).ok()).collect();
        prop_assume!(es.len() == 3 && es[0] != es[1] && es[0] != es[2] && es[1] != es[2]);
        prop_assert_eq!(
            reps_collinear(&es[0], &es[1], &es[2]).unwrap(),
            collinear(&es[0].point(), &es[1].point(), &es[2].point())
        );
    }

    #[test]
    fn tripartite_monotone(n in 2i64..=6, extra in 1i64..=4) {
        let c = CurveSpec::GraphPower(3);
        let small = int_range(-n, n);
        let big = int_range(-n - extra, n);
        let a = tripartite_curve_count([&c, &c, &c], [&small, &small, &small]).unwrap();
        let b = tripartite_curve_count([&c, &c, &c], [&big, &small, &small]).unwrap();
        prop_assert!(b.collinear_triples >= a.collinear_triples);
        prop_assert!(b.distinct_lines >= a.distinct_lines);
    }
}

#[test]
fn generated_sets_respect_the_pair_bound() {
    let mut sets = Vec::new();
    for n in 1..=12 {
        sets.push(gen_parallel_aps(n).unwrap());
        sets.push(gen_cubic_power(n).unwrap());
        sets.push(gen_triangle_ratios_default(n).unwrap());
    }
    for k in 2..=8 {
        sets.push(gen_grid(k).unwrap());
    }
    for h in &sets {
        assert!(within_pair_bound(triple_line_count(h).unwrap(), h.len()));
    }
}

#[test]
fn curve_counts_match_lifted_set() {
    let c = CurveSpec::GraphPower(3);
    let xs = int_range(-6, 6);
    let t = tripartite_curve_count([&c, &c, &c], [&xs, &xs, &xs]).unwrap();
    let h = gen_cubic_power(6).unwrap();
    assert_eq!(t.distinct_lines, triple_line_count(&h).unwrap());
    // every triple line of y = x³ carries exactly three points, in 3! orders
    assert_eq!(t.collinear_triples, 6 * t.distinct_lines);
    let lines: HashSet<_> = spanned_lines(&h).unwrap().triple_lines().map(|e| e.line.clone()).collect();
    assert_eq!(lines.len(), t.distinct_lines);
}

#[test]
fn corrupting_one_value_breaks_a_description() {
    use orchard::group_law::{check_values, GroupDescription, GroupElement, GroupValue, Operation};
    let cases = [
        (gen_parallel_aps(5).unwrap(), GroupDescription::ThreeParallelLines),
        (gen_cubic_power(5).unwrap(), GroupDescription::CuspidalCubic),
        (gen_triangle_ratios_default(3).unwrap(), GroupDescription::TriangleMenelaus(Triangle::standard())),
    ];
    for (set, desc) in cases {
        let (pieces, values): (Vec<_>, Vec<_>) = set.points().iter().map(|p| desc.evaluate(p).unwrap()).unzip();
        assert!(check_values(&desc, &set, &pieces, &values).unwrap().passed());
        for i in 0..set.len() {
            let mut bad = values.clone();
            bad[i] = match &bad[i] {
                GroupValue::Scalar(g) => {
                    let step = match g.operation() {
                        Operation::Additive => GroupElement::additive(Rational::from_integer(1.into())),
                        Operation::Multiplicative => GroupElement::multiplicative(Rational::from_integer(2.into())).unwrap(),
                    };
                    GroupValue::Scalar(g.combine(&step).unwrap())
                }
                GroupValue::Point(_) => unreachable!(),
            };
            let r = check_values(&desc, &set, &pieces, &bad).unwrap();
            assert!(!r.passed(), "{:?}: changing point {i} went unnoticed", desc.kind());
        }
    }
}
