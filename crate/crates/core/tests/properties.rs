use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use ovalkit::cayley::{bifocal_residual, cayley_implicit, cayley_param, classify_shape, Branch, CayleyParams};
use ovalkit::contour::{contour, filter_true_oval, ContourGrid};
use ovalkit::curve::{circle, curvature, ellipse, ParametricCurve};
use ovalkit::geom::Vec2;
use ovalkit::intersect::{polyline_oracle, polyline_oracle_brute, Seed};
use ovalkit::offset::{offset_point_on, OffsetFamily, Sides};
use ovalkit::polyline::{ArcKind, PolyArc, Polyline, Side};
use ovalkit::scenario::{run_scenario, CurveSpec, ResultDocument, Scenario};
use ovalkit::singular::{all_singular_points, family_crunodes, sample_family, SearchRange, SingularKind};
use ovalkit::svg::{emit_svg, SvgStyle};

fn oval() -> impl Strategy<Value = CayleyParams> {
    (0.3f64..4.0, 0.2f64..3.5).prop_map(|(a, e)| CayleyParams::new(a, a * e).unwrap())
}

fn angle(u: Vec2, v: Vec2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v).abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn implicit_is_even_in_both_axes(p in oval(), x in -6.0f64..6.0, y in -6.0f64..6.0) {
        let poly = cayley_implicit(&p);
        let v = poly.eval(x, y);
        prop_assert_eq!(v, poly.eval(-x, y));
        prop_assert_eq!(v, poly.eval(x, -y));
        prop_assert_eq!(v, poly.eval(-x, -y));
    }

    #[test]
    fn parametric_samples_lie_on_the_octic_and_the_oval(p in oval(), t in 0.0f64..FRAC_PI_2, upper in any::<bool>()) {
        let c = cayley_param(&p, if upper { Branch::Upper } else { Branch::Lower });
        prop_assume!(c.contains(t));
        let Ok(q) = c.point(t) else { return Ok(()) };
        let poly = cayley_implicit(&p);
        let scale = poly.max_abs_coefficient() * 1f64.max(q.x.abs()).max(q.y.abs()).powi(8);
        prop_assert!(poly.eval(q.x, q.y).abs() <= 1e-6 * scale);
        prop_assert!(bifocal_residual(q, &p).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn circle_curvature_is_reciprocal_radius(r in prop::sample::select(vec![0.5, 1.0, 7.0]), t in -10.0f64..10.0) {
        prop_assert!((curvature(&circle(r), t).unwrap() - 1.0 / r).abs() <= 1e-10);
    }

    #[test]
    fn shape_class_ignores_scale(p in oval(), lambda in 0.01f64..100.0) {
        let q = CayleyParams::new(p.a() * lambda, p.b() * lambda).unwrap();
        prop_assert_eq!(classify_shape(&p), classify_shape(&q));
    }

    #[test]
    fn offsets_are_at_distance_d_along_the_normal(
        a in 0.5f64..6.0, b in 0.5f64..6.0, d in 0.01f64..5.0, t in 0.0f64..(2.0 * PI), left in any::<bool>()
    ) {
        let c = ellipse(a, b);
        let side = if left { Side::Left } else { Side::Right };
        let o = offset_point_on(&c, d, side, t).unwrap();
        let jet = c.jet(t).unwrap();
        let gap = o - jet.pos;
        prop_assert!((gap.norm() - d).abs() <= 1e-12 * d.max(1.0));
        prop_assert!(gap.dot(jet.d1).abs() <= 1e-9 * gap.norm() * jet.d1.norm());
    }

    #[test]
    fn cayley_offsets_are_at_distance_d(p in oval(), d in 0.01f64..3.0, t in 0.0f64..FRAC_PI_2) {
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        for m in &fam.members {
            prop_assume!(m.curve.contains(t));
            let (Ok(o), Ok(jet)) = (m.point(t), m.curve.jet(t)) else { continue };
            let gap = o - jet.pos;
            prop_assert!((gap.norm() - d).abs() <= 1e-12 * d.max(1.0) * jet.pos.norm().max(1.0));
            prop_assert!(gap.dot(jet.d1).abs() <= 1e-9 * gap.norm() * jet.d1.norm());
        }
    }

    #[test]
    fn reversal_swaps_sides(a in 0.5f64..6.0, b in 0.5f64..6.0, d in 0.01f64..5.0, t in -3.0f64..3.0) {
        let c = ellipse(a, b);
        let r: ParametricCurve = c.reversed();
        for side in [Side::Left, Side::Right] {
            let x = offset_point_on(&c, d, side, t).unwrap();
            let y = offset_point_on(&r, d, side.opposite(), -t).unwrap();
            prop_assert!(x.distance(y) <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn cayley_offset_set_has_both_mirror_symmetries(p in oval(), d in 0.05f64..3.0) {
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        let n = 64;
        let mut pts = Vec::new();
        for k in 0..n {
            let t = (k as f64 + 0.5) * FRAC_PI_2 / n as f64;
            for m in &fam.members {
                if let Ok(q) = m.point(t) {
                    pts.push(q);
                }
            }
        }
        for q in &pts {
            for m in [Vec2::new(-q.x, q.y), Vec2::new(q.x, -q.y)] {
                let near = pts.iter().map(|o| o.distance(m)).fold(f64::INFINITY, f64::min);
                prop_assert!(near <= 1e-9 * q.norm().max(1.0), "{:?} mirror {:?} off by {}", q, m, near);
            }
        }
    }

    #[test]
    fn sweep_oracle_equals_brute_force(
        xs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..40),
        ys in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..40),
    ) {
        let poly = |v: &[(f64, f64)]| {
            let mut arc = PolyArc::new(ArcKind::Progenitor, "p");
            arc.points = v.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
            arc.params = (0..v.len()).map(|i| i as f64).collect();
            Polyline { arcs: vec![arc], gaps: Vec::new() }
        };
        let (a, b) = (poly(&xs), poly(&ys));
        let key = |s: &Seed| (s.arc_a, s.seg_a, s.arc_b, s.seg_b);
        let mut x = polyline_oracle(&a, &b);
        let mut y = polyline_oracle_brute(&a, &b);
        x.sort_by_key(key);
        y.sort_by_key(key);
        prop_assert_eq!(x, y);
        let mut x = polyline_oracle(&a, &a);
        let mut y = polyline_oracle_brute(&a, &a);
        x.sort_by_key(key);
        y.sort_by_key(key);
        prop_assert_eq!(x, y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn singular_point_certificates(p in oval(), d in 0.05f64..3.0) {
        prop_assume!((p.e() - 1.0).abs() > 1e-3);
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        let range = SearchRange::trace(&fam.members[0].curve, 1000).unwrap();
        let (points, report) = all_singular_points(&fam, &range);
        for q in &points {
            let member = |label: &str| fam.members.iter().find(|m| m.label == label).unwrap();
            match q.kind {
                SingularKind::Cusp => {
                    let m = member(&q.sources[0]);
                    let jet = m.jet(q.params[0]).unwrap();
                    prop_assert!(jet.d1.norm() <= 1e-6, "offset speed {}", jet.d1.norm());
                    prop_assert!(jet.speed >= 1e-3);
                }
                SingularKind::Crunode => {
                    let (a, b) = (member(&q.sources[0]), member(&q.sources[1]));
                    let (ja, jb) = (a.jet(q.params[0]).unwrap(), b.jet(q.params[1]).unwrap());
                    prop_assert!((ja.pos - jb.pos).norm() <= 1e-10);
                    if !q.tangential {
                        prop_assert!(angle(ja.d1, jb.d1) >= 1e-3);
                    }
                }
            }
            prop_assert!(q.residual <= q.tolerance());
            let m = Vec2::new(q.location.x, -q.location.y);
            prop_assert!(points.iter().any(|o| o.kind == q.kind && o.location.distance(m) <= 1e-8));
        }
        // Seeds and refined crunodes are within one sampled edge of each other.
        let crunodes: Vec<_> = points.iter().filter(|q| q.kind == SingularKind::Crunode).collect();
        for q in &crunodes {
            prop_assert!(report.seeds.iter().any(|s| s.point.distance(q.location) <= report.max_edge));
        }
        for s in &report.seeds {
            let refined = crunodes.iter().any(|q| q.location.distance(s.point) <= report.max_edge);
            let rejected = report.diagnostics.iter().any(|r| r.point == s.point);
            prop_assert!(refined || rejected);
        }
    }

    #[test]
    fn documents_round_trip(a in 0.5f64..3.0, e in 0.3f64..3.0, d in prop::collection::vec(0.05f64..2.0, 0..3), singular in any::<bool>()) {
        let mut s = Scenario::new(CurveSpec::Cayley { a, b: a * e });
        s.d = d;
        s.samples = 200;
        s.singular = singular;
        let doc = run_scenario(&s).unwrap();
        let json = doc.to_json();
        let back = ResultDocument::from_json(&json).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json(), json.clone());
        prop_assert_eq!(run_scenario(&s).unwrap().to_json(), json);
        let svg = emit_svg(&doc, &SvgStyle::default());
        prop_assert_eq!(svg.matches("<path").count(), doc.arcs().filter(|a| !a.is_empty()).count());
    }
}

#[test]
fn seeds_cover_crunodes_on_the_lemniscate_series() {
    let p = CayleyParams::new(1.0, 1.0).unwrap();
    for d in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let fam = OffsetFamily::cayley(&p, d, Sides::Both).unwrap();
        let range = SearchRange::trace(&fam.members[0].curve, 2000).unwrap();
        let report = family_crunodes(&fam, &range);
        assert!(report.diagnostics.is_empty(), "d={d}: {:?}", report.diagnostics);
        assert!(report.points.iter().all(|q| !q.tangential));
        let polys = sample_family(&fam, &range);
        assert_eq!(polys.len(), 4);
    }
}

#[test]
fn svg_markers_match_singular_points() {
    let mut s = Scenario::new(CurveSpec::Cayley { a: 1.0, b: 1.0 });
    s.d = vec![5.0];
    s.samples = 2000;
    s.singular = true;
    let doc = run_scenario(&s).unwrap();
    let svg = emit_svg(&doc, &SvgStyle::default());
    let cusps = doc.singular_points().filter(|p| p.kind == SingularKind::Cusp).count();
    let crunodes = doc.singular_points().filter(|p| p.kind == SingularKind::Crunode).count();
    assert!(cusps > 0 && crunodes > 0);
    assert_eq!(svg.matches("<polygon").count(), cusps);
    assert_eq!(svg.matches("<circle").count(), crunodes);
}

#[test]
fn contour_vertices_separate_by_residual() {
    for b in [2, 4, 6] {
        let p = CayleyParams::from_ints(3, b).unwrap();
        let loops = contour(&cayley_implicit(&p), &ContourGrid::for_cayley(&p));
        let kept = filter_true_oval(&loops, &p);
        for l in &loops {
            let r: Vec<f64> =
                l.points.iter().map(|&q| bifocal_residual(q, &p).map_or(f64::INFINITY, f64::abs)).collect();
            if kept.iter().any(|k| k.points == l.points) {
                assert!(
                    r.iter().all(|&x| x <= 1e-2),
                    "b={b}: kept vertex residual {:?}",
                    r.iter().cloned().fold(0.0, f64::max)
                );
            } else {
                assert!(
                    r.iter().all(|&x| x >= 1e-2),
                    "b={b}: dropped vertex residual {:?}",
                    r.iter().cloned().fold(f64::INFINITY, f64::min)
                );
            }
        }
    }
}

#[test]
fn contour_error_shrinks_with_the_grid() {
    let worst = |poly: &ovalkit::poly::ImplicitPolynomial, grid: &ContourGrid| {
        contour(poly, grid).iter().flat_map(|l| l.points.iter()).map(|q| poly.eval(q.x, q.y).abs()).fold(0.0, f64::max)
    };
    let circle: ovalkit::poly::ImplicitPolynomial = "x^2 + y^2 - 1".parse().unwrap();
    let p = CayleyParams::from_ints(3, 4).unwrap();
    let oval = cayley_implicit(&p);
    for (poly, half) in [(&circle, 1.7), (&oval, 1.2 * 7.0)] {
        let coarse = worst(poly, &ContourGrid::square(half, 128).unwrap());
        let fine = worst(poly, &ContourGrid::square(half, 256).unwrap());
        assert!(fine * 2.0 <= coarse, "coarse {coarse:e}, fine {fine:e}");
    }
}
