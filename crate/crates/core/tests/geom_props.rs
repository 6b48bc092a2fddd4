use proptest::prelude::*;
use proxvor::geom::{
    bisector_half_plane, clip_polygon, contains_point, polygon_centroid, Clipped, ConvexPolygon,
    HalfPlane, Point,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn point() -> impl Strategy<Value = Point> {
    (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Point::new(x, y))
}

/// A convex polygon inscribed in a circle, counter-clockwise.
fn convex_polygon() -> impl Strategy<Value = ConvexPolygon> {
    (
        point(),
        0.5f64..5.0,
        prop::collection::btree_set(0u32..3600, 3..12),
    )
        .prop_filter_map("degenerate polygon", |(c, r, angles)| {
            let pts = angles
                .into_iter()
                .map(|a| {
                    let t = a as f64 / 3600.0 * std::f64::consts::TAU;
                    Point::new(c.x + r * t.cos(), c.y + r * t.sin())
                })
                .collect();
            ConvexPolygon::new(pts, 1e-6).ok().filter(|p| p.area() > 1e-3)
        })
}

fn half_plane() -> impl Strategy<Value = HalfPlane> {
    (0.0f64..std::f64::consts::TAU, -8.0f64..8.0)
        .prop_map(|(t, off)| HalfPlane::new(t.cos(), t.sin(), off).unwrap())
}

fn boundary_distance(poly: &ConvexPolygon, x: Point) -> f64 {
    poly.edges()
        .map(|(a, b)| {
            let ab = b - a;
            let t = ((x - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            x.distance(a + ab * t)
        })
        .fold(f64::INFINITY, f64::min)
}

fn rotate(p: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

#[test]
fn bisector_separates_ten_thousand_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    while checked < 10_000 {
        let p = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let q = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if p.distance(q) < 1e-3 {
            continue;
        }
        let h = bisector_half_plane(p, q, TOL).unwrap();
        for _ in 0..100 {
            let x = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let (dp, dq) = (x.distance(p), x.distance(q));
            if (dp - dq).abs() < 1e-9 {
                continue;
            }
            assert_eq!(h.contains(x, 0.0), dp < dq, "p={p:?} q={q:?} x={x:?}");
            checked += 1;
        }
    }
}

proptest! {
    #[test]
    fn bisector_agrees_with_distances(p in point(), q in point(), x in point()) {
        prop_assume!(p.distance(q) > 1e-3);
        let (dp, dq) = (x.distance(p), x.distance(q));
        prop_assume!((dp - dq).abs() > 1e-9);
        let h = bisector_half_plane(p, q, TOL).unwrap();
        prop_assert_eq!(h.contains(x, 0.0), dp < dq);
    }

    #[test]
    fn clipping_preserves_convexity(poly in convex_polygon(), h in half_plane()) {
        match clip_polygon(&poly, &h, TOL) {
            Clipped::Polygon(c) => {
                prop_assert!(ConvexPolygon::new(c.vertices().to_vec(), TOL).is_ok());
                prop_assert!(c.area() <= poly.area() + 1e-9);
            }
            Clipped::Degenerate(pts) => {
                for x in pts {
                    prop_assert!(contains_point(&poly, x, 1e-7));
                    prop_assert!(h.signed_distance(x).abs() <= 1e-7);
                }
            }
            Clipped::Empty => {
                for &v in poly.vertices() {
                    prop_assert!(h.signed_distance(v) > -1e-7);
                }
            }
        }
    }

    #[test]
    fn clipped_membership_is_conjunction(
        poly in convex_polygon(),
        h in half_plane(),
        xs in prop::collection::vec(point(), 64),
    ) {
        let clipped = clip_polygon(&poly, &h, TOL);
        for x in xs {
            // Skip the tolerance band around either boundary.
            if boundary_distance(&poly, x) < 1e-7 || h.signed_distance(x).abs() < 1e-7 {
                continue;
            }
            let want = contains_point(&poly, x, TOL) && h.contains(x, TOL);
            let got = match &clipped {
                Clipped::Polygon(c) => contains_point(c, x, TOL),
                _ => false,
            };
            prop_assert_eq!(got, want, "x={:?}", x);
        }
    }

    #[test]
    fn centroid_ignores_vertex_rotation(poly in convex_polygon(), k in 0usize..12) {
        let c = polygon_centroid(&poly).unwrap();
        let mut vs = poly.vertices().to_vec();
        let n = vs.len();
        vs.rotate_left(k % n);
        let r = polygon_centroid(&ConvexPolygon::new(vs, TOL).unwrap()).unwrap();
        prop_assert!(c.distance(r) <= 1e-9);
    }

    #[test]
    fn centroid_follows_rigid_motions(
        poly in convex_polygon(),
        theta in 0.0f64..std::f64::consts::TAU,
        shift in point(),
    ) {
        let c = polygon_centroid(&poly).unwrap();
        let moved: Vec<Point> = poly.vertices().iter().map(|&v| rotate(v, theta) + shift).collect();
        let m = polygon_centroid(&ConvexPolygon::new(moved, TOL).unwrap()).unwrap();
        prop_assert!(m.distance(rotate(c, theta) + shift) <= 1e-9);
    }
}

#[test]
fn clipping_square_by_half_plane_keeps_left_half() {
    let sq = ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
    let h = HalfPlane::new(1.0, 0.0, 0.5).unwrap();
    let Clipped::Polygon(left) = clip_polygon(&sq, &h, TOL) else {
        panic!("expected a polygon");
    };
    assert!((left.area() - 0.5).abs() < 1e-12);
    let c = polygon_centroid(&left).unwrap();
    assert!(c.distance(Point::new(0.25, 0.5)) < 1e-12);
}
