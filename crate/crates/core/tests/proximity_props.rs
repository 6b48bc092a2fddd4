mod common;

use common::{cocircular4, collinear3, diagram, equilateral, unit_diagram};
use proptest::prelude::*;
use proxvor::geom::Point;
use proxvor::proximity::{
    are_proximal, build_proximity_graph, cech_distance, check_uniform_continuity,
    point_set_distance, proximal_region, region_closeness_witness,
    site_closeness_implies_region_closeness, ProximalKind, SiteMapping,
};
use proxvor::Error;

/// Distance from `x` to the point or segment a proximal region describes.
fn region_distance(kind: &ProximalKind, x: Point) -> f64 {
    match *kind {
        ProximalKind::Empty => f64::INFINITY,
        ProximalKind::Vertex { point } => x.distance(point),
        ProximalKind::Edge { a, b } => {
            let ab = b - a;
            let t = ((x - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            x.distance(a + ab * t)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cech_distance_is_symmetric(d in unit_diagram(2, 30)) {
        let cells = d.cells();
        for a in cells {
            for b in cells {
                prop_assert_eq!(cech_distance(a, b).to_bits(), cech_distance(b, a).to_bits());
            }
        }
    }

    #[test]
    fn proximity_agrees_with_regions_and_witnesses(d in unit_diagram(2, 30)) {
        let tol = d.tol();
        let cells = d.cells();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let near = are_proximal(&cells[i], &cells[j], tol);
                let r = proximal_region(&cells[i], &cells[j], tol).unwrap();
                prop_assert_eq!(r.site_pair, (i, j));
                prop_assert_eq!(near, !r.kind.is_empty());
                prop_assert_eq!(near, cech_distance(&cells[i], &cells[j]) <= tol);
                let w = region_closeness_witness(&cells[i], &cells[j], tol);
                prop_assert_eq!(w.is_some(), near);
                if let Some(w) = w {
                    prop_assert!(point_set_distance(w, &cells[i]) <= tol);
                    prop_assert!(point_set_distance(w, &cells[j]) <= tol);
                }
            }
        }
    }

    #[test]
    fn proximal_regions_are_points_or_segments(d in unit_diagram(2, 30), ts in prop::collection::vec(0.0f64..=1.0, 8)) {
        let tol = d.tol();
        let cells = d.cells();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                let r = proximal_region(&cells[i], &cells[j], tol).unwrap();
                let pts = r.kind.points();
                if pts.is_empty() {
                    continue;
                }
                for &t in &ts {
                    let u = pts[0].lerp(*pts.last().unwrap(), t);
                    prop_assert!(region_distance(&r.kind, u) <= tol);
                    // Every convex combination lies in both closed cells.
                    prop_assert!(cells[i].polygon.contains_point(u, 10.0 * tol));
                    prop_assert!(cells[j].polygon.contains_point(u, 10.0 * tol));
                }
            }
        }
    }

    #[test]
    fn cech_distance_routes_through_any_point(d in unit_diagram(2, 20), x in (-1.0f64..2.0, -1.0f64..2.0)) {
        let x = Point::new(x.0, x.1);
        let tol = d.tol();
        let cells = d.cells();
        for a in cells {
            for b in cells {
                let via = point_set_distance(x, a) + point_set_distance(x, b);
                prop_assert!(cech_distance(a, b) <= via + tol);
            }
        }
    }

    #[test]
    fn points_near_a_site_are_near_its_cell(d in unit_diagram(1, 30), r in 0.0f64..=1.0, t in 0.0f64..std::f64::consts::TAU) {
        let tol = d.tol();
        for p in 0..d.len() {
            let y = d.sites()[p] + Point::new(t.cos(), t.sin()) * (r * tol);
            prop_assert!(site_closeness_implies_region_closeness(y, p, &d, tol).unwrap());
        }
    }

    #[test]
    fn graph_has_no_isolated_nodes(d in unit_diagram(2, 40)) {
        let g = build_proximity_graph(&d, d.tol()).unwrap();
        for p in 0..d.len() {
            prop_assert!(g.degree(p) >= 1);
        }
        for r in g.edges() {
            prop_assert!(!r.kind.is_empty());
        }
    }

    #[test]
    fn identity_and_constant_maps_are_continuous(d in unit_diagram(1, 20), k in 0usize..20) {
        let n = d.len();
        let tol = d.tol();
        let id = check_uniform_continuity(&SiteMapping::identity(n), &d, &d, tol).unwrap();
        prop_assert!(id.uniformly_continuous);
        let c = check_uniform_continuity(&SiteMapping::constant(n, k % n), &d, &d, tol).unwrap();
        prop_assert!(c.uniformly_continuous);
    }
}

#[test]
fn two_sites_share_an_edge() {
    let d = diagram(&[(0.25, 0.5), (0.75, 0.5)], [0.0, 0.0, 1.0, 1.0]);
    let r = proximal_region(&d.cells()[0], &d.cells()[1], d.tol()).unwrap();
    let ProximalKind::Edge { a, b } = r.kind else {
        panic!("expected an edge, got {:?}", r.kind);
    };
    assert!((a.x - 0.5).abs() < 1e-12 && (b.x - 0.5).abs() < 1e-12);
    assert!((a.distance(b) - 1.0).abs() < 1e-12);
}

#[test]
fn fixtures_classify_exactly() {
    let eq = equilateral();
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        let r = proximal_region(&eq.cells()[p], &eq.cells()[q], eq.tol()).unwrap();
        assert_eq!(r.kind.name(), "edge");
    }
    let sq = cocircular4();
    let diag = proximal_region(&sq.cells()[0], &sq.cells()[2], sq.tol()).unwrap();
    assert!(matches!(diag.kind, ProximalKind::Vertex { point } if point.distance(Point::new(0.5, 0.5)) < 1e-9));
    let col = collinear3();
    let g = build_proximity_graph(&col, col.tol()).unwrap();
    assert_eq!(g.neighbors(0), vec![1]);
    assert_eq!(g.neighbors(1), vec![0, 2]);
    assert!(!g.contains_edge(0, 2));
    assert_eq!(g.kind(0, 2), None);
    assert!((cech_distance(&col.cells()[0], &col.cells()[2]) - 1.0).abs() < 1e-12);
}

#[test]
fn swapped_path_mapping_names_the_broken_pair() {
    let d = diagram(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], [-1.0, -1.0, 4.0, 1.0]);
    let tol = d.tol();
    assert!(!are_proximal(&d.cells()[0], &d.cells()[3], tol));
    let report = check_uniform_continuity(&SiteMapping::new(vec![0, 3, 2, 1]), &d, &d, tol).unwrap();
    assert!(!report.uniformly_continuous);
    let v: Vec<_> = report.violations().collect();
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].source, v[0].image), ((0, 1), (0, 3)));
}

#[test]
fn invalid_mappings_are_rejected() {
    let d = collinear3();
    let tol = d.tol();
    assert!(matches!(
        check_uniform_continuity(&SiteMapping::new(vec![0, 1]), &d, &d, tol),
        Err(Error::InvalidMapping(_))
    ));
    assert!(matches!(
        check_uniform_continuity(&SiteMapping::new(vec![0, 1, 7]), &d, &d, tol),
        Err(Error::InvalidMapping(_))
    ));
    assert!(matches!(
        proximal_region(&d.cells()[1], &d.cells()[1], tol),
        Err(Error::SameSite(1))
    ));
}
