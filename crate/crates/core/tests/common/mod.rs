#![allow(dead_code)]

use proptest::prelude::*;
use proxvor::geom::Point;
use proxvor::voronoi::{build_diagram, BoundingBox, GeneratingSet, VoronoiDiagram};

/// Sites strictly inside the unit square, pairwise at least `1e-4` apart.
pub fn site_set(min: usize, max: usize) -> impl Strategy<Value = GeneratingSet> {
    prop::collection::vec((0.001f64..0.999, 0.001f64..0.999), min..=max).prop_filter_map(
        "sites too close",
        |raw| {
            let pts: Vec<Point> = raw.into_iter().map(|(x, y)| Point::new(x, y)).collect();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if pts[i].distance(pts[j]) < 1e-4 {
                        return None;
                    }
                }
            }
            GeneratingSet::new(pts).ok()
        },
    )
}

pub fn unit_diagram(min: usize, max: usize) -> impl Strategy<Value = VoronoiDiagram> {
    site_set(min, max).prop_map(|s| build_diagram(&s, &BoundingBox::unit()).unwrap())
}

pub fn diagram(pts: &[(f64, f64)], bbox: [f64; 4]) -> VoronoiDiagram {
    let set = GeneratingSet::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    let [a, b, c, d] = bbox;
    build_diagram(&set, &BoundingBox::new(a, b, c, d).unwrap()).unwrap()
}

pub fn collinear3() -> VoronoiDiagram {
    diagram(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [-1.0, -1.0, 3.0, 1.0])
}

pub fn equilateral() -> VoronoiDiagram {
    diagram(
        &[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)],
        [-1.0, -1.0, 2.0, 2.0],
    )
}

pub fn cocircular4() -> VoronoiDiagram {
    diagram(
        &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        [-1.0, -1.0, 2.0, 2.0],
    )
}

/// Gap between the two smallest site distances, by brute force.
pub fn margin(sites: &[Point], x: Point) -> (usize, f64) {
    let mut d: Vec<(f64, usize)> = sites.iter().enumerate().map(|(i, s)| (s.distance(x), i)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    match d.len() {
        1 => (d[0].1, f64::INFINITY),
        _ => (d[0].1, d[1].0 - d[0].0),
    }
}

/// Points covering the box, corners included.
pub fn lattice(b: &BoundingBox, k: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            out.push(Point::new(
                b.min_x + b.width() * i as f64 / (k - 1) as f64,
                b.min_y + b.height() * j as f64 / (k - 1) as f64,
            ));
        }
    }
    out
}
