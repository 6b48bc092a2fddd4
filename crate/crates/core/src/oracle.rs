//! Brute-force verification of a built diagram against the nearest-site
//! definition of its cells.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geom::{ConvexPolygon, Point};
use crate::voronoi::VoronoiDiagram;

/// Counts of every disagreement found. All zero means the diagram passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub sample_points: usize,
    /// Points with a clear nearest site that its cell misses, or that
    /// another cell claims.
    pub membership_disagreements: usize,
    /// Points no closed cell contains.
    pub uncovered: usize,
    pub nonconvex_cells: usize,
    pub structural_violations: usize,
    pub passed: bool,
}

/// Gap between the second-nearest and nearest site distance.
fn nearest_margin(sites: &[Point], x: Point) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    let mut second = f64::INFINITY;
    for (i, s) in sites.iter().enumerate() {
        let d = s.distance(x);
        if d < best.1 {
            second = best.1;
            best = (i, d);
        } else if d < second {
            second = d;
        }
    }
    (best.0, second - best.1)
}

/// Samples a `grid × grid` lattice over the box (corners included) plus
/// `random` uniform points drawn from `seed`, and checks each against the
/// cells. `margin` is the nearest-site gap below which a point counts as
/// ambiguous and is only checked for coverage.
pub fn check_diagram(
    d: &VoronoiDiagram,
    grid: usize,
    random: usize,
    seed: u64,
    margin: f64,
) -> OracleReport {
    let b = d.bbox();
    let tol = d.tol();
    let mut points = Vec::with_capacity(grid * grid + random);
    let steps = grid.max(2) - 1;
    for i in 0..grid {
        for j in 0..grid {
            points.push(Point::new(
                b.min_x + b.width() * i as f64 / steps as f64,
                b.min_y + b.height() * j as f64 / steps as f64,
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        points.push(Point::new(
            rng.gen_range(b.min_x..b.max_x),
            rng.gen_range(b.min_y..b.max_y),
        ));
    }
    let cells = d.cells();
    let bounds: Vec<(Point, Point)> = cells.iter().map(|c| c.polygon.bounds()).collect();
    let mut membership_disagreements = 0;
    let mut uncovered = 0;
    for &x in &points {
        let (near, gap) = nearest_margin(d.sites(), x);
        let mut covered = false;
        let mut wrong = false;
        for (k, cell) in cells.iter().enumerate() {
            let (lo, hi) = bounds[k];
            if x.x < lo.x - tol || x.x > hi.x + tol || x.y < lo.y - tol || x.y > hi.y + tol {
                if k == near && gap > margin {
                    wrong = true;
                }
                continue;
            }
            let inside = cell.polygon.contains_point(x, tol);
            covered |= inside;
            if gap > margin && inside != (k == near) {
                wrong = true;
            }
        }
        uncovered += usize::from(!covered);
        membership_disagreements += usize::from(wrong);
    }
    let nonconvex_cells = cells
        .iter()
        .filter(|c| ConvexPolygon::new(c.polygon.vertices().to_vec(), tol).is_err())
        .count();
    let structural_violations = d.validate().len();
    OracleReport {
        sample_points: points.len(),
        membership_disagreements,
        uncovered,
        nonconvex_cells,
        structural_violations,
        passed: membership_disagreements == 0
            && uncovered == 0
            && nonconvex_cells == 0
            && structural_violations == 0,
    }
}
