//! Nearness between Voronoi cells.
//!
//! Two closed cells are proximal when their closures meet. Numerically that
//! is "Čech distance at most `tol`". For distinct sites the common part is
//! either empty, a single vertex, or a boundary segment; [`proximal_region`]
//! reports which.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    classify_ring, clip_ring, segment_closest_pair, simplify_ring, Clipped, HalfPlane, Point,
    Segment,
};
use crate::voronoi::{VoronoiCell, VoronoiDiagram};

/// Infimum distance from `x` to the closed cell.
pub fn point_set_distance(x: Point, cell: &VoronoiCell) -> f64 {
    cell.polygon.distance_to_point(x)
}

/// Closest pair between two closed cells: `(distance, point of a, point of b)`.
fn closest_pair(a: &VoronoiCell, b: &VoronoiCell) -> (f64, Point, Point) {
    if let Some(&v) = a
        .polygon
        .vertices()
        .iter()
        .find(|&&v| b.polygon.contains_point(v, 0.0))
    {
        return (0.0, v, v);
    }
    if let Some(&v) = b
        .polygon
        .vertices()
        .iter()
        .find(|&&v| a.polygon.contains_point(v, 0.0))
    {
        return (0.0, v, v);
    }
    let mut best = (f64::INFINITY, a.site, b.site);
    for (a0, a1) in a.polygon.edges() {
        for (b0, b1) in b.polygon.edges() {
            let cand = segment_closest_pair(a0, a1, b0, b1);
            if cand.0 < best.0 {
                best = cand;
            }
        }
    }
    best
}

/// `inf { ‖a − b‖ : a ∈ A, b ∈ B }` over the two closed cells.
pub fn cech_distance(a: &VoronoiCell, b: &VoronoiCell) -> f64 {
    if a.site_id == b.site_id && a.polygon == b.polygon {
        return 0.0;
    }
    // Evaluated in a fixed argument order so the result is symmetric.
    if (a.site_id, a.site.x, a.site.y) <= (b.site_id, b.site.x, b.site.y) {
        closest_pair(a, b).0
    } else {
        closest_pair(b, a).0
    }
}

/// The δ relation: the closures meet, up to `tol`.
pub fn are_proximal(a: &VoronoiCell, b: &VoronoiCell, tol: f64) -> bool {
    cech_distance(a, b) <= tol
}

/// Shape of `cl V_p ∩ cl V_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProximalKind {
    Empty,
    Vertex { point: Point },
    Edge { a: Point, b: Point },
}

impl ProximalKind {
    pub fn is_empty(&self) -> bool {
        matches!(self, ProximalKind::Empty)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProximalKind::Empty => "empty",
            ProximalKind::Vertex { .. } => "vertex",
            ProximalKind::Edge { .. } => "edge",
        }
    }

    /// Sample points of the region: nothing, the vertex, or both endpoints.
    pub fn points(&self) -> Vec<Point> {
        match *self {
            ProximalKind::Empty => Vec::new(),
            ProximalKind::Vertex { point } => vec![point],
            ProximalKind::Edge { a, b } => vec![a, b],
        }
    }

    pub fn segment(&self) -> Option<Segment> {
        match *self {
            ProximalKind::Edge { a, b } => Some(Segment { a, b }),
            _ => None,
        }
    }
}

/// A classified proximal region for an unordered site pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximalRegion {
    pub site_pair: (usize, usize),
    pub kind: ProximalKind,
}

/// Intersects the two closed cells and classifies the result by dimension.
///
/// `a` is clipped by every edge line of `b`. A vertex of `a` within `tol` of
/// an edge line counts as on it, so a shared edge survives as a flat ring.
/// Cells further apart than `tol` are reported empty without clipping.
pub fn proximal_region(a: &VoronoiCell, b: &VoronoiCell, tol: f64) -> Result<ProximalRegion> {
    let site_pair = (a.site_id.min(b.site_id), a.site_id.max(b.site_id));
    if a.site_id == b.site_id {
        return Err(Error::SameSite(a.site_id));
    }
    let (first, second) = if a.site_id < b.site_id { (a, b) } else { (b, a) };
    let (dist, pa, pb) = closest_pair(first, second);
    if dist > tol {
        return Ok(ProximalRegion {
            site_pair,
            kind: ProximalKind::Empty,
        });
    }
    let mut ring = first.polygon.vertices().to_vec();
    for (u, v) in second.polygon.edges() {
        let outward = (v - u).perp() * -1.0;
        let Ok(hp) = HalfPlane::new(outward.x, outward.y, outward.dot(u)) else {
            continue;
        };
        ring = clip_ring(&ring, &hp, tol);
        if ring.is_empty() {
            break;
        }
    }
    let kind = match classify_ring(simplify_ring(ring, tol), tol) {
        Clipped::Polygon(poly) if poly.area() > tol * tol => {
            return Err(Error::FullDimensionalOverlap(site_pair.0, site_pair.1));
        }
        Clipped::Polygon(poly) => extent_kind(poly.vertices(), tol),
        Clipped::Degenerate(pts) => extent_kind(&pts, tol),
        // Within tolerance by distance but the clip lost it: report the
        // closest approach as the meeting point.
        Clipped::Empty => ProximalKind::Vertex {
            point: pa.midpoint(pb),
        },
    };
    Ok(ProximalRegion { site_pair, kind })
}

fn extent_kind(pts: &[Point], tol: f64) -> ProximalKind {
    let mut far = (pts[0], pts[0], 0.0);
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let d = p.distance(q);
            if d > far.2 {
                far = (p, q, d);
            }
        }
    }
    let (p, q, len) = far;
    if len <= tol {
        let sum = pts.iter().fold(Point::default(), |acc, &v| acc + v);
        ProximalKind::Vertex {
            point: sum * (1.0 / pts.len() as f64),
        }
    } else if p.lex_cmp(&q).is_le() {
        ProximalKind::Edge { a: p, b: q }
    } else {
        ProximalKind::Edge { a: q, b: p }
    }
}

/// δ over the cells of a diagram: one edge per proximal pair of distinct
/// sites, labelled with the classified region.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityGraph {
    node_count: usize,
    edges: BTreeMap<(usize, usize), ProximalKind>,
}

impl ProximityGraph {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in site-pair order.
    pub fn edges(&self) -> impl Iterator<Item = ProximalRegion> + '_ {
        self.edges.iter().map(|(&site_pair, &kind)| ProximalRegion { site_pair, kind })
    }

    pub fn contains_edge(&self, p: usize, q: usize) -> bool {
        self.edges.contains_key(&(p.min(q), p.max(q)))
    }

    pub fn kind(&self, p: usize, q: usize) -> Option<ProximalKind> {
        self.edges.get(&(p.min(q), p.max(q))).copied()
    }

    pub fn neighbors(&self, p: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == p {
                    Some(b)
                } else if b == p {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, p: usize) -> usize {
        self.edges.keys().filter(|&&(a, b)| a == p || b == p).count()
    }
}

pub fn build_proximity_graph(d: &VoronoiDiagram, tol: f64) -> Result<ProximityGraph> {
    let cells = d.cells();
    let mut edges = BTreeMap::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            let region = proximal_region(&cells[i], &cells[j], tol)?;
            if !region.kind.is_empty() {
                edges.insert(region.site_pair, region.kind);
            }
        }
    }
    Ok(ProximityGraph {
        node_count: cells.len(),
        edges,
    })
}

/// `{y} δ {p} ⇒ {y} δ V_p` for one point: if `y` lies within `tol` of the
/// site then it must lie within `tol` of the site's cell.
pub fn site_closeness_implies_region_closeness(
    y: Point,
    p_id: usize,
    d: &VoronoiDiagram,
    tol: f64,
) -> Result<bool> {
    let cell = d.cell(p_id)?;
    if y.distance(cell.site) <= tol {
        Ok(point_set_distance(y, cell) <= tol)
    } else {
        Ok(true)
    }
}

/// A point of `a` within `tol` of `b`, present exactly when the cells are
/// proximal.
pub fn region_closeness_witness(a: &VoronoiCell, b: &VoronoiCell, tol: f64) -> Option<Point> {
    if a.site_id == b.site_id && a.polygon == b.polygon {
        return a.polygon.vertices().first().copied();
    }
    let (dist, pa, _) = if (a.site_id, a.site.x, a.site.y) <= (b.site_id, b.site.x, b.site.y) {
        closest_pair(a, b)
    } else {
        let (d, pb, pa) = closest_pair(b, a);
        (d, pa, pb)
    };
    (dist <= tol).then_some(pa)
}

/// A total map from source site ids to destination site ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteMapping {
    targets: Vec<usize>,
}

impl SiteMapping {
    pub fn new(targets: Vec<usize>) -> Self {
        SiteMapping { targets }
    }

    pub fn identity(n: usize) -> Self {
        SiteMapping {
            targets: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, target: usize) -> Self {
        SiteMapping {
            targets: vec![target; n],
        }
    }

    pub fn apply(&self, id: usize) -> usize {
        self.targets[id]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }
}

/// One source-proximal pair and whether its image stays proximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairImage {
    pub source: (usize, usize),
    pub image: (usize, usize),
    pub preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub pairs: Vec<PairImage>,
    pub uniformly_continuous: bool,
}

impl ContinuityReport {
    pub fn violations(&self) -> impl Iterator<Item = &PairImage> {
        self.pairs.iter().filter(|p| !p.preserved)
    }
}

/// Checks that δ between source cells carries over to their images.
pub fn check_uniform_continuity(
    m: &SiteMapping,
    src: &VoronoiDiagram,
    dst: &VoronoiDiagram,
    tol: f64,
) -> Result<ContinuityReport> {
    if m.targets.len() != src.len() {
        return Err(Error::InvalidMapping(format!(
            "mapping covers {} sites, source has {}",
            m.targets.len(),
            src.len()
        )));
    }
    if let Some(&bad) = m.targets.iter().find(|&&t| t >= dst.len()) {
        return Err(Error::InvalidMapping(format!(
            "target {bad} out of range for {} destination sites",
            dst.len()
        )));
    }
    let cells = src.cells();
    let mut pairs = Vec::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if !are_proximal(&cells[i], &cells[j], tol) {
                continue;
            }
            let (fi, fj) = (m.apply(i), m.apply(j));
            let preserved = fi == fj || are_proximal(dst.cell(fi)?, dst.cell(fj)?, tol);
            pairs.push(PairImage {
                source: (i, j),
                image: (fi, fj),
                preserved,
            });
        }
    }
    let uniformly_continuous = pairs.iter().all(|p| p.preserved);
    Ok(ContinuityReport {
        pairs,
        uniformly_continuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;
    use crate::voronoi::{build_diagram, BoundingBox, GeneratingSet};

    fn sq_cell(id: usize, x0: f64, x1: f64) -> VoronoiCell {
        VoronoiCell {
            site_id: id,
            site: Point::new(0.5 * (x0 + x1), 0.5),
            polygon: ConvexPolygon::rectangle(x0, 0.0, x1, 1.0).unwrap(),
            touches_boundary: false,
        }
    }

    fn diagram(pts: &[(f64, f64)], bbox: [f64; 4]) -> VoronoiDiagram {
        let s = GeneratingSet::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
        build_diagram(&s, &BoundingBox::new(bbox[0], bbox[1], bbox[2], bbox[3]).unwrap()).unwrap()
    }

    #[test]
    fn point_to_unit_square() {
        let c = sq_cell(0, 0.0, 1.0);
        assert_eq!(point_set_distance(Point::new(0.3, 0.7), &c), 0.0);
        assert!((point_set_distance(Point::new(2.0, 0.5), &c) - 1.0).abs() < 1e-15);
        assert!((point_set_distance(Point::new(2.0, 2.0), &c) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gap_between_squares() {
        let a = sq_cell(0, 0.0, 1.0);
        let b = sq_cell(1, 3.0, 4.0);
        assert_eq!(cech_distance(&a, &b), 2.0);
        assert_eq!(cech_distance(&b, &a), 2.0);
        assert_eq!(cech_distance(&a, &a), 0.0);
        assert!(!are_proximal(&a, &b, 1e-9));
        assert_eq!(region_closeness_witness(&a, &b, 1e-9), None);
        assert!(region_closeness_witness(&a, &a, 1e-9).is_some());
    }

    #[test]
    fn two_site_region_is_the_bisector_edge() {
        let d = diagram(&[(-1.0, 0.0), (1.0, 0.0)], [-2.0, -2.0, 2.0, 2.0]);
        let (a, b) = (&d.cells()[0], &d.cells()[1]);
        assert_eq!(cech_distance(a, b), 0.0);
        let r = proximal_region(a, b, d.tol()).unwrap();
        assert_eq!(
            r.kind,
            ProximalKind::Edge {
                a: Point::new(0.0, -2.0),
                b: Point::new(0.0, 2.0)
            }
        );
        let w = region_closeness_witness(a, b, d.tol()).unwrap();
        assert!(w.x.abs() <= d.tol());
        assert!(point_set_distance(w, b) <= d.tol());
    }

    #[test]
    fn same_site_region_is_an_error() {
        let d = diagram(&[(-1.0, 0.0), (1.0, 0.0)], [-2.0, -2.0, 2.0, 2.0]);
        assert!(proximal_region(&d.cells()[0], &d.cells()[0], d.tol()).is_err());
    }

    #[test]
    fn collinear_path_graph() {
        let d = diagram(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], [-1.0, -1.0, 3.0, 1.0]);
        let g = build_proximity_graph(&d, d.tol()).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains_edge(0, 1) && g.contains_edge(1, 2) && !g.contains_edge(0, 2));
        assert_eq!(g.neighbors(1), vec![0, 2]);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn implication_checks() {
        let d = diagram(&[(0.0, 0.0), (2.0, 0.0)], [-1.0, -1.0, 3.0, 1.0]);
        let tol = d.tol();
        assert!(site_closeness_implies_region_closeness(Point::new(0.0, 0.0), 0, &d, tol).unwrap());
        assert!(site_closeness_implies_region_closeness(Point::new(2.9, 0.9), 0, &d, tol).unwrap());
        assert!(site_closeness_implies_region_closeness(Point::new(0.0, 0.0), 7, &d, tol).is_err());
    }

    #[test]
    fn mapping_validation() {
        let d = diagram(&[(0.0, 0.0), (2.0, 0.0)], [-1.0, -1.0, 3.0, 1.0]);
        let tol = d.tol();
        assert!(check_uniform_continuity(&SiteMapping::new(vec![0]), &d, &d, tol).is_err());
        assert!(check_uniform_continuity(&SiteMapping::new(vec![0, 5]), &d, &d, tol).is_err());
        let r = check_uniform_continuity(&SiteMapping::constant(2, 1), &d, &d, tol).unwrap();
        assert!(r.uniformly_continuous);
        assert_eq!(r.pairs.len(), 1);
    }
}
