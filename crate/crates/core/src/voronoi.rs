//! Voronoi cells as intersections of bisector half-planes.
//!
//! Each cell starts as the bounding box and is clipped once per competing
//! site. Edges and vertices are recovered afterwards from the finished cells.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{
    classify_ring, clip_ring, simplify_ring, Clipped, ConvexPolygon, HalfPlane, Point, Segment,
    DEFAULT_RELATIVE_TOLERANCE,
};

/// Ordered list of sites; the index of a site is its id.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingSet {
    sites: Vec<Point>,
}

impl GeneratingSet {
    /// Rejects empty input, non-finite coordinates and exactly repeated sites.
    ///
    /// Near-duplicates are rejected later against the diagram tolerance.
    pub fn new(sites: Vec<Point>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptySites);
        }
        if let Some(p) = sites.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinite { x: p.x, y: p.y });
        }
        let set = GeneratingSet { sites };
        set.check_distinct(0.0)?;
        Ok(set)
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, id: usize) -> Result<Point> {
        self.sites.get(id).copied().ok_or(Error::SiteOutOfRange {
            id,
            len: self.sites.len(),
        })
    }

    pub fn into_sites(self) -> Vec<Point> {
        self.sites
    }

    /// Errors on the first pair of sites within `tol` of each other.
    pub fn check_distinct(&self, tol: f64) -> Result<()> {
        let mut order: Vec<usize> = (0..self.sites.len()).collect();
        order.sort_by(|&a, &b| self.sites[a].x.total_cmp(&self.sites[b].x));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if self.sites[j].x - self.sites[i].x > tol {
                    break;
                }
                if self.sites[i].distance(self.sites[j]) <= tol {
                    return Err(Error::DuplicateSite(i.min(j), i.max(j)));
                }
            }
        }
        Ok(())
    }
}

/// Axis-aligned window every cell is clipped to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        let ok = [min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite())
            && max_x > min_x
            && max_y > min_y;
        if !ok {
            return Err(Error::InvalidBoundingBox(min_x, min_y, max_x, max_y));
        }
        Ok(BoundingBox {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    pub fn unit() -> Self {
        BoundingBox {
            min_x: 0.0,
            min_y: 0.0,
            max_x: 1.0,
            max_y: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.min_x + self.max_x),
            0.5 * (self.min_y + self.max_y),
        )
    }

    pub fn contains_strictly(&self, p: Point) -> bool {
        p.x > self.min_x && p.x < self.max_x && p.y > self.min_y && p.y < self.max_y
    }

    pub fn polygon(&self) -> ConvexPolygon {
        ConvexPolygon::rectangle(self.min_x, self.min_y, self.max_x, self.max_y)
            .expect("validated bounding box")
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.min_x, self.min_y, self.max_x, self.max_y]
    }

    /// True when the segment lies along one of the four sides.
    fn holds_on_side(&self, a: Point, b: Point, tol: f64) -> bool {
        let on = |v: f64, s: f64| (v - s).abs() <= tol;
        (on(a.x, self.min_x) && on(b.x, self.min_x))
            || (on(a.x, self.max_x) && on(b.x, self.max_x))
            || (on(a.y, self.min_y) && on(b.y, self.min_y))
            || (on(a.y, self.max_y) && on(b.y, self.max_y))
    }
}

/// The closed Voronoi region of one site, clipped to the bounding box.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiCell {
    pub site_id: usize,
    pub site: Point,
    pub polygon: ConvexPolygon,
    /// Some polygon edge lies on the bounding box.
    pub touches_boundary: bool,
}

/// A shared boundary interval between two cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiEdge {
    /// Site ids, smaller first.
    pub sites: (usize, usize),
    pub segment: Segment,
}

/// A point shared by three or more closed cells.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiVertex {
    pub point: Point,
    /// Sorted site ids.
    pub incident: Vec<usize>,
}

/// One cell per site plus the extracted edges and vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    generating_set: GeneratingSet,
    bbox: BoundingBox,
    relative_tolerance: f64,
    cells: Vec<VoronoiCell>,
    edges: Vec<VoronoiEdge>,
    vertices: Vec<VoronoiVertex>,
}

impl VoronoiDiagram {
    /// Assembles a diagram from stored parts without recomputing anything.
    /// Use [`VoronoiDiagram::validate`] to check the result.
    pub fn from_parts(
        generating_set: GeneratingSet,
        bbox: BoundingBox,
        relative_tolerance: f64,
        cells: Vec<VoronoiCell>,
        edges: Vec<VoronoiEdge>,
        vertices: Vec<VoronoiVertex>,
    ) -> Self {
        VoronoiDiagram {
            generating_set,
            bbox,
            relative_tolerance,
            cells,
            edges,
            vertices,
        }
    }

    pub fn generating_set(&self) -> &GeneratingSet {
        &self.generating_set
    }

    pub fn sites(&self) -> &[Point] {
        self.generating_set.sites()
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn relative_tolerance(&self) -> f64 {
        self.relative_tolerance
    }

    /// Absolute tolerance: the relative tolerance times the box diagonal.
    pub fn tol(&self) -> f64 {
        self.relative_tolerance * self.bbox.diagonal()
    }

    pub fn cells(&self) -> &[VoronoiCell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> Result<&VoronoiCell> {
        self.cells.get(id).ok_or(Error::SiteOutOfRange {
            id,
            len: self.cells.len(),
        })
    }

    pub fn edges(&self) -> &[VoronoiEdge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VoronoiVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Checks the structural invariants and returns one message per
    /// violation. Residual checks use ten times the diagram tolerance.
    pub fn validate(&self) -> Vec<String> {
        let tol = self.tol();
        let slack = 10.0 * tol;
        let sites = self.sites();
        let mut problems = Vec::new();
        if self.cells.len() != sites.len() {
            problems.push(format!(
                "{} cells for {} sites",
                self.cells.len(),
                sites.len()
            ));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.site_id != i {
                problems.push(format!("cell {i} carries site id {}", cell.site_id));
                continue;
            }
            if sites.get(i) != Some(&cell.site) {
                problems.push(format!("cell {i} site does not match generating set"));
            }
            if ConvexPolygon::new(cell.polygon.vertices().to_vec(), tol).is_err() {
                problems.push(format!("cell {i} is not a valid convex polygon"));
            }
            if !cell.polygon.contains_point(cell.site, tol) {
                problems.push(format!("cell {i} does not contain its site"));
            }
        }
        for e in &self.edges {
            let (p, q) = e.sites;
            let (Some(&sp), Some(&sq)) = (sites.get(p), sites.get(q)) else {
                problems.push(format!("edge ({p},{q}) references a missing site"));
                continue;
            };
            for end in [e.segment.a, e.segment.b] {
                let r = (end.distance(sp) - end.distance(sq)).abs();
                if r > slack {
                    problems.push(format!("edge ({p},{q}) endpoint off bisector by {r:e}"));
                }
            }
        }
        for v in &self.vertices {
            if v.incident.len() < 3 {
                problems.push(format!("vertex at {:?} has fewer than 3 sites", v.point));
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &id in &v.incident {
                match sites.get(id) {
                    Some(s) => {
                        let d = s.distance(v.point);
                        lo = lo.min(d);
                        hi = hi.max(d);
                    }
                    None => problems.push(format!("vertex references missing site {id}")),
                }
            }
            if hi - lo > slack {
                problems.push(format!(
                    "vertex at {:?} spread {:e} exceeds tolerance",
                    v.point,
                    hi - lo
                ));
            }
        }
        problems
    }
}

/// `bbox ∩ ⋂_{q ≠ p} H_pq` for the site `p_id`.
pub fn build_cell(
    set: &GeneratingSet,
    p_id: usize,
    bbox: &BoundingBox,
    tol: f64,
) -> Result<VoronoiCell> {
    let p = set.site(p_id)?;
    let mut ring = bbox.polygon().vertices().to_vec();
    for (q_id, &q) in set.sites().iter().enumerate() {
        if q_id == p_id {
            continue;
        }
        let hp = HalfPlane::bisector(p, q, tol).map_err(|_| {
            Error::DuplicateSite(p_id.min(q_id), p_id.max(q_id))
        })?;
        ring = clip_ring(&ring, &hp, tol);
    }
    let polygon = match classify_ring(simplify_ring(ring, tol), tol) {
        Clipped::Polygon(poly) => poly,
        // A site strictly inside the box keeps a margin of half the distance
        // to its nearest competitor, so this only happens for invalid input.
        _ => {
            return Err(Error::InvalidPolygon(format!(
                "cell of site {p_id} collapsed"
            )))
        }
    };
    let touches_boundary = polygon
        .edges()
        .any(|(a, b)| bbox.holds_on_side(a, b, tol));
    Ok(VoronoiCell {
        site_id: p_id,
        site: p,
        polygon,
        touches_boundary,
    })
}

/// Builds every cell and extracts edges and vertices, using the default
/// relative tolerance.
pub fn build_diagram(set: &GeneratingSet, bbox: &BoundingBox) -> Result<VoronoiDiagram> {
    build_diagram_with_tolerance(set, bbox, DEFAULT_RELATIVE_TOLERANCE)
}

pub fn build_diagram_with_tolerance(
    set: &GeneratingSet,
    bbox: &BoundingBox,
    relative_tolerance: f64,
) -> Result<VoronoiDiagram> {
    let tol = relative_tolerance * bbox.diagonal();
    for (id, &s) in set.sites().iter().enumerate() {
        if !bbox.contains_strictly(s) {
            return Err(Error::SiteOutsideBox { id, x: s.x, y: s.y });
        }
    }
    set.check_distinct(tol)?;
    let cells = (0..set.len())
        .into_par_iter()
        .map(|id| build_cell(set, id, bbox, tol))
        .collect::<Result<Vec<_>>>()?;
    let edges = extract_edges(&cells, tol);
    let vertices = extract_vertices(&cells, tol);
    Ok(VoronoiDiagram {
        generating_set: set.clone(),
        bbox: *bbox,
        relative_tolerance,
        cells,
        edges,
        vertices,
    })
}

/// The edge of `cell` lying on the bisector line `hp`, as parameters along
/// the line direction.
fn interval_on_line(cell: &VoronoiCell, hp: &HalfPlane, tol: f64) -> Option<(f64, f64)> {
    let dir = hp.normal().perp();
    let mut found: Option<(f64, f64)> = None;
    for (a, b) in cell.polygon.edges() {
        if hp.signed_distance(a).abs() <= tol && hp.signed_distance(b).abs() <= tol {
            let (ta, tb) = (dir.dot(a), dir.dot(b));
            let (lo, hi) = (ta.min(tb), ta.max(tb));
            found = Some(match found {
                Some((l, h)) => (l.min(lo), h.max(hi)),
                None => (lo, hi),
            });
        }
    }
    found
}

fn bounds_overlap(a: &ConvexPolygon, b: &ConvexPolygon, tol: f64) -> bool {
    let (alo, ahi) = a.bounds();
    let (blo, bhi) = b.bounds();
    alo.x <= bhi.x + tol && blo.x <= ahi.x + tol && alo.y <= bhi.y + tol && blo.y <= ahi.y + tol
}

/// Edges between every pair of cells whose boundaries share an interval of
/// positive length on their common bisector. Sorted by site pair.
pub fn extract_edges(cells: &[VoronoiCell], tol: f64) -> Vec<VoronoiEdge> {
    let mut edges = Vec::new();
    for (i, ci) in cells.iter().enumerate() {
        for cj in &cells[i + 1..] {
            if !bounds_overlap(&ci.polygon, &cj.polygon, tol) {
                continue;
            }
            let Ok(hp) = HalfPlane::bisector(ci.site, cj.site, tol) else {
                continue;
            };
            if let Some(seg) = shared_interval(ci, cj, &hp, tol) {
                edges.push(VoronoiEdge {
                    sites: (ci.site_id.min(cj.site_id), ci.site_id.max(cj.site_id)),
                    segment: seg,
                });
            }
        }
    }
    edges.sort_by_key(|e| e.sites);
    edges
}

pub(crate) fn shared_interval(
    a: &VoronoiCell,
    b: &VoronoiCell,
    hp: &HalfPlane,
    tol: f64,
) -> Option<Segment> {
    let (alo, ahi) = interval_on_line(a, hp, tol)?;
    let (blo, bhi) = interval_on_line(b, hp, tol)?;
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if hi - lo <= tol {
        return None;
    }
    let dir = hp.normal().perp();
    let base = hp.normal() * hp.offset();
    let mut ends = [base + dir * lo, base + dir * hi];
    ends.sort_by(|p, q| p.lex_cmp(q));
    Some(Segment {
        a: ends[0],
        b: ends[1],
    })
}

/// Points shared by three or more closed cells, coalesced within `tol`.
/// Sorted lexicographically by point.
pub fn extract_vertices(cells: &[VoronoiCell], tol: f64) -> Vec<VoronoiVertex> {
    let mut candidates: Vec<(Point, Vec<usize>)> = Vec::new();
    for cell in cells {
        for &v in cell.polygon.vertices() {
            let incident: Vec<usize> = cells
                .iter()
                .filter(|c| c.polygon.contains_point(v, tol))
                .map(|c| c.site_id)
                .collect();
            if incident.len() >= 3 {
                candidates.push((v, incident));
            }
        }
    }
    let mut clusters: Vec<(Vec<Point>, Vec<usize>)> = Vec::new();
    for (p, ids) in candidates {
        match clusters
            .iter_mut()
            .find(|(pts, _)| pts.iter().any(|q| q.distance(p) <= tol))
        {
            Some((pts, inc)) => {
                pts.push(p);
                inc.extend(ids);
            }
            None => clusters.push((vec![p], ids)),
        }
    }
    let mut out: Vec<VoronoiVertex> = clusters
        .into_iter()
        .map(|(pts, mut incident)| {
            incident.sort_unstable();
            incident.dedup();
            let k = 1.0 / pts.len() as f64;
            let sum = pts.iter().fold(Point::default(), |acc, &p| acc + p);
            VoronoiVertex {
                point: sum * k,
                incident,
            }
        })
        .collect();
    out.sort_by(|a, b| a.point.lex_cmp(&b.point));
    out
}

/// Index of the closest site; sites within `tol` of the best distance lose
/// to the lower index.
pub fn nearest_site(set: &GeneratingSet, x: Point, tol: f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, s) in set.sites().iter().enumerate() {
        let d = s.distance(x);
        if d < best_d - tol {
            best = i;
            best_d = d;
        }
    }
    best
}
