//! Planar primitives: points, half-planes, segments and convex polygons.
//!
//! Every comparison takes an explicit absolute tolerance. Callers working
//! with a [`BoundingBox`](crate::voronoi::BoundingBox) derive it from the box
//! diagonal and [`DEFAULT_RELATIVE_TOLERANCE`].

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default merge/orientation tolerance, relative to the bounding-box diagonal.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        let p = Point { x, y };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::NonFinite { x, y })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    /// Lexicographic total order on (x, y).
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Turn direction of an ordered point triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Sign of `(q - p) × (r - p)`.
///
/// The cross product is scaled by the longer of the two arms so that `tol` is
/// a length: a triple is collinear when the far point lies within `tol` of the
/// line through the other arm.
pub fn orientation(p: Point, q: Point, r: Point, tol: f64) -> Orientation {
    let u = q - p;
    let v = r - p;
    let cross = u.cross(v);
    let scale = u.norm().max(v.norm());
    if cross.abs() <= tol * scale {
        Orientation::Collinear
    } else if cross > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// The closed half-plane `{ x : normal · x <= offset }` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    normal: Point,
    offset: f64,
}

impl HalfPlane {
    /// Normalizes `(normal_x, normal_y)` and scales `offset` along with it.
    pub fn new(normal_x: f64, normal_y: f64, offset: f64) -> Result<Self> {
        let n = Point::new(normal_x, normal_y);
        let len = n.norm();
        if !len.is_finite() || len == 0.0 || !offset.is_finite() {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfPlane {
            normal: n * (1.0 / len),
            offset: offset / len,
        })
    }

    /// Closed half-plane of points at least as close to `p` as to `q`.
    ///
    /// The boundary is the perpendicular bisector of `pq` and the normal
    /// points from `p` towards `q`.
    pub fn bisector(p: Point, q: Point, tol: f64) -> Result<Self> {
        let d = q - p;
        let len = d.norm();
        if len <= tol || len == 0.0 {
            return Err(Error::CoincidentPoints(p.x, p.y, q.x, q.y));
        }
        let normal = d * (1.0 / len);
        Ok(HalfPlane {
            normal,
            offset: normal.dot(p.midpoint(q)),
        })
    }

    pub fn normal(&self) -> Point {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Positive outside, negative inside, zero on the boundary line.
    pub fn signed_distance(&self, x: Point) -> f64 {
        self.normal.dot(x) - self.offset
    }

    pub fn contains(&self, x: Point, tol: f64) -> bool {
        self.signed_distance(x) <= tol
    }

    /// Orthogonal projection onto the boundary line.
    pub fn project(&self, x: Point) -> Point {
        x - self.normal * self.signed_distance(x)
    }
}

/// See [`HalfPlane::bisector`].
pub fn bisector_half_plane(p: Point, q: Point, tol: f64) -> Result<HalfPlane> {
    HalfPlane::bisector(p, q, tol)
}

/// A closed line segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point, tol: f64) -> Result<Self> {
        if a.distance(b) <= tol {
            return Err(Error::CoincidentPoints(a.x, a.y, b.x, b.y));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn closest_point(&self, x: Point) -> Point {
        closest_point_on_segment(self.a, self.b, x)
    }

    pub fn distance_to_point(&self, x: Point) -> f64 {
        self.closest_point(x).distance(x)
    }
}

pub(crate) fn closest_point_on_segment(a: Point, b: Point, x: Point) -> Point {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return a;
    }
    let t = ((x - a).dot(d) / len2).clamp(0.0, 1.0);
    a.lerp(b, t)
}

/// Closest pair between two closed segments, as `(distance, point on first, point on second)`.
///
/// Symmetric: swapping the arguments swaps the points and leaves the distance
/// bit-for-bit unchanged.
pub(crate) fn segment_closest_pair(a0: Point, a1: Point, b0: Point, b1: Point) -> (f64, Point, Point) {
    if let Some(x) = proper_crossing(a0, a1, b0, b1) {
        return (0.0, x, x);
    }
    let cands = [
        (b0, closest_point_on_segment(a0, a1, b0), true),
        (b1, closest_point_on_segment(a0, a1, b1), true),
        (a0, closest_point_on_segment(b0, b1, a0), false),
        (a1, closest_point_on_segment(b0, b1, a1), false),
    ];
    let mut best = (f64::INFINITY, a0, b0);
    for (from, proj, on_a) in cands {
        let d = from.distance(proj);
        if d < best.0 {
            best = if on_a { (d, proj, from) } else { (d, from, proj) };
        }
    }
    best
}

/// Intersection point when the two segments cross at interior points of both.
fn proper_crossing(a0: Point, a1: Point, b0: Point, b1: Point) -> Option<Point> {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let t = d3 / (d3 - d4);
        Some(a0.lerp(a1, t))
    } else {
        None
    }
}

/// A closed convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// Result of clipping a polygon by a half-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Clipped {
    /// The polygon lies entirely outside the half-plane.
    Empty,
    /// The intersection is a single point or a segment (one or two points).
    Degenerate(Vec<Point>),
    Polygon(ConvexPolygon),
}

impl ConvexPolygon {
    /// Validates vertex count, counter-clockwise orientation and spacing.
    pub fn new(vertices: Vec<Point>, tol: f64) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinite { x: p.x, y: p.y });
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if a.distance(b) <= tol {
                return Err(Error::InvalidPolygon(format!(
                    "vertices {i} and {} closer than tolerance",
                    (i + 1) % n
                )));
            }
            if orientation(a, b, c, tol) == Orientation::Clockwise {
                return Err(Error::InvalidPolygon(format!(
                    "clockwise turn at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        let poly = ConvexPolygon { vertices };
        if poly.signed_area() <= 0.0 {
            return Err(Error::InvalidPolygon("non-positive area".into()));
        }
        Ok(poly)
    }

    /// Axis-aligned rectangle, counter-clockwise from the lower-left corner.
    pub fn rectangle(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        ConvexPolygon::new(
            vec![
                Point::new(min_x, min_y),
                Point::new(max_x, min_y),
                Point::new(max_x, max_y),
                Point::new(min_x, max_y),
            ],
            0.0,
        )
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed boundary edges `(v[i], v[i+1])`.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn signed_area(&self) -> f64 {
        ring_signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// `(min, max)` corners of the axis-aligned bounds.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Closed-set membership: inside, or within `tol` of an edge line.
    pub fn contains_point(&self, x: Point, tol: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(x - a) >= -tol * e.norm()
        })
    }

    /// Area centroid.
    pub fn centroid(&self) -> Result<Point> {
        // Shift to the first vertex so large coordinates do not cancel.
        let origin = self.vertices[0];
        let mut twice_area = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (a, b) in self.edges() {
            let (a, b) = (a - origin, b - origin);
            let w = a.cross(b);
            twice_area += w;
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        let area = 0.5 * twice_area;
        let (lo, hi) = self.bounds();
        let scale = lo.distance(hi);
        let floor = DEFAULT_RELATIVE_TOLERANCE * DEFAULT_RELATIVE_TOLERANCE * scale * scale;
        if area.is_nan() || area <= floor {
            return Err(Error::DegenerateArea(area));
        }
        let k = 1.0 / (3.0 * twice_area);
        Ok(origin + Point::new(cx * k, cy * k))
    }

    /// `∫ ‖x − c‖² dA` over the polygon.
    pub fn second_moment_about(&self, c: Point) -> f64 {
        let mut acc = 0.0;
        for (a, b) in self.edges() {
            let (a, b) = (a - c, b - c);
            let w = a.cross(b);
            acc += w * (a.x * a.x + a.x * b.x + b.x * b.x + a.y * a.y + a.y * b.y + b.y * b.y);
        }
        acc / 12.0
    }

    /// Intersection with a half-plane. Consecutive vertices closer than
    /// `tol` are merged; collinear vertices are kept.
    pub fn clip(&self, hp: &HalfPlane, tol: f64) -> Clipped {
        let ring = dedup_ring(clip_ring(&self.vertices, hp, tol), tol);
        classify_ring(ring, tol)
    }

    /// Minimum distance from `x` to the closed polygon (zero inside).
    pub fn distance_to_point(&self, x: Point) -> f64 {
        if self.contains_point(x, 0.0) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| closest_point_on_segment(a, b, x).distance(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Free-function form of [`ConvexPolygon::clip`].
pub fn clip_polygon(poly: &ConvexPolygon, hp: &HalfPlane, tol: f64) -> Clipped {
    poly.clip(hp, tol)
}

/// Free-function form of [`ConvexPolygon::contains_point`].
pub fn contains_point(poly: &ConvexPolygon, x: Point, tol: f64) -> bool {
    poly.contains_point(x, tol)
}

/// Free-function form of [`ConvexPolygon::centroid`].
pub fn polygon_centroid(poly: &ConvexPolygon) -> Result<Point> {
    poly.centroid()
}

pub(crate) fn ring_signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let origin = ring[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        acc += (ring[i] - origin).cross(ring[i + 1] - origin);
    }
    0.5 * acc
}

/// One reentrant clipping pass over a convex ring.
///
/// Vertices within `tol` of the boundary are kept as they are; an
/// intersection point is emitted only for edges that run from strictly
/// inside to strictly outside (or back).
pub(crate) fn clip_ring(ring: &[Point], hp: &HalfPlane, tol: f64) -> Vec<Point> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let dist: Vec<f64> = ring.iter().map(|&v| hp.signed_distance(v)).collect();
    if dist.iter().all(|&d| d <= tol) {
        out.extend_from_slice(ring);
        return out;
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let (di, dj) = (dist[i], dist[j]);
        if di <= tol {
            out.push(ring[i]);
        }
        if (di < -tol && dj > tol) || (di > tol && dj < -tol) {
            let t = di / (di - dj);
            out.push(ring[i].lerp(ring[j], t));
        }
    }
    out
}

/// Drops consecutive (cyclic) vertices closer than `tol`.
pub(crate) fn dedup_ring(ring: Vec<Point>, tol: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(ring.len());
    for p in ring {
        if out.last().is_none_or(|q| q.distance(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].distance(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// Deduplicates and then removes vertices collinear with their neighbours.
pub(crate) fn simplify_ring(ring: Vec<Point>, tol: f64) -> Vec<Point> {
    let mut ring = dedup_ring(ring, tol);
    loop {
        let n = ring.len();
        if n < 3 {
            return ring;
        }
        let found = (0..n).find(|&i| {
            orientation(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n], tol)
                == Orientation::Collinear
        });
        match found {
            Some(i) => {
                ring.remove(i);
            }
            None => return ring,
        }
    }
}

/// Degenerate extent of a ring: its two extreme points when every vertex
/// lies within `tol` of the line through them, a single point when the ring
/// has collapsed, `None` when the ring has area.
pub(crate) fn degenerate_extent(ring: &[Point], tol: f64) -> Option<Vec<Point>> {
    match ring.len() {
        0 => return Some(Vec::new()),
        1 => return Some(vec![ring[0]]),
        _ => {}
    }
    let mut far = (0, 1, -1.0);
    for i in 0..ring.len() {
        for j in i + 1..ring.len() {
            let d = ring[i].distance(ring[j]);
            if d > far.2 {
                far = (i, j, d);
            }
        }
    }
    let (a, b, len) = (ring[far.0], ring[far.1], far.2);
    if len <= tol {
        return Some(vec![a.midpoint(b)]);
    }
    let dir = (b - a) * (1.0 / len);
    let flat = ring.iter().all(|&p| dir.cross(p - a).abs() <= tol);
    if flat {
        let (a, b) = if a.lex_cmp(&b).is_le() { (a, b) } else { (b, a) };
        Some(vec![a, b])
    } else {
        None
    }
}

pub(crate) fn classify_ring(ring: Vec<Point>, tol: f64) -> Clipped {
    if ring.is_empty() {
        return Clipped::Empty;
    }
    if let Some(pts) = degenerate_extent(&ring, tol) {
        return Clipped::Degenerate(pts);
    }
    match ConvexPolygon::new(ring.clone(), tol) {
        Ok(p) => Clipped::Polygon(p),
        Err(_) => match ConvexPolygon::new(simplify_ring(ring.clone(), tol), tol) {
            Ok(p) => Clipped::Polygon(p),
            Err(_) => Clipped::Degenerate(ring),
        },
    }
}
