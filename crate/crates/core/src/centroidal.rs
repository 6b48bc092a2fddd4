//! Centroidal tessellation by Lloyd iteration.
//!
//! Each step builds the diagram of the current sites and moves every site to
//! the centroid of its cell, optionally weighted by a density grid sampled at
//! pixel centres.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Point, DEFAULT_RELATIVE_TOLERANCE};
use crate::voronoi::{build_diagram_with_tolerance, BoundingBox, GeneratingSet, VoronoiCell};

/// Non-negative per-pixel weights laid over a bounding box.
///
/// Row 0 is the top row of the image, so it maps to the top (`max_y`) edge of
/// the box.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    width: usize,
    height: usize,
    values: Vec<f64>,
    bbox: BoundingBox,
}

impl DensityGrid {
    pub fn new(width: usize, height: usize, values: Vec<f64>, bbox: BoundingBox) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDensity("zero-sized grid".into()));
        }
        if values.len() != width * height {
            return Err(Error::InvalidDensity(format!(
                "{} values for a {width}x{height} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidDensity(
                "values must be finite and non-negative".into(),
            ));
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(Error::InvalidDensity("no positive value".into()));
        }
        Ok(DensityGrid {
            width,
            height,
            values,
            bbox,
        })
    }

    pub fn uniform(width: usize, height: usize, value: f64, bbox: BoundingBox) -> Result<Self> {
        DensityGrid::new(width, height, vec![value; width * height], bbox)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn value(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn pixel_size(&self) -> (f64, f64) {
        (
            self.bbox.width() / self.width as f64,
            self.bbox.height() / self.height as f64,
        )
    }

    pub fn pixel_area(&self) -> f64 {
        let (w, h) = self.pixel_size();
        w * h
    }

    /// World coordinates of the centre of pixel `(col, row)`.
    pub fn pixel_center(&self, col: usize, row: usize) -> Point {
        let (w, h) = self.pixel_size();
        Point::new(
            self.bbox.min_x + (col as f64 + 0.5) * w,
            self.bbox.max_y - (row as f64 + 0.5) * h,
        )
    }

    /// Positive-weight pixel centres inside `cell`, as `(centre, weight)`.
    fn samples_in<'a>(&'a self, cell: &'a VoronoiCell) -> impl Iterator<Item = (Point, f64)> + 'a {
        let (lo, hi) = cell.polygon.bounds();
        let (w, h) = self.pixel_size();
        let col_range = |a: f64, b: f64| {
            let c0 = ((a - self.bbox.min_x) / w - 0.5).floor().max(0.0) as usize;
            let c1 = (((b - self.bbox.min_x) / w - 0.5).ceil().max(0.0) as usize).min(self.width - 1);
            c0..=c1
        };
        let row_range = |a: f64, b: f64| {
            let r0 = ((self.bbox.max_y - b) / h - 0.5).floor().max(0.0) as usize;
            let r1 = (((self.bbox.max_y - a) / h - 0.5).ceil().max(0.0) as usize).min(self.height - 1);
            r0..=r1
        };
        let cols = col_range(lo.x, hi.x);
        row_range(lo.y, hi.y).flat_map(move |row| {
            cols.clone().filter_map(move |col| {
                let v = self.value(col, row);
                if v <= 0.0 {
                    return None;
                }
                let c = self.pixel_center(col, row);
                cell.polygon.contains_point(c, 0.0).then_some((c, v))
            })
        })
    }
}

/// Centroid of `cell`: the area centroid without a density, otherwise the
/// weighted mean of positive pixel centres falling in the cell.
pub fn weighted_cell_centroid(cell: &VoronoiCell, density: Option<&DensityGrid>) -> Result<Point> {
    let Some(grid) = density else {
        return cell.polygon.centroid();
    };
    let mut total = 0.0;
    let mut acc = Point::default();
    for (c, v) in grid.samples_in(cell) {
        total += v;
        acc = acc + c * v;
    }
    if total > 0.0 {
        Ok(acc * (1.0 / total))
    } else {
        Err(Error::EmptySupport(cell.site_id))
    }
}

/// Density-weighted `Σ ∫ ‖x − site‖²` over one cell.
fn cell_energy(cell: &VoronoiCell, density: Option<&DensityGrid>) -> f64 {
    match density {
        None => cell.polygon.second_moment_about(cell.site),
        Some(grid) => {
            let area = grid.pixel_area();
            grid.samples_in(cell)
                .map(|(c, v)| v * area * c.distance(cell.site).powi(2))
                .sum()
        }
    }
}

/// Snapshot after one Lloyd step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LloydState {
    /// 1-based step number.
    pub iteration: usize,
    /// Sites after the move.
    #[serde(serialize_with = "serialize_sites")]
    pub sites: GeneratingSet,
    /// Largest site displacement in this step.
    pub movement: f64,
    /// Energy of the configuration the step started from, measured on its
    /// own cells.
    pub energy: f64,
    /// Sites left in place because their cell held no positive density.
    pub stuck: Vec<usize>,
}

fn serialize_sites<S: serde::Serializer>(set: &GeneratingSet, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(set.sites())
}

/// Moves each site to its cell's centroid once.
pub fn lloyd_step(
    s: &GeneratingSet,
    bbox: &BoundingBox,
    density: Option<&DensityGrid>,
) -> Result<(GeneratingSet, LloydState)> {
    lloyd_step_numbered(s, bbox, density, 1)
}

fn lloyd_step_numbered(
    s: &GeneratingSet,
    bbox: &BoundingBox,
    density: Option<&DensityGrid>,
    iteration: usize,
) -> Result<(GeneratingSet, LloydState)> {
    let diagram = build_diagram_with_tolerance(s, bbox, DEFAULT_RELATIVE_TOLERANCE)?;
    let mut next = Vec::with_capacity(s.len());
    let mut stuck = Vec::new();
    let mut movement: f64 = 0.0;
    let mut energy = 0.0;
    for cell in diagram.cells() {
        energy += cell_energy(cell, density);
        let target = match weighted_cell_centroid(cell, density) {
            Ok(c) => c,
            Err(Error::EmptySupport(id)) => {
                stuck.push(id);
                cell.site
            }
            Err(e) => return Err(e),
        };
        movement = movement.max(target.distance(cell.site));
        next.push(target);
    }
    let sites = GeneratingSet::new(next)?;
    let state = LloydState {
        iteration,
        sites: sites.clone(),
        movement,
        energy,
        stuck,
    };
    Ok((sites, state))
}

/// Final sites and one state per executed step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LloydRun {
    #[serde(serialize_with = "serialize_sites")]
    pub sites: GeneratingSet,
    pub history: Vec<LloydState>,
    pub converged: bool,
}

/// Runs Lloyd steps until the largest displacement drops to `movement_tol`
/// or `max_iters` steps have run.
pub fn lloyd_iterate(
    s0: &GeneratingSet,
    bbox: &BoundingBox,
    density: Option<&DensityGrid>,
    max_iters: usize,
    movement_tol: f64,
) -> Result<LloydRun> {
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    let mut sites = s0.clone();
    let mut history = Vec::new();
    let mut converged = false;
    for it in 1..=max_iters {
        let (next, state) = lloyd_step_numbered(&sites, bbox, density, it)?;
        sites = next;
        let done = state.movement <= movement_tol;
        history.push(state);
        if done {
            converged = true;
            break;
        }
    }
    Ok(LloydRun {
        sites,
        history,
        converged,
    })
}

/// One site per label: the centroid of the pixel centres carrying it.
///
/// `labels` is row-major with row 0 at the top, like [`DensityGrid`]. Label 0
/// is background and produces no site. Sites are ordered by label value.
pub fn seed_from_labels(
    width: usize,
    height: usize,
    labels: &[u32],
    bbox: &BoundingBox,
) -> Result<GeneratingSet> {
    if labels.len() != width * height || width == 0 || height == 0 {
        return Err(Error::InvalidDensity(format!(
            "{} labels for a {width}x{height} grid",
            labels.len()
        )));
    }
    let w = bbox.width() / width as f64;
    let h = bbox.height() / height as f64;
    let mut sums: std::collections::BTreeMap<u32, (f64, f64, usize)> = Default::default();
    for row in 0..height {
        for col in 0..width {
            let label = labels[row * width + col];
            if label == 0 {
                continue;
            }
            let e = sums.entry(label).or_insert((0.0, 0.0, 0));
            e.0 += bbox.min_x + (col as f64 + 0.5) * w;
            e.1 += bbox.max_y - (row as f64 + 0.5) * h;
            e.2 += 1;
        }
    }
    let sites = sums
        .values()
        .map(|&(sx, sy, n)| Point::new(sx / n as f64, sy / n as f64))
        .collect();
    GeneratingSet::new(sites)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;

    fn unit_cell() -> VoronoiCell {
        VoronoiCell {
            site_id: 0,
            site: Point::new(0.5, 0.5),
            polygon: ConvexPolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap(),
            touches_boundary: true,
        }
    }

    #[test]
    fn uniform_centroid_matches_polygon_centroid() {
        let c = weighted_cell_centroid(&unit_cell(), None).unwrap();
        assert_eq!(c, Point::new(0.5, 0.5));
        let grid = DensityGrid::uniform(10, 10, 3.0, BoundingBox::unit()).unwrap();
        let c = weighted_cell_centroid(&unit_cell(), Some(&grid)).unwrap();
        assert!(c.distance(Point::new(0.5, 0.5)) < 1e-12);
    }

    #[test]
    fn left_half_density() {
        let n = 20;
        let values: Vec<f64> = (0..n * n)
            .map(|k| if k % n < n / 2 { 1.0 } else { 0.0 })
            .collect();
        let grid = DensityGrid::new(n, n, values, BoundingBox::unit()).unwrap();
        let c = weighted_cell_centroid(&unit_cell(), Some(&grid)).unwrap();
        assert!((c.x - 0.25).abs() <= 0.5 / n as f64);
        assert!((c.y - 0.5).abs() < 1e-12);
    }

    #[test]
    fn point_mass_density() {
        let n = 10;
        let mut values = vec![0.0; n * n];
        // world (0.9, 0.9) falls in column 9, row 0
        values[9] = 5.0;
        let grid = DensityGrid::new(n, n, values, BoundingBox::unit()).unwrap();
        let c = weighted_cell_centroid(&unit_cell(), Some(&grid)).unwrap();
        assert!(c.distance(grid.pixel_center(9, 0)) < 1e-15);
        assert!(c.distance(Point::new(0.95, 0.95)) < 1e-12);
    }

    #[test]
    fn empty_support_is_flagged() {
        let cell = VoronoiCell {
            polygon: ConvexPolygon::rectangle(0.0, 0.0, 0.4, 0.4).unwrap(),
            site: Point::new(0.2, 0.2),
            ..unit_cell()
        };
        let mut values = vec![0.0; 100];
        values[9] = 1.0;
        let grid = DensityGrid::new(10, 10, values, BoundingBox::unit()).unwrap();
        assert_eq!(
            weighted_cell_centroid(&cell, Some(&grid)),
            Err(Error::EmptySupport(0))
        );
    }

    #[test]
    fn density_grid_validation() {
        let b = BoundingBox::unit();
        assert!(DensityGrid::new(2, 2, vec![0.0; 4], b).is_err());
        assert!(DensityGrid::new(2, 2, vec![1.0; 3], b).is_err());
        assert!(DensityGrid::new(2, 2, vec![1.0, -1.0, 1.0, 1.0], b).is_err());
    }

    #[test]
    fn single_site_moves_to_center() {
        let bbox = BoundingBox::new(-1.0, -2.0, 3.0, 2.0).unwrap();
        let s = GeneratingSet::new(vec![Point::new(2.5, 1.5)]).unwrap();
        let (next, state) = lloyd_step(&s, &bbox, None).unwrap();
        assert!(next.sites()[0].distance(bbox.center()) < 1e-12);
        assert!(state.movement > 0.0);
    }

    #[test]
    fn two_site_fixed_point() {
        let bbox = BoundingBox::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        let s = GeneratingSet::new(vec![Point::new(-0.5, 0.0), Point::new(0.5, 0.0)]).unwrap();
        let run = lloyd_iterate(&s, &bbox, None, 10, 1e-9).unwrap();
        assert_eq!(run.history.len(), 1);
        assert!(run.history[0].movement < 1e-12);
        assert!(run.sites.sites()[0].distance(Point::new(-0.5, 0.0)) < 1e-12);
    }

    #[test]
    fn labels_seed_sites() {
        // 4x2 grid, left half label 1, right half label 2
        let labels = [1, 1, 2, 2, 1, 1, 2, 2];
        let bbox = BoundingBox::new(0.0, 0.0, 4.0, 2.0).unwrap();
        let s = seed_from_labels(4, 2, &labels, &bbox).unwrap();
        assert_eq!(s.sites(), &[Point::new(1.0, 1.0), Point::new(3.0, 1.0)]);
    }
}
