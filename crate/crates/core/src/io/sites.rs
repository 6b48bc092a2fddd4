use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, DEFAULT_RELATIVE_TOLERANCE};
use crate::voronoi::{BoundingBox, GeneratingSet};

use super::json;

/// Contents of a sites file after defaults have been filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteFileModel {
    pub sites: Vec<[f64; 2]>,
    pub bbox: [f64; 4],
    /// Relative to the bounding-box diagonal.
    pub tolerance: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSiteFile {
    sites: Vec<[f64; 2]>,
    #[serde(default)]
    bbox: Option<[f64; 4]>,
    #[serde(default)]
    tolerance: Option<f64>,
}

/// Bounds of `sites` padded on every side by a fifth of their diagonal.
///
/// A single site (zero diagonal) gets a unit pad instead.
pub fn default_bbox(sites: &[[f64; 2]]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for &[x, y] in sites {
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    let diag = (b[2] - b[0]).hypot(b[3] - b[1]);
    let pad = if diag > 0.0 { 0.2 * diag } else { 1.0 };
    [b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad]
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates a sites document, filling in the default bounding
/// box and tolerance.
pub fn parse_sites(document: &str) -> Result<SiteFileModel> {
    let raw: RawSiteFile = serde_json::from_str(document).map_err(parse_error)?;
    if raw.sites.is_empty() {
        return Err(Error::EmptySites);
    }
    let bbox = raw.bbox.unwrap_or_else(|| default_bbox(&raw.sites));
    let tolerance = raw.tolerance.unwrap_or(DEFAULT_RELATIVE_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be finite and non-negative, got {tolerance}"
        )));
    }
    let model = SiteFileModel {
        sites: raw.sites,
        bbox,
        tolerance,
    };
    model.validate()?;
    Ok(model)
}

impl SiteFileModel {
    pub fn new(sites: Vec<[f64; 2]>, bbox: Option<[f64; 4]>, tolerance: Option<f64>) -> Result<Self> {
        let bbox = bbox.unwrap_or_else(|| default_bbox(&sites));
        let model = SiteFileModel {
            sites,
            bbox,
            tolerance: tolerance.unwrap_or(DEFAULT_RELATIVE_TOLERANCE),
        };
        model.validate()?;
        Ok(model)
    }

    /// Sites non-empty and distinct, box valid and strictly containing every site.
    pub fn validate(&self) -> Result<()> {
        let set = self.generating_set()?;
        let bbox = self.bounding_box()?;
        for (id, &s) in set.sites().iter().enumerate() {
            if !bbox.contains_strictly(s) {
                return Err(Error::SiteOutsideBox { id, x: s.x, y: s.y });
            }
        }
        set.check_distinct(self.tolerance * bbox.diagonal())
    }

    pub fn generating_set(&self) -> Result<GeneratingSet> {
        GeneratingSet::new(self.sites.iter().map(|&p| Point::from(p)).collect())
    }

    pub fn bounding_box(&self) -> Result<BoundingBox> {
        let [a, b, c, d] = self.bbox;
        BoundingBox::new(a, b, c, d)
    }

    pub fn to_json(&self) -> String {
        json::to_string(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bbox_pads_by_a_fifth_of_the_diagonal() {
        let m = parse_sites(r#"{"sites": [[0, 0], [2, 0]]}"#).unwrap();
        let expected = [-0.4, -0.4, 2.4, 0.4];
        for (got, want) in m.bbox.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{:?}", m.bbox);
        }
        assert_eq!(m.tolerance, 1e-9);
    }

    #[test]
    fn explicit_bbox_must_contain_sites() {
        let err = parse_sites(r#"{"sites": [[0, 0], [2, 0]], "bbox": [-1, -1, 1, 1]}"#).unwrap_err();
        assert!(matches!(err, Error::SiteOutsideBox { id: 1, .. }));
    }

    #[test]
    fn empty_sites_rejected() {
        assert_eq!(parse_sites(r#"{"sites": []}"#), Err(Error::EmptySites));
    }

    #[test]
    fn duplicate_sites_rejected() {
        let err = parse_sites(r#"{"sites": [[1, 1], [1, 1]]}"#).unwrap_err();
        assert!(matches!(err, Error::DuplicateSite(0, 1)));
    }

    #[test]
    fn parse_error_carries_position() {
        let err = parse_sites("{\n  \"sites\": [[0, 0],\n  oops]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_site_gets_unit_pad() {
        let m = parse_sites(r#"{"sites": [[3, 4]]}"#).unwrap();
        assert_eq!(m.bbox, [2.0, 3.0, 4.0, 5.0]);
    }
}
