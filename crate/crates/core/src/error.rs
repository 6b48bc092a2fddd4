use thiserror::Error;

/// Errors produced by geometry construction and the file formats built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("points ({0}, {1}) and ({2}, {3}) coincide within tolerance")]
    CoincidentPoints(f64, f64, f64, f64),

    #[error("half-plane normal has zero length")]
    ZeroNormal,

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("polygon area is degenerate ({0:e})")]
    DegenerateArea(f64),

    #[error("generating set is empty")]
    EmptySites,

    #[error("sites {0} and {1} coincide within tolerance")]
    DuplicateSite(usize, usize),

    #[error("site {id} at ({x}, {y}) is not strictly inside the bounding box")]
    SiteOutsideBox { id: usize, x: f64, y: f64 },

    #[error("invalid bounding box [{0}, {1}, {2}, {3}]")]
    InvalidBoundingBox(f64, f64, f64, f64),

    #[error("site id {id} out of range for {len} sites")]
    SiteOutOfRange { id: usize, len: usize },

    #[error("proximal region needs two distinct sites, got {0} twice")]
    SameSite(usize),

    #[error("cells of sites {0} and {1} overlap in a two-dimensional region")]
    FullDimensionalOverlap(usize, usize),

    #[error("invalid site mapping: {0}")]
    InvalidMapping(String),

    #[error("no positive-density pixel lies in the cell of site {0}")]
    EmptySupport(usize),

    #[error("invalid density grid: {0}")]
    InvalidDensity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("topology exceeds {0} families")]
    TopologyTooLarge(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid pgm: {0}")]
    Pgm(String),

    #[error("invalid diagram file: {0}")]
    InvalidDiagram(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
