//! File formats: sites and diagram documents, grey maps, SVG.

mod diagram_file;
pub mod json;
mod pgm;
mod sites;
mod svg;

pub use diagram_file::{CellRecord, DiagramFileModel, EdgeRecord, ProximityRecord, VertexRecord};
pub use pgm::GreyMap;
pub use sites::{default_bbox, parse_sites, SiteFileModel};
pub use svg::{render_svg, RenderOptions};
