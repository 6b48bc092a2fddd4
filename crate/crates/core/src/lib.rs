//! Bounded Voronoi tessellations of the plane, the proximity relation between
//! their cells, the Leader topology that relation generates, and Lloyd
//! relaxation towards centroidal tessellations.
//!
//! ```
//! use proxvor::geom::Point;
//! use proxvor::voronoi::{build_diagram, BoundingBox, GeneratingSet};
//!
//! let sites = GeneratingSet::new(vec![Point::new(0.25, 0.5), Point::new(0.75, 0.5)])?;
//! let d = build_diagram(&sites, &BoundingBox::unit())?;
//! assert_eq!(d.edges().len(), 1);
//! assert!((d.cells()[0].polygon.area() - 0.5).abs() < 1e-12);
//! # Ok::<(), proxvor::Error>(())
//! ```

pub mod centroidal;
pub mod cli;
mod error;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod proximity;
pub mod topology;
pub mod voronoi;

pub use error::{Error, Result};

/// Guide chapters, compiled so their snippets run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/half-planes.md")]
    pub mod half_planes {}
    #[doc = include_str!("../../../book/src/voronoi-cells.md")]
    pub mod voronoi_cells {}
    #[doc = include_str!("../../../book/src/proximity.md")]
    pub mod proximity {}
    #[doc = include_str!("../../../book/src/leader-topology.md")]
    pub mod leader_topology {}
    #[doc = include_str!("../../../book/src/centroidal.md")]
    pub mod centroidal {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
