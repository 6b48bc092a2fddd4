use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point, Segment};
use crate::proximity::{ProximalKind, ProximityGraph};
use crate::topology::LeaderTopology;
use crate::voronoi::{
    BoundingBox, GeneratingSet, VoronoiCell, VoronoiDiagram, VoronoiEdge, VoronoiVertex,
};

use super::json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub site_id: usize,
    pub vertices: Vec<[f64; 2]>,
    pub touches_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub sites: [usize; 2],
    pub endpoints: [[f64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub point: [f64; 2],
    pub incident: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximityRecord {
    pub sites: [usize; 2],
    #[serde(flatten)]
    pub kind: ProximalKind,
}

/// On-disk form of a diagram. Records are ordered by site id, then by
/// lexicographic point order, so identical diagrams serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramFileModel {
    pub sites: Vec<[f64; 2]>,
    pub bbox: [f64; 4],
    pub tolerance: f64,
    pub cells: Vec<CellRecord>,
    pub edges: Vec<EdgeRecord>,
    pub vertices: Vec<VertexRecord>,
    pub proximity: Vec<ProximityRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<Vec<Vec<usize>>>,
}

impl DiagramFileModel {
    pub fn from_diagram(
        d: &VoronoiDiagram,
        graph: &ProximityGraph,
        topology: Option<&LeaderTopology>,
    ) -> Self {
        DiagramFileModel {
            sites: d.sites().iter().map(|&p| p.into()).collect(),
            bbox: d.bbox().as_array(),
            tolerance: d.relative_tolerance(),
            cells: d
                .cells()
                .iter()
                .map(|c| CellRecord {
                    site_id: c.site_id,
                    vertices: c.polygon.vertices().iter().map(|&p| p.into()).collect(),
                    touches_boundary: c.touches_boundary,
                })
                .collect(),
            edges: d
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    sites: [e.sites.0, e.sites.1],
                    endpoints: [e.segment.a.into(), e.segment.b.into()],
                })
                .collect(),
            vertices: d
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    point: v.point.into(),
                    incident: v.incident.clone(),
                })
                .collect(),
            proximity: graph
                .edges()
                .map(|r| ProximityRecord {
                    sites: [r.site_pair.0, r.site_pair.1],
                    kind: r.kind,
                })
                .collect(),
            topology: topology.map(|t| {
                t.sorted_families()
                    .into_iter()
                    .map(|f| f.ids().collect())
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        json::to_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Rebuilds the diagram from the stored records and checks every
    /// cross-reference and structural invariant.
    pub fn to_diagram(&self) -> Result<VoronoiDiagram> {
        let bad = |m: String| Error::InvalidDiagram(m);
        let set = GeneratingSet::new(self.sites.iter().map(|&p| Point::from(p)).collect())?;
        let [a, b, c, d] = self.bbox;
        let bbox = BoundingBox::new(a, b, c, d)?;
        let n = set.len();
        let tol = self.tolerance * bbox.diagonal();
        if self.cells.len() != n {
            return Err(bad(format!("{} cells for {n} sites", self.cells.len())));
        }
        let mut cells = Vec::with_capacity(n);
        for (i, rec) in self.cells.iter().enumerate() {
            if rec.site_id != i {
                return Err(bad(format!("cell {i} has site id {}", rec.site_id)));
            }
            let polygon =
                ConvexPolygon::new(rec.vertices.iter().map(|&p| Point::from(p)).collect(), tol)?;
            cells.push(VoronoiCell {
                site_id: i,
                site: set.sites()[i],
                polygon,
                touches_boundary: rec.touches_boundary,
            });
        }
        let check_id = |id: usize| {
            if id < n {
                Ok(id)
            } else {
                Err(bad(format!("site id {id} out of range")))
            }
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (p, q) = (check_id(e.sites[0])?, check_id(e.sites[1])?);
            edges.push(VoronoiEdge {
                sites: (p, q),
                segment: Segment::new(e.endpoints[0].into(), e.endpoints[1].into(), tol)?,
            });
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let incident = v
                .incident
                .iter()
                .map(|&id| check_id(id))
                .collect::<Result<Vec<_>>>()?;
            vertices.push(VoronoiVertex {
                point: v.point.into(),
                incident,
            });
        }
        for r in &self.proximity {
            check_id(r.sites[0])?;
            check_id(r.sites[1])?;
        }
        for fam in self.topology.iter().flatten() {
            for &id in fam {
                check_id(id)?;
            }
        }
        let diagram =
            VoronoiDiagram::from_parts(set, bbox, self.tolerance, cells, edges, vertices);
        let problems = diagram.validate();
        if let Some(first) = problems.first() {
            return Err(bad(first.clone()));
        }
        Ok(diagram)
    }
}
