//! SVG 1.1 rendering. The view box equals the bounding box and a group
//! transform flips the y axis so +y points up.

use std::fmt::Write;

use crate::geom::Point;
use crate::proximity::ProximityGraph;
use crate::voronoi::VoronoiDiagram;

use super::json::format_g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub edges: bool,
    pub vertices: bool,
    /// Lines between the sites of proximal cells; needs a graph.
    pub proximity: bool,
    /// Perpendiculars from each site to the sides of its cell.
    pub normals: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            edges: true,
            vertices: true,
            proximity: false,
            normals: false,
        }
    }
}

fn num(v: f64) -> String {
    format_g17(v)
}

fn line(out: &mut String, class: &str, a: Point, b: Point) {
    let _ = writeln!(
        out,
        r#"    <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(a.x),
        num(a.y),
        num(b.x),
        num(b.y)
    );
}

fn circle(out: &mut String, class: &str, c: Point, r: f64, extra: &str) {
    let _ = writeln!(
        out,
        r#"    <circle class="{class}"{extra} cx="{}" cy="{}" r="{}"/>"#,
        num(c.x),
        num(c.y),
        num(r)
    );
}

/// Renders cells, sites and the requested overlays.
pub fn render_svg(d: &VoronoiDiagram, graph: Option<&ProximityGraph>, opts: &RenderOptions) -> String {
    let b = d.bbox();
    let diag = b.diagonal();
    let stroke = diag * 0.002;
    let dot = diag * 0.004;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(b.min_x),
        num(b.min_y),
        num(b.width()),
        num(b.height()),
        num((800.0 * b.height() / b.width()).round().max(1.0)),
    );
    let _ = writeln!(
        out,
        r#"  <g transform="matrix(1 0 0 -1 0 {})" stroke-width="{}">"#,
        num(b.min_y + b.max_y),
        num(stroke)
    );

    out.push_str("  <g class=\"cells\" fill=\"#dde6f0\" stroke=\"#1f4e79\">\n");
    for cell in d.cells() {
        let pts: Vec<String> = cell
            .polygon
            .vertices()
            .iter()
            .map(|p| format!("{},{}", num(p.x), num(p.y)))
            .collect();
        let _ = writeln!(
            out,
            r#"    <polygon class="cell" data-site="{}" points="{}"/>"#,
            cell.site_id,
            pts.join(" ")
        );
    }
    out.push_str("  </g>\n");

    if opts.normals {
        out.push_str("  <g class=\"normals\" stroke=\"#555555\" stroke-dasharray=\"0.5%\">\n");
        for cell in d.cells() {
            for (a, e) in cell.polygon.edges() {
                let foot = crate::geom::closest_point_on_segment(a, e, cell.site);
                line(&mut out, "normal", cell.site, foot);
            }
        }
        out.push_str("  </g>\n");
    }

    if opts.edges {
        out.push_str("  <g class=\"edges\" stroke=\"#c00000\">\n");
        for e in d.edges() {
            line(&mut out, "edge", e.segment.a, e.segment.b);
        }
        out.push_str("  </g>\n");
    }

    if let (true, Some(g)) = (opts.proximity, graph) {
        out.push_str("  <g class=\"proximity\" stroke=\"#2e7d32\">\n");
        for r in g.edges() {
            let sites = d.sites();
            line(&mut out, "proximal", sites[r.site_pair.0], sites[r.site_pair.1]);
        }
        out.push_str("  </g>\n");
    }

    if opts.vertices {
        out.push_str("  <g class=\"vertices\" fill=\"#c00000\" stroke=\"none\">\n");
        for v in d.vertices() {
            circle(&mut out, "vertex", v.point, dot, "");
        }
        out.push_str("  </g>\n");
    }

    out.push_str("  <g class=\"sites\" fill=\"#000000\" stroke=\"none\">\n");
    for cell in d.cells() {
        circle(
            &mut out,
            "site",
            cell.site,
            dot,
            &format!(r#" data-site="{}""#, cell.site_id),
        );
    }
    out.push_str("  </g>\n  </g>\n</svg>\n");
    out
}
