//! SVG net of the tetrahedron: two squares, the left one split by `uz`,
//! the right one by `vw`. Edges on the outline of both squares are drawn
//! twice and always carry the same points.

use std::fmt::Write as _;

use serde::Serialize;
use tracklab_core::complex::EdgeId;
use tracklab_core::spattern::{strack_decomposition, SingularState};

const SCALE: f64 = 60.0;
const MARGIN: f64 = 40.0;
const PANEL_GAP: f64 = 70.0;
const PALETTE: [&str; 6] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad", "#d68910", "#17808a"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetVertex {
    pub name: String,
    pub square: usize,
    pub at: [f64; 2],
}

/// One drawn copy of an edge, oriented from its smaller vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetEdge {
    pub edge: String,
    pub square: usize,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetTriangle {
    pub triangle: String,
    pub centre: String,
    pub square: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetLayout {
    pub vertices: Vec<NetVertex>,
    pub edges: Vec<NetEdge>,
    pub triangles: Vec<NetTriangle>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlacedPoint {
    pub name: String,
    pub edge: String,
    pub square: usize,
    pub at: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlacedLine {
    pub triangle: String,
    pub ends: [String; 2],
    pub strack: usize,
    pub from: [f64; 2],
    pub to: [f64; 2],
    /// Control point for a same-edge chord, which would otherwise lie on
    /// the edge itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bend: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Panel {
    pub title: String,
    pub points: Vec<PlacedPoint>,
    pub lines: Vec<PlacedLine>,
}

#[derive(Debug, thiserror::Error)]
#[error("the net layout only exists for the tetrahedron")]
pub struct NotTetrahedron;

impl NetLayout {
    pub fn tetrahedron() -> Self {
        let squares: [[(&str, [f64; 2]); 4]; 2] = [
            [("u", [0.0, 0.0]), ("v", [0.0, 4.0]), ("z", [4.0, 4.0]), ("w", [4.0, 0.0])],
            [("z", [6.0, 4.0]), ("v", [10.0, 4.0]), ("u", [10.0, 0.0]), ("w", [6.0, 0.0])],
        ];
        let tris: [[&str; 2]; 2] = [["uvz", "uwz"], ["uvw", "vwz"]];
        let centres = |t: &str| match t {
            "uvz" => "e",
            "uvw" => "f",
            "uwz" => "g",
            _ => "h",
        };
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut triangles = Vec::new();
        for (s, sq) in squares.iter().enumerate() {
            for (name, at) in sq {
                vertices.push(NetVertex { name: name.to_string(), square: s, at: *at });
            }
            let at = |n: char| sq.iter().find(|(m, _)| m.starts_with(n)).map(|(_, p)| *p).unwrap();
            let mut names: Vec<String> = Vec::new();
            for t in tris[s] {
                let cs: Vec<char> = t.chars().collect();
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let id: String = [cs[i], cs[j]].iter().collect();
                    if !names.contains(&id) {
                        edges.push(NetEdge { edge: id.clone(), square: s, from: at(cs[i]), to: at(cs[j]) });
                        names.push(id);
                    }
                }
                triangles.push(NetTriangle { triangle: t.into(), centre: centres(t).into(), square: s });
            }
        }
        NetLayout { vertices, edges, triangles }
    }

    pub fn copies<'a>(&'a self, edge: &'a str) -> impl Iterator<Item = &'a NetEdge> {
        self.edges.iter().filter(move |e| e.edge == edge)
    }

    fn vertex(&self, square: usize, name: &str) -> [f64; 2] {
        self.vertices.iter().find(|v| v.square == square && v.name == name).map(|v| v.at).expect("vertex in square")
    }

    fn square_of(&self, triangle: &str) -> usize {
        self.triangles.iter().find(|t| t.triangle == triangle).map(|t| t.square).expect("triangle in net")
    }

    fn centroid(&self, triangle: &str) -> [f64; 2] {
        let s = self.square_of(triangle);
        let ps: Vec<[f64; 2]> = triangle.chars().map(|c| self.vertex(s, &c.to_string())).collect();
        [(ps[0][0] + ps[1][0] + ps[2][0]) / 3.0, (ps[0][1] + ps[1][1] + ps[2][1]) / 3.0]
    }

    /// Places every point of `s` on every copy of its edge and every line in
    /// the square holding its triangle.
    pub fn place(&self, s: &SingularState, title: &str) -> Result<Panel, NotTetrahedron> {
        let c = s.complex();
        if !c.is_tetrahedron() {
            return Err(NotTetrahedron);
        }
        let mut points = Vec::new();
        for e in c.edge_ids() {
            let range = s.edge_points(e);
            let k = range.len() as f64;
            for copy in self.copies(&c.edge(e).id) {
                for (i, p) in range.clone().enumerate() {
                    let t = (i as f64 + 1.0) / (k + 1.0);
                    points.push(PlacedPoint {
                        name: s.name(p).to_string(),
                        edge: copy.edge.clone(),
                        square: copy.square,
                        at: lerp(copy.from, copy.to, t),
                    });
                }
            }
        }
        let mut strack_of = vec![0usize; s.point_count()];
        for (i, st) in strack_decomposition(s).iter().enumerate() {
            for &p in &st.points {
                strack_of[p] = i;
            }
        }
        let at = |p: usize, square: usize| {
            let edge = &c.edge(s.edge_of(p)).id;
            points
                .iter()
                .find(|q| q.square == square && &q.edge == edge && q.name == s.name(p))
                .map(|q| q.at)
                .expect("point placed in the square of its triangle")
        };
        let mut lines = Vec::new();
        for t in c.triangle_ids() {
            let tname = &c.triangle(t).id;
            let square = self.square_of(tname);
            for &[p, q] in s.lines(t) {
                let (from, to) = (at(p, square), at(q, square));
                let bend = (s.edge_of(p) == s.edge_of(q)).then(|| {
                    let e = s.edge_of(p);
                    let copy = self.copies(&c.edge(e).id).find(|x| x.square == square).unwrap();
                    let span = dist(from, to) / dist(copy.from, copy.to);
                    let mid = lerp(from, to, 0.5);
                    lerp(mid, self.centroid(tname), 0.25 + 0.6 * span)
                });
                lines.push(PlacedLine {
                    triangle: tname.clone(),
                    ends: [s.name(p).to_string(), s.name(q).to_string()],
                    strack: strack_of[p],
                    from,
                    to,
                    bend,
                });
            }
        }
        Ok(Panel { title: title.to_string(), points, lines })
    }

    pub fn panel_height() -> f64 {
        4.0 * SCALE + PANEL_GAP
    }

    /// Renders the panels one above the other.
    pub fn svg(&self, panels: &[Panel]) -> String {
        let width = 10.0 * SCALE + 2.0 * MARGIN;
        let height = panels.len().max(1) as f64 * Self::panel_height() + 2.0 * MARGIN - PANEL_GAP + 30.0;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="14">"#,
            w = width,
            h = height
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let empty = [Panel { title: String::new(), points: Vec::new(), lines: Vec::new() }];
        let panels = if panels.is_empty() { &empty[..] } else { panels };
        for (i, panel) in panels.iter().enumerate() {
            let oy = MARGIN + 30.0 + i as f64 * Self::panel_height();
            let xy = |p: [f64; 2]| (MARGIN + p[0] * SCALE, oy + (4.0 - p[1]) * SCALE);
            let _ = writeln!(out, r#"<g id="panel{i}">"#);
            if !panel.title.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" font-weight="bold">{}</text>"#,
                    MARGIN,
                    oy - 30.0,
                    escape(&panel.title)
                );
            }
            for e in &self.edges {
                let (a, b) = (xy(e.from), xy(e.to));
                let _ = writeln!(
                    out,
                    r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888" stroke-width="1.5"/>"##,
                    a.0, a.1, b.0, b.1
                );
            }
            for t in &self.triangles {
                let (x, y) = xy(self.centroid(&t.triangle));
                let _ = writeln!(
                    out,
                    r##"<text x="{x:.2}" y="{y:.2}" fill="#aaa" text-anchor="middle">{}</text>"##,
                    t.centre
                );
            }
            for v in &self.vertices {
                let (x, y) = xy(v.at);
                let dy = if v.at[1] > 2.0 { -8.0 } else { 18.0 };
                let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y + dy, v.name);
            }
            for l in &panel.lines {
                let colour = PALETTE[l.strack % PALETTE.len()];
                let (a, b) = (xy(l.from), xy(l.to));
                match l.bend {
                    None => {
                        let _ = writeln!(
                            out,
                            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"/>"#,
                            a.0, a.1, b.0, b.1
                        );
                    }
                    Some(m) => {
                        let m = xy(m);
                        let _ = writeln!(
                            out,
                            r#"<path d="M {:.2} {:.2} Q {:.2} {:.2} {:.2} {:.2}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
                            a.0, a.1, m.0, m.1, b.0, b.1
                        );
                    }
                }
            }
            for p in &panel.points {
                let (x, y) = xy(p.at);
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"><title>{}</title></circle>"#,
                    escape(&p.name)
                );
            }
            let _ = writeln!(out, "</g>");
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Names of the points on each drawn copy of `edge`, in drawing order.
pub fn points_on_copies(panel: &Panel, edge: &str) -> Vec<Vec<String>> {
    let mut squares: Vec<usize> = panel.points.iter().filter(|p| p.edge == edge).map(|p| p.square).collect();
    squares.dedup();
    squares
        .into_iter()
        .map(|s| panel.points.iter().filter(|p| p.edge == edge && p.square == s).map(|p| p.name.clone()).collect())
        .collect()
}

pub fn edge_index_is_drawn(layout: &NetLayout, e: EdgeId) -> bool {
    tracklab_core::complex::TETRA_EDGES.get(e.0).is_some_and(|name| layout.copies(name).next().is_some())
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use tracklab_core::fixtures;

    #[test]
    fn every_edge_is_drawn() {
        let net = NetLayout::tetrahedron();
        for e in 0..6 {
            assert!(edge_index_is_drawn(&net, EdgeId(e)));
        }
        assert_eq!(net.edges.len(), 10);
        assert_eq!(net.triangles.len(), 4);
    }

    #[test]
    fn copies_carry_the_same_points() {
        let net = NetLayout::tetrahedron();
        let s = fixtures::spattern(fixtures::TWELVE_STRACK_WITH_LINK).unwrap();
        let panel = net.place(&s, "x").unwrap();
        for name in tracklab_core::complex::TETRA_EDGES {
            let copies = points_on_copies(&panel, name);
            assert!(!copies.is_empty());
            assert!(copies.windows(2).all(|w| w[0] == w[1]), "{name}");
        }
    }
}
