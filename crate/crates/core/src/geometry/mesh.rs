use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeTag {
    /// The horizontal walls and the far end of the trapezoid.
    DirichletWall,
    /// The slanted side.
    FreeSide,
    /// The truncation segment `X = L` of the half-strip.
    ArtificialBoundary,
}

impl EdgeTag {
    pub fn name(self) -> &'static str {
        match self {
            EdgeTag::DirichletWall => "dirichlet",
            EdgeTag::FreeSide => "free",
            EdgeTag::ArtificialBoundary => "artificial",
        }
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ElementOrder {
    P1,
    #[default]
    P2,
}

impl ElementOrder {
    pub fn nodes_per_element(self) -> usize {
        match self {
            ElementOrder::P1 => 3,
            ElementOrder::P2 => 6,
        }
    }
}

/// A boundary edge, oriented so that the domain lies on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    /// Midpoint node for P2 meshes.
    pub mid: Option<usize>,
    pub tag: EdgeTag,
}

/// Conforming triangulation with tagged boundary.
///
/// Nodes are the triangle vertices followed, for P2, by the edge midpoints.
/// P2 element connectivity is `[v0, v1, v2, m01, m12, m20]`.
#[derive(Debug, Clone)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    n_vertices: usize,
    triangles: Vec<[usize; 3]>,
    p2: Vec<[usize; 6]>,
    boundary: Vec<BoundaryEdge>,
    order: ElementOrder,
    corner_nodes: [usize; 2],
}

impl Mesh {
    /// Assembles a mesh from a vertex triangulation. Triangles must be
    /// counter-clockwise; boundary edges must be oriented with the domain on
    /// the left.
    pub fn from_parts(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<(usize, usize, EdgeTag)>,
        corner_nodes: [usize; 2],
        order: ElementOrder,
    ) -> Result<Self> {
        let n_vertices = vertices.len();
        let boundary = boundary
            .into_iter()
            .map(|(a, b, tag)| BoundaryEdge {
                nodes: [a, b],
                mid: None,
                tag,
            })
            .collect();
        let m = Mesh {
            nodes: vertices,
            n_vertices,
            triangles,
            p2: Vec::new(),
            boundary,
            order: ElementOrder::P1,
            corner_nodes,
        };
        m.check_topology()?;
        Ok(m.with_order(order))
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.nodes[..self.n_vertices]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn element_order(&self) -> ElementOrder {
        self.order
    }

    /// Node indices of element `e` (3 for P1, 6 for P2).
    pub fn element_nodes(&self, e: usize) -> &[usize] {
        match self.order {
            ElementOrder::P1 => &self.triangles[e],
            ElementOrder::P2 => &self.p2[e],
        }
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn edges_with_tag(&self, tag: EdgeTag) -> impl Iterator<Item = &BoundaryEdge> + '_ {
        self.boundary.iter().filter(move |e| e.tag == tag)
    }

    /// Tip corner `(0,0)` and the opposite end of the slanted side.
    pub fn corner_nodes(&self) -> [usize; 2] {
        self.corner_nodes
    }

    /// Sorted, deduplicated nodes (including P2 midpoints) lying on edges
    /// with any of the given tags.
    pub fn nodes_on(&self, tags: &[EdgeTag]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary
            .iter()
            .filter(|e| tags.contains(&e.tag))
            .flat_map(|e| e.nodes.into_iter().chain(e.mid))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Re-derives the node set for the requested element order.
    pub fn with_order(mut self, order: ElementOrder) -> Self {
        self.nodes.truncate(self.n_vertices);
        self.p2.clear();
        for e in &mut self.boundary {
            e.mid = None;
        }
        if order == ElementOrder::P2 {
            let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
            let mut p2 = Vec::with_capacity(self.triangles.len());
            for t in &self.triangles {
                let mut m = [0usize; 3];
                for k in 0..3 {
                    let (a, b) = (t[k], t[(k + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    m[k] = *mids.entry(key).or_insert_with(|| {
                        let pa = self.nodes[a];
                        let pb = self.nodes[b];
                        self.nodes
                            .push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                        self.nodes.len() - 1
                    });
                }
                p2.push([t[0], t[1], t[2], m[0], m[1], m[2]]);
            }
            for e in &mut self.boundary {
                let [a, b] = e.nodes;
                e.mid = Some(mids[&(a.min(b), a.max(b))]);
            }
            self.p2 = p2;
        }
        self.order = order;
        self
    }

    pub fn signed_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.triangles[e];
        signed_area(self.nodes[a], self.nodes[b], self.nodes[c])
    }

    /// Total area with compensated summation.
    pub fn area(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for e in 0..self.n_elements() {
            let v = self.signed_area(e);
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    pub fn min_signed_area(&self) -> f64 {
        (0..self.n_elements())
            .map(|e| self.signed_area(e))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest shape quality `4√3·A / Σ|edge|²` (1 for equilateral).
    pub fn min_quality(&self) -> f64 {
        (0..self.n_elements())
            .map(|e| {
                let [a, b, c] = self.triangles[e];
                let (pa, pb, pc) = (self.nodes[a], self.nodes[b], self.nodes[c]);
                let s = dist2(pa, pb) + dist2(pb, pc) + dist2(pc, pa);
                4.0 * 3f64.sqrt() * signed_area(pa, pb, pc) / s
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Longest edge over all triangles.
    pub fn h_max(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let p: Vec<[f64; 2]> = t.iter().map(|&i| self.nodes[i]).collect();
                dist2(p[0], p[1])
                    .max(dist2(p[1], p[2]))
                    .max(dist2(p[2], p[0]))
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let p: Vec<[f64; 2]> = t.iter().map(|&i| self.nodes[i]).collect();
                dist2(p[0], p[1])
                    .min(dist2(p[1], p[2]))
                    .min(dist2(p[2], p[0]))
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks orientation, the area against `expected_area`, and boundary
    /// tagging (every boundary edge tagged exactly once).
    pub fn validate(&self, expected_area: f64) -> Result<()> {
        let min = self.min_signed_area();
        if !(min > 0.0) {
            return Err(Error::Invariant(format!(
                "non-positive element area {min:e}"
            )));
        }
        let area = self.area();
        if (area - expected_area).abs() > 1e-12 * expected_area.abs() {
            return Err(Error::Invariant(format!(
                "mesh area {area} differs from {expected_area}"
            )));
        }
        self.check_topology()
    }

    fn check_topology(&self) -> Result<()> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some((e, c)) = count.iter().find(|(_, &c)| c > 2) {
            return Err(Error::Invariant(format!(
                "edge {e:?} shared by {c} triangles"
            )));
        }
        let mut tagged: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.boundary {
            let [a, b] = e.nodes;
            *tagged.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        for (e, &c) in &count {
            let t = tagged.get(e).copied().unwrap_or(0);
            if (c == 1 && t != 1) || (c == 2 && t != 0) {
                return Err(Error::Invariant(format!(
                    "edge {e:?} has {c} triangles but {t} tags"
                )));
            }
        }
        if tagged.len() != self.boundary.len() || tagged.keys().any(|e| !count.contains_key(e)) {
            return Err(Error::Invariant(
                "boundary list contains duplicate or unknown edges".into(),
            ));
        }
        Ok(())
    }

    /// Uniform red refinement: every triangle is split into four.
    pub fn refine(&self) -> Mesh {
        let mut verts: Vec<[f64; 2]> = self.vertices().to_vec();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 2]>| -> usize {
            *mids.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (pa, pb) = (verts[a], verts[b]);
                verts.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                verts.len() - 1
            })
        };
        let mut tris = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            tris.push([a, ab, ca]);
            tris.push([ab, b, bc]);
            tris.push([ca, bc, c]);
            tris.push([ab, bc, ca]);
        }
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for e in &self.boundary {
            let [a, b] = e.nodes;
            let m = mid(a, b, &mut verts);
            boundary.push(BoundaryEdge {
                nodes: [a, m],
                mid: None,
                tag: e.tag,
            });
            boundary.push(BoundaryEdge {
                nodes: [m, b],
                mid: None,
                tag: e.tag,
            });
        }
        let refined = Mesh {
            n_vertices: verts.len(),
            nodes: verts,
            triangles: tris,
            p2: Vec::new(),
            boundary,
            order: ElementOrder::P1,
            corner_nodes: self.corner_nodes,
        };
        refined.with_order(self.order)
    }

    /// Applies an affine map `(x, y) -> (sx·x + tx, sy·y + ty)` with
    /// `sx·sy > 0`.
    pub(crate) fn map_affine(&mut self, sx: f64, tx: f64, sy: f64, ty: f64) {
        for p in &mut self.nodes {
            *p = [sx * p[0] + tx, sy * p[1] + ty];
        }
    }

    /// Writes the vertex skeleton: a `# nodes` section with one `x y` line per
    /// vertex, a `# triangles` section with `i j k`, and a `# boundary`
    /// section with `i j tag`.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# nodes {}", self.n_vertices)?;
        for p in self.vertices() {
            writeln!(out, "{:.17e} {:.17e}", p[0], p[1])?;
        }
        writeln!(out, "# triangles {}", self.triangles.len())?;
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        writeln!(out, "# boundary {}", self.boundary.len())?;
        for e in &self.boundary {
            writeln!(out, "{} {} {}", e.nodes[0], e.nodes[1], e.tag)?;
        }
        Ok(())
    }
}

pub(crate) fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

pub(crate) fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Mesh {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let t = vec![[0, 1, 2], [0, 2, 3]];
        let b = vec![
            (0, 1, EdgeTag::DirichletWall),
            (1, 2, EdgeTag::ArtificialBoundary),
            (2, 3, EdgeTag::DirichletWall),
            (3, 0, EdgeTag::FreeSide),
        ];
        Mesh::from_parts(v, t, b, [0, 3], ElementOrder::P2).unwrap()
    }

    #[test]
    fn p2_numbering() {
        let m = unit_square();
        assert_eq!(m.n_nodes(), 4 + 5);
        assert_eq!(m.element_nodes(0).len(), 6);
        assert_eq!(m.nodes_on(&[EdgeTag::FreeSide]).len(), 3);
        m.validate(1.0).unwrap();
    }

    #[test]
    fn red_refinement_quadruples() {
        let m = unit_square();
        let r = m.refine();
        assert_eq!(r.n_elements(), 8);
        assert_eq!(r.boundary_edges().len(), 8);
        r.validate(1.0).unwrap();
        let rr = r.refine();
        assert_eq!(rr.n_elements(), 32);
        rr.validate(1.0).unwrap();
        assert_eq!(rr.element_order(), ElementOrder::P2);
    }

    #[test]
    fn missing_tag_is_rejected() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let r = Mesh::from_parts(
            v,
            vec![[0, 1, 2]],
            vec![(0, 1, EdgeTag::DirichletWall)],
            [0, 2],
            ElementOrder::P1,
        );
        assert!(r.is_err());
    }

    #[test]
    fn text_dump_sections() {
        let m = unit_square();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# nodes 4\n"));
        assert!(s.contains("# triangles 2\n0 1 2\n0 2 3\n"));
        assert!(s.contains("3 0 free"));
    }
}
