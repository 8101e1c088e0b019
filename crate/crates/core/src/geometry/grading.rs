//! Conforming longest-edge bisection used to grade meshes toward a corner.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::mesh::{dist2, EdgeTag};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Mutable triangulation used while building meshes.
#[derive(Debug, Clone, Default)]
pub(crate) struct WorkMesh {
    pub verts: Vec<[f64; 2]>,
    pub tris: Vec<[usize; 3]>,
    /// Sorted edge key to the oriented boundary edge and its tag.
    pub boundary: HashMap<(usize, usize), (usize, usize, EdgeTag)>,
    edge_tris: HashMap<(usize, usize), [usize; 2]>,
}

impl WorkMesh {
    pub fn add_vertex(&mut self, p: [f64; 2]) -> usize {
        self.verts.push(p);
        self.verts.len() - 1
    }

    pub fn add_triangle(&mut self, t: [usize; 3]) {
        self.tris.push(t);
    }

    pub fn add_boundary(&mut self, a: usize, b: usize, tag: EdgeTag) {
        self.boundary.insert(key(a, b), (a, b, tag));
    }

    fn build_adjacency(&mut self) {
        self.edge_tris.clear();
        for (id, t) in self.tris.iter().enumerate() {
            for k in 0..3 {
                let e = key(t[k], t[(k + 1) % 3]);
                attach(&mut self.edge_tris, e, id);
            }
        }
    }

    /// Strict total order on edges: longer first, ties broken by the
    /// midpoint position so the result does not depend on vertex numbering.
    fn edge_cmp(&self, e1: (usize, usize), e2: (usize, usize)) -> Ordering {
        let (a1, b1) = (self.verts[e1.0], self.verts[e1.1]);
        let (a2, b2) = (self.verts[e2.0], self.verts[e2.1]);
        dist2(a1, b1)
            .total_cmp(&dist2(a2, b2))
            .then_with(|| (a2[0] + b2[0]).total_cmp(&(a1[0] + b1[0])))
            .then_with(|| (a2[1] + b2[1]).total_cmp(&(a1[1] + b1[1])))
    }

    fn longest_edge(&self, t: usize) -> (usize, usize) {
        let tri = self.tris[t];
        let mut best = key(tri[0], tri[1]);
        for k in 1..3 {
            let e = key(tri[k], tri[(k + 1) % 3]);
            if self.edge_cmp(e, best) == Ordering::Greater {
                best = e;
            }
        }
        best
    }

    fn neighbour(&self, t: usize, e: (usize, usize)) -> Option<usize> {
        let pair = self.edge_tris[&e];
        let other = if pair[0] == t { pair[1] } else { pair[0] };
        (other != NONE).then_some(other)
    }

    /// Inserts the midpoint of edge `e` and splits its one or two triangles.
    /// Returns the ids of the split triangles (each keeps its id for one child).
    fn bisect_edge(&mut self, e: (usize, usize)) -> Vec<usize> {
        let (pa, pb) = (self.verts[e.0], self.verts[e.1]);
        let m = self.add_vertex([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
        let owners: Vec<usize> = self
            .edge_tris
            .remove(&e)
            .unwrap()
            .into_iter()
            .filter(|&t| t != NONE)
            .collect();
        for &t in &owners {
            let tri = self.tris[t];
            let k = (0..3)
                .find(|&k| key(tri[k], tri[(k + 1) % 3]) == e)
                .unwrap();
            let (p, q, r) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let tn = self.tris.len();
            self.tris[t] = [p, m, r];
            self.tris.push([m, q, r]);
            attach(&mut self.edge_tris, key(p, m), t);
            attach(&mut self.edge_tris, key(m, q), tn);
            attach(&mut self.edge_tris, key(m, r), t);
            attach(&mut self.edge_tris, key(m, r), tn);
            let slot = self.edge_tris.get_mut(&key(q, r)).unwrap();
            for s in slot.iter_mut() {
                if *s == t {
                    *s = tn;
                }
            }
        }
        if let Some((a, b, tag)) = self.boundary.remove(&e) {
            self.boundary.insert(key(a, m), (a, m, tag));
            self.boundary.insert(key(m, b), (m, b, tag));
        }
        owners
    }

    /// Bisects triangle `t` with Rivara's longest-edge propagation, keeping
    /// the mesh conforming.
    fn refine_triangle(&mut self, t: usize) {
        loop {
            let mut cur = t;
            let terminal = loop {
                let e = self.longest_edge(cur);
                match self.neighbour(cur, e) {
                    None => break e,
                    Some(nb) if self.longest_edge(nb) == e => break e,
                    Some(nb) => cur = nb,
                }
            };
            if self.bisect_edge(terminal).contains(&t) {
                return;
            }
        }
    }

    fn diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.tris[t];
        let (pa, pb, pc) = (self.verts[a], self.verts[b], self.verts[c]);
        dist2(pa, pb).max(dist2(pb, pc)).max(dist2(pc, pa)).sqrt()
    }

    fn distance_to(&self, t: usize, p: [f64; 2]) -> f64 {
        self.tris[t]
            .iter()
            .map(|&v| dist2(self.verts[v], p))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    fn centroid(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.tris[t];
        let (pa, pb, pc) = (self.verts[a], self.verts[b], self.verts[c]);
        [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0]
    }

    /// Refines until every triangle satisfies
    /// `diam ≤ max(h_min, kappa · dist(corner, triangle))`.
    pub fn grade_towards(
        &mut self,
        corner: [f64; 2],
        h_min: f64,
        kappa: f64,
        max_triangles: usize,
    ) -> Result<()> {
        self.build_adjacency();
        let violates =
            |wm: &WorkMesh, t: usize| wm.diameter(t) > h_min.max(kappa * wm.distance_to(t, corner));
        loop {
            let mut bad: Vec<(usize, [f64; 2])> = (0..self.tris.len())
                .filter(|&t| violates(self, t))
                .map(|t| (t, self.centroid(t)))
                .collect();
            if bad.is_empty() {
                return Ok(());
            }
            bad.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]).then(a.1[1].total_cmp(&b.1[1])));
            for (t, c0) in bad {
                // skip triangles already split during this pass
                if self.centroid(t) == c0 && violates(self, t) {
                    self.refine_triangle(t);
                }
                if self.tris.len() > max_triangles {
                    return Err(Error::InvalidMesh(format!(
                        "corner grading exceeded {max_triangles} triangles; increase target_h or relax the grading"
                    )));
                }
            }
        }
    }
}

fn attach(map: &mut HashMap<(usize, usize), [usize; 2]>, e: (usize, usize), t: usize) {
    let slot = map.entry(e).or_insert([NONE, NONE]);
    if slot[0] == NONE {
        slot[0] = t;
    } else {
        debug_assert!(slot[1] == NONE, "edge {e:?} already has two triangles");
        slot[1] = t;
    }
}
