//! Structured generators for the trapezoid and the truncated half-strip.
//!
//! Both domains are built in units of the strip thickness as
//! `{0 < Y < 1, Y t < X < Lx}` with `t = tan α`, so that the tip regions of
//! a trapezoid and of the half-strip at the same angle receive identical
//! meshes. Negative angles are obtained by reflecting the mesh for `|α|`.

use serde::{Deserialize, Serialize};

use super::domain::{corner_exponents, HalfStripGeom, TrapezoidGeom};
use super::grading::WorkMesh;
use super::mesh::{EdgeTag, ElementOrder, Mesh};
use crate::error::{Error, Result};

/// Mesh grading controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradingSpec {
    /// Refine toward the singular end of the slanted side.
    pub corner_grading: bool,
    /// Local element size as a fraction of the distance to that corner.
    pub kappa: f64,
    /// Smallest element at the corner is `h^(strength / λ)` (thickness units).
    pub strength: f64,
    /// Growth ratio of the column spacing away from the tip.
    pub growth: f64,
    /// Far-field column spacing in units of the layer thickness.
    pub far_aspect: f64,
}

impl Default for GradingSpec {
    fn default() -> Self {
        Self {
            corner_grading: true,
            kappa: 0.45,
            strength: 2.0,
            growth: 1.15,
            far_aspect: 1.0,
        }
    }
}

impl GradingSpec {
    /// Plain tensor grid: no corner refinement, uniform columns.
    pub fn uniform() -> Self {
        Self {
            corner_grading: false,
            kappa: 0.45,
            strength: 2.0,
            growth: 1.0,
            far_aspect: 1.0,
        }
    }

    pub fn with_far_aspect(mut self, far_aspect: f64) -> Self {
        self.far_aspect = far_aspect;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::InvalidMesh(format!(
                "grading kappa must lie in (0,1), got {}",
                self.kappa
            )));
        }
        if !(self.growth >= 1.0 && self.growth <= 2.0) {
            return Err(Error::InvalidMesh(format!(
                "growth ratio must lie in [1,2], got {}",
                self.growth
            )));
        }
        if !(self.far_aspect >= 1.0 && self.far_aspect.is_finite()) {
            return Err(Error::InvalidMesh(format!(
                "far_aspect must be >= 1, got {}",
                self.far_aspect
            )));
        }
        if !(self.strength > 0.0 && self.strength <= 4.0) {
            return Err(Error::InvalidMesh(format!(
                "grading strength must lie in (0,4], got {}",
                self.strength
            )));
        }
        Ok(())
    }
}

const MAX_LAYERS: usize = 4096;
const MAX_TRIANGLES: usize = 4_000_000;

/// Builds a P2 mesh of the trapezoid; `target_h` is in physical units.
pub fn build_trapezoid_mesh(
    geom: &TrapezoidGeom,
    target_h: f64,
    grading: &GradingSpec,
) -> Result<Mesh> {
    let geom = TrapezoidGeom::new(geom.eps, geom.alpha).map(|g| g.with_gamma_bc(geom.gamma_bc))?;
    let eps = geom.eps;
    if !(target_h > 0.0) || target_h > eps.min(1.0) / 2.0 {
        return Err(Error::InvalidMesh(format!(
            "target_h = {target_h} must be positive and at most min(eps, 1)/2 = {} (at least two layers across the thickness)",
            eps.min(1.0) / 2.0
        )));
    }
    let t = geom.alpha.tan();
    let short_side = 1.0 - eps * t.max(0.0);
    if short_side < 4.0 * target_h {
        return Err(Error::InvalidMesh(format!(
            "short horizontal side {short_side} is below 4·target_h = {}; the tip nearly reaches x = 1",
            4.0 * target_h
        )));
    }
    let mut mesh = normalized_mesh(
        1.0 / eps,
        t,
        target_h / eps,
        grading,
        EdgeTag::DirichletWall,
    )?;
    mesh.map_affine(eps, 0.0, eps, 0.0);
    mesh.validate(geom.area())?;
    Ok(mesh)
}

/// Builds a P2 mesh of the truncated half-strip.
pub fn build_halfstrip_mesh(
    geom: &HalfStripGeom,
    target_h: f64,
    grading: &GradingSpec,
) -> Result<Mesh> {
    let geom = HalfStripGeom::new(geom.alpha, geom.truncation_l)?;
    if !(target_h > 0.0) || target_h > 0.5 {
        return Err(Error::InvalidMesh(format!(
            "target_h = {target_h} must be positive and at most 1/2 (at least two layers across the strip)"
        )));
    }
    let mesh = normalized_mesh(
        geom.truncation_l,
        geom.alpha.tan(),
        target_h,
        grading,
        EdgeTag::ArtificialBoundary,
    )?;
    mesh.validate(geom.area())?;
    Ok(mesh)
}

/// Column abscissae from `start` to `end`: spacing `a0` growing by `growth`
/// up to `h_far`. Spacings depend only on the distance from `start`, except
/// for the last one or two which absorb the remainder.
fn columns(start: f64, end: f64, a0: f64, growth: f64, h_far: f64) -> Vec<f64> {
    let mut xs = vec![start];
    let mut s = a0.min(h_far);
    loop {
        let x = *xs.last().unwrap();
        let rem = end - x;
        if rem <= 1.5 * s {
            if rem > 0.75 * s && rem > 1.2 * a0 {
                xs.push(x + 0.5 * rem);
            }
            xs.push(end);
            return xs;
        }
        xs.push(x + s);
        s = (s * growth).min(h_far);
    }
}

fn normalized_mesh(
    lx: f64,
    t: f64,
    h: f64,
    grading: &GradingSpec,
    right_tag: EdgeTag,
) -> Result<Mesh> {
    grading.validate()?;
    let ny = (1.0 / h - 1e-9).ceil().max(1.0) as usize;
    if ny < 2 {
        return Err(Error::InvalidMesh(
            "fewer than two element layers across the thickness".into(),
        ));
    }
    if ny > MAX_LAYERS {
        return Err(Error::InvalidMesh(format!(
            "{ny} layers exceeds the limit of {MAX_LAYERS}"
        )));
    }
    let ta = t.abs();
    // the reflected construction is longer by |t| so that its far end maps to lx
    let len = if t < 0.0 { lx + ta } else { lx };
    let (mut wm, p2) = if ta >= 1.0 {
        triangle_tip(len, ta, ny, grading, right_tag)
    } else {
        sheared_tip(len, ta, ny, grading, right_tag)
    };
    let p1 = 0;
    if grading.corner_grading && ta > 0.0 {
        let (_, lam) = corner_exponents(ta.atan());
        let hy = 1.0 / ny as f64;
        let h_min = hy.powf(grading.strength / lam);
        wm.grade_towards([ta, 1.0], h_min, grading.kappa, MAX_TRIANGLES)?;
    }
    let WorkMesh {
        mut verts,
        mut tris,
        boundary,
        ..
    } = wm;
    let mut edges: Vec<(usize, usize, EdgeTag)> = boundary.into_values().collect();
    edges.sort_by_key(|e| (e.0, e.1));
    let corners = if t < 0.0 {
        for p in &mut verts {
            *p = [p[0] - ta, 1.0 - p[1]];
        }
        for tri in &mut tris {
            tri.swap(1, 2);
        }
        for e in &mut edges {
            *e = (e.1, e.0, e.2);
        }
        edges.sort_by_key(|e| (e.0, e.1));
        [p2, p1]
    } else {
        [p1, p2]
    };
    Mesh::from_parts(verts, tris, edges, corners, ElementOrder::P2)
}

/// Tip block for `t ≥ 1`: the right triangle `(0,0), (t,0), (t,1)` split into
/// `ny²` similar triangles, followed by a rectangular grid.
fn triangle_tip(
    lx: f64,
    t: f64,
    ny: usize,
    g: &GradingSpec,
    right_tag: EdgeTag,
) -> (WorkMesh, usize) {
    let hy = 1.0 / ny as f64;
    let xs = columns(t, lx, hy, g.growth, g.far_aspect * hy);
    let mut wm = WorkMesh::default();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(ny + 1);
    for j in 0..=ny {
        let y = j as f64 / ny as f64;
        let mut row = Vec::new();
        for i in j..ny {
            row.push(wm.add_vertex([t * (i as f64 / ny as f64), y]));
        }
        for &x in &xs {
            row.push(wm.add_vertex([x, y]));
        }
        rows.push(row);
    }
    for j in 0..ny {
        let (lo, hi) = (&rows[j], &rows[j + 1]);
        // lattice column i sits at lo[i - j] and hi[i - j - 1]
        for i in j..ny {
            wm.add_triangle([lo[i - j], lo[i - j + 1], hi[i - j]]);
            if i > j {
                wm.add_triangle([lo[i - j], hi[i - j], hi[i - j - 1]]);
            }
        }
        let (o_lo, o_hi) = (ny - j, ny - j - 1);
        for k in 0..xs.len() - 1 {
            split_quad(
                &mut wm,
                lo[o_lo + k],
                lo[o_lo + k + 1],
                hi[o_hi + k + 1],
                hi[o_hi + k],
            );
        }
    }
    tag_outline(&mut wm, &rows, right_tag);
    let p2 = rows[ny][0];
    (wm, p2)
}

/// Tip block for `0 ≤ t < 1`: a tensor grid whose first columns are sheared
/// so that the left side follows `X = Y t`.
fn sheared_tip(
    lx: f64,
    t: f64,
    ny: usize,
    g: &GradingSpec,
    right_tag: EdgeTag,
) -> (WorkMesh, usize) {
    let hy = 1.0 / ny as f64;
    let xis = columns(0.0, lx, hy, g.growth, g.far_aspect * hy);
    let d = (2.0 * t).max(hy).min(lx);
    let mut wm = WorkMesh::default();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(ny + 1);
    for j in 0..=ny {
        let y = j as f64 / ny as f64;
        let row = xis
            .iter()
            .map(|&xi| {
                let x = if xi == 0.0 {
                    y * t
                } else if xi < d && t > 0.0 {
                    xi + y * t * (1.0 - xi / d)
                } else {
                    xi
                };
                wm.add_vertex([x, y])
            })
            .collect();
        rows.push(row);
    }
    for j in 0..ny {
        for k in 0..xis.len() - 1 {
            let (lo, hi) = (&rows[j], &rows[j + 1]);
            let (sw, se, ne, nw) = (lo[k], lo[k + 1], hi[k + 1], hi[k]);
            split_quad(&mut wm, sw, se, ne, nw);
        }
    }
    tag_outline(&mut wm, &rows, right_tag);
    let p2 = rows[ny][0];
    (wm, p2)
}

/// Splits a convex quadrilateral along its shorter diagonal (SW–NE on ties).
fn split_quad(wm: &mut WorkMesh, sw: usize, se: usize, ne: usize, nw: usize) {
    let d = |a: usize, b: usize| {
        let (p, q) = (wm.verts[a], wm.verts[b]);
        (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
    };
    let (d1, d2) = (d(sw, ne), d(se, nw));
    if d2 < d1 * (1.0 - 1e-12) {
        wm.add_triangle([sw, se, nw]);
        wm.add_triangle([se, ne, nw]);
    } else {
        wm.add_triangle([sw, se, ne]);
        wm.add_triangle([sw, ne, nw]);
    }
}

/// Tags the outline of a row-structured block: bottom and top walls, the far
/// end, and the slanted side (first node of each row).
fn tag_outline(wm: &mut WorkMesh, rows: &[Vec<usize>], right_tag: EdgeTag) {
    let ny = rows.len() - 1;
    let (bottom, top) = (&rows[0], &rows[ny]);
    for w in bottom.windows(2) {
        wm.add_boundary(w[0], w[1], EdgeTag::DirichletWall);
    }
    for w in top.windows(2) {
        wm.add_boundary(w[1], w[0], EdgeTag::DirichletWall);
    }
    for j in 0..ny {
        let (lo, hi) = (&rows[j], &rows[j + 1]);
        wm.add_boundary(*lo.last().unwrap(), *hi.last().unwrap(), right_tag);
        wm.add_boundary(hi[0], lo[0], EdgeTag::FreeSide);
    }
}
