//! Reference-element data for affine P1 and P2 triangles.

use crate::geometry::ElementOrder;

/// Barycentric gradients and area of an affine triangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TriGeom {
    pub area: f64,
    pub grads: [[f64; 2]; 3],
    pub verts: [[f64; 2]; 3],
}

impl TriGeom {
    pub fn new(p: [[f64; 2]; 3]) -> Self {
        let det =
            (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        let mut grads = [[0.0; 2]; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            grads[i] = [(p[j][1] - p[k][1]) / det, (p[k][0] - p[j][0]) / det];
        }
        Self {
            area: 0.5 * det,
            grads,
            verts: p,
        }
    }

    pub fn point(&self, l: [f64; 3]) -> [f64; 2] {
        let v = &self.verts;
        [
            l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
            l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
        ]
    }
}

/// Symmetric 6-point rule of degree 4 (barycentric point, weight summing to 1).
pub(crate) fn quadrature_deg4() -> [([f64; 3], f64); 6] {
    let (a, wa) = (0.445948490915965, 0.223381589678011);
    let (c, wc) = (0.091576213509771, 1.0 / 3.0 - 0.223381589678011);
    let (b, d) = (1.0 - 2.0 * a, 1.0 - 2.0 * c);
    [
        ([a, a, b], wa),
        ([a, b, a], wa),
        ([b, a, a], wa),
        ([c, c, d], wc),
        ([c, d, c], wc),
        ([d, c, c], wc),
    ]
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub(crate) fn gauss_unit(n: usize) -> Vec<(f64, f64)> {
    let raw: &[(f64, f64)] = match n {
        3 => &[
            (-0.7745966692414834, 5.0 / 9.0),
            (0.0, 8.0 / 9.0),
            (0.7745966692414834, 5.0 / 9.0),
        ],
        5 => &[
            (-0.906_179_845_938_664, 0.2369268850561891),
            (-0.5384693101056831, 0.4786286704993665),
            (0.0, 0.5688888888888889),
            (0.5384693101056831, 0.4786286704993665),
            (0.906_179_845_938_664, 0.2369268850561891),
        ],
        _ => panic!("unsupported Gauss rule {n}"),
    };
    raw.iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// Shape function values and gradients at barycentric point `l`.
pub(crate) fn shape(
    order: ElementOrder,
    g: &TriGeom,
    l: [f64; 3],
    n: &mut [f64],
    dn: &mut [[f64; 2]],
) {
    let gr = &g.grads;
    match order {
        ElementOrder::P1 => {
            n[..3].copy_from_slice(&l);
            dn[..3].copy_from_slice(gr);
        }
        ElementOrder::P2 => {
            for i in 0..3 {
                n[i] = l[i] * (2.0 * l[i] - 1.0);
                let s = 4.0 * l[i] - 1.0;
                dn[i] = [s * gr[i][0], s * gr[i][1]];
            }
            for (k, (i, j)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
                n[3 + k] = 4.0 * l[i] * l[j];
                dn[3 + k] = [
                    4.0 * (l[j] * gr[i][0] + l[i] * gr[j][0]),
                    4.0 * (l[j] * gr[i][1] + l[i] * gr[j][1]),
                ];
            }
        }
    }
}

/// Element stiffness and mass matrices, row-major `n×n`.
pub(crate) fn element_matrices(order: ElementOrder, g: &TriGeom) -> (Vec<f64>, Vec<f64>) {
    match order {
        ElementOrder::P1 => {
            let mut k = vec![0.0; 9];
            let mut m = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    let (a, b) = (g.grads[i], g.grads[j]);
                    k[3 * i + j] = g.area * (a[0] * b[0] + a[1] * b[1]);
                    m[3 * i + j] = g.area / 12.0 * if i == j { 2.0 } else { 1.0 };
                }
            }
            (k, m)
        }
        ElementOrder::P2 => {
            let mut k = vec![0.0; 36];
            let mut m = vec![0.0; 36];
            let mut n = [0.0; 6];
            let mut dn = [[0.0; 2]; 6];
            for (l, w) in quadrature_deg4() {
                shape(order, g, l, &mut n, &mut dn);
                let wa = w * g.area;
                for i in 0..6 {
                    for j in 0..6 {
                        k[6 * i + j] += wa * (dn[i][0] * dn[j][0] + dn[i][1] * dn[j][1]);
                        m[6 * i + j] += wa * (n[i] * n[j]);
                    }
                }
            }
            (k, m)
        }
    }
}

/// Quadratic edge shape functions at `t ∈ [0,1]` for nodes (start, end, mid).
pub(crate) fn edge_shape(t: f64) -> [f64; 3] {
    [
        (1.0 - t) * (1.0 - 2.0 * t),
        t * (2.0 * t - 1.0),
        4.0 * t * (1.0 - t),
    ]
}

pub(crate) fn edge_shape_dt(t: f64) -> [f64; 3] {
    [4.0 * t - 3.0, 4.0 * t - 1.0, 4.0 - 8.0 * t]
}
