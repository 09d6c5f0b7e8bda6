//! Orthonormal associated Legendre functions.
//!
//! `P̄(l, m, z)` is normalised so that `Y(l, m) = P̄(l, m, z) e^{imλ}` has unit
//! `L²` norm on the unit sphere, and carries the Condon–Shortley phase.

use std::f64::consts::PI;

/// Number of `(l, m)` pairs with `0 <= m <= l <= lmax`.
pub fn triangle_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 2) / 2
}

/// Position of `(l, m)` in m-major triangular storage: `m = 0..=lmax`, then `l = m..=lmax`.
#[inline]
pub fn tri_index(lmax: usize, l: usize, m: usize) -> usize {
    debug_assert!(m <= l && l <= lmax);
    m * (lmax + 1) - m * (m.saturating_sub(1)) / 2 + (l - m)
}

/// Coupling coefficient in `z P̄(l,m) = c(l,m) P̄(l+1,m) + c(l-1,m) P̄(l-1,m)`.
///
/// Vanishes for `l + 1 == m` so that the recurrence needs no special casing at
/// the bottom of each `m` column.
#[inline]
pub fn z_coupling(l: usize, m: usize) -> f64 {
    let l = l as f64;
    let m = m as f64;
    let num = (l + 1.0 - m) * (l + 1.0 + m);
    if num <= 0.0 {
        return 0.0;
    }
    (num / ((2.0 * l + 1.0) * (2.0 * l + 3.0))).sqrt()
}

/// `P̄(m, m, z)` with Condon–Shortley phase.
fn sectoral(m: usize, z: f64) -> f64 {
    let s = (1.0 - z * z).max(0.0).sqrt();
    let mut p = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=m {
        let k = k as f64;
        p *= -((2.0 * k + 1.0) / (2.0 * k)).sqrt() * s;
    }
    p
}

/// Fills `out[l - m]` with `P̄(l, m, z)` for `l = m..=lmax` by the three-term
/// recurrence in `l`.
pub fn alp_column(lmax: usize, m: usize, z: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), lmax + 1 - m);
    out[0] = sectoral(m, z);
    if lmax == m {
        return;
    }
    out[1] = z * out[0] / z_coupling(m, m);
    for l in m + 1..lmax {
        let i = l - m;
        out[i + 1] = (z * out[i] - z_coupling(l - 1, m) * out[i - 1]) / z_coupling(l, m);
    }
}

/// `P̄(l, m, z)` for a single triple. Convenience for tests and presets.
pub fn alp(l: usize, m: usize, z: f64) -> f64 {
    assert!(m <= l);
    let mut col = vec![0.0; l + 1 - m];
    alp_column(l, m, z, &mut col);
    col[l - m]
}

/// Normalised associated Legendre values at a set of nodes.
///
/// Layout is node-major: for each node, the full m-major triangle up to `lmax`.
#[derive(Debug, Clone)]
pub struct AlpTable {
    lmax: usize,
    nodes: usize,
    values: Vec<f64>,
}

impl AlpTable {
    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    #[inline]
    pub fn get(&self, l: usize, m: usize, node: usize) -> f64 {
        self.values[node * triangle_len(self.lmax) + tri_index(self.lmax, l, m)]
    }

    /// All `P̄(l, m, z_node)` for `l = m..=lmax`.
    #[inline]
    pub fn column(&self, m: usize, node: usize) -> &[f64] {
        let start = node * triangle_len(self.lmax) + tri_index(self.lmax, m, m);
        &self.values[start..start + self.lmax + 1 - m]
    }
}

/// Tabulates `P̄(l, m, z)` for `0 <= m <= l <= lmax` at every node.
pub fn alp_table(lmax: usize, nodes: &[f64]) -> AlpTable {
    let tri = triangle_len(lmax);
    let mut values = vec![0.0; tri * nodes.len()];
    for (k, &z) in nodes.iter().enumerate() {
        let block = &mut values[k * tri..(k + 1) * tri];
        for m in 0..=lmax {
            let start = tri_index(lmax, m, m);
            alp_column(lmax, m, z, &mut block[start..start + lmax + 1 - m]);
        }
    }
    AlpTable { lmax, nodes: nodes.len(), values }
}
