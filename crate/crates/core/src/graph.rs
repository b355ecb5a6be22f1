//! The cycle-plus-chord graph and its Laplacian.
//!
//! Nodes are labelled `1..=n` around the ring, matching the convention
//! used by every analytic formula in this crate; the extra link always
//! joins node 1 to node `m`. Distances are measured on the bare cycle
//! (the chord never shortens them), which is what the localisation
//! formulas expect.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

/// The pair `(n, m)` defining a cycle of `n` nodes with one chord `{1, m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSpec {
    n: usize,
    m: usize,
}

impl GraphSpec {
    /// Node count of the ring.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Chord endpoint; the chord joins nodes 1 and `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Cycle distance between the chord endpoints.
    pub fn chord_span(&self) -> usize {
        cycle_distance(self.n, 1, self.m)
    }

    /// Parity flag: 1 for even `n`, 0 for odd `n`.
    pub fn lambda(&self) -> usize {
        if self.n % 2 == 0 {
            1
        } else {
            0
        }
    }
}

/// Validate and construct a `GraphSpec`.
///
/// Requires `n >= 5` and `3 <= m <= n - 1` so the chord is a genuine
/// extra link (no duplicate edge, no self-loop).
pub fn build_graph(n: usize, m: usize) -> Result<GraphSpec> {
    if n < 5 {
        return Err(Error::domain(format!("need n >= 5, got n = {n}")));
    }
    if m < 3 || m > n - 1 {
        return Err(Error::domain(format!(
            "chord endpoint m = {m} outside the valid range 3..={}",
            n - 1
        )));
    }
    Ok(GraphSpec { n, m })
}

/// Distance between nodes `a` and `b` measured along the bare cycle.
pub fn cycle_distance(n: usize, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// Shortest cycle distance from `j` to either chord endpoint,
/// `min(d(j, 1), d(j, m))`.
pub fn shortest_chord_distance(g: &GraphSpec, j: usize) -> Result<usize> {
    if j < 1 || j > g.n {
        return Err(Error::domain(format!("node {j} out of range 1..={}", g.n)));
    }
    Ok(cycle_distance(g.n, j, 1).min(cycle_distance(g.n, j, g.m)))
}

/// Laplacian of the bare `n`-cycle: 2 on the diagonal, -1 to both ring
/// neighbours. Used as the unperturbed baseline throughout.
pub fn cycle_laplacian(n: usize) -> Matrix {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let mut h = Matrix::zeros(n);
    for i in 0..n {
        h.set(i, i, 2.0);
        let next = (i + 1) % n;
        h.set(i, next, -1.0);
        h.set(next, i, -1.0);
    }
    h
}

/// Laplacian of `G(n, m)`: the cycle Laplacian plus the chord `{1, m}`,
/// which raises both endpoint degrees to 3.
pub fn laplacian(g: &GraphSpec) -> Matrix {
    let mut h = cycle_laplacian(g.n);
    let (a, b) = (0, g.m - 1);
    h.set(a, a, 3.0);
    h.set(b, b, 3.0);
    h.set(a, b, -1.0);
    h.set(b, a, -1.0);
    h
}

/// Degree sequence of `G(n, m)`: 2 everywhere except 3 at nodes 1 and `m`.
pub fn degrees(g: &GraphSpec) -> Vec<usize> {
    (1..=g.n).map(|j| if j == 1 || j == g.m { 3 } else { 2 }).collect()
}
