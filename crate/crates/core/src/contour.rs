//! Zero sets of bivariate polynomials by marching squares.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{bifocal_residual, CayleyParams};
use crate::geom::Vec2;
use crate::poly::ImplicitPolynomial;
use crate::polyline::{ArcKind, PolyArc};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least 2 cells per axis, got {nx} x {ny}")]
    TooCoarse { nx: usize, ny: usize },
    #[error("bounding box [{xmin}, {xmax}] x [{ymin}, {ymax}] is degenerate")]
    DegenerateBox { xmin: f64, xmax: f64, ymin: f64, ymax: f64 },
}

/// Axis-aligned box split into `nx * ny` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl ContourGrid {
    pub const DEFAULT_CELLS: usize = 512;

    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self, GridError> {
        if nx < 2 || ny < 2 {
            return Err(GridError::TooCoarse { nx, ny });
        }
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && hi > lo;
        if !(ok(xmin, xmax) && ok(ymin, ymax)) {
            return Err(GridError::DegenerateBox { xmin, xmax, ymin, ymax });
        }
        Ok(ContourGrid { xmin, xmax, ymin, ymax, nx, ny })
    }

    pub fn square(half: f64, cells: usize) -> Result<Self, GridError> {
        Self::new(-half, half, -half, half, cells, cells)
    }

    /// Box of half-width `1.2 (a + b)`, which holds the whole octic zero set, at 512 cells.
    pub fn for_cayley(p: &CayleyParams) -> Self {
        Self::for_cayley_with(p, Self::DEFAULT_CELLS)
    }

    pub fn for_cayley_with(p: &CayleyParams, cells: usize) -> Self {
        let half = 1.2 * (p.a() + p.b());
        ContourGrid { xmin: -half, xmax: half, ymin: -half, ymax: half, nx: cells.max(2), ny: cells.max(2) }
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.ny as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn node(&self, i: usize, j: usize) -> Vec2 {
        let x = if i == self.nx { self.xmax } else { self.xmin + self.dx() * i as f64 };
        let y = if j == self.ny { self.ymax } else { self.ymin + self.dy() * j as f64 };
        Vec2::new(x, y)
    }

    /// Polynomial values at the `(nx + 1) * (ny + 1)` nodes, row by row.
    pub fn sample(&self, p: &ImplicitPolynomial) -> Vec<f64> {
        (0..=self.ny)
            .into_par_iter()
            .flat_map_iter(|j| {
                (0..=self.nx).map(move |i| {
                    let q = self.node(i, j);
                    p.eval(q.x, q.y)
                })
            })
            .collect()
    }
}

/// A grid edge: horizontal from node `(i, j)` to `(i + 1, j)` or vertical to `(i, j + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Zero-level loops and open chains of `p` on `grid`.
///
/// Crossings are placed by linear interpolation along cell edges; the two ambiguous cell
/// configurations are resolved by the sign of `p` at the cell centre. Closed loops repeat their
/// first point at the end.
pub fn contour(p: &ImplicitPolynomial, grid: &ContourGrid) -> Vec<PolyArc> {
    let values = grid.sample(p);
    let w = grid.nx + 1;
    let val = |i: usize, j: usize| values[j * w + i];
    let inside = |i: usize, j: usize| val(i, j) > 0.0;

    let cell_segments: Vec<Vec<(Edge, Edge)>> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let mut segs = Vec::new();
            for i in 0..grid.nx {
                let code = (inside(i, j) as u8)
                    | (inside(i + 1, j) as u8) << 1
                    | (inside(i + 1, j + 1) as u8) << 2
                    | (inside(i, j + 1) as u8) << 3;
                let (b, r, t, l) = (Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j));
                match code {
                    0 | 15 => {}
                    1 | 14 => segs.push((l, b)),
                    2 | 13 => segs.push((b, r)),
                    3 | 12 => segs.push((l, r)),
                    4 | 11 => segs.push((r, t)),
                    6 | 9 => segs.push((b, t)),
                    7 | 8 => segs.push((l, t)),
                    5 | 10 => {
                        let c = grid.node(i, j).lerp(grid.node(i + 1, j + 1), 0.5);
                        let centre_in = p.eval(c.x, c.y) > 0.0;
                        // Corners 0 and 2 share a sign in case 5, corners 1 and 3 in case 10.
                        let diagonal_in = code == 5;
                        if centre_in == diagonal_in {
                            segs.push((l, t));
                            segs.push((b, r));
                        } else {
                            segs.push((l, b));
                            segs.push((r, t));
                        }
                    }
                    _ => unreachable!(),
                }
            }
            segs
        })
        .collect();

    let point = |e: Edge| -> Vec2 {
        let (a, b) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (va, vb) = (val(a.0, a.1), val(b.0, b.1));
        let u = if va == vb { 0.5 } else { (va / (va - vb)).clamp(0.0, 1.0) };
        grid.node(a.0, a.1).lerp(grid.node(b.0, b.1), u)
    };

    let mut adj: HashMap<Edge, Vec<Edge>> = HashMap::new();
    for (a, b) in cell_segments.into_iter().flatten() {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut keys: Vec<Edge> = adj.keys().copied().collect();
    keys.sort();
    // Start open chains at their ends so they are walked in one piece.
    keys.sort_by_key(|k| adj[k].len() != 1);

    let mut used: HashMap<Edge, bool> = HashMap::with_capacity(adj.len());
    let mut arcs = Vec::new();
    for start in keys {
        if used.get(&start).copied().unwrap_or(false) {
            continue;
        }
        let mut chain = vec![start];
        used.insert(start, true);
        let mut prev: Option<Edge> = None;
        let mut cur = start;
        let closed = loop {
            let next = adj[&cur].iter().copied().find(|n| Some(*n) != prev && !used.get(n).copied().unwrap_or(false));
            match next {
                Some(n) => {
                    used.insert(n, true);
                    chain.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => break chain.len() > 2 && adj[&cur].contains(&start),
            }
        };
        let mut arc = PolyArc::new(ArcKind::Contour, "contour");
        arc.points = chain.iter().map(|&e| point(e)).collect();
        if closed {
            arc.points.push(arc.points[0]);
        }
        if arc.len() >= 2 {
            arcs.push(arc);
        }
    }
    arcs
}

/// Median of `|bifocal_residual|` over the loop's vertices; infinite if any vertex is at a focus.
pub fn median_bifocal_residual(arc: &PolyArc, p: &CayleyParams) -> f64 {
    let mut r: Vec<f64> =
        arc.points.iter().map(|&q| bifocal_residual(q, p).map(f64::abs).unwrap_or(f64::INFINITY)).collect();
    if r.is_empty() {
        return f64::INFINITY;
    }
    r.sort_by(f64::total_cmp);
    r[r.len() / 2]
}

/// Keep the loops that lie on the bifocal curve, dropping the extra components of the octic.
pub fn filter_true_oval(loops: &[PolyArc], p: &CayleyParams) -> Vec<PolyArc> {
    loops
        .iter()
        .filter(|l| median_bifocal_residual(l, p) <= tol::TRUE_LOOP_MEDIAN_TOL)
        .map(|l| {
            let mut k = l.clone();
            k.kind = ArcKind::TrueOval;
            k
        })
        .collect()
}
