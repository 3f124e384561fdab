//! Weighted undirected graphs and their combinatorial Laplacian.

mod edgelist;
mod generators;

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};

use crate::error::invalid;
use crate::{Result, Scalar};

pub use edgelist::{load_edge_list, parse_edge_list, write_edge_list};
pub use generators::{
    gen_community_graph, gen_cube_graph, gen_sensor_graph, CONNECTIVITY_RETRIES,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected graph on nodes `0..n` with strictly positive edge weights.
///
/// No self-loops and at most one edge per unordered pair. Immutable once
/// built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.i >= n || e.j >= n {
                return Err(invalid(format!(
                    "edge ({}, {}) out of range for {n} nodes",
                    e.i, e.j
                )));
            }
            if e.i == e.j {
                return Err(invalid(format!("self-loop on node {}", e.i)));
            }
            if !(e.w > 0.0 && e.w.is_finite()) {
                return Err(invalid(format!(
                    "edge ({}, {}) has non-positive weight {}",
                    e.i, e.j, e.w
                )));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(invalid(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        adj
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.i == node || e.j == node)
            .count()
    }

    /// Number of connected components (breadth-first search).
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n];
        let mut components = 0;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Combinatorial Laplacian `L = D - W`.
    pub fn laplacian<T: Scalar>(&self) -> LaplacianView<T> {
        let mut matrix = DMatrix::zeros(self.n, self.n);
        let mut degrees = DVector::zeros(self.n);
        for e in &self.edges {
            let w = T::lit(e.w);
            matrix[(e.i, e.j)] -= w;
            matrix[(e.j, e.i)] -= w;
            degrees[e.i] += w;
            degrees[e.j] += w;
        }
        for i in 0..self.n {
            matrix[(i, i)] = degrees[i];
        }
        LaplacianView { matrix, degrees }
    }
}

/// Dense Laplacian together with the degree vector it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianView<T: Scalar> {
    pub matrix: DMatrix<T>,
    pub degrees: DVector<T>,
}

impl<T: Scalar> LaplacianView<T> {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Wrap an arbitrary symmetric matrix (used for tests on non-graph inputs).
    pub fn from_matrix(matrix: DMatrix<T>) -> Self {
        let degrees = matrix.diagonal();
        Self { matrix, degrees }
    }

    /// `||L 1||_inf`.
    pub fn null_residual(&self) -> T {
        let ones = DVector::from_element(self.n(), T::one());
        (&self.matrix * ones).amax()
    }
}

/// Edge list from `(i, j, w)` triples.
pub fn edges_from(triples: &[(usize, usize, f64)]) -> Vec<Edge> {
    triples.iter().map(|&(i, j, w)| Edge { i, j, w }).collect()
}
