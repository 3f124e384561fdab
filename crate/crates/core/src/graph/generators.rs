use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph};
use crate::error::invalid;
use crate::{Error, Result};

/// Re-draws allowed after the first attempt before a generator gives up on
/// producing a connected graph.
pub const CONNECTIVITY_RETRIES: usize = 50;

fn retry_connected(
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<Graph>,
    reason: &str,
) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=CONNECTIVITY_RETRIES {
        let g = draw(&mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: CONNECTIVITY_RETRIES + 1,
        reason: reason.to_string(),
    })
}

/// Random geometric "sensor" graph in the unit square.
///
/// Nodes within `radius` of each other are joined with Gaussian kernel weight
/// `exp(-d^2 / (2 theta^2))`, `theta = radius / 2`. Placement is redrawn
/// until the graph is connected.
pub fn gen_sensor_graph(n: usize, radius: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(invalid("sensor graph needs at least 2 nodes"));
    }
    if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
        return Err(invalid(format!("radius {radius} outside (0, sqrt 2]")));
    }
    let theta = radius / 2.0;
    retry_connected(
        seed,
        |rng| {
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
                .collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let dx = pts[i].0 - pts[j].0;
                    let dy = pts[i].1 - pts[j].1;
                    let d2 = dx * dx + dy * dy;
                    if d2 <= radius * radius {
                        let w = (-d2 / (2.0 * theta * theta)).exp();
                        edges.push(Edge { i, j, w });
                    }
                }
            }
            Graph::new(n, edges)
        },
        "sensor placement never produced a connected graph",
    )
}

/// Stochastic block model with near-equal community sizes and unit weights.
pub fn gen_community_graph(
    n: usize,
    communities: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<Graph> {
    if n < 2 {
        return Err(invalid("community graph needs at least 2 nodes"));
    }
    if communities == 0 || communities > n {
        return Err(invalid(format!(
            "community count {communities} must be in 1..={n}"
        )));
    }
    if !(0.0 <= p_out && p_out < p_in && p_in <= 1.0) {
        return Err(invalid(format!(
            "need 0 <= p_out < p_in <= 1, got p_in={p_in}, p_out={p_out}"
        )));
    }
    // first n % c communities get one extra node
    let base = n / communities;
    let extra = n % communities;
    let mut label = Vec::with_capacity(n);
    for c in 0..communities {
        let size = base + usize::from(c < extra);
        label.extend(std::iter::repeat_n(c, size));
    }
    retry_connected(
        seed,
        |rng| {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let p = if label[i] == label[j] { p_in } else { p_out };
                    if p > 0.0 && rng.random::<f64>() < p {
                        edges.push(Edge { i, j, w: 1.0 });
                    }
                }
            }
            Graph::new(n, edges)
        },
        "block model never produced a connected graph",
    )
}

/// Regular lattice with `side` nodes per axis and unit nearest-neighbour edges.
pub fn gen_cube_graph(side: usize, dims: usize) -> Result<Graph> {
    if side < 2 {
        return Err(invalid("lattice side must be at least 2"));
    }
    if !(1..=3).contains(&dims) {
        return Err(invalid(format!("lattice dimension {dims} not in 1..=3")));
    }
    let n = side.pow(dims as u32);
    let mut edges = Vec::new();
    for node in 0..n {
        let mut stride = 1;
        for _ in 0..dims {
            let coord = (node / stride) % side;
            if coord + 1 < side {
                edges.push(Edge {
                    i: node,
                    j: node + stride,
                    w: 1.0,
                });
            }
            stride *= side;
        }
    }
    Graph::new(n, edges)
}
