//! Weighted complete graphs and edge indexing.
//!
//! Vertices are `0..n` in the API. The external text format and all JSON/CSV
//! output use 1-based labels. Edge `{u, v}` with `u < v` has linear index
//! `v (v - 1) / 2 + u`, a bijection onto `0..n (n - 1) / 2`. In 1-based labels
//! this is `(v - 1)(v - 2) / 2 + (u - 1)`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::Distribution;
use crate::error::{Error, Result};

/// Number of edges of the complete graph on `n` vertices.
#[inline]
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Linear index of the edge between two distinct vertices, in either order.
#[inline]
pub fn edge_index(a: usize, b: usize) -> usize {
    debug_assert_ne!(a, b);
    let (u, v) = if a < b { (a, b) } else { (b, a) };
    v * (v - 1) / 2 + u
}

/// Inverse of [`edge_index`]: the endpoints `(u, v)` with `u < v`.
#[inline]
pub fn edge_endpoints(index: usize) -> (usize, usize) {
    // v is the largest integer with v (v - 1) / 2 <= index
    let mut v = ((1.0 + (1.0 + 8.0 * index as f64).sqrt()) / 2.0) as usize;
    while v * (v - 1) / 2 > index {
        v -= 1;
    }
    while (v + 1) * v / 2 <= index {
        v += 1;
    }
    (index - v * (v - 1) / 2, v)
}

/// An edge of `K_n`, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    u: u32,
    v: u32,
}

impl EdgeId {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidParameter(format!("loop at vertex {a}")));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(EdgeId { u: u as u32, v: v as u32 })
    }

    pub fn from_index(index: usize) -> Self {
        let (u, v) = edge_endpoints(index);
        EdgeId { u: u as u32, v: v as u32 }
    }

    pub fn u(self) -> usize {
        self.u as usize
    }

    pub fn v(self) -> usize {
        self.v as usize
    }

    pub fn index(self) -> usize {
        edge_index(self.u(), self.v())
    }
}

/// Maps a 64-bit draw to a uniform in the open interval `(0, 1)`.
#[inline]
fn unit_open(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// The uniform variate attached to edge `index` under `seed`.
///
/// Draw `k` of the ChaCha8 stream keyed by `seed` belongs to edge `k`; the
/// generator is counter based, so any edge can be read without generating
/// its predecessors. [`WeightedCompleteGraph::sample`] produces the same values
/// sequentially.
pub fn edge_uniform(seed: u64, index: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * index as u128);
    unit_open(rng.next_u64())
}

/// Weight of edge `index` under `seed` and `dist`, without building a graph.
pub fn edge_weight(dist: &Distribution, seed: u64, index: usize) -> f64 {
    dist.inverse_cdf(edge_uniform(seed, index))
}

/// `K_n` with one weight per edge.
///
/// All comparisons between edges go through [`WeightedCompleteGraph::lighter`],
/// which orders by `(weight, linear index)`. That order is strict even when
/// two floating-point weights coincide, so the minimum spanning tree of every
/// induced subgraph is unique.
#[derive(Clone, Debug)]
pub struct WeightedCompleteGraph {
    n: usize,
    weights: Vec<f64>,
    seed: Option<u64>,
    distribution: Option<Distribution>,
}

impl WeightedCompleteGraph {
    /// Samples independent weights `inverse_cdf(U_e)` with `U_e` from [`edge_uniform`].
    pub fn sample(n: usize, dist: &Distribution, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
        }
        dist.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::with_capacity(edge_count(n));
        for index in 0..edge_count(n) {
            let w = dist.inverse_cdf(unit_open(rng.next_u64()));
            if !w.is_finite() {
                return Err(Error::Distribution(format!("{dist} produced {w} for edge {index}")));
            }
            weights.push(w);
        }
        Ok(WeightedCompleteGraph { n, weights, seed: Some(seed), distribution: Some(dist.clone()) })
    }

    /// Builds a graph from explicit weights listed by linear index.
    pub fn from_weights(n: usize, weights: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one vertex".into()));
        }
        if weights.len() != edge_count(n) {
            return Err(Error::LengthMismatch { expected: edge_count(n), got: weights.len() });
        }
        if let Some((index, &weight)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::BadWeight { index, weight });
        }
        Ok(WeightedCompleteGraph { n, weights, seed: None, distribution: None })
    }

    /// Reads the text format: `n` on the first line, then one `u v weight`
    /// line per edge, 1-based with `u < v`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).enumerate().filter(|(_, l)| !l.is_empty());
        let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let n: usize = first.parse().map_err(|_| Error::Parse(format!("bad vertex count {first:?}")))?;
        if n == 0 {
            return Err(Error::Parse("vertex count must be positive".into()));
        }
        let mut weights = vec![f64::NAN; edge_count(n)];
        let mut seen = 0;
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected `u v weight`, got {line:?}", lineno + 1));
            if parts.len() != 3 {
                return Err(bad());
            }
            let u: usize = parts[0].parse().map_err(|_| bad())?;
            let v: usize = parts[1].parse().map_err(|_| bad())?;
            let w: f64 = parts[2].parse().map_err(|_| bad())?;
            if !(1 <= u && u < v && v <= n) {
                return Err(Error::Parse(format!("line {}: need 1 <= u < v <= {n}, got {u} {v}", lineno + 1)));
            }
            let idx = edge_index(u - 1, v - 1);
            if !weights[idx].is_nan() {
                return Err(Error::Parse(format!("line {}: edge {u} {v} listed twice", lineno + 1)));
            }
            weights[idx] = w;
            seen += 1;
        }
        if seen != edge_count(n) {
            return Err(Error::LengthMismatch { expected: edge_count(n), got: seen });
        }
        Self::from_weights(n, weights)
    }

    /// Writes the text format read by [`parse`](Self::parse).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for v in 1..self.n {
            for u in 0..v {
                writeln!(out, "{} {} {}", u + 1, v + 1, self.weight(u, v)).unwrap();
            }
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn distribution(&self) -> Option<&Distribution> {
        self.distribution.as_ref()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[edge_index(u, v)]
    }

    #[inline]
    pub fn weight_at(&self, index: usize) -> f64 {
        self.weights[index]
    }

    /// Compares two edges by `(weight, linear index)`.
    #[inline]
    pub fn cmp_edges(&self, a: usize, b: usize) -> Ordering {
        self.weights[a].total_cmp(&self.weights[b]).then(a.cmp(&b))
    }

    /// `true` when edge `a` precedes edge `b` in the strict edge order.
    #[inline]
    pub fn lighter(&self, a: usize, b: usize) -> bool {
        self.cmp_edges(a, b) == Ordering::Less
    }

    /// Largest weight the distribution can produce: `ρ*` for sampled graphs,
    /// the heaviest edge for graphs given explicitly.
    pub fn weight_cap(&self) -> f64 {
        match &self.distribution {
            Some(d) => d.rho_star(),
            None => self.max_weight(),
        }
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Heaviest edge of the graph induced on `vertices`.
    pub fn max_weight_on(&self, vertices: &[usize]) -> f64 {
        let mut best: f64 = 0.0;
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[..i] {
                best = best.max(self.weight(a, b));
            }
        }
        best
    }

    /// The induced graph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<WeightedCompleteGraph> {
        for &v in vertices {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        let k = vertices.len();
        let mut weights = Vec::with_capacity(edge_count(k));
        for j in 1..k {
            for i in 0..j {
                if vertices[i] == vertices[j] {
                    return Err(Error::InvalidParameter(format!("vertex {} repeated", vertices[i])));
                }
                weights.push(self.weight(vertices[i], vertices[j]));
            }
        }
        Ok(WeightedCompleteGraph { n: k.max(1), weights, seed: None, distribution: self.distribution.clone() })
    }

    /// A copy with the weights of selected edges replaced.
    pub fn with_weights_replaced(&self, changes: &[(usize, f64)]) -> Result<WeightedCompleteGraph> {
        let mut weights = self.weights.clone();
        for &(index, w) in changes {
            if index >= weights.len() {
                return Err(Error::InvalidParameter(format!("edge index {index} out of range")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::BadWeight { index, weight: w });
            }
            weights[index] = w;
        }
        Ok(WeightedCompleteGraph { n: self.n, weights, seed: None, distribution: None })
    }
}
