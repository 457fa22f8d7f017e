//! Interaction graph of the networked dynamic system.
//!
//! An edge `(i, j)` means agent `j`'s state enters agent `i`'s dynamics, so
//! `j` is an in-neighbor of `i` and `i` an out-neighbor of `j`. Directed
//! graphs are representable (platoon-style systems), but the proximity
//! builder always produces a symmetric edge set.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::vec2::Vec2;
use crate::{Error, Result, MIN_SEPARATION};

/// Directed interaction graph over `n` agents.
///
/// Immutable after construction; edge iteration order is deterministic
/// (sorted pairs), which keeps every downstream sum reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    /// Builds a graph from explicit directed edges.
    ///
    /// Rejects self-loops and out-of-range indices.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
            if i == j {
                return Err(Error::InvalidParameter { name: "edges (self-loop)" });
            }
            set.insert((i, j));
        }
        Ok(InteractionGraph { n, edges: set })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        InteractionGraph { n, edges: BTreeSet::new() }
    }

    pub fn agent_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// In-neighbors of `i`: agents whose state enters `i`'s dynamics.
    pub fn in_neighbors(&self, i: usize) -> Result<Vec<usize>> {
        self.check_index(i)?;
        Ok(self
            .edges
            .range((i, 0)..=(i, usize::MAX))
            .map(|&(_, j)| j)
            .collect())
    }

    /// Out-neighbors of `i`: agents whose dynamics are affected by `i`.
    pub fn out_neighbors(&self, i: usize) -> Result<Vec<usize>> {
        self.check_index(i)?;
        Ok(self.edges.iter().filter(|&&(_, k)| k == i).map(|&(j, _)| j).collect())
    }

    /// The full neighborhood: union of in- and out-neighbors, sorted.
    pub fn neighbors(&self, i: usize) -> Result<Vec<usize>> {
        let mut set: BTreeSet<usize> = self.in_neighbors(i)?.into_iter().collect();
        set.extend(self.out_neighbors(i)?);
        Ok(set.into_iter().collect())
    }

    /// True when every edge has its reverse present.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(i, j)| self.edges.contains(&(j, i)))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }
}

/// Builds the proximity graph: edge `(i, j)` iff `||x_i - x_j|| <= delta`
/// (boundary inclusive) and `i != j`. Symmetric by construction.
///
/// Coincident positions are rejected: the repulsion field is singular there.
pub fn build_proximity_graph(positions: &[Vec2], delta: f64) -> Result<InteractionGraph> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter { name: "delta" });
    }
    for (i, p) in positions.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite { name: "positions" });
        }
        for (j, q) in positions.iter().enumerate().skip(i + 1) {
            if (*p - *q).norm() < MIN_SEPARATION {
                return Err(Error::CoincidentPositions { i, j });
            }
        }
    }
    let mut edges = BTreeSet::new();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            if (positions[i] - positions[j]).norm() <= delta {
                edges.insert((i, j));
                edges.insert((j, i));
            }
        }
    }
    Ok(InteractionGraph { n: positions.len(), edges })
}
