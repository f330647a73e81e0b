//! Fatgraphs (ribbon graphs) given by a vertex rotation and an edge pairing,
//! boundary-component tracing, and the genus of chord diagrams.
//!
//! A fatgraph on half-edges `0..2n` is a pair of permutations: `sigma` rotates
//! the half-edges around each vertex and `alpha` is the fixed-point-free
//! involution pairing the two halves of every edge. The face (boundary) walk
//! is `gamma = alpha ∘ sigma` — apply the rotation first, then cross the edge.
//! With `v` vertices, `e` edges and `r` boundary cycles the Euler
//! characteristic is `v - e + r = 2 - 2g`.
//!
//! A perfect matching on a backbone of `2n'` positions is turned into a
//! one-vertex fatgraph by closing the backbone with an enclosing arc over all
//! positions ("rainbow") and collapsing the backbone into a single fat vertex:
//! half-edges are the `2n' + 2` backbone positions in left-to-right order (the
//! two extremes belong to the added arc), `sigma` is the full cycle over them,
//! and `alpha` pairs arc endpoints. Neither step changes the Euler
//! characteristic, so the resulting genus is the genus of the diagram itself.

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A ribbon graph: vertex rotation `sigma` plus edge involution `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fatgraph {
    sigma: Permutation,
    alpha: Permutation,
}

impl Fatgraph {
    pub fn new(sigma: Permutation, alpha: Permutation) -> Result<Self> {
        if sigma.len() != alpha.len() {
            return Err(Error::SizeMismatch {
                left: sigma.len(),
                right: alpha.len(),
            });
        }
        if !alpha.is_fixed_point_free_involution() {
            let bad = (0..alpha.len())
                .find(|&x| alpha.apply(x) == x || alpha.apply(alpha.apply(x)) != x)
                .unwrap_or(0);
            return Err(Error::InvalidInvolution { half_edge: bad });
        }
        Ok(Self { sigma, alpha })
    }

    pub fn half_edge_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma.cycle_count()
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn alpha(&self) -> &Permutation {
        &self.alpha
    }
}

/// The boundary cycles of a fatgraph, i.e. the cycles of `alpha ∘ sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDecomposition {
    cycles: Vec<Vec<usize>>,
}

impl BoundaryDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn count(&self) -> usize {
        self.cycles.len()
    }
}

/// Traces every boundary component. Each cycle is listed from its smallest
/// half-edge and cycles appear in order of that half-edge.
pub fn trace_boundaries(graph: &Fatgraph) -> BoundaryDecomposition {
    let gamma = graph
        .alpha()
        .compose(graph.sigma())
        .expect("validated sizes match");
    BoundaryDecomposition {
        cycles: gamma.cycles(),
    }
}

/// Genus together with the tracing data it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusResult {
    pub genus: usize,
    /// Number of boundary cycles of the traced fatgraph. For
    /// [`genus_of_matching`] this counts the enclosing arc's extra boundary;
    /// [`genus_of_diagram`] reports the boundary count of the bare diagram.
    pub boundary_count: usize,
    pub euler_characteristic: i64,
}

/// The one-vertex fatgraph of a perfect matching, closed by an arc over the
/// whole backbone. Half-edge `p` is backbone position `p` of the extended
/// diagram (`0` and `2n'+1` are the closing arc's endpoints).
pub fn closed_matching_fatgraph(matching: &Diagram) -> Result<Fatgraph> {
    matching.require_perfect()?;
    let m = matching.length() + 2;
    let mut pair: Vec<usize> = vec![0; m];
    pair[0] = m - 1;
    pair[m - 1] = 0;
    for &(i, j) in matching.arcs() {
        pair[i] = j;
        pair[j] = i;
    }
    let alpha = Permutation::from_images(pair)?;
    Fatgraph::new(Permutation::cyclic(m), alpha)
}

/// Genus of a perfect matching via its closed one-vertex fatgraph.
///
/// With `n` arcs (the closing arc included) and `r` boundary cycles the
/// reported genus satisfies `2 - 2g - r = 1 - n`.
pub fn genus_of_matching(matching: &Diagram) -> Result<GenusResult> {
    let graph = closed_matching_fatgraph(matching)?;
    let r = trace_boundaries(&graph).count();
    let n = graph.edge_count();
    let chi = 1 - n as i64 + r as i64;
    debug_assert_eq!(chi.rem_euclid(2), 0);
    Ok(GenusResult {
        genus: ((2 - chi) / 2) as usize,
        boundary_count: r,
        euler_characteristic: chi,
    })
}

/// Genus of an arbitrary diagram: unpaired positions are stripped and the
/// induced matching is traced. The reported boundary count is that of the
/// bare diagram, one less than the closed fatgraph's (the closing arc always
/// contributes exactly one boundary cycle of its own).
pub fn genus_of_diagram(diagram: &Diagram) -> GenusResult {
    let closed = genus_of_matching(&diagram.induced_matching())
        .expect("induced matching is perfect by construction");
    GenusResult {
        genus: closed.genus,
        boundary_count: closed.boundary_count - 1,
        euler_characteristic: closed.euler_characteristic,
    }
}
