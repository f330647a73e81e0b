//! Rooted unicellular maps (one-face maps) and the vertex surgery that moves
//! between genera: gluing an odd set of vertices into one raises the genus,
//! slicing a trisection apart lowers it. The two operations are mutually
//! inverse bijections, which is what makes exact-weight random generation of
//! fixed-genus structures possible.
//!
//! # Representation
//!
//! Half-edges are `0..2n`. `sigma` rotates half-edges counterclockwise around
//! their vertex (each vertex is one `sigma`-cycle, a circular linked list with
//! `sigma_inv` as the back pointers), `alpha` pairs the halves of each edge,
//! and the face walk is `gamma = alpha ∘ sigma`. The map is unicellular when
//! `gamma` is a single `2n`-cycle; the walk starting at the distinguished
//! `root` half-edge is the *tour*, `rank[h]` is the tour position of `h`, and
//! `tour_seq` is the inverse table. Both are updated incrementally after
//! every splice, so reads never observe a stale tour.
//!
//! A vertex is named by its [`VertexHandle`]: the first of its half-edges
//! visited by the tour (equivalently, the one of minimum rank). The map also
//! keeps one *representative* half-edge per vertex (not necessarily the
//! handle), so samplers can choose uniform vertices without traversing every
//! `sigma`-cycle.
//!
//! # Surgery on `sigma`
//!
//! Both operations rewrite the images of just three designated half-edges
//! `d1 <γ d2 <γ d3`:
//!
//! * glue:  `sigma(d1), sigma(d2), sigma(d3) <- sigma(d2), sigma(d3), sigma(d1)`
//! * slice: `sigma(d1), sigma(d2), sigma(d3) <- sigma(d3), sigma(d1), sigma(d2)`
//!
//! which splices three vertex cycles into one (or cuts one into three). On
//! the face walk, either move just exchanges two contiguous tour segments,
//! so unicellularity is preserved and the tour tables can be fixed with one
//! in-place rotation instead of a full rewalk — this keeps surgery free of
//! long pointer chases and the whole sampling pipeline effectively linear
//! even when the map no longer fits in cache.

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::perm::Permutation;

const NO_REP: usize = usize::MAX;

/// Size limit under which debug builds re-verify every invariant after each
/// splice by a full walk. Kept small so that randomized large-instance tests
/// and timing measurements exercise the same fast path as release builds.
const FULL_CHECK_LIMIT: usize = 512;

/// A vertex named by its minimum half-edge in tour order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexHandle(pub usize);

/// How a trisection behaves under slicing: `TypeI` slices terminate a slicing
/// cascade, `TypeII` slices leave the trisection in place for another round.
/// Freshly detected trisections are `Unknown` until a slice classifies them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrisectionType {
    TypeI,
    TypeII,
    Unknown,
}

/// A trisection: a half-edge `h` with `rank(sigma(h)) <= rank(h)` whose image
/// `sigma(h)` is not the minimum half-edge of its vertex. A map of genus `g`
/// has exactly `2g` of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trisection {
    pub half_edge: usize,
    pub vertex: VertexHandle,
    pub kind: TrisectionType,
}

/// The tour: half-edge ranks along the face walk from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourOrder {
    rank: Vec<usize>,
}

impl TourOrder {
    pub fn rank(&self, half_edge: usize) -> usize {
        self.rank[half_edge]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Half-edges listed in visit order.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (h, &r) in self.rank.iter().enumerate() {
            seq[r] = h;
        }
        seq
    }
}

/// The outcome of one slice: the three vertices cut loose (in tour order of
/// their handles) and the classification of the trisection that was sliced.
/// A `TypeII` slice returns the still-active trisection in `continues`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceStep {
    pub vertices: [VertexHandle; 3],
    pub kind: TrisectionType,
    pub continues: Option<Trisection>,
}

#[derive(Debug, Clone)]
pub struct UnicellularMap {
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    alpha: Vec<usize>,
    root: usize,
    rank: Vec<usize>,
    tour_seq: Vec<usize>,
    vertex_count: usize,
    /// One member half-edge per vertex, in no particular order.
    reps: Vec<usize>,
    /// Index of a half-edge in `reps`, or `NO_REP`.
    rep_pos: Vec<usize>,
}

impl PartialEq for UnicellularMap {
    /// Maps are equal when their permutation data agree; tour tables and
    /// vertex bookkeeping are derived and representative choices may differ.
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.alpha == other.alpha && self.root == other.root
    }
}

impl Eq for UnicellularMap {}

impl UnicellularMap {
    fn blank(sigma: Vec<usize>, alpha: Vec<usize>, root: usize) -> Self {
        let m = sigma.len();
        let mut sigma_inv = vec![0; m];
        for (x, &y) in sigma.iter().enumerate() {
            sigma_inv[y] = x;
        }
        Self {
            sigma,
            sigma_inv,
            alpha,
            root,
            rank: Vec::new(),
            tour_seq: Vec::new(),
            vertex_count: 0,
            reps: Vec::new(),
            rep_pos: vec![NO_REP; m],
        }
    }

    /// Builds a map from explicit permutations, verifying unicellularity.
    pub fn from_permutations(
        sigma: &Permutation,
        alpha: &Permutation,
        root: usize,
    ) -> Result<Self> {
        if sigma.len() != alpha.len() {
            return Err(Error::SizeMismatch {
                left: sigma.len(),
                right: alpha.len(),
            });
        }
        if sigma.is_empty() || root >= sigma.len() {
            return Err(Error::InvalidDiagram(
                "a unicellular map needs at least one edge and a valid root".into(),
            ));
        }
        if !alpha.is_fixed_point_free_involution() {
            let bad = (0..alpha.len())
                .find(|&x| alpha.apply(x) == x || alpha.apply(alpha.apply(x)) != x)
                .unwrap_or(0);
            return Err(Error::InvalidInvolution { half_edge: bad });
        }
        let mut map = Self::blank(sigma.images().to_vec(), alpha.images().to_vec(), root);
        if !map.walk_tour() {
            let faces = alpha.compose(sigma).expect("sizes match").cycle_count();
            return Err(Error::NotUnicellular { found: faces });
        }
        map.rebuild_vertices();
        Ok(map)
    }

    /// The dual map of a perfect matching: half-edge `h` is backbone position
    /// `h + 1`, `alpha` pairs arc endpoints, and each vertex is a boundary
    /// component of the matching's collapsed fatgraph. The tour revisits the
    /// backbone left to right (`rank(h) = h`) starting at the root `0`, so
    /// the map has `n` edges, one face and `n + 1 - 2g` vertices.
    pub fn from_matching(matching: &Diagram) -> Result<Self> {
        let mut map = Self::dual_skeleton(matching)?;
        map.rebuild_vertices();
        Ok(map)
    }

    /// [`Self::from_matching`] specialized to non-crossing matchings: the
    /// vertex of the dual that sits just under the arc `(i, j)` contains
    /// half-edge `i - 1`, and the outer vertex contains the last half-edge,
    /// so vertex bookkeeping needs no cycle traversal at all. Rejects
    /// crossing inputs.
    pub fn from_noncrossing_matching(matching: &Diagram) -> Result<Self> {
        let mut map = Self::dual_skeleton(matching)?;
        let m = map.sigma.len();
        // Non-crossing check: closing positions must match in stack order.
        let mut stack = Vec::new();
        for h in 0..m {
            let partner = map.alpha[h];
            if partner > h {
                stack.push(h);
            } else if stack.pop() != Some(partner) {
                return Err(Error::InvalidDiagram(
                    "matching has crossing arcs".into(),
                ));
            }
        }
        map.vertex_count = m / 2 + 1;
        for h in 0..m {
            if map.alpha[h] > h {
                map.add_rep(h);
            }
        }
        map.add_rep(m - 1);
        debug_assert!(map.check_invariants());
        Ok(map)
    }

    fn dual_skeleton(matching: &Diagram) -> Result<Self> {
        matching.require_perfect()?;
        let m = matching.length();
        if m == 0 {
            return Err(Error::InvalidDiagram(
                "the empty matching has no dual map".into(),
            ));
        }
        let mut alpha = vec![0; m];
        for &(i, j) in matching.arcs() {
            alpha[i - 1] = j - 1;
            alpha[j - 1] = i - 1;
        }
        let sigma: Vec<usize> = (0..m).map(|h| alpha[(h + 1) % m]).collect();
        // sigma = alpha after a backbone shift, so its inverse is the shift
        // back: sigma_inv(y) = alpha(y) - 1 (mod m). Sequential, unlike the
        // generic inversion scatter.
        let sigma_inv: Vec<usize> = (0..m).map(|y| (alpha[y] + m - 1) % m).collect();
        let mut map = Self {
            sigma,
            sigma_inv,
            alpha,
            root: 0,
            rank: Vec::new(),
            tour_seq: Vec::new(),
            vertex_count: 0,
            reps: Vec::new(),
            rep_pos: vec![NO_REP; m],
        };
        debug_assert!(
            m > FULL_CHECK_LIMIT || (0..m).all(|h| map.sigma_inv[map.sigma[h]] == h)
        );
        // The face walk of this dual is the backbone in order: gamma(h) =
        // alpha(sigma(h)) = h + 1 (mod m).
        map.rank = (0..m).collect();
        map.tour_seq = (0..m).collect();
        if cfg!(debug_assertions) && m <= FULL_CHECK_LIMIT {
            let mut probe = map.clone();
            debug_assert!(probe.walk_tour() && probe.rank == map.rank);
        }
        Ok(map)
    }

    /// The inverse of [`UnicellularMap::from_matching`]: relabel half-edges
    /// by tour rank and read the arcs off `alpha`. Walking ranks in tour
    /// order emits the arcs already sorted.
    pub fn to_matching(&self) -> Diagram {
        let mut arcs = Vec::with_capacity(self.edge_count());
        for (r, &h) in self.tour_seq.iter().enumerate() {
            let partner = self.rank[self.alpha[h]];
            if r < partner {
                arcs.push((r + 1, partner + 1));
            }
        }
        Diagram::from_sorted_arcs(self.sigma.len(), arcs)
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn half_edge_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn genus(&self) -> usize {
        let n = self.edge_count();
        debug_assert!((n + 1 - self.vertex_count) % 2 == 0);
        (n + 1 - self.vertex_count) / 2
    }

    pub fn sigma(&self, half_edge: usize) -> usize {
        self.sigma[half_edge]
    }

    pub fn alpha(&self, half_edge: usize) -> usize {
        self.alpha[half_edge]
    }

    pub fn rank(&self, half_edge: usize) -> usize {
        self.rank[half_edge]
    }

    pub fn tour(&self) -> TourOrder {
        TourOrder {
            rank: self.rank.clone(),
        }
    }

    /// One half-edge per vertex, in insertion order (stable but otherwise
    /// unspecified). Constant-time access for samplers.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// All vertex handles in tour order (the order their vertices are first
    /// visited). Traverses every cycle; prefer [`Self::representatives`]
    /// when order does not matter.
    pub fn vertices(&self) -> Vec<VertexHandle> {
        let mut seen = vec![false; self.sigma.len()];
        let mut out = Vec::with_capacity(self.vertex_count);
        for &h in &self.tour_seq {
            if !seen[h] {
                out.push(VertexHandle(h));
                let mut x = h;
                loop {
                    seen[x] = true;
                    x = self.sigma[x];
                    if x == h {
                        break;
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), self.vertex_count);
        out
    }

    /// The `sigma`-cycle through `half_edge`, starting there.
    pub fn vertex_cycle(&self, half_edge: usize) -> Vec<usize> {
        let mut cycle = vec![half_edge];
        let mut x = self.sigma[half_edge];
        while x != half_edge {
            cycle.push(x);
            x = self.sigma[x];
        }
        cycle
    }

    /// Handle (minimum-rank half-edge) of the vertex containing `half_edge`.
    pub fn vertex_of(&self, half_edge: usize) -> VertexHandle {
        let mut min = half_edge;
        let mut x = self.sigma[half_edge];
        while x != half_edge {
            if self.rank[x] < self.rank[min] {
                min = x;
            }
            x = self.sigma[x];
        }
        VertexHandle(min)
    }

    pub fn vertex_degree(&self, vertex: VertexHandle) -> usize {
        self.vertex_cycle(vertex.0).len()
    }

    fn gamma(&self, half_edge: usize) -> usize {
        self.alpha[self.sigma[half_edge]]
    }

    /// Rebuilds the tour tables by walking the face from the root; false when
    /// the walk does not close over all half-edges.
    fn walk_tour(&mut self) -> bool {
        let m = self.sigma.len();
        self.rank.clear();
        self.rank.resize(m, usize::MAX);
        self.tour_seq.clear();
        self.tour_seq.resize(m, 0);
        let mut h = self.root;
        for r in 0..m {
            if self.rank[h] != usize::MAX {
                return false;
            }
            self.rank[h] = r;
            self.tour_seq[r] = h;
            h = self.gamma(h);
        }
        h == self.root
    }

    /// Recomputes the vertex count and representatives by scanning all
    /// cycles.
    fn rebuild_vertices(&mut self) {
        self.reps.clear();
        self.rep_pos.iter_mut().for_each(|p| *p = NO_REP);
        let mut seen = vec![false; self.sigma.len()];
        self.vertex_count = 0;
        for start in 0..self.sigma.len() {
            if seen[start] {
                continue;
            }
            self.vertex_count += 1;
            self.add_rep(start);
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.sigma[x];
            }
        }
    }

    fn add_rep(&mut self, h: usize) {
        debug_assert_eq!(self.rep_pos[h], NO_REP);
        self.rep_pos[h] = self.reps.len();
        self.reps.push(h);
    }

    fn remove_rep(&mut self, h: usize) {
        let at = self.rep_pos[h];
        debug_assert_ne!(at, NO_REP);
        self.reps.swap_remove(at);
        if let Some(&moved) = self.reps.get(at) {
            self.rep_pos[moved] = at;
        }
        self.rep_pos[h] = NO_REP;
    }

    /// The representative of the vertex containing `half_edge`.
    fn rep_of_vertex(&self, half_edge: usize) -> usize {
        let mut x = half_edge;
        while self.rep_pos[x] == NO_REP {
            x = self.sigma[x];
            debug_assert_ne!(x, half_edge, "every vertex owns a representative");
        }
        x
    }

    fn set_sigma(&mut self, x: usize, y: usize) {
        self.sigma[x] = y;
        self.sigma_inv[y] = x;
    }

    /// After a splice at designated half-edges of sorted old ranks
    /// `x < y < z`, the new tour is the old one with the segments
    /// `(x, y]` and `(y, z]` exchanged; fix the tables with one rotation.
    fn exchange_tour_segments(&mut self, x: usize, y: usize, z: usize) {
        debug_assert!(x < y && y < z);
        self.tour_seq[x + 1..=z].rotate_left(y - x);
        for r in x + 1..=z {
            self.rank[self.tour_seq[r]] = r;
        }
    }

    /// Splices the three vertices behind `d1, d2, d3` (tour order) into one.
    /// Keeps the first vertex's representative for the merged vertex.
    fn splice_glue(&mut self, d: [usize; 3]) {
        debug_assert!(self.rank[d[0]] < self.rank[d[1]] && self.rank[d[1]] < self.rank[d[2]]);
        let drop1 = self.rep_of_vertex(d[1]);
        let drop2 = self.rep_of_vertex(d[2]);
        self.remove_rep(drop1);
        self.remove_rep(drop2);
        let s = [self.sigma[d[0]], self.sigma[d[1]], self.sigma[d[2]]];
        self.set_sigma(d[0], s[1]);
        self.set_sigma(d[1], s[2]);
        self.set_sigma(d[2], s[0]);
        self.exchange_tour_segments(self.rank[d[0]], self.rank[d[1]], self.rank[d[2]]);
        self.vertex_count -= 2;
        debug_assert!(self.check_invariants());
    }

    /// Cuts the vertex carrying `a1, a2, a3` into three at those half-edges.
    /// Note the tour positions satisfy `rank(a1) < rank(a3) < rank(a2)`.
    fn splice_slice(&mut self, d: [usize; 3]) {
        let old = self.rep_of_vertex(d[0]);
        self.remove_rep(old);
        let s = [self.sigma[d[0]], self.sigma[d[1]], self.sigma[d[2]]];
        self.set_sigma(d[0], s[2]);
        self.set_sigma(d[1], s[0]);
        self.set_sigma(d[2], s[1]);
        self.exchange_tour_segments(self.rank[d[0]], self.rank[d[2]], self.rank[d[1]]);
        for h in d {
            self.add_rep(h);
        }
        self.vertex_count += 2;
        debug_assert!(self.check_invariants());
    }

    /// Full invariant check by rewalk; used by debug assertions on small
    /// maps and by tests. Always true for a correctly maintained map.
    pub fn check_invariants(&self) -> bool {
        if cfg!(debug_assertions) && self.sigma.len() > FULL_CHECK_LIMIT {
            return true;
        }
        let mut probe = self.clone();
        if !probe.walk_tour() || probe.rank != self.rank || probe.tour_seq != self.tour_seq {
            return false;
        }
        probe.rebuild_vertices();
        if probe.vertex_count != self.vertex_count {
            return false;
        }
        // Exactly one representative per cycle.
        let mut count = 0;
        for &r in &self.reps {
            if self.rep_pos[r] == NO_REP {
                return false;
            }
            count += 1;
            let mut x = self.sigma[r];
            while x != r {
                if self.rep_pos[x] != NO_REP {
                    return false;
                }
                x = self.sigma[x];
            }
        }
        count == self.vertex_count
    }

    fn is_trisection(&self, half_edge: usize) -> bool {
        let image = self.sigma[half_edge];
        self.rank[image] <= self.rank[half_edge] && self.vertex_of(image).0 != image
    }

    /// All `2g` trisections, in tour order of their half-edges.
    pub fn find_trisections(&self) -> Vec<Trisection> {
        let m = self.sigma.len();
        // Minimum half-edge of each vertex, propagated to every member.
        let mut vmin = vec![usize::MAX; m];
        for v in self.vertices() {
            let mut x = v.0;
            loop {
                vmin[x] = v.0;
                x = self.sigma[x];
                if x == v.0 {
                    break;
                }
            }
        }
        let mut out = Vec::new();
        for &h in &self.tour_seq {
            let image = self.sigma[h];
            if self.rank[image] <= self.rank[h] && vmin[image] != image {
                out.push(Trisection {
                    half_edge: h,
                    vertex: VertexHandle(vmin[h]),
                    kind: TrisectionType::Unknown,
                });
            }
        }
        assert_eq!(
            out.len(),
            2 * self.genus(),
            "a genus-g unicellular map has exactly 2g trisections"
        );
        out
    }

    fn normalized_distinct(&self, handles: &[VertexHandle]) -> Result<Vec<VertexHandle>> {
        let mut normalized: Vec<VertexHandle> =
            handles.iter().map(|v| self.vertex_of(v.0)).collect();
        normalized.sort_by_key(|v| self.rank[v.0]);
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::VerticesNotDistinct);
        }
        Ok(normalized)
    }

    /// Glues three distinct vertices into one. The merge splices the cycles
    /// at their minimum half-edges `a1 <γ a2 <γ a3`; the returned trisection
    /// is the new `sigma`-predecessor of `a3` and always has type I.
    pub fn glue_triple(
        &mut self,
        v1: VertexHandle,
        v2: VertexHandle,
        v3: VertexHandle,
    ) -> Result<Trisection> {
        let d = self.normalized_distinct(&[v1, v2, v3])?;
        self.splice_glue([d[0].0, d[1].0, d[2].0]);
        let tau = self.sigma_inv[d[2].0];
        debug_assert!(self.is_trisection(tau));
        Ok(Trisection {
            half_edge: tau,
            vertex: self.vertex_of(tau),
            kind: TrisectionType::TypeI,
        })
    }

    /// Glues two vertices onto the vertex of an existing trisection `t`,
    /// splicing at their minimum half-edges and at `sigma(t)` instead of the
    /// third minimum. Both anchors must precede `sigma(t)` in tour order; the
    /// trisection survives the merge with type II.
    pub fn glue_at_trisection(
        &mut self,
        v1: VertexHandle,
        v2: VertexHandle,
        t: &Trisection,
    ) -> Result<Trisection> {
        if !self.is_trisection(t.half_edge) {
            return Err(Error::NotATrisection(t.half_edge));
        }
        let tau = t.half_edge;
        let a3 = self.sigma[tau];
        let tau_vertex = self.vertex_of(a3);
        let anchors = self.normalized_distinct(&[v1, v2])?;
        if anchors.contains(&tau_vertex) {
            return Err(Error::VerticesNotDistinct);
        }
        if self.rank[a3] < self.rank[anchors[1].0] {
            return Err(Error::InvalidGlueOrder);
        }
        self.splice_glue([anchors[0].0, anchors[1].0, a3]);
        debug_assert_eq!(self.sigma[tau], a3);
        debug_assert!(self.is_trisection(tau));
        Ok(Trisection {
            half_edge: tau,
            vertex: self.vertex_of(tau),
            kind: TrisectionType::TypeII,
        })
    }

    /// Glues an odd set of `2k + 1 >= 3` distinct vertices into a single
    /// vertex, raising the genus by `k`: the last three are merged by
    /// [`Self::glue_triple`], then each preceding pair is folded in through
    /// the surviving trisection, right to left.
    pub fn glue_set(&mut self, handles: &[VertexHandle]) -> Result<Trisection> {
        if handles.len() < 3 || handles.len() % 2 == 0 {
            return Err(Error::BadVertexSetSize(handles.len()));
        }
        let sorted = self.normalized_distinct(handles)?;
        let mut rest = sorted.len() - 3;
        let mut tau = self.glue_triple(sorted[rest], sorted[rest + 1], sorted[rest + 2])?;
        while rest > 0 {
            tau = self.glue_at_trisection(sorted[rest - 2], sorted[rest - 1], &tau)?;
            rest -= 2;
        }
        Ok(tau)
    }

    /// Slices the vertex of trisection `t` into three vertices, lowering the
    /// genus by one. The cuts happen at the vertex minimum `a1`, at
    /// `a3 = sigma(t)`, and at `a2`: the tour-smallest half-edge strictly
    /// between `a1` and `a3` in cycle order that lies tour-after `a3`.
    pub fn slice_once(&mut self, t: &Trisection) -> Result<SliceStep> {
        if !self.is_trisection(t.half_edge) {
            return Err(Error::NotATrisection(t.half_edge));
        }
        let tau = t.half_edge;
        let a3 = self.sigma[tau];
        let a1 = self.vertex_of(tau).0;
        let mut a2 = usize::MAX;
        let mut x = self.sigma[a1];
        while x != a3 {
            if self.rank[x] > self.rank[a3] && (a2 == usize::MAX || self.rank[x] < self.rank[a2])
            {
                a2 = x;
            }
            x = self.sigma[x];
        }
        debug_assert_ne!(a2, usize::MAX, "every trisection admits a middle cut");
        self.splice_slice([a1, a2, a3]);
        let (v1, v2, v3) = (self.vertex_of(a1), self.vertex_of(a2), self.vertex_of(a3));
        debug_assert_eq!(v1.0, a1, "the old vertex minimum keeps its vertex minimal");
        debug_assert_eq!(v2.0, a2, "the middle cut becomes its vertex minimum");
        let kind = if v3.0 == a3 {
            TrisectionType::TypeI
        } else {
            TrisectionType::TypeII
        };
        let continues = match kind {
            TrisectionType::TypeII => {
                debug_assert!(self.is_trisection(tau));
                Some(Trisection {
                    half_edge: tau,
                    vertex: v3,
                    kind: TrisectionType::TypeII,
                })
            }
            _ => None,
        };
        Ok(SliceStep {
            vertices: [v1, v2, v3],
            kind,
            continues,
        })
    }

    /// Slices repeatedly through `t` until a type-I cut ends the cascade,
    /// returning the full odd list of vertices split off, in tour order of
    /// the final map. Gluing that list back recreates the original map.
    pub fn slice(&mut self, t: &Trisection) -> Result<Vec<VertexHandle>> {
        let mut out: Vec<VertexHandle> = Vec::new();
        let mut current = *t;
        loop {
            let step = self.slice_once(&current)?;
            match step.continues {
                Some(next) => {
                    out.push(step.vertices[0]);
                    out.push(step.vertices[1]);
                    current = next;
                }
                None => {
                    out.extend_from_slice(&step.vertices);
                    break;
                }
            }
        }
        debug_assert!(out.iter().all(|v| self.vertex_of(v.0) == *v));
        out.sort_by_key(|v| self.rank[v.0]);
        debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
        Ok(out)
    }
}
