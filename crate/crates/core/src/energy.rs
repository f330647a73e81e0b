//! Loop-based energy of pseudoknotted structures.
//!
//! The loops of a structure are the boundary components of its closed
//! fatgraph, or equivalently the vertices of the dual map of the matching
//! *closed by an enclosing arc* (the augmented dual). Each loop is scored by
//! its class; a structure of `n` arcs with genus at most one has energy
//!
//! `eta = n * arc + sum of loop scores + (genus == 1) * pseudoknot1`.
//!
//! Classes, decided on the augmented dual:
//!
//! * the extra vertex created by the enclosing arc is the root loop and
//!   scores zero;
//! * a vertex containing a trisection is a pseudoknot loop and scores
//!   `multi`;
//! * otherwise degree 1 is a hairpin, degree 2 an interior loop, and
//!   anything larger a multiloop (the enclosing arc's half-edge counts
//!   toward the degree of the outermost loop).
//!
//! For weighted generation, genus-1 structures are built by gluing three
//! marked loops of a genus-0 structure. A *labeled structure* is a genus-0
//! matching with up to three marked vertices of its (plantless) dual; each
//! mark replaces the loop's class score by `(multi + pseudoknot1) / 3`, so
//! that gluing the marks preserves the total energy exactly.

use std::fmt;
use std::path::Path;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::unicellular::{UnicellularMap, VertexHandle};

/// Additive energy parameters. All default to zero, which makes every
/// structure weight one and recovers uniform counting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyParams {
    /// Per-arc contribution (key `b`).
    pub arc: f64,
    /// Hairpin loop score (key `Lhp`).
    pub hairpin: f64,
    /// Interior loop score (key `Lint`).
    pub interior: f64,
    /// Multiloop score (key `Lmul`).
    pub multi: f64,
    /// Whole-structure penalty for genus 1 (key `Lpk1`).
    pub pseudoknot1: f64,
}

impl EnergyParams {
    /// Score shared by each of the three marked loops of a labeled
    /// structure.
    pub fn mark_score(&self) -> f64 {
        (self.multi + self.pseudoknot1) / 3.0
    }

    /// Parses `key = value` lines. Keys are exactly `b`, `Lhp`, `Lint`,
    /// `Lmul`, `Lpk1`; missing keys default to zero, unknown or repeated
    /// keys are rejected. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut params = Self::default();
        let mut seen = [false; 5];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| {
                Error::BadParameterFile(format!("line {}: {what}: {raw:?}", lineno + 1))
            };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let idx = match key.trim() {
                "b" => 0,
                "Lhp" => 1,
                "Lint" => 2,
                "Lmul" => 3,
                "Lpk1" => 4,
                other => {
                    return Err(bad(&format!("unknown key {other:?}")));
                }
            };
            if seen[idx] {
                return Err(bad("key set twice"));
            }
            seen[idx] = true;
            let parsed: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad("value is not a number"))?;
            if !parsed.is_finite() {
                return Err(bad("value must be finite"));
            }
            match idx {
                0 => params.arc = parsed,
                1 => params.hairpin = parsed,
                2 => params.interior = parsed,
                3 => params.multi = parsed,
                _ => params.pseudoknot1 = parsed,
            }
        }
        Ok(params)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadParameterFile(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Loop classes in the order hairpin, interior, multi, pseudoknot, root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopClass {
    Hairpin,
    Interior,
    Multi,
    Pseudoknot,
    Root,
}

impl LoopClass {
    pub fn score(self, params: &EnergyParams) -> f64 {
        match self {
            LoopClass::Hairpin => params.hairpin,
            LoopClass::Interior => params.interior,
            LoopClass::Multi | LoopClass::Pseudoknot => params.multi,
            LoopClass::Root => 0.0,
        }
    }
}

impl fmt::Display for LoopClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LoopClass::Hairpin => "hairpin",
            LoopClass::Interior => "interior",
            LoopClass::Multi => "multi",
            LoopClass::Pseudoknot => "pseudoknot",
            LoopClass::Root => "root",
        };
        f.write_str(name)
    }
}

/// One loop of a structure: its class, the number of arcs incident to it
/// (the enclosing arc is *not* counted here), and its vertex in the
/// augmented dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopProfile {
    pub class: LoopClass,
    pub degree: usize,
    pub vertex: VertexHandle,
}

/// Closes a perfect matching with an enclosing arc: position 1 and the last
/// position form the new arc, the original positions shift up by one.
pub fn close_with_enclosing_arc(matching: &Diagram) -> Result<Diagram> {
    matching.require_perfect()?;
    let m = matching.length();
    let mut arcs: Vec<(usize, usize)> = matching
        .arcs()
        .iter()
        .map(|&(i, j)| (i + 1, j + 1))
        .collect();
    arcs.push((1, m + 2));
    Diagram::new(m + 2, arcs)
}

/// The dual map of the closed matching. Half-edge `h` for `1 <= h <= 2n` is
/// backbone position `h`; half-edges `0` and `2n + 1` are the halves of the
/// enclosing arc.
pub fn augmented_dual(matching: &Diagram) -> Result<UnicellularMap> {
    UnicellularMap::from_matching(&close_with_enclosing_arc(matching)?)
}

/// All loops of a perfect matching, in tour order of the augmented dual.
pub fn classify_loops(matching: &Diagram) -> Result<Vec<LoopProfile>> {
    let map = augmented_dual(matching)?;
    let closing = map.half_edge_count() - 1;
    let mut pseudoknotted = vec![false; map.half_edge_count()];
    for t in map.find_trisections() {
        pseudoknotted[t.vertex.0] = true;
    }
    let mut out = Vec::with_capacity(map.vertex_count());
    for vertex in map.vertices() {
        let cycle = map.vertex_cycle(vertex.0);
        let backbone = cycle.iter().filter(|&&h| h != 0 && h != closing).count();
        let class = if cycle == [closing] {
            LoopClass::Root
        } else if pseudoknotted[vertex.0] {
            LoopClass::Pseudoknot
        } else {
            match cycle.len() {
                1 => LoopClass::Hairpin,
                2 => LoopClass::Interior,
                _ => LoopClass::Multi,
            }
        };
        out.push(LoopProfile {
            class,
            degree: backbone,
            vertex,
        });
    }
    Ok(out)
}

/// The energy of a structure of genus at most one. Unpaired positions do not
/// change loop classes, so the energy of a diagram is that of its induced
/// matching.
pub fn loop_energy(diagram: &Diagram, params: &EnergyParams) -> Result<f64> {
    let matching = diagram.induced_matching();
    if matching.length() == 0 {
        return Ok(0.0);
    }
    let map = augmented_dual(&matching)?;
    let genus = map.genus();
    if genus > 1 {
        return Err(Error::UnsupportedGenus(genus));
    }
    let loops = classify_loops(&matching)?;
    let mut eta = matching.arc_count() as f64 * params.arc;
    for lp in &loops {
        eta += lp.class.score(params);
    }
    if genus == 1 {
        eta += params.pseudoknot1;
    }
    Ok(eta)
}

/// A genus-0 perfect matching with up to three marked vertices of its
/// plantless dual, stored as handles of the freshly built dual (so ranks
/// and half-edge labels agree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledStructure {
    matching: Diagram,
    labels: Vec<VertexHandle>,
}

impl LabeledStructure {
    pub fn new(matching: Diagram, labels: Vec<VertexHandle>) -> Result<Self> {
        let map = UnicellularMap::from_matching(&matching)?;
        if map.genus() != 0 {
            return Err(Error::InvalidDiagram(
                "labels are placed on genus-0 matchings".into(),
            ));
        }
        if labels.len() > 3 {
            return Err(Error::BadLabelCount(labels.len()));
        }
        let mut sorted = labels;
        for v in &sorted {
            if v.0 >= map.half_edge_count() || map.vertex_of(v.0) != *v {
                return Err(Error::InvalidDiagram(format!(
                    "half-edge {} is not a vertex handle of the dual",
                    v.0
                )));
            }
        }
        sorted.sort_by_key(|v| map.rank(v.0));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::VerticesNotDistinct);
        }
        Ok(Self {
            matching,
            labels: sorted,
        })
    }

    pub fn matching(&self) -> &Diagram {
        &self.matching
    }

    pub fn labels(&self) -> &[VertexHandle] {
        &self.labels
    }

    pub fn arc_count(&self) -> usize {
        self.matching.arc_count()
    }
}

/// The energy of a labeled structure: per-arc terms plus loop scores, with
/// each marked loop scored as [`EnergyParams::mark_score`] instead of its
/// class. Gluing three marks preserves this total.
pub fn labeled_loop_energy(ls: &LabeledStructure, params: &EnergyParams) -> Result<f64> {
    let plantless = UnicellularMap::from_matching(ls.matching())?;
    let n = ls.arc_count();
    // Position p sits on augmented-dual half-edge p and plantless half-edge
    // p - 1; both duals induce the same partition of positions into loops.
    let mut marked_positions = vec![false; 2 * n + 1];
    for v in ls.labels() {
        for h in plantless.vertex_cycle(v.0) {
            marked_positions[h + 1] = true;
        }
    }
    let mut eta = n as f64 * params.arc;
    let aug = augmented_dual(ls.matching())?;
    let closing = aug.half_edge_count() - 1;
    for lp in classify_loops(ls.matching())? {
        let cycle = aug.vertex_cycle(lp.vertex.0);
        let marked = cycle
            .iter()
            .any(|&h| h != 0 && h != closing && marked_positions[h]);
        eta += if marked {
            debug_assert_ne!(lp.class, LoopClass::Root);
            params.mark_score()
        } else {
            lp.class.score(params)
        };
    }
    Ok(eta)
}

/// Glues the three marked loops of a labeled structure into one vertex,
/// producing a genus-1 perfect matching.
pub fn glue_labeled(ls: &LabeledStructure) -> Result<Diagram> {
    if ls.labels().len() != 3 {
        return Err(Error::BadLabelCount(ls.labels().len()));
    }
    let mut map = UnicellularMap::from_matching(ls.matching())?;
    map.glue_set(ls.labels())?;
    debug_assert_eq!(map.genus(), 1);
    Ok(map.to_matching())
}

/// The two labeled structures that glue back to a given genus-1 matching:
/// one per trisection of its dual, obtained by slicing.
pub fn labeled_structures_of(matching: &Diagram) -> Result<Vec<LabeledStructure>> {
    let base = UnicellularMap::from_matching(matching)?;
    if base.genus() != 1 {
        return Err(Error::UnsupportedGenus(base.genus()));
    }
    let mut out = Vec::with_capacity(2);
    for t in base.find_trisections() {
        let mut sliced = base.clone();
        let vertices = sliced.slice(&t)?;
        // Handles transfer through `to_matching` by rank relabeling.
        let labels = vertices
            .iter()
            .map(|v| VertexHandle(sliced.rank(v.0)))
            .collect();
        out.push(LabeledStructure::new(sliced.to_matching(), labels)?);
    }
    debug_assert_eq!(out.len(), 2);
    Ok(out)
}
