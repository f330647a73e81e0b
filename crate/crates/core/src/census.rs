//! Exhaustive enumeration of small structures, used as ground truth when
//! verifying the closed-form counts and the samplers. Sizes grow as
//! `(2n - 1)!!`, so keep `n` at 8 or below.

use num::BigUint;

use crate::diagram::Diagram;
use crate::fatgraph::genus_of_diagram;

/// Every perfect matching on `2n` points, in a fixed deterministic order
/// (smallest open position pairs with each later position in turn).
pub fn perfect_matchings(n: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut arcs = Vec::with_capacity(n);
    let mut free: Vec<bool> = vec![true; 2 * n];
    fill(&mut out, &mut arcs, &mut free, 2 * n);
    out
}

fn fill(out: &mut Vec<Diagram>, arcs: &mut Vec<(usize, usize)>, free: &mut [bool], len: usize) {
    let Some(first) = free.iter().position(|&f| f) else {
        out.push(Diagram::new(len, arcs.clone()).expect("matched in pairs"));
        return;
    };
    free[first] = false;
    for second in (first + 1)..free.len() {
        if !free[second] {
            continue;
        }
        free[second] = false;
        arcs.push((first + 1, second + 1));
        fill(out, arcs, free, len);
        arcs.pop();
        free[second] = true;
    }
    free[first] = true;
}

/// Every diagram (partial matching, unpaired positions allowed) on `length`
/// points.
pub fn all_diagrams(length: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut arcs = Vec::new();
    let mut state: Vec<u8> = vec![0; length];
    diagrams_from(&mut out, &mut arcs, &mut state, 0, length);
    out
}

fn diagrams_from(
    out: &mut Vec<Diagram>,
    arcs: &mut Vec<(usize, usize)>,
    state: &mut [u8],
    at: usize,
    length: usize,
) {
    let Some(first) = (at..length).find(|&i| state[i] == 0) else {
        out.push(Diagram::new(length, arcs.clone()).expect("states are consistent"));
        return;
    };
    // Leave it unpaired...
    state[first] = 1;
    diagrams_from(out, arcs, state, first + 1, length);
    // ...or pair it with any later open position.
    for second in (first + 1)..length {
        if state[second] != 0 {
            continue;
        }
        state[second] = 2;
        arcs.push((first + 1, second + 1));
        diagrams_from(out, arcs, state, first + 1, length);
        arcs.pop();
        state[second] = 0;
    }
    state[first] = 0;
}

/// Genus histogram of all perfect matchings on `2n` points; entry `g` counts
/// matchings of genus `g`.
pub fn genus_census(n: usize) -> Vec<BigUint> {
    let mut counts: Vec<BigUint> = Vec::new();
    for m in perfect_matchings(n) {
        let g = genus_of_diagram(&m).genus;
        if counts.len() <= g {
            counts.resize(g + 1, BigUint::from(0u32));
        }
        counts[g] += 1u32;
    }
    counts
}

/// All non-crossing (genus 0) perfect matchings on `2n` points.
pub fn noncrossing_matchings(n: usize) -> Vec<Diagram> {
    perfect_matchings(n)
        .into_iter()
        .filter(|m| genus_of_diagram(m).genus == 0)
        .collect()
}
