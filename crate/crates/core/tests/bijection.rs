//! Round-trip tests for the genus surgery: slicing a trisection and gluing
//! the resulting vertex set are mutually inverse, and every genus-`g` map
//! carries exactly `2g` trisections.

use rnagenus::census::perfect_matchings;
use rnagenus::{uniform_matching, RandomSource, UnicellularMap, VertexHandle};

/// All `k`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        if n - start < k - cur.len() {
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[test]
fn slicing_then_gluing_is_identity_exhaustively() {
    // Every matching with up to 4 arcs, every trisection of its dual map.
    let mut checked = 0usize;
    for n in 1..=4 {
        for m in perfect_matchings(n) {
            let map = UnicellularMap::from_matching(&m).unwrap();
            let trisections = map.find_trisections();
            assert_eq!(
                trisections.len(),
                2 * map.genus(),
                "trisection count off for {m:?}"
            );
            for t in trisections {
                let mut sliced = map.clone();
                let vertices = sliced.slice(&t).unwrap();
                assert!(vertices.len() >= 3 && vertices.len() % 2 == 1);
                assert!(sliced.genus() < map.genus());
                let tau = sliced.glue_set(&vertices).unwrap();
                assert_eq!(sliced, map, "gluing did not restore the map for {m:?}");
                assert_eq!(
                    tau.half_edge, t.half_edge,
                    "gluing restored a different trisection for {m:?}"
                );
                checked += 1;
            }
        }
    }
    // One trisection per genus-contribution: sum of 2g over all matchings.
    assert_eq!(checked, 2 * 1 + (2 * 10) + (2 * 70 + 4 * 21));
}

#[test]
fn gluing_then_slicing_is_identity_exhaustively() {
    // Every matching with up to 4 arcs, every odd vertex set of size >= 3.
    let mut checked = 0usize;
    for n in 1..=4 {
        for m in perfect_matchings(n) {
            let map = UnicellularMap::from_matching(&m).unwrap();
            let handles = map.vertices();
            for size in (3..=handles.len()).step_by(2) {
                for subset in subsets(handles.len(), size) {
                    let chosen: Vec<VertexHandle> =
                        subset.iter().map(|&i| handles[i]).collect();
                    let mut glued = map.clone();
                    let tau = glued.glue_set(&chosen).unwrap();
                    assert_eq!(glued.genus(), map.genus() + size / 2);
                    let mut back = glued.clone();
                    let recovered = back.slice(&tau).unwrap();
                    assert_eq!(back, map, "slicing did not undo the glue for {m:?}");
                    assert_eq!(
                        recovered, chosen,
                        "slice recovered a different vertex set for {m:?}"
                    );
                    checked += 1;
                }
            }
        }
    }
    // Odd vertex subsets of size >= 3 summed over every matching:
    // n=2 genus 0: 2 maps with 3 vertices -> C(3,3) each;
    // n=3 genus 0: 5 maps with 4 vertices -> C(4,3) each;
    // n=4 genus 0: 14 maps with 5 vertices -> C(5,3) + C(5,5) each;
    // n=4 genus 1: 70 maps with 3 vertices -> C(3,3) each.
    assert_eq!(checked, 2 + 5 * 4 + 14 * 11 + 70, "exhaustive sweep size");
}

#[test]
fn random_round_trips_up_to_fifty_arcs() {
    let mut rng = RandomSource::from_seed(0xB17EC7);
    let mut done = 0usize;
    while done < 10_000 {
        let n = 2 + rng.below_usize(49);
        let max_genus = n / 2;
        if max_genus == 0 {
            continue;
        }
        let genus = 1 + rng.below_usize(max_genus);
        let m = uniform_matching(n, genus, &mut rng).unwrap();
        let map = UnicellularMap::from_matching(&m).unwrap();
        let trisections = map.find_trisections();
        assert_eq!(trisections.len(), 2 * genus, "trisection law at n={n} g={genus}");
        let t = trisections[rng.below_usize(trisections.len())];
        let mut sliced = map.clone();
        let vertices = sliced.slice(&t).unwrap();
        let tau = sliced.glue_set(&vertices).unwrap();
        assert_eq!(sliced, map);
        assert_eq!(tau.half_edge, t.half_edge);
        done += 1;
    }
}
