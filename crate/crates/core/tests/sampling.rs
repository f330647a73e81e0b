//! Statistical and structural checks on the uniform samplers: empirical
//! distributions against exact counts, trace replay, and determinism.

use std::collections::HashMap;

use rnagenus::census::{all_diagrams, perfect_matchings};
use rnagenus::sampler::spread_over_length;
use rnagenus::stats::chi_square_uniform;
use rnagenus::{
    genus_of_diagram, uniform_diagram, uniform_matching, Diagram, DiagramSampler,
    MatchingSampler, RandomSource,
};

const ALPHA: f64 = 1e-3;

/// Index every diagram in `universe`, draw `trials` samples, and return the
/// per-diagram histogram. Panics if a sample falls outside the universe.
fn histogram(
    universe: &[Diagram],
    trials: usize,
    mut draw: impl FnMut() -> Diagram,
) -> Vec<u64> {
    let index: HashMap<&Diagram, usize> =
        universe.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut counts = vec![0u64; universe.len()];
    for _ in 0..trials {
        let d = draw();
        let slot = *index
            .get(&d)
            .unwrap_or_else(|| panic!("sampled structure outside the universe: {d:?}"));
        counts[slot] += 1;
    }
    counts
}

fn matchings_of_genus(n: usize, genus: usize) -> Vec<Diagram> {
    perfect_matchings(n)
        .into_iter()
        .filter(|m| genus_of_diagram(m).genus == genus)
        .collect()
}

#[test]
fn matching_sampler_is_uniform_over_several_regimes() {
    // (arcs, genus, expected cell count, seed)
    let cases = [(4usize, 1usize, 70usize, 11u64), (5, 2, 483, 12), (6, 3, 1485, 13)];
    for (n, genus, cells, seed) in cases {
        let universe = matchings_of_genus(n, genus);
        assert_eq!(universe.len(), cells);
        let sampler = MatchingSampler::new(n, genus).unwrap();
        let mut rng = RandomSource::from_seed(seed);
        let trials = 100 * cells;
        let counts = histogram(&universe, trials, || sampler.sample(&mut rng));
        let outcome = chi_square_uniform(&counts, ALPHA);
        assert!(
            outcome.pass,
            "uniformity rejected for n={n} genus={genus}: chi2={:.2} threshold={:.2}",
            outcome.statistic, outcome.threshold
        );
    }
}

#[test]
fn diagram_sampler_is_uniform_with_unpaired_positions() {
    let length = 8;
    let genus = 1;
    let universe: Vec<Diagram> = all_diagrams(length)
        .into_iter()
        .filter(|d| genus_of_diagram(d).genus == genus)
        .collect();
    assert_eq!(universe.len(), 420);
    let sampler = DiagramSampler::new(length, genus).unwrap();
    let mut rng = RandomSource::from_seed(21);
    let counts = histogram(&universe, 100 * universe.len(), || sampler.sample(&mut rng));
    let outcome = chi_square_uniform(&counts, ALPHA);
    assert!(
        outcome.pass,
        "uniformity rejected for diagrams length={length} genus={genus}: chi2={:.2} threshold={:.2}",
        outcome.statistic, outcome.threshold
    );
}

#[test]
fn samples_always_have_the_requested_shape() {
    let mut rng = RandomSource::from_seed(99);
    for (n, genus) in [(3usize, 1usize), (8, 2), (20, 4), (40, 0)] {
        for _ in 0..50 {
            let m = uniform_matching(n, genus, &mut rng).unwrap();
            assert!(m.is_perfect_matching());
            assert_eq!(m.arc_count(), n);
            assert_eq!(genus_of_diagram(&m).genus, genus);
        }
    }
    for (length, genus) in [(9usize, 1usize), (14, 2), (31, 3)] {
        for _ in 0..50 {
            let d = uniform_diagram(length, genus, &mut rng).unwrap();
            assert_eq!(d.length(), length);
            assert_eq!(genus_of_diagram(&d).genus, genus);
        }
    }
}

#[test]
fn traced_sampling_replays_to_the_same_diagram() {
    for (n, genus, seed) in [(6usize, 2usize, 5u64), (15, 3, 6), (30, 1, 7)] {
        let sampler = MatchingSampler::new(n, genus).unwrap();
        // The traced draw must consume randomness identically to the plain one.
        let mut rng_plain = RandomSource::from_seed(seed);
        let mut rng_traced = RandomSource::from_seed(seed);
        for _ in 0..20 {
            let plain = sampler.sample(&mut rng_plain);
            let (traced, trace) = sampler.sample_traced(&mut rng_traced);
            assert_eq!(plain, traced, "trace changed the sampled value");
            assert_eq!(trace.replay().unwrap(), traced, "replay diverged");
            assert_eq!(genus_of_diagram(&trace.initial_matching).genus, 0);
            let mut genus_so_far = 0;
            for step in &trace.steps {
                assert!(step.vertices.len() >= 3);
                assert!(step.vertices.len() % 2 == 1);
                assert_eq!(step.target_genus, genus_so_far + step.vertices.len() / 2);
                genus_so_far = step.target_genus;
            }
            assert_eq!(genus_so_far, genus);
        }
    }
}

#[test]
fn equal_seeds_give_equal_streams() {
    let sampler = MatchingSampler::new(25, 3).unwrap();
    let draw = |seed: u64| {
        let mut rng = RandomSource::from_seed(seed);
        (0..10).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>()
    };
    assert_eq!(draw(42), draw(42));
    assert_ne!(draw(42), draw(43));

    // Split streams are independent of each other and reproducible.
    let base = RandomSource::from_seed(42);
    let a: Vec<_> = {
        let mut s = base.split(0);
        (0..5).map(|_| sampler.sample(&mut s)).collect()
    };
    let b: Vec<_> = {
        let mut s = base.split(1);
        (0..5).map(|_| sampler.sample(&mut s)).collect()
    };
    let a_again: Vec<_> = {
        let mut s = base.split(0);
        (0..5).map(|_| sampler.sample(&mut s)).collect()
    };
    assert_eq!(a, a_again);
    assert_ne!(a, b);
}

#[test]
fn spreading_preserves_genus_and_induced_matching() {
    let mut rng = RandomSource::from_seed(77);
    for _ in 0..100 {
        let m = uniform_matching(5, 2, &mut rng).unwrap();
        let spread = spread_over_length(&m, 16, &mut rng);
        assert_eq!(spread.length(), 16);
        assert_eq!(spread.arc_count(), 5);
        assert_eq!(spread.induced_matching(), m);
        assert_eq!(genus_of_diagram(&spread).genus, 2);
    }
}

#[test]
fn infeasible_requests_are_rejected() {
    let mut rng = RandomSource::from_seed(1);
    // Genus can be at most floor(n/2).
    assert!(uniform_matching(3, 2, &mut rng).is_err());
    assert!(MatchingSampler::new(1, 1).is_err());
    assert!(DiagramSampler::new(5, 3).is_err());
    // Diagrams of odd length can never be perfect matchings but may still
    // carry arcs; length 2 with genus 1 is impossible.
    assert!(uniform_diagram(2, 1, &mut rng).is_err());
}
