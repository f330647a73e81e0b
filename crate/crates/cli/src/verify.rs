//! Self-check battery behind `rnagenus verify`: cross-validates the fast
//! counting, surgery, and sampling machinery against brute force on small
//! sizes, printing one line per check.

use std::fmt::Write as _;
use std::time::Instant;

use rnagenus::census::{genus_census, perfect_matchings};
use rnagenus::energy::{glue_labeled, labeled_loop_energy, labeled_structures_of};
use rnagenus::enumerate::double_factorial_odd;
use rnagenus::partition::{genus_one_partition_by_enumeration, labeled_partition_by_enumeration};
use rnagenus::stats::chi_square_uniform;
use rnagenus::{
    genus_of_diagram, loop_energy, uniform_matching, CountTables, EnergyParams, MatchingSampler,
    PartitionTables, RandomSource, UnicellularMap,
};

pub struct VerifyOptions {
    pub max_edges: usize,
    pub samples: usize,
    pub seed: u64,
}

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, name: &str, started: Instant, outcome: std::result::Result<(), String>) {
        let elapsed = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("ok   {name} ({elapsed:.2}s)"),
            Err(why) => {
                self.failures += 1;
                println!("FAIL {name} ({elapsed:.2}s): {why}");
            }
        }
    }
}

/// Runs every check; returns `true` when all pass.
pub fn run(opts: &VerifyOptions) -> bool {
    let mut report = Report { failures: 0 };
    let tables = CountTables::new();

    let t = Instant::now();
    report.check(
        "frozen counts (matchings and diagrams by genus)",
        t,
        frozen_counts(&tables),
    );

    let t = Instant::now();
    report.check(
        "matching totals sum to (2n-1)!!",
        t,
        totals(&tables, opts.max_edges.max(6)),
    );

    let t = Instant::now();
    report.check(
        "brute-force census matches closed-form counts",
        t,
        census_vs_closed_form(&tables, opts.max_edges.min(6)),
    );

    let t = Instant::now();
    report.check(
        "slice/glue round-trips on random maps",
        t,
        surgery_round_trips(opts),
    );

    let t = Instant::now();
    report.check(
        "genus-1 partition function matches brute force",
        t,
        partition_oracle(),
    );

    let t = Instant::now();
    report.check(
        "marked genus-0 structures pair 2:1 with genus-1 matchings",
        t,
        labeled_identity(opts.max_edges.min(5)),
    );

    let t = Instant::now();
    report.check(
        "uniform sampler passes a chi-square spot check",
        t,
        sampler_spot_check(opts),
    );

    if report.failures == 0 {
        println!("all checks passed");
        true
    } else {
        println!("{} check(s) failed", report.failures);
        false
    }
}

fn frozen_counts(tables: &CountTables) -> std::result::Result<(), String> {
    // Matchings on 2n points by genus, n = 1..6.
    let expected: [&[u64]; 6] = [
        &[1],
        &[2, 1],
        &[5, 10],
        &[14, 70, 21],
        &[42, 420, 483],
        &[132, 2310, 6468, 1485],
    ];
    for (n, row) in expected.iter().enumerate().map(|(i, r)| (i + 1, r)) {
        for (g, &want) in row.iter().enumerate() {
            let got = tables.matchings(n, g);
            if got != want.into() {
                return Err(format!("matchings({n},{g}) = {got}, expected {want}"));
            }
        }
    }
    let d = tables.diagrams(12, 2);
    if d != 48741u32.into() {
        return Err(format!("diagrams(12,2) = {d}, expected 48741"));
    }
    for (n, want) in [(4usize, 10395u64), (5, 31878), (6, 6468)] {
        let got = tables.diagrams_with_arcs(12, n, 2);
        if got != want.into() {
            return Err(format!("diagrams(12, arcs={n}, g=2) = {got}, expected {want}"));
        }
    }
    Ok(())
}

fn totals(tables: &CountTables, max_edges: usize) -> std::result::Result<(), String> {
    for n in 1..=max_edges {
        let mut sum = rnagenus::num::BigUint::from(0u32);
        for g in 0..=n / 2 {
            sum += tables.matchings(n, g);
        }
        let want = double_factorial_odd(n);
        if sum != want {
            return Err(format!("sum over genus at n={n} is {sum}, expected {want}"));
        }
    }
    Ok(())
}

fn census_vs_closed_form(
    tables: &CountTables,
    max_edges: usize,
) -> std::result::Result<(), String> {
    for n in 1..=max_edges {
        let counted = genus_census(n);
        for (g, got) in counted.iter().enumerate() {
            let want = tables.matchings(n, g);
            if *got != want {
                return Err(format!(
                    "census at n={n}, genus {g}: counted {got}, closed form {want}"
                ));
            }
        }
    }
    Ok(())
}

fn surgery_round_trips(opts: &VerifyOptions) -> std::result::Result<(), String> {
    // Exhaustive on all matchings with up to 3 arcs, every trisection.
    for n in 1..=3 {
        for m in perfect_matchings(n) {
            round_trip_all_trisections(&m)?;
        }
    }
    // Randomized on larger maps.
    let mut rng = RandomSource::from_seed(opts.seed);
    for i in 0..opts.samples {
        let n = 4 + rng.below_usize(17);
        let genus = 1 + rng.below_usize(n / 2);
        let m = uniform_matching(n, genus, &mut rng)
            .map_err(|e| format!("sample {i}: {e}"))?;
        round_trip_all_trisections(&m)?;
    }
    Ok(())
}

fn round_trip_all_trisections(m: &rnagenus::Diagram) -> std::result::Result<(), String> {
    let map = UnicellularMap::from_matching(m).map_err(|e| e.to_string())?;
    let trisections = map.find_trisections();
    if trisections.len() != 2 * map.genus() {
        return Err(format!(
            "{m:?}: {} trisections at genus {}",
            trisections.len(),
            map.genus()
        ));
    }
    for t in trisections {
        let mut sliced = map.clone();
        let vertices = sliced.slice(&t).map_err(|e| e.to_string())?;
        let tau = sliced.glue_set(&vertices).map_err(|e| e.to_string())?;
        if sliced != map || tau.half_edge != t.half_edge {
            return Err(format!("round trip through trisection {} failed", t.half_edge));
        }
    }
    Ok(())
}

fn partition_oracle() -> std::result::Result<(), String> {
    let zero = EnergyParams::default();
    let documented = EnergyParams {
        arc: 0.1,
        hairpin: -0.2,
        interior: 0.05,
        multi: -0.1,
        pseudoknot1: 0.3,
    };
    for params in [&zero, &documented] {
        let tables = PartitionTables::build(6, params);
        for m in 1..=6 {
            for k in 0..=3 {
                let fast = tables.theta0_ln(m, k);
                let slow = ln_or_neg_inf(labeled_partition_by_enumeration(m, k, params));
                if !close_log(fast, slow) {
                    return Err(format!(
                        "marked partition (m={m}, k={k}) log {fast} vs brute force {slow}"
                    ));
                }
            }
            let fast = tables.theta1_ln(m);
            let slow = ln_or_neg_inf(genus_one_partition_by_enumeration(m, params));
            if !close_log(fast, slow) {
                return Err(format!("genus-1 partition (m={m}) log {fast} vs {slow}"));
            }
        }
    }
    // With all parameters zero the genus-1 partition function is the count.
    use rnagenus::num::ToPrimitive;
    let tables = PartitionTables::build(6, &zero);
    let counts = CountTables::new();
    for m in 2..=6 {
        let z = tables.theta1_ln(m).exp();
        let want = counts.matchings(m, 1).to_f64().unwrap();
        if (z - want).abs() > 1e-6 * want {
            return Err(format!("zero-parameter partition at m={m}: {z} vs count {want}"));
        }
    }
    Ok(())
}

fn ln_or_neg_inf(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

fn close_log(a: f64, b: f64) -> bool {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return true;
    }
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn labeled_identity(max_edges: usize) -> std::result::Result<(), String> {
    let params = EnergyParams {
        arc: 0.0,
        hairpin: 1.0,
        interior: 2.0,
        multi: 4.0,
        pseudoknot1: 8.0,
    };
    for n in 2..=max_edges {
        let mut genus_one = 0usize;
        let mut labeled = 0usize;
        for m in perfect_matchings(n) {
            if genus_of_diagram(&m).genus != 1 {
                continue;
            }
            genus_one += 1;
            let pre = labeled_structures_of(&m).map_err(|e| e.to_string())?;
            labeled += pre.len();
            for ls in &pre {
                let back = glue_labeled(ls).map_err(|e| e.to_string())?;
                if back != m {
                    return Err(format!("gluing a marked preimage of {m:?} gave {back:?}"));
                }
                let direct = loop_energy(&m, &params).map_err(|e| e.to_string())?;
                let via_marks = labeled_loop_energy(ls, &params).map_err(|e| e.to_string())?;
                if (direct - via_marks).abs() > 1e-12 {
                    return Err(format!(
                        "energy through marks {via_marks} differs from direct {direct}"
                    ));
                }
            }
        }
        if labeled != 2 * genus_one {
            return Err(format!(
                "n={n}: {labeled} marked structures for {genus_one} genus-1 matchings"
            ));
        }
    }
    Ok(())
}

fn sampler_spot_check(opts: &VerifyOptions) -> std::result::Result<(), String> {
    // All 70 genus-1 matchings on 8 points, with enough draws for power.
    let sampler = MatchingSampler::new(4, 1).map_err(|e| e.to_string())?;
    let mut rng = RandomSource::from_seed(opts.seed ^ 0x5eed);
    let mut index = std::collections::HashMap::new();
    for m in perfect_matchings(4) {
        if genus_of_diagram(&m).genus == 1 {
            let id = index.len();
            index.insert(m, id);
        }
    }
    let draws = (opts.samples.max(100) * 70) as u64;
    let mut observed = vec![0u64; index.len()];
    for _ in 0..draws {
        let m = sampler.sample(&mut rng);
        let id = *index
            .get(&m)
            .ok_or_else(|| format!("sampled {m:?} is not a genus-1 matching"))?;
        observed[id] += 1;
    }
    let outcome = chi_square_uniform(&observed, 1e-3);
    if !outcome.pass {
        let mut msg = String::new();
        let _ = write!(
            msg,
            "chi-square {:.1} over {} cells exceeds the {:.1} threshold",
            outcome.statistic, index.len(), outcome.threshold
        );
        return Err(msg);
    }
    Ok(())
}
