//! Partition function over labeled genus-0 structures and the
//! Boltzmann-weighted genus-1 sampler built on top of it.
//!
//! A genus-0 perfect matching is a plane forest of arcs. Summing
//! `exp(energy)` over all structures with a chosen number of marked loops
//! factors through two tree/forest tables, filled by an `O(n^2)` dynamic
//! program in log space:
//!
//! * `t[m][j]`: trees (one root arc over a forest) with `m` arcs and `j`
//!   marks on the arcs' loops;
//! * `s[m][j]`: forests with `m` arcs and `j` marks.
//!
//! A tree's root loop is a hairpin, interior loop or multiloop according to
//! how many trees its inside forest has (zero, one, or more), unless the
//! loop is marked. The whole structure adds the outermost loop with the
//! same case split.
//!
//! Since gluing the three marks of a labeled structure preserves energy and
//! every genus-1 matching has exactly two labeled preimages, the genus-1
//! partition function is half the three-mark genus-0 one, and sampling a
//! labeled structure by stochastic backtracking through the tables, then
//! gluing, emits each genus-1 matching with probability proportional to
//! `exp(energy)`.

use std::f64::consts::LN_2;

use statrs::function::gamma::ln_gamma;

use crate::diagram::Diagram;
use crate::energy::{
    glue_labeled, labeled_loop_energy, loop_energy, EnergyParams, LabeledStructure,
};
use crate::error::{Error, Result};
use crate::sampler::{spread_over_length, RandomSource};
use crate::unicellular::{UnicellularMap, VertexHandle};

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Draws an index with probability proportional to `exp` of the given log
/// weights.
fn pick_ln(rng: &mut RandomSource, weights: &[f64]) -> usize {
    let max = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(max.is_finite(), "no branch has positive weight");
    let linear: Vec<f64> = weights.iter().map(|&w| (w - max).exp()).collect();
    let total: f64 = linear.iter().sum();
    let mut draw = rng.unit_f64() * total;
    for (i, &w) in linear.iter().enumerate() {
        draw -= w;
        if draw < 0.0 {
            return i;
        }
    }
    linear.iter().rposition(|&w| w > 0.0).expect("positive total")
}

const NEG_INF: f64 = f64::NEG_INFINITY;

/// Log-space tree/forest tables for matchings with up to `max_arcs` arcs
/// and up to three marked loops. Building costs `O(max_arcs^2)`.
#[derive(Debug, Clone)]
pub struct PartitionTables {
    params: EnergyParams,
    max_arcs: usize,
    /// `t[m][j]`: log weight of trees with `m` arcs, `j` marks.
    t: Vec<[f64; 4]>,
    /// `s[m][j]`: log weight of forests with `m` arcs, `j` marks.
    s: Vec<[f64; 4]>,
    /// `t2p[m][j]`: log weight of forests with at least two trees.
    t2p: Vec<[f64; 4]>,
}

impl PartitionTables {
    pub fn build(max_arcs: usize, params: &EnergyParams) -> Self {
        let rows = max_arcs + 1;
        let mut t = vec![[NEG_INF; 4]; rows];
        let mut s = vec![[NEG_INF; 4]; rows];
        let mut t2p = vec![[NEG_INF; 4]; rows];
        s[0][0] = 0.0;
        let c = params.mark_score();
        for m in 1..rows {
            for j in 0..4 {
                // Root arc over: nothing (hairpin), one tree (interior),
                // several trees (multiloop), or anything with the root loop
                // marked.
                let mut w = NEG_INF;
                if m == 1 && j == 0 {
                    w = log_add(w, params.hairpin);
                }
                w = log_add(w, params.interior + t[m - 1][j]);
                w = log_add(w, params.multi + t2p[m - 1][j]);
                if j >= 1 {
                    w = log_add(w, c + s[m - 1][j - 1]);
                }
                t[m][j] = params.arc + w;
            }
            // Convolve on the size of the first tree. A forest of m >= 1
            // arcs has at least one tree; requiring a nonempty remainder
            // gives the at-least-two-trees table.
            for i in 1..=m {
                for j in 0..4 {
                    for j1 in 0..=j {
                        let product = t[i][j1] + s[m - i][j - j1];
                        s[m][j] = log_add(s[m][j], product);
                        if i < m {
                            t2p[m][j] = log_add(t2p[m][j], product);
                        }
                    }
                }
            }
        }
        Self {
            params: *params,
            max_arcs,
            t,
            s,
            t2p,
        }
    }

    pub fn params(&self) -> &EnergyParams {
        &self.params
    }

    pub fn max_arcs(&self) -> usize {
        self.max_arcs
    }

    /// Log partition function over genus-0 matchings with `m` arcs and `k`
    /// marked loops (out of the `m + 1` loops).
    pub fn theta0_ln(&self, m: usize, k: usize) -> f64 {
        assert!(m <= self.max_arcs && k <= 3);
        if m == 0 {
            return if k == 0 { 0.0 } else { NEG_INF };
        }
        let mut w = NEG_INF;
        w = log_add(w, self.params.interior + self.t[m][k]);
        w = log_add(w, self.params.multi + self.t2p[m][k]);
        if k >= 1 {
            w = log_add(w, self.params.mark_score() + self.s[m][k - 1]);
        }
        w
    }

    /// Log partition function over genus-1 matchings with `m` arcs: half the
    /// three-mark genus-0 value (each genus-1 matching has two labeled
    /// preimages).
    pub fn theta1_ln(&self, m: usize) -> f64 {
        self.theta0_ln(m, 3) - LN_2
    }

    /// Draws a labeled structure with `m` arcs and three marks, with
    /// probability proportional to `exp` of its labeled energy.
    pub fn sample_labeled(&self, m: usize, rng: &mut RandomSource) -> Result<LabeledStructure> {
        if m > self.max_arcs || self.theta0_ln(m, 3) == NEG_INF {
            return Err(Error::InfeasibleMatching { edges: m, genus: 1 });
        }
        let c = self.params.mark_score();
        let mut arcs: Vec<(usize, usize)> = Vec::with_capacity(m);
        let mut marked_arc_openings: Vec<usize> = Vec::new();
        let mut exterior_marked = false;

        enum Task {
            /// A tree of `arcs` arcs with `marks` marks, leftmost position
            /// `base`.
            Tree { arcs: usize, marks: usize, base: usize },
            /// A forest; `min_trees` is 0 or 2.
            Forest {
                arcs: usize,
                marks: usize,
                base: usize,
                min_trees: usize,
            },
        }

        // Outermost loop: the case split of `theta0_ln`.
        let top = [
            self.params.interior + self.t[m][3],
            self.params.multi + self.t2p[m][3],
            c + self.s[m][2],
        ];
        let mut stack: Vec<Task> = Vec::new();
        match pick_ln(rng, &top) {
            0 => stack.push(Task::Tree {
                arcs: m,
                marks: 3,
                base: 1,
            }),
            1 => stack.push(Task::Forest {
                arcs: m,
                marks: 3,
                base: 1,
                min_trees: 2,
            }),
            _ => {
                exterior_marked = true;
                stack.push(Task::Forest {
                    arcs: m,
                    marks: 2,
                    base: 1,
                    min_trees: 0,
                });
            }
        }

        while let Some(task) = stack.pop() {
            match task {
                Task::Tree { arcs: a, marks, base } => {
                    debug_assert!(a >= 1);
                    arcs.push((base, base + 2 * a - 1));
                    let mut branch_ws = vec![
                        if a == 1 && marks == 0 {
                            self.params.hairpin
                        } else {
                            NEG_INF
                        },
                        self.params.interior + self.t[a - 1][marks],
                        self.params.multi + self.t2p[a - 1][marks],
                    ];
                    branch_ws.push(if marks >= 1 {
                        c + self.s[a - 1][marks - 1]
                    } else {
                        NEG_INF
                    });
                    match pick_ln(rng, &branch_ws) {
                        0 => {}
                        1 => stack.push(Task::Tree {
                            arcs: a - 1,
                            marks,
                            base: base + 1,
                        }),
                        2 => stack.push(Task::Forest {
                            arcs: a - 1,
                            marks,
                            base: base + 1,
                            min_trees: 2,
                        }),
                        _ => {
                            marked_arc_openings.push(base);
                            stack.push(Task::Forest {
                                arcs: a - 1,
                                marks: marks - 1,
                                base: base + 1,
                                min_trees: 0,
                            });
                        }
                    }
                }
                Task::Forest {
                    arcs: a,
                    marks,
                    base,
                    min_trees,
                } => {
                    if a == 0 {
                        debug_assert_eq!(marks, 0);
                        debug_assert_eq!(min_trees, 0);
                        continue;
                    }
                    // Choose the first tree's size and mark count; the rest
                    // must hold at least `min_trees - 1` further trees.
                    let limit = if min_trees >= 2 { a - 1 } else { a };
                    let mut options: Vec<(usize, usize)> = Vec::new();
                    let mut ws: Vec<f64> = Vec::new();
                    for i in 1..=limit {
                        for j1 in 0..=marks {
                            options.push((i, j1));
                            ws.push(self.t[i][j1] + self.s[a - i][marks - j1]);
                        }
                    }
                    let (i, j1) = options[pick_ln(rng, &ws)];
                    stack.push(Task::Forest {
                        arcs: a - i,
                        marks: marks - j1,
                        base: base + 2 * i,
                        min_trees: min_trees.saturating_sub(1),
                    });
                    stack.push(Task::Tree {
                        arcs: i,
                        marks: j1,
                        base,
                    });
                }
            }
        }

        debug_assert_eq!(arcs.len(), m);
        let matching = Diagram::new(2 * m, arcs).expect("trees tile the backbone");
        let dual = UnicellularMap::from_matching(&matching)?;
        let mut labels: Vec<VertexHandle> = marked_arc_openings
            .iter()
            .map(|&p| dual.vertex_of(p - 1))
            .collect();
        if exterior_marked {
            labels.push(dual.vertex_of(2 * m - 1));
        }
        LabeledStructure::new(matching, labels)
    }

    /// Draws a genus-1 perfect matching on `2m` points with probability
    /// `exp(energy) / exp(theta1_ln(m))`.
    pub fn sample_matching(&self, m: usize, rng: &mut RandomSource) -> Result<Diagram> {
        glue_labeled(&self.sample_labeled(m, rng)?)
    }
}

/// Boltzmann sampler over genus-1 diagrams of a fixed length: the arc count
/// is drawn with weight `binom(length, 2n) * exp(theta1_ln(n))`, then a
/// matching is sampled and scattered over the backbone.
#[derive(Debug)]
pub struct GenusOneDiagramSampler {
    length: usize,
    tables: PartitionTables,
    arc_counts: Vec<usize>,
    arc_weights: Vec<f64>,
}

impl GenusOneDiagramSampler {
    pub fn new(length: usize, params: &EnergyParams) -> Result<Self> {
        let tables = PartitionTables::build(length / 2, params);
        let mut arc_counts = Vec::new();
        let mut arc_weights = Vec::new();
        for n in 2..=length / 2 {
            let w = ln_binomial(length, 2 * n) + tables.theta1_ln(n);
            if w > NEG_INF {
                arc_counts.push(n);
                arc_weights.push(w);
            }
        }
        if arc_counts.is_empty() {
            return Err(Error::InfeasibleDiagram { length, genus: 1 });
        }
        Ok(Self {
            length,
            tables,
            arc_counts,
            arc_weights,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn tables(&self) -> &PartitionTables {
        &self.tables
    }

    pub fn sample(&self, rng: &mut RandomSource) -> Diagram {
        let n = self.arc_counts[pick_ln(rng, &self.arc_weights)];
        let matching = self
            .tables
            .sample_matching(n, rng)
            .expect("arc counts come from the feasible set");
        spread_over_length(&matching, self.length, rng)
    }
}

/// One Boltzmann-weighted genus-1 matching on `2n` points.
pub fn sample_genus_one_matching(
    n: usize,
    params: &EnergyParams,
    rng: &mut RandomSource,
) -> Result<Diagram> {
    PartitionTables::build(n, params).sample_matching(n, rng)
}

/// One Boltzmann-weighted genus-1 diagram of the given length.
pub fn sample_genus_one_diagram(
    length: usize,
    params: &EnergyParams,
    rng: &mut RandomSource,
) -> Result<Diagram> {
    Ok(GenusOneDiagramSampler::new(length, params)?.sample(rng))
}

/// Brute-force labeled partition function: sums `exp(labeled energy)` over
/// every genus-0 matching with `m` arcs and every `k`-subset of its dual
/// vertices. Ground truth for [`PartitionTables::theta0_ln`]; keep `m <= 7`.
pub fn labeled_partition_by_enumeration(m: usize, k: usize, params: &EnergyParams) -> f64 {
    if m == 0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let mut total = 0.0;
    for matching in crate::census::noncrossing_matchings(m) {
        let dual = UnicellularMap::from_matching(&matching).expect("perfect");
        let handles = dual.vertices();
        for subset in k_subsets(handles.len(), k) {
            let labels = subset.iter().map(|&i| handles[i]).collect();
            let ls = LabeledStructure::new(matching.clone(), labels).expect("valid labels");
            total += labeled_loop_energy(&ls, params).expect("genus 0").exp();
        }
    }
    total
}

/// Brute-force genus-1 partition function: sums `exp(energy)` over every
/// genus-1 matching with `n` arcs. Ground truth for
/// [`PartitionTables::theta1_ln`]; keep `n <= 7`.
pub fn genus_one_partition_by_enumeration(n: usize, params: &EnergyParams) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut total = 0.0;
    for matching in crate::census::perfect_matchings(n) {
        let map = UnicellularMap::from_matching(&matching).expect("perfect");
        if map.genus() == 1 {
            total += loop_energy(&matching, params).expect("genus 1").exp();
        }
    }
    total
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}
