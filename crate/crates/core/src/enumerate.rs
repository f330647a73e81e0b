//! Exact big-integer counting of perfect matchings and partial diagrams by
//! topological genus, plus the rational path weights that drive genus-raising
//! random generation.
//!
//! Counts satisfy:
//!
//! * genus 0 matchings on `n` arcs are counted by the Catalan number `C_n`;
//! * for `g >= 1`, `2g * count(n, g)` equals the number of ways to pick an
//!   odd vertex set in a lower-genus map of the same size:
//!   `sum over k of binom(n + 1 - 2(g - k), 2k + 1) * count(n, g - k)`;
//! * summing over all genera recovers `(2n - 1)!!`, the total number of
//!   perfect matchings on `2n` points.
//!
//! The recurrence mirrors the slice surgery: every genus-`g` map arises from
//! a lower-genus map of equal size by gluing an odd set of vertices, and each
//! genus-`g` map is reached exactly `2g` times (once per trisection).

use std::collections::HashMap;
use std::sync::RwLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient with the usual conventions (`0` when `k > n`).
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// The `n`-th Catalan number `binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// `(2n - 1)!! = 1 * 3 * 5 * ... * (2n - 1)`, the number of perfect
/// matchings on `2n` points.
pub fn double_factorial_odd(n: usize) -> BigUint {
    let mut result = BigUint::one();
    for i in 1..=n {
        result *= BigUint::from(2 * i - 1);
    }
    result
}

/// Memoized count tables for matchings and diagrams of fixed genus.
#[derive(Debug, Default)]
pub struct CountTables {
    matchings: RwLock<HashMap<(usize, usize), BigUint>>,
    path_weights: RwLock<HashMap<(usize, usize, usize), BigRational>>,
}

impl CountTables {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of perfect matchings on `2n` points with genus exactly `g`.
    pub fn matchings(&self, n: usize, g: usize) -> BigUint {
        if g == 0 {
            return catalan(n);
        }
        if n < 2 * g {
            return BigUint::zero();
        }
        if let Some(hit) = self.matchings.read().unwrap().get(&(n, g)) {
            return hit.clone();
        }
        let mut total = BigUint::zero();
        for k in 1..=g {
            let slots = n + 1 - 2 * (g - k);
            let ways = binomial(slots, 2 * k + 1);
            if ways.is_zero() {
                continue;
            }
            total += ways * self.matchings(n, g - k);
        }
        let count = total / BigUint::from(2 * g);
        self.matchings
            .write()
            .unwrap()
            .insert((n, g), count.clone());
        count
    }

    /// Number of length-`length` diagrams with exactly `n` arcs and genus `g`
    /// (choose the `2n` paired positions, then a matching on them).
    pub fn diagrams_with_arcs(&self, length: usize, n: usize, g: usize) -> BigUint {
        if 2 * n > length {
            return BigUint::zero();
        }
        binomial(length, 2 * n) * self.matchings(n, g)
    }

    /// Number of length-`length` diagrams of genus `g`, any number of arcs.
    pub fn diagrams(&self, length: usize, g: usize) -> BigUint {
        (0..=length / 2)
            .map(|n| self.diagrams_with_arcs(length, n, g))
            .sum()
    }

    /// Weight of all glue paths from genus `from` to genus `to` on maps with
    /// `n` edges: each step to genus `t` contributes the number of odd vertex
    /// sets of size `2(t - from) + 1` divided by the `2t` trisections of the
    /// result. Satisfies `matchings(n, g) = path_weight(n, 0, g) * catalan(n)`.
    pub fn glue_path_weight(&self, n: usize, from: usize, to: usize) -> BigRational {
        if from == to {
            return BigRational::one();
        }
        if from > to || n < 2 * to {
            return BigRational::zero();
        }
        if let Some(hit) = self.path_weights.read().unwrap().get(&(n, from, to)) {
            return hit.clone();
        }
        let vertices = n + 1 - 2 * from;
        let mut total = BigRational::zero();
        for t in (from + 1)..=to {
            let sets = binomial(vertices, 2 * (t - from) + 1);
            if sets.is_zero() {
                continue;
            }
            let step = BigRational::new(BigInt::from(sets), BigInt::from(2 * t));
            total += step * self.glue_path_weight(n, t, to);
        }
        self.path_weights
            .write()
            .unwrap()
            .insert((n, from, to), total.clone());
        total
    }

    /// Exact distribution of the next genus reached by a glue step, given a
    /// current genus and the final target. Probabilities sum to one.
    pub fn next_genus_distribution(
        &self,
        n: usize,
        current: usize,
        target: usize,
    ) -> Result<Vec<(usize, BigRational)>> {
        if current >= target || n < 2 * target {
            return Err(Error::InfeasibleMatching {
                edges: n,
                genus: target,
            });
        }
        let denom = self.glue_path_weight(n, current, target);
        if denom.is_zero() {
            return Err(Error::InfeasibleMatching {
                edges: n,
                genus: target,
            });
        }
        let vertices = n + 1 - 2 * current;
        let mut out = Vec::new();
        for t in (current + 1)..=target {
            let sets = binomial(vertices, 2 * (t - current) + 1);
            if sets.is_zero() {
                continue;
            }
            let step = BigRational::new(BigInt::from(sets), BigInt::from(2 * t));
            let p = step * self.glue_path_weight(n, t, target) / denom.clone();
            if !p.is_zero() {
                out.push((t, p));
            }
        }
        debug_assert!(out.iter().map(|(_, p)| p.clone()).sum::<BigRational>().is_one());
        Ok(out)
    }

    /// Exact weights of each arc count `n` among genus-`g` diagrams of the
    /// given length, for sampling the arc count of a uniform diagram.
    pub fn arc_count_distribution(
        &self,
        length: usize,
        g: usize,
    ) -> Result<Vec<(usize, BigUint)>> {
        let weights: Vec<(usize, BigUint)> = (0..=length / 2)
            .map(|n| (n, self.diagrams_with_arcs(length, n, g)))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        if weights.is_empty() {
            return Err(Error::InfeasibleDiagram { length, genus: g });
        }
        Ok(weights)
    }
}
