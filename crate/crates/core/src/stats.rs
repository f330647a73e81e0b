//! Statistical checks used to validate the samplers: chi-square
//! goodness-of-fit against exact expectations, a multiplicity (birthday
//! spread) test against the binomial law, and total-variation distance.

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete, DiscreteCDF};

/// Outcome of a chi-square goodness-of-fit test at significance `alpha`:
/// the test passes when the statistic stays below the `1 - alpha` quantile.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub threshold: f64,
    pub pass: bool,
}

fn finish(statistic: f64, dof: usize, alpha: f64) -> ChiSquareOutcome {
    assert!(dof >= 1, "chi-square needs at least two cells");
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let threshold = dist.inverse_cdf(1.0 - alpha);
    ChiSquareOutcome {
        statistic,
        degrees_of_freedom: dof,
        threshold,
        pass: statistic <= threshold,
    }
}

/// Chi-square test of observed counts against explicit expected counts.
pub fn chi_square(observed: &[u64], expected: &[f64], alpha: f64) -> ChiSquareOutcome {
    assert_eq!(observed.len(), expected.len());
    assert!(expected.iter().all(|&e| e > 0.0), "expected counts must be positive");
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    finish(statistic, observed.len() - 1, alpha)
}

/// Chi-square test of observed counts against the uniform distribution over
/// all cells.
pub fn chi_square_uniform(observed: &[u64], alpha: f64) -> ChiSquareOutcome {
    let total: u64 = observed.iter().sum();
    let expected = vec![total as f64 / observed.len() as f64; observed.len()];
    chi_square(observed, &expected, alpha)
}

/// Tests whether per-cell hit counts look binomial: under uniform sampling
/// of `trials` draws over equally likely cells, each cell's multiplicity is
/// `Binomial(trials, cell_probability)`. Builds the histogram of observed
/// multiplicities, merges tail bins until every expected count reaches
/// `min_expected`, and runs a chi-square on the result.
pub fn chi_square_multiplicities(
    cell_counts: &[u64],
    trials: u64,
    cell_probability: f64,
    min_expected: f64,
    alpha: f64,
) -> ChiSquareOutcome {
    let cells = cell_counts.len() as f64;
    let max_count = *cell_counts.iter().max().expect("at least one cell") as usize;
    let mut histogram = vec![0u64; max_count + 1];
    for &c in cell_counts {
        histogram[c as usize] += 1;
    }
    let binomial =
        Binomial::new(cell_probability, trials).expect("probability in range");
    let expected: Vec<f64> = (0..=max_count).map(|k| cells * binomial.pmf(k as u64)).collect();
    // The upper tail beyond the largest observed multiplicity folds into the
    // last bin so the expectations sum to the number of cells.
    let tail = cells * (1.0 - binomial.cdf(max_count as u64));

    let mut merged_obs = Vec::new();
    let mut merged_exp = Vec::new();
    let (mut acc_o, mut acc_e) = (0u64, 0.0f64);
    for k in 0..=max_count {
        acc_o += histogram[k];
        acc_e += expected[k];
        if k == max_count {
            acc_e += tail;
        }
        if acc_e >= min_expected {
            merged_obs.push(acc_o);
            merged_exp.push(acc_e);
            acc_o = 0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 || acc_o > 0 {
        if let (Some(o), Some(e)) = (merged_obs.last_mut(), merged_exp.last_mut()) {
            *o += acc_o;
            *e += acc_e;
        } else {
            merged_obs.push(acc_o);
            merged_exp.push(acc_e.max(f64::MIN_POSITIVE));
        }
    }
    chi_square(&merged_obs, &merged_exp, alpha)
}

/// Total-variation distance between two distributions over the same cells:
/// half the sum of absolute differences.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::RandomSource;

    #[test]
    fn uniform_counts_pass_and_skewed_counts_fail() {
        let mut rng = RandomSource::from_seed(123);
        let mut observed = [0u64; 10];
        for _ in 0..10_000 {
            observed[rng.below_usize(10)] += 1;
        }
        assert!(chi_square_uniform(&observed, 1e-3).pass);
        let skewed: Vec<u64> = (0..10).map(|i| 1000 + 200 * i).collect();
        assert!(!chi_square_uniform(&skewed, 1e-3).pass);
    }

    #[test]
    fn threshold_matches_known_quantiles() {
        // The 0.999 quantile of chi-square with 9 degrees of freedom.
        let outcome = chi_square_uniform(&[1000u64; 10], 1e-3);
        assert!((outcome.threshold - 27.877).abs() < 0.01);
        assert!(outcome.statistic < 1e-9);
    }

    #[test]
    fn multiplicities_of_uniform_sampling_look_binomial() {
        let mut rng = RandomSource::from_seed(9);
        let cells = 500;
        let trials = 50_000u64;
        let mut counts = vec![0u64; cells];
        for _ in 0..trials {
            counts[rng.below_usize(cells)] += 1;
        }
        let outcome =
            chi_square_multiplicities(&counts, trials, 1.0 / cells as f64, 5.0, 1e-3);
        assert!(outcome.pass, "statistic {outcome:?}");
        // A constant profile is far too even for a binomial spread.
        let rigged = vec![trials / cells as u64; cells];
        let outcome = chi_square_multiplicities(&rigged, trials, 1.0 / cells as f64, 5.0, 1e-3);
        assert!(!outcome.pass, "statistic {outcome:?}");
    }

    #[test]
    fn total_variation_bounds() {
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!((total_variation(&[0.6, 0.4], &[0.5, 0.5]) - 0.1).abs() < 1e-12);
    }
}
