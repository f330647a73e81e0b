//! Permutations on `0..n`, the raw material for fatgraphs and maps.

use crate::error::{Error, Result};

/// A permutation of `{0, 1, ..., n-1}` stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image table, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(Error::InvalidPermutation { size: n });
            }
            seen[y] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation on `0..n` from disjoint cycles; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x >= n || y >= n || moved[x] {
                    return Err(Error::InvalidPermutation { size: n });
                }
                moved[x] = true;
                images[x] = y;
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The full cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + 1) % n.max(1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Self { images: inv }
    }

    /// Functional composition `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            images: (0..self.len())
                .map(|x| self.apply(other.apply(x)))
                .collect(),
        })
    }

    /// Disjoint cycles, each listed from its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    /// True when the permutation pairs up all points without fixed points.
    pub fn is_fixed_point_free_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| y != x && self.images[y] == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_images(vec![1, 2, 0]).is_ok());
    }

    #[test]
    fn cycles_round_trip() {
        let p = Permutation::from_cycles(8, &[vec![0, 7], vec![1, 4], vec![2, 5], vec![3, 6]])
            .unwrap();
        assert!(p.is_fixed_point_free_involution());
        assert_eq!(
            p.cycles(),
            vec![vec![0, 7], vec![1, 4], vec![2, 5], vec![3, 6]]
        );
        assert_eq!(p.inverse(), p);
    }

    #[test]
    fn rejects_overlapping_cycles() {
        assert!(Permutation::from_cycles(4, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn composition_applies_right_factor_first() {
        // gamma = alpha ∘ sigma with sigma the full cycle on 8 points and alpha the
        // pairing (0 7)(1 4)(2 5)(3 6) has cycles (0 4 2 6), (1 5 3) and (7).
        let sigma = Permutation::cyclic(8);
        let alpha =
            Permutation::from_cycles(8, &[vec![0, 7], vec![1, 4], vec![2, 5], vec![3, 6]])
                .unwrap();
        let gamma = alpha.compose(&sigma).unwrap();
        assert_eq!(
            gamma.cycles(),
            vec![vec![0, 4, 2, 6], vec![1, 5, 3], vec![7]]
        );
    }

    #[test]
    fn cyclic_and_identity() {
        assert_eq!(Permutation::cyclic(4).images(), &[1, 2, 3, 0]);
        assert_eq!(Permutation::identity(3).cycle_count(), 3);
        assert_eq!(Permutation::cyclic(5).cycle_count(), 1);
    }
}
