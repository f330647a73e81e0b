//! Chord diagrams: a linear backbone `1..=length` with disjoint arcs.

use crate::error::{Error, Result};

/// A partial chord diagram. Positions are 1-based; every position is the
/// endpoint of at most one arc, and arcs are stored sorted by left endpoint.
///
/// A diagram whose positions are all paired is a perfect matching; those are
/// the structures the genus machinery operates on directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    length: usize,
    arcs: Vec<(usize, usize)>,
}

impl Diagram {
    /// Validates endpoints and stores arcs sorted by left endpoint.
    pub fn new(length: usize, mut arcs: Vec<(usize, usize)>) -> Result<Self> {
        let mut used = vec![false; length + 1];
        for &(i, j) in &arcs {
            if i == 0 || j == 0 || i > length || j > length {
                return Err(Error::InvalidDiagram(format!(
                    "arc ({i},{j}) out of range 1..={length}"
                )));
            }
            if i >= j {
                return Err(Error::InvalidDiagram(format!(
                    "arc ({i},{j}) must satisfy left < right"
                )));
            }
            for p in [i, j] {
                if used[p] {
                    return Err(Error::InvalidDiagram(format!(
                        "position {p} belongs to two arcs"
                    )));
                }
                used[p] = true;
            }
        }
        arcs.sort_unstable();
        Ok(Self { length, arcs })
    }

    /// Wraps arcs already known to be valid and sorted by left endpoint,
    /// skipping the validation pass. Debug builds on small inputs re-check.
    pub(crate) fn from_sorted_arcs(length: usize, arcs: Vec<(usize, usize)>) -> Self {
        debug_assert!(
            length > 512 || Self::new(length, arcs.clone()).map(|d| d.arcs == arcs) == Ok(true)
        );
        Self { length, arcs }
    }

    pub fn empty(length: usize) -> Self {
        Self {
            length,
            arcs: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_perfect_matching(&self) -> bool {
        2 * self.arcs.len() == self.length
    }

    /// The partner of `position`, if it is paired.
    pub fn partner(&self, position: usize) -> Option<usize> {
        self.arcs.iter().find_map(|&(i, j)| {
            if i == position {
                Some(j)
            } else if j == position {
                Some(i)
            } else {
                None
            }
        })
    }

    /// Partner lookup table indexed by position (0 marks unpaired slots).
    pub fn partner_table(&self) -> Vec<usize> {
        let mut table = vec![0; self.length + 1];
        for &(i, j) in &self.arcs {
            table[i] = j;
            table[j] = i;
        }
        table
    }

    pub fn unpaired_positions(&self) -> Vec<usize> {
        let table = self.partner_table();
        (1..=self.length).filter(|&p| table[p] == 0).collect()
    }

    /// Drops unpaired positions and relabels the paired ones order-preservingly,
    /// yielding the perfect matching induced by the arcs.
    pub fn induced_matching(&self) -> Diagram {
        let mut rank = vec![0; self.length + 1];
        let table = self.partner_table();
        let mut next = 0;
        for p in 1..=self.length {
            if table[p] != 0 {
                next += 1;
                rank[p] = next;
            }
        }
        let arcs = self.arcs.iter().map(|&(i, j)| (rank[i], rank[j])).collect();
        Diagram::new(2 * self.arcs.len(), arcs).expect("relabeling preserves validity")
    }

    /// Checks that the diagram is a perfect matching, reporting the first
    /// unpaired position otherwise.
    pub fn require_perfect(&self) -> Result<()> {
        if self.is_perfect_matching() {
            return Ok(());
        }
        let position = self.unpaired_positions().first().copied().unwrap_or(0);
        Err(Error::NotPerfectMatching { position })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_endpoints() {
        assert!(Diagram::new(4, vec![(1, 3), (2, 4)]).is_ok());
        assert!(Diagram::new(4, vec![(1, 5)]).is_err());
        assert!(Diagram::new(4, vec![(3, 1)]).is_err());
        assert!(Diagram::new(4, vec![(1, 2), (2, 3)]).is_err());
        assert!(Diagram::new(4, vec![(0, 2)]).is_err());
    }

    #[test]
    fn arcs_are_sorted() {
        let d = Diagram::new(6, vec![(3, 6), (1, 4), (2, 5)]).unwrap();
        assert_eq!(d.arcs(), &[(1, 4), (2, 5), (3, 6)]);
    }

    #[test]
    fn induced_matching_relabels() {
        // Positions 3 and 5 are unpaired; stripping them maps (1,4) -> (1,3)
        // and (2,6) -> (2,4).
        let d = Diagram::new(6, vec![(1, 4), (2, 6)]).unwrap();
        assert_eq!(d.unpaired_positions(), vec![3, 5]);
        let m = d.induced_matching();
        assert_eq!(m.length(), 4);
        assert_eq!(m.arcs(), &[(1, 3), (2, 4)]);
        assert!(m.is_perfect_matching());
    }

    #[test]
    fn perfect_matching_check() {
        let m = Diagram::new(4, vec![(1, 3), (2, 4)]).unwrap();
        assert!(m.require_perfect().is_ok());
        let d = Diagram::new(5, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(
            d.require_perfect(),
            Err(Error::NotPerfectMatching { position: 5 })
        );
    }
}
