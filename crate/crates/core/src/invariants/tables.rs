use serde::Serialize;

/// Counts indexed by (homological degree, internal degree), with a flag per
/// homological degree saying whether the marginal `sum_j` is certified
/// complete despite the internal-degree truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub max_hdeg: usize,
    pub bound: usize,
    counts: Vec<Vec<u64>>,
    certified: Vec<bool>,
}

pub type DeviationTable = CountTable;
pub type BettiTable = CountTable;

impl CountTable {
    pub fn new(max_hdeg: usize, bound: usize) -> Self {
        Self {
            max_hdeg,
            bound,
            counts: vec![vec![0; bound + 1]; max_hdeg + 1],
            certified: vec![false; max_hdeg + 1],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn add(&mut self, i: usize, j: usize, n: u64) {
        self.counts[i][j] += n;
    }

    pub fn set(&mut self, i: usize, j: usize, n: u64) {
        self.counts[i][j] = n;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.counts[i]
    }

    /// `sum_j` of row `i`; a lower bound unless `is_certified(i)`.
    pub fn marginal(&self, i: usize) -> u64 {
        self.counts.get(i).map_or(0, |r| r.iter().sum())
    }

    pub fn marginals(&self) -> Vec<u64> {
        (0..=self.max_hdeg).map(|i| self.marginal(i)).collect()
    }

    pub fn is_certified(&self, i: usize) -> bool {
        self.certified.get(i).copied().unwrap_or(false)
    }

    pub fn set_certified(&mut self, i: usize, c: bool) {
        self.certified[i] = c;
    }

    /// Largest `h` such that every row `<= h` is certified.
    pub fn certified_through(&self) -> Option<usize> {
        let n = self.certified.iter().take_while(|&&c| c).count();
        n.checked_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marginals_and_flags() {
        let mut t = CountTable::new(3, 4);
        t.add(1, 1, 2);
        t.add(1, 3, 1);
        t.set_certified(0, true);
        t.set_certified(1, true);
        t.set_certified(3, true);
        assert_eq!(t.marginals(), vec![0, 3, 0, 0]);
        assert_eq!(t.certified_through(), Some(1));
        assert_eq!(t.get(9, 9), 0);
        assert_eq!(t.total(), 3);
    }
}
