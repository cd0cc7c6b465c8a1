//! Nonnegative integer transition matrices.

use std::fmt;

use num::{BigUint, Zero};

/// Rows are indexed by target edges, columns by source edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    entries: Vec<Vec<BigUint>>,
}

impl TransitionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Self {
        TransitionMatrix {
            entries: counts
                .into_iter()
                .map(|r| r.into_iter().map(BigUint::from).collect())
                .collect(),
        }
    }

    pub fn from_entries(entries: Vec<Vec<BigUint>>) -> Self {
        TransitionMatrix { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<BigUint>] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.entries.iter().all(|r| r.len() == self.rows())
    }

    /// Matrix product `self · rhs`; panics on a dimension mismatch.
    pub fn mul(&self, rhs: &TransitionMatrix) -> TransitionMatrix {
        assert_eq!(self.cols(), rhs.rows(), "dimension mismatch");
        let n = rhs.cols();
        let entries = self
            .entries
            .iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        row.iter()
                            .zip(&rhs.entries)
                            .filter(|(a, _)| !a.is_zero())
                            .fold(BigUint::zero(), |acc, (a, r)| acc + a * &r[j])
                    })
                    .collect()
            })
            .collect();
        TransitionMatrix { entries }
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().flatten().all(|x| !x.is_zero())
    }

    /// Some power `M^t` with `1 ≤ t ≤ (n−1)² + 1` is entrywise positive.
    ///
    /// Only the zero pattern matters, so powers are taken over the boolean
    /// semiring.
    pub fn is_primitive(&self) -> bool {
        if !self.is_square() || self.rows() == 0 {
            return false;
        }
        let n = self.rows();
        let pattern: Vec<Vec<bool>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| !x.is_zero()).collect())
            .collect();
        let bound = (n - 1) * (n - 1) + 1;
        let mut power = pattern.clone();
        for _ in 0..bound {
            if power.iter().flatten().all(|&b| b) {
                return true;
            }
            power = bool_mul(&power, &pattern);
        }
        false
    }
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).any(|(&x, r)| x && r[j]))
                .collect()
        })
        .collect()
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> TransitionMatrix {
        TransitionMatrix::from_counts(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn primitivity_examples() {
        assert!(m(&[&[1, 1], &[1, 0]]).is_primitive());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_primitive());
        assert!(m(&[&[2, 1], &[1, 1]]).is_primitive());
        assert_eq!(
            m(&[&[1, 1], &[1, 0]]).mul(&m(&[&[1, 1], &[1, 0]])),
            m(&[&[2, 1], &[1, 1]])
        );
    }

    #[test]
    fn wielandt_extremal_matrix_needs_full_bound() {
        // Wielandt's matrix attains exponent (n-1)^2 + 1.
        let w = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert!(w.is_primitive());
        let mut p = w.clone();
        for _ in 1..5 {
            assert!(!p.is_positive());
            p = p.mul(&w);
        }
        assert!(p.is_positive());
    }

    #[test]
    fn display() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).to_string(), "[[2,1],[1,1]]");
    }
}
