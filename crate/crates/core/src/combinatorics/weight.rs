use alloc::vec::Vec;

use super::partition::Partition;
use crate::error::{Error, Result};

/// A weakly decreasing integer `r`-tuple: the highest weight `[λ, μ]` of a
/// rational GL_r module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedWeight(Vec<i64>);

impl SignedWeight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAWeight);
        }
        Ok(Self(entries))
    }

    /// `[λ, μ]` with entries `λ_i - μ_{r-i+1}`.
    pub fn from_pair(lambda: &Partition, mu: &Partition, r: usize) -> Result<Self> {
        let length = lambda.length() + mu.length();
        if length > r {
            return Err(Error::LengthExceedsRank { length, r });
        }
        Ok(Self((0..r).map(|i| lambda.part(i) as i64 - mu.part(r - 1 - i) as i64).collect()))
    }

    pub fn from_partition(lambda: &Partition, r: usize) -> Result<Self> {
        Self::from_pair(lambda, &Partition::empty(), r)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Inverse of [`SignedWeight::from_pair`].
    pub fn decompose(&self) -> (Partition, Partition) {
        let pos = self.0.iter().map(|&e| e.max(0) as usize).collect();
        let neg = self.0.iter().rev().map(|&e| (-e).max(0) as usize).collect();
        (
            Partition::new(pos).expect("decreasing"),
            Partition::new(neg).expect("decreasing"),
        )
    }

    pub fn shifted(&self, k: i64) -> Self {
        Self(self.0.iter().map(|e| e + k).collect())
    }

    /// The weight as a partition, if all entries are nonnegative.
    pub fn to_partition(&self) -> Option<Partition> {
        if self.0.iter().any(|&e| e < 0) {
            return None;
        }
        Partition::new(self.0.iter().map(|&e| e as usize).collect()).ok()
    }
}
