use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on table entries.
pub const DEFAULT_BUDGET: u64 = 1 << 31;

/// d(n), the number of divisors, for n = 1..=limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorTable {
    // values[0] is a zero placeholder so that values[n] = d(n).
    values: Vec<u32>,
}

impl DivisorTable {
    /// Flat increment sieve, O(N log N).
    pub fn new(limit: u64, budget: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::Domain {
                what: "divisor table needs N >= 1",
                value: limit as f64,
            });
        }
        if limit > budget {
            return Err(Error::Resource {
                what: "divisor table",
                requested: limit,
                budget,
            });
        }
        let n = limit as usize;
        let mut values = vec![0u32; n + 1];
        for i in 1..=n {
            for j in (i..=n).step_by(i) {
                values[j] += 1;
            }
        }
        Ok(Self { values })
    }

    /// Rebuilds from raw d(1..=N), e.g. after reading a cache file.
    pub fn from_values(values: &[u32]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain {
                what: "divisor table needs N >= 1",
                value: 0.0,
            });
        }
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0);
        v.extend_from_slice(values);
        Ok(Self { values: v })
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// d(n) for 1 ≤ n ≤ limit.
    #[inline]
    pub fn get(&self, n: usize) -> u32 {
        self.values[n]
    }

    /// d(1), …, d(N).
    pub fn values(&self) -> &[u32] {
        &self.values[1..]
    }
}
