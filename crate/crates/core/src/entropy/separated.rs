use alloc::vec::Vec;

use super::cache::OrbitCache;
use super::index::ProbeIndex;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Status {
    Unseen,
    Kept,
    /// Within `d_n < ε` of kept element `witness` for all `n ≤ verified`.
    Rejected { witness: u32, verified: u32 },
}

/// Greedy `(n, ε)`-separated sets for a fixed `ε` over increasing `n`.
///
/// The first call to [`advance`](Self::advance) is the plain fixed-order
/// greedy. Later calls keep the current set, which stays separated because
/// `d_n` grows with `n`, re-check each rejected element against its
/// witness, and scan for new elements in the same order. The result is a
/// maximal separated set at every `n`, so counts are nondecreasing in `n`
/// and satisfy `sep(n, 2ε) ≤ count ≤ sep(n, ε)` on the sample.
pub struct GreedySeparated<'a> {
    cache: &'a OrbitCache,
    eps: f64,
    n: usize,
    kept: Vec<u32>,
    status: Vec<Status>,
}

impl<'a> GreedySeparated<'a> {
    pub fn new(cache: &'a OrbitCache, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps",
                reason: "must be positive",
            });
        }
        Ok(GreedySeparated {
            cache,
            eps,
            n: 0,
            kept: Vec::new(),
            status: alloc::vec![Status::Unseen; cache.len()],
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn horizon(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.kept.len()
    }

    /// Kept elements in insertion order.
    pub fn certificate(&self) -> &[u32] {
        &self.kept
    }

    /// Kept element within `d_n < ε` of element `i`, or `i` itself if kept.
    pub fn witness(&self, i: usize) -> Option<usize> {
        match self.status[i] {
            Status::Kept => Some(i),
            Status::Rejected { witness, .. } => Some(witness as usize),
            Status::Unseen => None,
        }
    }

    /// Extends the separated set to horizon `n`.
    pub fn advance(&mut self, n: usize) -> Result<usize> {
        self.cache.check_horizon(n)?;
        if n < self.n {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "horizons must be nondecreasing",
            });
        }
        let cache = self.cache;
        let eps = self.eps;
        let mut index = ProbeIndex::new(cache, n, eps);
        for &k in &self.kept {
            index.insert(cache, k as usize);
        }
        for i in 0..cache.len() {
            match self.status[i] {
                Status::Kept => continue,
                Status::Rejected { witness, verified } => {
                    if cache.close_on(i, witness as usize, verified as usize, n, eps) {
                        self.status[i] = Status::Rejected {
                            witness,
                            verified: n as u32,
                        };
                        continue;
                    }
                }
                Status::Unseen => {}
            }
            let found = index.find(cache, i, |j| cache.close_on(i, j, 0, n, eps));
            match found {
                Some(j) => {
                    self.status[i] = Status::Rejected {
                        witness: j as u32,
                        verified: n as u32,
                    }
                }
                None => {
                    self.status[i] = Status::Kept;
                    self.kept.push(i as u32);
                    index.insert(cache, i);
                }
            }
        }
        self.n = n;
        Ok(self.kept.len())
    }
}

/// One-shot fixed-order greedy: count and the kept elements.
pub fn greedy_separated(cache: &OrbitCache, n: usize, eps: f64) -> Result<(usize, Vec<u32>)> {
    let mut g = GreedySeparated::new(cache, eps)?;
    let c = g.advance(n)?;
    Ok((c, g.kept))
}

/// Brute-force fixed-order greedy without the index, for cross-checks.
pub fn greedy_separated_naive(cache: &OrbitCache, n: usize, eps: f64) -> Result<Vec<u32>> {
    cache.check_horizon(n)?;
    let mut kept: Vec<u32> = Vec::new();
    for i in 0..cache.len() {
        if kept
            .iter()
            .all(|&j| !cache.close_on(i, j as usize, 0, n, eps))
        {
            kept.push(i as u32);
        }
    }
    Ok(kept)
}
