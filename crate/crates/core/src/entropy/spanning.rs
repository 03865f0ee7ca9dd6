use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::cache::OrbitCache;
use super::index::ProbeIndex;
use crate::error::{Error, Result};

/// Greedy set cover: `sets[c]` lists the elements covered by candidate `c`.
/// Picks the candidate covering the most uncovered elements, ties to the
/// smallest index. Returns the chosen candidates, or `None` if some element
/// is not covered by any set.
pub fn greedy_set_cover(universe: usize, sets: &[Vec<u32>]) -> Option<Vec<u32>> {
    let mut covered = alloc::vec![false; universe];
    let mut remaining = universe;
    let mut heap: BinaryHeap<(usize, Reverse<u32>)> = sets
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .map(|(c, s)| (s.len(), Reverse(c as u32)))
        .collect();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (stored, Reverse(c)) = heap.pop()?;
        let fresh = sets[c as usize].iter().filter(|&&i| !covered[i as usize]).count();
        if fresh == 0 {
            continue;
        }
        if fresh < stored {
            heap.push((fresh, Reverse(c)));
            continue;
        }
        for &i in &sets[c as usize] {
            if !covered[i as usize] {
                covered[i as usize] = true;
                remaining -= 1;
            }
        }
        chosen.push(c);
    }
    Some(chosen)
}

/// Coverage lists `(center, verified horizon)` per element for a growing
/// list of candidate centers, maintained across increasing `n`.
pub struct CoverageTracker<'a> {
    cache: &'a OrbitCache,
    eps: f64,
    n: usize,
    seen: usize,
    lists: Vec<Vec<(u32, u32)>>,
}

impl<'a> CoverageTracker<'a> {
    pub fn new(cache: &'a OrbitCache, eps: f64) -> Self {
        CoverageTracker {
            cache,
            eps,
            n: 0,
            seen: 0,
            lists: alloc::vec![Vec::new(); cache.len()],
        }
    }

    /// Updates coverage to horizon `n`. `centers` must extend the list given
    /// at the previous call.
    pub fn advance(&mut self, n: usize, centers: &[u32]) -> Result<()> {
        self.cache.check_horizon(n)?;
        if n < self.n || centers.len() < self.seen {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "coverage horizons and centers must grow",
            });
        }
        let (cache, eps) = (self.cache, self.eps);
        for (i, list) in self.lists.iter_mut().enumerate() {
            list.retain_mut(|(c, h)| {
                let keep = cache.close_on(i, *c as usize, *h as usize, n, eps);
                *h = n as u32;
                keep
            });
        }
        let fresh = &centers[self.seen..];
        if !fresh.is_empty() {
            let mut index = ProbeIndex::new(cache, n, eps);
            for &c in fresh {
                index.insert(cache, c as usize);
            }
            let mut cand = Vec::new();
            for i in 0..cache.len() {
                index.candidates(cache, i, &mut cand);
                for &c in &cand {
                    if cache.close_on(i, c, 0, n, eps) {
                        self.lists[i].push((c as u32, n as u32));
                    }
                }
            }
        }
        self.seen = centers.len();
        self.n = n;
        Ok(())
    }

    /// Greedy cover size over the current candidate centers.
    pub fn cover_count(&self) -> Result<usize> {
        let m = self.cache.len();
        let mut pos = alloc::vec![usize::MAX; m];
        let mut sets: Vec<Vec<u32>> = Vec::new();
        let mut order: Vec<u32> = self
            .lists
            .iter()
            .flat_map(|l| l.iter().map(|&(c, _)| c))
            .collect();
        order.sort_unstable();
        order.dedup();
        for &c in &order {
            pos[c as usize] = sets.len();
            sets.push(Vec::new());
        }
        for (i, list) in self.lists.iter().enumerate() {
            for &(c, _) in list {
                sets[pos[c as usize]].push(i as u32);
            }
        }
        greedy_set_cover(m, &sets)
            .map(|c| c.len())
            .ok_or(Error::Unsupported("spanning candidates do not cover the sample"))
    }
}

/// Greedy spanning count with every sample element as a candidate center.
pub fn spanning_greedy(cache: &OrbitCache, n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must be positive",
        });
    }
    let all: Vec<u32> = (0..cache.len() as u32).collect();
    let mut t = CoverageTracker::new(cache, eps);
    t.advance(n, &all)?;
    t.cover_count()
}
