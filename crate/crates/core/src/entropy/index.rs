//! Bucket index over a growing set of sample elements, used to find the
//! elements that can be within `d_n < ε` of a query.
//!
//! At each probe time the circle is cut into cells wider than `ε`, so two
//! points at distance `< ε` sit in the same or adjacent cells. Arcs whose
//! complement is at least `2ε` long are keyed by the cells of both
//! endpoints: for such arcs `d_H < ε` forces both endpoint pairs within
//! `ε`. Arcs with complement shorter than `4ε` also go to a shared LONG
//! bucket; since length is 2-Lipschitz in `d_H`, a close pair is always
//! found either through the endpoint cells or through LONG.

use alloc::vec;
use alloc::vec::Vec;

use super::cache::OrbitCache;
use crate::math::frac;

const MAX_PROBES: usize = 32;

pub(crate) struct ProbeIndex {
    times: Vec<usize>,
    ncell: usize,
    eps: f64,
    scalar: bool,
    /// `buckets[p][b]`; arc indexes use `ncell²` endpoint buckets plus LONG.
    buckets: Vec<Vec<Vec<u32>>>,
    stamp: Vec<u32>,
    epoch: u32,
}

#[derive(Clone, Copy)]
enum Key {
    Cell(usize),
    Pair(usize, usize),
}

impl ProbeIndex {
    pub(crate) fn new(cache: &OrbitCache, n: usize, eps: f64) -> Self {
        let probes = n.min(MAX_PROBES);
        let mut times: Vec<usize> = (0..probes)
            .map(|p| if probes == 1 { 0 } else { p * (n - 1) / (probes - 1) })
            .collect();
        times.dedup();
        let ncell = ((1.0 / (eps + 1e-9)) as usize).clamp(1, 4096);
        let scalar = cache.is_scalar();
        let nb = if scalar { ncell } else { ncell * ncell + 1 };
        ProbeIndex {
            buckets: vec![vec![Vec::new(); nb]; times.len()],
            times,
            ncell,
            eps,
            scalar,
            stamp: vec![0; cache.len()],
            epoch: 0,
        }
    }

    #[inline]
    fn cell(&self, x: f64) -> usize {
        ((frac(x) * self.ncell as f64) as usize).min(self.ncell - 1)
    }

    fn long_bucket(&self) -> usize {
        self.ncell * self.ncell
    }

    /// Endpoint key and LONG membership of element `i` at time `t`.
    fn key(&self, cache: &OrbitCache, i: usize, t: usize) -> (Option<Key>, bool) {
        let (s, l) = cache.span_at(i, t);
        if self.scalar {
            return (Some(Key::Cell(self.cell(s))), false);
        }
        let l = l.clamp(0.0, 1.0);
        let gap = 1.0 - l;
        let key = if gap >= 2.0 * self.eps {
            Some(Key::Pair(self.cell(s), self.cell(s + l)))
        } else {
            None
        };
        (key, gap < 4.0 * self.eps)
    }

    pub(crate) fn insert(&mut self, cache: &OrbitCache, i: usize) {
        for p in 0..self.times.len() {
            let (key, long) = self.key(cache, i, self.times[p]);
            match key {
                Some(Key::Cell(c)) => self.buckets[p][c].push(i as u32),
                Some(Key::Pair(a, b)) => self.buckets[p][a * self.ncell + b].push(i as u32),
                None => {}
            }
            if long {
                let lb = self.long_bucket();
                self.buckets[p][lb].push(i as u32);
            }
        }
    }

    fn neighbors(&self, c: usize) -> ([usize; 3], usize) {
        let m = self.ncell;
        match m {
            1 => ([0, 0, 0], 1),
            2 => ([0, 1, 0], 2),
            _ => ([(c + m - 1) % m, c, (c + 1) % m], 3),
        }
    }

    /// Bucket ids that may hold an element within `ε` of `i` at probe `p`.
    fn query_buckets(&self, cache: &OrbitCache, i: usize, p: usize, out: &mut Vec<usize>) {
        out.clear();
        let (key, long) = self.key(cache, i, self.times[p]);
        match key {
            Some(Key::Cell(c)) => {
                let (nb, k) = self.neighbors(c);
                out.extend_from_slice(&nb[..k]);
            }
            Some(Key::Pair(a, b)) => {
                let (na, ka) = self.neighbors(a);
                let (nb, kb) = self.neighbors(b);
                for &x in &na[..ka] {
                    for &y in &nb[..kb] {
                        out.push(x * self.ncell + y);
                    }
                }
                if long {
                    out.push(self.long_bucket());
                }
            }
            None => out.push(self.long_bucket()),
        }
    }

    /// Calls `visit` on each indexed element that may be within `ε` of `i`
    /// until it returns `true`; returns that element.
    pub(crate) fn find(
        &mut self,
        cache: &OrbitCache,
        i: usize,
        mut visit: impl FnMut(usize) -> bool,
    ) -> Option<usize> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        let mut ids = Vec::with_capacity(10);
        let mut best_size = usize::MAX;
        for p in 0..self.times.len() {
            self.query_buckets(cache, i, p, &mut ids);
            let size: usize = ids.iter().map(|&b| self.buckets[p][b].len()).sum();
            if size < best_size {
                best_size = size;
                best = Some((p, ids.clone()));
                if size == 0 {
                    return None;
                }
            }
        }
        let (p, ids) = best?;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        for b in ids {
            for idx in 0..self.buckets[p][b].len() {
                let j = self.buckets[p][b][idx] as usize;
                if self.stamp[j] == self.epoch {
                    continue;
                }
                self.stamp[j] = self.epoch;
                if visit(j) {
                    return Some(j);
                }
            }
        }
        None
    }

    /// Every indexed element that may be within `ε` of `i`, in bucket order.
    pub(crate) fn candidates(&mut self, cache: &OrbitCache, i: usize, out: &mut Vec<usize>) {
        out.clear();
        self.find(cache, i, |j| {
            out.push(j);
            false
        });
    }
}
