//! Exact counts on small samples, as oracles for the greedy engine.
//!
//! All three work on the "close" graph `i ~ j ⇔ d_n(i, j) < ε`:
//! `sep` is a maximum independent set, `span` (centers in the sample) a
//! minimum dominating set, `cov` a minimum clique cover.

use alloc::vec::Vec;

use super::cache::OrbitCache;
use crate::error::{Error, Result};

/// Largest sample accepted by [`exact_separated_small`].
pub const EXACT_MAX: usize = 18;

/// Adjacency masks of the close graph, self excluded.
pub fn close_graph(cache: &OrbitCache, n: usize, eps: f64) -> Result<Vec<u32>> {
    let m = cache.len();
    if m > 32 {
        return Err(Error::SampleTooLarge { size: m, max: 32 });
    }
    cache.check_horizon(n)?;
    let mut adj = alloc::vec![0u32; m];
    for i in 0..m {
        for j in (i + 1)..m {
            if cache.close_on(i, j, 0, n, eps) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Ok(adj)
}

/// Maximum independent set size by branch and bound: branch on the lowest
/// vertex, prune when the remaining vertices cannot beat the best.
pub fn max_independent_set(adj: &[u32]) -> usize {
    fn go(adj: &[u32], cand: u32, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        // Isolated in the candidate graph: always take it.
        if adj[v] & cand == 0 {
            go(adj, cand & !(1 << v), size + 1, best);
            return;
        }
        go(adj, cand & !(1 << v) & !adj[v], size + 1, best);
        go(adj, cand & !(1 << v), size, best);
    }
    let all = if adj.len() == 32 { u32::MAX } else { (1u32 << adj.len()) - 1 };
    let mut best = 0;
    go(adj, all, 0, &mut best);
    best
}

/// Exact maximum cardinality of an `(n, ε)`-separated subset of the sample.
pub fn exact_separated_small(cache: &OrbitCache, n: usize, eps: f64) -> Result<usize> {
    if cache.len() > EXACT_MAX {
        return Err(Error::SampleTooLarge {
            size: cache.len(),
            max: EXACT_MAX,
        });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "must be positive",
        });
    }
    Ok(max_independent_set(&close_graph(cache, n, eps)?))
}

fn subsets_by_size(m: usize) -> impl Iterator<Item = u32> {
    let all: u32 = if m == 32 { u32::MAX } else { (1 << m) - 1 };
    let mut v: Vec<u32> = (0..=all).collect();
    v.sort_by_key(|s| (s.count_ones(), *s));
    v.into_iter()
}

/// Minimum dominating set of the close graph (centers in the sample).
/// Exhaustive; meant for at most 16 vertices.
pub fn min_dominating_set(adj: &[u32]) -> usize {
    let m = adj.len();
    if m == 0 {
        return 0;
    }
    let all: u32 = (1u32 << m) - 1;
    for s in subsets_by_size(m) {
        let mut cov = 0u32;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            cov |= adj[v] | (1 << v);
            bits &= bits - 1;
        }
        if cov == all {
            return s.count_ones() as usize;
        }
    }
    m
}

/// Minimum number of cliques covering the close graph. Exhaustive dynamic
/// programming over subsets; meant for at most 16 vertices.
pub fn min_clique_cover(adj: &[u32]) -> usize {
    let m = adj.len();
    if m == 0 {
        return 0;
    }
    let full = 1usize << m;
    let mut is_clique = alloc::vec![false; full];
    is_clique[0] = true;
    for s in 1..full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        is_clique[s] = is_clique[rest] && (rest as u32 & !adj[v]) == 0;
    }
    let mut best = alloc::vec![u8::MAX; full];
    best[0] = 0;
    for s in 1..full {
        // The lowest vertex of `s` goes in some clique inside `s`.
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let c = sub | low;
            if is_clique[c] {
                let b = best[s ^ c].saturating_add(1);
                if b < best[s] {
                    best[s] = b;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full - 1] as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate_mis(adj: &[u32]) -> usize {
        let m = adj.len();
        (0u32..(1 << m))
            .filter(|&s| (0..m).all(|v| s & (1 << v) == 0 || adj[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn mis_matches_enumeration_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..300 {
            let m = rng.gen_range(1..=12);
            let p = rng.gen_range(0.05..0.9);
            let mut adj = alloc::vec![0u32; m];
            for i in 0..m {
                for j in (i + 1)..m {
                    if rng.gen_bool(p) {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
            }
            assert_eq!(max_independent_set(&adj), enumerate_mis(&adj));
        }
    }

    #[test]
    fn trivial_graphs() {
        assert_eq!(max_independent_set(&[0, 0, 0]), 3);
        assert_eq!(max_independent_set(&[0b110, 0b101, 0b011]), 1);
        assert_eq!(min_dominating_set(&[0b110, 0b101, 0b011]), 1);
        assert_eq!(min_clique_cover(&[0b110, 0b101, 0b011]), 1);
        assert_eq!(min_clique_cover(&[0, 0, 0]), 3);
        // Path 0-1-2-3.
        let path = [0b10, 0b101, 0b1010, 0b100];
        assert_eq!(max_independent_set(&path), 2);
        assert_eq!(min_dominating_set(&path), 2);
        assert_eq!(min_clique_cover(&path), 2);
    }
}
