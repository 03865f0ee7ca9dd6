use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{ln, sqrt};

/// Counts over a grid of scales `ε` and horizons `n`; `sep[e][i]` belongs to
/// `eps[e]` and `n[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub eps: Vec<f64>,
    pub n: Vec<usize>,
    pub sep: Vec<Vec<u64>>,
    pub span: Vec<Vec<u64>>,
}

impl GrowthTable {
    /// `sep` nondecreasing in `n` and nonincreasing in `ε`.
    pub fn is_monotone(&self) -> bool {
        let n_ok = self.sep.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]));
        let mut order: Vec<usize> = (0..self.eps.len()).collect();
        order.sort_by(|&a, &b| self.eps[b].partial_cmp(&self.eps[a]).unwrap());
        let e_ok = order
            .windows(2)
            .all(|w| (0..self.n.len()).all(|i| self.sep[w[0]][i] <= self.sep[w[1]][i]));
        n_ok && e_ok
    }

    /// `span ≤ sep` in every cell.
    pub fn spanning_below_separated(&self) -> bool {
        self.sep
            .iter()
            .zip(&self.span)
            .all(|(a, b)| a.iter().zip(b).all(|(s, p)| p <= s))
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, usize, u64, u64)> + '_ {
        self.eps.iter().enumerate().flat_map(move |(e, &eps)| {
            self.n
                .iter()
                .enumerate()
                .map(move |(i, &n)| (eps, n, self.sep[e][i], self.span[e][i]))
        })
    }
}

/// Least-squares line through `log count` against `log n` at one scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleFit {
    pub eps: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log count`.
    pub residual: f64,
    pub poor_fit: bool,
    /// Horizons used by the fit.
    pub n_used: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub fits: Vec<ScaleFit>,
    /// Slope at the smallest `ε`, clamped at 0.
    pub estimate: f64,
    /// Slopes drop by more than [`TREND_TOL`] as `ε` decreases.
    pub nonmonotone_eps_trend: bool,
    pub poor_fit: bool,
}

/// Residual above which a fit is flagged.
pub const POOR_FIT: f64 = 0.1;
/// Allowed drop of the slope between consecutive finer scales.
pub const TREND_TOL: f64 = 0.1;

/// Least-squares `(slope, intercept, rms residual)` of `ys` against `xs`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    (slope, intercept, sqrt(ss / m))
}

/// Fits `log count ~ log n` on the upper half of the horizons.
pub fn fit_scale(eps: f64, ns: &[usize], counts: &[u64]) -> Result<ScaleFit> {
    if ns.len() < 4 {
        return Err(Error::TooFewHorizons {
            needed: 4,
            got: ns.len(),
        });
    }
    let keep = ns.len().div_ceil(2);
    let keep = keep.max(2);
    let from = ns.len() - keep;
    let xs: Vec<f64> = ns[from..].iter().map(|&n| ln(n as f64)).collect();
    let ys: Vec<f64> = counts[from..].iter().map(|&c| ln(c.max(1) as f64)).collect();
    let (slope, intercept, residual) = least_squares(&xs, &ys);
    Ok(ScaleFit {
        eps,
        slope,
        intercept,
        residual,
        poor_fit: residual > POOR_FIT,
        n_used: ns[from..].to_vec(),
    })
}

/// Per-scale slopes and the estimate at the smallest scale.
pub fn growth_exponent(t: &GrowthTable) -> Result<EntropyEstimate> {
    if t.eps.is_empty() {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: "growth table has no scales",
        });
    }
    let fits = t
        .eps
        .iter()
        .zip(&t.sep)
        .map(|(&e, row)| fit_scale(e, &t.n, row))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..fits.len()).collect();
    order.sort_by(|&a, &b| fits[b].eps.partial_cmp(&fits[a].eps).unwrap());
    let nonmonotone = order
        .windows(2)
        .any(|w| fits[w[1]].slope < fits[w[0]].slope - TREND_TOL);
    let finest = &fits[*order.last().unwrap()];
    Ok(EntropyEstimate {
        estimate: finest.slope.max(0.0),
        nonmonotone_eps_trend: nonmonotone,
        poor_fit: fits.iter().any(|f| f.poor_fit),
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: impl Fn(usize) -> u64) -> GrowthTable {
        let n: Vec<usize> = (3..=9).map(|k| 1usize << k).collect();
        let row: Vec<u64> = n.iter().map(|&x| f(x)).collect();
        GrowthTable {
            eps: alloc::vec![0.1],
            n,
            sep: alloc::vec![row.clone()],
            span: alloc::vec![row],
        }
    }

    #[test]
    fn constant_counts_give_zero() {
        let e = growth_exponent(&table(|_| 17)).unwrap();
        assert!(e.estimate.abs() < 1e-12);
        assert!(!e.poor_fit);
    }

    #[test]
    fn linear_counts_give_one() {
        let e = growth_exponent(&table(|n| n as u64)).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-12);
        assert!(e.fits[0].residual < 1e-12);
        assert_eq!(e.fits[0].n_used, alloc::vec![64, 128, 256, 512]);
    }

    #[test]
    fn too_few_horizons() {
        let t = GrowthTable {
            eps: alloc::vec![0.1],
            n: alloc::vec![8, 16, 32],
            sep: alloc::vec![alloc::vec![1, 2, 3]],
            span: alloc::vec![alloc::vec![1, 2, 3]],
        };
        assert!(matches!(growth_exponent(&t), Err(Error::TooFewHorizons { .. })));
    }

    #[test]
    fn trend_and_monotonicity_flags() {
        let n: Vec<usize> = (3..=9).map(|k| 1usize << k).collect();
        let coarse: Vec<u64> = n.iter().map(|&x| (x * x) as u64).collect();
        let fine: Vec<u64> = n.iter().map(|&x| (x * x) as u64 + 5).collect();
        let t = GrowthTable {
            eps: alloc::vec![0.2, 0.1],
            n: n.clone(),
            sep: alloc::vec![coarse.clone(), fine.clone()],
            span: alloc::vec![coarse, fine],
        };
        assert!(t.is_monotone());
        assert!(t.spanning_below_separated());
        let flat: Vec<u64> = n.iter().map(|_| 10).collect();
        let t2 = GrowthTable {
            eps: alloc::vec![0.2, 0.1],
            n: n.clone(),
            sep: alloc::vec![n.iter().map(|&x| x as u64).collect(), flat.clone()],
            span: alloc::vec![flat.clone(), flat],
        };
        assert!(growth_exponent(&t2).unwrap().nonmonotone_eps_trend);
        assert!(!t2.is_monotone());
    }
}
