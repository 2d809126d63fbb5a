//! Resampling inference for generalized correlations: the maximum-entropy
//! bootstrap for dependent series, the i.i.d. pairs bootstrap, percentile
//! intervals from order statistics, and bootstrap p-values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gencorr::rstar;
use crate::num::{real, Real};
use crate::taraldsen::Tails;

/// Resampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResampleMethod {
    /// Maximum-entropy bootstrap; preserves the rank order of each series.
    MaxEntropy,
    /// Classical i.i.d. pairs bootstrap.
    Iid,
}

/// Percentile interval over bootstrap order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootInterval<R> {
    pub lower: R,
    pub upper: R,
    pub level: R,
    pub tails: Tails,
}

/// Full record of a bootstrap run.
#[derive(Debug, Clone)]
pub struct BootstrapResult<R> {
    pub statistic_name: String,
    /// Point estimate on the original data.
    pub estimate: R,
    pub replicates: Vec<R>,
    pub order_statistics: Vec<R>,
    pub interval: BootInterval<R>,
    /// Proportion of replicates whose sign opposes the point estimate.
    pub p_value: R,
    pub seed: u64,
    pub method: ResampleMethod,
}

/// Stream-splitting hash (splitmix64 finalizer) deriving the seed of
/// replicate `index` from the run seed; replicates are therefore
/// independent of generation order.
fn replicate_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Piecewise-uniform maximum-entropy quantile map fitted to one series.
struct MeQuantile<R> {
    /// n + 1 interval boundaries covering the support.
    boundaries: Vec<R>,
    /// Positions of the original observations in rank order:
    /// `rank_of[t]` is the rank of observation t.
    rank_of: Vec<usize>,
}

impl<R: Real> MeQuantile<R> {
    fn fit(x: &[R]) -> Result<Self> {
        let n = x.len();
        if n < 5 {
            return Err(Error::InsufficientData(format!(
                "maximum-entropy bootstrap needs at least 5 observations, got {n}"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
        let sorted: Vec<R> = order.iter().map(|&i| x[i]).collect();
        let mut rank_of = vec![0usize; n];
        for (rank, &i) in order.iter().enumerate() {
            rank_of[i] = rank;
        }

        // trimmed mean (10% each end) of absolute successive differences
        let mut diffs: Vec<R> = sorted.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let trim = diffs.len() / 10;
        let kept = &diffs[trim..diffs.len() - trim];
        let m = if kept.is_empty() {
            R::zero()
        } else {
            kept.iter().copied().sum::<R>() / R::from_usize(kept.len()).unwrap()
        };

        // boundaries: extended lower tail, midpoints, extended upper tail
        let mut boundaries = Vec::with_capacity(n + 1);
        boundaries.push(sorted[0] - m);
        let half = real::<R>(0.5);
        for w in sorted.windows(2) {
            boundaries.push(half * (w[0] + w[1]));
        }
        boundaries.push(sorted[n - 1] + m);
        Ok(Self { boundaries, rank_of })
    }

    /// Maps uniforms through the quantile function, then restores the
    /// original series' rank order.
    fn replicate(&self, uniforms: &[R]) -> Vec<R> {
        let n = self.rank_of.len();
        debug_assert_eq!(uniforms.len(), n);
        let nf = R::from_usize(n).unwrap();
        let mut drawn: Vec<R> = uniforms
            .iter()
            .map(|&u| {
                let scaled = u * nf;
                let k = scaled.to_f64().unwrap().floor() as usize;
                let k = k.min(n - 1);
                let frac = scaled - R::from_usize(k).unwrap();
                let lo = self.boundaries[k];
                let hi = self.boundaries[k + 1];
                lo + frac * (hi - lo)
            })
            .collect();
        drawn.sort_by(|a, b| a.partial_cmp(b).unwrap());
        self.rank_of.iter().map(|&rank| drawn[rank]).collect()
    }
}

/// One maximum-entropy bootstrap replicate of a single series.
pub fn meboot_replicate<R: Real>(x: &[R], seed: u64) -> Result<Vec<R>> {
    let q = MeQuantile::fit(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniforms: Vec<R> = (0..x.len()).map(|_| real(rng.gen::<f64>())).collect();
    Ok(q.replicate(&uniforms))
}

/// Bootstraps the generalized correlation r*(response|regressor).
///
/// A single uniform stream (or index stream for the i.i.d. method) drives
/// both series within each replicate, preserving their cross-dependence.
/// Replicate seeds are derived from (seed, replicate index), so the result
/// is deterministic for fixed inputs regardless of evaluation order.
pub fn bootstrap_rstar<R: Real>(
    response: &[R],
    regressor: &[R],
    replications: usize,
    level: R,
    tails: Tails,
    method: ResampleMethod,
    seed: u64,
) -> Result<BootstrapResult<R>> {
    if replications < 99 {
        return Err(Error::InsufficientData(format!(
            "bootstrap needs at least 99 replications, got {replications}"
        )));
    }
    if !(level > R::zero() && level < R::one()) {
        return Err(Error::Domain(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    let estimate = rstar(regressor, response)?.r_star_y_given_x;
    let n = response.len();

    let (q_resp, q_reg) = match method {
        ResampleMethod::MaxEntropy => (
            Some(MeQuantile::fit(response)?),
            Some(MeQuantile::fit(regressor)?),
        ),
        ResampleMethod::Iid => (None, None),
    };

    let mut replicates = Vec::with_capacity(replications);
    for ell in 0..replications {
        let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(seed, ell as u64));
        let (resp_rep, reg_rep) = match method {
            ResampleMethod::MaxEntropy => {
                let uniforms: Vec<R> = (0..n).map(|_| real(rng.gen::<f64>())).collect();
                (
                    q_resp.as_ref().unwrap().replicate(&uniforms),
                    q_reg.as_ref().unwrap().replicate(&uniforms),
                )
            }
            ResampleMethod::Iid => {
                let idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                (
                    idx.iter().map(|&i| response[i]).collect(),
                    idx.iter().map(|&i| regressor[i]).collect(),
                )
            }
        };
        let value = match rstar(&reg_rep, &resp_rep) {
            Ok(pair) => pair.r_star_y_given_x,
            // degenerate replicate (e.g. constant resample): dependence is
            // perfect only for a constant pair of a constant original
            Err(Error::Degenerate(_)) => estimate,
            Err(e) => return Err(e),
        };
        replicates.push(value);
    }

    let mut order_statistics = replicates.clone();
    order_statistics.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let interval = percentile_interval(&order_statistics, level, tails);

    let opposite = replicates
        .iter()
        .filter(|&&r| {
            if estimate >= R::zero() {
                r < R::zero()
            } else {
                r > R::zero()
            }
        })
        .count();
    let p_value = R::from_usize(opposite).unwrap() / R::from_usize(replications).unwrap();

    Ok(BootstrapResult {
        statistic_name: "r*(response|regressor)".to_string(),
        estimate,
        replicates,
        order_statistics,
        interval,
        p_value,
        seed,
        method,
    })
}

/// Percentile interval from sorted replicates. A two-tail interval at
/// level L uses the ceil(J*(1-L)/2)-th and floor(J*(1+L)/2)-th order
/// statistics (1-based); one-tail intervals put all excluded mass in the
/// named tail, extending to the domain bound on the other side.
pub fn percentile_interval<R: Real>(
    order_statistics: &[R],
    level: R,
    tails: Tails,
) -> BootInterval<R> {
    let j = order_statistics.len();
    let jf = j as f64;
    let alpha = (R::one() - level).to_f64().unwrap();
    // clamped 1-based index -> element
    let at = |one_based: f64| {
        let idx = (one_based.max(1.0).min(jf) as usize) - 1;
        order_statistics[idx]
    };
    let (lower, upper) = match tails {
        Tails::Two => (
            at((jf * alpha / 2.0).ceil()),
            at((jf * (1.0 - alpha / 2.0)).floor()),
        ),
        Tails::LeftTail => (at((jf * alpha).ceil()), R::one()),
        Tails::RightTail => (-R::one(), at((jf * (1.0 - alpha)).floor())),
    };
    BootInterval {
        lower,
        upper,
        level,
        tails,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn ar1(n: usize, phi: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![0.0f64];
        for _ in 1..n {
            let shock: f64 = rng.gen_range(-1.0..1.0);
            let prev = *x.last().unwrap();
            x.push(phi * prev + shock);
        }
        x
    }

    fn ranks(x: &[f64]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
        let mut r = vec![0; x.len()];
        for (k, &i) in order.iter().enumerate() {
            r[i] = k;
        }
        r
    }

    #[test]
    fn meboot_preserves_rank_order() {
        let x = ar1(40, 0.7, 5);
        for seed in 0..5 {
            let rep = meboot_replicate(&x, seed).unwrap();
            assert_eq!(ranks(&x), ranks(&rep));
        }
    }

    #[test]
    fn meboot_constant_series_stays_constant() {
        let x = vec![3.0f64; 12];
        let rep = meboot_replicate(&x, 1).unwrap();
        for &v in &rep {
            assert!((v - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn meboot_mean_is_unbiased_at_desk_scale() {
        let x = ar1(60, 0.6, 99);
        let orig_mean: f64 = x.iter().sum::<f64>() / x.len() as f64;
        let mut means = Vec::new();
        for seed in 0..999u64 {
            let rep = meboot_replicate(&x, seed).unwrap();
            means.push(rep.iter().sum::<f64>() / rep.len() as f64);
        }
        let grand = means.iter().sum::<f64>() / means.len() as f64;
        let sd = (means.iter().map(|m| (m - grand).powi(2)).sum::<f64>()
            / (means.len() - 1) as f64)
            .sqrt();
        assert!(
            (grand - orig_mean).abs() < 3.0 * sd.max(1e-9),
            "replicate grand mean {grand} vs original {orig_mean} (sd {sd})"
        );
        assert!(meboot_replicate(&x[..4], 0).is_err());
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let x = ar1(30, 0.5, 1);
        let y: Vec<f64> = x.iter().map(|&v| v + 0.5 * v * v).collect();
        let a = bootstrap_rstar(&y, &x, 199, 0.95, Tails::Two, ResampleMethod::MaxEntropy, 42)
            .unwrap();
        let b = bootstrap_rstar(&y, &x, 199, 0.95, Tails::Two, ResampleMethod::MaxEntropy, 42)
            .unwrap();
        assert_eq!(a.replicates, b.replicates);
        assert_eq!(a.interval, b.interval);
        let c = bootstrap_rstar(&y, &x, 199, 0.95, Tails::Two, ResampleMethod::MaxEntropy, 43)
            .unwrap();
        assert_ne!(a.replicates, c.replicates);
    }

    #[test]
    fn intervals_nest() {
        for seed in 0..20u64 {
            let x = ar1(25, 0.4, seed);
            let y: Vec<f64> = {
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
                x.iter()
                    .map(|&v| v + rng.gen_range(-0.5..0.5))
                    .collect()
            };
            let r =
                bootstrap_rstar(&y, &x, 199, 0.95, Tails::Two, ResampleMethod::Iid, seed).unwrap();
            let narrow = percentile_interval(&r.order_statistics, 0.90, Tails::Two);
            assert!(narrow.lower >= r.interval.lower);
            assert!(narrow.upper <= r.interval.upper);
        }
    }

    #[test]
    fn perfectly_dependent_pair_collapses() {
        let x = ar1(20, 0.3, 8);
        let r = bootstrap_rstar(&x, &x, 99, 0.95, Tails::Two, ResampleMethod::MaxEntropy, 7)
            .unwrap();
        // the kernel smoother leaves a little bias even on an identical
        // pair, so "collapses" means near one rather than exactly one
        let min = r.replicates.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min > 0.99, "min replicate = {min}");
        assert!(r.interval.lower > 0.99 && r.interval.upper > 0.99);
        assert_eq!(r.p_value, 0.0);
    }

    #[test]
    fn one_tail_interval_uses_order_statistic_index_rule() {
        let os: Vec<f64> = (1..=999).map(|i| i as f64 / 1000.0).collect();
        // J = 999, 5% in the left tail: lower limit is the 50th order statistic
        let ci = percentile_interval(&os, 0.95, Tails::LeftTail);
        assert_eq!(ci.lower, os[49]);
        assert_eq!(ci.upper, 1.0);
        let ci = percentile_interval(&os, 0.95, Tails::Two);
        assert_eq!(ci.lower, os[24]);
        assert_eq!(ci.upper, os[973]);
    }

    #[test]
    fn rejects_small_j() {
        let x = ar1(20, 0.3, 8);
        assert!(
            bootstrap_rstar(&x, &x, 50, 0.95, Tails::Two, ResampleMethod::Iid, 0).is_err()
        );
    }
}
