//! Classical baseline measures: Pearson correlation, Fisher's
//! z-transform, contingency-table independence, binned entropy and KL
//! divergence, the Fisher-information ratio, and the Hellinger
//! correlation transform.

use crate::error::{Error, Result};
use crate::num::{count, mean, real, Real};

/// Pearson product-moment correlation.
pub fn pearson<R: Real>(x: &[R], y: &[R]) -> Result<R> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData(
            "correlation needs at least 3 observations".into(),
        ));
    }
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = R::zero();
    let mut syy = R::zero();
    let mut sxy = R::zero();
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == R::zero() || syy == R::zero() {
        return Err(Error::Degenerate(
            "correlation undefined for a constant series".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Variance convention for the z-transform's normal approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceMode {
    /// Variance 1/n.
    #[default]
    OverN,
    /// Classical variance 1/(n-3).
    OverNMinus3,
}

/// Fisher z-transform of a correlation with a two-tail normal p-value.
pub fn fisher_z<R: Real>(r: R, n: usize, mode: VarianceMode) -> Result<(R, R)> {
    if !(r.abs() < R::one()) {
        return Err(Error::Domain(format!(
            "z-transform undefined at |r| = 1, got {r}"
        )));
    }
    if n < 4 {
        return Err(Error::InsufficientData(
            "z-transform needs at least 4 observations".into(),
        ));
    }
    let half = real::<R>(0.5);
    let z = half * ((R::one() + r) / (R::one() - r)).ln();
    let var = match mode {
        VarianceMode::OverN => R::one() / count(n),
        VarianceMode::OverNMinus3 => R::one() / count(n - 3),
    };
    let p = real::<R>(2.0) * (R::one() - standard_normal_cdf(z.abs() / var.sqrt()));
    Ok((z, p))
}

/// Standard normal CDF, Abramowitz & Stegun 26.2.17 (error < 7.5e-8).
pub fn standard_normal_cdf<R: Real>(x: R) -> R {
    let ax = x.abs();
    let k = R::one() / (R::one() + real::<R>(0.2316419) * ax);
    let phi = real::<R>(0.398_942_280_401_432_7) * (-real::<R>(0.5) * ax * ax).exp();
    let poly = k
        * (real::<R>(0.319_381_530)
            + k * (real::<R>(-0.356_563_782)
                + k * (real::<R>(1.781_477_937)
                    + k * (real::<R>(-1.821_255_978) + k * real::<R>(1.330_274_429)))));
    let upper = R::one() - phi * poly;
    if x >= R::zero() {
        upper
    } else {
        R::one() - upper
    }
}

/// Nonnegative count matrix with precomputed margins.
#[derive(Debug, Clone)]
pub struct ContingencyTable<R> {
    pub counts: Vec<Vec<R>>,
    pub row_totals: Vec<R>,
    pub col_totals: Vec<R>,
    pub grand_total: R,
}

impl<R: Real> ContingencyTable<R> {
    pub fn new(counts: Vec<Vec<R>>) -> Result<Self> {
        if counts.is_empty() || counts[0].is_empty() {
            return Err(Error::Shape("contingency table must be non-empty".into()));
        }
        let c = counts[0].len();
        if counts.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("contingency table rows have unequal lengths".into()));
        }
        if counts.iter().flatten().any(|&v| v < R::zero() || !v.is_finite()) {
            return Err(Error::Domain("contingency table counts must be nonnegative".into()));
        }
        let row_totals: Vec<R> = counts.iter().map(|row| row.iter().copied().sum()).collect();
        let col_totals: Vec<R> = (0..c)
            .map(|j| counts.iter().map(|row| row[j]).sum())
            .collect();
        let grand_total: R = row_totals.iter().copied().sum();
        if !(grand_total > R::zero()) {
            return Err(Error::Degenerate("contingency table is all zero".into()));
        }
        Ok(Self {
            counts,
            row_totals,
            col_totals,
            grand_total,
        })
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts[0].len()
    }

    fn require_positive_margins(&self) -> Result<()> {
        if self.row_totals.iter().chain(&self.col_totals).any(|&m| m == R::zero()) {
            return Err(Error::Degenerate(
                "contingency table has a zero margin".into(),
            ));
        }
        Ok(())
    }
}

/// Pearson chi-square statistic and degrees of freedom.
pub fn chi_square<R: Real>(t: &ContingencyTable<R>) -> Result<(R, usize)> {
    t.require_positive_margins()?;
    let mut stat = R::zero();
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let e = t.row_totals[i] * t.col_totals[j] / t.grand_total;
            let d = t.counts[i][j] - e;
            stat += d * d / e;
        }
    }
    Ok((stat, (t.rows() - 1) * (t.cols() - 1)))
}

/// Cellwise deviations from the three independence criteria:
/// (a) joint minus product of marginals,
/// (b) row-given-column conditional minus row marginal,
/// (c) column-given-row conditional minus column marginal.
pub struct IndependenceDeviations<R> {
    pub joint_vs_product: Vec<Vec<R>>,
    pub row_given_col: Vec<Vec<R>>,
    pub col_given_row: Vec<Vec<R>>,
}

pub fn independence_criteria<R: Real>(
    t: &ContingencyTable<R>,
) -> Result<IndependenceDeviations<R>> {
    t.require_positive_margins()?;
    let gt = t.grand_total;
    let (r, c) = (t.rows(), t.cols());
    let mut a = vec![vec![R::zero(); c]; r];
    let mut b = vec![vec![R::zero(); c]; r];
    let mut cc = vec![vec![R::zero(); c]; r];
    for i in 0..r {
        let p_ri = t.row_totals[i] / gt;
        for j in 0..c {
            let p_cj = t.col_totals[j] / gt;
            let joint = t.counts[i][j] / gt;
            a[i][j] = joint - p_ri * p_cj;
            b[i][j] = joint / p_cj - p_ri;
            cc[i][j] = joint / p_ri - p_cj;
        }
    }
    Ok(IndependenceDeviations {
        joint_vs_product: a,
        row_given_col: b,
        col_given_row: cc,
    })
}

/// Binned probability distribution over shared edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDistribution<R> {
    pub edges: Vec<R>,
    pub probs: Vec<R>,
}

impl<R: Real> BinnedDistribution<R> {
    pub fn new(edges: Vec<R>, probs: Vec<R>) -> Result<Self> {
        if probs.len() + 1 != edges.len() {
            return Err(Error::Shape(
                "binned distribution needs len(probs) = len(edges) - 1".into(),
            ));
        }
        if edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("bin edges must be strictly increasing".into()));
        }
        if probs.iter().any(|&p| p < R::zero()) {
            return Err(Error::Domain("bin probabilities must be nonnegative".into()));
        }
        let total: R = probs.iter().copied().sum();
        if (total - R::one()).abs() > real(1e-12) {
            return Err(Error::Domain(format!(
                "bin probabilities must sum to 1, got {total}"
            )));
        }
        Ok(Self { edges, probs })
    }
}

/// Kullback-Leibler divergence between two distributions on identical
/// edges; natural log; asymmetric by construction.
pub fn kl_divergence<R: Real>(p: &BinnedDistribution<R>, q: &BinnedDistribution<R>) -> Result<R> {
    if p.edges != q.edges {
        return Err(Error::Shape("KL divergence requires identical bin edges".into()));
    }
    let mut kl = R::zero();
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi > R::zero() {
            if qi <= R::zero() {
                return Err(Error::Domain(
                    "KL divergence undefined: q has zero mass where p is positive".into(),
                ));
            }
            kl += pi * (pi / qi).ln();
        }
    }
    Ok(kl)
}

/// Default equal-width bin count: ceil(sqrt(n)).
pub fn default_bin_count(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

fn bin_index<R: Real>(v: R, lo: R, hi: R, bins: usize) -> usize {
    if v >= hi {
        return bins - 1;
    }
    let t = ((v - lo) / (hi - lo)).to_f64().unwrap();
    ((t * bins as f64) as usize).min(bins - 1)
}

/// Proportional reduction in the entropy of y from knowing x, estimated
/// from a binned joint distribution with equal-width bins per variable.
pub fn entropy_dependence<R: Real>(x: &[R], y: &[R], bins: usize) -> Result<R> {
    if x.len() != y.len() {
        return Err(Error::Shape("series lengths differ".into()));
    }
    if x.len() < 20 {
        return Err(Error::InsufficientData(
            "entropy dependence needs at least 20 observations".into(),
        ));
    }
    if bins < 2 {
        return Err(Error::Domain("need at least 2 bins".into()));
    }
    let (x_lo, x_hi) = min_max(x);
    let (y_lo, y_hi) = min_max(y);
    if y_lo == y_hi {
        return Err(Error::Degenerate(
            "entropy dependence undefined: response has zero entropy".into(),
        ));
    }
    if x_lo == x_hi {
        return Err(Error::Degenerate("conditioning series is constant".into()));
    }

    let n = count::<R>(x.len());
    let mut joint = vec![vec![R::zero(); bins]; bins];
    for (&xi, &yi) in x.iter().zip(y) {
        joint[bin_index(xi, x_lo, x_hi, bins)][bin_index(yi, y_lo, y_hi, bins)] += R::one() / n;
    }

    let plogp = |p: R| if p > R::zero() { p * p.ln() } else { R::zero() };

    // marginal entropy of y
    let mut h_y = R::zero();
    for j in 0..bins {
        let py: R = (0..bins).map(|i| joint[i][j]).sum();
        h_y -= plogp(py);
    }
    if h_y <= R::zero() {
        return Err(Error::Degenerate(
            "entropy dependence undefined: response has zero entropy".into(),
        ));
    }
    // conditional entropy of y given x, averaged over x
    let mut h_y_given_x = R::zero();
    for row in &joint {
        let px: R = row.iter().copied().sum();
        if px > R::zero() {
            for &pxy in row {
                h_y_given_x -= plogp(pxy / px) * px;
            }
        }
    }
    Ok((h_y - h_y_given_x) / h_y)
}

fn min_max<R: Real>(xs: &[R]) -> (R, R) {
    let mut lo = xs[0];
    let mut hi = xs[0];
    for &v in xs {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Fisher-information ratio for the Gaussian-mean missing-completely-at-
/// random case: information is proportional to the observation count at
/// fixed variance, so the ratio is the count ratio.
pub fn fisher_information_ratio<R: Real>(n_proxy: usize, n_full: usize) -> Result<R> {
    if n_proxy == 0 || n_proxy > n_full {
        return Err(Error::Domain(format!(
            "information ratio needs 0 < n_proxy <= n_full, got {n_proxy}/{n_full}"
        )));
    }
    Ok(count::<R>(n_proxy) / count::<R>(n_full))
}

/// Hellinger correlation from the Bhattacharyya affinity:
/// eta = (2/B^2) * sqrt(B^4 + sqrt(4 - 3 B^4) - 2).
///
/// The transform is real only for B in (0, 1], where it decreases
/// monotonically from 1 (as B -> 0) to 0 (at B = 1, independence).
pub fn hellinger_eta_from_b<R: Real>(b: R) -> Result<R> {
    if !(b > R::zero()) {
        return Err(Error::Domain(format!("affinity must be positive, got {b}")));
    }
    let b2 = b * b;
    let b4 = b2 * b2;
    let inner = real::<R>(4.0) - real::<R>(3.0) * b4;
    if inner < R::zero() {
        return Err(Error::Domain(format!(
            "affinity {b} outside the real-valued domain (inner radicand negative)"
        )));
    }
    let outer = b4 + inner.sqrt() - real::<R>(2.0);
    if outer < R::zero() {
        return Err(Error::Domain(format!(
            "affinity {b} outside the real-valued domain (outer radicand negative)"
        )));
    }
    Ok(real::<R>(2.0) / b2 * outer.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pearson_basics() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-14);
        let y: Vec<f64> = x.iter().map(|&v| -2.0 * v + 3.0).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-14);
        assert!(pearson(&x, &vec![1.0; 10]).is_err());
    }

    #[test]
    fn fisher_z_known_values() {
        let (z, p) = fisher_z(0.0f64, 20, VarianceMode::OverN).unwrap();
        assert_eq!(z, 0.0);
        assert!((p - 1.0).abs() < 1e-7);
        let (z, _) = fisher_z(0.5f64, 20, VarianceMode::OverN).unwrap();
        assert!((z - 3.0f64.ln() / 2.0).abs() < 1e-12);
        assert!(fisher_z(1.0f64, 20, VarianceMode::OverN).is_err());
    }

    #[test]
    fn fisher_z_is_odd_and_monotone() {
        for &r in &[0.1f64, 0.3, 0.6, 0.9] {
            let (zp, _) = fisher_z(r, 30, VarianceMode::OverN).unwrap();
            let (zm, _) = fisher_z(-r, 30, VarianceMode::OverN).unwrap();
            assert!((zp + zm).abs() < 1e-14);
        }
        // p-values shrink as |r| grows, in both variance modes
        for mode in [VarianceMode::OverN, VarianceMode::OverNMinus3] {
            let mut prev = 1.0;
            for &r in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let (_, p) = fisher_z(r, 30, mode).unwrap();
                assert!(p < prev);
                prev = p;
            }
        }
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((standard_normal_cdf(0.0f64) - 0.5).abs() < 1e-7);
        assert!((standard_normal_cdf(1.96f64) - 0.975).abs() < 1e-3);
        assert!((standard_normal_cdf(-1.96f64) - 0.025).abs() < 1e-3);
    }

    fn table(cells: &[&[f64]]) -> ContingencyTable<f64> {
        ContingencyTable::new(cells.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn chi_square_oracle_cases() {
        // uniform table: observed equals expected
        let (stat, df) = chi_square(&table(&[&[5.0, 5.0], &[5.0, 5.0]])).unwrap();
        assert_eq!(stat, 0.0);
        assert_eq!(df, 1);
        // diagonal table: E = 5 everywhere, stat = 4 * 25/5 = 20
        let (stat, df) = chi_square(&table(&[&[10.0, 0.0], &[0.0, 10.0]])).unwrap();
        assert!((stat - 20.0).abs() < 1e-12);
        assert_eq!(df, 1);
        // 3x4 table df
        let t = table(&[&[1.0; 4], &[2.0; 4], &[3.0; 4]]);
        assert_eq!(chi_square(&t).unwrap().1, 6);
        // zero margin rejected
        let bad = ContingencyTable::new(vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(chi_square(&bad).is_err());
    }

    #[test]
    fn independence_deviations() {
        // exact product table: all deviations vanish
        let t = table(&[&[2.0, 4.0], &[3.0, 6.0]]);
        let d = independence_criteria(&t).unwrap();
        for m in [&d.joint_vs_product, &d.row_given_col, &d.col_given_row] {
            for row in m.iter() {
                for &v in row {
                    assert!(v.abs() < 1e-12);
                }
            }
        }
        // diagonal table: criterion (a) deviations are +/- 0.25
        let d = independence_criteria(&table(&[&[10.0, 0.0], &[0.0, 10.0]])).unwrap();
        assert!((d.joint_vs_product[0][0] - 0.25).abs() < 1e-12);
        assert!((d.joint_vs_product[0][1] + 0.25).abs() < 1e-12);
    }

    #[test]
    fn criteria_b_and_c_can_disagree() {
        // brute-force search over small 2x3 tables for a witness where the
        // largest (b) deviation differs from the largest (c) deviation
        let mut found = false;
        'outer: for a in 0..=5u32 {
            for b in 0..=5u32 {
                for c in 0..=5u32 {
                    for d in 0..=5u32 {
                        for e in 0..=5u32 {
                            for f in 1..=5u32 {
                                let t = ContingencyTable::new(vec![
                                    vec![a as f64 + 1.0, b as f64, c as f64 + 1.0],
                                    vec![d as f64, e as f64 + 1.0, f as f64],
                                ])
                                .unwrap();
                                if t.require_positive_margins().is_err() {
                                    continue;
                                }
                                let dev = independence_criteria(&t).unwrap();
                                let max_abs = |m: &Vec<Vec<f64>>| {
                                    m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()))
                                };
                                if (max_abs(&dev.row_given_col) - max_abs(&dev.col_given_row))
                                    .abs()
                                    > 0.05
                                {
                                    found = true;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(found, "no asymmetry witness among small tables");
    }

    #[test]
    fn kl_divergence_hand_cases() {
        let edges = vec![0.0, 0.5, 1.0];
        let p = BinnedDistribution::new(edges.clone(), vec![0.5, 0.5]).unwrap();
        let q = BinnedDistribution::new(edges.clone(), vec![0.9, 0.1]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let fwd: f64 = kl_divergence(&p, &q).unwrap();
        let rev = kl_divergence(&q, &p).unwrap();
        assert!((fwd - 0.510826).abs() < 1e-4);
        assert!((rev - 0.368064).abs() < 1e-4);
        // support violation
        let z = BinnedDistribution::new(edges, vec![1.0, 0.0]).unwrap();
        assert!(kl_divergence(&p, &z).is_err());
    }

    #[test]
    fn entropy_dependence_functional_and_independent() {
        let x: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let d = entropy_dependence(&x, &x, 10).unwrap();
        assert!(d >= 0.95, "functional dependence gave {d}");

        let mut ds = Vec::new();
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..5000).map(|_| rng.gen()).collect();
            let y: Vec<f64> = (0..5000).map(|_| rng.gen()).collect();
            ds.push(entropy_dependence(&x, &y, 8).unwrap());
        }
        ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ds[10] < 0.05, "median independent D = {}", ds[10]);
    }

    #[test]
    fn entropy_dependence_is_asymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..400).map(|_| rng.gen_range(0.0..1.0f64)).collect();
        let y: Vec<f64> = x.iter().map(|&v| v.powi(4) + 0.02 * rng.gen::<f64>()).collect();
        let fwd = entropy_dependence(&x, &y, 8).unwrap();
        let rev = entropy_dependence(&y, &x, 8).unwrap();
        assert!((fwd - rev).abs() > 1e-3, "fwd {fwd} rev {rev}");
    }

    #[test]
    fn information_ratio_cases() {
        assert_eq!(fisher_information_ratio::<f64>(10, 10).unwrap(), 1.0);
        assert_eq!(fisher_information_ratio::<f64>(75, 100).unwrap(), 0.75);
        assert!(fisher_information_ratio::<f64>(0, 10).is_err());
        assert!(fisher_information_ratio::<f64>(11, 10).is_err());
    }

    #[test]
    fn hellinger_eta_transform() {
        assert!(hellinger_eta_from_b(1.0f64).unwrap().abs() < 1e-12);
        assert!(hellinger_eta_from_b(0.0f64).is_err());
        assert!(hellinger_eta_from_b(1.4f64).is_err());
        // smoothness away from the edges
        let e1 = hellinger_eta_from_b(0.7f64).unwrap();
        let e2 = hellinger_eta_from_b(0.7f64 + 1e-6).unwrap();
        assert!((e1 - e2).abs() < 1e-4);
    }

    #[test]
    fn hellinger_eta_inverts_reported_value() {
        // bisection on the monotone-decreasing branch B in (0, 1)
        let target = 0.744f64;
        let (mut lo, mut hi) = (1e-6, 1.0 - 1e-12);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hellinger_eta_from_b(mid).unwrap() > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let b = 0.5 * (lo + hi);
        assert!((hellinger_eta_from_b(b).unwrap() - target).abs() < 1e-9);
        assert!(b > 0.0 && b < 1.0);
    }
}
