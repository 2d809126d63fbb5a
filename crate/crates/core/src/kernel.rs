//! Nadaraya-Watson kernel regression with a Gaussian kernel and
//! leave-one-out least-squares cross-validated bandwidth.

use crate::error::{Error, Result};
use crate::num::{count, mean, real, sample_variance, Real};

/// Number of candidate bandwidths on the cross-validation grid.
const LSCV_GRID: usize = 50;

/// Result of a kernel regression fit.
#[derive(Debug, Clone)]
pub struct KernelFit<R> {
    pub bandwidth: R,
    pub fitted: Vec<R>,
    pub r_squared: R,
}

fn check_pair<R: Real>(x: &[R], y: &[R], min_n: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "regressor has {} observations, response has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < min_n {
        return Err(Error::InsufficientData(format!(
            "kernel regression needs at least {min_n} observations, got {}",
            x.len()
        )));
    }
    let first = x[0];
    if x.iter().all(|&v| v == first) {
        return Err(Error::Degenerate("regressor is constant".into()));
    }
    Ok(())
}

/// Fits y on x by locally weighted averaging with a Gaussian kernel.
///
/// The reported R-squared is the squared Pearson correlation between the
/// response and the fitted values, defined as 0 when either is constant.
pub fn nw_fit<R: Real>(x: &[R], y: &[R], bandwidth: R) -> Result<KernelFit<R>> {
    check_pair(x, y, 5)?;
    if !(bandwidth > R::zero()) {
        return Err(Error::Domain(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let half = real::<R>(0.5);
    let n = x.len();
    let mut fitted = Vec::with_capacity(n);
    for i in 0..n {
        let mut num = R::zero();
        let mut den = R::zero();
        for j in 0..n {
            let u = (x[i] - x[j]) / bandwidth;
            let w = (-half * u * u).exp();
            num += w * y[j];
            den += w;
        }
        fitted.push(num / den);
    }
    let r_squared = squared_correlation(y, &fitted);
    Ok(KernelFit {
        bandwidth,
        fitted,
        r_squared,
    })
}

/// Squared Pearson correlation, 0 when either argument is (numerically)
/// constant. The constancy check is relative to the magnitude of the data so
/// that round-off noise in an otherwise flat vector does not masquerade as
/// perfect correlation.
fn squared_correlation<R: Real>(a: &[R], b: &[R]) -> R {
    let ma = mean(a);
    let mb = mean(b);
    let mut saa = R::zero();
    let mut sbb = R::zero();
    let mut sab = R::zero();
    let mut amax = R::zero();
    let mut bmax = R::zero();
    for (&ai, &bi) in a.iter().zip(b) {
        let da = ai - ma;
        let db = bi - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
        amax = amax.max(ai.abs());
        bmax = bmax.max(bi.abs());
    }
    let n = count::<R>(a.len());
    let tol = R::epsilon() * real::<R>(1e4);
    if saa <= n * (tol * amax).powi(2) || sbb <= n * (tol * bmax).powi(2) {
        return R::zero();
    }
    let r2 = sab * sab / (saa * sbb);
    r2.min(R::one())
}

/// Leave-one-out least-squares cross-validation over a 50-point log grid
/// of bandwidths spanning [0.05, 5] times the reference scale
/// sigma_x * n^(-1/5). Ties break toward the smaller bandwidth.
pub fn lscv_bandwidth<R: Real>(x: &[R], y: &[R]) -> Result<R> {
    check_pair(x, y, 10)?;
    let n = x.len();
    let sigma = sample_variance(x).sqrt();
    let scale = sigma * count::<R>(n).powf(real(-0.2));
    let lo = real::<R>(0.05) * scale;
    let hi = real::<R>(5.0) * scale;
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let half = real::<R>(0.5);

    let mut best_h = lo;
    let mut best_cv = R::infinity();
    for k in 0..LSCV_GRID {
        let t = count::<R>(k) / count::<R>(LSCV_GRID - 1);
        let h = (log_lo + t * (log_hi - log_lo)).exp();
        let mut cv = R::zero();
        let mut valid = true;
        for i in 0..n {
            let mut num = R::zero();
            let mut den = R::zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let u = (x[i] - x[j]) / h;
                let w = (-half * u * u).exp();
                num += w * y[j];
                den += w;
            }
            if !(den > R::zero()) {
                // all leave-one-out weights underflowed at this bandwidth
                valid = false;
                break;
            }
            let e = y[i] - num / den;
            cv += e * e;
        }
        if valid && cv < best_cv {
            best_cv = cv;
            best_h = h;
        }
    }
    if best_cv.is_infinite() {
        return Err(Error::Degenerate(
            "no candidate bandwidth produced a finite cross-validation score".into(),
        ));
    }
    Ok(best_h)
}
