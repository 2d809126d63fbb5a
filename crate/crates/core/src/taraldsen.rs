//! Exact sampling distribution of a correlation coefficient.
//!
//! The density of the empirical correlation r from a bivariate normal
//! parent with population correlation rho and degrees of freedom
//! v = n - 1 is evaluated on a uniform grid over [-1, 1], normalized to
//! unit mass, and inverted numerically for quantiles, p-values, and
//! confidence intervals. The gamma-ratio prefactor is computed in log
//! space so arbitrarily large sample sizes stay finite; a compatibility
//! flag reproduces the historical winsorization of that prefactor at
//! v = 164 (the prefactor is constant in r, so normalization makes both
//! modes agree to rounding).

use crate::error::{Error, Result};
use crate::num::{count, real, Real};
use crate::special::{gauss_2f1, log_gamma, HypergeomParams};

/// Default grid step, giving 2001 points over [-1, 1].
pub const DEFAULT_GRID_STEP: f64 = 0.001;

/// Sample sizes indexing the published quantile table.
pub const TABLE1_SAMPLE_SIZES: [usize; 11] = [5, 10, 15, 20, 25, 30, 40, 70, 90, 100, 150];

/// Cumulative probabilities indexing the published quantile table.
pub const TABLE1_CUM_PROBS: [f64; 8] = [0.01, 0.025, 0.05, 0.1, 0.9, 0.95, 0.975, 0.99];

/// Options for [`tarald_density_with`].
#[derive(Debug, Clone, Copy)]
pub struct DensityOptions<R> {
    /// Uniform grid step; must divide 2 into an integer number of intervals.
    pub grid_step: R,
    /// Reproduce the historical winsorization of the gamma-ratio prefactor
    /// at v = 164 instead of the exact log-space evaluation.
    pub winsorize_gamma: bool,
}

impl<R: Real> Default for DensityOptions<R> {
    fn default() -> Self {
        Self {
            grid_step: real(DEFAULT_GRID_STEP),
            winsorize_gamma: false,
        }
    }
}

/// Discretized exact density of a correlation coefficient.
#[derive(Debug, Clone)]
pub struct GridDensity<R> {
    n: usize,
    rho: R,
    step: R,
    grid: Vec<R>,
    mass: Vec<R>,
    cum: Vec<R>,
}

impl<R: Real> GridDensity<R> {
    /// Sample size n; the degrees of freedom are v = n - 1.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    /// Degrees of freedom v = n - 1.
    pub fn dof(&self) -> usize {
        self.n - 1
    }

    pub fn rho(&self) -> R {
        self.rho
    }

    pub fn grid_step(&self) -> R {
        self.step
    }

    pub fn grid(&self) -> &[R] {
        &self.grid
    }

    /// Normalized probability mass per grid point (sums to 1).
    pub fn mass(&self) -> &[R] {
        &self.mass
    }

    /// Running sums of the mass.
    pub fn cum(&self) -> &[R] {
        &self.cum
    }

    /// Grid point carrying the largest mass.
    pub fn mode(&self) -> R {
        let mut best = 0;
        for i in 1..self.mass.len() {
            if self.mass[i] > self.mass[best] {
                best = i;
            }
        }
        self.grid[best]
    }
}

/// Which tail(s) of the distribution carry the excluded probability mass.
///
/// `LeftTail` puts all of 1 - level in the left tail, giving an interval
/// that extends to +1; `RightTail` mirrors it, extending to -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tails {
    Two,
    LeftTail,
    RightTail,
}

/// Confidence interval from the exact density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactInterval<R> {
    pub lower: R,
    pub upper: R,
    pub level: R,
    pub tails: Tails,
}

/// Evaluates the exact density of r on a uniform grid and normalizes it.
pub fn tarald_density<R: Real>(n: usize, rho: R, grid_step: R) -> Result<GridDensity<R>> {
    tarald_density_with(
        n,
        rho,
        DensityOptions {
            grid_step,
            winsorize_gamma: false,
        },
    )
}

pub fn tarald_density_with<R: Real>(
    n: usize,
    rho: R,
    opts: DensityOptions<R>,
) -> Result<GridDensity<R>> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "exact density requires n >= 3 (v = n - 1 > 1), got n = {n}"
        )));
    }
    if !(rho.abs() < R::one()) {
        return Err(Error::Domain(format!(
            "population correlation must satisfy |rho| < 1, got {rho}"
        )));
    }
    let h = opts.grid_step;
    if !(h > R::zero()) {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let intervals_f = (real::<R>(2.0) / h).to_f64().unwrap();
    let intervals = intervals_f.round() as usize;
    if intervals == 0 || (intervals_f - intervals as f64).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "grid step {h} does not divide [-1, 1] into an integer number of intervals"
        )));
    }

    let v = count::<R>(n - 1);
    let two = real::<R>(2.0);
    let half = real::<R>(0.5);

    // log of v*(v-1)*Gamma(v-1) / (sqrt(2*pi)*Gamma(v+1/2)); constant in r.
    let log_prefactor = if opts.winsorize_gamma && n - 1 > 164 {
        let w = real::<R>(164.0);
        w.ln() + (w - R::one()).ln() + log_gamma(w - R::one())?
            - real::<R>(0.918_938_533_204_672_7)
            - log_gamma(w - half)?
    } else {
        v.ln() + (v - R::one()).ln() + log_gamma(v - R::one())?
            - real::<R>(0.918_938_533_204_672_7)
            - log_gamma(v + half)?
    };

    let log_rho_term = (v - two) / two * (R::one() - rho * rho).ln();

    let mut grid = Vec::with_capacity(intervals + 1);
    let mut height = Vec::with_capacity(intervals + 1);
    for i in 0..=intervals {
        let r = if i == intervals {
            R::one()
        } else {
            -R::one() + count::<R>(i) * h
        };
        grid.push(r);
        let one_minus_r2 = R::one() - r * r;
        if one_minus_r2 <= R::zero() {
            // endpoints contribute zero height for v > 1
            height.push(R::zero());
            continue;
        }
        let log_h = log_prefactor
            + (v - R::one()) / two * one_minus_r2.ln()
            + log_rho_term
            + (R::one() - two * v) / two * (R::one() - r * rho).ln();
        let f = gauss_2f1(HypergeomParams::new(
            real::<R>(1.5),
            real::<R>(-0.5),
            v + half,
            (R::one() + r * rho) / two,
        ))?;
        height.push(log_h.exp() * f);
    }

    let total: R = height.iter().copied().sum();
    if !(total > R::zero()) {
        return Err(Error::Domain(
            "density heights sum to zero; grid too coarse".into(),
        ));
    }
    let mass: Vec<R> = height.into_iter().map(|x| x / total).collect();
    let mut cum = Vec::with_capacity(mass.len());
    let mut acc = R::zero();
    for &m in &mass {
        acc += m;
        cum.push(acc);
    }

    Ok(GridDensity {
        n,
        rho,
        step: h,
        grid,
        mass,
        cum,
    })
}

/// Quantile by grid inversion: the grid point one past the last index whose
/// cumulative mass is below `cum_prob`.
pub fn tarald_quantile<R: Real>(d: &GridDensity<R>, cum_prob: R) -> Result<R> {
    if !(cum_prob > R::zero() && cum_prob < R::one()) {
        return Err(Error::Domain(format!(
            "cumulative probability must lie in (0, 1), got {cum_prob}"
        )));
    }
    let loc = d
        .cum
        .iter()
        .position(|&c| c >= cum_prob)
        .unwrap_or(d.cum.len() - 1);
    Ok(d.grid[loc])
}

/// One-tail p-value for an observed correlation under H0: rho.
///
/// Left-tail mass for negative observations, right-tail mass otherwise
/// (an observation of exactly zero uses the right tail).
pub fn tarald_pvalue<R: Real>(n: usize, rho: R, obs_r: R) -> Result<R> {
    tarald_pvalue_with(n, rho, obs_r, DensityOptions::default())
}

pub fn tarald_pvalue_with<R: Real>(
    n: usize,
    rho: R,
    obs_r: R,
    opts: DensityOptions<R>,
) -> Result<R> {
    if obs_r.abs() > R::one() {
        return Err(Error::Domain(format!(
            "observed correlation must lie in [-1, 1], got {obs_r}"
        )));
    }
    let d = tarald_density_with(n, rho, opts)?;
    let loc = d
        .grid
        .iter()
        .position(|&r| r >= obs_r)
        .unwrap_or(d.grid.len() - 1);
    if obs_r < R::zero() {
        Ok(d.cum[loc])
    } else {
        Ok(R::one() - d.cum[loc])
    }
}

/// Confidence interval from quantiles of the exact density.
pub fn exact_interval<R: Real>(
    n: usize,
    rho: R,
    level: R,
    tails: Tails,
) -> Result<ExactInterval<R>> {
    if !(level > R::zero() && level < R::one()) {
        return Err(Error::Domain(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    let d = tarald_density(n, rho, real(DEFAULT_GRID_STEP))?;
    let alpha = R::one() - level;
    let (lower, upper) = match tails {
        Tails::Two => {
            let half = real::<R>(0.5);
            (
                tarald_quantile(&d, alpha * half)?,
                tarald_quantile(&d, R::one() - alpha * half)?,
            )
        }
        Tails::LeftTail => (tarald_quantile(&d, alpha)?, R::one()),
        Tails::RightTail => (-R::one(), tarald_quantile(&d, level)?),
    };
    Ok(ExactInterval {
        lower,
        upper,
        level,
        tails,
    })
}

/// Quantile matrix over sample sizes (rows) and cumulative probabilities
/// (columns), at rho = 0. Defaults reproduce the published 11 x 8 table.
pub fn quantile_table<R: Real>(sample_sizes: &[usize], cum_probs: &[R]) -> Result<Vec<Vec<R>>> {
    let mut out = Vec::with_capacity(sample_sizes.len());
    for &n in sample_sizes {
        let d = tarald_density(n, R::zero(), real(DEFAULT_GRID_STEP))?;
        let mut row = Vec::with_capacity(cum_probs.len());
        for &c in cum_probs {
            row.push(tarald_quantile(&d, c)?);
        }
        out.push(row);
    }
    Ok(out)
}
