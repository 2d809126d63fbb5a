//! Generalized correlation coefficients r*(i|j): signed square roots of
//! kernel-regression R-squared values, the asymmetric p x p matrix they
//! form, and the signed scalar dependence measure derived from a pair.

use crate::error::{Error, Result};
use crate::kernel::{lscv_bandwidth, nw_fit};
use crate::num::{sample_covariance, Real};

/// The two directed generalized correlations of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenCorrPair<R> {
    /// r*(y|x): y regressed on x.
    pub r_star_y_given_x: R,
    /// r*(x|y): x regressed on y.
    pub r_star_x_given_y: R,
    /// Sign of the sample covariance: -1, 0, or +1.
    pub cov_sign: i8,
}

/// Asymmetric matrix of generalized correlations.
///
/// `values[i][j]` is r*(row_i | col_j): the column variable is the
/// conditioning variable (the right-hand regressor), the row variable is
/// the response. Cells that could not be computed (constant columns) hold
/// NaN and the offending columns are listed in `degenerate`.
#[derive(Debug, Clone)]
pub struct AsymmetricMatrix<R> {
    pub labels: Vec<String>,
    pub values: Vec<Vec<R>>,
    pub degenerate: Vec<usize>,
}

impl<R: Real> AsymmetricMatrix<R> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        !self.values[i][j].is_nan()
    }
}

fn signed_root<R: Real>(r_squared: R, sign: R) -> R {
    let r = r_squared.sqrt().min(R::one());
    sign * r
}

fn cov_sign_value<R: Real>(cov: R) -> (i8, R) {
    if cov > R::zero() {
        (1, R::one())
    } else if cov < R::zero() {
        (-1, -R::one())
    } else {
        // zero covariance: sign defaults to +1, flagged via cov_sign = 0
        (0, R::one())
    }
}

/// Both directed generalized correlations of (x, y) at cross-validated
/// bandwidths. Both carry the sign of the sample covariance.
pub fn rstar<R: Real>(x: &[R], y: &[R]) -> Result<GenCorrPair<R>> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "generalized correlation needs at least 10 observations, got {}",
            x.len()
        )));
    }
    let (cov_sign, sign) = cov_sign_value(sample_covariance(x, y));
    let h_yx = lscv_bandwidth(x, y)?;
    let r2_yx = nw_fit(x, y, h_yx)?.r_squared;
    let h_xy = lscv_bandwidth(y, x)?;
    let r2_xy = nw_fit(y, x, h_xy)?.r_squared;
    Ok(GenCorrPair {
        r_star_y_given_x: signed_root(r2_yx, sign),
        r_star_x_given_y: signed_root(r2_xy, sign),
        cov_sign,
    })
}

/// Signed dependence measure: the larger of the two generalized
/// correlations in magnitude, carrying the sign of the covariance.
pub fn dep_measure<R: Real>(x: &[R], y: &[R]) -> Result<R> {
    let pair = rstar(x, y)?;
    let m = pair
        .r_star_y_given_x
        .abs()
        .max(pair.r_star_x_given_y.abs());
    let sign = if pair.cov_sign < 0 {
        -R::one()
    } else {
        R::one()
    };
    Ok(sign * m)
}

/// Fills the p x p asymmetric matrix of generalized correlations from the
/// columns of a data matrix. Diagonal entries are 1.
pub fn gmc_matrix<R: Real>(columns: &[Vec<R>], labels: &[String]) -> Result<AsymmetricMatrix<R>> {
    let p = columns.len();
    if p < 2 {
        return Err(Error::Shape(format!(
            "matrix of generalized correlations needs at least 2 columns, got {p}"
        )));
    }
    if labels.len() != p {
        return Err(Error::Shape("label count does not match column count".into()));
    }
    let n = columns[0].len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Shape("columns have unequal lengths".into()));
    }
    if n < 10 {
        return Err(Error::InsufficientData(format!(
            "matrix of generalized correlations needs at least 10 rows, got {n}"
        )));
    }

    let degenerate: Vec<usize> = (0..p)
        .filter(|&j| columns[j].iter().all(|&v| v == columns[j][0]))
        .collect();

    let nan = R::nan();
    let mut values = vec![vec![R::one(); p]; p];
    for i in 0..p {
        for j in 0..p {
            if i == j {
                continue;
            }
            if degenerate.contains(&i) || degenerate.contains(&j) {
                values[i][j] = nan;
                continue;
            }
            let (_, sign) = cov_sign_value(sample_covariance(&columns[j], &columns[i]));
            let h = lscv_bandwidth(&columns[j], &columns[i])?;
            let r2 = nw_fit(&columns[j], &columns[i], h)?.r_squared;
            values[i][j] = signed_root(r2, sign);
        }
    }
    Ok(AsymmetricMatrix {
        labels: labels.to_vec(),
        values,
        degenerate,
    })
}
