//! Closed-form hazards and Brier-score ratios for an idealized node
//! split, used to check numerically that balancing the minority class
//! lowers the prediction error.
//!
//! The model: a parent node with `m1` censored and `m2` mortality
//! samples splits almost perfectly, leaving `m2 - d0` samples in the
//! mortality leaf and `m1 + d0` in the censored leaf (`d0` is the
//! minimum number of unique deaths a leaf must hold). The mortality
//! leaf's Nelson-Aalen hazard at its last event time has a closed form
//! in the digamma function and the Euler-Mascheroni constant; the
//! censored leaf's hazard is a short finite sum. Combining them gives
//! the Brier score `rho(t)` of the split before and after the minority
//! class is grown to `m2'`.

use serde::Serialize;

use crate::error::TheoryError;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Digamma function (derivative of ln Gamma), for x > 0.
///
/// Recurrence shifts the argument above 10, then the Bernoulli-series
/// asymptotic expansion applies; absolute error stays below 1e-12 over
/// the ranges used here.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma defined here for positive arguments");
    let mut result = 0.0;
    let mut z = x;
    while z < 10.0 {
        result -= 1.0 / z;
        z += 1.0;
    }
    // psi(z) ~ ln z - 1/(2z) - sum B_2k / (2k z^2k)
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    result + z.ln() - 0.5 * inv - series
}

/// Trigamma function (second derivative of ln Gamma), for x > 0.
/// Strictly positive on its domain.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma defined here for positive arguments");
    let mut result = 0.0;
    let mut z = x;
    while z < 10.0 {
        result += 1.0 / (z * z);
        z += 1.0;
    }
    // psi1(z) ~ 1/z + 1/(2z^2) + sum B_2k / z^(2k+1)
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0
            + inv * (0.5
                + inv * (1.0 / 6.0
                    - inv2
                        * (1.0 / 30.0
                            - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))))));
    result + series
}

/// Which denominator the censored-node hazard uses.
///
/// The printed formula divides by `m1/2 + d0 - j`; the full-population
/// variant divides by `m1 + d0 - j`. Both are exposed because the
/// halved form's origin is unclear while the node itself holds `m1 +
/// d0` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HcDenominator {
    #[default]
    Half,
    Full,
}

/// Idealized split: class sizes before balancing plus the post-balance
/// minority size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealSplitModel {
    pub m1: u32,
    pub m2: u32,
    pub d0: u32,
    pub m2_prime: u32,
}

impl IdealSplitModel {
    pub fn new(m1: u32, m2: u32, d0: u32, m2_prime: u32) -> Result<Self, TheoryError> {
        if d0 == 0 {
            return Err(TheoryError::BadParam("d0 must be positive".into()));
        }
        if m1 < 2 {
            return Err(TheoryError::BadParam("m1 must be at least 2".into()));
        }
        if m2 < 2 * d0 {
            return Err(TheoryError::MortalityTooSmall { m2, d0 });
        }
        if m2_prime < m2 {
            return Err(TheoryError::ShrinkingMinority { m2_prime, m2 });
        }
        Ok(IdealSplitModel {
            m1,
            m2,
            d0,
            m2_prime,
        })
    }
}

/// Hazard comparison of the split before and after balancing.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BalanceComparison {
    /// Mortality-leaf hazard at its last event time, before balancing.
    pub h_m: f64,
    /// Mortality-leaf hazard after the minority grows to `m2'`.
    pub h_m_prime: f64,
    /// Censored-leaf hazard at its last event time.
    pub h_c: f64,
    /// Brier score of the split before balancing.
    pub rho: f64,
    /// Brier score after balancing.
    pub rho_prime: f64,
    /// `rho' / rho`, evaluated via the factored product form.
    pub ratio: f64,
}

/// Closed-form mortality-leaf hazard:
/// `(m2 - d0 - 1) * gamma + sum_{i=2}^{m2-d0} psi0(i)`.
///
/// Equals the direct Nelson-Aalen sum `sum_{k=1}^{y-1} k / (y - k)`
/// with `y = m2 - d0`.
pub fn mortality_node_hazard(m2: u32, d0: u32) -> Result<f64, TheoryError> {
    if d0 == 0 {
        return Err(TheoryError::BadParam("d0 must be positive".into()));
    }
    if m2 < 2 * d0 {
        return Err(TheoryError::MortalityTooSmall { m2, d0 });
    }
    let y = (m2 - d0) as f64;
    let mut sum = 0.0;
    let mut i = 2.0;
    while i <= y {
        sum += digamma(i);
        i += 1.0;
    }
    Ok((y - 1.0) * EULER_GAMMA + sum)
}

/// Censored-leaf hazard with the printed halved denominator:
/// `sum_{j=1}^{d0} j / (m1/2 + d0 - j)`.
pub fn censored_node_hazard(m1: u32, d0: u32) -> f64 {
    censored_node_hazard_with(m1, d0, HcDenominator::Half)
}

/// Censored-leaf hazard with an explicit denominator convention.
pub fn censored_node_hazard_with(m1: u32, d0: u32, denom: HcDenominator) -> f64 {
    let base = match denom {
        HcDenominator::Half => m1 as f64 / 2.0,
        HcDenominator::Full => m1 as f64,
    };
    let mut sum = 0.0;
    for j in 1..=d0 {
        sum += j as f64 / (base + (d0 - j) as f64);
    }
    sum
}

/// Brier score of the idealized split.
///
/// `rho(t) = [(m2-d0) e^{-2 H_M} + d0 e^{-2 H_C} + m1 (1 - e^{-H_C})^2]
/// / (m1 + m2)`; with `use_balanced` the mortality size and hazard are
/// replaced by their post-balance values.
pub fn unbalanced_brier(model: &IdealSplitModel, use_balanced: bool) -> Result<f64, TheoryError> {
    unbalanced_brier_with(model, use_balanced, HcDenominator::Half)
}

pub fn unbalanced_brier_with(
    model: &IdealSplitModel,
    use_balanced: bool,
    denom: HcDenominator,
) -> Result<f64, TheoryError> {
    let (m2, h_m) = if use_balanced {
        (model.m2_prime, mortality_node_hazard(model.m2_prime, model.d0)?)
    } else {
        (model.m2, mortality_node_hazard(model.m2, model.d0)?)
    };
    let h_c = censored_node_hazard_with(model.m1, model.d0, denom);
    let m1 = model.m1 as f64;
    let d0 = model.d0 as f64;
    let numer = (m2 as f64 - d0) * (-2.0 * h_m).exp()
        + d0 * (-2.0 * h_c).exp()
        + m1 * (1.0 - (-h_c).exp()).powi(2);
    Ok(numer / (m1 + m2 as f64))
}

/// Factored ratio `rho'/rho` plus its components.
pub fn brier_ratio(model: &IdealSplitModel) -> Result<BalanceComparison, TheoryError> {
    brier_ratio_with(model, HcDenominator::Half)
}

pub fn brier_ratio_with(
    model: &IdealSplitModel,
    denom: HcDenominator,
) -> Result<BalanceComparison, TheoryError> {
    let h_m = mortality_node_hazard(model.m2, model.d0)?;
    let h_m_prime = mortality_node_hazard(model.m2_prime, model.d0)?;
    let h_c = censored_node_hazard_with(model.m1, model.d0, denom);
    let m1 = model.m1 as f64;
    let m2 = model.m2 as f64;
    let m2p = model.m2_prime as f64;
    let d0 = model.d0 as f64;
    let censored_terms = d0 * (-2.0 * h_c).exp() + m1 * (1.0 - (-h_c).exp()).powi(2);
    let numer = (m2p - d0) * (-2.0 * h_m_prime).exp() + censored_terms;
    let denom_term = (m2 - d0) * (-2.0 * h_m).exp() + censored_terms;
    let ratio = (m1 + m2) / (m1 + m2p) * (numer / denom_term);
    Ok(BalanceComparison {
        h_m,
        h_m_prime,
        h_c,
        rho: unbalanced_brier_with(model, false, denom)?,
        rho_prime: unbalanced_brier_with(model, true, denom)?,
        ratio,
    })
}

/// Evaluate the ratio over an ascending grid of post-balance minority
/// sizes. Returns `(m2_prime, ratio)` pairs.
pub fn corollary_sweep(
    m1: u32,
    m2: u32,
    d0: u32,
    m2_prime_grid: &[u32],
) -> Result<Vec<(u32, f64)>, TheoryError> {
    let mut out = Vec::with_capacity(m2_prime_grid.len());
    let mut previous: Option<u32> = None;
    for &m2p in m2_prime_grid {
        if let Some(prev) = previous {
            if m2p < prev {
                return Err(TheoryError::BadParam(format!(
                    "grid must be ascending ({m2p} after {prev})"
                )));
            }
        }
        previous = Some(m2p);
        let model = IdealSplitModel::new(m1, m2, d0, m2p)?;
        out.push((m2p, brier_ratio(&model)?.ratio));
    }
    Ok(out)
}
