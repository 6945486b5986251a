//! Closed-form means, variances and limits for uniform random caterpillars,
//! evaluated exactly as big rationals.
//!
//! Published forms that the enumeration oracle refutes are still exposed,
//! tagged [`Validity::ErratumPaperForm`], next to the corrected form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a closed form is known to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    AllM,
    MGe3,
    /// Published expression that disagrees with exhaustive enumeration.
    ErratumPaperForm,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::AllM => "all_m",
            Validity::MGe3 => "m_ge_3",
            Validity::ErratumPaperForm => "erratum_paper_form",
        })
    }
}

/// An exact closed-form value with its validity tag and a short label of
/// the formula it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryValue {
    pub value: BigRational,
    pub validity: Validity,
    pub source: &'static str,
}

impl TheoryValue {
    fn new(value: BigRational, validity: Validity, source: &'static str) -> Self {
        Self {
            value,
            validity,
            source,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `value / n^power`, e.g. `scaled(n, 2)` for per-n² limits.
    pub fn scaled(&self, n: u64, power: u32) -> TheoryValue {
        let divisor = BigInt::from(n).pow(power);
        Self {
            value: &self.value / BigRational::from_integer(divisor),
            ..self.clone()
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }
}

fn int(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ratio(numer: BigInt, denom: BigInt) -> BigRational {
    BigRational::new(numer, denom)
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn check_spine(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::SpineTooShort { m: m as usize });
    }
    Ok(())
}

/// Mean of the distance-based Gini index.
pub fn gini_mean(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (m, n) = (big(m), big(n));
    let numer = (&m * &m * 2 - 2) * &n * &n
        + (m.pow(3) + &m * &m * 4 - &m + 2) * &n
        + m.pow(4) * 2
        - &m * &m * 2;
    let denom = (&m * &m * 6 + &m * 6) * &n * &n + m.pow(3) * 12 * &n + m.pow(4) * 6 - m.pow(3) * 6;
    Ok(TheoryValue::new(ratio(numer, denom), Validity::AllM, "distance-based gini mean"))
}

/// Limit of [`gini_mean`] as `n → ∞` for fixed `m`: the ratio of the
/// `n²` coefficients, `(2m² - 2)/(6m² + 6m)`.
pub fn gini_mean_limit(m: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let m = big(m);
    let value = ratio(&m * &m * 2 - 2, &m * &m * 6 + &m * 6);
    Ok(TheoryValue::new(value, Validity::AllM, "distance-based gini mean, n limit"))
}

/// Class-level Hoover mean `(2n(n+m-2)/(n+m)) / (2(n+m)(2 - 2/(n+m)))`.
///
/// Assumes every spine degree exceeds the average degree, which holds with
/// high probability once `n/m` is large; at small `n` it differs from the
/// per-instance index.
pub fn hoover_mean(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let order = int((n + m) as i128);
    let numerator = int(2 * n as i128 * (n + m) as i128 - 4 * n as i128) / &order;
    let avg_degree = int(2) - int(2) / &order;
    let value = numerator / (int(2) * order * avg_degree);
    Ok(TheoryValue::new(value, Validity::AllM, "hoover mean (high-probability form)"))
}

/// `E[Z_n] = n²/m + (6m - 5)n/m + 4m - 6`.
pub fn zagreb_mean(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (mi, ni) = (m as i128, n as i128);
    let value = int(ni * ni + (6 * mi - 5) * ni) / int(mi) + int(4 * mi - 6);
    Ok(TheoryValue::new(value, Validity::AllM, "zagreb mean"))
}

/// `E[Z_n²]`, quartic in `n`.
pub fn zagreb_second_moment(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (m, n) = (big(m), big(n));
    let numer = n.pow(4)
        + (&m * 12 - 10) * n.pow(3)
        + (&m * &m * 44 - &m * 70 + 23) * n.pow(2)
        + (m.pow(3) * 48 - &m * &m * 112 + &m * 66 - 14) * &n;
    let constant: BigInt = &m * 4 - 6;
    let value = ratio(numer, &m * &m) + BigRational::from_integer(&constant * &constant);
    Ok(TheoryValue::new(value, Validity::AllM, "zagreb second moment"))
}

/// `Var[Z_n] = 2n((m - 1)n + 3m - 7)/m²`.
pub fn zagreb_variance(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (mi, ni) = (m as i128, n as i128);
    let value = int(2 * ni * ((mi - 1) * ni + 3 * mi - 7)) / int(mi * mi);
    Ok(TheoryValue::new(value, Validity::AllM, "zagreb variance"))
}

/// Asymptotic variance `2(m - 1)/m²` of `(Z_n - n²/m)/n`.
pub fn zagreb_clt_variance(m: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let mi = m as i128;
    let value = int(2 * (mi - 1)) / int(mi * mi);
    Ok(TheoryValue::new(value, Validity::AllM, "zagreb clt variance"))
}

/// Compensator `β_n = -n(n + 6m - 5)/m`, making `M_n = Z_n + β_n` a
/// martingale with `β_0 = 0`.
pub fn zagreb_compensator(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (mi, ni) = (m as i128, n as i128);
    let value = -int(ni * (ni + 6 * mi - 5)) / int(mi);
    Ok(TheoryValue::new(value, Validity::AllM, "zagreb martingale compensator"))
}

/// Centering and scale of the Zagreb CLT: `(Z_n - n²/m)/n → N(0, σ²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZagrebCltParams {
    pub centering: &'static str,
    pub variance: TheoryValue,
}

pub fn zagreb_clt_params(m: u64) -> Result<ZagrebCltParams> {
    Ok(ZagrebCltParams {
        centering: "(Z_n - n^2/m) / n",
        variance: zagreb_clt_variance(m)?,
    })
}

/// Published Randić (α = 1) mean
/// `((2m-1)n² + (7m² - 10m + 1)n + 4m²(m-2))/m²`, without the validity
/// check. At `m = 2` it is exactly one below the true mean.
pub fn randic_mean_formula(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (mi, ni) = (m as i128, n as i128);
    let value = int((2 * mi - 1) * ni * ni + (7 * mi * mi - 10 * mi + 1) * ni + 4 * mi * mi * (mi - 2))
        / int(mi * mi);
    let validity = if m >= 3 {
        Validity::MGe3
    } else {
        Validity::ErratumPaperForm
    };
    Ok(TheoryValue::new(value, validity, "randic mean (alpha = 1)"))
}

/// Randić (α = 1) mean, only for `m >= 3`. Its derivation splits spine
/// edges into end-adjacent and interior classes, which does not apply to a
/// two-node spine: at `(m, n) = (2, 1)` it gives 3 while every history has
/// `R = 4`.
pub fn randic_mean(m: u64, n: u64) -> Result<TheoryValue> {
    if m == 2 {
        return Err(Error::OutsideValidity {
            formula: "randic_mean",
            m: 2,
            reason: "known erratum, the closed form undercounts by exactly 1 (oracle at n = 1 gives 4, formula 3)",
        });
    }
    randic_mean_formula(m, n)
}

/// Almost-sure limit scale of `R_n/n²`: `(2m - 1)/m²`.
pub fn randic_limit(m: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let mi = m as i128;
    Ok(TheoryValue::new(
        int(2 * mi - 1) / int(mi * mi),
        Validity::AllM,
        "randic mean, n^2 limit",
    ))
}

/// Lower bound on `E[R_j | F_{j-1}]`: `R_{j-1} + (2j + 7m - 10)/m`.
pub fn randic_supermartingale_bound_exact(m: u64, j: u64, prev: &BigRational) -> BigRational {
    let (mi, ji) = (m as i128, j as i128);
    prev + int(2 * ji + 7 * mi - 10) / int(mi)
}

pub fn randic_supermartingale_bound(m: u64, j: u64, prev: f64) -> f64 {
    prev + (2.0 * j as f64 + 7.0 * m as f64 - 10.0) / m as f64
}

/// `E[W_n] = ((m² + 6m - 1)n² + (m-1)(2m² + 7m - 1)n + m²(m² - 1))/(6m)`.
pub fn wiener_mean(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (m, n) = (big(m), big(n));
    let numer = (&m * &m + &m * 6 - 1) * &n * &n
        + (&m - 1) * (&m * &m * 2 + &m * 7 - 1) * &n
        + &m * &m * (&m * &m - 1);
    Ok(TheoryValue::new(ratio(numer, m * 6), Validity::AllM, "wiener mean"))
}

/// `(m² + 6m - 1)/(6m)`, the `n²` scale limit of the Wiener mean.
pub fn wiener_limit(m: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let mi = m as i128;
    Ok(TheoryValue::new(
        int(mi * mi + 6 * mi - 1) / int(6 * mi),
        Validity::AllM,
        "wiener mean, n^2 limit",
    ))
}

/// Published hyper-Wiener mean
/// `((m³+10m²+35m-10)n² + (2m³+13m²+25m-10)(m-1)n + m²(m+2)(m+1)(m-1))/(12m)`.
///
/// Exceeds the true mean by exactly `n`; see [`hyper_wiener_mean_corrected`].
pub fn hyper_wiener_mean_paper(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (m, n) = (big(m), big(n));
    let numer = (m.pow(3) + &m * &m * 10 + &m * 35 - 10) * &n * &n
        + (m.pow(3) * 2 + &m * &m * 13 + &m * 25 - 10) * (&m - 1) * &n
        + &m * &m * (&m + 2) * (&m + 1) * (&m - 1);
    Ok(TheoryValue::new(
        ratio(numer, m * 12),
        Validity::ErratumPaperForm,
        "hyper-wiener mean (published form)",
    ))
}

/// Hyper-Wiener mean rebuilt from the per-pair weights:
///
/// - spine pairs: `m(m³ + 2m² - m - 2)/12`, deterministic;
/// - leaf pairs: `(m³ + 10m² + 35m - 10) n(n-1)/(12m)`;
/// - spine-leaf pairs: `n (2 + (m-1)(m² + 7m + 18)/6)`.
pub fn hyper_wiener_mean_corrected(m: u64, n: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let (mi, ni) = (m as i128, n as i128);
    let spine = int(mi * (mi.pow(3) + 2 * mi * mi - mi - 2)) / int(12);
    let leaves = int((mi.pow(3) + 10 * mi * mi + 35 * mi - 10) * ni * (ni - 1)) / int(12 * mi);
    let spine_leaf = int(ni) * (int(2) + int((mi - 1) * (mi * mi + 7 * mi + 18)) / int(6));
    Ok(TheoryValue::new(
        spine + leaves + spine_leaf,
        Validity::AllM,
        "hyper-wiener mean (corrected)",
    ))
}

/// `(m³ + 10m² + 35m - 10)/(12m)`, the `n²` scale limit of the hyper-Wiener mean.
pub fn hyper_wiener_limit(m: u64) -> Result<TheoryValue> {
    check_spine(m)?;
    let mi = m as i128;
    Ok(TheoryValue::new(
        int(mi.pow(3) + 10 * mi * mi + 35 * mi - 10) / int(12 * mi),
        Validity::AllM,
        "hyper-wiener mean, n^2 limit",
    ))
}

/// Named closed forms, as addressed by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    GiniMean,
    HooverMean,
    ZagrebMean,
    ZagrebSecondMoment,
    ZagrebVariance,
    ZagrebCltVariance,
    ZagrebCompensator,
    RandicMean,
    RandicLimit,
    WienerMean,
    WienerLimit,
    HyperWienerMeanPaper,
    HyperWienerMeanCorrected,
    HyperWienerLimit,
}

impl Formula {
    pub const ALL: [Formula; 14] = [
        Formula::GiniMean,
        Formula::HooverMean,
        Formula::ZagrebMean,
        Formula::ZagrebSecondMoment,
        Formula::ZagrebVariance,
        Formula::ZagrebCltVariance,
        Formula::ZagrebCompensator,
        Formula::RandicMean,
        Formula::RandicLimit,
        Formula::WienerMean,
        Formula::WienerLimit,
        Formula::HyperWienerMeanPaper,
        Formula::HyperWienerMeanCorrected,
        Formula::HyperWienerLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formula::GiniMean => "gini_mean",
            Formula::HooverMean => "hoover_mean",
            Formula::ZagrebMean => "zagreb_mean",
            Formula::ZagrebSecondMoment => "zagreb_second_moment",
            Formula::ZagrebVariance => "zagreb_variance",
            Formula::ZagrebCltVariance => "zagreb_clt_variance",
            Formula::ZagrebCompensator => "zagreb_compensator",
            Formula::RandicMean => "randic_mean",
            Formula::RandicLimit => "randic_limit",
            Formula::WienerMean => "wiener_mean",
            Formula::WienerLimit => "wiener_limit",
            Formula::HyperWienerMeanPaper => "hyper_wiener_mean_paper",
            Formula::HyperWienerMeanCorrected => "hyper_wiener_mean_corrected",
            Formula::HyperWienerLimit => "hyper_wiener_limit",
        }
    }

    pub fn from_name(name: &str) -> Option<Formula> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn evaluate(self, m: u64, n: u64) -> Result<TheoryValue> {
        match self {
            Formula::GiniMean => gini_mean(m, n),
            Formula::HooverMean => hoover_mean(m, n),
            Formula::ZagrebMean => zagreb_mean(m, n),
            Formula::ZagrebSecondMoment => zagreb_second_moment(m, n),
            Formula::ZagrebVariance => zagreb_variance(m, n),
            Formula::ZagrebCltVariance => zagreb_clt_variance(m),
            Formula::ZagrebCompensator => zagreb_compensator(m, n),
            Formula::RandicMean => randic_mean(m, n),
            Formula::RandicLimit => randic_limit(m),
            Formula::WienerMean => wiener_mean(m, n),
            Formula::WienerLimit => wiener_limit(m),
            Formula::HyperWienerMeanPaper => hyper_wiener_mean_paper(m, n),
            Formula::HyperWienerMeanCorrected => hyper_wiener_mean_corrected(m, n),
            Formula::HyperWienerLimit => hyper_wiener_limit(m),
        }
    }
}
