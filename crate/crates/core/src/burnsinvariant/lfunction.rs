//! The ratio `L*(1, chi) / L*(0, chi) = 2 f^{-1/2}` for even quadratic
//! characters, checked numerically.
//!
//! For an even primitive character of conductor `f`, `L(0, chi) = 0` and
//!
//! ```text
//! L'(0, chi) = sum_{a=1}^{f-1} chi(a) lnGamma(a/f)
//! L(1, chi)  = -f^{-1/2} sum_{a=1}^{f-1} chi(a) ln(2 sin(pi a / f))
//! ```
//!
//! Both closed forms are cross-checked against direct series: blocked
//! partial sums of `sum chi(n)/n` and the Weierstrass product for `lnGamma`.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::biquadratic::{artin_conductor, is_squarefree, kronecker, FieldData};
use crate::error::{Error, Result};
use crate::grouprings::{CharLabel, GaloisChar};
use crate::rational::{int, Rational};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The square of the ratio, `4 / f(chi)`.
pub fn l_ratio_squared_exact(chi: &GaloisChar, f: &FieldData) -> Rational {
    int(4) / int(artin_conductor(chi, f) as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticCheck {
    pub chi: Option<CharLabel>,
    pub discriminant: i64,
    pub conductor: u64,
    pub lhs_numeric: f64,
    #[serde(with = "crate::rational::serde_str")]
    pub rhs_exact_squared: Rational,
    pub abs_error_squared: f64,
}

/// Positive fundamental discriminants `1 < D <= max`.
pub fn fundamental_discriminants(max: u64) -> Vec<i64> {
    (5..=max as i64)
        .filter(|&d| match d.rem_euclid(4) {
            1 => is_squarefree(d),
            0 => matches!((d / 4).rem_euclid(4), 2 | 3) && is_squarefree(d / 4),
            _ => false,
        })
        .collect()
}

fn character(disc: i64) -> impl Fn(u64) -> f64 {
    move |a| f64::from(kronecker(disc, a))
}

pub fn l_prime_zero_closed_form(disc: i64) -> f64 {
    let f = disc.unsigned_abs();
    let chi = character(disc);
    (1..f).map(|a| chi(a) * ln_gamma(a as f64 / f as f64)).sum()
}

pub fn l_one_closed_form(disc: i64) -> f64 {
    let f = disc.unsigned_abs();
    let chi = character(disc);
    let s: f64 = (1..f)
        .map(|a| chi(a) * (2.0 * (std::f64::consts::PI * a as f64 / f as f64).sin()).ln())
        .sum();
    -s / (f as f64).sqrt()
}

/// `sum_{k >= n} k^{-s}` by Euler-Maclaurin.
fn zeta_tail(s: f64, n: f64) -> f64 {
    n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
}

/// `sum_n chi(n)/n` over `blocks` full periods, plus the asymptotic tail
/// obtained by expanding `1/(kf + a)` in powers of `a/(kf)`.
pub fn l_one_direct_series(disc: i64, blocks: u64) -> f64 {
    let f = disc.unsigned_abs();
    let chi = character(disc);
    let mut total = 0.0;
    for k in 0..blocks {
        let base = (k * f) as f64;
        total += (1..=f).map(|a| chi(a) / (base + a as f64)).sum::<f64>();
    }
    let ff = f as f64;
    let moment = |j: i32| (1..=f).map(|a| chi(a) * (a as f64).powi(j)).sum::<f64>();
    let tail: f64 = (0..6)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * moment(j) / ff.powi(j + 1) * zeta_tail(f64::from(j + 1), blocks as f64)
        })
        .skip(2)
        .sum();
    total + tail
}

/// `lnGamma(x)` from `-gamma x - ln x + sum_k (x/k - ln(1 + x/k))` with a
/// tail correction, for `0 < x <= 1`.
pub fn ln_gamma_series(x: f64, terms: u64) -> f64 {
    let mut s = -EULER_GAMMA * x - x.ln();
    for k in 1..=terms {
        let t = x / k as f64;
        s += t - t.ln_1p();
    }
    let n = (terms + 1) as f64;
    s + (2..8)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * x.powi(j) / f64::from(j) * zeta_tail(f64::from(j), n)
        })
        .sum::<f64>()
}

pub fn l_ratio_check_discriminant(disc: i64, tol: f64) -> Result<AnalyticCheck> {
    if disc <= 1 || !fundamental_discriminants(disc as u64).contains(&disc) {
        return Err(Error::InvalidInput(format!(
            "{disc} is not a positive fundamental discriminant"
        )));
    }
    if disc > 200 {
        return Err(Error::InvalidInput(format!("conductor {disc} exceeds 200")));
    }
    let ratio = l_one_closed_form(disc) / l_prime_zero_closed_form(disc);
    let exact = int(4) / int(disc);
    let err = (ratio * ratio - 4.0 / disc as f64).abs();
    if err.is_nan() || err >= tol {
        return Err(Error::AnalyticCheck {
            conductor: disc as u64,
            error: err,
            tol,
        });
    }
    Ok(AnalyticCheck {
        chi: None,
        discriminant: disc,
        conductor: disc as u64,
        lhs_numeric: ratio,
        rhs_exact_squared: exact,
        abs_error_squared: err,
    })
}

pub fn l_ratio_numeric_check(chi: &GaloisChar, f: &FieldData, tol: f64) -> Result<AnalyticCheck> {
    let Some(disc) = f.disc_of(chi.label()) else {
        return Err(Error::InvalidInput(
            "the numeric check needs a nontrivial character".into(),
        ));
    };
    if disc < 0 {
        return Err(Error::InvalidInput(format!(
            "character of discriminant {disc} is odd"
        )));
    }
    let mut check = l_ratio_check_discriminant(disc, tol)?;
    check.chi = Some(chi.label());
    Ok(check)
}
