//! Multiplier operators on normalized series.
//!
//! Each operator scales the coefficient of `z^k` by a weight that equals 1 at
//! `k = 1`, so normalization is preserved:
//!
//! | operator | weight at degree `k` |
//! |---|---|
//! | Salagean derivative `D^n` | `k^n` |
//! | integral operator `I^sigma` | `(2 / (k + 1))^sigma` |
//! | composite `L_n^sigma = D^n I^sigma` | `k^n (2 / (k + 1))^sigma` |
//! | Bernardi transform `F_c` | `(c + 1) / (c + k)` |
//!
//! `I^sigma` is defined through its weight for every real `sigma`, including
//! `sigma <= 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::series::{NormalizedSeries, TruncatedSeries};

/// `k^n`, exact while it fits in the 53-bit mantissa.
pub(crate) fn power_weight(k: usize, n: u32) -> f64 {
    match (k as u64).checked_pow(n) {
        Some(p) if p <= 1 << 53 => p as f64,
        _ => (k as f64).powi(n as i32),
    }
}

pub(crate) fn integral_weight(k: usize, sigma: f64) -> f64 {
    if sigma == 0.0 {
        1.0
    } else {
        (2.0 / (k as f64 + 1.0)).powf(sigma)
    }
}

pub(crate) fn composite_weight(k: usize, n: u32, sigma: f64) -> f64 {
    power_weight(k, n) * integral_weight(k, sigma)
}

pub(crate) fn bernardi_weight(k: usize, c: f64) -> f64 {
    (c + 1.0) / (c + k as f64)
}

fn check_bernardi_parameter(c: f64) -> Result<()> {
    if c.is_finite() && c > -1.0 {
        Ok(())
    } else {
        Err(param(format!("Bernardi parameter c = {c} must exceed -1")))
    }
}

/// `D^n f`: coefficient `k^n a_k`.
pub fn salagean(f: &NormalizedSeries, n: u32) -> NormalizedSeries {
    if n == 0 {
        return f.clone();
    }
    f.map_diagonal(|k| power_weight(k, n))
}

/// `I^sigma f`: coefficient `(2 / (k + 1))^sigma a_k`.
pub fn jks_integral(f: &NormalizedSeries, sigma: f64) -> NormalizedSeries {
    if sigma == 0.0 {
        return f.clone();
    }
    f.map_diagonal(|k| integral_weight(k, sigma))
}

/// `L_n^sigma f = D^n (I^sigma f) = I^sigma (D^n f)`.
pub fn composite_l(f: &NormalizedSeries, n: u32, sigma: f64) -> NormalizedSeries {
    if n == 0 && sigma == 0.0 {
        return f.clone();
    }
    f.map_diagonal(|k| composite_weight(k, n, sigma))
}

/// Bernardi transform `F_c f`: coefficient `a_k (c + 1) / (c + k)`, `c > -1`.
///
/// `c = 1` is the Libera transform and `c = 0` the Alexander transform.
pub fn bernardi(f: &NormalizedSeries, c: f64) -> Result<NormalizedSeries> {
    check_bernardi_parameter(c)?;
    Ok(f.map_diagonal(|k| bernardi_weight(k, c)))
}

/// Largest coefficient discrepancy, measured relative to the coefficient
/// magnitude once it exceeds 1.
///
/// The operator weights `k^n` reach `10^7` at the default order, so an
/// absolute threshold would only measure floating-point rounding of large
/// coefficients.
pub fn scaled_residual(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
    let order = a.order().max(b.order());
    (0..=order)
        .map(|k| {
            let (x, y) = (a.coeff(k), b.coeff(k));
            (x - y).norm() / 1f64.max(x.norm()).max(y.norm())
        })
        .fold(0.0, f64::max)
}

fn two() -> Complex64 {
    Complex64::new(2.0, 0.0)
}

/// Residual of `z [I^{sigma+1} f]' = 2 I^sigma f - I^{sigma+1} f`.
pub fn verify_identity_3(f: &NormalizedSeries, sigma: f64) -> f64 {
    let next = jks_integral(f, sigma + 1.0);
    let lhs = next.z_derivative();
    let rhs = jks_integral(f, sigma).scale(two()).sub(&next);
    scaled_residual(&lhs, &rhs)
}

/// Residual of `L_{n+1}^{sigma+1} f = 2 L_n^sigma f - L_n^{sigma+1} f`.
pub fn verify_identity_4(f: &NormalizedSeries, n: u32, sigma: f64) -> f64 {
    let lhs = composite_l(f, n + 1, sigma + 1.0);
    let rhs = composite_l(f, n, sigma)
        .scale(two())
        .sub(&composite_l(f, n, sigma + 1.0));
    scaled_residual(&lhs, &rhs)
}

/// Residual of `c F_c + z F_c' = (c + 1) f`.
pub fn verify_identity_6(f: &NormalizedSeries, c: f64) -> Result<f64> {
    let transformed = bernardi(f, c)?;
    let lhs = transformed
        .scale(Complex64::new(c, 0.0))
        .add(&transformed.z_derivative());
    let rhs = f.scale(Complex64::new(c + 1.0, 0.0));
    Ok(scaled_residual(&lhs, &rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Salagean,
    Jks,
    Composite,
    Bernardi,
}

/// One operator with its parameters. Fields unused by `kind` are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub n: u32,
    pub sigma: f64,
    pub c: f64,
}

impl OperatorSpec {
    pub fn salagean(n: u32) -> Self {
        Self {
            kind: OperatorKind::Salagean,
            n,
            sigma: 0.0,
            c: 0.0,
        }
    }

    pub fn jks(sigma: f64) -> Self {
        Self {
            kind: OperatorKind::Jks,
            n: 0,
            sigma,
            c: 0.0,
        }
    }

    pub fn composite(n: u32, sigma: f64) -> Self {
        Self {
            kind: OperatorKind::Composite,
            n,
            sigma,
            c: 0.0,
        }
    }

    pub fn bernardi(c: f64) -> Result<Self> {
        check_bernardi_parameter(c)?;
        Ok(Self {
            kind: OperatorKind::Bernardi,
            n: 0,
            sigma: 0.0,
            c,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            OperatorKind::Bernardi => check_bernardi_parameter(self.c),
            OperatorKind::Jks | OperatorKind::Composite if !self.sigma.is_finite() => {
                Err(param("sigma must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Weight applied to the coefficient of `z^k`.
    pub fn weight(&self, k: usize) -> f64 {
        match self.kind {
            OperatorKind::Salagean => power_weight(k, self.n),
            OperatorKind::Jks => integral_weight(k, self.sigma),
            OperatorKind::Composite => composite_weight(k, self.n, self.sigma),
            OperatorKind::Bernardi => bernardi_weight(k, self.c),
        }
    }

    pub fn apply(&self, f: &NormalizedSeries) -> Result<NormalizedSeries> {
        self.validate()?;
        Ok(match self.kind {
            OperatorKind::Salagean => salagean(f, self.n),
            OperatorKind::Jks => jks_integral(f, self.sigma),
            OperatorKind::Composite => composite_l(f, self.n, self.sigma),
            OperatorKind::Bernardi => bernardi(f, self.c)?,
        })
    }

    /// Applies the reciprocal weights, undoing [`OperatorSpec::apply`].
    pub fn invert(&self, f: &NormalizedSeries) -> Result<NormalizedSeries> {
        self.validate()?;
        Ok(f.unmap_diagonal(|k| self.weight(k)))
    }
}
