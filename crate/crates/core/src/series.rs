//! Truncated Taylor series about the origin.
//!
//! A [`TruncatedSeries`] stores the dense coefficients `c_0, ..., c_N` of a
//! function analytic at 0. The refinement [`NormalizedSeries`] adds the
//! normalization `c_0 = 0`, `c_1 = 1` of the class of functions
//! `f(z) = z + a_2 z^2 + ...`, which every operator in [`crate::operators`]
//! consumes and produces.
//!
//! Values are immutable once built; every operation returns a fresh series.

use std::fmt::Write as _;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation order used when nothing else is configured.
pub const DEFAULT_ORDER: usize = 64;

/// Complex Taylor coefficients `c_0..=c_N` of a function analytic at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients; the order is `len - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// The constant `value`, padded with zeros up to `order`.
    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// Internal constructor for coefficient vectors that are finite by
    /// construction. Non-finite results still get caught in debug builds.
    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub(crate) fn checked(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.len() >= 2
            && self.coeffs[0] == Complex64::new(0.0, 0.0)
            && self.coeffs[1] == Complex64::new(1.0, 0.0)
    }

    /// Coefficient-wise sum; the shorter operand is zero-padded.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_padded(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_padded(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_vec_unchecked(self.coeffs.iter().map(|c| c * factor).collect())
    }

    fn zip_padded(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().max(other.order());
        let coeffs = (0..=order)
            .map(|k| op(self.coeff(k), other.coeff(k)))
            .collect();
        Self::from_vec_unchecked(coeffs)
    }

    /// Cauchy product truncated at `min(order_f + order_g, cap)` with
    /// `cap = max(DEFAULT_ORDER, order_f, order_g)`.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = DEFAULT_ORDER.max(self.order()).max(other.order());
        self.mul_capped(other, cap)
    }

    /// Cauchy product truncated at `min(order_f + order_g, cap)`.
    pub fn mul_capped(&self, other: &Self, cap: usize) -> Self {
        let order = (self.order() + other.order()).min(cap);
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::from_vec_unchecked(out)
    }

    /// `f'`: order drops by one (a constant maps to the order-0 zero series).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        Self::from_vec_unchecked(coeffs)
    }

    /// `z f'`: coefficient `k c_k` at degree `k`, order preserved.
    pub fn z_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * k as f64)
            .collect();
        Self::from_vec_unchecked(coeffs)
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / (k + 1) as f64),
        );
        Self::from_vec_unchecked(coeffs)
    }

    /// `f(z) / z` for a series with `c_0 = 0`; the order drops by one.
    pub fn divide_by_z(&self) -> Result<Self> {
        if self.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(Error::NotNormalized(
                "constant term must vanish to divide by z",
            ));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(Self::from_vec_unchecked(self.coeffs[1..].to_vec()))
    }

    /// `z f(z)`; the order grows by one.
    pub fn multiply_by_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_vec_unchecked(coeffs)
    }

    /// `f(rho z)`: coefficient `c_k rho^k`.
    pub fn dilate_argument(&self, rho: f64) -> Self {
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * power;
                power *= rho;
                out
            })
            .collect();
        Self::from_vec_unchecked(coeffs)
    }

    /// Keeps the coefficients up to `order`, zero-padding if it is larger.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_vec_unchecked((0..=order).map(|k| self.coeff(k)).collect())
    }

    /// `exp(q)` from `h' = q' h`, seeded with `h_0 = exp(q_0)`.
    pub fn exp_series(&self) -> Result<Self> {
        let n = self.order();
        let q = &self.coeffs;
        let mut h = vec![Complex64::new(0.0, 0.0); n + 1];
        h[0] = q[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += q[j] * h[k - j] * j as f64;
            }
            h[k] = acc / k as f64;
        }
        Self::checked(h)
    }

    /// Horner evaluation at a point of the open unit disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm().is_nan() || z.norm() >= 1.0 {
            return Err(Error::Domain(format!("{z}")));
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Estimated size of the discarded tail `sum_{k>N} c_k z^k` on `|z| = r`.
    ///
    /// The last quartile of `|c_k|` is fitted to a geometric envelope
    /// `M rho^k` (log-linear least squares for `rho`, then the smallest `M`
    /// dominating every observed coefficient), and the envelope is summed
    /// past `N`. This is an estimate, not a rigorous bound: it assumes the
    /// unseen coefficients keep the observed growth. Returns infinity when
    /// the envelope diverges at `r`.
    pub fn tail_bound(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("radius {r}")));
        }
        Ok(TailEnvelope::fit(self).bound(r))
    }

    /// Writes `k,re,im` lines under a `k,re,im` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,re,im\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{k},{},{}", c.re, c.im);
        }
        out
    }

    /// Parses the `k,re,im` format. Degrees may come in any order; missing
    /// degrees below the largest one are zero.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, Complex64)> = Vec::new();
        let mut saw_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if !saw_header {
                let fields: Vec<_> = line.split(',').map(str::trim).collect();
                if fields != ["k", "re", "im"] {
                    return Err(Error::Csv {
                        line: line_no,
                        reason: "expected header `k,re,im`".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<_> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Csv {
                    line: line_no,
                    reason: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let bad = |what: &str| Error::Csv {
                line: line_no,
                reason: format!("unparseable {what}"),
            };
            let k: usize = fields[0].parse().map_err(|_| bad("degree"))?;
            let re: f64 = fields[1].parse().map_err(|_| bad("real part"))?;
            let im: f64 = fields[2].parse().map_err(|_| bad("imaginary part"))?;
            if entries.iter().any(|(j, _)| *j == k) {
                return Err(Error::Csv {
                    line: line_no,
                    reason: format!("degree {k} repeated"),
                });
            }
            entries.push((k, Complex64::new(re, im)));
        }
        let order = entries
            .iter()
            .map(|(k, _)| *k)
            .max()
            .ok_or(Error::EmptySeries)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (k, c) in entries {
            coeffs[k] = c;
        }
        Self::new(coeffs)
    }
}

/// Geometric envelope `|c_k| <= exp(log_m) * rho^k` fitted to the tail of a
/// coefficient sequence.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TailEnvelope {
    log_m: f64,
    log_rho: f64,
    order: usize,
}

impl TailEnvelope {
    pub(crate) fn fit(series: &TruncatedSeries) -> Self {
        let n = series.order();
        let window = ((n + 1) / 4).max(2).min(n + 1);
        let points: Vec<(f64, f64)> = (n + 1 - window..=n)
            .filter_map(|k| {
                let a = series.coeffs[k].norm();
                (a > 0.0).then(|| (k as f64, a.ln()))
            })
            .collect();
        if points.is_empty() {
            return Self {
                log_m: f64::NEG_INFINITY,
                log_rho: 0.0,
                order: n,
            };
        }
        let log_rho = if points.len() < 2 {
            0.0
        } else {
            let len = points.len() as f64;
            let mean_k = points.iter().map(|p| p.0).sum::<f64>() / len;
            let mean_y = points.iter().map(|p| p.1).sum::<f64>() / len;
            let sxy: f64 = points.iter().map(|p| (p.0 - mean_k) * (p.1 - mean_y)).sum();
            let sxx: f64 = points.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
            sxy / sxx
        };
        let log_m = points
            .iter()
            .map(|&(k, y)| y - k * log_rho)
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            log_m,
            log_rho,
            order: n,
        }
    }

    pub(crate) fn bound(&self, r: f64) -> f64 {
        if self.log_m == f64::NEG_INFINITY || r == 0.0 {
            return 0.0;
        }
        let log_ratio = self.log_rho + r.ln();
        if log_ratio >= 0.0 {
            return f64::INFINITY;
        }
        let head = self.log_m + (self.order + 1) as f64 * log_ratio;
        head.exp() / (1.0 - log_ratio.exp())
    }
}

/// A series in the class of normalized functions: `c_0 = 0` and `c_1 = 1`
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSeries(TruncatedSeries);

impl NormalizedSeries {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.order() < 1 {
            return Err(Error::NotNormalized("order must be at least 1"));
        }
        if series.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(Error::NotNormalized("c_0 must be 0"));
        }
        if series.coeffs[1] != Complex64::new(1.0, 0.0) {
            return Err(Error::NotNormalized("c_1 must be 1"));
        }
        Ok(Self(series))
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(TruncatedSeries::new(coeffs)?)
    }

    /// `f(z) = z` at the given order.
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order.max(1) + 1];
        coeffs[1] = Complex64::new(1.0, 0.0);
        Self(TruncatedSeries::from_vec_unchecked(coeffs))
    }

    /// Rebuilds a normalized series from coefficients whose first two
    /// entries are `0, 1` mathematically; they are pinned exactly.
    pub(crate) fn pinned(mut coeffs: Vec<Complex64>) -> Result<Self> {
        coeffs[0] = Complex64::new(0.0, 0.0);
        coeffs[1] = Complex64::new(1.0, 0.0);
        Self::new(TruncatedSeries::new(coeffs)?)
    }

    /// Multiplies `c_k` by `weight(k)`. Callers guarantee `weight(1) == 1`.
    pub(crate) fn map_diagonal(&self, weight: impl Fn(usize) -> f64) -> Self {
        self.map_higher(|k, c| c * weight(k))
    }

    /// Divides `c_k` by `weight(k)`; the inverse of [`Self::map_diagonal`].
    pub(crate) fn unmap_diagonal(&self, weight: impl Fn(usize) -> f64) -> Self {
        self.map_higher(|k, c| c / weight(k))
    }

    fn map_higher(&self, op: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .0
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k <= 1 { *c } else { op(k, *c) })
            .collect();
        Self(TruncatedSeries::from_vec_unchecked(coeffs))
    }

    /// `f(rho z) / rho`, which shrinks the function into a smaller disk while
    /// staying normalized.
    pub fn dilate(&self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(crate::error::param(format!(
                "dilation {rho} must lie in (0, 1]"
            )));
        }
        Ok(self.map_diagonal(|k| rho.powi(k as i32 - 1)))
    }

    /// `e^{-i theta} f(e^{i theta} z)`.
    pub fn rotate(&self, theta: f64) -> Self {
        let coeffs = self
            .0
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k <= 1 {
                    *c
                } else {
                    c * Complex64::from_polar(1.0, (k as f64 - 1.0) * theta)
                }
            })
            .collect();
        Self(TruncatedSeries::from_vec_unchecked(coeffs))
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self(self.0.truncate(order.max(1)))
    }

    pub fn as_series(&self) -> &TruncatedSeries {
        &self.0
    }

    pub fn into_inner(self) -> TruncatedSeries {
        self.0
    }
}

impl Deref for NormalizedSeries {
    type Target = TruncatedSeries;

    fn deref(&self) -> &TruncatedSeries {
        &self.0
    }
}

impl TryFrom<TruncatedSeries> for NormalizedSeries {
    type Error = Error;

    fn try_from(series: TruncatedSeries) -> Result<Self> {
        Self::new(series)
    }
}

impl From<NormalizedSeries> for TruncatedSeries {
    fn from(f: NormalizedSeries) -> Self {
        f.0
    }
}

/// `h = f / g` for two series vanishing at the origin, with `g'(0) != 0`.
///
/// The common factor `z` is cancelled and the quotient computed by long
/// division, so `h(0) = f_1 / g_1` and the order is
/// `min(order_f, order_g) - 1`.
pub fn ratio_normalized(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
    let zero = Complex64::new(0.0, 0.0);
    if f.coeff(0) != zero || g.coeff(0) != zero {
        return Err(Error::NotNormalized("ratio operands must vanish at 0"));
    }
    let lead = g.coeff(1);
    if lead == zero || g.order() < 1 || f.order() < 1 {
        return Err(Error::DivisionImpossible);
    }
    let order = f.order().min(g.order()) - 1;
    let mut h = vec![zero; order + 1];
    for k in 0..=order {
        let mut acc = f.coeff(k + 1);
        for j in 1..=k {
            acc -= g.coeff(j + 1) * h[k - j];
        }
        h[k] = acc / lead;
    }
    TruncatedSeries::checked(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn koebe(order: usize) -> TruncatedSeries {
        TruncatedSeries::from_real(&(0..=order).map(|k| k as f64).collect::<Vec<_>>()).unwrap()
    }

    fn max_diff(a: &TruncatedSeries, b: &TruncatedSeries) -> f64 {
        let order = a.order().max(b.order());
        (0..=order)
            .map(|k| (a.coeff(k) - b.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn make_series_examples() {
        let id = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(id.order(), 1);
        assert!(id.is_normalized());

        let k3 = TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(k3, koebe(3));
        assert_eq!(k3.order(), 3);

        let one = TruncatedSeries::from_real(&[1.0, 0.0]).unwrap();
        assert!(!one.is_normalized());
        assert!(matches!(
            NormalizedSeries::new(one),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn rejects_non_finite_with_index() {
        let err = TruncatedSeries::from_real(&[0.0, 1.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 2 });
        let err =
            TruncatedSeries::new(vec![c(0.0), Complex64::new(0.0, f64::INFINITY)]).unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 1 });
        assert_eq!(
            TruncatedSeries::new(vec![]).unwrap_err(),
            Error::EmptySeries
        );
    }

    #[test]
    fn add_examples() {
        let z = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(z.add(&z), TruncatedSeries::from_real(&[0.0, 2.0]).unwrap());

        let k = koebe(10);
        let sum = k.add(&k.scale(c(-1.0)));
        assert!(sum.coeffs().iter().all(|c| c.norm() == 0.0));

        let a = TruncatedSeries::from_real(&[0.0, 1.0, 2.0]).unwrap();
        let b = TruncatedSeries::from_real(&[0.0, 0.0, 3.0, 4.0]).unwrap();
        assert_eq!(
            a.add(&b),
            TruncatedSeries::from_real(&[0.0, 1.0, 5.0, 4.0]).unwrap()
        );
    }

    #[test]
    fn mul_examples() {
        let z = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(
            z.mul(&z),
            TruncatedSeries::from_real(&[0.0, 0.0, 1.0]).unwrap()
        );

        let geometric = TruncatedSeries::from_real(&[1.0; 65]).unwrap();
        let one_minus_z = TruncatedSeries::from_real(&[1.0, -1.0]).unwrap();
        let prod = geometric.mul(&one_minus_z);
        assert_eq!(prod.order(), 64);
        assert_eq!(prod.coeff(0), c(1.0));
        assert!(prod.coeffs()[1..].iter().all(|c| c.norm() == 0.0));

        let zero = TruncatedSeries::zero(5);
        assert!(koebe(5).mul(&zero).coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn ratio_examples() {
        let k = koebe(16);
        let h = ratio_normalized(&k, &k).unwrap();
        assert_eq!(h.order(), 15);
        assert!(max_diff(&h, &TruncatedSeries::constant(c(1.0), 15)) < 1e-12);

        // z k'(z) / k(z) = (1 + z) / (1 - z) = 1 + 2z + 2z^2 + ...
        let dk = k.z_derivative();
        let h = ratio_normalized(&dk, &k).unwrap();
        assert_eq!(h.coeff(0), c(1.0));
        for j in 1..=h.order() {
            assert!((h.coeff(j) - c(2.0)).norm() < 1e-12, "degree {j}");
        }

        let f = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]).unwrap();
        let g = TruncatedSeries::from_real(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            ratio_normalized(&f, &g).unwrap(),
            TruncatedSeries::from_real(&[1.0, 1.0]).unwrap()
        );
    }

    #[test]
    fn ratio_rejects_vanishing_linear_term() {
        let f = koebe(4);
        let g = TruncatedSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            ratio_normalized(&f, &g).unwrap_err(),
            Error::DivisionImpossible
        );
    }

    #[test]
    fn derivative_examples() {
        let z = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(z.derivative(), TruncatedSeries::from_real(&[1.0]).unwrap());
        let z2 = TruncatedSeries::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            z2.derivative(),
            TruncatedSeries::from_real(&[0.0, 2.0]).unwrap()
        );
        let dk = koebe(12).derivative();
        for k in 1..=12 {
            assert_eq!(dk.coeff(k - 1), c((k * k) as f64));
        }
    }

    #[test]
    fn z_derivative_examples() {
        let one = TruncatedSeries::constant(c(1.0), 3);
        assert!(one.z_derivative().coeffs().iter().all(|c| c.norm() == 0.0));
        let p = TruncatedSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(
            p.z_derivative(),
            TruncatedSeries::from_real(&[0.0, 1.0]).unwrap()
        );
        let dk = koebe(12).z_derivative();
        assert_eq!(dk.order(), 12);
        for k in 0..=12 {
            assert_eq!(dk.coeff(k), c((k * k) as f64));
        }
    }

    #[test]
    fn exp_examples() {
        let zero = TruncatedSeries::zero(8);
        assert_eq!(
            zero.exp_series().unwrap(),
            TruncatedSeries::constant(c(1.0), 8)
        );

        let z = TruncatedSeries::from_real(&[0.0, 1.0])
            .unwrap()
            .truncate(20);
        let e = z.exp_series().unwrap();
        let mut factorial = 1.0;
        for k in 0..=20 {
            if k > 0 {
                factorial *= k as f64;
            }
            assert!((e.coeff(k) - c(1.0 / factorial)).norm() < 1e-15);
        }

        // -log(1 - z) = sum z^k / k; its exponential is the geometric series.
        let mut q = vec![0.0];
        q.extend((1..=40).map(|k| 1.0 / k as f64));
        let h = TruncatedSeries::from_real(&q)
            .unwrap()
            .exp_series()
            .unwrap();
        for k in 0..=40 {
            assert!((h.coeff(k) - c(1.0)).norm() < 1e-12, "degree {k}");
        }
    }

    #[test]
    fn eval_examples() {
        let z = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(z.eval(c(0.5)).unwrap(), c(0.5));

        let k = koebe(64);
        let w = k.eval(c(-0.5)).unwrap();
        let exact = -0.5 / (1.5f64 * 1.5);
        assert!((w - c(exact)).norm() <= k.tail_bound(0.5).unwrap() + 1e-15);
        assert!((exact - (-2.0 / 9.0)).abs() < 1e-15);

        let f = TruncatedSeries::from_real(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(f.eval(c(0.0)).unwrap(), c(3.0));

        assert!(matches!(z.eval(c(1.0)), Err(Error::Domain(_))));
        assert!(matches!(
            z.eval(Complex64::new(0.8, 0.6)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tail_bound_examples() {
        let z = NormalizedSeries::identity(64);
        assert_eq!(z.tail_bound(0.9).unwrap(), 0.0);

        let k = koebe(64);
        // Direct tail sum of k 0.5^k past the truncation order.
        let direct: f64 = (65..2000).map(|j| j as f64 * 0.5f64.powi(j)).sum();
        let bound = k.tail_bound(0.5).unwrap();
        assert!(bound >= direct, "{bound} < {direct}");
        assert!(bound <= 1e-12);

        assert_eq!(k.tail_bound(0.0).unwrap(), 0.0);
        assert!(matches!(k.tail_bound(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_bound_is_exact_for_geometric_coefficients() {
        let geometric = TruncatedSeries::from_real(&[1.0; 33]).unwrap();
        let r: f64 = 0.7;
        let exact = r.powi(33) / (1.0 - r);
        assert!((geometric.tail_bound(r).unwrap() - exact).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = TruncatedSeries::new(vec![
            c(0.0),
            c(1.0),
            Complex64::new(0.1, -1.0 / 3.0),
            Complex64::new(-2.5e-17, 7.0),
        ])
        .unwrap();
        let text = f.to_csv();
        assert!(text.starts_with("k,re,im\n0,0,0\n1,1,0\n"));
        assert_eq!(TruncatedSeries::from_csv(&text).unwrap(), f);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(matches!(
            TruncatedSeries::from_csv("a,b,c\n0,1,2\n"),
            Err(Error::Csv { line: 1, .. })
        ));
        assert!(matches!(
            TruncatedSeries::from_csv("k,re,im\n0,1\n"),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            TruncatedSeries::from_csv("k,re,im\n0,x,0\n"),
            Err(Error::Csv { line: 2, .. })
        ));
        assert!(matches!(
            TruncatedSeries::from_csv("k,re,im\n0,NaN,0\n"),
            Err(Error::NonFinite { index: 0 })
        ));
        assert_eq!(
            TruncatedSeries::from_csv("k,re,im\n").unwrap_err(),
            Error::EmptySeries
        );
    }

    #[test]
    fn dilate_and_rotate_stay_normalized() {
        let k = NormalizedSeries::new(koebe(10)).unwrap();
        let d = k.dilate(0.5).unwrap();
        assert!(d.is_normalized());
        assert_eq!(d.coeff(3), c(3.0 * 0.25));
        let r = k.rotate(0.3);
        assert!(r.is_normalized());
        assert!((r.coeff(2).norm() - 2.0).abs() < 1e-15);
        assert!(k.dilate(0.0).is_err());
    }
}
