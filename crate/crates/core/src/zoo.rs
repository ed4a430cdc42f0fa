//! Functions with known class membership, built constructively.
//!
//! Positive-real-part functions come from finite Herglotz averages
//! `p(z) = sum_j w_j (1 + x_j z) / (1 - x_j z)`; starlike and
//! close-to-convex members are then obtained by solving the defining ratio
//! equations coefficient by coefficient, and [`lift_to_b`] transports them
//! into any `(n, sigma)` class by undoing the composite operator.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::operators::composite_weight;
use crate::series::{NormalizedSeries, TruncatedSeries};

const UNIT_TOL: f64 = 1e-12;

/// Unimodular points and convex weights of a Herglotz average.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzSpec {
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl HerglotzSpec {
    pub fn new(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(param(
                "Herglotz spec needs matching, non-empty points and weights",
            ));
        }
        if let Some(x) = points.iter().find(|x| (x.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(param(format!("Herglotz point {x} is not unimodular")));
        }
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(param("Herglotz weights must be nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > UNIT_TOL {
            return Err(param(format!("Herglotz weights sum to {total}, not 1")));
        }
        Ok(Self { points, weights })
    }

    /// One to four boundary points at uniform angles with random weights.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng)
    }

    pub(crate) fn random_with(rng: &mut impl Rng) -> Self {
        let count = rng.gen_range(1..=4);
        let points: Vec<_> = (0..count)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
            .collect();
        let raw: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        Self { points, weights }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `p(z) = sum_j w_j (1 + x_j z)/(1 - x_j z)`: `p(0) = 1` and
/// `p_k = 2 sum_j w_j x_j^k`.
pub fn herglotz_p(spec: &HerglotzSpec, order: usize) -> TruncatedSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (x, w) in spec.points.iter().zip(&spec.weights) {
        let mut power = Complex64::new(1.0, 0.0);
        for c in coeffs.iter_mut().skip(1) {
            power *= x;
            *c += power * (2.0 * w);
        }
    }
    TruncatedSeries::from_vec_unchecked(coeffs)
}

fn check_order_parameter(name: &str, value: f64) -> Result<()> {
    if (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(param(format!("{name} = {value} must lie in [0, 1)")))
    }
}

fn check_p_normalized(p: &TruncatedSeries) -> Result<()> {
    if (p.coeff(0) - Complex64::new(1.0, 0.0)).norm() > UNIT_TOL {
        return Err(param(format!("p(0) = {} must equal 1", p.coeff(0))));
    }
    Ok(())
}

/// Truncation of `z / (1 - z)^{2(1 - gamma)}`, the extremal starlike
/// function of order `gamma`.
pub fn koebe_general(gamma: f64, order: usize) -> Result<NormalizedSeries> {
    check_order_parameter("gamma", gamma)?;
    let order = order.max(1);
    let exponent = 2.0 * (1.0 - gamma);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    for k in 1..order {
        coeffs[k + 1] = coeffs[k] * (k as f64 - 1.0 + exponent) / k as f64;
    }
    NormalizedSeries::pinned(coeffs)
}

/// `z / (1 - z)`, which maps the disk onto the half-plane `Re w > -1/2`.
pub fn halfplane(order: usize) -> NormalizedSeries {
    let mut coeffs = vec![Complex64::new(1.0, 0.0); order.max(1) + 1];
    coeffs[0] = Complex64::new(0.0, 0.0);
    NormalizedSeries::new(TruncatedSeries::from_vec_unchecked(coeffs)).expect("normalized")
}

/// The `f` with `z f'/f = gamma + (1 - gamma) p` and the order of `p`.
///
/// Solved as `f = z exp(q)` where `q` is the primitive of
/// `(1 - gamma)(p(t) - 1)/t`. Any `gamma >= 0` with `gamma != 1` is
/// accepted: for `gamma > 1` the same formula produces a ratio whose real
/// part stays below `gamma`.
pub fn starlike_from_p(p: &TruncatedSeries, gamma: f64) -> Result<NormalizedSeries> {
    check_p_normalized(p)?;
    if !(gamma.is_finite() && gamma >= 0.0 && gamma != 1.0) {
        return Err(param(format!(
            "gamma = {gamma} must be nonnegative and different from 1"
        )));
    }
    let order = p.order().max(1);
    let scale = 1.0 - gamma;
    let mut q = vec![Complex64::new(0.0, 0.0); order];
    for (k, qk) in q.iter_mut().enumerate().skip(1) {
        *qk = p.coeff(k) * (scale / k as f64);
    }
    let h = TruncatedSeries::checked(q)?.exp_series()?;
    let f = h.multiply_by_z();
    NormalizedSeries::pinned(f.coeffs().to_vec())
}

/// The `g` with `L_n^sigma g = f`: coefficient `a_k / (k^n (2/(k+1))^sigma)`.
pub fn lift_to_b(f: &NormalizedSeries, n: u32, sigma: f64) -> NormalizedSeries {
    if n == 0 && sigma == 0.0 {
        return f.clone();
    }
    f.unmap_diagonal(|k| composite_weight(k, n, sigma))
}

/// The `f` with `z f' = g (beta + (1 - beta) p)`, same order as `g`.
pub fn close_to_convex_from(
    g: &NormalizedSeries,
    p: &TruncatedSeries,
    beta: f64,
) -> Result<NormalizedSeries> {
    check_p_normalized(p)?;
    if !(beta.is_finite() && beta >= 0.0 && beta != 1.0) {
        return Err(param(format!(
            "beta = {beta} must be nonnegative and different from 1"
        )));
    }
    let order = g.order();
    let weight = p
        .scale(Complex64::new(1.0 - beta, 0.0))
        .add(&TruncatedSeries::constant(Complex64::new(beta, 0.0), 0));
    let derivative = g.divide_by_z()?.mul_capped(&weight, order - 1);
    let f = derivative.truncate(order - 1).antiderivative();
    NormalizedSeries::pinned(f.coeffs().to_vec())
}

/// Seeded pseudo-random normalized series with `|c_k| <= decay^{-k}` for
/// `k >= 2`.
pub fn random_normalized(seed: u64, decay: f64, order: usize) -> Result<NormalizedSeries> {
    if !(decay.is_finite() && decay > 1.0) {
        return Err(param(format!("decay = {decay} must exceed 1")));
    }
    let order = order.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs.iter_mut().enumerate().skip(2) {
        let modulus = rng.gen_range(0.0..=1.0) * decay.powi(-(k as i32));
        *c = Complex64::from_polar(modulus, rng.gen_range(0.0..TAU));
    }
    NormalizedSeries::new(TruncatedSeries::new(coeffs)?)
}

/// Starlike member built from a random Herglotz average.
pub fn herglotz_starlike(seed: u64, order: usize) -> NormalizedSeries {
    let p = herglotz_p(&HerglotzSpec::random(seed), order);
    starlike_from_p(&p, 0.0).expect("Herglotz averages satisfy p(0) = 1")
}

/// Names accepted on the command line:
/// `identity`, `halfplane`, `koebe:<gamma>`, `herglotz:<seed>`,
/// `random:<seed>:<decay>`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZooName {
    Identity,
    Halfplane,
    Koebe { gamma: f64 },
    Herglotz { seed: u64 },
    Random { seed: u64, decay: f64 },
}

impl ZooName {
    pub fn build(&self, order: usize) -> Result<NormalizedSeries> {
        match *self {
            ZooName::Identity => Ok(NormalizedSeries::identity(order)),
            ZooName::Halfplane => Ok(halfplane(order)),
            ZooName::Koebe { gamma } => koebe_general(gamma, order),
            ZooName::Herglotz { seed } => Ok(herglotz_starlike(seed, order)),
            ZooName::Random { seed, decay } => random_normalized(seed, decay, order),
        }
    }
}

impl FromStr for ZooName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["identity"] => Ok(ZooName::Identity),
            ["halfplane"] => Ok(ZooName::Halfplane),
            ["koebe", gamma] => {
                let gamma: f64 = gamma.parse().map_err(|_| unknown())?;
                check_order_parameter("gamma", gamma)?;
                Ok(ZooName::Koebe { gamma })
            }
            ["herglotz", seed] => Ok(ZooName::Herglotz {
                seed: seed.parse().map_err(|_| unknown())?,
            }),
            ["random", seed, decay] => {
                let decay: f64 = decay.parse().map_err(|_| unknown())?;
                if decay.is_nan() || decay <= 1.0 {
                    return Err(param(format!("decay = {decay} must exceed 1")));
                }
                Ok(ZooName::Random {
                    seed: seed.parse().map_err(|_| unknown())?,
                    decay,
                })
            }
            _ => Err(unknown()),
        }
    }
}
