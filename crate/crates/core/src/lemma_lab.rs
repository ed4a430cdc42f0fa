//! Admissible test functions `psi(u, v)` and instance-level checks of the
//! positive-real-part lemma.
//!
//! For `gamma >= 0`, `gamma != 1`, a function `psi` is admissible when
//! `Re psi(1, 0) > 0` and, at every point `u = gamma + (1 - gamma) u2 i`,
//! `v = v1` of its domain,
//!
//! * `Re psi <= gamma` whenever `2 v1 <= -(1 - gamma)(1 + u2^2)` (`gamma < 1`),
//! * `Re psi >= gamma` whenever `2 v1 >= (gamma - 1)(1 + u2^2)` (`gamma > 1`).
//!
//! The lemma then says: if `p(0) = 1` and `Re psi(p(z), z p'(z)) ~ gamma`
//! throughout the disk, then `Re p(z) ~ gamma` there as well. Nothing here
//! proves that; [`lemma_instance`] measures both sides on a grid so that an
//! implementation bug would show up as a hypothesis-true, conclusion-false
//! instance.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::grid::DiskGrid;
use crate::membership::{quotient_error, Point, Relation};
use crate::series::{TailEnvelope, TruncatedSeries};

/// Default cap on `|u2|` when sampling the constraint region.
pub const DEFAULT_U_CAP: f64 = 10.0;

const CONDITION_TOL: f64 = 1e-12;

/// A point-dependent complex field, used as the `alpha` of `psi_1`.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaField {
    Constant(Complex64),
    Series(TruncatedSeries),
    /// `num(z) / den(z)`, e.g. an operator ratio of a witness.
    Ratio {
        num: TruncatedSeries,
        den: TruncatedSeries,
    },
}

impl AlphaField {
    pub fn at(&self, z: Complex64) -> Option<Complex64> {
        let value = match self {
            AlphaField::Constant(a) => *a,
            AlphaField::Series(s) => s.horner(z),
            AlphaField::Ratio { num, den } => num.horner(z) / den.horner(z),
        };
        value.is_finite().then_some(value)
    }
}

type CustomPsi = dyn Fn(Complex64, Complex64, Complex64) -> Option<Complex64> + Send + Sync;

/// A two-argument test function `psi(u, v)`, optionally depending on the
/// sample point `z` through `alpha`.
#[derive(Clone)]
pub enum PsiFunction {
    /// `u + v / (xi + alpha(z))`, defined where `xi + Re alpha > 0`.
    Psi1 { xi: f64, alpha: AlphaField },
    /// `u + v / (xi + u)`, defined for `u != -xi`.
    Psi2 { xi: f64 },
    /// Arbitrary `(u, v, z) -> psi`; `None` marks a point outside the domain.
    Custom { name: String, f: Arc<CustomPsi> },
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiFunction::Psi1 { xi, alpha } => f
                .debug_struct("Psi1")
                .field("xi", xi)
                .field("alpha", alpha)
                .finish(),
            PsiFunction::Psi2 { xi } => f.debug_struct("Psi2").field("xi", xi).finish(),
            PsiFunction::Custom { name, .. } => {
                f.debug_struct("Custom").field("name", name).finish()
            }
        }
    }
}

impl PsiFunction {
    pub fn psi1(xi: f64, alpha: AlphaField) -> Self {
        PsiFunction::Psi1 { xi, alpha }
    }

    pub fn psi2(xi: f64) -> Self {
        PsiFunction::Psi2 { xi }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(Complex64, Complex64, Complex64) -> Option<Complex64> + Send + Sync + 'static,
    ) -> Self {
        PsiFunction::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `psi(u, v)` at sample point `z`.
    pub fn eval(&self, u: Complex64, v: Complex64, z: Complex64) -> Result<Complex64> {
        let value = match self {
            PsiFunction::Psi1 { xi, alpha } => {
                let a = alpha
                    .at(z)
                    .ok_or_else(|| Error::Domain(format!("alpha undefined at {z}")))?;
                let shift = a + xi;
                if shift.re.is_nan() || shift.re <= 0.0 {
                    return Err(Error::Domain(format!(
                        "xi + Re alpha = {} at {z}",
                        shift.re
                    )));
                }
                u + v / shift
            }
            PsiFunction::Psi2 { xi } => {
                let shift = u + xi;
                if shift == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain(format!("u = -xi = {u}")));
                }
                u + v / shift
            }
            PsiFunction::Custom { f, .. } => f(u, v, z)
                .ok_or_else(|| Error::Domain(format!("psi undefined at u = {u}, v = {v}")))?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Domain(format!("psi overflows at u = {u}, v = {v}")))
        }
    }

    fn check_parameters(&self, gamma: f64) -> Result<()> {
        if let PsiFunction::Psi2 { xi } = self {
            if (xi + gamma).is_nan() || xi + gamma <= 0.0 {
                return Err(param(format!(
                    "psi_2 needs xi + gamma > 0, got {}",
                    xi + gamma
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    LowGamma,
    HighGamma,
}

impl Branch {
    pub fn for_gamma(gamma: f64) -> Result<Self> {
        Ok(match Relation::for_threshold(gamma)? {
            Relation::GreaterThan => Branch::LowGamma,
            Relation::LessThan => Branch::HighGamma,
        })
    }
}

/// One point `(gamma + (1 - gamma) u2 i, v1)` of the region where the
/// admissibility inequality must hold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryConstraintSample {
    pub gamma: f64,
    pub u2: f64,
    pub v1: f64,
    pub branch: Branch,
}

impl BoundaryConstraintSample {
    /// Places `v1` on the constraint parabola, pushed `excess >= 0` further
    /// into the region.
    pub fn on_parabola(gamma: f64, u2: f64, excess: f64) -> Result<Self> {
        let branch = Branch::for_gamma(gamma)?;
        let edge = (gamma - 1.0) * (1.0 + u2 * u2) / 2.0;
        let v1 = match branch {
            Branch::LowGamma => edge - excess,
            Branch::HighGamma => edge + excess,
        };
        Ok(Self {
            gamma,
            u2,
            v1,
            branch,
        })
    }

    /// Whether `(u2, v1)` satisfies the branch's constraint.
    pub fn in_region(&self) -> bool {
        let rhs = (self.gamma - 1.0) * (1.0 + self.u2 * self.u2);
        match self.branch {
            Branch::LowGamma => 2.0 * self.v1 <= rhs,
            Branch::HighGamma => 2.0 * self.v1 >= rhs,
        }
    }

    pub fn u(&self) -> Complex64 {
        Complex64::new(self.gamma, (1.0 - self.gamma) * self.u2)
    }

    /// Signed distance of `Re psi` from `gamma`, positive when the
    /// inequality holds.
    pub fn margin(&self, re_psi: f64) -> f64 {
        match self.branch {
            Branch::LowGamma => self.gamma - re_psi,
            Branch::HighGamma => re_psi - self.gamma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionB {
    pub value: Point,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub evaluated: usize,
    pub passed: usize,
    pub violations: usize,
    pub outside_domain: usize,
    /// Smallest margin seen; `None` if no sample was evaluated.
    pub worst_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_sample: Option<BoundaryConstraintSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub gamma: f64,
    pub branch: Branch,
    pub samples: usize,
    pub u_cap: f64,
    pub condition_b: ConditionB,
    pub boundary: BoundaryCondition,
}

impl ConditionReport {
    pub fn is_clean(&self) -> bool {
        self.condition_b.passed && self.boundary.violations == 0
    }
}

/// Samples the admissibility conditions with the default `|u2| <= 10` cap.
pub fn check_psi_conditions(
    psi: &PsiFunction,
    gamma: f64,
    n_samples: usize,
    seed: u64,
) -> Result<ConditionReport> {
    check_psi_conditions_with(psi, gamma, n_samples, seed, DEFAULT_U_CAP)
}

/// Samples `u2` uniformly in `[-u_cap, u_cap]`; every fourth `v1` lies
/// exactly on the constraint parabola and the rest are pushed into the
/// region by `10^e`, `e` uniform in `[-6, 3]`. Points where `alpha` is
/// sampled are drawn from the disk `|z| <= 0.95`.
pub fn check_psi_conditions_with(
    psi: &PsiFunction,
    gamma: f64,
    n_samples: usize,
    seed: u64,
    u_cap: f64,
) -> Result<ConditionReport> {
    let branch = Branch::for_gamma(gamma)?;
    psi.check_parameters(gamma)?;
    if !(u_cap > 0.0 && u_cap.is_finite()) {
        return Err(param("u_cap must be positive"));
    }
    let origin = Complex64::new(0.0, 0.0);
    let at_one = psi.eval(Complex64::new(1.0, 0.0), origin, origin)?;
    let condition_b = ConditionB {
        value: at_one.into(),
        passed: at_one.re > 0.0,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boundary = BoundaryCondition {
        evaluated: 0,
        passed: 0,
        violations: 0,
        outside_domain: 0,
        worst_margin: None,
        worst_sample: None,
    };
    for i in 0..n_samples {
        let u2 = rng.gen_range(-u_cap..=u_cap);
        let excess = if i % 4 == 0 {
            0.0
        } else {
            10f64.powf(rng.gen_range(-6.0..=3.0))
        };
        let z = Complex64::from_polar(
            0.95 * rng.gen::<f64>().sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let sample = BoundaryConstraintSample::on_parabola(gamma, u2, excess)?;
        debug_assert!(sample.in_region());
        let value = match psi.eval(sample.u(), Complex64::new(sample.v1, 0.0), z) {
            Ok(v) => v,
            Err(Error::Domain(_)) => {
                boundary.outside_domain += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        boundary.evaluated += 1;
        let margin = sample.margin(value.re);
        if margin >= -CONDITION_TOL * value.norm().max(1.0) {
            boundary.passed += 1;
        } else {
            boundary.violations += 1;
        }
        if boundary.worst_margin.is_none_or(|w| margin < w) {
            boundary.worst_margin = Some(margin);
            boundary.worst_sample = Some(sample);
        }
    }
    Ok(ConditionReport {
        gamma,
        branch,
        samples: n_samples,
        u_cap,
        condition_b,
        boundary,
    })
}

/// Both sides of the lemma measured on one grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub gamma: f64,
    pub relation: Relation,
    /// Margin of `Re psi(p, z p') ~ gamma`.
    pub hypothesis_margin: f64,
    pub hypothesis_argext: Point,
    /// Margin of `Re p ~ gamma`.
    pub conclusion_margin: f64,
    pub conclusion_argext: Point,
    pub truncation_bound: f64,
    pub skipped: usize,
    pub grid: DiskGrid,
}

impl LemmaReport {
    /// Hypothesis satisfied and conclusion violated, both beyond twice the
    /// truncation estimate.
    pub fn contradicts_lemma(&self) -> bool {
        self.hypothesis_margin > 2.0 * self.truncation_bound
            && self.conclusion_margin < -2.0 * self.truncation_bound
    }
}

/// Evaluates `Re psi(p(z), z p'(z))` and `Re p(z)` over the grid and reports
/// their extremal margins against `gamma`.
pub fn lemma_instance(
    p: &TruncatedSeries,
    psi: &PsiFunction,
    gamma: f64,
    grid: &DiskGrid,
) -> Result<LemmaReport> {
    if (p.coeff(0) - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(param(format!("p(0) = {} must equal 1", p.coeff(0))));
    }
    let relation = Relation::for_threshold(gamma)?;
    psi.check_parameters(gamma)?;
    grid.validate()?;

    let dp = p.z_derivative();
    let sampler = grid.sampler();
    let us = sampler.evaluate(p);
    let vs = sampler.evaluate(&dp);
    let (env_p, env_dp) = (TailEnvelope::fit(p), TailEnvelope::fit(&dp));
    let tails: Vec<(f64, f64)> = grid
        .radii()
        .map(|r| (env_p.bound(r), env_dp.bound(r)))
        .collect();

    let mut hyp: Option<(f64, usize)> = None;
    let mut concl: Option<(f64, usize)> = None;
    let mut bound = 0.0f64;
    let mut skipped = 0;
    for (idx, (u, v)) in us.iter().zip(&vs).enumerate() {
        let z = grid.point(idx);
        let (tu, tv) = tails[idx / grid.n_angles];
        let m_concl = relation.margin(u.re, gamma);
        if concl.is_none_or(|(m, _)| m_concl < m) {
            concl = Some((m_concl, idx));
        }
        bound = bound.max(tu);
        let value = match psi.eval(*u, *v, z) {
            Ok(w) => w,
            Err(Error::Domain(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        bound = bound.max(sensitivity(psi, *u, *v, z, value, tu, tv));
        let m_hyp = relation.margin(value.re, gamma);
        if hyp.is_none_or(|(m, _)| m_hyp < m) {
            hyp = Some((m_hyp, idx));
        }
    }
    let (hypothesis_margin, h_idx) = hyp.ok_or(Error::EvaluationDegenerate)?;
    let (conclusion_margin, c_idx) = concl.ok_or(Error::EvaluationDegenerate)?;
    Ok(LemmaReport {
        gamma,
        relation,
        hypothesis_margin,
        hypothesis_argext: grid.point(h_idx).into(),
        conclusion_margin,
        conclusion_argext: grid.point(c_idx).into(),
        truncation_bound: bound,
        skipped,
        grid: *grid,
    })
}

/// First-order change of `psi` when `u` and `v` move by their tail
/// estimates. `psi_1` and `psi_2` are holomorphic in each argument, so the
/// real-axis perturbation has the modulus of any other direction.
fn sensitivity(
    psi: &PsiFunction,
    u: Complex64,
    v: Complex64,
    z: Complex64,
    value: Complex64,
    tail_u: f64,
    tail_v: f64,
) -> f64 {
    if tail_u == 0.0 && tail_v == 0.0 {
        return 0.0;
    }
    if let PsiFunction::Psi2 { xi } = psi {
        // v / (xi + u) is a quotient; reuse the propagation rule for it.
        let shift = u + xi;
        return tail_u + quotient_error(v, shift, tail_v, tail_u);
    }
    let du = psi
        .eval(u + tail_u, v, z)
        .map_or(f64::INFINITY, |w| (w - value).norm());
    let dv = psi
        .eval(u, v + tail_v, z)
        .map_or(f64::INFINITY, |w| (w - value).norm());
    du + dv
}
