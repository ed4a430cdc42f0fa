//! Grid-based membership checks for the classes `B_n^sigma(gamma)` and
//! `K_n^sigma(beta, gamma)`.
//!
//! Membership asks whether `Re L_{n+1}^sigma f / L_n^sigma f` (or the same
//! numerator over `L_n^sigma g` for a witness `g`) stays on one side of a
//! threshold throughout the disk. The threshold's side is the relation `~`:
//! `>` for thresholds in `[0, 1)` and `<` for thresholds above 1.
//!
//! The ratio is evaluated pointwise on a [`DiskGrid`] by dividing the sampled
//! numerator and denominator; no series division is involved. Each report
//! carries a truncation estimate, the largest propagated effect of the
//! discarded series tails on the sampled ratio, and a verdict is only issued
//! when the margin clears that estimate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::grid::{DiskGrid, GridSampler};
use crate::operators::composite_l;
use crate::series::{NormalizedSeries, TailEnvelope, TruncatedSeries};

/// Denominator samples smaller than this are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Direction of the relation `~` for a given threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    GreaterThan,
    LessThan,
}

impl Relation {
    /// `>` for `0 <= t < 1`, `<` for `t > 1`; anything else is rejected.
    pub fn for_threshold(t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 || t == 1.0 {
            return Err(param(format!(
                "threshold {t} must be nonnegative and different from 1"
            )));
        }
        Ok(if t < 1.0 {
            Relation::GreaterThan
        } else {
            Relation::LessThan
        })
    }

    pub fn direction(self) -> Direction {
        match self {
            Relation::GreaterThan => Direction::Min,
            Relation::LessThan => Direction::Max,
        }
    }

    /// Signed distance of `value` from `threshold`, positive when the
    /// relation holds.
    pub fn margin(self, value: f64, threshold: f64) -> f64 {
        match self {
            Relation::GreaterThan => value - threshold,
            Relation::LessThan => threshold - value,
        }
    }
}

/// Which extremum of the real part decides a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

/// Parameters `(n, sigma, gamma [, beta])` of a `B` or `K` class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    n: u32,
    sigma: f64,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    relation_gamma: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation_beta: Option<Relation>,
}

impl ClassSpec {
    /// `B_n^sigma(gamma)`.
    pub fn b(n: u32, sigma: f64, gamma: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(param("sigma must be finite"));
        }
        Ok(Self {
            n,
            sigma,
            gamma,
            beta: None,
            relation_gamma: Relation::for_threshold(gamma)?,
            relation_beta: None,
        })
    }

    /// `K_n^sigma(beta, gamma)`; the witness order `gamma` must lie in
    /// `[0, 1)`.
    pub fn k(n: u32, sigma: f64, beta: f64, gamma: f64) -> Result<Self> {
        let mut spec = Self::b(n, sigma, gamma)?;
        if spec.relation_gamma != Relation::GreaterThan {
            return Err(param(format!(
                "K-class witness order gamma = {gamma} must lie in [0, 1)"
            )));
        }
        spec.relation_beta = Some(Relation::for_threshold(beta)?);
        spec.beta = Some(beta);
        Ok(spec)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn relation_gamma(&self) -> Relation {
        self.relation_gamma
    }

    pub fn relation_beta(&self) -> Option<Relation> {
        self.relation_beta
    }

    pub fn is_k_class(&self) -> bool {
        self.beta.is_some()
    }

    /// The `B` class a `K`-class witness must belong to.
    pub fn witness_class(&self) -> Self {
        Self {
            beta: None,
            relation_beta: None,
            ..*self
        }
    }

    /// Same class with `n` and `sigma` replaced.
    pub fn with_indices(&self, n: u32, sigma: f64) -> Self {
        Self { n, sigma, ..*self }
    }

    /// The threshold and relation the class ratio is compared against.
    pub fn threshold(&self) -> (f64, Relation) {
        match (self.beta, self.relation_beta) {
            (Some(b), Some(rel)) => (b, rel),
            _ => (self.gamma, self.relation_gamma),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NotMember,
    Inconclusive,
}

impl Verdict {
    /// `Member` when the margin clears the truncation estimate,
    /// `NotMember` when it falls below its negative, `Inconclusive`
    /// in between.
    pub fn from_margin(margin: f64, truncation_bound: f64) -> Self {
        if margin > truncation_bound {
            Verdict::Member
        } else if margin < -truncation_bound {
            Verdict::NotMember
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NotMember => "not_member",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A complex number serialized as `{re, im}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Point> for Complex64 {
    fn from(p: Point) -> Self {
        Complex64::new(p.re, p.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub margin: f64,
    pub argext: Point,
    pub truncation_bound: f64,
    pub grid: DiskGrid,
    pub skipped: usize,
}

impl MembershipReport {
    /// Member with room to spare: the margin clears twice the truncation
    /// estimate.
    pub fn is_solid_member(&self) -> bool {
        self.verdict == Verdict::Member && self.margin > 2.0 * self.truncation_bound
    }

    /// Non-member beyond twice the truncation estimate.
    pub fn is_solid_non_member(&self) -> bool {
        self.verdict == Verdict::NotMember && self.margin < -2.0 * self.truncation_bound
    }
}

/// Extremal real part of a sampled ratio field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioExtremum {
    pub value: f64,
    pub point: Complex64,
    /// Largest propagated truncation error of the ratio over the samples.
    pub truncation_bound: f64,
    pub skipped: usize,
}

/// Propagated error of `num / den` given tail estimates of each.
pub(crate) fn quotient_error(num: Complex64, den: Complex64, tail_num: f64, tail_den: f64) -> f64 {
    let d = den.norm();
    if tail_num == 0.0 && tail_den == 0.0 {
        return 0.0;
    }
    if d <= tail_den {
        return f64::INFINITY;
    }
    (tail_num + (num / den).norm() * tail_den) / (d - tail_den)
}

/// Minimum or maximum of `Re num(z)/den(z)` over the grid.
pub fn extremal_real_ratio(
    num: &TruncatedSeries,
    den: &TruncatedSeries,
    grid: &DiskGrid,
    direction: Direction,
) -> Result<RatioExtremum> {
    grid.validate()?;
    if den.coeff(1) == Complex64::new(0.0, 0.0) {
        return Err(Error::DivisionImpossible);
    }
    let sampler = grid.sampler();
    extremal_with(&sampler, num, den, direction)
}

fn extremal_with(
    sampler: &GridSampler,
    num: &TruncatedSeries,
    den: &TruncatedSeries,
    direction: Direction,
) -> Result<RatioExtremum> {
    let grid = *sampler.grid();
    let nums = sampler.evaluate(num);
    let dens = sampler.evaluate(den);
    let (env_num, env_den) = (TailEnvelope::fit(num), TailEnvelope::fit(den));
    let tails: Vec<(f64, f64)> = grid
        .radii()
        .map(|r| (env_num.bound(r), env_den.bound(r)))
        .collect();

    let mut best: Option<(f64, usize)> = None;
    let mut bound = 0.0f64;
    let mut skipped = 0;
    for (idx, (a, b)) in nums.iter().zip(&dens).enumerate() {
        if b.norm() < DENOMINATOR_FLOOR {
            skipped += 1;
            continue;
        }
        let q = a / b;
        if !q.is_finite() {
            skipped += 1;
            continue;
        }
        let (tn, td) = tails[idx / grid.n_angles];
        bound = bound.max(quotient_error(*a, *b, tn, td));
        let better = match (best, direction) {
            (None, _) => true,
            (Some((v, _)), Direction::Min) => q.re < v,
            (Some((v, _)), Direction::Max) => q.re > v,
        };
        if better {
            best = Some((q.re, idx));
        }
    }
    let (value, idx) = best.ok_or(Error::EvaluationDegenerate)?;
    Ok(RatioExtremum {
        value,
        point: grid.point(idx),
        truncation_bound: bound,
        skipped,
    })
}

fn report_against(
    num: &TruncatedSeries,
    den: &TruncatedSeries,
    threshold: f64,
    relation: Relation,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    let ext = extremal_real_ratio(num, den, grid, relation.direction())?;
    let margin = relation.margin(ext.value, threshold);
    Ok(MembershipReport {
        verdict: Verdict::from_margin(margin, ext.truncation_bound),
        margin,
        argext: ext.point.into(),
        truncation_bound: ext.truncation_bound,
        grid: *grid,
        skipped: ext.skipped,
    })
}

/// Checks `Re L_{n+1}^sigma f / L_n^sigma f ~ gamma`.
pub fn check_b(
    f: &NormalizedSeries,
    spec: &ClassSpec,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    if spec.is_k_class() {
        return Err(param("check_b needs a B-class spec (no beta)"));
    }
    let num = composite_l(f, spec.n + 1, spec.sigma);
    let den = composite_l(f, spec.n, spec.sigma);
    report_against(&num, &den, spec.gamma, spec.relation_gamma, grid)
}

/// The `K`-class ratio check alone, without validating the witness.
pub fn check_k_ratio(
    f: &NormalizedSeries,
    g: &NormalizedSeries,
    spec: &ClassSpec,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    let (beta, relation) = match (spec.beta, spec.relation_beta) {
        (Some(b), Some(r)) => (b, r),
        _ => return Err(param("K-class check needs a spec with beta")),
    };
    let num = composite_l(f, spec.n + 1, spec.sigma);
    let den = composite_l(g, spec.n, spec.sigma);
    report_against(&num, &den, beta, relation, grid)
}

/// Witness and subject reports of a `K`-class check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KReport {
    pub witness: MembershipReport,
    pub subject: MembershipReport,
}

/// Like [`check_k`] but also returns the witness report.
pub fn check_k_detailed(
    f: &NormalizedSeries,
    g: &NormalizedSeries,
    spec: &ClassSpec,
    grid: &DiskGrid,
) -> Result<KReport> {
    if !spec.is_k_class() {
        return Err(param("check_k needs a K-class spec (with beta)"));
    }
    let witness = check_b(g, &spec.witness_class(), grid)?;
    if witness.verdict != Verdict::Member {
        return Err(Error::WitnessNotInClass(format!(
            "verdict {}, margin {:.6e}, truncation bound {:.6e}",
            witness.verdict, witness.margin, witness.truncation_bound
        )));
    }
    let subject = check_k_ratio(f, g, spec, grid)?;
    Ok(KReport { witness, subject })
}

/// Checks `Re L_{n+1}^sigma f / L_n^sigma g ~ beta` after confirming that
/// the witness `g` belongs to `B_n^sigma(gamma)`.
pub fn check_k(
    f: &NormalizedSeries,
    g: &NormalizedSeries,
    spec: &ClassSpec,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    check_k_detailed(f, g, spec, grid).map(|r| r.subject)
}

/// The eleven classical subclasses reached by fixing `n` and `sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedClass {
    Starlike,
    Convex,
    Salagean,
    Obradovic,
    LiuStar,
    LiuConvex,
    CloseToConvex,
    QuasiConvex,
    Blezu,
    LiuK,
    LiuKstar,
}

impl NamedClass {
    pub const ALL: [NamedClass; 11] = [
        NamedClass::Starlike,
        NamedClass::Convex,
        NamedClass::Salagean,
        NamedClass::Obradovic,
        NamedClass::LiuStar,
        NamedClass::LiuConvex,
        NamedClass::CloseToConvex,
        NamedClass::QuasiConvex,
        NamedClass::Blezu,
        NamedClass::LiuK,
        NamedClass::LiuKstar,
    ];

    pub fn token(self) -> &'static str {
        match self {
            NamedClass::Starlike => "starlike",
            NamedClass::Convex => "convex",
            NamedClass::Salagean => "salagean",
            NamedClass::Obradovic => "obradovic",
            NamedClass::LiuStar => "liu_star",
            NamedClass::LiuConvex => "liu_convex",
            NamedClass::CloseToConvex => "close_to_convex",
            NamedClass::QuasiConvex => "quasi_convex",
            NamedClass::Blezu => "blezu",
            NamedClass::LiuK => "liu_k",
            NamedClass::LiuKstar => "liu_kstar",
        }
    }

    pub fn needs_witness(self) -> bool {
        matches!(
            self,
            NamedClass::CloseToConvex
                | NamedClass::QuasiConvex
                | NamedClass::Blezu
                | NamedClass::LiuK
                | NamedClass::LiuKstar
        )
    }

    /// Resolves the class to a [`ClassSpec`]. Parameters the class fixes are
    /// ignored; the Obradovic order is always `(n + 2)/(n + 1)`.
    pub fn spec(self, params: &NamedParams) -> Result<ClassSpec> {
        let NamedParams {
            n,
            sigma,
            gamma,
            beta,
        } = *params;
        let unit = |name: &str, v: f64| {
            if (0.0..1.0).contains(&v) {
                Ok(v)
            } else {
                Err(param(format!(
                    "{} requires {name} in [0, 1), got {v}",
                    self.token()
                )))
            }
        };
        let beta = || {
            beta.ok_or_else(|| param(format!("{} requires beta", self.token())))
                .and_then(|b| unit("beta", b))
        };
        match self {
            NamedClass::Starlike => ClassSpec::b(0, 0.0, unit("gamma", gamma)?),
            NamedClass::Convex => ClassSpec::b(1, 0.0, unit("gamma", gamma)?),
            NamedClass::Salagean => ClassSpec::b(n, 0.0, unit("gamma", gamma)?),
            NamedClass::Obradovic => ClassSpec::b(n, 0.0, (n as f64 + 2.0) / (n as f64 + 1.0)),
            NamedClass::LiuStar => ClassSpec::b(0, sigma, unit("gamma", gamma)?),
            NamedClass::LiuConvex => ClassSpec::b(1, sigma, unit("gamma", gamma)?),
            NamedClass::CloseToConvex => ClassSpec::k(0, 0.0, beta()?, gamma),
            NamedClass::QuasiConvex => ClassSpec::k(1, 0.0, beta()?, gamma),
            NamedClass::Blezu => ClassSpec::k(n, 0.0, beta()?, gamma),
            NamedClass::LiuK => ClassSpec::k(0, sigma, beta()?, gamma),
            NamedClass::LiuKstar => ClassSpec::k(1, sigma, beta()?, gamma),
        }
    }
}

impl fmt::Display for NamedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for NamedClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedClass::ALL
            .into_iter()
            .find(|c| c.token() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Free parameters for [`check_named`]; each class reads only the ones it
/// leaves open.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NamedParams {
    pub n: u32,
    pub sigma: f64,
    pub gamma: f64,
    pub beta: Option<f64>,
}

/// Dispatches a named subclass to [`check_b`] or [`check_k`].
pub fn check_named(
    f: &NormalizedSeries,
    witness: Option<&NormalizedSeries>,
    class: NamedClass,
    params: &NamedParams,
    grid: &DiskGrid,
) -> Result<MembershipReport> {
    let spec = class.spec(params)?;
    if class.needs_witness() {
        let g = witness.ok_or_else(|| param(format!("{class} requires a witness")))?;
        check_k(f, g, &spec, grid)
    } else {
        check_b(f, &spec, grid)
    }
}

/// A named-class check with its witness report folded into one verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassCheck {
    pub class: NamedClass,
    pub spec: ClassSpec,
    /// `Member` only when the subject and (if any) the witness are members;
    /// `NotMember` as soon as either is a non-member.
    pub verdict: Verdict,
    pub subject: MembershipReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MembershipReport>,
}

/// Like [`check_named`], but a witness outside its class yields a
/// `NotMember` verdict for the pair instead of an error.
pub fn check_class(
    f: &NormalizedSeries,
    witness: Option<&NormalizedSeries>,
    class: NamedClass,
    params: &NamedParams,
    grid: &DiskGrid,
) -> Result<ClassCheck> {
    let spec = class.spec(params)?;
    let (subject, witness) = if class.needs_witness() {
        let g = witness.ok_or_else(|| param(format!("{class} requires a witness")))?;
        let w = check_b(g, &spec.witness_class(), grid)?;
        (check_k_ratio(f, g, &spec, grid)?, Some(w))
    } else {
        (check_b(f, &spec, grid)?, None)
    };
    let verdicts = [Some(subject.verdict), witness.as_ref().map(|w| w.verdict)];
    let verdict = if verdicts.contains(&Some(Verdict::NotMember)) {
        Verdict::NotMember
    } else if verdicts.contains(&Some(Verdict::Inconclusive)) {
        Verdict::Inconclusive
    } else {
        Verdict::Member
    };
    Ok(ClassCheck {
        class,
        spec,
        verdict,
        subject,
        witness,
    })
}

/// One sample of a ratio field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub r: f64,
    pub theta: f64,
    pub re: f64,
}

/// `Re num/den` at every grid point in flat order; points with a vanishing
/// denominator are omitted.
pub fn ratio_field(
    num: &TruncatedSeries,
    den: &TruncatedSeries,
    grid: &DiskGrid,
) -> Result<Vec<FieldSample>> {
    grid.validate()?;
    let sampler = grid.sampler();
    let nums = sampler.evaluate(num);
    let dens = sampler.evaluate(den);
    Ok(nums
        .iter()
        .zip(&dens)
        .enumerate()
        .filter(|(_, (_, b))| b.norm() >= DENOMINATOR_FLOOR)
        .map(|(idx, (a, b))| FieldSample {
            r: grid.radius(idx / grid.n_angles),
            theta: grid.angle(idx % grid.n_angles),
            re: (a / b).re,
        })
        .collect())
}

/// The ratio field that decides membership of `f` in `spec`'s class.
pub fn class_ratio_field(
    f: &NormalizedSeries,
    witness: Option<&NormalizedSeries>,
    spec: &ClassSpec,
    grid: &DiskGrid,
) -> Result<Vec<FieldSample>> {
    let num = composite_l(f, spec.n + 1, spec.sigma);
    let den = if spec.is_k_class() {
        let g = witness.ok_or_else(|| param("K-class field requires a witness"))?;
        composite_l(g, spec.n, spec.sigma)
    } else {
        composite_l(f, spec.n, spec.sigma)
    };
    ratio_field(&num, &den, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::salagean;
    use crate::zoo::{halfplane, koebe_general};

    fn grid(r_max: f64) -> DiskGrid {
        DiskGrid::new(r_max, 24, 256).unwrap()
    }

    #[test]
    fn relation_rules() {
        assert_eq!(Relation::for_threshold(0.0).unwrap(), Relation::GreaterThan);
        assert_eq!(
            Relation::for_threshold(0.99).unwrap(),
            Relation::GreaterThan
        );
        assert_eq!(Relation::for_threshold(1.5).unwrap(), Relation::LessThan);
        assert!(Relation::for_threshold(1.0).is_err());
        assert!(Relation::for_threshold(-0.2).is_err());
        assert!(ClassSpec::k(0, 0.0, 0.5, 1.5).is_err());
        let k = ClassSpec::k(0, 0.0, 2.0, 0.5).unwrap();
        assert_eq!(k.relation_beta(), Some(Relation::LessThan));
        assert_eq!(k.relation_gamma(), Relation::GreaterThan);
    }

    #[test]
    fn verdict_bands() {
        assert_eq!(Verdict::from_margin(0.1, 0.05), Verdict::Member);
        assert_eq!(Verdict::from_margin(-0.1, 0.05), Verdict::NotMember);
        assert_eq!(Verdict::from_margin(0.01, 0.05), Verdict::Inconclusive);
        assert_eq!(Verdict::from_margin(0.0, 0.0), Verdict::Inconclusive);
    }

    #[test]
    fn extremal_ratio_examples() {
        let k = koebe_general(0.0, 400).unwrap();
        for direction in [Direction::Min, Direction::Max] {
            let e = extremal_real_ratio(&k, &k, &grid(0.9), direction).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12);
        }

        let e = extremal_real_ratio(&salagean(&k, 1), &k, &grid(0.9), Direction::Min).unwrap();
        assert!((e.value - 0.1 / 1.9).abs() < 1e-9, "{}", e.value);
        assert!((e.point - Complex64::new(-0.9, 0.0)).norm() < 1e-12);

        let h = halfplane(400);
        let e = extremal_real_ratio(&salagean(&h, 1), &h, &grid(0.9), Direction::Min).unwrap();
        assert!((e.value - 1.0 / 1.9).abs() < 1e-9);
    }

    #[test]
    fn extremal_ratio_degenerate_denominator() {
        let f = NormalizedSeries::identity(4);
        let bad = TruncatedSeries::zero(4);
        assert_eq!(
            extremal_real_ratio(&f, &bad, &grid(0.5), Direction::Min).unwrap_err(),
            Error::DivisionImpossible
        );
    }

    #[test]
    fn check_b_on_identity() {
        let z = NormalizedSeries::identity(64);
        for (n, sigma, gamma) in [(0, 0.0, 0.0), (2, 1.5, 0.3), (1, -1.0, 0.9)] {
            let r = check_b(
                &z,
                &ClassSpec::b(n, sigma, gamma).unwrap(),
                &DiskGrid::default(),
            )
            .unwrap();
            assert_eq!(r.verdict, Verdict::Member);
            assert!((r.margin - (1.0 - gamma)).abs() < 1e-15);
            assert_eq!(r.truncation_bound, 0.0);
        }
        for n in 0..4 {
            let gamma = (n as f64 + 2.0) / (n as f64 + 1.0);
            let r = check_b(
                &z,
                &ClassSpec::b(n, 0.0, gamma).unwrap(),
                &DiskGrid::default(),
            )
            .unwrap();
            assert_eq!(r.verdict, Verdict::Member);
            assert!((r.margin - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn check_b_extremal_koebe() {
        for gamma in [0.0, 0.25, 0.5, 0.75] {
            let f = koebe_general(gamma, 512).unwrap();
            let r = 0.9;
            let report = check_b(&f, &ClassSpec::b(0, 0.0, gamma).unwrap(), &grid(r)).unwrap();
            let oracle = (1.0 - (1.0 - 2.0 * gamma) * r) / (1.0 + r) - gamma;
            assert!((report.margin - oracle).abs() < 1e-6 + report.truncation_bound);
            assert_eq!(report.verdict, Verdict::Member);
        }
    }

    #[test]
    fn check_b_rejects_k_spec() {
        let z = NormalizedSeries::identity(8);
        let spec = ClassSpec::k(0, 0.0, 0.5, 0.0).unwrap();
        assert!(check_b(&z, &spec, &DiskGrid::default()).is_err());
    }

    #[test]
    fn check_k_examples() {
        let z = NormalizedSeries::identity(64);
        let spec = ClassSpec::k(0, 0.0, 0.4, 0.0).unwrap();
        let r = check_k(&z, &z, &spec, &DiskGrid::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Member);
        assert!((r.margin - 0.6).abs() < 1e-15);

        let k = koebe_general(0.0, 400).unwrap();
        let spec = ClassSpec::k(0, 0.0, 0.0, 0.0).unwrap();
        let r = check_k(&k, &k, &spec, &grid(0.9)).unwrap();
        assert_eq!(r.verdict, Verdict::Member);

        // (z k')/(z/(1 - z)) = (1 + z)/(1 - z)^2, minimized over the same
        // grid in closed form.
        let g = koebe_general(0.5, 400).unwrap();
        let spec = ClassSpec::k(0, 0.0, 0.9, 0.0).unwrap();
        let disk = grid(0.9);
        let r = check_k(&k, &g, &spec, &disk).unwrap();
        assert_eq!(r.verdict, Verdict::NotMember);
        let one = Complex64::new(1.0, 0.0);
        let oracle = disk
            .points()
            .map(|z| ((one + z) / ((one - z) * (one - z))).re)
            .fold(f64::INFINITY, f64::min)
            - 0.9;
        assert!(oracle < 0.1 / (1.9 * 1.9) - 0.9);
        assert!(
            (r.margin - oracle).abs() < 1e-9 * oracle.abs(),
            "{} {}",
            r.margin,
            oracle
        );
        assert!(r.margin < -r.truncation_bound);
    }

    #[test]
    fn check_k_rejects_bad_witness() {
        // The Koebe function is not convex, so it cannot witness quasi-convexity.
        let k = koebe_general(0.0, 400).unwrap();
        let spec = ClassSpec::k(1, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            check_k(&k, &k, &spec, &grid(0.9)),
            Err(Error::WitnessNotInClass(_))
        ));
    }

    #[test]
    fn named_dispatch() {
        let k = koebe_general(0.0, 400).unwrap();
        let g = grid(0.9);
        let named =
            check_named(&k, None, NamedClass::Starlike, &NamedParams::default(), &g).unwrap();
        let direct = check_b(&k, &ClassSpec::b(0, 0.0, 0.0).unwrap(), &g).unwrap();
        assert_eq!(named, direct);

        let h = halfplane(400);
        let r = check_named(&h, None, NamedClass::Convex, &NamedParams::default(), &g).unwrap();
        assert_eq!(r.verdict, Verdict::Member);
        // 1 + z h''/h' = (1 + z)/(1 - z) for h = z/(1 - z).
        assert!((r.margin - 0.1 / 1.9).abs() < 1e-9);

        let params = NamedParams {
            n: 0,
            sigma: 0.5,
            gamma: 0.0,
            beta: Some(0.2),
        };
        let z = NormalizedSeries::identity(64);
        let named = check_named(&z, Some(&z), NamedClass::LiuKstar, &params, &g).unwrap();
        let direct = check_k(&z, &z, &ClassSpec::k(1, 0.5, 0.2, 0.0).unwrap(), &g).unwrap();
        assert_eq!(named, direct);

        let r = check_named(
            &z,
            None,
            NamedClass::Obradovic,
            &NamedParams {
                n: 1,
                ..Default::default()
            },
            &g,
        )
        .unwrap();
        assert!((r.margin - 0.5).abs() < 1e-15);

        assert!(check_named(&z, None, NamedClass::CloseToConvex, &params, &g).is_err());
        assert!("spiral".parse::<NamedClass>().is_err());
        for class in NamedClass::ALL {
            assert_eq!(class.token().parse::<NamedClass>().unwrap(), class);
        }
    }

    #[test]
    fn named_classes_enforce_unit_parameters() {
        let p = NamedParams {
            gamma: 1.5,
            ..Default::default()
        };
        assert!(NamedClass::Starlike.spec(&p).is_err());
        let p = NamedParams {
            beta: Some(1.5),
            ..Default::default()
        };
        assert!(NamedClass::CloseToConvex.spec(&p).is_err());
    }

    #[test]
    fn field_has_one_row_per_sample() {
        let z = NormalizedSeries::identity(16);
        let g = DiskGrid::new(0.8, 6, 10).unwrap();
        let field = class_ratio_field(&z, None, &ClassSpec::b(0, 0.0, 0.0).unwrap(), &g).unwrap();
        assert_eq!(field.len(), 60);
        assert!(field.iter().all(|s| (s.re - 1.0).abs() < 1e-15));
    }
}
