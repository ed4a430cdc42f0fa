//! Numerical test harness for the inclusion theorems.
//!
//! Each theorem has the form "premise class contains the subject, hence the
//! conclusion class contains it (or its Bernardi transform)". A case is
//! evaluated by checking both sides on a grid:
//!
//! * `Violated` needs a solid premise member and a solid conclusion
//!   non-member, both beyond twice the truncation estimate;
//! * `Confirmed` needs a `Member` verdict on both sides;
//! * anything else is `Inconclusive`.
//!
//! Subjects are built to sit in the premise class by construction, so a
//! `Violated` case points at a bug (or a false theorem) rather than at a
//! poorly chosen input. The battery dilates most subjects, `f(rho z)/rho`,
//! which keeps every class membership and moves the boundary singularities
//! away from the grid.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::grid::DiskGrid;
use crate::membership::{check_b, check_k_ratio, ClassSpec, MembershipReport, Verdict};
use crate::operators::{bernardi, composite_l};
use crate::series::{NormalizedSeries, TruncatedSeries};
use crate::zoo::{close_to_convex_from, herglotz_p, lift_to_b, starlike_from_p, HerglotzSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// `K_{n+1}^sigma(beta, gamma)` inside `K_n^sigma(beta, gamma)`.
    T1,
    /// `K_n^sigma(beta, gamma)` inside `K_n^{sigma+1}(beta, gamma)`.
    T2,
    /// `B_{n+1}^sigma(gamma)` inside `B_n^sigma(gamma)`.
    T3,
    /// `B_n^sigma(gamma)` inside `B_n^{sigma+1}(gamma)`.
    T4,
    /// `F_c` maps `B_n^sigma(gamma)` into itself.
    T5,
    /// `F_c` maps `K_n^sigma(beta, gamma)` into itself.
    T6,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::T1,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::T6,
    ];

    pub fn is_k_theorem(self) -> bool {
        matches!(self, Theorem::T1 | Theorem::T2 | Theorem::T6)
    }

    pub fn uses_bernardi(self) -> bool {
        matches!(self, Theorem::T5 | Theorem::T6)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Confirmed,
    Violated,
    Inconclusive,
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStatus::Confirmed => "confirmed",
            CaseStatus::Violated => "violated",
            CaseStatus::Inconclusive => "inconclusive",
        })
    }
}

/// Parameters of a case. `n` and `sigma` are those of the conclusion
/// class for T1 and T3, and of the premise class otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    pub n: u32,
    pub sigma: f64,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl CaseParams {
    pub fn b(n: u32, sigma: f64, gamma: f64) -> Self {
        Self {
            n,
            sigma,
            gamma,
            beta: None,
            c: None,
        }
    }

    pub fn k(n: u32, sigma: f64, beta: f64, gamma: f64) -> Self {
        Self {
            n,
            sigma,
            gamma,
            beta: Some(beta),
            c: None,
        }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c: Some(c), ..self }
    }

    /// A `K` case with `beta > 1` lies outside the ranges the theorems are
    /// stated for.
    pub fn is_exploratory(&self) -> bool {
        self.beta.is_some_and(|b| b > 1.0)
    }

    fn class(&self, n: u32, sigma: f64) -> Result<ClassSpec> {
        match self.beta {
            Some(beta) => ClassSpec::k(n, sigma, beta, self.gamma),
            None => ClassSpec::b(n, sigma, self.gamma),
        }
    }

    /// Premise and conclusion classes for `theorem`.
    fn classes(&self, theorem: Theorem) -> Result<(ClassSpec, ClassSpec)> {
        let (n, s) = (self.n, self.sigma);
        let pair = match theorem {
            Theorem::T1 | Theorem::T3 => (self.class(n + 1, s)?, self.class(n, s)?),
            Theorem::T2 | Theorem::T4 => (self.class(n, s)?, self.class(n, s + 1.0)?),
            Theorem::T5 | Theorem::T6 => {
                let same = self.class(n, s)?;
                (same, same)
            }
        };
        Ok(pair)
    }

    fn validate(&self, theorem: Theorem) -> Result<()> {
        if theorem.is_k_theorem() != self.beta.is_some() {
            return Err(param(format!(
                "{theorem} needs {} parameters",
                kind(theorem)
            )));
        }
        if theorem.uses_bernardi() {
            let c = self
                .c
                .ok_or_else(|| param(format!("{theorem} needs a value of c")))?;
            check_bernardi_parameter(c, self.gamma)?;
        }
        self.classes(theorem).map(|_| ())
    }
}

fn kind(theorem: Theorem) -> &'static str {
    if theorem.is_k_theorem() {
        "K-class"
    } else {
        "B-class"
    }
}

/// `c > -1` and `c + gamma > 0`.
pub fn check_bernardi_parameter(c: f64, gamma: f64) -> Result<()> {
    if !(c.is_finite() && c > -1.0) {
        return Err(param(format!("c = {c} must exceed -1")));
    }
    if (c + gamma).is_nan() || c + gamma <= 0.0 {
        return Err(param(format!("c + gamma = {} must be positive", c + gamma)));
    }
    Ok(())
}

/// A subject function with its optional witness.
#[derive(Clone, Debug)]
pub struct Subject {
    pub name: String,
    pub f: NormalizedSeries,
    pub g: Option<NormalizedSeries>,
}

impl Subject {
    pub fn b(name: impl Into<String>, f: NormalizedSeries) -> Self {
        Self {
            name: name.into(),
            f,
            g: None,
        }
    }

    pub fn k(name: impl Into<String>, f: NormalizedSeries, g: NormalizedSeries) -> Self {
        Self {
            name: name.into(),
            f,
            g: Some(g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub subject: String,
    pub params: CaseParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub premise: Option<MembershipReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<MembershipReport>,
    /// Witness checks against the premise and conclusion witness classes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReports>,
    pub status: CaseStatus,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub exploratory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReports {
    pub premise: MembershipReport,
    pub conclusion: MembershipReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub confirmed: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub exploratory: usize,
}

impl Summary {
    fn record(&mut self, case: &CaseReport) {
        self.cases += 1;
        match case.status {
            CaseStatus::Confirmed => self.confirmed += 1,
            CaseStatus::Violated => self.violated += 1,
            CaseStatus::Inconclusive => self.inconclusive += 1,
        }
        if case.exploratory {
            self.exploratory += 1;
        }
    }

    fn status(&self) -> CaseStatus {
        if self.violated > 0 {
            CaseStatus::Violated
        } else if self.cases > 0 && self.confirmed == self.cases {
            CaseStatus::Confirmed
        } else {
            CaseStatus::Inconclusive
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub theorem: Theorem,
    pub grid: DiskGrid,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
    pub status: CaseStatus,
}

impl SuiteReport {
    fn new(theorem: Theorem, grid: &DiskGrid, order: usize, seed: Option<u64>) -> Self {
        Self {
            theorem,
            grid: *grid,
            order,
            seed,
            cases: Vec::new(),
            summary: Summary::default(),
            status: CaseStatus::Inconclusive,
        }
    }

    fn push(&mut self, case: CaseReport) {
        self.summary.record(&case);
        self.status = self.summary.status();
        self.cases.push(case);
    }

    pub fn violated(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases
            .iter()
            .filter(|c| c.status == CaseStatus::Violated)
    }
}

/// Checks one subject against one theorem.
pub fn evaluate_case(
    theorem: Theorem,
    subject: &Subject,
    params: &CaseParams,
    grid: &DiskGrid,
) -> Result<CaseReport> {
    params.validate(theorem)?;
    if theorem.is_k_theorem() && subject.g.is_none() {
        return Err(param(format!(
            "{theorem} subject {} has no witness",
            subject.name
        )));
    }
    let mut case = CaseReport {
        subject: subject.name.clone(),
        params: *params,
        premise: None,
        conclusion: None,
        witness: None,
        status: CaseStatus::Inconclusive,
        exploratory: params.is_exploratory(),
        note: None,
    };
    match measure(theorem, subject, params, grid) {
        Ok((premise, conclusion, witness)) => {
            case.status = classify(&premise, &conclusion, witness.as_ref());
            case.premise = Some(premise);
            case.conclusion = Some(conclusion);
            case.witness = witness;
        }
        // A degenerate sample field leaves the case undecided.
        Err(e) => case.note = Some(e.to_string()),
    }
    Ok(case)
}

type Measured = (MembershipReport, MembershipReport, Option<WitnessReports>);

fn measure(
    theorem: Theorem,
    subject: &Subject,
    params: &CaseParams,
    grid: &DiskGrid,
) -> Result<Measured> {
    let (premise_class, conclusion_class) = params.classes(theorem)?;
    let f = &subject.f;
    let mapped = match params.c {
        Some(c) if theorem.uses_bernardi() => Some(bernardi(f, c)?),
        _ => None,
    };
    let f_after = mapped.as_ref().unwrap_or(f);
    let Some(g) = subject.g.as_ref() else {
        let premise = check_b(f, &premise_class, grid)?;
        let conclusion = check_b(f_after, &conclusion_class, grid)?;
        return Ok((premise, conclusion, None));
    };
    let g_after = match params.c {
        Some(c) if theorem.uses_bernardi() => bernardi(g, c)?,
        _ => g.clone(),
    };
    let witness = WitnessReports {
        premise: check_b(g, &premise_class.witness_class(), grid)?,
        conclusion: check_b(&g_after, &conclusion_class.witness_class(), grid)?,
    };
    let premise = check_k_ratio(f, g, &premise_class, grid)?;
    let conclusion = check_k_ratio(f_after, &g_after, &conclusion_class, grid)?;
    Ok((premise, conclusion, Some(witness)))
}

fn classify(
    premise: &MembershipReport,
    conclusion: &MembershipReport,
    witness: Option<&WitnessReports>,
) -> CaseStatus {
    let (witness_solid, witness_ok) = match witness {
        Some(w) => (
            w.premise.is_solid_member(),
            w.premise.verdict == Verdict::Member && w.conclusion.verdict == Verdict::Member,
        ),
        None => (true, true),
    };
    if witness_solid && premise.is_solid_member() && conclusion.is_solid_non_member() {
        CaseStatus::Violated
    } else if witness_ok
        && premise.verdict == Verdict::Member
        && conclusion.verdict == Verdict::Member
    {
        CaseStatus::Confirmed
    } else {
        CaseStatus::Inconclusive
    }
}

/// Runs `theorem` on caller-supplied subjects with fixed parameters.
pub fn run_suite(
    theorem: Theorem,
    subjects: &[Subject],
    params: &CaseParams,
    grid: &DiskGrid,
) -> Result<SuiteReport> {
    grid.validate()?;
    params.validate(theorem)?;
    let order = subjects.iter().map(|s| s.f.order()).max().unwrap_or(0);
    let mut report = SuiteReport::new(theorem, grid, order, None);
    for subject in subjects {
        report.push(evaluate_case(theorem, subject, params, grid)?);
    }
    Ok(report)
}

/// T3 and T4 over `B`-class subjects.
pub fn run_t3_t4(
    subjects: &[Subject],
    n: u32,
    sigma: f64,
    gamma: f64,
    grid: &DiskGrid,
) -> Result<(SuiteReport, SuiteReport)> {
    let params = CaseParams::b(n, sigma, gamma);
    Ok((
        run_suite(Theorem::T3, subjects, &params, grid)?,
        run_suite(Theorem::T4, subjects, &params, grid)?,
    ))
}

/// T1 and T2 over `K`-class subjects, each carrying its witness.
pub fn run_t1_t2(
    subjects: &[Subject],
    n: u32,
    sigma: f64,
    beta: f64,
    gamma: f64,
    grid: &DiskGrid,
) -> Result<(SuiteReport, SuiteReport)> {
    let params = CaseParams::k(n, sigma, beta, gamma);
    Ok((
        run_suite(Theorem::T1, subjects, &params, grid)?,
        run_suite(Theorem::T2, subjects, &params, grid)?,
    ))
}

/// T5 for every `c` (subjects without witness) and T6 (subjects with one).
/// Invalid `c` values are rejected before anything is evaluated.
#[allow(clippy::too_many_arguments)]
pub fn run_t5_t6(
    b_subjects: &[Subject],
    k_subjects: &[Subject],
    n: u32,
    sigma: f64,
    beta: f64,
    gamma: f64,
    c_values: &[f64],
    grid: &DiskGrid,
) -> Result<(SuiteReport, SuiteReport)> {
    for &c in c_values {
        check_bernardi_parameter(c, gamma)?;
    }
    let order = b_subjects
        .iter()
        .chain(k_subjects)
        .map(|s| s.f.order())
        .max()
        .unwrap_or(0);
    let mut t5 = SuiteReport::new(Theorem::T5, grid, order, None);
    let mut t6 = SuiteReport::new(Theorem::T6, grid, order, None);
    for &c in c_values {
        let pb = CaseParams::b(n, sigma, gamma).with_c(c);
        let pk = CaseParams::k(n, sigma, beta, gamma).with_c(c);
        for s in b_subjects {
            t5.push(evaluate_case(Theorem::T5, s, &pb, grid)?);
        }
        for s in k_subjects {
            t6.push(evaluate_case(Theorem::T6, s, &pk, grid)?);
        }
    }
    Ok((t5, t6))
}

/// How a constructed subject is shaped.
#[derive(Clone, Debug)]
struct Shape {
    label: String,
    p: TruncatedSeries,
    rho: f64,
}

impl Shape {
    fn new(label: impl Into<String>, p: TruncatedSeries, rho: f64) -> Self {
        Self {
            label: label.into(),
            p,
            rho,
        }
    }
}

/// `f` in `B_n^sigma(gamma)` with `L_{n+1} f / L_n f = gamma + (1 - gamma) p(rho z)`.
pub fn b_member(
    p: &TruncatedSeries,
    rho: f64,
    n: u32,
    sigma: f64,
    gamma: f64,
) -> Result<NormalizedSeries> {
    let h = starlike_from_p(p, gamma)?.dilate(rho)?;
    Ok(lift_to_b(&h, n, sigma))
}

/// `(f, g)` with `g` in `B_n^sigma(gamma)` and
/// `L_{n+1} f / L_n g = beta + (1 - beta) p_f(rho_f z)`.
#[allow(clippy::too_many_arguments)]
pub fn k_member(
    p_f: &TruncatedSeries,
    rho_f: f64,
    p_g: &TruncatedSeries,
    rho_g: f64,
    n: u32,
    sigma: f64,
    beta: f64,
    gamma: f64,
) -> Result<(NormalizedSeries, NormalizedSeries)> {
    let g = b_member(p_g, rho_g, n, sigma, gamma)?;
    let base = composite_l(&g, n, sigma);
    let phi = close_to_convex_from(&base, &p_f.dilate_argument(rho_f), beta)?;
    Ok((lift_to_b(&phi, n, sigma), g))
}

fn extremal_p(order: usize) -> TruncatedSeries {
    let spec = HerglotzSpec::new(vec![1.0.into()], vec![1.0]).expect("unit point");
    herglotz_p(&spec, order)
}

fn shapes(order: usize, seed: u64) -> Vec<Shape> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        Shape::new("extremal", extremal_p(order), 1.0),
        Shape::new("extremal@0.7", extremal_p(order), 0.7),
    ];
    for (i, rho) in [0.75, 0.6].into_iter().enumerate() {
        let spec = HerglotzSpec::random_with(&mut rng);
        out.push(Shape::new(
            format!("herglotz#{i}@{rho}"),
            herglotz_p(&spec, order),
            rho,
        ));
    }
    out
}

/// Premise indices for a theorem given the case parameters.
fn premise_indices(theorem: Theorem, params: &CaseParams) -> (u32, f64) {
    match theorem {
        Theorem::T1 | Theorem::T3 => (params.n + 1, params.sigma),
        _ => (params.n, params.sigma),
    }
}

fn build_subject(
    theorem: Theorem,
    params: &CaseParams,
    f_shape: &Shape,
    g_shape: &Shape,
) -> Result<Subject> {
    let (n, sigma) = premise_indices(theorem, params);
    match params.beta {
        None => {
            let f = b_member(&f_shape.p, f_shape.rho, n, sigma, params.gamma)?;
            Ok(Subject::b(f_shape.label.clone(), f))
        }
        Some(beta) => {
            let (f, g) = k_member(
                &f_shape.p,
                f_shape.rho,
                &g_shape.p,
                g_shape.rho,
                n,
                sigma,
                beta,
                params.gamma,
            )?;
            let name = format!("{}/{}", f_shape.label, g_shape.label);
            Ok(Subject::k(name, f, g))
        }
    }
}

/// Named parameter settings: the classical special cases of the
/// two-parameter families, plus a few off-axis ones.
fn battery_params(theorem: Theorem) -> Vec<(&'static str, CaseParams)> {
    let mut list = if theorem.is_k_theorem() {
        vec![
            ("close_to_convex", CaseParams::k(0, 0.0, 0.0, 0.0)),
            ("quasi_convex", CaseParams::k(1, 0.0, 0.0, 0.0)),
            ("blezu", CaseParams::k(2, 0.0, 0.4, 0.3)),
            ("liu_k", CaseParams::k(0, 1.0, 0.2, 0.5)),
            ("liu_kstar", CaseParams::k(1, 0.5, 0.0, 0.25)),
            ("mixed", CaseParams::k(3, -1.5, 0.7, 0.1)),
        ]
    } else {
        vec![
            ("starlike", CaseParams::b(0, 0.0, 0.0)),
            ("convex", CaseParams::b(1, 0.0, 0.5)),
            ("salagean", CaseParams::b(2, 0.0, 0.3)),
            ("obradovic", CaseParams::b(1, 0.0, 1.5)),
            ("liu_star", CaseParams::b(0, 1.5, 0.2)),
            ("liu_convex", CaseParams::b(1, -1.0, 0.0)),
            ("above_one", CaseParams::b(3, 2.0, 2.5)),
        ]
    };
    if theorem.uses_bernardi() {
        let cs = [0.0, 1.0, 3.0, -0.5];
        list = list
            .into_iter()
            .enumerate()
            .map(|(i, (name, p))| {
                // Pick a c that respects c + gamma > 0.
                let c = cs[i % cs.len()];
                let c = if c + p.gamma > 0.0 { c } else { 1.0 };
                (name, p.with_c(c))
            })
            .collect();
    }
    list
}

/// The fixed case list for one theorem: every named parameter setting
/// against several constructed subjects plus the identity.
pub fn battery(theorem: Theorem, order: usize, seed: u64) -> Result<Vec<(Subject, CaseParams)>> {
    let shapes = shapes(order, seed ^ theorem as u64);
    let mut cases = Vec::new();
    for (name, params) in battery_params(theorem) {
        let identity = NormalizedSeries::identity(order);
        let id_subject = match params.beta {
            Some(_) => Subject::k(format!("{name}:identity"), identity.clone(), identity),
            None => Subject::b(format!("{name}:identity"), identity),
        };
        cases.push((id_subject, params));
        for (i, shape) in shapes.iter().enumerate() {
            // The undilated shape is never a witness.
            let partner = &shapes[i % (shapes.len() - 1) + 1];
            let mut subject = build_subject(theorem, &params, shape, partner)?;
            subject.name = format!("{name}:{}", subject.name);
            cases.push((subject, params));
        }
    }
    Ok(cases)
}

/// Runs the battery for one theorem.
pub fn run_battery(
    theorem: Theorem,
    order: usize,
    grid: &DiskGrid,
    seed: u64,
) -> Result<SuiteReport> {
    grid.validate()?;
    let mut report = SuiteReport::new(theorem, grid, order, Some(seed));
    for (subject, params) in battery(theorem, order, seed)? {
        report.push(evaluate_case(theorem, &subject, &params, grid)?);
    }
    Ok(report)
}

/// Runs `theorem` with fixed parameters on the identity and the battery's
/// constructed subjects.
pub fn run_with_params(
    theorem: Theorem,
    params: &CaseParams,
    order: usize,
    grid: &DiskGrid,
    seed: u64,
) -> Result<SuiteReport> {
    grid.validate()?;
    params.validate(theorem)?;
    let shapes = shapes(order, seed ^ theorem as u64);
    let identity = NormalizedSeries::identity(order);
    let mut subjects = vec![match params.beta {
        Some(_) => Subject::k("identity", identity.clone(), identity),
        None => Subject::b("identity", identity),
    }];
    for (i, shape) in shapes.iter().enumerate() {
        let partner = &shapes[i % (shapes.len() - 1) + 1];
        subjects.push(build_subject(theorem, params, shape, partner)?);
    }
    let mut report = SuiteReport::new(theorem, grid, order, Some(seed));
    for subject in &subjects {
        report.push(evaluate_case(theorem, subject, params, grid)?);
    }
    Ok(report)
}

/// Runs every theorem's battery.
pub fn run_all(order: usize, grid: &DiskGrid, seed: u64) -> Result<Vec<SuiteReport>> {
    Theorem::ALL
        .into_iter()
        .map(|t| run_battery(t, order, grid, seed))
        .collect()
}

fn random_shape(rng: &mut ChaCha8Rng, order: usize, label: &str) -> Shape {
    let spec = HerglotzSpec::random_with(rng);
    let rho = if rng.gen_bool(0.1) {
        1.0
    } else {
        rng.gen_range(0.3..0.95)
    };
    Shape::new(format!("{label}@{rho:.3}"), herglotz_p(&spec, order), rho)
}

fn random_params(rng: &mut ChaCha8Rng, theorem: Theorem) -> CaseParams {
    let n = rng.gen_range(0..=4);
    let sigma = rng.gen_range(-2.0..=3.0);
    let gamma = if !theorem.is_k_theorem() && rng.gen_bool(0.2) {
        rng.gen_range(1.05..=3.0)
    } else {
        rng.gen_range(0.0..0.95)
    };
    let mut params = if theorem.is_k_theorem() {
        let beta = if rng.gen_bool(0.15) {
            rng.gen_range(1.05..=3.0)
        } else {
            rng.gen_range(0.0..0.95)
        };
        CaseParams::k(n, sigma, beta, gamma)
    } else {
        CaseParams::b(n, sigma, gamma)
    };
    if theorem.uses_bernardi() {
        let low = (-gamma).max(-1.0) + 1e-3;
        params = params.with_c(rng.gen_range(low..=5.0));
    }
    params
}

/// Outcome of a randomized search: counts over all trials, with only the
/// violating cases kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub theorem: Theorem,
    pub seed: u64,
    pub trials: usize,
    pub grid: DiskGrid,
    pub order: usize,
    pub summary: Summary,
    pub violations: Vec<CaseReport>,
}

/// Random parameters and constructed subjects, deterministic in `seed`.
pub fn counterexample_search(
    seed: u64,
    trials: usize,
    theorem: Theorem,
    order: usize,
    grid: &DiskGrid,
) -> Result<SearchReport> {
    if trials == 0 {
        return Err(param("search needs at least one trial"));
    }
    grid.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((theorem as u64 + 1) << 32));
    let mut summary = Summary::default();
    let mut violations = Vec::new();
    for trial in 0..trials {
        let params = random_params(&mut rng, theorem);
        let f_shape = random_shape(&mut rng, order, "f");
        let g_shape = random_shape(&mut rng, order, "g");
        let mut subject = build_subject(theorem, &params, &f_shape, &g_shape)?;
        subject.name = format!("trial{trial}:{}", subject.name);
        let case = evaluate_case(theorem, &subject, &params, grid)?;
        summary.record(&case);
        if case.status == CaseStatus::Violated {
            violations.push(case);
        }
    }
    Ok(SearchReport {
        theorem,
        seed,
        trials,
        grid: *grid,
        order,
        summary,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> DiskGrid {
        DiskGrid::new(0.95, 12, 128).unwrap()
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
        assert!("T7".parse::<Theorem>().is_err());
    }

    #[test]
    fn bernardi_parameter_rejected_before_work() {
        let f = Subject::b("id", NormalizedSeries::identity(8));
        let err = run_t5_t6(
            std::slice::from_ref(&f),
            &[],
            0,
            0.0,
            0.0,
            0.0,
            &[-1.0],
            &grid(),
        );
        assert!(matches!(err, Err(Error::Parameter(_))));
        let err = run_t5_t6(&[f], &[], 0, 0.0, 0.0, 0.2, &[-0.3], &grid());
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn constructed_b_member_has_expected_ratio() {
        let p = extremal_p(64);
        let f = b_member(&p, 0.5, 2, 1.0, 0.3).unwrap();
        // L_3 f / L_2 f = 0.3 + 0.7 (1 + z/2)/(1 - z/2).
        let z = num_complex::Complex64::new(0.2, -0.4);
        let ratio =
            composite_l(&f, 3, 1.0).eval(z).unwrap() / composite_l(&f, 2, 1.0).eval(z).unwrap();
        let w = z * 0.5;
        let expected = 0.3 + 0.7 * (1.0 + w) / (1.0 - w);
        assert!((ratio - expected).norm() < 1e-12);
    }

    #[test]
    fn constructed_k_member_has_expected_ratio() {
        let p = extremal_p(64);
        let (f, g) = k_member(&p, 0.5, &p, 0.6, 1, -0.5, 0.4, 0.2).unwrap();
        let z = num_complex::Complex64::new(-0.3, 0.1);
        let ratio =
            composite_l(&f, 2, -0.5).eval(z).unwrap() / composite_l(&g, 1, -0.5).eval(z).unwrap();
        let w = z * 0.5;
        let expected = 0.4 + 0.6 * (1.0 + w) / (1.0 - w);
        assert!((ratio - expected).norm() < 1e-12);
    }

    #[test]
    fn classify_rules() {
        let g = grid();
        let rep = |margin: f64, tb: f64| MembershipReport {
            verdict: Verdict::from_margin(margin, tb),
            margin,
            argext: Point { re: 0.0, im: 0.0 },
            truncation_bound: tb,
            grid: g,
            skipped: 0,
        };
        use crate::membership::Point;
        assert_eq!(
            classify(&rep(0.1, 0.0), &rep(0.1, 0.0), None),
            CaseStatus::Confirmed
        );
        assert_eq!(
            classify(&rep(0.1, 0.0), &rep(-0.1, 0.0), None),
            CaseStatus::Violated
        );
        // Not solid: the margin is inside twice the estimate.
        assert_eq!(
            classify(&rep(0.1, 0.06), &rep(-0.1, 0.0), None),
            CaseStatus::Inconclusive
        );
        assert_eq!(
            classify(&rep(-0.1, 0.0), &rep(-0.1, 0.0), None),
            CaseStatus::Inconclusive
        );
    }

    #[test]
    fn batteries_have_no_violations() {
        for t in Theorem::ALL {
            let report = run_battery(t, 64, &DiskGrid::default(), 42).unwrap();
            assert!(report.cases.len() >= 12, "{t}");
            assert_eq!(report.summary.violated, 0, "{t}");
            assert!(
                report.summary.confirmed * 2 > report.cases.len(),
                "{t}: {:?}",
                report.summary
            );
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = counterexample_search(7, 20, Theorem::T6, 64, &grid()).unwrap();
        let b = counterexample_search(7, 20, Theorem::T6, 64, &grid()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.summary.cases, 20);
        assert_eq!(a.summary.violated, 0);
    }
}
