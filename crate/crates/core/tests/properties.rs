use num_complex::Complex64;
use proptest::prelude::*;
use univalent::harness::{run_t5_t6, Subject};
use univalent::lemma_lab::{lemma_instance, AlphaField, PsiFunction};
use univalent::membership::{check_b, ClassSpec, Verdict};
use univalent::operators::{
    bernardi, composite_l, jks_integral, salagean, verify_identity_3, verify_identity_4,
    verify_identity_6,
};
use univalent::series::ratio_normalized;
use univalent::zoo::{
    herglotz_p, herglotz_starlike, koebe_general, lift_to_b, random_normalized, starlike_from_p,
    HerglotzSpec,
};
use univalent::{DiskGrid, Error, NormalizedSeries, TruncatedSeries};

fn close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> Result<(), TestCaseError> {
    let order = a.order().max(b.order());
    for k in 0..=order {
        let (x, y) = (a.coeff(k), b.coeff(k));
        let scale = 1f64.max(x.norm()).max(y.norm());
        prop_assert!((x - y).norm() <= tol * scale, "k = {k}: {x} vs {y}");
    }
    Ok(())
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn series(max_len: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(complex(), 1..max_len).prop_map(|c| TruncatedSeries::new(c).unwrap())
}

fn normalized() -> impl Strategy<Value = NormalizedSeries> {
    (any::<u64>(), 1.2..3.0f64, 8usize..80)
        .prop_map(|(seed, decay, order)| random_normalized(seed, decay, order).unwrap())
}

fn sigma() -> impl Strategy<Value = f64> {
    -2.0..3.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_and_mul_commute_and_associate(a in series(20), b in series(20), c in series(20)) {
        close(&a.add(&b), &b.add(&a), 0.0)?;
        close(&a.add(&b).add(&c), &a.add(&b.add(&c)), 1e-13)?;
        close(&a.mul(&b), &b.mul(&a), 1e-13)?;
        close(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c)), 1e-13)?;
    }

    #[test]
    fn ratio_times_denominator_is_numerator(f in normalized(), g in normalized()) {
        let q = ratio_normalized(&f, &g).unwrap();
        // The shared z cancels, so q g = f up to the order of q.
        let order = q.order();
        close(&q.mul(&g).truncate(order), &f.truncate(order), 1e-12)?;
    }

    #[test]
    fn exp_turns_sums_into_products(
        a in prop::collection::vec(complex(), 2..24),
        b in prop::collection::vec(complex(), 2..24),
    ) {
        // Constant terms zero keep the exponentials well scaled.
        let zero_const = |mut v: Vec<Complex64>| { v[0] = Complex64::new(0.0, 0.0); TruncatedSeries::new(v).unwrap() };
        let (q1, q2) = (zero_const(a), zero_const(b));
        let order = q1.order().min(q2.order());
        let lhs = q1.add(&q2).exp_series().unwrap().truncate(order);
        let rhs = q1.exp_series().unwrap().mul(&q2.exp_series().unwrap()).truncate(order);
        close(&lhs, &rhs, 1e-11)?;
    }

    #[test]
    fn eval_stays_within_tail_bound_of_closed_form(gamma in 0.0..0.95f64, r in 0.1..0.8f64, theta in 0.0..std::f64::consts::TAU) {
        let f = koebe_general(gamma, 64).unwrap();
        let z = Complex64::from_polar(r, theta);
        let exact = z * (Complex64::new(1.0, 0.0) - z).powf(-2.0 * (1.0 - gamma));
        let tail = f.tail_bound(r).unwrap();
        let err = (f.eval(z).unwrap() - exact).norm();
        prop_assert!(err <= tail + 1e-12 * exact.norm().max(1.0), "{err} > {tail}");
    }

    #[test]
    fn composite_commutes_and_composes(f in normalized(), n in 0u32..4, m in 0u32..3, s in sigma(), t in sigma()) {
        close(&composite_l(&f, n, s), &jks_integral(&salagean(&f, n), s), 1e-12)?;
        close(&salagean(&jks_integral(&f, s), n), &jks_integral(&salagean(&f, n), s), 1e-12)?;
        close(&salagean(&salagean(&f, m), n), &salagean(&f, m + n), 1e-12)?;
        close(&jks_integral(&jks_integral(&f, s), t), &jks_integral(&f, s + t), 1e-12)?;
    }

    #[test]
    fn bernardi_commutes_with_jks(f in normalized(), s in sigma(), c in -0.9..5.0f64) {
        let a = bernardi(&jks_integral(&f, s), c).unwrap();
        let b = jks_integral(&bernardi(&f, c).unwrap(), s);
        close(&a, &b, 1e-12)?;
    }

    #[test]
    fn identities_hold(f in normalized(), n in 0u32..4, s in sigma(), c in -0.9..5.0f64) {
        prop_assert!(verify_identity_3(&f, s) <= 1e-12);
        prop_assert!(verify_identity_4(&f, n, s) <= 1e-12);
        prop_assert!(verify_identity_6(&f, c).unwrap() <= 1e-12);
    }

    #[test]
    fn lift_inverts_composite(f in normalized(), n in 0u32..4, s in sigma()) {
        let back = lift_to_b(&composite_l(&f, n, s), n, s);
        close(&back, &f, 1e-15)?;
    }

    #[test]
    fn herglotz_p_has_positive_real_part(seed in any::<u64>(), r in 0.1..0.95f64) {
        let p = herglotz_p(&HerglotzSpec::random(seed), 64);
        let grid = DiskGrid::new(r, 6, 64).unwrap();
        for z in grid.points() {
            // The order-64 tail of p is at most 2 r^65 / (1 - r).
            let slack = 2.0 * r.powi(65) / (1.0 - r);
            prop_assert!(p.eval(z).unwrap().re > -slack);
        }
    }

    #[test]
    fn starlike_construction_reproduces_its_ratio(seed in any::<u64>(), gamma in 0.0..0.95f64, theta in 0.0..std::f64::consts::TAU, r in 0.0..0.9f64) {
        let p = herglotz_p(&HerglotzSpec::random(seed), 256);
        let f = starlike_from_p(&p, gamma).unwrap();
        let z = Complex64::from_polar(r.max(1e-3), theta);
        let ratio = f.z_derivative().eval(z).unwrap() / f.eval(z).unwrap();
        let expected = gamma + (1.0 - gamma) * p.eval(z).unwrap();
        prop_assert!((ratio - expected).norm() <= 1e-9, "{ratio} vs {expected}");
    }

    #[test]
    fn margin_shrinks_as_radius_grows(seed in any::<u64>(), r1 in 0.3..0.9f64, dr in 0.01..0.05f64) {
        let f = herglotz_starlike(seed, 64);
        let spec = ClassSpec::b(0, 0.0, 0.0).unwrap();
        let small = check_b(&f, &spec, &DiskGrid::new(r1, 12, 128).unwrap()).unwrap();
        let large = check_b(&f, &spec, &DiskGrid::new(r1 + dr, 12, 128).unwrap()).unwrap();
        // The two grids share no radii, so compare against the continuous
        // minimum up to the sampling and truncation slack.
        prop_assert!(large.margin <= small.margin + small.truncation_bound + large.truncation_bound + 0.05);
    }

    #[test]
    fn rotation_keeps_the_verdict(seed in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        let f = herglotz_starlike(seed, 64).dilate(0.8).unwrap();
        let spec = ClassSpec::b(0, 0.0, 0.0).unwrap();
        let grid = DiskGrid::default();
        let a = check_b(&f, &spec, &grid).unwrap();
        let b = check_b(&f.rotate(theta), &spec, &grid).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        // One angular step moves the sampled minimum by at most this much.
        let step = std::f64::consts::TAU / grid.n_angles as f64;
        let slope = 2.0 * 0.76 / (1.0 - 0.76f64).powi(2);
        prop_assert!((a.margin - b.margin).abs() <= slope * step + a.truncation_bound + b.truncation_bound);
    }

    #[test]
    fn herglotz_starlike_members_are_never_rejected(seed in any::<u64>()) {
        let f = herglotz_starlike(seed, 64);
        let spec = ClassSpec::b(0, 0.0, 0.0).unwrap();
        let report = check_b(&f, &spec, &DiskGrid::default()).unwrap();
        prop_assert!(report.verdict != Verdict::NotMember, "{report:?}");
        // A single boundary point makes f a rotated Koebe function, whose
        // order-64 tail cannot be bounded at 0.95; pulling it in decides it.
        let dilated = check_b(&f.dilate(0.8).unwrap(), &spec, &DiskGrid::default()).unwrap();
        prop_assert_eq!(dilated.verdict, Verdict::Member);
    }

    #[test]
    fn solid_membership_descends_in_n(seed in any::<u64>(), n in 0u32..4, s in sigma(), gamma in 0.0..0.9f64, rho in 0.5..1.0f64) {
        let p = herglotz_p(&HerglotzSpec::random(seed), 64);
        let f = lift_to_b(&starlike_from_p(&p, gamma).unwrap().dilate(rho).unwrap(), n + 1, s);
        let grid = DiskGrid::new(0.95, 12, 128).unwrap();
        let upper = check_b(&f, &ClassSpec::b(n + 1, s, gamma).unwrap(), &grid).unwrap();
        if upper.is_solid_member() {
            let lower = check_b(&f, &ClassSpec::b(n, s, gamma).unwrap(), &grid).unwrap();
            prop_assert_eq!(lower.verdict, Verdict::Member);
        }
    }

    #[test]
    fn lemma_is_never_contradicted(seed in any::<u64>(), rho in 0.3..1.0f64, gamma in 0.0..0.95f64, xi in 0.01..4.0f64) {
        let p = herglotz_p(&HerglotzSpec::random(seed), 64).dilate_argument(rho);
        let grid = DiskGrid::new(0.9, 8, 64).unwrap();
        for psi in [PsiFunction::psi1(0.0, AlphaField::Series(p.clone())), PsiFunction::psi2(xi)] {
            let r = lemma_instance(&p, &psi, gamma, &grid).unwrap();
            prop_assert!(!r.contradicts_lemma(), "{r:?}");
        }
    }
}

#[test]
fn koebe_members_pass_with_enough_terms() {
    let grid = DiskGrid::default();
    for gamma in [0.0, 0.25, 0.5, 0.75, 0.9] {
        let f = koebe_general(gamma, 512).unwrap();
        let report = check_b(&f, &ClassSpec::b(0, 0.0, gamma).unwrap(), &grid).unwrap();
        assert!(report.margin >= -1e-9, "gamma {gamma}: {report:?}");
        assert_eq!(report.verdict, Verdict::Member);
    }
}

#[test]
fn bernardi_constraint_is_enforced() {
    let subject = Subject::b("identity", NormalizedSeries::identity(16));
    let grid = DiskGrid::default();
    // c > -1 on its own is not enough.
    let refused = run_t5_t6(std::slice::from_ref(&subject), &[], 0, 0.0, 0.0, 0.2, &[-0.5], &grid);
    assert!(matches!(refused, Err(Error::Parameter(_))));
    let accepted = run_t5_t6(&[subject], &[], 0, 0.0, 0.0, 0.2, &[-0.1], &grid).unwrap();
    assert_eq!(accepted.0.cases.len(), 1);
}
