use objcheck_core::objectivity::{
    extract_profile, finite_set_objectivity, quadratic_objectivity, quadratic_vs_montecarlo_oracle,
    radial_set_closure_check, test_function_objectivity, MonteCarloConfig, QuadraticForm,
    RadialProfile, RadialSet, Verdict,
};
use objcheck_core::rotation::{validate_rotation, DEFAULT_TOLERANCE};
use objcheck_core::{parse, ScalarFunction, SeedStream, SquareMatrix, Vector};
use proptest::prelude::*;
use rand::Rng;

const RADIAL_PROFILES: [&str; 6] = [
    "t^2",
    "sin(t) + t^3",
    "exp(-t) * cos(3*t)",
    "sqrt(t + 1) - log(t + 2)",
    "abs(t - 1.5)",
    "1 / (1 + t^4)",
];

#[test]
fn radial_functions_show_no_violations() {
    let stream = SeedStream::new(77);
    for src in RADIAL_PROFILES {
        let phi = RadialProfile::closed(parse(src).unwrap()).unwrap();
        for m in 2..=6 {
            let sampler = RadialSet::shell(m, 0.0, 5.0).unwrap();
            let config = MonteCarloConfig::new(1000, 1e-9);
            let report = test_function_objectivity(&phi, m, &sampler, &config, &stream).unwrap();
            assert_eq!(report.verdict(), Verdict::Inconclusive, "{src} m={m}");
        }
    }
}

#[test]
fn profile_reconstructs_radial_functions() {
    // when no violation is found, f(x) = φ(‖x‖) with φ(t) = f(t·e₁)
    let stream = SeedStream::new(5);
    let f = parse("sin(norm(x)) + dot(x, x)^2").unwrap();
    for m in 2..=5 {
        let gamma = RadialSet::shell(m, 0.0, 4.0).unwrap();
        let config = MonteCarloConfig::new(500, 1e-9);
        let report = test_function_objectivity(&f, m, &gamma, &config, &stream).unwrap();
        assert_eq!(report.verdict(), Verdict::Inconclusive);

        let mut rng = stream.substream(m as u64);
        use objcheck_core::DomainSampler;
        let xs: Vec<Vector> = (0..200).map(|_| gamma.sample(&mut rng)).collect();
        let grid: Vec<f64> = xs.iter().map(Vector::norm).collect();
        let profile = extract_profile(&f, &gamma, &Vector::basis(m, 0), &grid).unwrap();
        for x in &xs {
            let fx = f.eval(x).unwrap();
            let rebuilt = profile.reconstruct(x).unwrap();
            assert!((fx - rebuilt).abs() <= 1e-9 * fx.abs().max(1.0));
        }
    }
}

#[test]
fn one_dimension_is_degenerate() {
    let stream = SeedStream::new(1);
    let mut rng = stream.substream(0);
    for _ in 0..20 {
        let h = SquareMatrix::diagonal(&[rng.random_range(-5.0..5.0)]);
        assert_eq!(
            quadratic_objectivity(&QuadraticForm::new(h), 1e-10)
                .unwrap()
                .verdict(),
            Verdict::Objective
        );
        let pts: Vec<Vector> = (0..3)
            .map(|_| Vector::new(vec![rng.random_range(-9.0..9.0)]).unwrap())
            .collect();
        assert_eq!(
            finite_set_objectivity(&pts, 1).unwrap().verdict(),
            Verdict::Objective
        );
        let gamma = RadialSet::new(1, vec![(0.5, 1.0)], vec![rng.random_range(2.0..3.0)]).unwrap();
        assert_eq!(
            radial_set_closure_check(&gamma, 20, &stream)
                .unwrap()
                .verdict(),
            Verdict::Objective
        );
        let f = parse("x1^3 + 2*x1").unwrap();
        let r = test_function_objectivity(&f, 1, &gamma, &MonteCarloConfig::default(), &stream)
            .unwrap();
        assert_eq!(r.verdict(), Verdict::Objective);
    }
}

fn arb_matrix(m: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(-1.0f64..1.0, m * m)
        .prop_map(move |d| SquareMatrix::from_row_major(m, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_decision_agrees_with_sampling(h in (2usize..5).prop_flat_map(arb_matrix), seed in any::<u64>()) {
        let qf = QuadraticForm::new(h);
        prop_assert!(quadratic_vs_montecarlo_oracle(&qf, 200, &SeedStream::new(seed)).unwrap());
    }

    #[test]
    fn isotropic_plus_antisymmetric_is_objective(m in 2usize..7, alpha in -10.0f64..10.0, a in (2usize..7).prop_flat_map(arb_matrix)) {
        let n = m.min(a.order());
        let h = SquareMatrix::from_fn(n, |i, j| {
            let skew = a[(i, j)] - a[(j, i)];
            skew + if i == j { alpha } else { 0.0 }
        });
        let report = quadratic_objectivity(&QuadraticForm::new(h), 1e-10).unwrap();
        prop_assert_eq!(report.verdict(), Verdict::Objective);
        prop_assert!((report.alpha().unwrap() - alpha).abs() <= 1e-12 * alpha.abs().max(1.0));
    }

    #[test]
    fn refutations_carry_valid_witnesses(src in prop::sample::select(vec!["x1", "x1*x2", "x2^2 - x1", "sin(x1) + norm(x)"]),
                                          m in 2usize..6, seed in any::<u64>()) {
        let f = parse(src).unwrap();
        let sampler = RadialSet::shell(m, 0.1, 10.0).unwrap();
        let report = test_function_objectivity(&f, m, &sampler, &MonteCarloConfig::default(), &SeedStream::new(seed)).unwrap();
        prop_assert_eq!(report.verdict(), Verdict::NotObjective);
        let w = report.witness().unwrap();
        prop_assert!(w.gap() > report.tolerance());
        prop_assert!(validate_rotation(w.q.matrix().clone(), DEFAULT_TOLERANCE).is_ok());
        prop_assert_eq!(f.eval(&w.x).unwrap(), w.f_x);
        prop_assert_eq!(f.eval(&w.q.apply(&w.x).unwrap()).unwrap(), w.f_qx);
    }
}
