use markov_groupoids::diagnostics::{
    approx_invariance_certificate, cesaro_tv_series, dense_zero_two, finite_fiber_oracle,
    Thresholds, Verdict, ZeroTwoThresholds,
};
use markov_groupoids::group::{BoundaryPoint, FreeGroup, Group, Lattice, Word};
use markov_groupoids::groupoid::Singleton;
use markov_groupoids::harmonic::{doob_transform, harmonic_measure_oracle, tree_kernel};
use markov_groupoids::measure::SparseMeasure;
use markov_groupoids::models::{
    build_model, preset, simple_random_walk, EnvironmentOperator, ModelDescription,
};
use markov_groupoids::operator::{
    equivariance_check, power, DenseChain, InvariantOperator, MarkovKernel,
};
use markov_groupoids::weight::{rational, Rational};
use markov_groupoids::Error;
use proptest::prelude::*;

#[test]
fn lattice_walk_certificate_shrinks_with_the_horizon() {
    let op: InvariantOperator<_, Rational> = simple_random_walk(Lattice::new(2));
    let t = Thresholds {
        epsilon: 0.35,
        floor: 0.5,
    };
    let short = approx_invariance_certificate(&op, None, &[Singleton], 8, t, 0).unwrap();
    let op = simple_random_walk::<_, f64>(Lattice::new(2));
    let long = approx_invariance_certificate(&op, None, &[Singleton], 64, t, 0).unwrap();
    assert!(long.residual.hi < short.residual.hi);
    assert_eq!(long.verdict, Verdict::AmenableConsistent { horizon: 64 });
    assert_eq!(short.generators.len(), 4);
}

#[test]
fn free_group_walk_stays_apart() {
    let op: InvariantOperator<_, Rational> = simple_random_walk(FreeGroup::new(2));
    let a = SparseMeasure::dirac(0u8, Word::parse("a").unwrap());
    let e = SparseMeasure::dirac(0u8, Word::empty());
    let series = cesaro_tv_series(&op, &a, &e, 6).unwrap();
    assert!(series.iter().all(|s| s.lo >= rational(99, 100)));
    let mass: Rational = power(&op, &e, 5).mass();
    assert_eq!(mass, rational(1, 1));
}

#[test]
fn tree_doob_transform_follows_the_end() {
    let op: InvariantOperator<_, Rational> = simple_random_walk(FreeGroup::new(2));
    let ball: Vec<Word> = FreeGroup::new(2)
        .generators()
        .into_iter()
        .chain([Word::empty()])
        .collect();
    let doob = doob_transform(
        op,
        tree_kernel(&BoundaryPoint::parse("|a").unwrap(), 3),
        &ball,
    )
    .unwrap();
    let row = SparseMeasure::from_atoms(0u8, doob.row(&Word::empty()));
    assert_eq!(row.get(&Word::parse("a").unwrap()), rational(3, 4));
    assert_eq!(row.get(&Word::parse("B").unwrap()), rational(1, 12));
    let nu = harmonic_measure_oracle::<Rational>(3, &Word::parse("a").unwrap(), 1);
    assert_eq!(nu.mass(&Word::parse("a").unwrap()), rational(3, 4));
}

#[test]
fn presets_build_from_toml() {
    let parity = preset("rwre-parity").unwrap();
    let text = parity.description.to_toml();
    let parsed = ModelDescription::from_toml(&text).unwrap();
    assert_eq!(parsed, parity.description);
    let op: EnvironmentOperator<_, Rational> = build_model(&parsed).unwrap();
    let objects: Vec<usize> = (0..parsed.points()).collect();
    assert!(equivariance_check(&op, &objects, 2).exact());
    assert!(matches!(
        preset("rwre-nothing"),
        Err(Error::ConfigInvalid(_))
    ));
}

#[test]
fn dense_verdicts_follow_closed_classes() {
    let absorbing = DenseChain::from_rows(vec![
        vec![(0, 1.0)],
        vec![(1, 1.0)],
        vec![(0, 0.5), (1, 0.5)],
    ])
    .unwrap();
    let oracle = finite_fiber_oracle(&absorbing);
    assert_eq!(oracle.recurrent_classes, 2);
    assert!(!oracle.liouville);
    let numeric = dense_zero_two(
        &absorbing,
        200,
        ZeroTwoThresholds {
            decay: 1e-6,
            floor: 0.01,
        },
    );
    assert!(matches!(numeric.verdict, Verdict::NonLiouville { .. }));
}

proptest! {
    #[test]
    fn lattice_walk_conserves_mass(steps in 0usize..12, x in -5i64..5, y in -5i64..5) {
        let z2 = Lattice::new(2);
        let op: InvariantOperator<_, Rational> = simple_random_walk(z2);
        let mu = power(&op, &SparseMeasure::dirac(0u8, z2.point(&[x, y])), steps);
        prop_assert_eq!(mu.mass(), rational(1, 1));
        prop_assert!(mu.len() <= (steps + 1) * (steps + 1));
    }
}
