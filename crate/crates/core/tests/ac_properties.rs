use proptest::prelude::*;
use tmslab_core::ac::{
    ac_algebra_check, analyze, falsify_ac, oscillation_upper, spot_check, standard_ac_check, validate_witness, AcVerdict,
    AlgebraOp, AnalyzeConfig, CertifiedFunction, DeltaRule, FunctionSpec, Strategy, DEFAULT_DELTAS,
};
use tmslab_core::measure::MeasureKind;
use tmslab_core::spaces::{CircleMetric, Norm, OpenSet, SpaceDescriptor};
use tmslab_core::tms::TmsInstance;

const ALL: [Strategy; 4] = [Strategy::Hotspot, Strategy::Analytic, Strategy::Translate, Strategy::ThinNeighborhood];

fn lebesgue(space: SpaceDescriptor) -> TmsInstance {
    TmsInstance::new(space, MeasureKind::Lebesgue).unwrap()
}

fn lipschitz_cases() -> Vec<(FunctionSpec, TmsInstance, f64)> {
    vec![
        (FunctionSpec::Identity, lebesgue(SpaceDescriptor::real_line()), 1.0),
        (FunctionSpec::Sin, lebesgue(SpaceDescriptor::real_line()), 1.0),
        (FunctionSpec::Cos, lebesgue(SpaceDescriptor::real_line()), 1.0),
        (FunctionSpec::Square, lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0)), 2.0),
        (FunctionSpec::Projection { k: 1 }, TmsInstance::new(SpaceDescriptor::plane(), MeasureKind::DiamOuter).unwrap(), 1.0),
        (
            FunctionSpec::ComplexIdentity,
            TmsInstance::new(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter).unwrap(),
            1.0,
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lipschitz_certificates_survive_fresh_families(seed in any::<u64>(), which in 0usize..6, eps in 1e-3f64..0.5) {
        let (f, inst, l) = &lipschitz_cases()[which];
        let rule = DeltaRule::lipschitz(*l);
        let summary = spot_check(f, inst, &rule, eps, 100, seed).unwrap();
        prop_assert!(summary.passed(), "{:?}: {} failures", f, summary.failures);
        // Each member of a P_δ(ε) family is itself a P_δ(ε) family, so the
        // sampled single-set oscillation is a modulus of continuity.
        prop_assert!(summary.max_member_oscillation <= eps);
    }

    #[test]
    fn restriction_keeps_the_delta(seed in any::<u64>(), which in 0usize..3, a in -5.0f64..5.0, len in 0.1f64..3.0, eps in 1e-3f64..0.5) {
        let (f, inst, l) = &lipschitz_cases()[which];
        let sub = inst.restrict(&OpenSet::interval(a, a + len)).unwrap();
        let summary = spot_check(f, &sub, &DeltaRule::lipschitz(*l), eps, 30, seed).unwrap();
        prop_assert!(summary.passed());
    }

    #[test]
    fn modulus_keeps_the_constant(seed in any::<u64>(), which in 0usize..3, eps in 1e-3f64..0.5) {
        let (f, inst, l) = &lipschitz_cases()[which];
        let cf = CertifiedFunction { f: f.clone(), l: *l };
        let (derived, verdict) = ac_algebra_check(&cf, None, &AlgebraOp::Abs, inst, eps, 20, seed).unwrap();
        prop_assert_eq!(derived.l, *l);
        prop_assert!(verdict.is_certified());
    }

    #[test]
    fn arc_oscillation_of_the_complex_identity_is_dominated(c in -3.0f64..3.0, len in 1e-3f64..3.0) {
        let inst = TmsInstance::new(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter).unwrap();
        let arc = OpenSet::arc(c, c + len);
        let w = oscillation_upper(&FunctionSpec::ComplexIdentity, &inst.space, &arc).unwrap();
        prop_assert!(w <= inst.measure_lower(&arc).unwrap() + 1e-9, "{} on arc of length {}", w, len);
    }
}

fn falsified_cases() -> Vec<(FunctionSpec, TmsInstance, f64)> {
    vec![
        (FunctionSpec::Square, lebesgue(SpaceDescriptor::real_line()), 1.0),
        (FunctionSpec::Cantor, lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0)), 0.25),
        (FunctionSpec::XSinInvX, lebesgue(SpaceDescriptor::open_interval(0.0, 1.0)), 0.5),
        (FunctionSpec::Square, TmsInstance::new(SpaceDescriptor::euclidean(1, Norm::L2), MeasureKind::DiamOuter).unwrap(), 1.0),
    ]
}

#[test]
fn witnesses_revalidate_from_scratch() {
    for (f, inst, eps) in falsified_cases() {
        let v = falsify_ac(&f, &inst, eps, &DEFAULT_DELTAS, &ALL, 7).unwrap();
        let AcVerdict::Falsified { witnesses, .. } = &v else { panic!("{f:?}: {v:?}") };
        assert_eq!(witnesses.len(), DEFAULT_DELTAS.len());
        let span = witnesses[0].delta / witnesses.last().unwrap().delta;
        assert!(span >= 1e3 * (1.0 - 1e-12));
        for (i, w) in witnesses.iter().enumerate() {
            assert!(w.family.total_measure_upper < w.delta);
            assert!(w.oscillation_sum_lower >= eps);
            for seed in 0..5 {
                assert!(validate_witness(&f, &inst, w, eps, seed * 31 + i as u64).unwrap(), "{f:?} at {}", w.delta);
            }
        }
    }
}

#[test]
fn definitions_agree_on_compact_intervals() {
    let config = AnalyzeConfig { spot_checks: 20, ..AnalyzeConfig::default() };
    let inst = lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0));
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4];
    let cases = [
        (FunctionSpec::Identity, true),
        (FunctionSpec::Sin, true),
        (FunctionSpec::Sqrt, true),
        (FunctionSpec::Square, true),
        (FunctionSpec::Cantor, false),
    ];
    for (f, ac) in cases {
        let eps = 0.25;
        let v = analyze(&f, &inst, eps, &config).unwrap();
        let classical = standard_ac_check(&f, 0.0, 1.0, eps, &deltas, 1 << 12).unwrap();
        assert_eq!(v.is_certified(), ac, "{f:?}: {v:?}");
        assert_eq!(v.is_falsified(), !ac, "{f:?}: {v:?}");
        assert_eq!(classical.holds(), ac, "{f:?}");
    }
}

#[test]
fn glued_square_root_passes_its_own_spot_checks() {
    let half = lebesgue(SpaceDescriptor::RealInterval { a: Some(0.0), b: None, closed_a: true, closed_b: false });
    for eps in [0.5, 0.1, 0.01] {
        let v = analyze(&FunctionSpec::Sqrt, &half, eps, &AnalyzeConfig::default()).unwrap();
        let rule = v.delta_rule().unwrap_or_else(|| panic!("{v:?}"));
        let summary = spot_check(&FunctionSpec::Sqrt, &half, rule, eps, 100, 3).unwrap();
        assert!(summary.passed(), "eps = {eps}: {} failures", summary.failures);
    }
}

#[test]
fn falsifier_is_reproducible() {
    let inst = lebesgue(SpaceDescriptor::real_line());
    let a = falsify_ac(&FunctionSpec::Square, &inst, 1.0, &DEFAULT_DELTAS, &ALL, 11).unwrap();
    let b = falsify_ac(&FunctionSpec::Square, &inst, 1.0, &DEFAULT_DELTAS, &ALL, 11).unwrap();
    assert_eq!(a, b);
}
