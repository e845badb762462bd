//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so the
//! lines print in order whatever the test harness would do with output.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tmslab_cli::corpus::{corpus, Task};
use tmslab_cli::schema::{validate, SchemaKind};
use tmslab_core::ac::{
    ac_algebra_check, analyze, certify_ac_integral, estimate_local_lipschitz, falsify_ac, spot_check, standard_ac_check,
    validate_witness, AcVerdict, AlgebraOp, AnalyzeConfig, Certificate, CertifiedFunction, FunctionSpec, GridDensity,
    IntegralMode, Strategy, DEFAULT_DELTAS,
};
use tmslab_core::linear::{ac_from_bounded, norm_function_certificate, LinearMapSpec};
use tmslab_core::measure::{measure_of, nu_upper, nu_upper_with_hints, separated_additivity_check, CoverProposal, MeasureKind};
use tmslab_core::spaces::{diam_upper, CircleMetric, Norm, OpenSet, Point, SpaceDescriptor};
use tmslab_core::tms::{check_tms, induced_pseudometric, pseudometric_axiom_check, NeighborhoodFamily, TmsInstance};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lebesgue(space: SpaceDescriptor) -> TmsInstance {
    TmsInstance::new(space, MeasureKind::Lebesgue).unwrap()
}

fn diam(space: SpaceDescriptor) -> TmsInstance {
    TmsInstance::new(space, MeasureKind::DiamOuter).unwrap()
}

const BUDGET: usize = 1000;

/// A random open set of the kind each space supports.
fn random_set(space: &SpaceDescriptor, rng: &mut ChaCha8Rng) -> OpenSet {
    match space {
        SpaceDescriptor::RealInterval { .. } => {
            let a = rng.gen_range(-5.0..5.0);
            OpenSet::interval(a, a + rng.gen_range(1e-3..2.0))
        }
        SpaceDescriptor::RectifiableCurve { .. } => {
            let a = rng.gen_range(0.0..0.8);
            OpenSet::interval(a, a + rng.gen_range(1e-3..0.2))
        }
        SpaceDescriptor::Circle { .. } => {
            let s = rng.gen_range(0.0..6.2);
            OpenSet::arc(s, s + rng.gen_range(1e-3..1.5))
        }
        _ => {
            let center = (0..space.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            OpenSet::ball(center, rng.gen_range(1e-2..1.0))
        }
    }
}

fn shrink(s: &OpenSet, k: f64) -> OpenSet {
    match s {
        OpenSet::Interval { a, b } => OpenSet::interval(a + k * (b - a), b - k * (b - a)),
        OpenSet::Arc { start, end } => OpenSet::arc(start + k * (end - start), end - k * (end - start)),
        OpenSet::Ball { center, radius } => OpenSet::ball(center.clone(), radius * (1.0 - 2.0 * k)),
        other => other.clone(),
    }
}

fn criterion_1() -> Outcome {
    let parabola = SpaceDescriptor::curve(
        (0..=128)
            .map(|i| {
                let t = i as f64 / 128.0;
                [t, t * t]
            })
            .collect(),
    )
    .unwrap();
    let spaces = [
        SpaceDescriptor::real_line(),
        SpaceDescriptor::euclidean(2, Norm::L2),
        SpaceDescriptor::circle(CircleMetric::Arc),
        parabola,
        SpaceDescriptor::grid(4, Norm::Sup),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_mono, mut worst_sub) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for space in &spaces {
        let empty = nu_upper(space, &OpenSet::Empty, BUDGET).map_err(|e| e.to_string())?;
        ensure(empty.lower == 0.0 && empty.upper == 0.0, || format!("nu(empty) = {:?} on {}", empty, space.kind_name()))?;
        for _ in 0..200 {
            let n = rng.gen_range(1..5);
            let parts: Vec<OpenSet> = (0..n).map(|_| random_set(space, &mut rng)).collect();
            let ests =
                parts.iter().map(|s| nu_upper(space, s, BUDGET)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
            let covers: Vec<CoverProposal> = ests.iter().filter_map(|e| e.cover().cloned()).collect();
            let joint = CoverProposal::concat(space, &covers).map_err(|e| e.to_string())?;
            let union =
                nu_upper_with_hints(space, &OpenSet::union(parts.clone()), BUDGET, &[joint]).map_err(|e| e.to_string())?;
            worst_sub = worst_sub.max(union.upper - ests.iter().map(|e| e.upper).sum::<f64>());

            let inner = shrink(&parts[0], rng.gen_range(0.0..0.45));
            let hint: Vec<CoverProposal> = ests[0].cover().cloned().into_iter().collect();
            let small = nu_upper_with_hints(space, &inner, BUDGET, &hint).map_err(|e| e.to_string())?;
            worst_mono = worst_mono.max(small.upper - ests[0].upper);
        }
    }
    ensure(worst_mono <= 1e-9 && worst_sub <= 1e-9, || {
        format!("monotone excess {worst_mono:e}, subadditive excess {worst_sub:e}")
    })?;
    Ok(format!(
        "1000 families over 5 space kinds; worst monotone excess {worst_mono:.1e}, worst subadditive excess {worst_sub:.1e}"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for kind in 0..3 {
        for _ in 0..50 {
            let (space, a, b) = match kind {
                0 => {
                    let x = rng.gen_range(-5.0..5.0);
                    let (l1, gap, l2) = (rng.gen_range(0.01..2.0), rng.gen_range(0.01..1.0), rng.gen_range(0.01..2.0));
                    (
                        SpaceDescriptor::real_line(),
                        OpenSet::interval(x, x + l1),
                        OpenSet::interval(x + l1 + gap, x + l1 + gap + l2),
                    )
                }
                1 => {
                    let (cx, cy) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                    let (r1, gap, r2) = (rng.gen_range(0.05..1.0), rng.gen_range(0.01..1.0), rng.gen_range(0.05..1.0));
                    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    let d = r1 + gap + r2;
                    (
                        SpaceDescriptor::euclidean(2, Norm::L2),
                        OpenSet::ball(vec![cx, cy], r1),
                        OpenSet::ball(vec![cx + d * t.cos(), cy + d * t.sin()], r2),
                    )
                }
                _ => {
                    let s = rng.gen_range(0.0..6.0);
                    let (l1, gap, l2) = (rng.gen_range(0.05..0.9), rng.gen_range(0.05..0.3), rng.gen_range(0.05..0.9));
                    (
                        SpaceDescriptor::circle(CircleMetric::Arc),
                        OpenSet::arc(s, s + l1),
                        OpenSet::arc(s + l1 + gap, s + l1 + gap + l2),
                    )
                }
            };
            let rep = separated_additivity_check(&space, &a, &b, BUDGET, 1e-6).map_err(|e| e.to_string())?;
            let gap = (rep.union.upper - rep.a.lower - rep.b.lower).max(rep.a.upper + rep.b.upper - rep.union.lower);
            worst = worst.max(gap);
            ensure(rep.additive, || format!("{} pair {a:?} / {b:?} not confirmed: {rep:?}", space.kind_name()))?;
        }
    }
    Ok(format!("150 separated pairs on the line, the plane and the circle; worst bracket gap {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let c = rng.gen_range(-3.0..3.0);
        let size = rng.gen_range(1e-3..2.5);
        let (space, s) = match i % 3 {
            0 => (SpaceDescriptor::real_line(), OpenSet::interval(c, c + size)),
            1 => (SpaceDescriptor::circle(CircleMetric::Arc), OpenSet::arc(c, c + size)),
            _ => (SpaceDescriptor::euclidean(2, Norm::L2), OpenSet::ball(vec![c, -c], size / 2.0)),
        };
        let m = measure_of(&space, MeasureKind::DiamOuter, &s, BUDGET).map_err(|e| e.to_string())?;
        let d = diam_upper(&space, &s).map_err(|e| e.to_string())?;
        worst = worst.max((m.upper - d).abs()).max((m.lower - d).abs());
    }
    ensure(worst <= 1e-6, || format!("bracket misses diam by {worst:e}"))?;
    Ok(format!("100 intervals, arcs and balls at budget {BUDGET}; worst |bracket - diam| {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let fixtures: Vec<(TmsInstance, Option<u8>)> = vec![
        (lebesgue(SpaceDescriptor::real_line()), None),
        (lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0)), None),
        (lebesgue(SpaceDescriptor::euclidean(2, Norm::L2)), None),
        (diam(SpaceDescriptor::circle(CircleMetric::Arc)), None),
        (diam(SpaceDescriptor::euclidean(2, Norm::L2)), None),
        (TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Counting).unwrap(), Some(2)),
        (lebesgue(SpaceDescriptor::circle(CircleMetric::Arc)), Some(3)),
    ];
    let mut runs = 0;
    for seed in 1..=10u64 {
        for (instance, expected) in &fixtures {
            let rep = check_tms(instance, 200, seed, NeighborhoodFamily::Basic).map_err(|e| e.to_string())?;
            runs += 1;
            ensure(rep.failed_axiom() == *expected, || {
                format!(
                    "{} / {:?} at seed {seed}: got {:?}",
                    instance.space.kind_name(),
                    instance.measure_kind,
                    rep.failed_axiom()
                )
            })?;
            match expected {
                Some(2) => ensure(!rep.axiom_ii.failures.is_empty(), || "no axiom (ii) witness".into())?,
                Some(3) => ensure(rep.axiom_iii.cases.iter().any(|c| c.violation.is_some()), || "no (U, G) violation".into())?,
                _ => {}
            }
        }
    }
    Ok(format!("{runs} checks at 200 sample points over seeds 1..10, no false classification"))
}

fn criterion_5() -> Outcome {
    let line = lebesgue(SpaceDescriptor::real_line());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let (x, y) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let b = induced_pseudometric(&line, &Point::scalar(x), &Point::scalar(y), 24).map_err(|e| e.to_string())?;
        let d = (x - y).abs();
        ensure(b.contains(d, 1e-4), || format!("bracket {b:?} misses {d}"))?;
        worst = worst.max(b.upper - b.lower);
    }
    let triples: Vec<(Point, Point, Point)> = (0..1000)
        .map(|_| {
            let mut p = || Point::scalar(rng.gen_range(-20.0..20.0));
            (p(), p(), p())
        })
        .collect();
    let rep = pseudometric_axiom_check(&line, &triples, 1e-6, 24).map_err(|e| e.to_string())?;
    ensure(rep.passed() && rep.checked == 1000, || format!("{} triangle violations", rep.violations.len()))?;
    Ok(format!("1000 pairs bracketed (widest {worst:.1e}), 1000 triples satisfy the triangle inequality"))
}

const EPS_GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];

fn spot(f: &FunctionSpec, inst: &TmsInstance, v: &AcVerdict, eps: f64, seed: u64) -> Result<(), String> {
    let rule = v.delta_rule().ok_or_else(|| format!("{}: not certified at eps {eps}: {v:?}", f.name()))?;
    let s = spot_check(f, inst, rule, eps, 100, seed).map_err(|e| e.to_string())?;
    ensure(s.passed() && s.checks.len() == 100, || format!("{} at eps {eps}: {} of 100 families failed", f.name(), s.failures))
}

fn criterion_6() -> Outcome {
    let config = AnalyzeConfig { spot_checks: 100, ..AnalyzeConfig::default() };
    let functions = [
        (FunctionSpec::Identity, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Sin, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Cos, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Projection { k: 1 }, diam(SpaceDescriptor::euclidean(2, Norm::L2))),
        (FunctionSpec::ComplexIdentity, diam(SpaceDescriptor::circle(CircleMetric::Arc))),
        (FunctionSpec::Sqrt, lebesgue(SpaceDescriptor::half_line())),
    ];
    let capped = GridDensity::from_fn(100_000, 0.0, 1.0, IntegralMode::Symmetric, |t| (1.0 / t.sqrt()).min(1e3)).unwrap();
    let indicator = GridDensity::new(vec![1.0; 100], IntegralMode::Cumulative, 0.0, 1.0).unwrap();
    let maps = [
        LinearMapSpec::Addition { dim: 2, norm: Norm::L2 },
        LinearMapSpec::Scalar { alpha: -2.5, dim: 2, norm: Norm::Sup },
        LinearMapSpec::FunctionalOnRn { coefficients: vec![3.0, -4.0], norm: Norm::L2 },
        LinearMapSpec::FunctionalOnRn { coefficients: vec![1.0, 2.0, -1.0], norm: Norm::L1 },
    ];
    let mut certificates = 0;
    for eps in EPS_GRID {
        for (f, inst) in &functions {
            let v = analyze(f, inst, eps, &config).map_err(|e| e.to_string())?;
            spot(f, inst, &v, eps, 11)?;
            if let (FunctionSpec::Identity | FunctionSpec::Sin | FunctionSpec::Cos | FunctionSpec::Projection { .. }, Some(l)) =
                (f, v.lipschitz_constant())
            {
                ensure((l - 1.0).abs() <= 1e-3, || format!("{} certified with L = {l}", f.name()))?;
            }
            certificates += 1;
        }
        let line = lebesgue(SpaceDescriptor::real_line());
        for g in [&capped, &indicator] {
            let v = certify_ac_integral(g, &line, eps, 100, 13).map_err(|e| e.to_string())?;
            spot(&FunctionSpec::GridDensityIntegral(g.clone()), &line, &v, eps, 17)?;
            certificates += 1;
        }
        for map in &maps {
            let (_, v) = ac_from_bounded(map, eps, 500, 100, 19).map_err(|e| e.to_string())?;
            ensure(v.is_certified(), || format!("{map:?} at eps {eps}: {v:?}"))?;
            if let LinearMapSpec::Addition { .. } = map {
                ensure(v.certificate() == Some(&Certificate::LinearBounded { norm: 2.0 }), || format!("addition: {v:?}"))?;
            }
            certificates += 1;
        }
        let v = norm_function_certificate(&SpaceDescriptor::euclidean(2, Norm::L2), eps, 100, 23).map_err(|e| e.to_string())?;
        spot(&FunctionSpec::Norm, &diam(SpaceDescriptor::euclidean(2, Norm::L2)), &v, eps, 29)?;
        certificates += 1;
    }
    Ok(format!("{certificates} certificates at eps in {{1e-1, 1e-2, 1e-3}}, each passing 100 spot checks"))
}

fn criterion_7() -> Outcome {
    let cases = [
        (FunctionSpec::XSinInvX, lebesgue(SpaceDescriptor::open_interval(0.0, 1.0)), 0.5),
        (FunctionSpec::Square, lebesgue(SpaceDescriptor::real_line()), 1.0),
        (FunctionSpec::Projection { k: 1 }, lebesgue(SpaceDescriptor::euclidean(2, Norm::L2)), 0.9),
    ];
    for (f, inst, eps) in &cases {
        let v = falsify_ac(f, inst, *eps, &DEFAULT_DELTAS, &Strategy::ALL, 7).map_err(|e| e.to_string())?;
        let AcVerdict::Falsified { witnesses, .. } = &v else { return Err(format!("{}: {v:?}", f.name())) };
        let deltas: Vec<f64> = witnesses.iter().map(|w| w.delta).collect();
        ensure(deltas == DEFAULT_DELTAS, || format!("{}: witnesses at {deltas:?}", f.name()))?;
        for w in witnesses {
            ensure(validate_witness(f, inst, w, *eps, 99).map_err(|e| e.to_string())?, || {
                format!("{} witness at {} did not re-validate", f.name(), w.delta)
            })?;
        }
    }
    let rep = standard_ac_check(&FunctionSpec::Cantor, 0.0, 1.0, 0.9, &DEFAULT_DELTAS, 1 << 12).map_err(|e| e.to_string())?;
    ensure(!rep.holds(), || "the Cantor function passed the standard check".into())?;
    let deltas: Vec<f64> = rep.witnesses.iter().map(|w| w.delta).collect();
    ensure(deltas == DEFAULT_DELTAS, || format!("Cantor witnesses at {deltas:?}"))?;
    for w in &rep.witnesses {
        let (len, sum) = w.family.evaluate(&tmslab_core::ac::cantor);
        ensure(w.family.is_disjoint() && len < w.delta && sum >= 0.9, || {
            format!("Cantor witness at {} re-evaluates to ({len}, {sum})", w.delta)
        })?;
    }
    Ok("4 functions falsified with re-validated witnesses at delta in {1e-1, 1e-2, 1e-3, 1e-4}".into())
}

fn criterion_8() -> Outcome {
    let inst = lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0));
    let config = AnalyzeConfig { spot_checks: 20, ..AnalyzeConfig::default() };
    let eps = 0.25;
    let mut rows = Vec::new();
    for f in [FunctionSpec::Identity, FunctionSpec::Sin, FunctionSpec::Sqrt, FunctionSpec::Square, FunctionSpec::Cantor] {
        let v = analyze(&f, &inst, eps, &config).map_err(|e| e.to_string())?;
        let classical = standard_ac_check(&f, 0.0, 1.0, eps, &DEFAULT_DELTAS, 1 << 12).map_err(|e| e.to_string())?;
        ensure(v.is_certified() || v.is_falsified(), || format!("{} inconclusive: {v:?}", f.name()))?;
        ensure(v.is_certified() == classical.holds(), || {
            format!("{} disagrees: pipeline {v:?}, classical {}", f.name(), classical.holds())
        })?;
        rows.push(format!("{}={}", f.name(), if classical.holds() { "ac" } else { "not ac" }));
    }
    ensure(rows.iter().any(|r| r.ends_with("not ac")) && rows.iter().any(|r| r.ends_with("=ac")), || {
        "one direction untested".into()
    })?;
    Ok(format!("pipeline and classical verdicts agree: {}", rows.join(", ")))
}

fn criterion_9() -> Outcome {
    let line = lebesgue(SpaceDescriptor::real_line());
    let sin = CertifiedFunction { f: FunctionSpec::Sin, l: 1.0 };
    let cos = CertifiedFunction { f: FunctionSpec::Cos, l: 1.0 };
    let shifted = CertifiedFunction { f: FunctionSpec::shift(FunctionSpec::Sin, 3.0), l: 1.0 };
    let cases: [(&str, &CertifiedFunction, Option<&CertifiedFunction>, AlgebraOp, f64); 5] = [
        ("sum", &sin, Some(&cos), AlgebraOp::Sum, 2.0),
        ("scale", &sin, None, AlgebraOp::Scale { alpha: -3.0 }, 3.0),
        ("product", &sin, Some(&cos), AlgebraOp::Product { bound: Some(1.0) }, 2.0),
        ("reciprocal", &shifted, None, AlgebraOp::Reciprocal { lower_bound: Some(2.0) }, 0.25),
        ("abs", &sin, None, AlgebraOp::Abs, 1.0),
    ];
    for (name, f, g, op, l) in &cases {
        for eps in EPS_GRID {
            let (derived, v) = ac_algebra_check(f, *g, op, &line, eps, 100, 31).map_err(|e| e.to_string())?;
            ensure((derived.l - l).abs() <= 1e-12, || format!("{name}: derived L = {}, expected {l}", derived.l))?;
            ensure(v.is_certified(), || format!("{name} at eps {eps}: {v:?}"))?;
            spot(&derived.f, &line, &v, eps, 37)?;
        }
    }
    Ok("sum, scale, product, reciprocal and modulus certified with constants 2, 3, 2, 0.25, 1".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let norms = [Norm::L1, Norm::L2, Norm::Sup, Norm::Lp(3.0)];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20 {
        let n = rng.gen_range(1..6);
        let map = if i % 2 == 0 {
            LinearMapSpec::FunctionalOnRn { coefficients: (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(), norm: norms[i % 4] }
        } else {
            let rows = rng.gen_range(2..6);
            LinearMapSpec::MatrixOnGrid {
                matrix: (0..rows).map(|_| (0..n + 1).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect(),
                domain_norm: norms[i % 4],
                codomain_norm: norms[(i / 2) % 4],
            }
        };
        let eps = EPS_GRID[i % 3];
        let (est, v) = ac_from_bounded(&map, eps, 500, 100, i as u64).map_err(|e| e.to_string())?;
        let Some(Certificate::LinearBounded { norm }) = v.certificate() else { return Err(format!("{map:?}: {v:?}")) };
        let delta = v.delta_rule().unwrap().delta(eps);
        ensure((delta - eps / (norm + 1.0)).abs() <= 1e-15, || format!("{map:?}: delta {delta} vs {}", eps / (norm + 1.0)))?;
        worst = worst.max(est.lower - norm);
    }
    ensure(worst <= 1e-6, || format!("norm lower bound exceeds the certificate by {worst:e}"))?;
    Ok(format!("20 random maps certified with delta = eps/(norm+1); max (lower bound - constant) {worst:.1e}"))
}

fn criterion_11() -> Outcome {
    let cases = [
        (FunctionSpec::Identity, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Sin, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Cos, lebesgue(SpaceDescriptor::real_line())),
        (FunctionSpec::Square, lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0))),
        (FunctionSpec::Projection { k: 1 }, diam(SpaceDescriptor::euclidean(2, Norm::L2))),
        (FunctionSpec::ComplexIdentity, diam(SpaceDescriptor::circle(CircleMetric::Arc))),
        (FunctionSpec::Sqrt, lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0))),
        (FunctionSpec::XSinInvX, lebesgue(SpaceDescriptor::open_interval(0.0, 1.0))),
        (FunctionSpec::Square, lebesgue(SpaceDescriptor::real_line())),
    ];
    let config = AnalyzeConfig::default();
    let eps = 0.05;
    let (mut accepted, mut runs) = (0, 0);
    for (f, inst) in &cases {
        let est = estimate_local_lipschitz(f, inst, &config.scales, config.budget).map_err(|e| e.to_string())?;
        if !est.accepted() {
            continue;
        }
        accepted += 1;
        let delta = eps / est.estimate;
        let deltas: Vec<f64> = (0..4).map(|k| delta * 10f64.powi(-k)).collect();
        for seed in 1..=5u64 {
            let v = falsify_ac(f, inst, eps, &deltas, &Strategy::ALL, seed).map_err(|e| e.to_string())?;
            runs += 1;
            let found = match &v {
                AcVerdict::Falsified { witnesses, .. } | AcVerdict::Inconclusive { partial: witnesses, .. } => witnesses.len(),
                AcVerdict::Certified { .. } => 0,
            };
            ensure(found == 0, || format!("{} with L = {}: {found} witnesses at seed {seed}", f.name(), est.estimate))?;
        }
    }
    ensure(accepted > 0, || "no estimate was accepted".into())?;
    Ok(format!("{accepted} of {} estimates accepted; {runs} falsifier runs below eps/L found no witness", cases.len()))
}

fn criterion_12() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tmslab")).args(["paper", "reproduce", "--seed", "7"]).output().map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("exit {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
    ensure(a.stdout == b.stdout, || "the two reports differ".into())?;
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    validate(SchemaKind::Report, &report).map_err(|e| e.to_string())?;
    let total = report["summary"]["total"].as_u64().unwrap_or(0);
    ensure(total as usize == corpus().len(), || format!("report has {total} entries"))?;
    ensure(corpus().iter().any(|e| matches!(e.task, Task::Tms { .. })), || "corpus lost its tms fixtures".into())?;
    Ok(format!("two runs produced identical {}-byte reports with all {total} entries met", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("outer measure axioms", criterion_1),
        ("metric outer measure", criterion_2),
        ("diameter identity", criterion_3),
        ("tms fixtures", criterion_4),
        ("induced pseudometric", criterion_5),
        ("certified corpus", criterion_6),
        ("falsified corpus", criterion_7),
        ("equivalence on compact intervals", criterion_8),
        ("algebra closure", criterion_9),
        ("linear bridge", criterion_10),
        ("Lipschitz cross-validation", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
