//! The reproduction corpus: every worked fixture as an id, a source locator,
//! an expectation and a task. `paper reproduce` runs them all.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use tmslab_core::ac::{
    ac_algebra_check, analyze, certify_ac_integral, constancy_falsifier, estimate_local_lipschitz, falsify_ac, oscillation_upper,
    spot_check, standard_ac_check, validate_witness, AcVerdict, AlgebraOp, AnalyzeConfig, Certificate, CertifiedFunction,
    ConstancyOutcome, FunctionSpec, GridDensity, IntegralMode, NullSet, StandardVerdict, Strategy, DEFAULT_DELTAS,
};
use tmslab_core::linear::{
    ac_from_bounded, composition_ac, holder_functional_check, norm_function_certificate, operator_norm, LinearMapSpec,
    VectorFunction,
};
use tmslab_core::measure::{measure_of, nu_upper, nu_upper_with_hints, separated_additivity_check, CoverProposal, MeasureKind};
use tmslab_core::spaces::{diam_upper, CircleMetric, Norm, OpenSet, Point, SpaceDescriptor};
use tmslab_core::tms::{check_tms, induced_pseudometric, pseudometric_axiom_check, NeighborhoodFamily, TmsInstance};
use tmslab_core::TmsError;

use crate::report::{EntryResult, Expectation, RunConfig};

/// Finest family size for the classical interval-sum check.
const STANDARD_N_MAX: usize = 1 << 12;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub source: &'static str,
    pub expectation: Expectation,
    pub task: Task,
}

#[derive(Clone, Debug)]
pub enum Task {
    Tms { instance: TmsInstance, family: NeighborhoodFamily },
    Analyze { f: FunctionSpec, instance: TmsInstance, eps: f64 },
    Falsify { f: FunctionSpec, instance: TmsInstance, eps: f64 },
    Standard { f: FunctionSpec, a: f64, b: f64, eps: f64 },
    Integral { density: GridDensity, eps: f64 },
    Algebra { f: CertifiedFunction, g: Option<CertifiedFunction>, op: AlgebraOp, eps: f64 },
    Bounded { map: LinearMapSpec, eps: f64 },
    Holder { h: Vec<f64>, p: f64, q: f64 },
    NormFunction { space: SpaceDescriptor, eps: f64 },
    Composition { map: LinearMapSpec, f: FunctionSpec, eps: f64 },
    Constancy { f: FunctionSpec, instance: TmsInstance, set: NullSet },
    Property(Property),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    EmptySetIsNull,
    Monotone,
    Subadditive,
    DiameterIdentity,
    SeparatedAdditivity,
    Pseudometric,
    UniformContinuity,
    Equivalence,
    Restriction,
    LipschitzCrossCheck,
    ComplexIdentityDominated,
    LinearDominance,
    ShiftInvariance,
    DifferenceGrowth,
}

fn inst(space: SpaceDescriptor, kind: MeasureKind) -> TmsInstance {
    TmsInstance::new(space, kind).expect("corpus instances pair spaces with supported measures")
}

fn lebesgue(space: SpaceDescriptor) -> TmsInstance {
    inst(space, MeasureKind::Lebesgue)
}

fn entry(id: &'static str, source: &'static str, expectation: Expectation, task: Task) -> CorpusEntry {
    CorpusEntry { id, source, expectation, task }
}

fn tms(instance: TmsInstance) -> Task {
    Task::Tms { instance, family: NeighborhoodFamily::Basic }
}

fn certified(f: FunctionSpec, l: f64) -> CertifiedFunction {
    CertifiedFunction { f, l }
}

pub fn corpus() -> Vec<CorpusEntry> {
    use Expectation::*;
    let line = || lebesgue(SpaceDescriptor::real_line());
    let plane_diam = || inst(SpaceDescriptor::euclidean(2, Norm::L2), MeasureKind::DiamOuter);
    let circle_diam = || inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter);
    let capped = GridDensity::from_fn(100_000, 0.0, 1.0, IntegralMode::Symmetric, |t| (1.0 / t.sqrt()).min(1e3))
        .expect("capped density is finite");
    let indicator = GridDensity::new(vec![1.0; 100], IntegralMode::Cumulative, 0.0, 1.0).expect("indicator density is finite");
    let line_sub = line().restrict(&OpenSet::interval(0.2, 0.8)).expect("sub-interval of the line");
    let box_sub = lebesgue(SpaceDescriptor::euclidean(2, Norm::L2))
        .restrict(&OpenSet::cuboid(vec![[0.0, 1.0], [0.0, 0.5]]))
        .expect("sub-box of the plane");
    vec![
        entry("tms.line_lebesgue", "Lebesgue measure on the real line", TmsPasses, tms(line())),
        entry(
            "tms.interval_lebesgue",
            "a closed bounded interval is a sub-tms of the line",
            TmsPasses,
            tms(lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0))),
        ),
        entry(
            "tms.plane_lebesgue",
            "Lebesgue measure on the plane",
            TmsPasses,
            tms(lebesgue(SpaceDescriptor::euclidean(2, Norm::L2))),
        ),
        entry("tms.circle_diam", "the circle with the diameter measure", TmsPasses, tms(circle_diam())),
        entry("tms.plane_diam", "metric spaces with the diameter measure", TmsPasses, tms(plane_diam())),
        entry(
            "tms.line_counting",
            "counting measure gives every singleton measure one",
            TmsFailsAxiom { axiom: 2 },
            tms(inst(SpaceDescriptor::real_line(), MeasureKind::Counting)),
        ),
        entry(
            "tms.circle_planar_lebesgue",
            "the circle inside the plane has planar Lebesgue measure zero",
            TmsFailsAxiom { axiom: 3 },
            tms(lebesgue(SpaceDescriptor::circle(CircleMetric::Arc))),
        ),
        entry("tms.open_subinterval", "open subspaces of a tms are tms", TmsPasses, tms(line_sub)),
        entry("tms.open_subbox", "open subspaces of a tms are tms", TmsPasses, tms(box_sub)),
        entry("tms.pseudometric", "the induced pseudometric on the line", Holds, Task::Property(Property::Pseudometric)),
        entry("measure.empty", "the diameter outer measure of the empty set", Holds, Task::Property(Property::EmptySetIsNull)),
        entry("measure.monotone", "monotonicity of the diameter outer measure", Holds, Task::Property(Property::Monotone)),
        entry("measure.subadditive", "subadditivity of the diameter outer measure", Holds, Task::Property(Property::Subadditive)),
        entry(
            "measure.diameter_identity",
            "open connected sets have measure equal to their diameter",
            Holds,
            Task::Property(Property::DiameterIdentity),
        ),
        entry(
            "measure.separated_additivity",
            "additivity on separated sets where the brackets close",
            Holds,
            Task::Property(Property::SeparatedAdditivity),
        ),
        entry(
            "ac.identity",
            "Lipschitz functions are absolutely continuous",
            Certified,
            Task::Analyze { f: FunctionSpec::Identity, instance: line(), eps: 0.01 },
        ),
        entry(
            "ac.sin",
            "Lipschitz functions are absolutely continuous",
            Certified,
            Task::Analyze { f: FunctionSpec::Sin, instance: line(), eps: 0.01 },
        ),
        entry(
            "ac.cos",
            "Lipschitz functions are absolutely continuous",
            Certified,
            Task::Analyze { f: FunctionSpec::Cos, instance: line(), eps: 0.01 },
        ),
        entry(
            "ac.projection_diam",
            "coordinate projections under the diameter measure",
            Certified,
            Task::Analyze { f: FunctionSpec::Projection { k: 1 }, instance: plane_diam(), eps: 0.01 },
        ),
        entry(
            "ac.complex_identity_circle",
            "the complex identity on the circle",
            Certified,
            Task::Analyze { f: FunctionSpec::ComplexIdentity, instance: circle_diam(), eps: 0.01 },
        ),
        entry(
            "ac.sqrt_half_line",
            "the square root on the half line, glued from two pieces",
            Certified,
            Task::Analyze { f: FunctionSpec::Sqrt, instance: lebesgue(SpaceDescriptor::half_line()), eps: 0.01 },
        ),
        entry(
            "ac.integral_capped_density",
            "integrals of L1 densities, symmetric form",
            Certified,
            Task::Integral { density: capped, eps: 0.1 },
        ),
        entry(
            "ac.integral_indicator",
            "integrals of L1 densities, cumulative form",
            Certified,
            Task::Integral { density: indicator, eps: 0.1 },
        ),
        entry(
            "ac.x_sin_inv_x",
            "x sin(1/x) has unbounded variation near zero",
            Falsified { eps: 0.5 },
            Task::Falsify { f: FunctionSpec::XSinInvX, instance: lebesgue(SpaceDescriptor::open_interval(0.0, 1.0)), eps: 0.5 },
        ),
        entry(
            "ac.square_line",
            "the square grows without bound",
            Falsified { eps: 1.0 },
            Task::Falsify { f: FunctionSpec::Square, instance: line(), eps: 1.0 },
        ),
        entry(
            "ac.projection_lebesgue",
            "thin neighborhoods defeat projections under planar Lebesgue measure",
            Falsified { eps: 0.9 },
            Task::Falsify {
                f: FunctionSpec::Projection { k: 1 },
                instance: lebesgue(SpaceDescriptor::euclidean(2, Norm::L2)),
                eps: 0.9,
            },
        ),
        entry(
            "ac.projection_constancy",
            "non-constant on a connected null set under a C-outer regular measure",
            Falsified { eps: 0.9 },
            Task::Constancy {
                f: FunctionSpec::Projection { k: 1 },
                instance: lebesgue(SpaceDescriptor::euclidean(2, Norm::L2)),
                set: NullSet::Segment { a: Point::new(vec![0.0, 0.0]), b: Point::new(vec![1.0, 0.0]) },
            },
        ),
        entry(
            "ac.cantor_standard",
            "the Cantor function is not absolutely continuous in the classical sense",
            Falsified { eps: 0.9 },
            Task::Standard { f: FunctionSpec::Cantor, a: 0.0, b: 1.0, eps: 0.9 },
        ),
        entry(
            "ac.sqrt_standard",
            "the square root is absolutely continuous on the unit interval",
            Holds,
            Task::Standard { f: FunctionSpec::Sqrt, a: 0.0, b: 1.0, eps: 0.1 },
        ),
        entry(
            "ac.equivalence",
            "agreement with the classical definition on compact intervals",
            Holds,
            Task::Property(Property::Equivalence),
        ),
        entry(
            "ac.uniform_continuity",
            "absolutely continuous functions are uniformly continuous",
            Holds,
            Task::Property(Property::UniformContinuity),
        ),
        entry("ac.restriction", "absolute continuity passes to open subspaces", Holds, Task::Property(Property::Restriction)),
        entry(
            "ac.lipschitz_cross_check",
            "locally Lipschitz functions are absolutely continuous",
            Holds,
            Task::Property(Property::LipschitzCrossCheck),
        ),
        entry(
            "ac.vector_valued",
            "oscillation of a vector-valued function on arcs",
            Holds,
            Task::Property(Property::ComplexIdentityDominated),
        ),
        entry(
            "ac.algebra_sum",
            "sums of absolutely continuous functions",
            Certified,
            Task::Algebra {
                f: certified(FunctionSpec::Sin, 1.0),
                g: Some(certified(FunctionSpec::Cos, 1.0)),
                op: AlgebraOp::Sum,
                eps: 0.01,
            },
        ),
        entry(
            "ac.algebra_scale",
            "scalar multiples of absolutely continuous functions",
            Certified,
            Task::Algebra { f: certified(FunctionSpec::Sin, 1.0), g: None, op: AlgebraOp::Scale { alpha: -3.0 }, eps: 0.01 },
        ),
        entry(
            "ac.algebra_product",
            "products of bounded absolutely continuous functions",
            Certified,
            Task::Algebra {
                f: certified(FunctionSpec::Sin, 1.0),
                g: Some(certified(FunctionSpec::Cos, 1.0)),
                op: AlgebraOp::Product { bound: Some(1.0) },
                eps: 0.01,
            },
        ),
        entry(
            "ac.algebra_reciprocal",
            "reciprocals of functions bounded away from zero",
            Certified,
            Task::Algebra {
                f: certified(FunctionSpec::shift(FunctionSpec::Sin, 3.0), 1.0),
                g: None,
                op: AlgebraOp::Reciprocal { lower_bound: Some(2.0) },
                eps: 0.01,
            },
        ),
        entry(
            "ac.algebra_abs",
            "the modulus of an absolutely continuous function",
            Certified,
            Task::Algebra { f: certified(FunctionSpec::Sin, 1.0), g: None, op: AlgebraOp::Abs, eps: 0.01 },
        ),
        entry(
            "linear.functional_rn",
            "bounded linear functionals are absolutely continuous",
            Certified,
            Task::Bounded { map: LinearMapSpec::FunctionalOnRn { coefficients: vec![3.0, -4.0], norm: Norm::L2 }, eps: 0.01 },
        ),
        entry(
            "linear.matrix_grid",
            "bounded linear maps are absolutely continuous",
            Certified,
            Task::Bounded {
                map: LinearMapSpec::MatrixOnGrid {
                    matrix: vec![vec![1.0, 2.0, 0.0], vec![0.0, -1.0, 1.0], vec![0.5, 0.5, 0.5]],
                    domain_norm: Norm::Sup,
                    codomain_norm: Norm::L1,
                },
                eps: 0.01,
            },
        ),
        entry(
            "linear.integration_operator",
            "the integration operator on continuous functions",
            Certified,
            Task::Bounded { map: LinearMapSpec::IntegrationOperator { m: 64 }, eps: 0.01 },
        ),
        entry(
            "linear.holder_functional",
            "integral functionals on Lp spaces via the Hoelder inequality",
            Certified,
            Task::Holder { h: vec![1.0; 64], p: 2.0, q: 2.0 },
        ),
        entry(
            "linear.addition",
            "addition on a product of normed spaces",
            Certified,
            Task::Bounded { map: LinearMapSpec::Addition { dim: 2, norm: Norm::L2 }, eps: 0.01 },
        ),
        entry(
            "linear.scalar",
            "scalar multiplication on a normed space",
            Certified,
            Task::Bounded { map: LinearMapSpec::Scalar { alpha: -2.5, dim: 2, norm: Norm::Sup }, eps: 0.01 },
        ),
        entry(
            "linear.norm_function",
            "the norm of a normed space",
            Certified,
            Task::NormFunction { space: SpaceDescriptor::euclidean(2, Norm::L2), eps: 0.01 },
        ),
        entry(
            "linear.composition",
            "a bounded linear map after an absolutely continuous function",
            Certified,
            Task::Composition {
                map: LinearMapSpec::FunctionalOnRn { coefficients: vec![3.0], norm: Norm::L2 },
                f: FunctionSpec::Sin,
                eps: 0.01,
            },
        ),
        entry(
            "linear.bounded_dominance",
            "absolutely continuous linear maps are bounded",
            Holds,
            Task::Property(Property::LinearDominance),
        ),
        entry(
            "linear.shift_invariance",
            "adding a constant leaves oscillation unchanged",
            Holds,
            Task::Property(Property::ShiftInvariance),
        ),
        entry(
            "linear.difference_growth",
            "differentiation norms grow with the grid",
            Holds,
            Task::Property(Property::DifferenceGrowth),
        ),
    ]
}

/// The corpus expectation for a tms instance, if the corpus has one.
pub fn tms_expectation(instance: &TmsInstance) -> Option<Expectation> {
    corpus().into_iter().find_map(|e| match &e.task {
        Task::Tms { instance: i, .. } if i == instance => Some(e.expectation),
        _ => None,
    })
}

pub struct Outcome {
    pub actual: String,
    pub detail: String,
    pub data: Value,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn verdict_label(v: &AcVerdict) -> String {
    match v {
        AcVerdict::Certified { .. } => "certified".into(),
        AcVerdict::Falsified { eps, .. } => format!("falsified({eps})"),
        AcVerdict::Inconclusive { .. } => "inconclusive".into(),
    }
}

pub fn certificate_summary(c: &Certificate) -> String {
    match c {
        Certificate::LocallyLipschitz { l } => format!("Lipschitz L = {l:.6}"),
        Certificate::IntegralL1 { p, tail, .. } => format!("truncation level p = {p}, tail {tail:.6}"),
        Certificate::Glued { pieces } => format!("glued from {} pieces", pieces.len()),
        Certificate::LinearBounded { norm } => format!("operator norm <= {norm:.6}"),
    }
}

pub fn verdict_detail(v: &AcVerdict, eps: f64) -> String {
    match v {
        AcVerdict::Certified { certificate, delta_rule, spot_checks } => format!(
            "{}; delta({eps}) = {:.6e}; {} spot checks",
            certificate_summary(certificate),
            delta_rule.delta(eps),
            spot_checks.len()
        ),
        AcVerdict::Falsified { witnesses, .. } => {
            let smallest = witnesses.last().map_or(f64::NAN, |w| w.delta);
            format!("{} witness families, smallest delta {smallest:e}", witnesses.len())
        }
        AcVerdict::Inconclusive { diagnostics, .. } => diagnostics.join("; "),
    }
}

fn verdict_outcome(v: &AcVerdict, eps: f64) -> Outcome {
    Outcome { actual: verdict_label(v), detail: verdict_detail(v, eps), data: to_value(v) }
}

fn holds(ok: bool, detail: String, data: Value) -> Outcome {
    Outcome { actual: if ok { "holds" } else { "fails" }.into(), detail, data }
}

pub fn analyze_config(cfg: &RunConfig) -> AnalyzeConfig {
    AnalyzeConfig {
        budget: cfg.budgets.measure,
        seed: cfg.seed,
        spot_checks: cfg.budgets.spot_checks,
        ..AnalyzeConfig::default()
    }
}

pub fn tms_outcome(instance: &TmsInstance, family: NeighborhoodFamily, cfg: &RunConfig) -> Result<Outcome, TmsError> {
    let rep = check_tms(instance, cfg.budgets.samples, cfg.seed, family)?;
    let actual = match rep.failed_axiom() {
        None => "tms_passes".to_string(),
        Some(k) => format!("tms_fails_axiom({k})"),
    };
    let detail = match rep.failed_axiom() {
        None => format!(
            "{} axiom (ii) witnesses, {} axiom (iii) cases, no violation at {} sample points",
            rep.axiom_ii.witnesses.len(),
            rep.axiom_iii.cases.len(),
            cfg.budgets.samples
        ),
        Some(_) => rep.notes.last().cloned().unwrap_or_default(),
    };
    Ok(Outcome { actual, detail, data: to_value(&rep) })
}

/// Falsifies on the default schedule and re-validates every witness.
pub fn falsify_outcome(
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    deltas: &[f64],
    seed: u64,
) -> Result<Outcome, TmsError> {
    let v = falsify_ac(f, instance, eps, deltas, &Strategy::ALL, seed)?;
    if let AcVerdict::Falsified { witnesses, .. } = &v {
        for w in witnesses {
            if !validate_witness(f, instance, w, eps, seed)? {
                return Ok(Outcome {
                    actual: "invalid_witness".into(),
                    detail: format!("witness at delta {} did not re-validate", w.delta),
                    data: to_value(&v),
                });
            }
        }
    }
    Ok(verdict_outcome(&v, eps))
}

fn run_task(task: &Task, cfg: &RunConfig) -> Result<Outcome, TmsError> {
    let seed = cfg.seed;
    let n_spot = cfg.budgets.spot_checks;
    match task {
        Task::Tms { instance, family } => tms_outcome(instance, *family, cfg),
        Task::Analyze { f, instance, eps } => Ok(verdict_outcome(&analyze(f, instance, *eps, &analyze_config(cfg))?, *eps)),
        Task::Falsify { f, instance, eps } => falsify_outcome(f, instance, *eps, &DEFAULT_DELTAS, seed),
        Task::Standard { f, a, b, eps } => {
            let rep = standard_ac_check(f, *a, *b, *eps, &DEFAULT_DELTAS, STANDARD_N_MAX)?;
            let actual = match rep.verdict {
                StandardVerdict::Holds => "holds".to_string(),
                StandardVerdict::Fails => format!("falsified({eps})"),
            };
            let detail =
                rep.best_sums.iter().map(|(d, s)| format!("delta {d:e}: best sum {s:.6}")).collect::<Vec<_>>().join("; ");
            Ok(Outcome { actual, detail, data: to_value(&rep) })
        }
        Task::Integral { density, eps } => {
            let v = certify_ac_integral(density, &lebesgue(SpaceDescriptor::real_line()), *eps, n_spot, seed)?;
            Ok(verdict_outcome(&v, *eps))
        }
        Task::Algebra { f, g, op, eps } => {
            let (derived, v) = ac_algebra_check(f, g.as_ref(), op, &lebesgue(SpaceDescriptor::real_line()), *eps, n_spot, seed)?;
            let mut out = verdict_outcome(&v, *eps);
            out.detail = format!("derived L = {}; {}", derived.l, out.detail);
            Ok(out)
        }
        Task::Bounded { map, eps } => {
            let (est, v) = ac_from_bounded(map, *eps, cfg.budgets.probes, n_spot, seed)?;
            let mut out = verdict_outcome(&v, *eps);
            out.detail = format!("norm bracket [{:.6}, {:.6}]; {}", est.lower, est.upper, out.detail);
            out.data = json!({ "norm": est, "verdict": v });
            Ok(out)
        }
        Task::Holder { h, p, q } => {
            let rep = holder_functional_check(h, *p, *q, 1000, seed)?;
            Ok(Outcome {
                actual: verdict_label(&rep.verdict),
                detail: format!("L = {:.6}; max excess {:.3e} over {} pairs", rep.l, rep.max_excess, rep.pairs),
                data: to_value(&rep),
            })
        }
        Task::NormFunction { space, eps } => Ok(verdict_outcome(&norm_function_certificate(space, *eps, n_spot, seed)?, *eps)),
        Task::Composition { map, f, eps } => {
            let line = lebesgue(SpaceDescriptor::real_line());
            let inner = analyze(f, &line, *eps, &analyze_config(cfg))?;
            let v = composition_ac(map, &VectorFunction::Scalar { f: f.clone() }, &inner, cfg.budgets.probes, seed)?;
            let rule = v.delta_rule().cloned();
            let mut out = verdict_outcome(&v, *eps);
            if let (Some(rule), Some(l)) = (rule, v.lipschitz_constant()) {
                let composite = match map {
                    LinearMapSpec::FunctionalOnRn { coefficients, .. } if coefficients.len() == 1 => {
                        Some(FunctionSpec::scale(coefficients[0], f.clone()))
                    }
                    _ => None,
                };
                if let Some(g) = composite {
                    let summary = spot_check(&g, &line, &rule, *eps, n_spot, seed)?;
                    if !summary.passed() {
                        out.actual = "inconclusive".into();
                    }
                    out.detail = format!("composite L = {l:.6}; {} of {} spot checks passed", n_spot - summary.failures, n_spot);
                }
            }
            Ok(out)
        }
        Task::Constancy { f, instance, set } => {
            let out = constancy_falsifier(f, instance, set, 64, 1e-9)?;
            let (actual, detail) = match &out {
                ConstancyOutcome::Falsified { difference, .. } => (
                    format!("falsified({})", floor_eps(*difference)),
                    format!("values differ by {difference:.6} on a null segment"),
                ),
                ConstancyOutcome::Pass => ("holds".into(), "constant on the null set".into()),
            };
            Ok(Outcome { actual, detail, data: to_value(&out) })
        }
        Task::Property(p) => run_property(*p, cfg),
    }
}

/// The constancy rule refutes absolute continuity at every ε up to the
/// observed difference; report the largest corpus ε it covers.
fn floor_eps(difference: f64) -> f64 {
    [0.9, 0.5, 0.25, 0.1].into_iter().find(|e| difference >= *e).unwrap_or(0.0)
}

fn run_property(p: Property, cfg: &RunConfig) -> Result<Outcome, TmsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = cfg.budgets.measure;
    let tol = cfg.tolerances.bracket;
    match p {
        Property::EmptySetIsNull => {
            let mut ok = true;
            for space in [SpaceDescriptor::real_line(), SpaceDescriptor::plane(), SpaceDescriptor::circle(CircleMetric::Arc)] {
                let m = measure_of(&space, MeasureKind::DiamOuter, &OpenSet::Empty, budget)?;
                ok &= m.lower == 0.0 && m.upper == 0.0;
            }
            Ok(holds(ok, "nu(empty) = 0 on the line, the plane and the circle".into(), Value::Null))
        }
        Property::Monotone => {
            let line = SpaceDescriptor::real_line();
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..50 {
                let a = rng.gen_range(-5.0..5.0);
                let len = rng.gen_range(1e-3..4.0);
                let k = rng.gen_range(0.0..0.49);
                let big = nu_upper(&line, &OpenSet::interval(a, a + len), budget)?;
                let hint = big.cover().cloned().into_iter().collect::<Vec<_>>();
                let small = nu_upper_with_hints(&line, &OpenSet::interval(a + k * len, a + (1.0 - k) * len), budget, &hint)?;
                worst = worst.max(small.upper - big.upper);
            }
            Ok(holds(worst <= 1e-9, format!("max nu(inner) - nu(outer) = {worst:.3e} over 50 nested pairs"), Value::Null))
        }
        Property::Subadditive => {
            let line = SpaceDescriptor::real_line();
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..50 {
                let n = rng.gen_range(1..6);
                let parts: Vec<OpenSet> = (0..n)
                    .map(|_| {
                        let a = rng.gen_range(-5.0..5.0);
                        OpenSet::interval(a, a + rng.gen_range(1e-3..1.0))
                    })
                    .collect();
                let ests = parts.iter().map(|s| nu_upper(&line, s, budget)).collect::<Result<Vec<_>, _>>()?;
                let covers: Vec<CoverProposal> = ests.iter().filter_map(|e| e.cover().cloned()).collect();
                let joint = CoverProposal::concat(&line, &covers)?;
                let u = nu_upper_with_hints(&line, &OpenSet::union(parts), budget, &[joint])?;
                worst = worst.max(u.upper - ests.iter().map(|e| e.upper).sum::<f64>());
            }
            Ok(holds(worst <= 1e-9, format!("max nu(union) - sum = {worst:.3e} over 50 families"), Value::Null))
        }
        Property::DiameterIdentity => {
            let mut worst = 0.0_f64;
            for i in 0..60 {
                let c = rng.gen_range(-3.0..3.0);
                let size = rng.gen_range(1e-3..2.5);
                let (space, s) = match i % 3 {
                    0 => (SpaceDescriptor::real_line(), OpenSet::interval(c, c + size)),
                    1 => (SpaceDescriptor::circle(CircleMetric::Arc), OpenSet::arc(c, c + size)),
                    _ => (SpaceDescriptor::euclidean(2, Norm::L2), OpenSet::ball(vec![c, -c], size / 2.0)),
                };
                let m = measure_of(&space, MeasureKind::DiamOuter, &s, budget)?;
                let d = diam_upper(&space, &s)?;
                worst = worst.max((m.upper - d).abs()).max((m.lower - d).abs());
            }
            Ok(holds(worst <= tol, format!("max |nu - diam| = {worst:.3e} over 60 intervals, arcs and balls"), Value::Null))
        }
        Property::SeparatedAdditivity => {
            let mut failures = 0;
            for i in 0..30 {
                let (space, a, b) = match i % 3 {
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
                        let c = rng.gen_range(-3.0..3.0);
                        let (r1, gap, r2) = (rng.gen_range(0.05..1.0), rng.gen_range(0.01..1.0), rng.gen_range(0.05..1.0));
                        (
                            SpaceDescriptor::euclidean(2, Norm::L2),
                            OpenSet::ball(vec![c, 0.0], r1),
                            OpenSet::ball(vec![c + r1 + gap + r2, 0.0], r2),
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
                if !separated_additivity_check(&space, &a, &b, budget, tol)?.additive {
                    failures += 1;
                }
            }
            Ok(holds(failures == 0, format!("{failures} of 30 separated pairs not confirmed additive"), Value::Null))
        }
        Property::Pseudometric => {
            let line = lebesgue(SpaceDescriptor::real_line());
            let mut misses = 0;
            for _ in 0..200 {
                let (x, y) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
                let b = induced_pseudometric(&line, &Point::scalar(x), &Point::scalar(y), 24)?;
                if !b.contains((x - y).abs(), 1e-4) {
                    misses += 1;
                }
            }
            let triples: Vec<(Point, Point, Point)> = (0..100)
                .map(|_| {
                    let mut p = || Point::scalar(rng.gen_range(-10.0..10.0));
                    (p(), p(), p())
                })
                .collect();
            let rep = pseudometric_axiom_check(&line, &triples, 1e-6, 24)?;
            Ok(holds(
                misses == 0 && rep.passed(),
                format!("{misses} of 200 brackets miss |x - y|; axioms on {} triples: {}", rep.checked, rep.passed()),
                to_value(&rep),
            ))
        }
        Property::UniformContinuity => {
            let cases = [
                (FunctionSpec::Identity, lebesgue(SpaceDescriptor::real_line()), 1.0),
                (FunctionSpec::Sin, lebesgue(SpaceDescriptor::real_line()), 1.0),
                (FunctionSpec::Projection { k: 1 }, inst(SpaceDescriptor::plane(), MeasureKind::DiamOuter), 1.0),
            ];
            let mut worst = 0.0_f64;
            let eps = 0.05;
            for (f, instance, l) in &cases {
                let s =
                    spot_check(f, instance, &tmslab_core::ac::DeltaRule::lipschitz(*l), eps, cfg.budgets.spot_checks, cfg.seed)?;
                worst = worst.max(s.max_member_oscillation / eps);
            }
            Ok(holds(worst <= 1.0, format!("largest member oscillation is {worst:.4} eps at scale delta(eps)"), Value::Null))
        }
        Property::Equivalence => {
            let unit = lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0));
            let eps = 0.25;
            let mut rows = Vec::new();
            let mut agree = true;
            for f in [FunctionSpec::Identity, FunctionSpec::Sin, FunctionSpec::Sqrt, FunctionSpec::Cantor, FunctionSpec::Square] {
                let v = analyze(&f, &unit, eps, &analyze_config(cfg))?;
                let classical = standard_ac_check(&f, 0.0, 1.0, eps, &DEFAULT_DELTAS, STANDARD_N_MAX)?;
                let decided = v.is_certified() || v.is_falsified();
                agree &= decided && v.is_certified() == classical.holds();
                rows.push(json!({ "function": f.name(), "pipeline": verdict_label(&v), "classical": classical.holds() }));
            }
            Ok(holds(agree, format!("{} functions compared at eps = {eps}", rows.len()), Value::Array(rows)))
        }
        Property::Restriction => {
            let line = lebesgue(SpaceDescriptor::real_line());
            let eps = 0.01;
            let v = analyze(&FunctionSpec::Sin, &line, eps, &analyze_config(cfg))?;
            let Some(rule) = v.delta_rule().cloned() else {
                return Ok(holds(false, "sin was not certified on the line".into(), to_value(&v)));
            };
            let mut failures = 0;
            for _ in 0..10 {
                let a = rng.gen_range(-10.0..10.0);
                let sub = line.restrict(&OpenSet::interval(a, a + rng.gen_range(0.1..3.0)))?;
                failures += spot_check(&FunctionSpec::Sin, &sub, &rule, eps, cfg.budgets.spot_checks, rng.gen())?.failures;
            }
            Ok(holds(
                failures == 0,
                format!("{failures} failing families over 10 open sub-intervals with the same delta"),
                Value::Null,
            ))
        }
        Property::LipschitzCrossCheck => {
            let eps = 0.05;
            let mut found = 0;
            let mut checked = 0;
            let cases = [
                (FunctionSpec::Identity, lebesgue(SpaceDescriptor::real_line())),
                (FunctionSpec::Sin, lebesgue(SpaceDescriptor::real_line())),
                (FunctionSpec::Projection { k: 1 }, inst(SpaceDescriptor::plane(), MeasureKind::DiamOuter)),
            ];
            let config = analyze_config(cfg);
            for (f, instance) in &cases {
                let est = estimate_local_lipschitz(f, instance, &config.scales, config.budget)?;
                if !est.accepted() {
                    continue;
                }
                checked += 1;
                let delta = eps / est.estimate;
                let deltas: Vec<f64> = (0..4).map(|k| delta * 10f64.powi(-k)).collect();
                if falsify_ac(f, instance, eps, &deltas, &Strategy::ALL, cfg.seed)?.is_falsified() {
                    found += 1;
                }
            }
            Ok(holds(
                found == 0 && checked > 0,
                format!("{found} of {checked} accepted estimates falsified below eps / L"),
                Value::Null,
            ))
        }
        Property::ComplexIdentityDominated => {
            let circle = inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter);
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..100 {
                let c = rng.gen_range(0.0..6.0);
                let arc = OpenSet::arc(c, c + rng.gen_range(1e-3..3.0));
                let w = oscillation_upper(&FunctionSpec::ComplexIdentity, &circle.space, &arc)?;
                worst = worst.max(w - circle.measure_lower(&arc)?);
            }
            Ok(holds(worst <= 1e-9, format!("max omega - nu = {worst:.3e} over 100 arcs"), Value::Null))
        }
        Property::LinearDominance => {
            let mut worst = f64::NEG_INFINITY;
            for i in 0..20 {
                let n = rng.gen_range(1..5);
                let map = if i % 2 == 0 {
                    LinearMapSpec::FunctionalOnRn {
                        coefficients: (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(),
                        norm: Norm::L2,
                    }
                } else {
                    LinearMapSpec::MatrixOnGrid {
                        matrix: (0..n + 1).map(|_| (0..n + 1).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect(),
                        domain_norm: Norm::Sup,
                        codomain_norm: Norm::L2,
                    }
                };
                let (est, v) = ac_from_bounded(&map, 0.01, cfg.budgets.probes, cfg.budgets.spot_checks, rng.gen())?;
                match v.certificate() {
                    Some(Certificate::LinearBounded { norm }) => worst = worst.max(est.lower - norm),
                    _ => worst = f64::INFINITY,
                }
            }
            Ok(holds(
                worst <= 1e-6,
                format!("max (norm lower bound - certificate constant) = {worst:.3e} over 20 maps"),
                Value::Null,
            ))
        }
        Property::ShiftInvariance => {
            let space = SpaceDescriptor::euclidean(2, Norm::L2);
            let f = FunctionSpec::LinearOnSpace { coefficients: vec![1.5, -0.5] };
            let mut worst = 0.0_f64;
            for _ in 0..50 {
                let ball = OpenSet::ball(vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)], rng.gen_range(1e-3..2.0));
                let c = rng.gen_range(-100.0..100.0);
                let a = oscillation_upper(&f, &space, &ball)?;
                let b = oscillation_upper(&FunctionSpec::shift(f.clone(), c), &space, &ball)?;
                worst = worst.max((a - b).abs());
            }
            Ok(holds(worst <= 1e-9, format!("max oscillation change {worst:.3e} over 50 balls"), Value::Null))
        }
        Property::DifferenceGrowth => {
            let norms = [4usize, 8, 16, 32, 64]
                .iter()
                .map(|m| {
                    operator_norm(&LinearMapSpec::DifferenceOperator { m: *m }, cfg.budgets.probes, cfg.seed).map(|e| e.lower)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ok = norms.windows(2).all(|w| w[1] >= 1.9 * w[0]);
            Ok(holds(
                ok,
                format!("norm lower bounds {norms:?} for m = 4..64 (illustrative, never a falsification)"),
                to_value(&norms),
            ))
        }
    }
}

pub fn run_entry(e: &CorpusEntry, cfg: &RunConfig) -> EntryResult {
    let expected = e.expectation.to_string();
    let out = run_task(&e.task, cfg).unwrap_or_else(|err| Outcome {
        actual: format!("error: {err}"),
        detail: err.to_string(),
        data: Value::Null,
    });
    EntryResult {
        id: e.id.to_string(),
        source: e.source.to_string(),
        met: out.actual == expected,
        expected,
        actual: out.actual,
        detail: out.detail,
        data: out.data,
    }
}

/// Runs entries concurrently; the report sorts them by id afterwards.
pub fn run_corpus(entries: &[CorpusEntry], cfg: &RunConfig) -> Vec<EntryResult> {
    entries.par_iter().map(|e| run_entry(e, cfg)).collect()
}
