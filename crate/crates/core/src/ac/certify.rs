//! Certification routes (locally Lipschitz, integral representation, gluing)
//! and the `analyze` pipeline that combines them with the falsifier.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::measure::MeasureKind;
use crate::spaces::{Point, SpaceDescriptor};
use crate::tms::{sample_space_points, TmsInstance};

use super::falsify::{falsify_ac, Strategy, DEFAULT_DELTAS};
use super::family::{random_family, DisjointFamily};
use super::function::{oscillation, FunctionSpec, GridDensity, IntegralMode};
use super::lipschitz::estimate_local_lipschitz;
use super::{AcVerdict, Certificate, DeltaRule, GluedPiece, SpotCheck, TailProfile};

/// Relative slack added to an accepted Lipschitz estimate.
const LIPSCHITZ_SLACK: f64 = 1e-6;
const SPOT_BUDGET: usize = 32;
const CONTINUITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub deltas: Vec<f64>,
    pub scales: Vec<f64>,
    pub budget: usize,
    pub seed: u64,
    pub spot_checks: usize,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            deltas: DEFAULT_DELTAS.to_vec(),
            scales: vec![1.0, 0.1, 0.01, 1e-3, 1e-4],
            budget: 2000,
            seed: 0,
            spot_checks: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotCheckSummary {
    pub checks: Vec<SpotCheck>,
    pub failures: usize,
    /// Largest sampled oscillation of a single member: a sampled modulus of
    /// continuity at scale δ(ε).
    pub max_member_oscillation: f64,
}

impl SpotCheckSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Draws `n` random P_δ(ε) families, half of them anchored at sampled points,
/// and checks Σω upper < ε on each.
pub fn spot_check(
    f: &FunctionSpec,
    instance: &TmsInstance,
    rule: &DeltaRule,
    eps: f64,
    n: usize,
    seed: u64,
) -> Result<SpotCheckSummary> {
    let delta = rule.delta(eps);
    if !(delta > 0.0) {
        return Err(TmsError::InvalidArgument(format!("delta rule gives {delta} at eps = {eps}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = &instance.space;
    let mut anchors = sample_space_points(space, n.div_ceil(2), 10.0, &mut rng);
    // Finite left ends are where singular behavior tends to sit.
    if let Some(&(l, _)) = space.axis_bounds().first() {
        if l.is_finite() && !matches!(space, SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. }) {
            let mut p = vec![l; space.dim()];
            for (c, (lo, _)) in p.iter_mut().zip(space.axis_bounds()) {
                *c = lo;
            }
            if let Some(a) = anchors.first_mut() {
                *a = Point::new(p);
            }
        }
    }
    let mut checks = Vec::with_capacity(n);
    let mut failures = 0;
    let mut max_member = 0.0_f64;
    for i in 0..n {
        let anchor = if i % 2 == 0 { anchors.get(i / 2) } else { None };
        let fam = random_family(instance, delta, anchor, &mut rng)?;
        let (upper, member) = oscillation_sums(f, space, &fam, &mut rng)?;
        max_member = max_member.max(member);
        if !(upper < eps) || !fam.in_p_delta(delta) {
            failures += 1;
        }
        checks.push(SpotCheck {
            eps,
            delta,
            family_size: fam.len(),
            total_measure_upper: fam.total_measure_upper,
            oscillation_sum_upper: upper,
        });
    }
    Ok(SpotCheckSummary { checks, failures, max_member_oscillation: max_member })
}

fn oscillation_sums(f: &FunctionSpec, space: &SpaceDescriptor, fam: &DisjointFamily, rng: &mut impl Rng) -> Result<(f64, f64)> {
    let mut upper = 0.0;
    let mut member = 0.0_f64;
    for s in &fam.sets {
        let b = oscillation(f, space, s, SPOT_BUDGET, rng)?;
        upper += b.upper;
        member = member.max(b.lower);
    }
    Ok((upper, member))
}

fn certified(certificate: Certificate, delta_rule: DeltaRule, summary: SpotCheckSummary) -> AcVerdict {
    if summary.passed() {
        AcVerdict::Certified { certificate, delta_rule, spot_checks: summary.checks }
    } else {
        AcVerdict::Inconclusive {
            diagnostics: vec![format!("{} of {} spot-check families reached eps", summary.failures, summary.checks.len())],
            partial: Vec::new(),
        }
    }
}

/// Certificate δ(ε) = ε/L for a Lipschitz constant L with respect to the measure.
pub fn certify_ac_lipschitz(
    l: f64,
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    n_spot: usize,
    seed: u64,
) -> Result<AcVerdict> {
    if !(l >= 0.0) || !l.is_finite() {
        return Ok(AcVerdict::inconclusive(format!("no finite Lipschitz constant (got {l})")));
    }
    f.validate(&instance.space)?;
    let rule = DeltaRule::lipschitz(l);
    let summary = spot_check(f, instance, &rule, eps, n_spot, seed)?;
    Ok(certified(Certificate::LocallyLipschitz { l }, rule, summary))
}

/// Absolute values of the density, sorted, with suffix sums, so that the tail
/// at any level costs one binary search.
struct TailTable {
    sorted: Vec<f64>,
    suffix: Vec<f64>,
    cell: f64,
}

impl TailTable {
    fn new(g: &GridDensity) -> Self {
        let mut sorted: Vec<f64> = g.density().iter().map(|d| d.abs()).collect();
        sorted.sort_by(f64::total_cmp);
        let mut suffix = vec![0.0; sorted.len() + 1];
        for i in (0..sorted.len()).rev() {
            suffix[i] = suffix[i + 1] + sorted[i];
        }
        TailTable { sorted, suffix, cell: g.cell() }
    }

    fn tail(&self, p: f64) -> f64 {
        let i = self.sorted.partition_point(|d| *d <= p);
        ((self.suffix[i] - p * (self.sorted.len() - i) as f64) * self.cell).max(0.0)
    }

    fn sup(&self) -> f64 {
        self.sorted.last().copied().unwrap_or(0.0)
    }

    /// Least integer level whose tail is below `threshold`.
    fn least_level(&self, threshold: f64) -> f64 {
        let (mut lo, mut hi) = (0.0_f64, self.sup().ceil());
        if self.tail(0.0) < threshold {
            return 0.0;
        }
        while hi - lo > 1.0 {
            let mid = ((lo + hi) / 2.0).floor();
            if self.tail(mid) < threshold {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Every integer level up to 64, then levels growing by 1/8, then the
    /// grid maximum where the tail vanishes.
    fn profile(&self) -> TailProfile {
        let top = self.sup().ceil();
        let mut levels = Vec::new();
        let mut p = 0.0_f64;
        while p < top {
            levels.push((p, self.tail(p)));
            p = if p < 64.0 { p + 1.0 } else { (p * 1.125).ceil() };
        }
        levels.push((top, 0.0));
        TailProfile::Table { levels }
    }
}

fn coarsened(g: &GridDensity) -> Option<GridDensity> {
    let d = g.density();
    if d.len() < 4 {
        return None;
    }
    let (lo, hi) = g.support();
    let pairs: Vec<f64> = d.chunks(2).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    if d.len() % 2 == 1 {
        return None;
    }
    GridDensity::new(pairs, g.mode(), lo, hi).ok()
}

fn integral_constants(mode: IntegralMode) -> (f64, f64) {
    match mode {
        IntegralMode::Symmetric => (4.0, 0.25),
        IntegralMode::Cumulative => (2.0, 0.5),
    }
}

/// Truncation certificate for an integral of a grid density: p is the least
/// integer level with tail below ε/4 (symmetric) or ε/2 (cumulative), and
/// δ(ε) = ε/(4p) or ε/(2p).
pub fn certify_ac_integral(g: &GridDensity, instance: &TmsInstance, eps: f64, n_spot: usize, seed: u64) -> Result<AcVerdict> {
    if !(eps > 0.0) {
        return Err(TmsError::InvalidArgument("eps must be positive".into()));
    }
    if instance.measure_kind != MeasureKind::Lebesgue || !matches!(instance.space, SpaceDescriptor::RealInterval { .. }) {
        return Ok(AcVerdict::inconclusive("integral certificates need Lebesgue measure on a real interval"));
    }
    let f = FunctionSpec::GridDensityIntegral(g.clone());
    let mode = g.mode();
    let (divisor, share) = integral_constants(mode);
    let table = TailTable::new(g);
    let p = table.least_level(share * eps);
    if let Some(c) = coarsened(g) {
        let pc = TailTable::new(&c).least_level(share * eps);
        if p > 2.0 * pc + 1.0 {
            return Ok(AcVerdict::inconclusive(format!(
                "truncation level does not settle under refinement: {pc} on the coarse grid, {p} on the fine grid"
            )));
        }
    }
    let tail = table.tail(p);
    let rule =
        if g.l1() == 0.0 { DeltaRule::Unbounded } else { DeltaRule::Truncation { divisor, share, profile: table.profile() } };
    let summary = spot_check(&f, instance, &rule, eps, n_spot, seed)?;
    Ok(certified(Certificate::IntegralL1 { p, tail, mode }, rule, summary))
}

/// √x on [0, b] as the cumulative integral of 1/(2√t), whose tail at level p
/// is at most 1/(4p).
pub fn half_inv_sqrt_certificate(instance: &TmsInstance, eps: f64, n_spot: usize, seed: u64) -> Result<AcVerdict> {
    if !(eps > 0.0) {
        return Err(TmsError::InvalidArgument("eps must be positive".into()));
    }
    let rule = DeltaRule::Truncation { divisor: 2.0, share: 0.5, profile: TailProfile::HalfInvSqrt };
    let (p, tail) = TailProfile::HalfInvSqrt.level_below(0.5 * eps).expect("positive threshold");
    let summary = spot_check(&FunctionSpec::Sqrt, instance, &rule, eps, n_spot, seed)?;
    Ok(certified(Certificate::IntegralL1 { p, tail, mode: IntegralMode::Cumulative }, rule, summary))
}

/// A certified restriction of f to the interval piece [lo, hi].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluePiece {
    pub lo: f64,
    #[serde(with = "crate::serde_float")]
    pub hi: f64,
    pub function: FunctionSpec,
    pub verdict: AcVerdict,
}

fn piece_value(piece: &GluePiece, x: f64) -> Result<f64> {
    let space = SpaceDescriptor::RealInterval {
        a: Some(piece.lo),
        b: piece.hi.is_finite().then_some(piece.hi),
        closed_a: true,
        closed_b: true,
    };
    let v = piece.function.eval(&space, &Point::scalar(x))?;
    Ok(v.re)
}

/// Glues certified pieces of a monotone continuous function on adjacent
/// intervals. A set straddling a boundary splits into one part per piece, so
/// with k pieces δ(ε) = minᵢ δᵢ(ε/k).
pub fn glue_verdicts(pieces: &[GluePiece], monotone_continuous: bool) -> Result<AcVerdict> {
    if pieces.is_empty() {
        return Err(TmsError::InvalidPartition("no pieces".into()));
    }
    for (i, p) in pieces.iter().enumerate() {
        if !(p.lo < p.hi) {
            return Err(TmsError::InvalidPartition(format!("piece {i} is empty")));
        }
        if !p.verdict.is_certified() {
            return Err(TmsError::InsufficientHypotheses(format!("piece {i} is not certified")));
        }
    }
    if pieces.len() == 1 {
        return Ok(pieces[0].verdict.clone());
    }
    if !monotone_continuous {
        return Err(TmsError::InsufficientHypotheses("gluing needs a monotone continuous function".into()));
    }
    for (i, w) in pieces.windows(2).enumerate() {
        let gap = w[1].lo - w[0].hi;
        if gap.abs() > 1e-12 * (1.0 + w[0].hi.abs()) {
            let kind = if gap > 0.0 { "leave a gap" } else { "overlap" };
            return Err(TmsError::InvalidPartition(format!("pieces {i} and {} {kind}", i + 1)));
        }
        let left = piece_value(&w[0], w[0].hi)?;
        let right = piece_value(&w[1], w[1].lo)?;
        if (left - right).abs() > CONTINUITY_TOL {
            return Err(TmsError::InvalidPartition(format!("jump of {} at {}", (left - right).abs(), w[0].hi)));
        }
    }
    let k = pieces.len() as f64;
    let mut glued = Vec::with_capacity(pieces.len());
    let mut rules = Vec::with_capacity(pieces.len());
    for p in pieces {
        let (Some(certificate), Some(rule)) = (p.verdict.certificate(), p.verdict.delta_rule()) else { unreachable!() };
        glued.push(GluedPiece { lo: p.lo, hi: p.hi, certificate: certificate.clone(), delta_rule: rule.clone() });
        rules.push(DeltaRule::EpsScaled { factor: 1.0 / k, inner: Box::new(rule.clone()) });
    }
    Ok(AcVerdict::Certified {
        certificate: Certificate::Glued { pieces: glued },
        delta_rule: DeltaRule::Min { rules },
        spot_checks: Vec::new(),
    })
}

/// √x on [0, ∞): the integral certificate on [0, 1] glued to the Lipschitz
/// certificate on [1, ∞).
fn sqrt_half_line(instance: &TmsInstance, eps: f64, config: &AnalyzeConfig) -> Result<AcVerdict> {
    let head_space = SpaceDescriptor::closed_interval(0.0, 1.0);
    let head = TmsInstance::new(head_space, MeasureKind::Lebesgue)?;
    let tail_space = SpaceDescriptor::RealInterval { a: Some(1.0), b: None, closed_a: true, closed_b: false };
    let tail = TmsInstance::new(tail_space, MeasureKind::Lebesgue)?;
    let k = 2.0;
    let head_verdict = half_inv_sqrt_certificate(&head, eps / k, config.spot_checks, config.seed)?;
    let est = estimate_local_lipschitz(&FunctionSpec::Sqrt, &tail, &config.scales, config.budget)?;
    if !est.accepted() {
        return Ok(AcVerdict::Inconclusive { diagnostics: est.diagnostics, partial: Vec::new() });
    }
    let tail_verdict = certify_ac_lipschitz(
        est.estimate * (1.0 + LIPSCHITZ_SLACK),
        &FunctionSpec::Sqrt,
        &tail,
        eps / k,
        config.spot_checks,
        config.seed,
    )?;
    if !head_verdict.is_certified() || !tail_verdict.is_certified() {
        return Ok(AcVerdict::inconclusive("a piece of the [0,1] / [1,inf) split did not certify"));
    }
    let pieces = [
        GluePiece { lo: 0.0, hi: 1.0, function: FunctionSpec::Sqrt, verdict: head_verdict },
        GluePiece { lo: 1.0, hi: f64::INFINITY, function: FunctionSpec::Sqrt, verdict: tail_verdict },
    ];
    let AcVerdict::Certified { certificate, delta_rule, .. } = glue_verdicts(&pieces, true)? else { unreachable!() };
    let summary = spot_check(&FunctionSpec::Sqrt, instance, &delta_rule, eps, config.spot_checks, config.seed)?;
    Ok(certified(certificate, delta_rule, summary))
}

fn certify(f: &FunctionSpec, instance: &TmsInstance, eps: f64, config: &AnalyzeConfig) -> Result<AcVerdict> {
    let lebesgue_line =
        instance.measure_kind == MeasureKind::Lebesgue && matches!(instance.space, SpaceDescriptor::RealInterval { .. });
    match f {
        FunctionSpec::GridDensityIntegral(g) => return certify_ac_integral(g, instance, eps, config.spot_checks, config.seed),
        FunctionSpec::Sqrt if lebesgue_line && instance.space.axis_bounds()[0].0 == 0.0 => {
            return if instance.space.is_bounded() {
                half_inv_sqrt_certificate(instance, eps, config.spot_checks, config.seed)
            } else {
                sqrt_half_line(instance, eps, config)
            };
        }
        _ => {}
    }
    let est = estimate_local_lipschitz(f, instance, &config.scales, config.budget)?;
    if !est.accepted() {
        let mut diagnostics = vec![format!("local Lipschitz estimate rejected (estimate {})", est.estimate)];
        diagnostics.extend(est.diagnostics);
        return Ok(AcVerdict::Inconclusive { diagnostics, partial: Vec::new() });
    }
    certify_ac_lipschitz(est.estimate * (1.0 + LIPSCHITZ_SLACK), f, instance, eps, config.spot_checks, config.seed)
}

/// Certification first; a certificate is then cross-checked by the falsifier
/// on a schedule reaching below its δ(ε), and an uncertified function goes to
/// the falsifier on the configured schedule.
pub fn analyze(f: &FunctionSpec, instance: &TmsInstance, eps: f64, config: &AnalyzeConfig) -> Result<AcVerdict> {
    if !(eps > 0.0) {
        return Err(TmsError::InvalidArgument("eps must be positive".into()));
    }
    if config.budget == 0 || config.spot_checks == 0 {
        return Err(TmsError::InvalidArgument("budgets must be at least 1".into()));
    }
    f.validate(&instance.space)?;
    let verdict = certify(f, instance, eps, config)?;
    if let Some(rule) = verdict.delta_rule() {
        let delta = rule.delta(eps);
        if delta.is_finite() {
            let mut deltas = config.deltas.clone();
            while deltas.len() < 4 || deltas.last().is_some_and(|d| *d >= delta) {
                let next = deltas.last().map_or(0.1, |d| d / 10.0);
                deltas.push(next);
            }
            if let AcVerdict::Falsified { .. } = falsify_ac(f, instance, eps, &deltas, &Strategy::ALL, config.seed)? {
                return Ok(AcVerdict::inconclusive("certificate contradicted by a witness below its delta"));
            }
        }
        return Ok(verdict);
    }
    let mut notes = match verdict {
        AcVerdict::Inconclusive { diagnostics, .. } => diagnostics,
        _ => Vec::new(),
    };
    match falsify_ac(f, instance, eps, &config.deltas, &Strategy::ALL, config.seed)? {
        AcVerdict::Inconclusive { diagnostics, partial } => {
            notes.extend(diagnostics);
            Ok(AcVerdict::Inconclusive { diagnostics: notes, partial })
        }
        other => Ok(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{CircleMetric, Norm};

    fn lebesgue(space: SpaceDescriptor) -> TmsInstance {
        TmsInstance::new(space, MeasureKind::Lebesgue).unwrap()
    }

    #[test]
    fn lipschitz_certificates() {
        let line = lebesgue(SpaceDescriptor::real_line());
        let v = certify_ac_lipschitz(1.0, &FunctionSpec::Sin, &line, 0.01, 10, 1).unwrap();
        assert_eq!(v.delta_rule().unwrap().delta(0.01), 0.01);
        assert!(v.is_certified());
        let v = certify_ac_lipschitz(5.0, &FunctionSpec::Identity, &line, 1.0, 10, 1).unwrap();
        assert_eq!(v.delta_rule().unwrap().delta(1.0), 0.2);
        // An understated constant is caught by the spot checks.
        let v = certify_ac_lipschitz(0.1, &FunctionSpec::Identity, &line, 0.1, 10, 1).unwrap();
        assert!(!v.is_certified());
    }

    #[test]
    fn integral_certificates() {
        let line = lebesgue(SpaceDescriptor::real_line());
        let ind = GridDensity::new(vec![1.0; 100], IntegralMode::Cumulative, 0.0, 1.0).unwrap();
        let v = certify_ac_integral(&ind, &line, 0.1, 10, 2).unwrap();
        let Some(Certificate::IntegralL1 { p, .. }) = v.certificate() else { panic!("{v:?}") };
        assert_eq!(*p, 1.0);
        assert!((v.delta_rule().unwrap().delta(0.1) - 0.05).abs() < 1e-15);
        let zero = GridDensity::new(vec![0.0; 10], IntegralMode::Symmetric, 0.0, 1.0).unwrap();
        let v = certify_ac_integral(&zero, &line, 0.1, 10, 2).unwrap();
        assert_eq!(v.delta_rule(), Some(&DeltaRule::Unbounded));
    }

    #[test]
    fn capped_inverse_sqrt_density() {
        // Frozen from a separate floating-point quadrature of the midpoint-grid tail:
        // tail(37) = 0.025114, tail(38) = 0.024403, so p = 38 at threshold 0.025.
        let g = GridDensity::from_fn(100_000, 0.0, 1.0, IntegralMode::Symmetric, |t| (1.0 / t.sqrt()).min(1e3)).unwrap();
        let line = lebesgue(SpaceDescriptor::real_line());
        let v = certify_ac_integral(&g, &line, 0.1, 10, 4).unwrap();
        let Some(Certificate::IntegralL1 { p, tail, .. }) = v.certificate() else { panic!("{v:?}") };
        assert_eq!(*p, 38.0);
        assert!((tail - 0.024403).abs() < 1e-6, "{tail}");
        assert!((v.delta_rule().unwrap().delta(0.1) - 0.1 / 152.0).abs() < 1e-15);
        let table = TailTable::new(&g);
        assert!((table.tail(37.0) - 0.025114).abs() < 1e-6);
    }

    #[test]
    fn sqrt_on_the_unit_interval() {
        let unit = lebesgue(SpaceDescriptor::closed_interval(0.0, 1.0));
        let v = half_inv_sqrt_certificate(&unit, 0.1, 20, 5).unwrap();
        let Some(Certificate::IntegralL1 { p, .. }) = v.certificate() else { panic!("{v:?}") };
        assert_eq!(*p, 6.0);
        assert!((v.delta_rule().unwrap().delta(0.1) - 0.1 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn gluing() {
        let line = lebesgue(SpaceDescriptor::real_line());
        let one = certify_ac_lipschitz(1.0, &FunctionSpec::Identity, &line, 0.1, 4, 1).unwrap();
        let piece = |lo, hi, f| GluePiece { lo, hi, function: f, verdict: one.clone() };
        assert_eq!(glue_verdicts(&[piece(0.0, 1.0, FunctionSpec::Identity)], true).unwrap(), one);
        let jump = [piece(0.0, 1.0, FunctionSpec::Constant { c: 0.0 }), piece(1.0, 2.0, FunctionSpec::Constant { c: 1.0 })];
        assert!(matches!(glue_verdicts(&jump, true), Err(TmsError::InvalidPartition(_))));
        let gap = [piece(0.0, 1.0, FunctionSpec::Identity), piece(1.5, 2.0, FunctionSpec::Identity)];
        assert!(matches!(glue_verdicts(&gap, true), Err(TmsError::InvalidPartition(_))));
        let ok = [piece(0.0, 1.0, FunctionSpec::Identity), piece(1.0, 2.0, FunctionSpec::Identity)];
        let v = glue_verdicts(&ok, true).unwrap();
        assert_eq!(v.delta_rule().unwrap().delta(0.1), 0.05);
    }

    #[test]
    fn analyze_routes() {
        let config = AnalyzeConfig { spot_checks: 10, ..AnalyzeConfig::default() };
        let line = lebesgue(SpaceDescriptor::real_line());
        for f in [FunctionSpec::Identity, FunctionSpec::Sin, FunctionSpec::Cos] {
            let v = analyze(&f, &line, 0.01, &config).unwrap();
            let l = v.lipschitz_constant().unwrap_or_else(|| panic!("{f:?}: {v:?}"));
            assert!((l - 1.0).abs() < 0.05, "{f:?}: {l}");
        }
        let half = lebesgue(SpaceDescriptor::RealInterval { a: Some(0.0), b: None, closed_a: true, closed_b: false });
        let v = analyze(&FunctionSpec::Sqrt, &half, 0.01, &config).unwrap();
        assert!(matches!(v.certificate(), Some(Certificate::Glued { .. })), "{v:?}");
        let v = analyze(&FunctionSpec::Square, &line, 1.0, &config).unwrap();
        assert!(v.is_falsified());
        let plane = TmsInstance::new(SpaceDescriptor::euclidean(2, Norm::L2), MeasureKind::DiamOuter).unwrap();
        let v = analyze(&FunctionSpec::Projection { k: 1 }, &plane, 0.01, &config).unwrap();
        assert!(v.is_certified(), "{v:?}");
        let circle = TmsInstance::new(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter).unwrap();
        let v = analyze(&FunctionSpec::ComplexIdentity, &circle, 0.01, &config).unwrap();
        assert!(v.is_certified(), "{v:?}");
    }
}
