//! Sampled checks of the topological-measure-space axioms and the induced
//! pseudometric d(x, y) = inf m(U) over open connected U containing x and y.
//!
//! Checks are resolution-bound: a pass means no violation was found among the
//! enumerated neighborhoods, while a failure always carries a concrete witness.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::measure::{lebesgue, measure_of, nu_lower_connected, nu_lower_projection, MeasureEstimate, MeasureKind};
use crate::spaces::{
    bounding_box, canonical, contains, diam_upper, is_connected, is_empty, is_subset, line_hull, normalize_angle, point_outside,
    CircleMetric, OpenSet, Point, SpaceDescriptor,
};

/// Radius halvings tried by the axiom (ii) search.
const RADIUS_STEPS: usize = 60;
/// Axiom (iii) tries ε = scale·2⁻ᵏ for k in 0..=EPS_STEPS.
pub const EPS_STEPS: i32 = 20;
const OFFSETS: [f64; 5] = [0.02, 0.25, 0.5, 0.75, 0.98];
const OUTSIDE_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmsInstance {
    pub space: SpaceDescriptor,
    pub measure_kind: MeasureKind,
    pub c_outer_regular: bool,
}

impl TmsInstance {
    /// The C-outer-regularity flag defaults to true only for Lebesgue measure
    /// on intervals and boxes.
    pub fn new(space: SpaceDescriptor, measure_kind: MeasureKind) -> Result<Self> {
        space.validate()?;
        if !measure_kind.supports(&space) {
            return Err(TmsError::UnsupportedMeasure(format!("{measure_kind:?} is not available on {}", space.kind_name())));
        }
        let c_outer_regular = measure_kind == MeasureKind::Lebesgue
            && matches!(space, SpaceDescriptor::RealInterval { .. } | SpaceDescriptor::EuclideanBox { .. });
        Ok(TmsInstance { space, measure_kind, c_outer_regular })
    }

    pub fn with_c_outer_regular(mut self, flag: bool) -> Result<Self> {
        let allowed = match self.measure_kind {
            MeasureKind::Lebesgue => {
                matches!(self.space, SpaceDescriptor::RealInterval { .. } | SpaceDescriptor::EuclideanBox { .. })
            }
            MeasureKind::DiamOuter => true,
            MeasureKind::Counting => false,
        };
        if flag && !allowed {
            return Err(TmsError::InvalidArgument(format!(
                "C-outer regularity cannot be declared for {:?} on {}",
                self.measure_kind,
                self.space.kind_name()
            )));
        }
        self.c_outer_regular = flag;
        Ok(self)
    }

    pub fn measure(&self, s: &OpenSet, budget: usize) -> Result<MeasureEstimate> {
        measure_of(&self.space, self.measure_kind, s, budget)
    }

    /// Cheap upper bound: exact Lebesgue, the self-cover for ν, +∞ for counting.
    /// Unions are bounded by the sum over their parts.
    pub fn measure_upper(&self, s: &OpenSet) -> Result<f64> {
        let s = canonical(&self.space, s)?;
        if is_empty(&self.space, &s) {
            return Ok(0.0);
        }
        if let OpenSet::Union { parts } = &s {
            if self.measure_kind != MeasureKind::Lebesgue || lebesgue(&self.space, &s).is_err() {
                let mut total = 0.0;
                for p in parts {
                    total += self.measure_upper(p)?;
                }
                return Ok(total);
            }
        }
        match self.measure_kind {
            MeasureKind::Lebesgue => match lebesgue(&self.space, &s) {
                Ok(est) => Ok(est.upper),
                // Balls cut by the space boundary: the clipped bounding box bounds them.
                Err(TmsError::UnsupportedMeasure(_)) => {
                    Ok(bounding_box(&self.space, &s).map_or(f64::INFINITY, |bb| bb.iter().map(|(l, h)| h - l).product()))
                }
                Err(e) => Err(e),
            },
            MeasureKind::DiamOuter => diam_upper(&self.space, &s),
            MeasureKind::Counting => Ok(f64::INFINITY),
        }
    }

    /// Cheap lower bound matching `measure_upper`.
    pub fn measure_lower(&self, s: &OpenSet) -> Result<f64> {
        let s = canonical(&self.space, s)?;
        if is_empty(&self.space, &s) {
            return Ok(0.0);
        }
        match self.measure_kind {
            MeasureKind::Lebesgue => match lebesgue(&self.space, &s) {
                Ok(est) => Ok(est.lower),
                Err(TmsError::UnsupportedMeasure(_)) => Ok(0.0),
                Err(e) => Err(e),
            },
            MeasureKind::DiamOuter => {
                let chain = if is_connected(&self.space, &s) { nu_lower_connected(&self.space, &s)?.lower } else { 0.0 };
                Ok(chain.max(nu_lower_projection(&self.space, &s)))
            }
            MeasureKind::Counting => Ok(1.0),
        }
    }

    /// The instance restricted to an open sub-interval or sub-box.
    pub fn restrict(&self, region: &OpenSet) -> Result<TmsInstance> {
        let region = canonical(&self.space, region)?;
        let space = match (&self.space, &region) {
            (SpaceDescriptor::RealInterval { .. }, OpenSet::Interval { .. }) => {
                let (a, b) = line_hull(&self.space, &region).ok_or_else(|| TmsError::InvalidArgument("empty region".into()))?;
                SpaceDescriptor::RealInterval {
                    a: a.is_finite().then_some(a),
                    b: b.is_finite().then_some(b),
                    closed_a: false,
                    closed_b: false,
                }
            }
            (SpaceDescriptor::EuclideanBox { dim, norm, .. }, OpenSet::Cuboid { .. }) => {
                let bb = bounding_box(&self.space, &region).unwrap();
                SpaceDescriptor::EuclideanBox { dim: *dim, bounds: Some(bb.iter().map(|(l, h)| [*l, *h]).collect()), norm: *norm }
            }
            _ => return Err(TmsError::UnsupportedShape("restriction needs an interval or a box".into())),
        };
        let inst = TmsInstance::new(space, self.measure_kind)?;
        inst.with_c_outer_regular(self.c_outer_regular)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiWitness {
    pub point: Point,
    pub eps: f64,
    pub set: OpenSet,
    pub measure_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiFailure {
    pub point: Point,
    pub eps: f64,
    pub smallest_radius: f64,
    pub set: OpenSet,
    #[serde(with = "crate::serde_float")]
    pub measure_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiReport {
    pub passed: bool,
    pub witnesses: Vec<AxiomIiWitness>,
    pub failures: Vec<AxiomIiFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiiViolation {
    pub neighborhood: OpenSet,
    pub measure_upper: f64,
    pub point_outside: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiiCase {
    pub point: Point,
    pub open_set: OpenSet,
    /// Largest ε on the schedule that localizes every small neighborhood.
    pub eps: Option<f64>,
    pub neighborhoods_checked: usize,
    pub violation: Option<AxiomIiiViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomIiiReport {
    pub passed: bool,
    pub cases: Vec<AxiomIiiCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub instance: TmsInstance,
    pub axiom_ii: AxiomIiReport,
    pub axiom_iii: AxiomIiiReport,
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axiom_ii.passed && self.axiom_iii.passed
    }

    /// The lowest-numbered failing axiom, if any.
    pub fn failed_axiom(&self) -> Option<u8> {
        if !self.axiom_ii.passed {
            Some(2)
        } else if !self.axiom_iii.passed {
            Some(3)
        } else {
            None
        }
    }
}

/// Which connected neighborhoods axiom (iii) quantifies over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborhoodFamily {
    /// Metric balls, intervals and arcs.
    #[default]
    Basic,
    /// Also thin axis-aligned boxes in spaces of dimension ≥ 2.
    WithAnisotropic,
}

/// For each (x, ε), shrinks metric balls around x from radius ε/3 until one
/// has measure below ε.
pub fn check_axiom_ii(instance: &TmsInstance, points: &[Point], eps_grid: &[f64]) -> Result<AxiomIiReport> {
    if eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(TmsError::InvalidArgument("eps values must be positive".into()));
    }
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for x in points {
        instance.space.check_point(x)?;
        for &eps in eps_grid {
            let mut found = None;
            let mut last = (eps / 3.0, OpenSet::Empty);
            for k in 0..RADIUS_STEPS {
                let r = eps / 3.0 / 2f64.powi(k as i32);
                let u = canonical(&instance.space, &OpenSet::ball(x.0.clone(), r))?;
                last = (r, u.clone());
                if !contains(&instance.space, &u, x) {
                    continue;
                }
                let up = instance.measure_upper(&u)?;
                if up < eps {
                    found = Some(AxiomIiWitness { point: x.clone(), eps, set: u, measure_upper: up });
                    break;
                }
            }
            match found {
                Some(w) => witnesses.push(w),
                None => {
                    let (r, u) = last;
                    let lower = instance.measure_lower(&u)?;
                    failures.push(AxiomIiFailure { point: x.clone(), eps, smallest_radius: r, set: u, measure_lower: lower });
                }
            }
        }
    }
    Ok(AxiomIiReport { passed: failures.is_empty(), witnesses, failures })
}

/// Connected open neighborhoods of `x` at geometrically spaced sizes, with `x`
/// placed at several relative offsets inside each.
pub fn neighborhoods_of(space: &SpaceDescriptor, x: &Point, extent: f64, family: NeighborhoodFamily) -> Vec<OpenSet> {
    let mut out = Vec::new();
    let sizes: Vec<f64> = (0..=80).map(|j| extent * 2f64.powf(-(j as f64) / 2.0)).collect();
    let n = space.dim();
    for &t in &sizes {
        for &alpha in &OFFSETS {
            match space {
                SpaceDescriptor::RealInterval { .. } => {
                    out.push(OpenSet::interval(x.0[0] - alpha * t, x.0[0] + (1.0 - alpha) * t));
                }
                SpaceDescriptor::RectifiableCurve { samples } => {
                    let s = samples.arclength_at(x.0[0]);
                    out.push(OpenSet::interval(
                        samples.param_at_arclength(s - alpha * t),
                        samples.param_at_arclength(s + (1.0 - alpha) * t),
                    ));
                }
                SpaceDescriptor::Circle { .. } => {
                    let t = t.min(TAU);
                    out.push(OpenSet::arc(x.0[0] - alpha * t, x.0[0] + (1.0 - alpha) * t));
                }
                _ => {
                    let r = t / 2.0;
                    let shift = (alpha - 0.5) * t;
                    let mut dirs: Vec<Vec<f64>> = Vec::new();
                    for i in 0..n.min(4) {
                        for sgn in [1.0, -1.0] {
                            let mut e = vec![0.0; n];
                            e[i] = sgn;
                            dirs.push(e);
                        }
                    }
                    dirs.push(vec![1.0; n]);
                    for d in dirs {
                        let len = space.norm_of(&d).unwrap();
                        let c: Vec<f64> = x.0.iter().zip(&d).map(|(xi, di)| xi + shift * di / len).collect();
                        out.push(OpenSet::ball(c, r));
                    }
                    if family == NeighborhoodFamily::WithAnisotropic && n >= 2 {
                        for kappa in [1e-1, 1e-3, 1e-6, 1e-9, 1e-12] {
                            for axis in 0..n.min(4) {
                                let bounds = (0..n)
                                    .map(|i| {
                                        if i == axis {
                                            [x.0[i] - alpha * t, x.0[i] + (1.0 - alpha) * t]
                                        } else {
                                            [x.0[i] - 0.5 * kappa * t, x.0[i] + 0.5 * kappa * t]
                                        }
                                    })
                                    .collect();
                                out.push(OpenSet::cuboid(bounds));
                            }
                        }
                    }
                }
            }
        }
    }
    if space.is_circle() {
        out.push(OpenSet::Whole);
    }
    out.retain(|u| contains(space, u, x));
    out
}

fn neighborhood_extent(space: &SpaceDescriptor, candidate_scales: &[f64]) -> f64 {
    let top = candidate_scales.iter().cloned().fold(0.0, f64::max);
    match space {
        SpaceDescriptor::Circle { .. } => TAU,
        SpaceDescriptor::RectifiableCurve { samples } => samples.length(),
        _ if space.is_bounded() => space.diameter().max(top),
        _ => 64.0 * top.max(1.0),
    }
}

/// For each (G, x) with x ∈ G, looks for the largest scheduled ε such that
/// every enumerated connected neighborhood U ∋ x with m(U) < ε lies in G.
pub fn check_axiom_iii(
    instance: &TmsInstance,
    cases: &[(OpenSet, Point)],
    candidate_scales: &[f64],
    family: NeighborhoodFamily,
) -> Result<AxiomIiiReport> {
    if candidate_scales.is_empty() || candidate_scales.iter().any(|s| !(*s > 0.0)) {
        return Err(TmsError::InvalidArgument("candidate scales must be positive".into()));
    }
    let space = &instance.space;
    let mut schedule: Vec<f64> = candidate_scales.iter().flat_map(|s| (0..=EPS_STEPS).map(move |k| s * 2f64.powi(-k))).collect();
    schedule.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let extent = neighborhood_extent(space, candidate_scales);
    let mut out = Vec::with_capacity(cases.len());
    for (idx, (g, x)) in cases.iter().enumerate() {
        space.check_point(x)?;
        if !contains(space, g, x) {
            return Err(TmsError::InvalidArgument(format!("sample point {:?} is not in its open set", x.0)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xA3 ^ idx as u64);
        let hoods = neighborhoods_of(space, x, extent, family);
        // Smallest measure among neighborhoods that provably leave G.
        let mut worst: Option<AxiomIiiViolation> = None;
        for u in &hoods {
            if is_subset(space, u, g) == Some(true) {
                continue;
            }
            let up = instance.measure_upper(u)?;
            if worst.as_ref().is_some_and(|w| w.measure_upper <= up) {
                continue;
            }
            if let Some(p) = point_outside(space, u, g, OUTSIDE_SAMPLES, &mut rng) {
                worst = Some(AxiomIiiViolation { neighborhood: u.clone(), measure_upper: up, point_outside: p });
            }
        }
        let eps = match &worst {
            None => schedule.first().copied(),
            Some(w) => schedule.iter().copied().find(|e| *e <= w.measure_upper),
        };
        let violation = if eps.is_none() { worst } else { None };
        out.push(AxiomIiiCase { point: x.clone(), open_set: g.clone(), eps, neighborhoods_checked: hoods.len(), violation });
    }
    Ok(AxiomIiiReport { passed: out.iter().all(|c| c.eps.is_some()), cases: out })
}

/// Random sample points of the space (inside its sampling window).
pub fn sample_space_points<R: Rng + ?Sized>(space: &SpaceDescriptor, n: usize, window: f64, rng: &mut R) -> Vec<Point> {
    let bounds: Vec<(f64, f64)> = space
        .axis_bounds()
        .into_iter()
        .map(|(l, h)| (if l.is_finite() { l } else { -window }, if h.is_finite() { h } else { window }))
        .collect();
    (0..n)
        .map(|_| match space {
            SpaceDescriptor::Circle { .. } => Point::angle(rng.gen_range(0.0..TAU)),
            _ => {
                let mut p = Point::new(bounds.iter().map(|(l, h)| rng.gen_range(*l..=*h)).collect());
                // Open endpoints are not points of the space.
                while !space.contains(&p) {
                    p = Point::new(bounds.iter().map(|(l, h)| rng.gen_range(*l..=*h)).collect());
                }
                p
            }
        })
        .collect()
}

/// An open set around `x` for axiom (iii): a ball of random radius whose
/// center is offset so that x is not centered.
pub fn random_open_around<R: Rng + ?Sized>(space: &SpaceDescriptor, x: &Point, rng: &mut R) -> OpenSet {
    let rho = match space {
        SpaceDescriptor::Circle { metric: CircleMetric::Arc } => rng.gen_range(0.05..2.5),
        SpaceDescriptor::Circle { metric: CircleMetric::Chord } => rng.gen_range(0.05..1.5),
        _ if space.is_bounded() => space.diameter() * rng.gen_range(0.05..0.6),
        _ => rng.gen_range(0.05..2.0),
    };
    let frac = rng.gen_range(-0.45..0.45);
    match space {
        SpaceDescriptor::Circle { .. } => {
            let c = normalize_angle(x.0[0] + frac * rho);
            OpenSet::ball(vec![c], rho)
        }
        SpaceDescriptor::RectifiableCurve { samples } => {
            let s = samples.arclength_at(x.0[0]) + frac * rho;
            OpenSet::interval(samples.param_at_arclength(s - rho), samples.param_at_arclength(s + rho))
        }
        _ => {
            let dir: Vec<f64> = x.0.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = space.norm_of(&dir).unwrap().max(1e-12);
            let c = x.0.iter().zip(&dir).map(|(xi, d)| xi + frac * rho * d / len).collect();
            OpenSet::ball(c, rho)
        }
    }
}

/// Runs both sampled axiom checks at `samples` random points.
pub fn check_tms(instance: &TmsInstance, samples: usize, seed: u64, family: NeighborhoodFamily) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sample_space_points(&instance.space, samples, 10.0, &mut rng);
    let eps_grid = [1.0, 0.1, 0.01, 1e-3];
    let axiom_ii = check_axiom_ii(instance, &points, &eps_grid)?;
    let cases: Vec<(OpenSet, Point)> =
        points.iter().map(|x| (random_open_around(&instance.space, x, &mut rng), x.clone())).collect();
    let axiom_iii = check_axiom_iii(instance, &cases, &[1.0], family)?;
    let mut notes = vec![
        "axiom (i): the sigma-algebra is the Borel sets of the metric topology, which contains every open set".to_string(),
        format!("resolution: {samples} sample points, eps grid {eps_grid:?}, eps schedule 2^-k for k <= {EPS_STEPS}"),
    ];
    if let Some(c) = axiom_iii.cases.iter().find(|c| c.violation.is_some()) {
        notes.push(format!("axiom (iii) violation at x = {:?}", c.point.0));
    }
    if let Some(f) = axiom_ii.failures.first() {
        notes.push(format!("axiom (ii) failure at x = {:?}, eps = {}", f.point.0, f.eps));
    }
    Ok(AxiomReport { instance: instance.clone(), axiom_ii, axiom_iii, notes })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    #[serde(with = "crate::serde_float")]
    pub lower: f64,
    #[serde(with = "crate::serde_float")]
    pub upper: f64,
}

impl Bracket {
    pub fn new(lower: f64, upper: f64) -> Self {
        Bracket { lower, upper }
    }

    pub fn exact(v: f64) -> Self {
        Bracket { lower: v, upper: v }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

impl std::ops::Add for Bracket {
    type Output = Bracket;

    fn add(self, other: Bracket) -> Bracket {
        Bracket::new(self.lower + other.lower, self.upper + other.upper)
    }
}

/// Connected opens containing p and q, shrinking with `k`.
fn joining_sets(space: &SpaceDescriptor, kind: MeasureKind, p: &Point, q: &Point, pad: f64) -> Vec<OpenSet> {
    let mut out = Vec::new();
    match space {
        SpaceDescriptor::RealInterval { .. } => {
            let (a, b) = (p.0[0].min(q.0[0]), p.0[0].max(q.0[0]));
            out.push(OpenSet::interval(a - pad, b + pad));
        }
        SpaceDescriptor::RectifiableCurve { samples } => {
            let (sa, sb) = (samples.arclength_at(p.0[0]), samples.arclength_at(q.0[0]));
            let (a, b) = (sa.min(sb), sa.max(sb));
            out.push(OpenSet::interval(samples.param_at_arclength(a - pad), samples.param_at_arclength(b + pad)));
        }
        SpaceDescriptor::Circle { .. } => {
            let ccw = (q.0[0] - p.0[0]).rem_euclid(TAU);
            let (start, len) = if ccw <= TAU - ccw { (p.0[0], ccw) } else { (q.0[0], TAU - ccw) };
            out.push(OpenSet::arc(start - pad, start + len + pad));
        }
        _ => {
            let d = space.dist(&p.0, &q.0);
            let mid: Vec<f64> = p.0.iter().zip(&q.0).map(|(a, b)| 0.5 * (a + b)).collect();
            out.push(OpenSet::ball(mid, 0.5 * d + pad));
            if kind == MeasureKind::Lebesgue && matches!(space, SpaceDescriptor::EuclideanBox { .. }) {
                // A staircase of thin boxes from p to q, one leg per axis.
                let n = p.dim();
                let mut corner = p.0.clone();
                let mut legs = Vec::new();
                for axis in 0..n {
                    let next_val = q.0[axis];
                    let bounds = (0..n)
                        .map(|i| {
                            if i == axis {
                                [corner[i].min(next_val) - pad, corner[i].max(next_val) + pad]
                            } else {
                                [corner[i] - pad, corner[i] + pad]
                            }
                        })
                        .collect();
                    legs.push(OpenSet::cuboid(bounds));
                    corner[axis] = next_val;
                }
                out.push(OpenSet::union(legs));
            }
        }
    }
    out
}

/// Bracket on d(p, q) = inf{m(U) : U open connected, p, q ∈ U}.
pub fn induced_pseudometric(instance: &TmsInstance, p: &Point, q: &Point, budget: usize) -> Result<Bracket> {
    let space = &instance.space;
    space.check_point(p)?;
    space.check_point(q)?;
    if budget == 0 {
        return Err(TmsError::InvalidArgument("budget must be at least 1".into()));
    }
    let d = space.dist(&p.0, &q.0);
    let base = d.max(1e-3);
    let mut upper = f64::INFINITY;
    for k in 0..budget {
        let pad = base * 4f64.powi(-(k as i32));
        for u in joining_sets(space, instance.measure_kind, p, q, pad) {
            if !(contains(space, &u, p) && contains(space, &u, q)) {
                continue;
            }
            upper = upper.min(instance.measure_upper(&u)?);
        }
    }
    let lower = match (instance.measure_kind, space) {
        (MeasureKind::DiamOuter, _) => d,
        (MeasureKind::Lebesgue, SpaceDescriptor::RealInterval { .. }) => d,
        (MeasureKind::Counting, _) => 1.0,
        _ => 0.0,
    };
    Ok(Bracket::new(lower.min(upper), upper))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudometricReport {
    pub checked: usize,
    pub nonnegative: bool,
    pub symmetric: bool,
    pub triangle: bool,
    pub violations: Vec<String>,
}

impl PseudometricReport {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.symmetric && self.triangle
    }
}

/// Triangle inequality checked as upper(x,y) ≤ lower(x,z) + lower(z,y) + tol,
/// which can only pass when the true inequality holds.
pub fn pseudometric_axiom_check(
    instance: &TmsInstance,
    triples: &[(Point, Point, Point)],
    tol: f64,
    budget: usize,
) -> Result<PseudometricReport> {
    let mut rep = PseudometricReport { checked: 0, nonnegative: true, symmetric: true, triangle: true, violations: Vec::new() };
    for (x, y, z) in triples {
        let dxy = induced_pseudometric(instance, x, y, budget)?;
        let dyx = induced_pseudometric(instance, y, x, budget)?;
        let dxz = induced_pseudometric(instance, x, z, budget)?;
        let dzy = induced_pseudometric(instance, z, y, budget)?;
        rep.checked += 1;
        if dxy.lower < 0.0 {
            rep.nonnegative = false;
            rep.violations.push(format!("negative lower bound at {:?}, {:?}", x.0, y.0));
        }
        if (dxy.upper - dyx.upper).abs() > tol || (dxy.lower - dyx.lower).abs() > tol {
            rep.symmetric = false;
            rep.violations.push(format!("asymmetric brackets at {:?}, {:?}", x.0, y.0));
        }
        if dxy.upper > dxz.lower + dzy.lower + tol {
            rep.triangle = false;
            rep.violations.push(format!(
                "triangle unconfirmed: {} > {} + {} at {:?}, {:?}, {:?}",
                dxy.upper, dxz.lower, dzy.lower, x.0, y.0, z.0
            ));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Norm;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn inst(space: SpaceDescriptor, kind: MeasureKind) -> TmsInstance {
        TmsInstance::new(space, kind).unwrap()
    }

    #[test]
    fn axiom_ii_examples() {
        let r = inst(SpaceDescriptor::real_line(), MeasureKind::Lebesgue);
        let rep = check_axiom_ii(&r, &[Point::scalar(0.0)], &[0.3]).unwrap();
        assert!(rep.passed);
        let OpenSet::Interval { a, b } = rep.witnesses[0].set else { panic!("expected an interval") };
        assert_abs_diff_eq!(a, -0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.witnesses[0].measure_upper, 0.2, epsilon = 1e-15);

        let c = inst(SpaceDescriptor::real_line(), MeasureKind::Counting);
        let rep = check_axiom_ii(&c, &[Point::scalar(0.0)], &[0.5]).unwrap();
        assert!(!rep.passed);
        assert!(rep.failures[0].measure_lower >= 1.0);

        let s = inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter);
        let rep = check_axiom_ii(&s, &[Point::angle(0.0)], &[0.1]).unwrap();
        assert!(rep.passed);
        assert_abs_diff_eq!(rep.witnesses[0].measure_upper, 0.2 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn axiom_iii_examples() {
        let r = inst(SpaceDescriptor::real_line(), MeasureKind::Lebesgue);
        let rep =
            check_axiom_iii(&r, &[(OpenSet::interval(0.0, 1.0), Point::scalar(0.5))], &[0.4], NeighborhoodFamily::Basic).unwrap();
        assert_eq!(rep.cases[0].eps, Some(0.4));

        let s = inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::Lebesgue);
        let g = OpenSet::arc(0.0, PI / 2.0);
        let rep = check_axiom_iii(&s, &[(g.clone(), Point::angle(PI / 4.0))], &[1.0], NeighborhoodFamily::Basic).unwrap();
        assert!(!rep.passed);
        let v = rep.cases[0].violation.as_ref().unwrap();
        assert_eq!(v.measure_upper, 0.0);
        assert!(!contains(&s.space, &g, &v.point_outside));
        assert!(contains(&s.space, &v.neighborhood, &v.point_outside));

        let p = inst(SpaceDescriptor::plane(), MeasureKind::DiamOuter);
        let rep = check_axiom_iii(
            &p,
            &[(OpenSet::ball(vec![0.0, 0.0], 1.0), Point::new(vec![0.0, 0.0]))],
            &[1.0],
            NeighborhoodFamily::WithAnisotropic,
        )
        .unwrap();
        assert_eq!(rep.cases[0].eps, Some(1.0));
    }

    #[test]
    fn plane_lebesgue_fails_with_thin_boxes() {
        let p = inst(SpaceDescriptor::plane(), MeasureKind::Lebesgue);
        let case = [(OpenSet::ball(vec![0.0, 0.0], 1.0), Point::new(vec![0.0, 0.0]))];
        assert!(check_axiom_iii(&p, &case, &[1.0], NeighborhoodFamily::Basic).unwrap().passed);
        let rep = check_axiom_iii(&p, &case, &[1.0], NeighborhoodFamily::WithAnisotropic).unwrap();
        assert!(!rep.passed);
        let v = rep.cases[0].violation.as_ref().unwrap();
        assert!(v.measure_upper < 1e-5);
    }

    #[test]
    fn pseudometric_examples() {
        let r = inst(SpaceDescriptor::real_line(), MeasureKind::Lebesgue);
        let b = induced_pseudometric(&r, &Point::scalar(0.2), &Point::scalar(0.7), 40).unwrap();
        assert!(b.lower >= 0.5 - 1e-6 && b.upper <= 0.5 + 1e-6, "{b:?}");
        let s = inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter);
        let b = induced_pseudometric(&s, &Point::angle(0.0), &Point::angle(PI / 2.0), 40).unwrap();
        assert_abs_diff_eq!(b.upper, PI / 2.0, epsilon = 1e-9);
        let small = induced_pseudometric(&r, &Point::scalar(0.3), &Point::scalar(0.3), 5).unwrap().upper;
        let large = induced_pseudometric(&r, &Point::scalar(0.3), &Point::scalar(0.3), 30).unwrap().upper;
        assert!(large < small && large < 1e-10);

        let t = [(Point::scalar(0.0), Point::scalar(1.0), Point::scalar(0.3))];
        assert!(pseudometric_axiom_check(&r, &t, 1e-6, 40).unwrap().passed());
        let t = [(Point::angle(0.0), Point::angle(PI), Point::angle(PI / 2.0))];
        assert!(pseudometric_axiom_check(&s, &t, 1e-6, 40).unwrap().passed());
    }

    #[test]
    fn flag_rules() {
        let s = inst(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::Lebesgue);
        assert!(!s.c_outer_regular);
        assert!(s.clone().with_c_outer_regular(true).is_err());
        assert!(inst(SpaceDescriptor::plane(), MeasureKind::Lebesgue).c_outer_regular);
        assert!(inst(SpaceDescriptor::plane(), MeasureKind::DiamOuter).with_c_outer_regular(true).is_ok());
        assert!(TmsInstance::new(SpaceDescriptor::grid(4, Norm::Sup), MeasureKind::Lebesgue).is_err());
    }

    #[test]
    fn restriction_passes() {
        let r = inst(SpaceDescriptor::real_line(), MeasureKind::Lebesgue);
        let sub = r.restrict(&OpenSet::interval(0.2, 0.8)).unwrap();
        let rep = check_tms(&sub, 30, 3, NeighborhoodFamily::Basic).unwrap();
        assert!(rep.passed(), "{:?}", rep.notes);
    }

    #[test]
    fn standard_instances() {
        let cases = [
            (SpaceDescriptor::real_line(), MeasureKind::Lebesgue, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::closed_interval(0.0, 1.0), MeasureKind::Lebesgue, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::unit_cube(2, Norm::L2), MeasureKind::Lebesgue, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::plane(), MeasureKind::DiamOuter, NeighborhoodFamily::WithAnisotropic, None),
            (SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::circle(CircleMetric::Chord), MeasureKind::DiamOuter, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::grid(8, Norm::Sup), MeasureKind::DiamOuter, NeighborhoodFamily::Basic, None),
            (SpaceDescriptor::real_line(), MeasureKind::Counting, NeighborhoodFamily::Basic, Some(2)),
            (SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::Lebesgue, NeighborhoodFamily::Basic, Some(3)),
            (SpaceDescriptor::plane(), MeasureKind::Lebesgue, NeighborhoodFamily::WithAnisotropic, Some(3)),
        ];
        for (space, kind, family, expected) in cases {
            let name = format!("{} {kind:?}", space.kind_name());
            let rep = check_tms(&inst(space, kind), 40, 11, family).unwrap();
            assert_eq!(rep.failed_axiom(), expected, "{name}: {:?}", rep.notes);
        }
    }
}
