//! Witness-family search: for a fixed ε, every δ on a decreasing schedule must
//! admit a P_δ family whose sampled oscillation sum reaches ε.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::measure::MeasureKind;
use crate::spaces::{OpenSet, Point, SpaceDescriptor};
use crate::tms::TmsInstance;

use super::family::{family_oscillation_sum, DisjointFamily};
use super::function::{oscillation, FunctionSpec};
use super::{AcVerdict, Witness};

pub const DEFAULT_DELTAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Families of more than this many sets are not materialized.
const MAX_FAMILY: usize = 1 << 20;
const FINE_CELLS: usize = 1 << 16;
const WINDOW: f64 = 10.0;
const WITNESS_BUDGET: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Greedy packing of the small cells where f oscillates most.
    Hotspot,
    /// Closed-form families for oscillatory or singular builtins.
    Analytic,
    /// A single small set pushed far out along the first axis.
    Translate,
    /// Thin boxes along a segment, for Lebesgue measure in dimension ≥ 2.
    ThinNeighborhood,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Hotspot, Strategy::Analytic, Strategy::Translate, Strategy::ThinNeighborhood];
}

fn sum_lower(f: &FunctionSpec, instance: &TmsInstance, fam: &DisjointFamily, rng: &mut ChaCha8Rng) -> Result<f64> {
    Ok(family_oscillation_sum(f, &instance.space, fam, WITNESS_BUDGET, rng)?.lower)
}

/// Parameter window of a one-dimensional space, with unbounded ends cut off.
fn line_window(space: &SpaceDescriptor) -> Option<(f64, f64)> {
    match space {
        SpaceDescriptor::RealInterval { .. } | SpaceDescriptor::EuclideanBox { dim: 1, .. } => {
            let (l, h) = space.axis_bounds()[0];
            let l = if l.is_finite() { l } else { -WINDOW };
            let h = if h.is_finite() { h } else { l.max(-WINDOW) + 2.0 * WINDOW };
            Some((l, h))
        }
        SpaceDescriptor::Circle { .. } => Some((0.0, TAU)),
        _ => None,
    }
}

fn cell(space: &SpaceDescriptor, a: f64, b: f64) -> OpenSet {
    match space {
        SpaceDescriptor::Circle { .. } => OpenSet::arc(a, b),
        SpaceDescriptor::EuclideanBox { .. } => OpenSet::cuboid(vec![[a, b]]),
        _ => OpenSet::interval(a, b),
    }
}

fn hotspot(
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    delta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<DisjointFamily>> {
    let space = &instance.space;
    let Some((lo, hi)) = line_window(space) else { return Ok(None) };
    let mut best: Option<(f64, DisjointFamily)> = None;
    for k in [1usize, 8, 64] {
        let h = 0.999 * delta / k as f64;
        let total_cells = ((hi - lo) / h).floor() as usize;
        if total_cells == 0 {
            continue;
        }
        // Fine cells are only tiled inside the most active coarse cells.
        let ranges: Vec<(f64, f64)> = if total_cells <= FINE_CELLS {
            vec![(lo, lo + total_cells as f64 * h)]
        } else {
            let coarse = 256;
            let ch = (hi - lo) / coarse as f64;
            let mut scored = Vec::with_capacity(coarse);
            for i in 0..coarse {
                let (a, b) = (lo + i as f64 * ch, lo + (i + 1) as f64 * ch);
                let w = oscillation(f, space, &cell(space, a, b), 16, rng).map(|b| b.lower).unwrap_or(0.0);
                scored.push((w, a, b));
            }
            scored.sort_by(|x, y| y.0.total_cmp(&x.0));
            let per = (FINE_CELLS / 8) as f64 * h;
            scored.iter().take(8).map(|(_, a, b)| (*a, (a + per).min(*b))).collect()
        };
        let mut cells = Vec::new();
        for (a, b) in ranges {
            let n = ((b - a) / h).floor() as usize;
            for i in 0..n {
                let (x, y) = (a + i as f64 * h, a + (i + 1) as f64 * h);
                let s = cell(space, x, y);
                let w = match oscillation(f, space, &s, 8, rng) {
                    Ok(b) => b.lower,
                    Err(TmsError::DomainError(_)) => continue,
                    Err(e) => return Err(e),
                };
                cells.push((w, s));
            }
        }
        cells.sort_by(|x, y| y.0.total_cmp(&x.0));
        let chosen: Vec<OpenSet> = cells.into_iter().take(k).map(|c| c.1).collect();
        let Ok(fam) = DisjointFamily::new(instance, chosen) else { continue };
        if !fam.in_p_delta(delta) {
            continue;
        }
        let s = sum_lower(f, instance, &fam, rng)?;
        if s >= eps {
            return Ok(Some(fam));
        }
        if best.as_ref().is_none_or(|b| s > b.0) {
            best = Some((s, fam));
        }
    }
    Ok(None)
}

fn xsin_extremum(k: f64) -> f64 {
    2.0 / ((2.0 * k + 1.0) * PI)
}

/// Intervals spanning consecutive extrema x_{k+1} < x_k of x·sin(1/x), every
/// other k so that they stay disjoint.
fn xsin_family(eps: f64, delta: f64) -> Option<Vec<OpenSet>> {
    let target = eps * (1.0 + 1e-3);
    let mut start = 1.0;
    while start < 1e12 {
        let mut sum = 0.0;
        let mut len = 0.0;
        let mut sets = Vec::new();
        let mut k = start;
        while sum < target && sets.len() < MAX_FAMILY {
            let (xk, xk1, xk2) = (xsin_extremum(k), xsin_extremum(k + 1.0), xsin_extremum(k + 2.0));
            let pad = 0.1 * (xk1 - xk2);
            sets.push(OpenSet::interval(xk1 - pad, xk + pad));
            sum += xk + xk1;
            len += xk - xk1 + 2.0 * pad;
            if len >= 0.999 * delta {
                break;
            }
            k += 2.0;
        }
        if sum >= target && len < 0.999 * delta {
            return Some(sets);
        }
        start *= 2.0;
    }
    None
}

/// The first `count` closed intervals of the n-th Cantor stage, as open intervals.
pub(crate) fn cantor_stage_interval(n: u32, i: u64) -> (f64, f64) {
    let mut left = 0.0;
    let mut w = 1.0;
    for j in (0..n).rev() {
        w /= 3.0;
        if (i >> j) & 1 == 1 {
            left += 2.0 * w;
        }
    }
    (left, left + w)
}

/// Smallest Cantor stage n whose first ⌈ε·2ⁿ·(1 + 10⁻³)⌉ intervals have total
/// length below 0.999·δ, with that count.
pub(crate) fn cantor_stage_for(eps: f64, delta: f64) -> Option<(u32, u64)> {
    for n in 1..=40u32 {
        let total = 2f64.powi(n as i32);
        let count = (eps * total * (1.0 + 1e-3)).ceil();
        if count > total {
            continue;
        }
        if count * 3f64.powi(-(n as i32)) < 0.999 * delta {
            return Some((n, count as u64));
        }
    }
    None
}

fn cantor_family(eps: f64, delta: f64) -> Option<Vec<OpenSet>> {
    let (n, count) = cantor_stage_for(eps, delta)?;
    if count as usize > MAX_FAMILY {
        return None;
    }
    Some(
        (0..count)
            .map(|i| {
                let (a, b) = cantor_stage_interval(n, i);
                OpenSet::interval(a, b)
            })
            .collect(),
    )
}

fn analytic(f: &FunctionSpec, instance: &TmsInstance, eps: f64, delta: f64) -> Result<Option<DisjointFamily>> {
    if !matches!(instance.space, SpaceDescriptor::RealInterval { .. }) {
        return Ok(None);
    }
    let sets = match f {
        FunctionSpec::XSinInvX => xsin_family(eps, delta),
        FunctionSpec::Cantor => cantor_family(eps, delta),
        _ => None,
    };
    let Some(sets) = sets else { return Ok(None) };
    match DisjointFamily::new(instance, sets) {
        Ok(fam) => Ok(Some(fam)),
        Err(TmsError::InvalidArgument(_)) | Err(TmsError::NotConnected) => Ok(None),
        Err(e) => Err(e),
    }
}

fn small_set(instance: &TmsInstance, center: Vec<f64>, measure: f64) -> Option<OpenSet> {
    let space = &instance.space;
    match space {
        SpaceDescriptor::RealInterval { .. } => Some(OpenSet::interval(center[0] - measure / 2.0, center[0] + measure / 2.0)),
        SpaceDescriptor::EuclideanBox { dim, .. } | SpaceDescriptor::GridFunctionSpace { m: dim, .. } => {
            match instance.measure_kind {
                MeasureKind::Lebesgue => {
                    let side = measure.powf(1.0 / *dim as f64);
                    Some(OpenSet::cuboid(center.iter().map(|c| [c - side / 2.0, c + side / 2.0]).collect()))
                }
                _ => Some(OpenSet::ball(center, measure / 2.0)),
            }
        }
        _ => None,
    }
}

fn translate(
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    delta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<DisjointFamily>> {
    let space = &instance.space;
    if matches!(space, SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. }) {
        return Ok(None);
    }
    let (l, h) = space.axis_bounds()[0];
    if l.is_finite() && h.is_finite() {
        return Ok(None);
    }
    for j in 0..=60 {
        let t = 2f64.powi(j);
        let centers: Vec<f64> = match (l.is_finite(), h.is_finite()) {
            (true, false) => vec![l + t],
            (false, true) => vec![h - t],
            _ => vec![t, -t],
        };
        for c0 in centers {
            let mut c = vec![0.0; space.dim()];
            c[0] = c0;
            let Some(s) = small_set(instance, c, 0.999 * delta) else { return Ok(None) };
            let w = match oscillation(f, space, &s, WITNESS_BUDGET, rng) {
                Ok(b) => b.lower,
                Err(TmsError::DomainError(_)) => continue,
                Err(e) => return Err(e),
            };
            if w >= eps {
                let fam = DisjointFamily::new(instance, vec![s])?;
                if fam.in_p_delta(delta) {
                    return Ok(Some(fam));
                }
            }
        }
    }
    Ok(None)
}

fn thin_neighborhood(
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    delta: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<DisjointFamily>> {
    let space = &instance.space;
    let SpaceDescriptor::EuclideanBox { dim, .. } = space else { return Ok(None) };
    if instance.measure_kind != MeasureKind::Lebesgue || *dim < 2 {
        return Ok(None);
    }
    let n = *dim;
    let bounds = space.axis_bounds();
    let mut best: Option<(f64, DisjointFamily)> = None;
    for axis in 0..n {
        for length in [1.0, 4.0, 16.0] {
            let (l, h) = bounds[axis];
            let (a, len) = if l.is_finite() && h.is_finite() {
                (l, (h - l).min(length))
            } else if l.is_finite() {
                (l, length)
            } else if h.is_finite() {
                (h - length, length)
            } else {
                (0.0, length)
            };
            let half = 0.5 * (0.999 * delta / len).powf(1.0 / (n - 1) as f64);
            let center: Vec<f64> = bounds
                .iter()
                .map(|(l, h)| match (l.is_finite(), h.is_finite()) {
                    (true, true) => 0.5 * (l + h),
                    (true, false) => l + half,
                    (false, true) => h - half,
                    _ => 0.0,
                })
                .collect();
            let pieces = 16;
            let sets: Vec<OpenSet> = (0..pieces)
                .map(|j| {
                    let b = (0..n)
                        .map(|i| {
                            if i == axis {
                                [a + j as f64 * len / pieces as f64, a + (j + 1) as f64 * len / pieces as f64]
                            } else {
                                [center[i] - half, center[i] + half]
                            }
                        })
                        .collect();
                    OpenSet::cuboid(b)
                })
                .collect();
            let Ok(fam) = DisjointFamily::new(instance, sets) else { continue };
            if !fam.in_p_delta(delta) {
                continue;
            }
            let s = sum_lower(f, instance, &fam, rng)?;
            if s >= eps {
                return Ok(Some(fam));
            }
            if best.as_ref().is_none_or(|b| s > b.0) {
                best = Some((s, fam));
            }
        }
    }
    Ok(None)
}

/// Re-validates a witness from scratch: disjoint connected members, measured
/// total below δ, re-sampled oscillation sum at least ε.
pub fn validate_witness(f: &FunctionSpec, instance: &TmsInstance, w: &Witness, eps: f64, seed: u64) -> Result<bool> {
    let fam = DisjointFamily::new(instance, w.family.sets.clone())?;
    if fam.len() != w.family.len() || !fam.in_p_delta(w.delta) {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    Ok(sum_lower(f, instance, &fam, &mut rng)? >= eps)
}

/// Runs the strategies in order for each δ; Falsified needs a validated
/// witness at every δ of the schedule.
pub fn falsify_ac(
    f: &FunctionSpec,
    instance: &TmsInstance,
    eps: f64,
    deltas: &[f64],
    strategies: &[Strategy],
    seed: u64,
) -> Result<AcVerdict> {
    if !(eps > 0.0) {
        return Err(TmsError::InvalidArgument("eps must be positive".into()));
    }
    if deltas.len() < 4 || deltas.windows(2).any(|w| !(w[1] < w[0])) || deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(TmsError::InvalidArgument(
            "delta schedule must be positive, strictly decreasing, with at least 4 entries".into(),
        ));
    }
    f.validate(&instance.space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    let mut diagnostics = Vec::new();
    for &delta in deltas {
        let mut found = None;
        for &strategy in strategies {
            let fam = match strategy {
                Strategy::Hotspot => hotspot(f, instance, eps, delta, &mut rng)?,
                Strategy::Analytic => analytic(f, instance, eps, delta)?,
                Strategy::Translate => translate(f, instance, eps, delta, &mut rng)?,
                Strategy::ThinNeighborhood => thin_neighborhood(f, instance, eps, delta, &mut rng)?,
            };
            let Some(family) = fam else { continue };
            let sum = sum_lower(f, instance, &family, &mut rng)?;
            if family.in_p_delta(delta) && sum >= eps {
                found = Some(Witness { delta, strategy, family, oscillation_sum_lower: sum });
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => {
                diagnostics.push(format!("no witness with oscillation sum >= {eps} at delta = {delta}"));
                break;
            }
        }
    }
    if witnesses.len() == deltas.len() {
        Ok(AcVerdict::Falsified { eps, witnesses })
    } else {
        if !witnesses.is_empty() {
            diagnostics.push(format!("{} single-delta witnesses kept as partial evidence", witnesses.len()));
        }
        Ok(AcVerdict::Inconclusive { diagnostics, partial: witnesses })
    }
}

/// A connected set of measure zero (for the constancy rule).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum NullSet {
    Segment { a: Point, b: Point },
    Singleton { p: Point },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConstancyOutcome {
    /// f is non-constant on a connected null set, so it cannot be absolutely
    /// continuous under a C-outer regular measure.
    Falsified {
        x: Point,
        y: Point,
        difference: f64,
    },
    Pass,
}

fn null_set_measure_bounds(instance: &TmsInstance, e: &NullSet) -> (f64, f64) {
    let space = &instance.space;
    match e {
        NullSet::Singleton { .. } => match instance.measure_kind {
            MeasureKind::Counting => (1.0, 1.0),
            _ => (0.0, 0.0),
        },
        NullSet::Segment { a, b } => {
            let d = space.dist(&a.0, &b.0);
            match instance.measure_kind {
                MeasureKind::DiamOuter => (d, d),
                MeasureKind::Counting => (f64::INFINITY, f64::INFINITY),
                MeasureKind::Lebesgue if space.dim() >= 2 => (0.0, 0.0),
                MeasureKind::Lebesgue => (d, d),
            }
        }
    }
}

/// The constancy rule: under a C-outer regular measure an absolutely
/// continuous f is constant on every connected null set.
pub fn constancy_falsifier(
    f: &FunctionSpec,
    instance: &TmsInstance,
    e: &NullSet,
    samples: usize,
    tol: f64,
) -> Result<ConstancyOutcome> {
    if !instance.c_outer_regular {
        return Err(TmsError::RuleDisabled);
    }
    let (lower, upper) = null_set_measure_bounds(instance, e);
    if upper > 0.0 {
        return Err(TmsError::RuleNotApplicable(format!("the set has measure at least {lower}, not 0")));
    }
    let pts: Vec<Point> = match e {
        NullSet::Singleton { p } => vec![p.clone()],
        NullSet::Segment { a, b } => {
            let n = samples.max(2);
            (0..n)
                .map(|i| {
                    let t = 0.01 + 0.98 * i as f64 / (n - 1) as f64;
                    Point::new(a.0.iter().zip(&b.0).map(|(x, y)| x + t * (y - x)).collect())
                })
                .collect()
        }
    };
    for p in &pts {
        instance.space.check_point(p)?;
    }
    let vals = pts.iter().map(|p| f.eval(&instance.space, p)).collect::<Result<Vec<_>>>()?;
    let mut best = (0, 0, 0.0);
    for i in 0..vals.len() {
        for j in 0..i {
            let d = (vals[i] - vals[j]).norm();
            if d > best.2 {
                best = (j, i, d);
            }
        }
    }
    Ok(if best.2 > tol {
        ConstancyOutcome::Falsified { x: pts[best.0].clone(), y: pts[best.1].clone(), difference: best.2 }
    } else {
        ConstancyOutcome::Pass
    })
}
