//! Lebesgue measure on simple sets and two-sided brackets on the
//! diameter-cover outer measure ν(A) = inf Σ diam(Bₙ) over open covers.
//!
//! Upper bounds come from explicit covers. Lower bounds come from two facts:
//! a connected set is never cheaper to cover than its diameter (chains of
//! overlapping cover sets span it), and ν dominates the Lebesgue measure of
//! any 1-Lipschitz projection to a line.

use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::spaces::{
    arc_length, are_disjoint, basic_open_grid, bounding_box, canonical, contains, diam_upper, enclosing_ball, extremal_points,
    is_connected, is_empty, is_subset, line_hull, normalize_angle, sample_points, set_distance, CircleMetric, Norm, OpenSet,
    Point, SpaceDescriptor,
};

/// Largest cover the greedy merge pass will work on.
const MERGE_LIMIT: usize = 160;
/// Largest dyadic grid cover tried by `nu_upper`.
const GRID_COVER_LIMIT: usize = 256;
/// Points used by sampled coverage checks.
const COVER_SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Lebesgue,
    #[serde(alias = "diam")]
    DiamOuter,
    Counting,
}

impl FromStr for MeasureKind {
    type Err = TmsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(MeasureKind::Lebesgue),
            "diam" | "diam_outer" => Ok(MeasureKind::DiamOuter),
            "counting" => Ok(MeasureKind::Counting),
            other => Err(TmsError::InvalidArgument(format!("unknown measure {other:?}"))),
        }
    }
}

impl MeasureKind {
    pub fn supports(self, space: &SpaceDescriptor) -> bool {
        match self {
            MeasureKind::Lebesgue => !matches!(space, SpaceDescriptor::GridFunctionSpace { .. }),
            MeasureKind::DiamOuter | MeasureKind::Counting => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverProposal {
    pub sets: Vec<OpenSet>,
    #[serde(with = "crate::serde_float")]
    pub total_diam: f64,
}

impl CoverProposal {
    pub fn new(space: &SpaceDescriptor, sets: Vec<OpenSet>) -> Result<Self> {
        let mut total = 0.0;
        for s in &sets {
            total += diam_upper(space, s)?;
        }
        Ok(CoverProposal { sets, total_diam: total })
    }

    pub fn covers(&self, space: &SpaceDescriptor, target: &OpenSet) -> bool {
        cover_contains(space, &self.sets, target)
    }

    /// Concatenation of witness covers; covers the union of their targets.
    pub fn concat(space: &SpaceDescriptor, covers: &[CoverProposal]) -> Result<Self> {
        CoverProposal::new(space, covers.iter().flat_map(|c| c.sets.iter().cloned()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimateMethod {
    Analytic,
    CoverSearch { cover: CoverProposal },
    Chaining,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    #[serde(with = "crate::serde_float")]
    pub lower: f64,
    #[serde(with = "crate::serde_float")]
    pub upper: f64,
    pub method: EstimateMethod,
}

impl MeasureEstimate {
    pub fn exact(v: f64) -> Self {
        MeasureEstimate { lower: v, upper: v, method: EstimateMethod::Analytic }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn cover(&self) -> Option<&CoverProposal> {
        match &self.method {
            EstimateMethod::CoverSearch { cover } => Some(cover),
            _ => None,
        }
    }

    pub fn brackets(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// Volume of the Euclidean unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * TAU / n as f64,
    }
}

fn merged_length(mut ivs: Vec<(f64, f64)>) -> f64 {
    ivs.retain(|(a, b)| a < b);
    ivs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in ivs {
        cur = match cur {
            Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = cur {
        total += b - a;
    }
    total
}

fn parts_of(s: &OpenSet) -> Vec<OpenSet> {
    match s {
        OpenSet::Union { parts } => parts.clone(),
        OpenSet::Empty => Vec::new(),
        other => vec![other.clone()],
    }
}

/// Exact Lebesgue measure. On the circle and on curves this is the planar
/// measure of the embedded curve, which vanishes.
pub fn lebesgue(space: &SpaceDescriptor, s: &OpenSet) -> Result<MeasureEstimate> {
    let s = canonical(space, s)?;
    if is_empty(space, &s) {
        return Ok(MeasureEstimate::exact(0.0));
    }
    let unsupported = |what: &str| Err(TmsError::UnsupportedMeasure(format!("lebesgue measure of {what}")));
    match space {
        SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. } => Ok(MeasureEstimate::exact(0.0)),
        SpaceDescriptor::GridFunctionSpace { .. } => unsupported("a grid function space"),
        SpaceDescriptor::RealInterval { .. } => {
            let mut ivs = Vec::new();
            for p in parts_of(&s) {
                match line_hull(space, &p) {
                    Some(iv) if matches!(p, OpenSet::Interval { .. } | OpenSet::Whole) => ivs.push(iv),
                    _ if is_empty(space, &p) => {}
                    _ => return unsupported("this shape"),
                }
            }
            Ok(MeasureEstimate::exact(merged_length(ivs)))
        }
        SpaceDescriptor::EuclideanBox { dim, norm, .. } => {
            let parts = parts_of(&s);
            for i in 0..parts.len() {
                for j in 0..i {
                    if !are_disjoint(space, &parts[i], &parts[j]) {
                        return unsupported("an overlapping union");
                    }
                }
            }
            let mut total = 0.0;
            for p in &parts {
                total += match p {
                    OpenSet::Whole | OpenSet::Cuboid { .. } => {
                        let bb = bounding_box(space, p).unwrap();
                        bb.iter().map(|(l, h)| (h - l).max(0.0)).product::<f64>()
                    }
                    OpenSet::Ball { radius, .. } => {
                        let unbounded = SpaceDescriptor::euclidean(*dim, *norm);
                        if bounding_box(&unbounded, p) != bounding_box(space, p) {
                            return unsupported("a ball crossing the space boundary");
                        }
                        match norm {
                            Norm::L2 => unit_ball_volume(*dim) * radius.powi(*dim as i32),
                            Norm::L1 => {
                                let fact: f64 = (1..=*dim).map(|k| k as f64).product();
                                (2.0 * radius).powi(*dim as i32) / fact
                            }
                            _ => return unsupported("an lp ball"),
                        }
                    }
                    _ => return unsupported("this shape"),
                };
            }
            Ok(MeasureEstimate::exact(total))
        }
    }
}

/// Whether the union of `sets` contains `target`: exact on line-like spaces and
/// the circle, sampled elsewhere.
pub fn cover_contains(space: &SpaceDescriptor, sets: &[OpenSet], target: &OpenSet) -> bool {
    let Ok(target) = canonical(space, target) else { return false };
    if is_empty(space, &target) {
        return true;
    }
    let Ok(sets) = sets.iter().map(|s| canonical(space, s)).collect::<Result<Vec<_>>>() else {
        return false;
    };
    if sets.iter().any(|s| matches!(s, OpenSet::Whole)) {
        return true;
    }
    let merged = if space.is_line_like() && sets.iter().all(|s| matches!(s, OpenSet::Interval { .. })) {
        Some(merge_intervals(&sets))
    } else if space.is_circle() && sets.iter().all(|s| matches!(s, OpenSet::Arc { .. })) {
        Some(merge_arcs(&sets))
    } else {
        None
    };
    if let Some(merged) = merged {
        return parts_of(&target).iter().all(|p| merged.iter().any(|m| is_subset(space, p, m) == Some(true)));
    }
    if parts_of(&target).iter().all(|p| sets.iter().any(|s| is_subset(space, p, s) == Some(true))) {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FE);
    sample_points(space, &target, COVER_SAMPLES, &mut rng).iter().all(|p| sets.iter().any(|s| contains(space, s, p)))
}

fn merge_intervals(sets: &[OpenSet]) -> Vec<OpenSet> {
    let mut ivs: Vec<(f64, f64)> = sets
        .iter()
        .filter_map(|s| match s {
            OpenSet::Interval { a, b } if a < b => Some((*a, *b)),
            _ => None,
        })
        .collect();
    ivs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in ivs {
        match out.last_mut() {
            // Open intervals must overlap; (0,1) and (1,2) leave 1 uncovered.
            Some(last) if a < last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out.into_iter().map(|(a, b)| OpenSet::interval(a, b)).collect()
}

fn merge_arcs(sets: &[OpenSet]) -> Vec<OpenSet> {
    let mut arcs: Vec<(f64, f64)> = sets
        .iter()
        .filter_map(|s| match s {
            OpenSet::Arc { start, end } => {
                let len = arc_length(*start, *end);
                let st = normalize_angle(*start);
                (len > 0.0).then_some((st, st + len))
            }
            _ => None,
        })
        .collect();
    arcs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in arcs {
        match out.last_mut() {
            Some(last) if a < last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    // The last run may wrap past 2π onto the first ones.
    while out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if first.0 + TAU < last.1 {
            out.remove(0);
            let l = out.last_mut().unwrap();
            l.1 = l.1.max(first.1 + TAU);
        } else {
            break;
        }
    }
    if out.len() == 1 && out[0].1 - out[0].0 > TAU {
        return vec![OpenSet::Whole];
    }
    out.into_iter().map(|(a, b)| OpenSet::arc(a, b)).collect()
}

/// Smallest shape of the space's basic kinds containing both sets.
fn hull_pair(space: &SpaceDescriptor, a: &OpenSet, b: &OpenSet) -> Option<OpenSet> {
    if space.is_line_like() {
        let u = OpenSet::union(vec![a.clone(), b.clone()]);
        let (lo, hi) = line_hull(space, &u)?;
        let raw_lo = [a, b].iter().filter_map(|s| raw_interval(s)).map(|x| x.0).fold(f64::INFINITY, f64::min);
        let raw_hi = [a, b].iter().filter_map(|s| raw_interval(s)).map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
        return Some(OpenSet::interval(raw_lo.min(lo), raw_hi.max(hi)));
    }
    if space.is_circle() {
        let (OpenSet::Arc { start: s1, end: e1 }, OpenSet::Arc { start: s2, end: e2 }) = (a, b) else {
            return None;
        };
        let cands = [
            OpenSet::arc(*s1, s1 + arc_length(*s1, *e1).max(arc_length(*s1, *e2))),
            OpenSet::arc(*s2, s2 + arc_length(*s2, *e2).max(arc_length(*s2, *e1))),
        ];
        return cands
            .into_iter()
            .filter(|c| is_subset(space, a, c) == Some(true) && is_subset(space, b, c) == Some(true))
            .min_by(|x, y| diam_upper(space, x).unwrap().partial_cmp(&diam_upper(space, y).unwrap()).unwrap());
    }
    let bb = bounding_box(space, &OpenSet::union(vec![a.clone(), b.clone()]))?;
    Some(OpenSet::cuboid(bb.iter().map(|(l, h)| [*l, *h]).collect()))
}

fn raw_interval(s: &OpenSet) -> Option<(f64, f64)> {
    match s {
        OpenSet::Interval { a, b } => Some((*a, *b)),
        _ => None,
    }
}

/// Repeatedly replaces the pair whose hull saves the most diameter.
fn greedy_merge(space: &SpaceDescriptor, mut sets: Vec<OpenSet>) -> Vec<OpenSet> {
    if sets.len() > MERGE_LIMIT {
        return sets;
    }
    let mut diams: Vec<f64> = sets.iter().map(|s| diam_upper(space, s).unwrap_or(f64::INFINITY)).collect();
    loop {
        let mut best: Option<(f64, usize, usize, OpenSet, f64)> = None;
        for i in 0..sets.len() {
            for j in 0..i {
                let Some(h) = hull_pair(space, &sets[i], &sets[j]) else { continue };
                let Ok(dh) = diam_upper(space, &h) else { continue };
                let saving = diams[i] + diams[j] - dh;
                if saving > 1e-15 && best.as_ref().is_none_or(|b| saving > b.0) {
                    best = Some((saving, i, j, h, dh));
                }
            }
        }
        let Some((_, i, j, h, dh)) = best else { break };
        sets[i] = h.clone();
        diams[i] = dh;
        sets.remove(j);
        diams.remove(j);
        // Drop members swallowed by the new hull.
        let mut k = 0;
        while k < sets.len() {
            if sets[k] != h && is_subset(space, &sets[k], &h) == Some(true) {
                sets.remove(k);
                diams.remove(k);
            } else {
                k += 1;
            }
        }
    }
    sets
}

/// Candidate covers in a fixed order; `nu_upper` explores a prefix of this list.
fn candidate_covers(space: &SpaceDescriptor, s: &OpenSet, hints: &[CoverProposal], budget: usize) -> Vec<Vec<OpenSet>> {
    let mut out: Vec<Vec<OpenSet>> = Vec::new();
    let parts: Vec<OpenSet> = parts_of(s).into_iter().filter(|p| !is_empty(space, p)).collect();
    out.push(parts.clone());
    for h in hints {
        if out.len() >= budget {
            return out;
        }
        if cover_contains(space, &h.sets, s) {
            out.push(h.sets.clone());
            let merged = greedy_merge(space, h.sets.clone());
            if merged.len() < h.sets.len() {
                out.push(merged);
            }
        }
    }
    // No cover of a connected set beats its diameter, and on a line no cover
    // of intervals beats their total length, so the search can stop here.
    if space.is_line_like() && parts.iter().all(|p| matches!(p, OpenSet::Interval { .. })) {
        if parts.len() > 1 {
            out.push(merge_intervals(&parts));
        }
        return out;
    }
    if let [single] = parts.as_slice() {
        let unclipped =
            matches!(space, SpaceDescriptor::EuclideanBox { bounds: None, .. } | SpaceDescriptor::GridFunctionSpace { .. });
        if matches!(single, OpenSet::Arc { .. }) || (unclipped && matches!(single, OpenSet::Ball { .. })) {
            return out;
        }
    }
    if parts.len() > 1 {
        out.push(greedy_merge(space, parts.clone()));
        let hull = parts[1..].iter().try_fold(parts[0].clone(), |acc, p| hull_pair(space, &acc, p));
        if let Some(h) = hull {
            out.push(vec![h]);
        }
    }
    let Ok(d) = diam_upper(space, s) else { return out };
    if d.is_finite() && d > 0.0 {
        for k in 1..=40 {
            if out.len() >= budget {
                break;
            }
            let scale = d / 2f64.powi(k);
            let Ok(grid) = basic_open_grid(space, scale, s) else { break };
            if grid.len() > GRID_COVER_LIMIT {
                break;
            }
            let cover: Vec<OpenSet> = grid.iter().filter(|g| !are_disjoint(space, g, s)).collect();
            out.push(greedy_merge(space, cover.clone()));
            out.push(cover);
        }
    }
    out
}

/// Best cover among the first `budget` candidates.
pub fn nu_upper(space: &SpaceDescriptor, s: &OpenSet, budget: usize) -> Result<MeasureEstimate> {
    nu_upper_with_hints(space, s, budget, &[])
}

/// As `nu_upper`, also trying the given covers (used when composing witness
/// covers of subsets or of members of a union).
pub fn nu_upper_with_hints(
    space: &SpaceDescriptor,
    s: &OpenSet,
    budget: usize,
    hints: &[CoverProposal],
) -> Result<MeasureEstimate> {
    if budget == 0 {
        return Err(TmsError::InvalidArgument("budget must be at least 1".into()));
    }
    let s = canonical(space, s)?;
    if is_empty(space, &s) {
        return Ok(MeasureEstimate {
            lower: 0.0,
            upper: 0.0,
            method: EstimateMethod::CoverSearch { cover: CoverProposal { sets: Vec::new(), total_diam: 0.0 } },
        });
    }
    let mut best: Option<CoverProposal> = None;
    for sets in candidate_covers(space, &s, hints, budget).into_iter().take(budget) {
        let cover = CoverProposal::new(space, sets)?;
        if best.as_ref().is_none_or(|b| cover.total_diam < b.total_diam) {
            best = Some(cover);
        }
    }
    let cover = best.expect("self-cover is always a candidate");
    Ok(MeasureEstimate { lower: 0.0, upper: cover.total_diam, method: EstimateMethod::CoverSearch { cover } })
}

/// Largest sampled pairwise distance in a connected set, a lower bound on ν.
pub fn nu_lower_connected(space: &SpaceDescriptor, s: &OpenSet) -> Result<MeasureEstimate> {
    let s = canonical(space, s)?;
    if !is_connected(space, &s) {
        return Err(TmsError::NotConnected);
    }
    let lower = sampled_diameter(space, &s);
    Ok(MeasureEstimate { lower, upper: f64::INFINITY, method: EstimateMethod::Chaining })
}

fn sampled_diameter(space: &SpaceDescriptor, s: &OpenSet) -> f64 {
    let mut pts: Vec<Point> = extremal_points(space, s).into_iter().filter(|p| contains(space, s, p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1A);
    pts.extend(sample_points(space, s, 48, &mut rng));
    let mut best = 0.0_f64;
    for i in 0..pts.len() {
        for j in 0..i {
            best = best.max(space.dist(&pts[i].0, &pts[j].0));
        }
    }
    best
}

/// Lower bound on ν from projections: ν(S) ≥ ‖u‖-scaled Lebesgue measure of
/// the image of S under a norm-dominated linear functional. On the circle a
/// set of diameter below 2π/3 lies in an arc no longer than its diameter.
pub fn nu_lower_projection(space: &SpaceDescriptor, s: &OpenSet) -> f64 {
    let Ok(s) = canonical(space, s) else { return 0.0 };
    if is_empty(space, &s) {
        return 0.0;
    }
    let parts = parts_of(&s);
    match space {
        SpaceDescriptor::RealInterval { .. } | SpaceDescriptor::RectifiableCurve { .. } => {
            let ivs: Vec<(f64, f64)> = parts
                .iter()
                .filter_map(|p| line_hull(space, p).map(|(a, b)| (space.line_length(0.0, a), space.line_length(0.0, b))))
                .collect();
            if parts.iter().any(|p| !matches!(p, OpenSet::Interval { .. } | OpenSet::Whole)) {
                return 0.0;
            }
            merged_length(ivs)
        }
        SpaceDescriptor::Circle { metric } => {
            let arcs: Option<Vec<(f64, f64)>> = parts
                .iter()
                .map(|p| match p {
                    OpenSet::Arc { start, end } => Some((*start, *end)),
                    OpenSet::Whole => Some((0.0, TAU)),
                    _ => None,
                })
                .collect();
            let Some(arcs) = arcs else { return 0.0 };
            let mut ivs = Vec::new();
            for (st, en) in arcs {
                let len = arc_length(st, en);
                let st = normalize_angle(st);
                let en = st + len;
                if en > TAU {
                    ivs.push((st, TAU));
                    ivs.push((0.0, en - TAU));
                } else {
                    ivs.push((st, en));
                }
            }
            let m = merged_length(ivs).min(2.0 * PI / 3.0);
            match metric {
                CircleMetric::Arc => m,
                CircleMetric::Chord => 2.0 * (m / 2.0).sin(),
            }
        }
        _ => {
            let (norm, w) = space.norm().unwrap();
            let n = space.dim();
            let mut dirs: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    e
                })
                .collect();
            let euclid = matches!(space, SpaceDescriptor::EuclideanBox { .. }) && norm == Norm::L2;
            if euclid {
                let centers: Vec<Vec<f64>> = parts.iter().filter_map(|p| enclosing_ball(space, p).map(|b| b.0)).collect();
                for i in 0..centers.len().min(8) {
                    for j in 0..i {
                        let d: Vec<f64> = centers[i].iter().zip(&centers[j]).map(|(a, b)| a - b).collect();
                        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if len > 0.0 {
                            dirs.push(d.iter().map(|x| x / len).collect());
                        }
                    }
                }
            }
            let mut best = 0.0_f64;
            for u in &dirs {
                // |⟨u, v⟩| ≤ scale · ‖v‖ for coordinate functionals in any monotone
                // norm, and for unit vectors under l2.
                let scale = if euclid { 1.0 } else { norm.eval(u, w) };
                let mut ivs = Vec::new();
                for p in &parts {
                    let iv = match p {
                        OpenSet::Ball { center, radius } if euclid => {
                            let c: f64 = center.iter().zip(u).map(|(a, b)| a * b).sum();
                            (c - radius, c + radius)
                        }
                        _ => {
                            let Some(bb) = bounding_box(space, p) else { return 0.0 };
                            if !matches!(p, OpenSet::Cuboid { .. } | OpenSet::Whole | OpenSet::Ball { .. }) {
                                return 0.0;
                            }
                            // Boxes project exactly; balls only along axes.
                            if matches!(p, OpenSet::Ball { .. }) && u.iter().filter(|x| **x != 0.0).count() > 1 {
                                continue;
                            }
                            let lo: f64 = bb.iter().zip(u).map(|((l, h), x)| (x * l).min(x * h)).sum();
                            let hi: f64 = bb.iter().zip(u).map(|((l, h), x)| (x * l).max(x * h)).sum();
                            (lo, hi)
                        }
                    };
                    ivs.push(iv);
                }
                best = best.max(scale * merged_length(ivs));
            }
            best
        }
    }
}

pub fn measure_of(space: &SpaceDescriptor, kind: MeasureKind, s: &OpenSet, budget: usize) -> Result<MeasureEstimate> {
    measure_of_with_hints(space, kind, s, budget, &[])
}

pub fn measure_of_with_hints(
    space: &SpaceDescriptor,
    kind: MeasureKind,
    s: &OpenSet,
    budget: usize,
    hints: &[CoverProposal],
) -> Result<MeasureEstimate> {
    if budget == 0 {
        return Err(TmsError::InvalidArgument("budget must be at least 1".into()));
    }
    match kind {
        MeasureKind::Lebesgue => lebesgue(space, s),
        MeasureKind::Counting => {
            canonical(space, s)?;
            Ok(if is_empty(space, s) {
                MeasureEstimate::exact(0.0)
            } else {
                MeasureEstimate { lower: 1.0, upper: f64::INFINITY, method: EstimateMethod::Analytic }
            })
        }
        MeasureKind::DiamOuter => {
            let mut est = nu_upper_with_hints(space, s, budget, hints)?;
            let chain = if is_connected(space, s) { nu_lower_connected(space, s)?.lower } else { 0.0 };
            est.lower = chain.max(nu_lower_projection(space, s)).min(est.upper);
            Ok(est)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub distance: f64,
    pub a: MeasureEstimate,
    pub b: MeasureEstimate,
    pub union: MeasureEstimate,
    /// ν(A∪B) ≥ ν(A)+ν(B) − tol is confirmed by the brackets.
    pub superadditive: bool,
    /// ν(A∪B) ≤ ν(A)+ν(B) + tol is confirmed by the brackets.
    pub subadditive: bool,
    pub additive: bool,
    /// The brackets prove ν(A∪B) < ν(A)+ν(B) − tol.
    pub violated: bool,
}

pub fn separated_additivity_check(
    space: &SpaceDescriptor,
    a: &OpenSet,
    b: &OpenSet,
    budget: usize,
    tol: f64,
) -> Result<AdditivityReport> {
    let distance = set_distance(space, a, b);
    if !(distance > 0.0) {
        return Err(TmsError::NotSeparated(distance));
    }
    let ma = measure_of(space, MeasureKind::DiamOuter, a, budget)?;
    let mb = measure_of(space, MeasureKind::DiamOuter, b, budget)?;
    let hints: Vec<CoverProposal> = [&ma, &mb].iter().filter_map(|m| m.cover().cloned()).collect();
    let joint = CoverProposal::concat(space, &hints)?;
    let u = OpenSet::union(vec![a.clone(), b.clone()]);
    let mu = measure_of_with_hints(space, MeasureKind::DiamOuter, &u, budget, &[joint])?;
    let superadditive = mu.lower >= ma.upper + mb.upper - tol;
    let subadditive = mu.upper <= ma.lower + mb.lower + tol;
    let violated = mu.upper < ma.lower + mb.lower - tol;
    Ok(AdditivityReport {
        distance,
        a: ma,
        b: mb,
        union: mu,
        superadditive,
        subadditive,
        additive: superadditive && subadditive,
        violated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub probe: OpenSet,
    pub inside: OpenSet,
    pub outside: OpenSet,
    pub whole: MeasureEstimate,
    pub inside_measure: MeasureEstimate,
    pub outside_measure: MeasureEstimate,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryReport {
    pub set: OpenSet,
    pub probes: Vec<ProbeResult>,
    pub passed: bool,
}

/// Splits `d` into open approximations of `d ∩ a` and `d ∖ a`; boundary pieces
/// of measure zero are dropped.
pub fn split_by(space: &SpaceDescriptor, d: &OpenSet, a: &OpenSet) -> Result<(OpenSet, OpenSet)> {
    let (d, a) = (canonical(space, d)?, canonical(space, a)?);
    let unsupported = || TmsError::UnsupportedShape("set difference is not expressible for these shapes".into());
    if is_empty(space, &a) {
        return Ok((OpenSet::Empty, d));
    }
    if matches!(a, OpenSet::Whole) {
        return Ok((d, OpenSet::Empty));
    }
    if space.is_line_like() {
        let (dl, dh) = line_hull(space, &d).filter(|_| !matches!(d, OpenSet::Union { .. })).ok_or_else(unsupported)?;
        let (al, ah) = line_hull(space, &a).filter(|_| matches!(a, OpenSet::Interval { .. })).ok_or_else(unsupported)?;
        let inside = OpenSet::interval(dl.max(al), dh.min(ah));
        let outside = OpenSet::union(vec![OpenSet::interval(dl, dh.min(al)), OpenSet::interval(dl.max(ah), dh)]);
        return Ok((tidy(space, inside), tidy(space, outside)));
    }
    if space.is_circle() {
        let OpenSet::Arc { start: ds, end: de } = d.clone() else {
            if matches!(d, OpenSet::Whole) {
                let OpenSet::Arc { start, end } = a else { return Err(unsupported()) };
                let len = arc_length(start, end);
                return Ok((a.clone(), OpenSet::arc(start + len, start + TAU)));
            }
            return Err(unsupported());
        };
        let OpenSet::Arc { start: as_, end: ae } = a else { return Err(unsupported()) };
        let ld = arc_length(ds, de);
        let la = arc_length(as_, ae);
        let off = (as_ - ds).rem_euclid(TAU);
        // Work on the line [0, ld] measured from the start of d; a appears as
        // (off, off+la) and its copy shifted by −2π.
        let copies = [(off, off + la), (off - TAU, off + la - TAU)];
        let mut inside = Vec::new();
        let mut covered = Vec::new();
        for (l, h) in copies {
            let (l, h) = (l.max(0.0), h.min(ld));
            if l < h {
                inside.push(OpenSet::arc(ds + l, ds + h));
                covered.push((l, h));
            }
        }
        covered.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut outside = Vec::new();
        let mut cur = 0.0;
        for (l, h) in covered {
            if l > cur {
                outside.push(OpenSet::arc(ds + cur, ds + l));
            }
            cur = cur.max(h);
        }
        if cur < ld {
            outside.push(OpenSet::arc(ds + cur, ds + ld));
        }
        return Ok((tidy(space, OpenSet::union(inside)), tidy(space, OpenSet::union(outside))));
    }
    let dbox = match &d {
        OpenSet::Cuboid { .. } | OpenSet::Whole => bounding_box(space, &d).ok_or_else(unsupported)?,
        _ => return Err(unsupported()),
    };
    let abox = match &a {
        OpenSet::Cuboid { .. } => bounding_box(space, &a).ok_or_else(unsupported)?,
        _ => return Err(unsupported()),
    };
    let inter: Vec<[f64; 2]> = dbox.iter().zip(&abox).map(|((l1, h1), (l2, h2))| [l1.max(*l2), h1.min(*h2)]).collect();
    let mut rest: Vec<[f64; 2]> = dbox.iter().map(|(l, h)| [*l, *h]).collect();
    let mut slabs = Vec::new();
    for k in 0..rest.len() {
        let (lo, hi) = (rest[k][0], rest[k][1]);
        let (alo, ahi) = abox[k];
        if alo > lo {
            let mut s = rest.clone();
            s[k] = [lo, alo.min(hi)];
            slabs.push(OpenSet::cuboid(s));
        }
        if ahi < hi {
            let mut s = rest.clone();
            s[k] = [ahi.max(lo), hi];
            slabs.push(OpenSet::cuboid(s));
        }
        rest[k] = [lo.max(alo), hi.min(ahi)];
    }
    Ok((tidy(space, OpenSet::cuboid(inter)), tidy(space, OpenSet::union(slabs))))
}

fn tidy(space: &SpaceDescriptor, s: OpenSet) -> OpenSet {
    let parts: Vec<OpenSet> = parts_of(&s).into_iter().filter(|p| !is_empty(space, p)).collect();
    match parts.len() {
        0 => OpenSet::Empty,
        1 => parts.into_iter().next().unwrap(),
        _ => OpenSet::union(parts),
    }
}

pub fn caratheodory_probe(
    space: &SpaceDescriptor,
    a: &OpenSet,
    probes: &[OpenSet],
    budget: usize,
    tol: f64,
) -> Result<CaratheodoryReport> {
    if probes.is_empty() {
        return Err(TmsError::InvalidArgument("at least one probe set is required".into()));
    }
    let mut results = Vec::with_capacity(probes.len());
    for d in probes {
        let (inside, outside) = split_by(space, d, a)?;
        let whole = measure_of(space, MeasureKind::DiamOuter, d, budget)?;
        let mi = measure_of(space, MeasureKind::DiamOuter, &inside, budget)?;
        let mo = measure_of(space, MeasureKind::DiamOuter, &outside, budget)?;
        let (sum_lo, sum_hi) = (mi.lower + mo.lower, mi.upper + mo.upper);
        let consistent = whole.lower <= sum_hi + tol && sum_lo <= whole.upper + tol;
        results.push(ProbeResult {
            probe: d.clone(),
            inside,
            outside,
            whole,
            inside_measure: mi,
            outside_measure: mo,
            consistent,
        });
    }
    let passed = results.iter().all(|r| r.consistent);
    Ok(CaratheodoryReport { set: a.clone(), probes: results, passed })
}
