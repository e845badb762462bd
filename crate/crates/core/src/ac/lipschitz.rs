use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::spaces::{basic_open_grid, canonical, enclosing_ball, is_empty, OpenSet, SpaceDescriptor};
use crate::tms::TmsInstance;

use super::function::{oscillation_upper, FunctionSpec};

const WINDOW: f64 = 10.0;
const TRANSLATE_STEPS: i32 = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleMaximum {
    pub scale: f64,
    #[serde(with = "crate::serde_float")]
    pub max_ratio: f64,
    pub sets_checked: usize,
    pub argmax: Option<OpenSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEstimate {
    pub per_scale: Vec<ScaleMaximum>,
    /// (translate, ratio) for sets pushed out along the first axis.
    pub translates: Vec<(f64, f64)>,
    #[serde(with = "crate::serde_float")]
    pub estimate: f64,
    pub diverging: bool,
    pub diagnostics: Vec<String>,
}

impl LipschitzEstimate {
    pub fn accepted(&self) -> bool {
        !self.diverging && self.estimate.is_finite()
    }

    pub fn argmax(&self) -> Option<&OpenSet> {
        self.per_scale
            .iter()
            .filter(|s| s.argmax.is_some())
            .max_by(|a, b| a.max_ratio.total_cmp(&b.max_ratio))
            .and_then(|s| s.argmax.as_ref())
    }
}

pub(crate) fn window_region(space: &SpaceDescriptor) -> OpenSet {
    match space {
        SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. } => OpenSet::Whole,
        _ if space.is_bounded() => OpenSet::Whole,
        SpaceDescriptor::RealInterval { .. } => {
            let (l, h) = space.axis_bounds()[0];
            let l = if l.is_finite() { l } else { -WINDOW };
            let h = if h.is_finite() { h } else { l.max(-WINDOW) + 2.0 * WINDOW };
            OpenSet::interval(l - 1.0, h + 1.0)
        }
        _ => OpenSet::cuboid(
            space
                .axis_bounds()
                .iter()
                .map(|(l, h)| [if l.is_finite() { *l } else { -WINDOW }, if h.is_finite() { *h } else { WINDOW }])
                .collect(),
        ),
    }
}

fn ratio(f: &FunctionSpec, instance: &TmsInstance, e: &OpenSet) -> Result<f64> {
    let osc = oscillation_upper(f, &instance.space, e)?;
    if osc == 0.0 {
        return Ok(0.0);
    }
    let m = instance.measure_lower(e)?;
    Ok(if m > 0.0 { osc / m } else { f64::INFINITY })
}

/// L̂ = sup of ω-upper / measure-lower over enumerated connected opens, per
/// scale, with refinement around the previous scale's maximizer and translate
/// probes on unbounded spaces.
pub fn estimate_local_lipschitz(
    f: &FunctionSpec,
    instance: &TmsInstance,
    scales: &[f64],
    budget: usize,
) -> Result<LipschitzEstimate> {
    if scales.is_empty() || scales.iter().any(|s| !(*s > 0.0)) {
        return Err(TmsError::InvalidArgument("scales must be positive".into()));
    }
    if budget == 0 {
        return Err(TmsError::InvalidArgument("budget must be at least 1".into()));
    }
    f.validate(&instance.space)?;
    let space = &instance.space;
    let region = window_region(space);
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.total_cmp(a));
    let mut per_scale: Vec<ScaleMaximum> = Vec::new();
    let mut diagnostics = Vec::new();
    for &scale in &scales {
        let mut best = ScaleMaximum { scale, max_ratio: 0.0, sets_checked: 0, argmax: None };
        let consider = |e: OpenSet, best: &mut ScaleMaximum| -> Result<()> {
            if is_empty(space, &e) {
                return Ok(());
            }
            let r = match ratio(f, instance, &e) {
                Ok(r) => r,
                Err(TmsError::DomainError(_)) => return Ok(()),
                Err(err) => return Err(err),
            };
            best.sets_checked += 1;
            if r > best.max_ratio || best.argmax.is_none() {
                best.max_ratio = best.max_ratio.max(r);
                best.argmax = Some(e);
            }
            Ok(())
        };
        let grid = basic_open_grid(space, scale, &region)?;
        let n = grid.len();
        if n <= budget {
            for e in grid.iter() {
                consider(e, &mut best)?;
            }
        } else {
            for i in 0..budget {
                consider(grid.get(i * (n - 1) / (budget - 1).max(1)), &mut best)?;
            }
        }
        // Refine around the maximizer of the previous, coarser scale.
        if let Some(prev) = per_scale.last().and_then(|p| p.argmax.clone()) {
            let local = match enclosing_ball(space, &prev) {
                Some((c, r)) => canonical(space, &OpenSet::ball(c, r + 2.0 * prev_scale(&per_scale)))?,
                None => prev,
            };
            if let Ok(grid) = basic_open_grid(space, scale, &local) {
                let n = grid.len();
                let take = n.min(budget);
                for i in 0..take {
                    consider(grid.get(if take == n { i } else { i * (n - 1) / (take - 1).max(1) }), &mut best)?;
                }
            }
        }
        per_scale.push(best);
    }
    let mut diverging = false;
    for w in per_scale.windows(2) {
        if w[1].max_ratio > 2.0 * w[0].max_ratio && w[1].max_ratio > 0.0 {
            diverging = true;
            diagnostics.push(format!(
                "ratio grows from {} at scale {} to {} at scale {}",
                w[0].max_ratio, w[0].scale, w[1].max_ratio, w[1].scale
            ));
        }
    }
    let mut translates = Vec::new();
    let unbounded_axis = space.axis_bounds().first().is_some_and(|(l, h)| !l.is_finite() || !h.is_finite())
        && !matches!(space, SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. });
    if unbounded_axis {
        let (l, h) = space.axis_bounds()[0];
        let s = *scales.last().unwrap();
        let mut growth = Vec::new();
        for j in 0..=TRANSLATE_STEPS {
            let t = 2f64.powi(j);
            let mut worst = 0.0_f64;
            let centers = match (l.is_finite(), h.is_finite()) {
                (true, false) => vec![l + t],
                (false, true) => vec![h - t],
                _ => vec![t, -t],
            };
            for c0 in centers {
                let mut c = vec![0.0; space.dim()];
                c[0] = c0;
                let e = canonical(space, &OpenSet::ball(c, s / 2.0))?;
                if let Ok(r) = ratio(f, instance, &e) {
                    worst = worst.max(r);
                }
            }
            translates.push((t, worst));
            growth.push(worst);
        }
        let k = growth.len();
        let local = per_scale.iter().map(|s| s.max_ratio).fold(0.0, f64::max);
        if k >= 3 && growth[k - 1] > 2.0 * local && growth[k - 1] >= 1.5 * growth[k - 3] {
            diverging = true;
            diagnostics.push(format!(
                "ratio keeps growing under translation: {} at distance {}",
                growth[k - 1],
                translates[k - 1].0
            ));
        }
    }
    let estimate = per_scale.iter().map(|s| s.max_ratio).chain(translates.iter().map(|t| t.1)).fold(0.0, f64::max);
    if estimate.is_infinite() {
        diagnostics.push("some set of measure zero has positive oscillation".into());
    }
    Ok(LipschitzEstimate { per_scale, translates, estimate, diverging, diagnostics })
}

fn prev_scale(per_scale: &[ScaleMaximum]) -> f64 {
    per_scale.last().map_or(0.0, |s| s.scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureKind;

    const SCALES: [f64; 5] = [1.0, 0.1, 0.01, 1e-3, 1e-4];

    #[test]
    fn sin_and_identity_on_the_line() {
        let r = TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).unwrap();
        let est = estimate_local_lipschitz(&FunctionSpec::Sin, &r, &SCALES, 2000).unwrap();
        assert!(est.accepted(), "{:?}", est.diagnostics);
        assert!((est.estimate - 1.0).abs() < 0.05, "{}", est.estimate);
        let est = estimate_local_lipschitz(&FunctionSpec::Identity, &r, &SCALES, 2000).unwrap();
        assert!((est.estimate - 1.0).abs() < 1e-12, "{}", est.estimate);
    }

    #[test]
    fn sqrt_near_zero_diverges() {
        let half = SpaceDescriptor::RealInterval { a: Some(0.0), b: None, closed_a: true, closed_b: false };
        let inst = TmsInstance::new(half, MeasureKind::Lebesgue).unwrap();
        let scales: Vec<f64> = (0..=8).map(|k| 10f64.powi(-k)).collect();
        let est = estimate_local_lipschitz(&FunctionSpec::Sqrt, &inst, &scales, 2000).unwrap();
        assert!(est.diverging);
    }

    #[test]
    fn square_on_the_line_diverges_under_translation() {
        let r = TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).unwrap();
        let est = estimate_local_lipschitz(&FunctionSpec::Square, &r, &SCALES, 500).unwrap();
        assert!(est.diverging);
        let unit = TmsInstance::new(SpaceDescriptor::closed_interval(0.0, 1.0), MeasureKind::Lebesgue).unwrap();
        let est = estimate_local_lipschitz(&FunctionSpec::Square, &unit, &SCALES, 2000).unwrap();
        assert!(est.accepted() && est.estimate <= 2.0 + 1e-9 && est.estimate > 1.99);
    }
}
