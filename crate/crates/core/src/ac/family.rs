use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::spaces::{canonical, is_connected, is_empty, pairwise_disjoint, OpenSet, Point, SpaceDescriptor};
use crate::tms::{Bracket, TmsInstance};

use super::function::{oscillation, FunctionSpec};

/// Finite disjoint family of nonempty open connected sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisjointFamily {
    pub sets: Vec<OpenSet>,
    pub total_measure_upper: f64,
}

impl DisjointFamily {
    /// Canonicalizes and validates the sets; empty members are dropped.
    pub fn new(instance: &TmsInstance, sets: Vec<OpenSet>) -> Result<Self> {
        let space = &instance.space;
        let mut kept = Vec::with_capacity(sets.len());
        for s in sets {
            let s = canonical(space, &s)?;
            if is_empty(space, &s) {
                continue;
            }
            if !is_connected(space, &s) {
                return Err(TmsError::NotConnected);
            }
            kept.push(s);
        }
        if !pairwise_disjoint(space, &kept) {
            return Err(TmsError::InvalidArgument("family members overlap".into()));
        }
        let mut total = 0.0;
        for s in &kept {
            total += instance.measure_upper(s)?;
        }
        Ok(DisjointFamily { sets: kept, total_measure_upper: total })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Membership in P_δ.
    pub fn in_p_delta(&self, delta: f64) -> bool {
        self.total_measure_upper < delta
    }
}

/// Componentwise sum of oscillation brackets.
pub fn family_oscillation_sum<R: Rng + ?Sized>(
    f: &FunctionSpec,
    space: &SpaceDescriptor,
    family: &DisjointFamily,
    budget: usize,
    rng: &mut R,
) -> Result<Bracket> {
    let mut acc = Bracket::exact(0.0);
    for s in &family.sets {
        acc = acc + oscillation(f, space, s, budget, rng)?;
    }
    Ok(acc)
}

const UNBOUNDED_WINDOW: f64 = 10.0;

/// A connected set of the given measure whose axis-0 extent starts at `x`,
/// with the other coordinates at `rest`. Returns the set and its extent.
fn shaped_set(instance: &TmsInstance, m: f64, x: f64, rest: &[f64]) -> Option<(OpenSet, f64)> {
    use crate::measure::MeasureKind::*;
    let space = &instance.space;
    match space {
        SpaceDescriptor::RealInterval { .. } => Some((OpenSet::interval(x, x + m), m)),
        SpaceDescriptor::RectifiableCurve { samples } => {
            Some((OpenSet::interval(samples.param_at_arclength(x), samples.param_at_arclength(x + m)), m))
        }
        SpaceDescriptor::Circle { metric } => {
            let len = match metric {
                crate::spaces::CircleMetric::Arc => m,
                crate::spaces::CircleMetric::Chord => 2.0 * (m / 2.0).min(1.0).asin(),
            };
            (len < std::f64::consts::PI).then(|| (OpenSet::arc(x, x + len), len))
        }
        _ => {
            let n = space.dim();
            match instance.measure_kind {
                Lebesgue => {
                    let side = m.powf(1.0 / n as f64);
                    let mut bounds = vec![[x, x + side]];
                    bounds.extend(rest.iter().map(|c| [*c, c + side]));
                    Some((OpenSet::cuboid(bounds), side))
                }
                _ => {
                    let r = m / 2.0;
                    let mut e = vec![0.0; n];
                    e[0] = 1.0;
                    let reach = r / space.norm_of(&e)?;
                    let mut center = vec![x + reach];
                    center.extend(rest.iter().map(|c| c + reach));
                    Some((OpenSet::ball(center, r), 2.0 * reach))
                }
            }
        }
    }
}

/// A random P_δ family: 1 to 8 connected sets with total measure u·δ for u in
/// [0.5, 0.999], laid out along the first axis. With an anchor the family
/// starts next to that point.
pub fn random_family<R: Rng + ?Sized>(
    instance: &TmsInstance,
    delta: f64,
    anchor: Option<&Point>,
    rng: &mut R,
) -> Result<DisjointFamily> {
    let space = &instance.space;
    let delta = if delta.is_finite() { delta } else { 1.0 };
    if !(delta > 0.0) {
        return Err(TmsError::InvalidArgument("delta must be positive".into()));
    }
    let window: Vec<(f64, f64)> = match space {
        SpaceDescriptor::Circle { .. } => vec![(0.0, std::f64::consts::TAU)],
        SpaceDescriptor::RectifiableCurve { samples } => vec![(0.0, samples.length())],
        _ => space
            .axis_bounds()
            .into_iter()
            .map(|(l, h)| {
                let l = if l.is_finite() { l } else { -UNBOUNDED_WINDOW };
                let h = if h.is_finite() { h } else { UNBOUNDED_WINDOW };
                (l, h)
            })
            .collect(),
    };
    let mut scale = 1.0;
    for _ in 0..8 {
        let k = rng.gen_range(1..=8usize);
        let total = rng.gen_range(0.5..0.999) * delta * scale;
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let wsum: f64 = weights.iter().sum();
        let measures: Vec<f64> = weights.iter().map(|w| total * w / wsum).collect();
        let (lo, hi) = window[0];
        let rest_for = |rng: &mut R, side: f64| -> Vec<f64> {
            window[1..]
                .iter()
                .map(|(l, h)| {
                    let top = (h - side).max(*l);
                    if top > *l {
                        rng.gen_range(*l..top)
                    } else {
                        *l
                    }
                })
                .collect()
        };
        let mut shapes = Vec::with_capacity(k);
        let mut extents = 0.0;
        for &m in &measures {
            let Some((_, ext)) = shaped_set(instance, m, 0.0, &vec![0.0; window.len() - 1]) else { break };
            extents += ext;
            shapes.push(ext);
        }
        if shapes.len() < k || extents >= hi - lo {
            scale *= 0.5;
            continue;
        }
        let slack = (hi - lo - extents) * 0.9;
        let gap_weights: Vec<f64> = (0..=k).map(|_| rng.gen_range(0.0..1.0)).collect();
        let gsum: f64 = gap_weights.iter().sum::<f64>().max(1e-12);
        let spread = if anchor.is_some() { (extents * 4.0).min(slack) } else { slack };
        let mut x = match anchor {
            Some(p) => {
                let a = match space {
                    SpaceDescriptor::RectifiableCurve { samples } => samples.arclength_at(p.0[0]),
                    _ => p.0[0],
                };
                (a - rng.gen_range(0.0..=extents.max(1e-300))).clamp(lo, (hi - extents - spread).max(lo))
            }
            None => lo + gap_weights[0] / gsum * slack,
        };
        let mut sets = Vec::with_capacity(k);
        for (i, &m) in measures.iter().enumerate() {
            let side = shapes[i];
            let rest = match anchor {
                Some(p) if p.0.len() == window.len() && window.len() > 1 => {
                    p.0[1..].iter().zip(&window[1..]).map(|(c, (l, h))| (c - side / 2.0).clamp(*l, (h - side).max(*l))).collect()
                }
                _ => rest_for(rng, side),
            };
            let (s, ext) = shaped_set(instance, m, x, &rest).unwrap();
            sets.push(s);
            x += ext + gap_weights[i + 1] / gsum * spread;
        }
        let fam = DisjointFamily::new(instance, sets)?;
        if fam.in_p_delta(delta) && !fam.is_empty() {
            return Ok(fam);
        }
        scale *= 0.5;
    }
    Err(TmsError::InvalidArgument(format!("could not place a family of measure below {delta}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureKind;
    use crate::spaces::{CircleMetric, Norm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_sums() {
        let inst = TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).unwrap();
        let fam = DisjointFamily::new(&inst, vec![OpenSet::interval(0.0, 0.1), OpenSet::interval(0.2, 0.3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = family_oscillation_sum(&FunctionSpec::Identity, &inst.space, &fam, 100, &mut rng).unwrap();
        assert!((s.lower - 0.2).abs() < 1e-15 && (s.upper - 0.2).abs() < 1e-15);
        let s = family_oscillation_sum(&FunctionSpec::Constant { c: 1.0 }, &inst.space, &fam, 100, &mut rng).unwrap();
        assert_eq!(s.upper, 0.0);
        let s = family_oscillation_sum(&FunctionSpec::Sin, &inst.space, &fam, 100, &mut rng).unwrap();
        assert!(s.upper <= 0.2);
        assert!(DisjointFamily::new(&inst, vec![OpenSet::interval(0.0, 0.3), OpenSet::interval(0.2, 0.4)]).is_err());
    }

    #[test]
    fn random_families_are_in_p_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let instances = [
            TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).unwrap(),
            TmsInstance::new(SpaceDescriptor::closed_interval(0.0, 1.0), MeasureKind::Lebesgue).unwrap(),
            TmsInstance::new(SpaceDescriptor::plane(), MeasureKind::DiamOuter).unwrap(),
            TmsInstance::new(SpaceDescriptor::plane(), MeasureKind::Lebesgue).unwrap(),
            TmsInstance::new(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter).unwrap(),
            TmsInstance::new(SpaceDescriptor::grid(6, Norm::L2), MeasureKind::DiamOuter).unwrap(),
        ];
        for inst in &instances {
            for delta in [1.0, 1e-2, 1e-5] {
                for _ in 0..20 {
                    let fam = random_family(inst, delta, None, &mut rng).unwrap();
                    assert!(fam.in_p_delta(delta) && fam.total_measure_upper >= 0.25 * delta);
                }
                let anchor = crate::tms::sample_space_points(&inst.space, 1, 5.0, &mut rng).remove(0);
                assert!(random_family(inst, delta, Some(&anchor), &mut rng).unwrap().in_p_delta(delta));
            }
        }
    }
}
