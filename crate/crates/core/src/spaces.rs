//! Concrete metric spaces and the open sets the rest of the crate works with.
//!
//! Every shape is open: boundary points never belong to it. A shape is
//! interpreted relative to its space, so `Interval(-1, 0.5)` inside the closed
//! space `[0, 1]` is the relatively open set `[0, 0.5)`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};

/// Relative inset used when sampling near the boundary of an open shape.
pub const EDGE_INSET: f64 = 1e-9;

/// Largest list `enumerate_basic_opens` will materialize.
pub const MAX_BASIC_OPENS: usize = 1 << 20;

/// Half-width of the window used when a caller samples an unbounded space.
pub const SAMPLE_WINDOW: f64 = 1e3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn scalar(x: f64) -> Self {
        Point(vec![x])
    }

    /// A point on the circle; the angle is reduced to `[0, 2π)`.
    pub fn angle(theta: f64) -> Self {
        Point(vec![normalize_angle(theta)])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Norm {
    L1,
    L2,
    Sup,
    Lp(f64),
}

impl Norm {
    pub fn exponent(self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 2.0,
            Norm::Sup => f64::INFINITY,
            Norm::Lp(p) => p,
        }
    }

    /// `(weight · Σ|vᵢ|ᵖ)^{1/p}`; the sup norm ignores the weight.
    pub fn eval(self, v: &[f64], weight: f64) -> f64 {
        let p = self.exponent();
        if p.is_infinite() {
            v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
        } else if p == 1.0 {
            weight * v.iter().map(|x| x.abs()).sum::<f64>()
        } else if p == 2.0 {
            (weight * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
        } else {
            (weight * v.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
        }
    }

    /// Smallest `D` with `|Σ cᵢvᵢ| ≤ D·‖v‖` for this (weighted) norm.
    pub fn dual(self, c: &[f64], weight: f64) -> f64 {
        let p = self.exponent();
        if p.is_infinite() {
            c.iter().map(|x| x.abs()).sum()
        } else if p == 1.0 {
            c.iter().fold(0.0_f64, |m, x| m.max(x.abs())) / weight
        } else {
            let q = p / (p - 1.0);
            let cq = c.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q);
            cq * weight.powf(-1.0 / p)
        }
    }

    fn validate(self) -> Result<()> {
        if let Norm::Lp(p) = self {
            if !(p > 1.0) || !p.is_finite() {
                return Err(TmsError::InvalidSpace(format!("lp norm needs finite p > 1, got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleMetric {
    Arc,
    Chord,
}

/// A polyline with its cumulative chordal arclength. Points on the curve are
/// addressed by a parameter `t ∈ [0, 1]` that runs linearly over the samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Curve {
    samples: Vec<[f64; 2]>,
    cumulative: Vec<f64>,
}

impl TryFrom<Vec<[f64; 2]>> for Curve {
    type Error = TmsError;

    fn try_from(samples: Vec<[f64; 2]>) -> Result<Self> {
        Curve::new(samples)
    }
}

impl From<Curve> for Vec<[f64; 2]> {
    fn from(c: Curve) -> Self {
        c.samples
    }
}

impl Curve {
    pub fn new(samples: Vec<[f64; 2]>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(TmsError::InvalidSpace("a curve needs at least two samples".into()));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(TmsError::InvalidSpace("curve samples must be finite".into()));
        }
        let mut cumulative = Vec::with_capacity(samples.len());
        cumulative.push(0.0);
        for w in samples.windows(2) {
            let seg = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
            if seg <= 0.0 {
                return Err(TmsError::InvalidSpace("consecutive curve samples must differ".into()));
            }
            cumulative.push(cumulative.last().unwrap() + seg);
        }
        Ok(Curve { samples, cumulative })
    }

    /// Samples a parametrized planar curve at `n + 1` evenly spaced parameters.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> [f64; 2]) -> Result<Self> {
        Curve::new((0..=n).map(|i| f(i as f64 / n as f64)).collect())
    }

    pub fn samples(&self) -> &[[f64; 2]] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let segs = self.samples.len() - 1;
        let u = t.clamp(0.0, 1.0) * segs as f64;
        let i = (u.floor() as usize).min(segs - 1);
        (i, u - i as f64)
    }

    pub fn arclength_at(&self, t: f64) -> f64 {
        let (i, frac) = self.locate(t);
        self.cumulative[i] + frac * (self.cumulative[i + 1] - self.cumulative[i])
    }

    /// Inverse of `arclength_at`; values outside `[0, length]` map just outside `[0, 1]`.
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return if s < 0.0 { -1.0 } else { 0.0 };
        }
        let total = self.length();
        if s >= total {
            return if s > total { 2.0 } else { 1.0 };
        }
        let i = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => return i as f64 / (self.samples.len() - 1) as f64,
            Err(i) => i - 1,
        };
        let frac = (s - self.cumulative[i]) / (self.cumulative[i + 1] - self.cumulative[i]);
        (i as f64 + frac) / (self.samples.len() - 1) as f64
    }

    pub fn position(&self, t: f64) -> [f64; 2] {
        let (i, frac) = self.locate(t);
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        [a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDescriptor {
    /// An interval of ℝ; a missing endpoint means the interval is unbounded there.
    RealInterval {
        #[serde(default, with = "crate::serde_float::option", skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
        #[serde(default, with = "crate::serde_float::option", skip_serializing_if = "Option::is_none")]
        b: Option<f64>,
        #[serde(default)]
        closed_a: bool,
        #[serde(default)]
        closed_b: bool,
    },
    /// ℝⁿ, or a closed box inside it when `bounds` is given.
    EuclideanBox {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<Vec<[f64; 2]>>,
        norm: Norm,
    },
    /// The unit circle; points are angles in `[0, 2π)`.
    Circle {
        metric: CircleMetric,
    },
    RectifiableCurve {
        samples: Curve,
    },
    /// Functions on `[0, 1]` sampled at `m` midpoints; norms use the weight `1/m`.
    GridFunctionSpace {
        m: usize,
        norm: Norm,
    },
}

impl SpaceDescriptor {
    pub fn real_line() -> Self {
        SpaceDescriptor::RealInterval { a: None, b: None, closed_a: false, closed_b: false }
    }

    pub fn closed_interval(a: f64, b: f64) -> Self {
        SpaceDescriptor::RealInterval { a: Some(a), b: Some(b), closed_a: true, closed_b: true }
    }

    pub fn open_interval(a: f64, b: f64) -> Self {
        SpaceDescriptor::RealInterval { a: Some(a), b: Some(b), closed_a: false, closed_b: false }
    }

    /// `[0, ∞)`.
    pub fn half_line() -> Self {
        SpaceDescriptor::RealInterval { a: Some(0.0), b: None, closed_a: true, closed_b: false }
    }

    pub fn euclidean(dim: usize, norm: Norm) -> Self {
        SpaceDescriptor::EuclideanBox { dim, bounds: None, norm }
    }

    pub fn plane() -> Self {
        Self::euclidean(2, Norm::L2)
    }

    pub fn unit_cube(dim: usize, norm: Norm) -> Self {
        SpaceDescriptor::EuclideanBox { dim, bounds: Some(vec![[0.0, 1.0]; dim]), norm }
    }

    pub fn circle(metric: CircleMetric) -> Self {
        SpaceDescriptor::Circle { metric }
    }

    pub fn curve(samples: Vec<[f64; 2]>) -> Result<Self> {
        Ok(SpaceDescriptor::RectifiableCurve { samples: Curve::new(samples)? })
    }

    pub fn grid(m: usize, norm: Norm) -> Self {
        SpaceDescriptor::GridFunctionSpace { m, norm }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceDescriptor::RealInterval { .. } => "real_interval",
            SpaceDescriptor::EuclideanBox { .. } => "euclidean_box",
            SpaceDescriptor::Circle { .. } => "circle",
            SpaceDescriptor::RectifiableCurve { .. } => "rectifiable_curve",
            SpaceDescriptor::GridFunctionSpace { .. } => "grid_function_space",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceDescriptor::RealInterval { a, b, .. } => {
                let (lo, hi) = (a.unwrap_or(f64::NEG_INFINITY), b.unwrap_or(f64::INFINITY));
                if lo.is_nan() || hi.is_nan() || !(lo < hi) {
                    return Err(TmsError::InvalidSpace(format!("real interval needs a < b, got ({lo}, {hi})")));
                }
            }
            SpaceDescriptor::EuclideanBox { dim, bounds, norm } => {
                if *dim == 0 {
                    return Err(TmsError::InvalidSpace("euclidean dimension must be positive".into()));
                }
                norm.validate()?;
                if let Some(b) = bounds {
                    if b.len() != *dim {
                        return Err(TmsError::InvalidSpace(format!("{} bounds for dimension {dim}", b.len())));
                    }
                    if b.iter().any(|[lo, hi]| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
                        return Err(TmsError::InvalidSpace("box bounds need finite lo < hi".into()));
                    }
                }
            }
            SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. } => {}
            SpaceDescriptor::GridFunctionSpace { m, norm } => {
                if *m < 2 {
                    return Err(TmsError::InvalidSpace(format!("grid size must be at least 2, got {m}")));
                }
                norm.validate()?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceDescriptor::EuclideanBox { dim, .. } => *dim,
            SpaceDescriptor::GridFunctionSpace { m, .. } => *m,
            _ => 1,
        }
    }

    pub fn separable(&self) -> bool {
        true
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, SpaceDescriptor::Circle { .. })
    }

    /// Spaces whose open sets are described by one real coordinate interval.
    pub fn is_line_like(&self) -> bool {
        matches!(self, SpaceDescriptor::RealInterval { .. } | SpaceDescriptor::RectifiableCurve { .. })
    }

    /// Coordinate bounds per axis (the circle reports `[0, 2π]`).
    pub fn axis_bounds(&self) -> Vec<(f64, f64)> {
        match self {
            SpaceDescriptor::RealInterval { a, b, .. } => {
                vec![(a.unwrap_or(f64::NEG_INFINITY), b.unwrap_or(f64::INFINITY))]
            }
            SpaceDescriptor::EuclideanBox { dim, bounds, .. } => match bounds {
                Some(b) => b.iter().map(|[l, h]| (*l, *h)).collect(),
                None => vec![(f64::NEG_INFINITY, f64::INFINITY); *dim],
            },
            SpaceDescriptor::Circle { .. } => vec![(0.0, TAU)],
            SpaceDescriptor::RectifiableCurve { .. } => vec![(0.0, 1.0)],
            SpaceDescriptor::GridFunctionSpace { m, .. } => vec![(f64::NEG_INFINITY, f64::INFINITY); *m],
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.axis_bounds().iter().all(|(l, h)| l.is_finite() && h.is_finite())
    }

    /// `(norm, weight)` for normed spaces.
    pub fn norm(&self) -> Option<(Norm, f64)> {
        match self {
            SpaceDescriptor::RealInterval { .. } => Some((Norm::Sup, 1.0)),
            SpaceDescriptor::EuclideanBox { norm, .. } => Some((*norm, 1.0)),
            SpaceDescriptor::GridFunctionSpace { m, norm } => Some((*norm, 1.0 / *m as f64)),
            _ => None,
        }
    }

    pub fn norm_of(&self, v: &[f64]) -> Option<f64> {
        self.norm().map(|(n, w)| n.eval(v, w))
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(TmsError::InvalidPoint(format!(
                "point has {} coordinates, space {} expects {}",
                p.dim(),
                self.kind_name(),
                self.dim()
            )));
        }
        if p.0.iter().any(|x| !x.is_finite()) {
            return Err(TmsError::InvalidPoint("coordinates must be finite".into()));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        if self.check_point(p).is_err() {
            return false;
        }
        match self {
            SpaceDescriptor::RealInterval { a, b, closed_a, closed_b } => {
                let x = p.0[0];
                let lo_ok = match a {
                    None => true,
                    Some(a) => x > *a || (*closed_a && x == *a),
                };
                let hi_ok = match b {
                    None => true,
                    Some(b) => x < *b || (*closed_b && x == *b),
                };
                lo_ok && hi_ok
            }
            SpaceDescriptor::EuclideanBox { bounds: Some(b), .. } => p.0.iter().zip(b).all(|(x, [l, h])| *x >= *l && *x <= *h),
            SpaceDescriptor::Circle { .. } => (0.0..TAU).contains(&p.0[0]),
            SpaceDescriptor::RectifiableCurve { .. } => (0.0..=1.0).contains(&p.0[0]),
            _ => true,
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.dist(&p.0, &q.0))
    }

    /// Metric on raw coordinates; callers guarantee matching dimensions.
    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            SpaceDescriptor::Circle { metric } => {
                let arc = arc_distance(x[0], y[0]);
                match metric {
                    CircleMetric::Arc => arc,
                    CircleMetric::Chord => 2.0 * (arc / 2.0).sin(),
                }
            }
            SpaceDescriptor::RectifiableCurve { samples } => (samples.arclength_at(x[0]) - samples.arclength_at(y[0])).abs(),
            _ => {
                let (norm, w) = self.norm().expect("normed space");
                let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                norm.eval(&diff, w)
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            SpaceDescriptor::Circle { metric: CircleMetric::Arc } => PI,
            SpaceDescriptor::Circle { metric: CircleMetric::Chord } => 2.0,
            SpaceDescriptor::RectifiableCurve { samples } => samples.length(),
            _ => {
                let b = self.axis_bounds();
                let sides: Vec<f64> = b.iter().map(|(l, h)| h - l).collect();
                let (norm, w) = self.norm().unwrap();
                norm.eval(&sides, w)
            }
        }
    }

    fn circle_metric(&self) -> Option<CircleMetric> {
        match self {
            SpaceDescriptor::Circle { metric } => Some(*metric),
            _ => None,
        }
    }

    pub fn curve_table(&self) -> Option<&Curve> {
        match self {
            SpaceDescriptor::RectifiableCurve { samples } => Some(samples),
            _ => None,
        }
    }

    /// Metric length of a coordinate interval on a line-like space.
    pub fn line_length(&self, a: f64, b: f64) -> f64 {
        match self.curve_table() {
            Some(c) => c.arclength_at(b) - c.arclength_at(a),
            None => b - a,
        }
    }

    /// Window used when sampling the whole of an unbounded space.
    pub fn sampling_bounds(&self) -> Vec<(f64, f64)> {
        self.axis_bounds()
            .into_iter()
            .map(|(l, h)| {
                let l = if l.is_finite() { l } else { -SAMPLE_WINDOW };
                let h = if h.is_finite() { h } else { SAMPLE_WINDOW };
                (l, h)
            })
            .collect()
    }
}

pub fn arc_distance(a: f64, b: f64) -> f64 {
    // Ordered so that the result is exactly symmetric under rounding.
    let d = (a.max(b) - a.min(b)).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Counterclockwise length of the arc from `start` to `end`, in `[0, 2π]`.
pub fn arc_length(start: f64, end: f64) -> f64 {
    let raw = end - start;
    if raw > 0.0 && raw <= TAU {
        raw
    } else {
        raw.rem_euclid(TAU)
    }
}

pub fn distance(space: &SpaceDescriptor, p: &Point, q: &Point) -> Result<f64> {
    space.distance(p, q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum OpenSet {
    Empty,
    /// The whole ambient space.
    Whole,
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Interval {
        a: f64,
        b: f64,
    },
    /// Counterclockwise from `start` to `end`.
    Arc {
        start: f64,
        end: f64,
    },
    #[serde(rename = "box")]
    Cuboid {
        bounds: Vec<[f64; 2]>,
    },
    Union {
        parts: Vec<OpenSet>,
    },
}

pub type OpenSetDescriptor = OpenSet;

impl OpenSet {
    pub fn interval(a: f64, b: f64) -> Self {
        OpenSet::Interval { a, b }
    }

    pub fn arc(start: f64, end: f64) -> Self {
        OpenSet::Arc { start, end }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        OpenSet::Ball { center, radius }
    }

    pub fn cuboid(bounds: Vec<[f64; 2]>) -> Self {
        OpenSet::Cuboid { bounds }
    }

    pub fn union(parts: Vec<OpenSet>) -> Self {
        OpenSet::Union { parts }
    }

    /// Connected shapes are connected by construction; unions are checked.
    pub fn connected(&self, space: &SpaceDescriptor) -> bool {
        is_connected(space, self)
    }

    fn validate_params(&self, space: &SpaceDescriptor) -> Result<()> {
        let bad = |m: &str| Err(TmsError::UnsupportedShape(m.to_string()));
        match self {
            OpenSet::Ball { center, radius } => {
                if center.len() != space.dim() || center.iter().any(|c| !c.is_finite()) {
                    return bad("ball center does not match the space dimension");
                }
                if !(radius.is_finite()) || *radius < 0.0 {
                    return bad("ball radius must be finite and nonnegative");
                }
            }
            OpenSet::Interval { a, b } => {
                if a.is_nan() || b.is_nan() {
                    return bad("interval endpoints must be numbers");
                }
                if space.is_circle() {
                    return bad("use arcs on the circle");
                }
                if space.dim() != 1 {
                    return bad("intervals live on one-dimensional spaces");
                }
            }
            OpenSet::Arc { start, end } => {
                if !space.is_circle() {
                    return bad("arcs live on the circle");
                }
                if !start.is_finite() || !end.is_finite() {
                    return bad("arc endpoints must be finite");
                }
            }
            OpenSet::Cuboid { bounds } => {
                if bounds.len() != space.dim() || space.is_circle() {
                    return bad("box does not match the space dimension");
                }
                if bounds.iter().flatten().any(|v| v.is_nan()) {
                    return bad("box bounds must be numbers");
                }
            }
            OpenSet::Union { parts } => {
                for p in parts {
                    p.validate_params(space)?;
                }
            }
            OpenSet::Empty | OpenSet::Whole => {}
        }
        Ok(())
    }
}

/// Rewrites balls as intervals/arcs/boxes where the metric makes them so, and
/// flattens unions. Other shapes are returned unchanged.
pub fn canonical(space: &SpaceDescriptor, s: &OpenSet) -> Result<OpenSet> {
    s.validate_params(space)?;
    Ok(canonical_unchecked(space, s))
}

fn canonical_unchecked(space: &SpaceDescriptor, s: &OpenSet) -> OpenSet {
    match s {
        OpenSet::Ball { center, radius } => {
            let (c, r) = (center.as_slice(), *radius);
            if r <= 0.0 {
                return OpenSet::Empty;
            }
            match space {
                SpaceDescriptor::RealInterval { .. } => OpenSet::interval(c[0] - r, c[0] + r),
                SpaceDescriptor::RectifiableCurve { samples } => {
                    let s0 = samples.arclength_at(c[0]);
                    OpenSet::interval(samples.param_at_arclength(s0 - r), samples.param_at_arclength(s0 + r))
                }
                SpaceDescriptor::Circle { metric } => {
                    let half = match metric {
                        CircleMetric::Arc if r > PI => return OpenSet::Whole,
                        CircleMetric::Arc => r,
                        CircleMetric::Chord if r > 2.0 => return OpenSet::Whole,
                        CircleMetric::Chord => 2.0 * (r / 2.0).asin(),
                    };
                    OpenSet::arc(c[0] - half, c[0] + half)
                }
                _ => {
                    let (norm, _) = space.norm().unwrap();
                    if norm == Norm::Sup || space.dim() == 1 {
                        OpenSet::cuboid(c.iter().map(|x| [x - r, x + r]).collect())
                    } else {
                        s.clone()
                    }
                }
            }
        }
        OpenSet::Interval { a, b } if matches!(space, SpaceDescriptor::EuclideanBox { .. }) => OpenSet::cuboid(vec![[*a, *b]]),
        OpenSet::Cuboid { bounds } if space.is_line_like() => OpenSet::interval(bounds[0][0], bounds[0][1]),
        OpenSet::Union { parts } => {
            let mut flat = Vec::new();
            for p in parts {
                match canonical_unchecked(space, p) {
                    OpenSet::Union { parts } => flat.extend(parts),
                    OpenSet::Empty => {}
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => OpenSet::Empty,
                1 => flat.pop().unwrap(),
                _ => OpenSet::Union { parts: flat },
            }
        }
        other => other.clone(),
    }
}

/// A coordinate interval clipped to the bounds of a line-like space.
fn clip_line(space: &SpaceDescriptor, a: f64, b: f64) -> (f64, f64) {
    let (lo, hi) = space.axis_bounds()[0];
    (a.max(lo), b.min(hi))
}

fn clip_box(space: &SpaceDescriptor, bounds: &[[f64; 2]]) -> Vec<(f64, f64)> {
    bounds.iter().zip(space.axis_bounds()).map(|([a, b], (lo, hi))| (a.max(lo), b.min(hi))).collect()
}

pub fn is_empty(space: &SpaceDescriptor, s: &OpenSet) -> bool {
    match canonical_unchecked(space, s) {
        OpenSet::Empty => true,
        OpenSet::Whole => false,
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, a, b);
            !(lo < hi)
        }
        OpenSet::Arc { start, end } => arc_length(start, end) <= 0.0,
        OpenSet::Ball { radius, .. } => radius <= 0.0,
        OpenSet::Cuboid { bounds } => clip_box(space, &bounds).iter().any(|(l, h)| !(l < h)),
        OpenSet::Union { parts } => parts.iter().all(|p| is_empty(space, p)),
    }
}

pub fn contains(space: &SpaceDescriptor, s: &OpenSet, p: &Point) -> bool {
    space.contains(p) && shape_contains(space, &canonical_unchecked(space, s), &p.0)
}

fn shape_contains(space: &SpaceDescriptor, s: &OpenSet, x: &[f64]) -> bool {
    match s {
        OpenSet::Empty => false,
        OpenSet::Whole => true,
        OpenSet::Interval { a, b } => *a < x[0] && x[0] < *b,
        OpenSet::Arc { start, end } => {
            let len = arc_length(*start, *end);
            let off = (x[0] - start).rem_euclid(TAU);
            off > 0.0 && off < len
        }
        OpenSet::Ball { center, radius } => space.dist(center, x) < *radius,
        OpenSet::Cuboid { bounds } => bounds.iter().zip(x).all(|([a, b], v)| a < v && v < b),
        OpenSet::Union { parts } => parts.iter().any(|p| shape_contains(space, p, x)),
    }
}

pub fn is_connected(space: &SpaceDescriptor, s: &OpenSet) -> bool {
    let parts = match canonical_unchecked(space, s) {
        OpenSet::Union { parts } => parts,
        _ => return true,
    };
    let parts: Vec<OpenSet> = parts.into_iter().filter(|p| !is_empty(space, p)).collect();
    if parts.len() <= 1 {
        return true;
    }
    // Overlap graph; touching open intervals such as (0,1),(1,2) are disjoint and
    // their union is disconnected.
    let n = parts.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && !are_disjoint(space, &parts[i], &parts[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|v| v)
}

/// A ball (center, radius) that contains the set.
pub fn enclosing_ball(space: &SpaceDescriptor, s: &OpenSet) -> Option<(Vec<f64>, f64)> {
    match canonical_unchecked(space, s) {
        OpenSet::Empty => None,
        OpenSet::Whole => {
            if space.is_circle() {
                Some((vec![0.0], space.diameter()))
            } else if space.is_bounded() {
                let b = space.axis_bounds();
                let c: Vec<f64> = b.iter().map(|(l, h)| 0.5 * (l + h)).collect();
                Some((c, space.diameter()))
            } else {
                None
            }
        }
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, a, b);
            if !lo.is_finite() || !hi.is_finite() {
                return None;
            }
            match space.curve_table() {
                Some(c) => {
                    let (sa, sb) = (c.arclength_at(lo), c.arclength_at(hi));
                    Some((vec![c.param_at_arclength(0.5 * (sa + sb))], 0.5 * (sb - sa)))
                }
                None => Some((vec![0.5 * (lo + hi)], 0.5 * (hi - lo))),
            }
        }
        OpenSet::Arc { start, end } => {
            let len = arc_length(start, end);
            let half = (len / 2.0).min(PI);
            let r = match space.circle_metric() {
                Some(CircleMetric::Chord) => 2.0 * (half / 2.0).sin(),
                _ => half,
            };
            Some((vec![normalize_angle(start + len / 2.0)], r))
        }
        OpenSet::Ball { center, radius } => Some((center, radius)),
        OpenSet::Cuboid { bounds } => {
            let clipped = clip_box(space, &bounds);
            if clipped.iter().any(|(l, h)| !l.is_finite() || !h.is_finite()) {
                return None;
            }
            let c: Vec<f64> = clipped.iter().map(|(l, h)| 0.5 * (l + h)).collect();
            let half: Vec<f64> = clipped.iter().map(|(l, h)| 0.5 * (h - l).max(0.0)).collect();
            let (norm, w) = space.norm()?;
            Some((c, norm.eval(&half, w)))
        }
        OpenSet::Union { parts } => {
            let balls: Vec<_> = parts.iter().filter_map(|p| enclosing_ball(space, p)).collect();
            if balls.len() != parts.len() || balls.is_empty() {
                return None;
            }
            let (c0, _) = &balls[0];
            let r = balls.iter().map(|(c, r)| space.dist(c0, c) + r).fold(0.0, f64::max);
            Some((c0.clone(), r))
        }
    }
}

/// Upper bound on `sup d(x, y)` over the set; exact for intervals, arcs, sup-norm
/// boxes and balls of a normed space.
pub fn diam_upper(space: &SpaceDescriptor, s: &OpenSet) -> Result<f64> {
    let s = canonical(space, s)?;
    if is_empty(space, &s) {
        return Ok(0.0);
    }
    Ok(match &s {
        OpenSet::Empty => 0.0,
        OpenSet::Whole => space.diameter(),
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, *a, *b);
            space.line_length(lo, hi)
        }
        OpenSet::Arc { start, end } => {
            let len = arc_length(*start, *end).min(PI);
            match space.circle_metric() {
                Some(CircleMetric::Chord) => 2.0 * (len / 2.0).sin(),
                _ => len,
            }
        }
        OpenSet::Ball { radius, .. } => 2.0 * radius,
        OpenSet::Cuboid { bounds } => {
            let sides: Vec<f64> = clip_box(space, bounds).iter().map(|(l, h)| h - l).collect();
            let (norm, w) = space.norm().unwrap();
            norm.eval(&sides, w)
        }
        OpenSet::Union { parts } => {
            let parts: Vec<&OpenSet> = parts.iter().filter(|p| !is_empty(space, p)).collect();
            if space.is_line_like() {
                let (lo, hi) = line_hull(space, &s).unwrap();
                space.line_length(lo, hi)
            } else {
                let mut best = 0.0_f64;
                let balls: Vec<_> = parts.iter().map(|p| enclosing_ball(space, p)).collect();
                for (i, p) in parts.iter().enumerate() {
                    best = best.max(diam_upper(space, p)?);
                    for j in 0..i {
                        best = match (&balls[i], &balls[j]) {
                            (Some((ci, ri)), Some((cj, rj))) => best.max(space.dist(ci, cj) + ri + rj),
                            _ => f64::INFINITY,
                        };
                    }
                }
                best.min(space.diameter())
            }
        }
    })
}

/// Coordinate hull of a set on a line-like space, clipped to the space.
pub fn line_hull(space: &SpaceDescriptor, s: &OpenSet) -> Option<(f64, f64)> {
    if !space.is_line_like() {
        return None;
    }
    match canonical_unchecked(space, s) {
        OpenSet::Empty => None,
        OpenSet::Whole => Some(space.axis_bounds()[0]),
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, a, b);
            (lo < hi).then_some((lo, hi))
        }
        OpenSet::Union { parts } => {
            parts.iter().filter_map(|p| line_hull(space, p)).reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
        }
        _ => None,
    }
}

/// Coordinate bounding box of a set in a normed space (clipped to the space).
pub fn bounding_box(space: &SpaceDescriptor, s: &OpenSet) -> Option<Vec<(f64, f64)>> {
    if space.is_circle() {
        return None;
    }
    let raw = match canonical_unchecked(space, s) {
        OpenSet::Empty => return None,
        OpenSet::Whole => space.axis_bounds(),
        OpenSet::Interval { a, b } => vec![(a, b)],
        OpenSet::Cuboid { bounds } => bounds.iter().map(|[a, b]| (*a, *b)).collect(),
        OpenSet::Ball { center, radius } => {
            let (norm, w) = space.norm()?;
            // Along axis i the ball reaches r / ‖eᵢ‖.
            center
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut e = vec![0.0; center.len()];
                    e[i] = 1.0;
                    let reach = radius / norm.eval(&e, w);
                    (c - reach, c + reach)
                })
                .collect()
        }
        OpenSet::Union { parts } => {
            return parts
                .iter()
                .filter_map(|p| bounding_box(space, p))
                .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| (x.0.min(y.0), x.1.max(y.1))).collect())
        }
        OpenSet::Arc { .. } => return None,
    };
    Some(raw.iter().zip(space.axis_bounds()).map(|((a, b), (lo, hi))| (a.max(lo), b.min(hi))).collect())
}

pub fn are_disjoint(space: &SpaceDescriptor, s1: &OpenSet, s2: &OpenSet) -> bool {
    let (a, b) = (canonical_unchecked(space, s1), canonical_unchecked(space, s2));
    shapes_disjoint(space, &a, &b)
}

fn shapes_disjoint(space: &SpaceDescriptor, a: &OpenSet, b: &OpenSet) -> bool {
    use OpenSet::*;
    if is_empty(space, a) || is_empty(space, b) {
        return true;
    }
    match (a, b) {
        (Whole, _) | (_, Whole) => false,
        (Union { parts }, other) | (other, Union { parts }) => parts.iter().all(|p| shapes_disjoint(space, p, other)),
        (Interval { a: a1, b: b1 }, Interval { a: a2, b: b2 }) => {
            let (l1, h1) = clip_line(space, *a1, *b1);
            let (l2, h2) = clip_line(space, *a2, *b2);
            l1.max(l2) >= h1.min(h2)
        }
        (Arc { start: s1, end: e1 }, Arc { start: s2, end: e2 }) => {
            let (l1, l2) = (arc_length(*s1, *e1), arc_length(*s2, *e2));
            let d = (s2 - s1).rem_euclid(TAU);
            d >= l1 && d + l2 <= TAU
        }
        (Cuboid { bounds: b1 }, Cuboid { bounds: b2 }) => {
            let (c1, c2) = (clip_box(space, b1), clip_box(space, b2));
            c1.iter().zip(&c2).any(|((l1, h1), (l2, h2))| h1 <= l2 || h2 <= l1)
        }
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => space.dist(c1, c2) >= r1 + r2,
        (Ball { center, radius }, Cuboid { bounds }) | (Cuboid { bounds }, Ball { center, radius }) => {
            let nearest: Vec<f64> = center.iter().zip(bounds).map(|(c, [l, h])| c.clamp(*l, *h)).collect();
            space.dist(center, &nearest) >= *radius
        }
        _ => false,
    }
}

/// Pairwise disjointness of a family, using a sweep over axis-0 extents so
/// large families of intervals, arcs or boxes stay cheap.
pub fn pairwise_disjoint(space: &SpaceDescriptor, sets: &[OpenSet]) -> bool {
    let canon: Vec<OpenSet> = sets.iter().map(|s| canonical_unchecked(space, s)).collect();
    let extents: Option<Vec<(f64, f64)>> = canon.iter().map(|s| axis0_extent(space, s)).collect();
    let Some(extents) = extents else {
        for i in 0..canon.len() {
            for j in 0..i {
                if !shapes_disjoint(space, &canon[i], &canon[j]) {
                    return false;
                }
            }
        }
        return true;
    };
    let mut order: Vec<usize> = (0..canon.len()).collect();
    order.sort_by(|&i, &j| extents[i].0.partial_cmp(&extents[j].0).unwrap());
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let lo = extents[i].0;
        active.retain(|&j| extents[j].1 > lo);
        for &j in &active {
            if !shapes_disjoint(space, &canon[i], &canon[j]) {
                return false;
            }
        }
        active.push(i);
    }
    if space.is_circle() {
        // Arcs running past 2π wrap onto the start of the sorted order.
        for &i in &order {
            let over = extents[i].1 - TAU;
            if over <= 0.0 {
                continue;
            }
            for &j in &order {
                if extents[j].0 >= over {
                    break;
                }
                if i != j && !shapes_disjoint(space, &canon[i], &canon[j]) {
                    return false;
                }
            }
        }
    }
    true
}

fn axis0_extent(space: &SpaceDescriptor, s: &OpenSet) -> Option<(f64, f64)> {
    match s {
        OpenSet::Empty => Some((f64::INFINITY, f64::INFINITY)),
        OpenSet::Interval { a, b } => Some(clip_line(space, *a, *b)),
        OpenSet::Arc { start, end } => {
            let st = normalize_angle(*start);
            Some((st, st + arc_length(*start, *end)))
        }
        OpenSet::Cuboid { bounds } => Some((bounds[0][0], bounds[0][1])),
        OpenSet::Ball { .. } => bounding_box(space, s).map(|b| b[0]),
        _ => None,
    }
}

/// Analytic subset test where the shapes allow it; `None` when unknown.
pub fn is_subset(space: &SpaceDescriptor, inner: &OpenSet, outer: &OpenSet) -> Option<bool> {
    use OpenSet::*;
    let (i, o) = (canonical_unchecked(space, inner), canonical_unchecked(space, outer));
    if is_empty(space, &i) {
        return Some(true);
    }
    match (&i, &o) {
        (_, Whole) => Some(true),
        (_, Empty) => Some(false),
        (Interval { a: a1, b: b1 }, Interval { a: a2, b: b2 }) => {
            let (l1, h1) = clip_line(space, *a1, *b1);
            let (lo, hi) = space.axis_bounds()[0];
            // A closed space endpoint reached by the inner set is one of its points.
            let lo_ok = if *a1 < lo && space.contains(&Point::scalar(lo)) { *a2 < lo } else { *a2 <= l1 };
            let hi_ok = if *b1 > hi && space.contains(&Point::scalar(hi)) { *b2 > hi } else { *b2 >= h1 };
            Some(lo_ok && hi_ok)
        }
        (Arc { start: s1, end: e1 }, Arc { start: s2, end: e2 }) => {
            let (l1, l2) = (arc_length(*s1, *e1), arc_length(*s2, *e2));
            let d = (s1 - s2).rem_euclid(TAU);
            Some(d + l1 <= l2)
        }
        (Cuboid { bounds: b1 }, Cuboid { bounds: b2 }) => {
            let (c1, c2) = (clip_box(space, b1), clip_box(space, b2));
            Some(c1.iter().zip(&c2).all(|((l1, h1), (l2, h2))| l1 >= l2 && h1 <= h2))
        }
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => Some(space.dist(c1, c2) + r1 <= *r2),
        (Cuboid { bounds }, Ball { center, radius }) => {
            let far: Vec<f64> = center.iter().zip(bounds).map(|(c, [l, h])| (c - l).abs().max((h - c).abs())).collect();
            let zero = vec![0.0; far.len()];
            Some(space.dist(&far, &zero) <= *radius)
        }
        (Ball { .. }, Cuboid { bounds }) => {
            let bb = bounding_box(space, &i)?;
            Some(bb.iter().zip(bounds).all(|((l1, h1), [l2, h2])| l1 >= l2 && h1 <= h2))
        }
        (Union { parts }, _) => {
            let mut all = true;
            for p in parts {
                match is_subset(space, p, &o)? {
                    true => {}
                    false => all = false,
                }
            }
            if all {
                Some(true)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Deterministic-given-`rng` sample of points in `s ∩ space`. The first points
/// are the inset extremal points of the shape.
pub fn sample_points<R: Rng + ?Sized>(space: &SpaceDescriptor, s: &OpenSet, n: usize, rng: &mut R) -> Vec<Point> {
    let s = canonical_unchecked(space, s);
    let mut out = extremal_points(space, &s);
    let n_rand = n.saturating_sub(out.len());
    out.extend(random_points(space, &s, n_rand, rng));
    out.retain(|p| contains(space, &s, p));
    out
}

/// Points of the set near its extremes, inset by a relative `EDGE_INSET`. For
/// connected shapes the largest pairwise distance among them is within a
/// relative `2·EDGE_INSET` of the diameter.
pub fn extremal_points(space: &SpaceDescriptor, s: &OpenSet) -> Vec<Point> {
    let s = canonical_unchecked(space, s);
    let mut pts = Vec::new();
    match &s {
        OpenSet::Empty => {}
        OpenSet::Whole => {
            if space.is_circle() {
                pts.push(Point::angle(0.0));
                pts.push(Point::angle(PI));
            } else {
                let b = space.sampling_bounds();
                let inner = b.iter().map(|(l, h)| [*l - 1.0, *h + 1.0]).collect();
                return extremal_points(space, &OpenSet::cuboid(inner));
            }
        }
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, *a, *b);
            let (lo, hi) = (lo.max(-SAMPLE_WINDOW), hi.min(SAMPLE_WINDOW));
            if lo < hi {
                let eta = (hi - lo) * EDGE_INSET;
                let (s_lo, s_hi) = space.axis_bounds()[0];
                // A closed space endpoint reached by the shape is itself a member.
                let left = if *a < lo && lo == s_lo && space.contains(&Point::scalar(lo)) { lo } else { lo + eta };
                let right = if *b > hi && hi == s_hi && space.contains(&Point::scalar(hi)) { hi } else { hi - eta };
                pts.push(Point::scalar(left));
                pts.push(Point::scalar(right));
                pts.push(Point::scalar(0.5 * (lo + hi)));
            }
        }
        OpenSet::Arc { start, end } => {
            let len = arc_length(*start, *end);
            if len > 0.0 {
                let eta = len * EDGE_INSET;
                pts.push(Point::angle(start + eta));
                pts.push(Point::angle(start + len - eta));
                pts.push(Point::angle(start + len / 2.0));
                if len > PI + eta {
                    pts.push(Point::angle(start + eta + PI));
                }
            }
        }
        OpenSet::Ball { center, radius } => {
            let (norm, w) = space.norm().unwrap();
            pts.push(Point::new(center.clone()));
            for i in 0..center.len() {
                let mut e = vec![0.0; center.len()];
                e[i] = 1.0;
                let reach = radius * (1.0 - EDGE_INSET) / norm.eval(&e, w);
                for sgn in [-1.0, 1.0] {
                    let mut p = center.clone();
                    p[i] += sgn * reach;
                    pts.push(Point::new(p));
                }
            }
            // Diagonal directions matter for the sup and l1 unit balls.
            let diag = vec![1.0; center.len()];
            let reach = radius * (1.0 - EDGE_INSET) / norm.eval(&diag, w);
            for sgn in [-1.0, 1.0] {
                pts.push(Point::new(center.iter().map(|c| c + sgn * reach).collect()));
            }
        }
        OpenSet::Cuboid { bounds } => {
            let clipped = clip_box(space, bounds);
            let clipped: Vec<(f64, f64)> = clipped.iter().map(|(l, h)| (l.max(-SAMPLE_WINDOW), h.min(SAMPLE_WINDOW))).collect();
            if clipped.iter().all(|(l, h)| l < h) {
                let inset: Vec<(f64, f64)> = clipped
                    .iter()
                    .map(|(l, h)| {
                        let eta = (h - l) * EDGE_INSET;
                        (l + eta, h - eta)
                    })
                    .collect();
                let d = inset.len();
                if d <= 10 {
                    for mask in 0..(1usize << d) {
                        pts.push(Point::new((0..d).map(|k| if mask >> k & 1 == 1 { inset[k].1 } else { inset[k].0 }).collect()));
                    }
                } else {
                    pts.push(Point::new(inset.iter().map(|p| p.0).collect()));
                    pts.push(Point::new(inset.iter().map(|p| p.1).collect()));
                }
                pts.push(Point::new(clipped.iter().map(|(l, h)| 0.5 * (l + h)).collect()));
            }
        }
        OpenSet::Union { parts } => {
            for p in parts {
                pts.extend(extremal_points(space, p));
            }
        }
    }
    pts
}

fn random_points<R: Rng + ?Sized>(space: &SpaceDescriptor, s: &OpenSet, n: usize, rng: &mut R) -> Vec<Point> {
    if n == 0 {
        return Vec::new();
    }
    match s {
        OpenSet::Empty => Vec::new(),
        OpenSet::Whole => {
            if space.is_circle() {
                (0..n).map(|_| Point::angle(rng.gen_range(0.0..TAU))).collect()
            } else {
                let b: Vec<[f64; 2]> = space.sampling_bounds().iter().map(|(l, h)| [*l, *h]).collect();
                random_points(space, &OpenSet::cuboid(b), n, rng)
            }
        }
        OpenSet::Interval { a, b } => {
            let (lo, hi) = clip_line(space, *a, *b);
            let (lo, hi) = (lo.max(-SAMPLE_WINDOW), hi.min(SAMPLE_WINDOW));
            if !(lo < hi) {
                return Vec::new();
            }
            // Stratified so n points cover the interval at spacing ≈ len/n.
            (0..n)
                .map(|i| {
                    let t = ((i as f64 + rng.gen::<f64>()) / n as f64).clamp(EDGE_INSET, 1.0 - EDGE_INSET);
                    Point::scalar(lo + (hi - lo) * t)
                })
                .collect()
        }
        OpenSet::Arc { start, end } => {
            let len = arc_length(*start, *end);
            (0..n)
                .map(|i| {
                    let t = ((i as f64 + rng.gen::<f64>()) / n as f64).clamp(EDGE_INSET, 1.0 - EDGE_INSET);
                    Point::angle(start + len * t)
                })
                .collect()
        }
        OpenSet::Cuboid { bounds } => {
            let clipped: Vec<(f64, f64)> =
                clip_box(space, bounds).iter().map(|(l, h)| (l.max(-SAMPLE_WINDOW), h.min(SAMPLE_WINDOW))).collect();
            if clipped.iter().any(|(l, h)| !(l < h)) {
                return Vec::new();
            }
            (0..n)
                .map(|i| {
                    Point::new(
                        clipped
                            .iter()
                            .enumerate()
                            .map(|(k, (l, h))| {
                                let u = if k == 0 { (i as f64 + rng.gen::<f64>()) / n as f64 } else { rng.gen::<f64>() };
                                l + (h - l) * u.clamp(EDGE_INSET, 1.0 - EDGE_INSET)
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        OpenSet::Ball { center, radius } => {
            let (norm, w) = space.norm().unwrap();
            let d = center.len() as f64;
            (0..n)
                .map(|_| {
                    let dir: Vec<f64> = center.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let len = norm.eval(&dir, w);
                    if len == 0.0 {
                        return Point::new(center.clone());
                    }
                    let r = radius * rng.gen::<f64>().powf(1.0 / d) * (1.0 - EDGE_INSET);
                    Point::new(center.iter().zip(&dir).map(|(c, v)| c + r * v / len).collect())
                })
                .collect()
        }
        OpenSet::Union { parts } => {
            let live: Vec<&OpenSet> = parts.iter().filter(|p| !is_empty(space, p)).collect();
            if live.is_empty() {
                return Vec::new();
            }
            let per = n.div_ceil(live.len());
            live.iter().flat_map(|p| random_points(space, p, per, rng)).collect()
        }
    }
}

/// Lower bound on the distance between two sets (0 when they may touch).
pub fn set_distance(space: &SpaceDescriptor, a: &OpenSet, b: &OpenSet) -> f64 {
    use OpenSet::*;
    let (a, b) = (canonical_unchecked(space, a), canonical_unchecked(space, b));
    if is_empty(space, &a) || is_empty(space, &b) {
        return f64::INFINITY;
    }
    match (&a, &b) {
        (Union { parts }, other) | (other, Union { parts }) => {
            parts.iter().map(|p| set_distance(space, p, other)).fold(f64::INFINITY, f64::min)
        }
        (Interval { a: a1, b: b1 }, Interval { a: a2, b: b2 }) => {
            let (l1, h1) = clip_line(space, *a1, *b1);
            let (l2, h2) = clip_line(space, *a2, *b2);
            if h1 <= l2 {
                space.line_length(h1, l2)
            } else if h2 <= l1 {
                space.line_length(h2, l1)
            } else {
                0.0
            }
        }
        (Arc { start: s1, end: e1 }, Arc { start: s2, end: e2 }) => {
            if !shapes_disjoint(space, &a, &b) {
                return 0.0;
            }
            let (l1, l2) = (arc_length(*s1, *e1), arc_length(*s2, *e2));
            let gap1 = (s2 - (s1 + l1)).rem_euclid(TAU);
            let gap2 = (s1 - (s2 + l2)).rem_euclid(TAU);
            let arc = gap1.min(gap2).min(PI);
            match space.circle_metric() {
                Some(CircleMetric::Chord) => 2.0 * (arc / 2.0).sin(),
                _ => arc,
            }
        }
        (Cuboid { bounds: b1 }, Cuboid { bounds: b2 }) => {
            let (c1, c2) = (clip_box(space, b1), clip_box(space, b2));
            let gaps: Vec<f64> = c1.iter().zip(&c2).map(|((l1, h1), (l2, h2))| (l2 - h1).max(l1 - h2).max(0.0)).collect();
            let (norm, w) = space.norm().unwrap();
            norm.eval(&gaps, w)
        }
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => (space.dist(c1, c2) - r1 - r2).max(0.0),
        (Ball { center, radius }, Cuboid { bounds }) | (Cuboid { bounds }, Ball { center, radius }) => {
            let nearest: Vec<f64> = center.iter().zip(bounds).map(|(c, [l, h])| c.clamp(*l, *h)).collect();
            (space.dist(center, &nearest) - radius).max(0.0)
        }
        _ => 0.0,
    }
}

/// A point of `inner ∖ outer`, if the sample finds one.
pub fn point_outside<R: Rng + ?Sized>(
    space: &SpaceDescriptor,
    inner: &OpenSet,
    outer: &OpenSet,
    n: usize,
    rng: &mut R,
) -> Option<Point> {
    sample_points(space, inner, n, rng).into_iter().find(|p| !contains(space, outer, p))
}

#[derive(Clone, Debug)]
enum Layout {
    Single(OpenSet),
    /// Intervals `(lo+(k−1)h, lo+(k+1)h)` for `k = 1..=count`, in metric
    /// coordinates (arclength on curves).
    Line {
        lo: f64,
        h: f64,
    },
    /// Arcs `(start+(k−1)h, start+(k+1)h)`.
    Ring {
        start: f64,
        h: f64,
    },
    /// Product of per-axis half-scale grids, as boxes of half-width `h`.
    Boxes {
        lo: Vec<f64>,
        h: f64,
        counts: Vec<usize>,
    },
    /// Balls of radius `r` centered at `lo + (k + ½)·step`.
    Balls {
        lo: Vec<f64>,
        step: f64,
        r: f64,
        counts: Vec<usize>,
    },
    Parts(Vec<(usize, BasicOpenGrid)>),
}

/// Lazily indexed cover of a region by small basic opens, so that callers can
/// subsample very fine grids without materializing them.
#[derive(Clone, Debug)]
pub struct BasicOpenGrid {
    layout: Layout,
    count: usize,
    curve: Option<Curve>,
}

impl BasicOpenGrid {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn get(&self, i: usize) -> OpenSet {
        assert!(i < self.count, "index {i} out of {}", self.count);
        match &self.layout {
            Layout::Single(s) => s.clone(),
            Layout::Line { lo, h } => {
                let k = (i + 1) as f64;
                let (a, b) = (lo + (k - 1.0) * h, lo + (k + 1.0) * h);
                match &self.curve {
                    Some(c) => OpenSet::interval(c.param_at_arclength(a), c.param_at_arclength(b)),
                    None => OpenSet::interval(a, b),
                }
            }
            Layout::Ring { start, h } => {
                let k = (i + 1) as f64;
                OpenSet::arc(start + (k - 1.0) * h, start + (k + 1.0) * h)
            }
            Layout::Boxes { lo, h, counts } => {
                let idx = unravel(i, counts);
                OpenSet::cuboid(
                    lo.iter()
                        .zip(idx)
                        .map(|(l, k)| {
                            let c = l + (k + 1) as f64 * h;
                            [c - h, c + h]
                        })
                        .collect(),
                )
            }
            Layout::Balls { lo, step, r, counts } => {
                let idx = unravel(i, counts);
                OpenSet::ball(lo.iter().zip(idx).map(|(l, k)| l + (k as f64 + 0.5) * step).collect(), *r)
            }
            Layout::Parts(parts) => {
                let pos = parts.partition_point(|(start, _)| *start <= i) - 1;
                let (start, g) = &parts[pos];
                g.get(i - start)
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = OpenSet> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }
}

fn unravel(mut i: usize, counts: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; counts.len()];
    for (k, c) in counts.iter().enumerate().rev() {
        idx[k] = i % c;
        i /= c;
    }
    idx
}

fn steps_needed(len: f64, h: f64) -> usize {
    ((len / h) - 1e-9).ceil().max(1.0) as usize
}

fn checked_product(counts: &[usize]) -> Result<usize> {
    counts.iter().try_fold(1usize, |acc, c| acc.checked_mul(*c)).ok_or(TmsError::TooManySets(usize::MAX, MAX_BASIC_OPENS))
}

/// The lazily indexed form of `enumerate_basic_opens`.
pub fn basic_open_grid(space: &SpaceDescriptor, scale: f64, region: &OpenSet) -> Result<BasicOpenGrid> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(TmsError::InvalidScale(scale));
    }
    let region = canonical(space, region)?;
    let curve = space.curve_table().cloned();
    let single = |s: OpenSet| BasicOpenGrid { layout: Layout::Single(s), count: 1, curve: None };
    if is_empty(space, &region) {
        return Ok(BasicOpenGrid { layout: Layout::Parts(Vec::new()), count: 0, curve: None });
    }
    if let OpenSet::Union { parts } = &region {
        let mut out = Vec::new();
        let mut start = 0;
        for p in parts {
            let g = basic_open_grid(space, scale, p)?;
            if g.count > 0 {
                let n = g.count;
                out.push((start, g));
                start += n;
            }
        }
        return Ok(BasicOpenGrid { layout: Layout::Parts(out), count: start, curve: None });
    }
    if diam_upper(space, &region)? <= scale {
        return Ok(single(region));
    }
    if space.is_circle() {
        let h = match space.circle_metric().unwrap() {
            CircleMetric::Arc => scale.min(PI) / 2.0,
            CircleMetric::Chord => (scale / 2.0).min(1.0).asin(),
        };
        let (start, len) = match &region {
            OpenSet::Arc { start, end } => (*start, arc_length(*start, *end)),
            _ => (0.0, TAU),
        };
        return Ok(BasicOpenGrid { layout: Layout::Ring { start, h }, count: steps_needed(len, h), curve: None });
    }
    if space.is_line_like() {
        let (lo, hi) = line_hull(space, &region).unwrap();
        if !lo.is_finite() || !hi.is_finite() {
            return Err(TmsError::InvalidArgument("cannot cover an unbounded region".into()));
        }
        let (mut slo, shi) = match &curve {
            Some(c) => (c.arclength_at(lo), c.arclength_at(hi)),
            None => (lo, hi),
        };
        let h = scale / 2.0;
        // A closed space endpoint inside the region needs a set reaching past it.
        if space.contains(&Point::scalar(lo)) && contains(space, &region, &Point::scalar(lo)) {
            slo -= h / 2.0;
        }
        let mut len = shi - slo;
        if space.contains(&Point::scalar(hi)) && contains(space, &region, &Point::scalar(hi)) {
            len += h / 2.0;
        }
        let count = steps_needed(len, h);
        return Ok(BasicOpenGrid { layout: Layout::Line { lo: slo, h }, count, curve });
    }
    let bb = bounding_box(space, &region).ok_or_else(|| TmsError::UnsupportedShape("region has no bounding box".into()))?;
    if bb.iter().any(|(l, h)| !l.is_finite() || !h.is_finite()) {
        return Err(TmsError::InvalidArgument("cannot cover an unbounded region".into()));
    }
    let (norm, w) = space.norm().unwrap();
    let n = space.dim();
    let use_balls = matches!(space, SpaceDescriptor::EuclideanBox { .. }) && norm != Norm::Sup && n > 1;
    if use_balls {
        let r = scale / 2.0;
        let ones = vec![1.0; n];
        let step = 2.0 * r / norm.eval(&ones, w) * (1.0 - 1e-9);
        let counts: Vec<usize> = bb.iter().map(|(l, h)| steps_needed(h - l, step)).collect();
        let count = checked_product(&counts)?;
        let lo = bb.iter().map(|p| p.0).collect();
        Ok(BasicOpenGrid { layout: Layout::Balls { lo, step, r, counts }, count, curve: None })
    } else {
        let ones = vec![1.0; n];
        let h = scale / 2.0 / norm.eval(&ones, w).max(1.0);
        let counts: Vec<usize> = bb.iter().map(|(l, hh)| steps_needed(hh - l, h)).collect();
        let count = checked_product(&counts)?;
        // Center the run of boxes so that the closed region is covered.
        let lo = bb.iter().zip(&counts).map(|((l, hh), n)| l - 0.5 * ((*n as f64 + 1.0) * h - (hh - l))).collect();
        Ok(BasicOpenGrid { layout: Layout::Boxes { lo, h, counts }, count, curve: None })
    }
}

/// Connected basic opens of diameter ≤ `scale` whose union covers `region`.
pub fn enumerate_basic_opens(space: &SpaceDescriptor, scale: f64, region: &OpenSet) -> Result<Vec<OpenSet>> {
    let grid = basic_open_grid(space, scale, region)?;
    if grid.len() > MAX_BASIC_OPENS {
        return Err(TmsError::TooManySets(grid.len(), MAX_BASIC_OPENS));
    }
    Ok(grid.iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distances() {
        let r = SpaceDescriptor::closed_interval(0.0, 1.0);
        assert_abs_diff_eq!(r.distance(&Point::scalar(0.2), &Point::scalar(0.7)).unwrap(), 0.5, epsilon = 1e-15);
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        assert_abs_diff_eq!(c.distance(&Point::angle(0.0), &Point::angle(PI / 2.0)).unwrap(), PI / 2.0);
        assert_abs_diff_eq!(c.distance(&Point::angle(0.1), &Point::angle(TAU - 0.1)).unwrap(), 0.2, epsilon = 1e-12);
        let g = SpaceDescriptor::grid(8, Norm::Sup);
        let z = Point::new(vec![0.0; 8]);
        assert_eq!(g.distance(&z, &z).unwrap(), 0.0);
        assert!(matches!(g.distance(&z, &Point::scalar(0.0)), Err(TmsError::InvalidPoint(_))));
    }

    #[test]
    fn diameters() {
        let r = SpaceDescriptor::real_line();
        assert_eq!(diam_upper(&r, &OpenSet::interval(0.0, 1.0)).unwrap(), 1.0);
        let p = SpaceDescriptor::plane();
        assert_abs_diff_eq!(diam_upper(&p, &OpenSet::ball(vec![0.0, 0.0], 0.3)).unwrap(), 0.6);
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        assert_abs_diff_eq!(diam_upper(&c, &OpenSet::arc(0.0, PI / 3.0)).unwrap(), PI / 3.0);
        assert_abs_diff_eq!(diam_upper(&c, &OpenSet::arc(0.0, 1.5 * PI)).unwrap(), PI);
        assert_eq!(diam_upper(&r, &OpenSet::Empty).unwrap(), 0.0);
        let unit = SpaceDescriptor::closed_interval(0.0, 1.0);
        assert_eq!(diam_upper(&unit, &OpenSet::interval(-1.0, 0.5)).unwrap(), 0.5);
    }

    #[test]
    fn arc_diameter_matches_dense_grid() {
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        for len in [0.3, 1.0, PI / 3.0, 3.0, 4.0, 6.0] {
            let angles: Vec<f64> = (0..=2000).map(|i| len * i as f64 / 2000.0).collect();
            let mut best = 0.0_f64;
            for &x in &angles {
                for &y in angles.iter().step_by(7) {
                    best = best.max(arc_distance(x, y));
                }
            }
            let d = diam_upper(&c, &OpenSet::arc(0.0, len)).unwrap();
            assert!(d >= best - 1e-12 && d <= best + 3e-3, "len {len}: {d} vs {best}");
        }
    }

    #[test]
    fn unit_interval_grid() {
        let r = SpaceDescriptor::real_line();
        let sets = enumerate_basic_opens(&r, 0.5, &OpenSet::interval(0.0, 1.0)).unwrap();
        let expect: Vec<OpenSet> = (1..=4).map(|k| OpenSet::interval((k - 1) as f64 / 4.0, (k + 1) as f64 / 4.0)).collect();
        assert_eq!(sets, expect);
    }

    #[test]
    fn circle_single_arc() {
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        let sets = enumerate_basic_opens(&c, TAU, &OpenSet::arc(0.0, TAU)).unwrap();
        assert_eq!(sets.len(), 1);
    }

    #[test]
    fn square_grid_has_sixteen_boxes() {
        let sq = SpaceDescriptor::unit_cube(2, Norm::Sup);
        let sets = enumerate_basic_opens(&sq, 0.5, &OpenSet::Whole).unwrap();
        assert_eq!(sets.len(), 16);
        for s in &sets {
            let OpenSet::Cuboid { bounds } = s else { panic!("expected boxes") };
            for [a, b] in bounds {
                assert_abs_diff_eq!(b - a, 0.5, epsilon = 1e-12);
            }
        }
        // Exhaustive membership on a 201×201 grid of the closed square.
        for i in 0..=200 {
            for j in 0..=200 {
                let p = Point::new(vec![i as f64 / 200.0, j as f64 / 200.0]);
                assert!(sets.iter().any(|s| contains(&sq, s, &p)), "{p:?} uncovered");
            }
        }
    }

    #[test]
    fn disjointness_examples() {
        let r = SpaceDescriptor::real_line();
        assert!(are_disjoint(&r, &OpenSet::interval(0.0, 0.5), &OpenSet::interval(0.5, 1.0)));
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        assert!(!are_disjoint(&c, &OpenSet::arc(0.0, PI), &OpenSet::arc(PI / 2.0, 1.5 * PI)));
        assert!(are_disjoint(&c, &OpenSet::arc(0.0, 1.0), &OpenSet::arc(1.0, 2.0)));
        assert!(are_disjoint(&c, &OpenSet::arc(5.0, 7.0), &OpenSet::arc(1.0, 2.0)));
        assert!(!are_disjoint(&c, &OpenSet::arc(5.0, 7.0), &OpenSet::arc(0.5, 2.0)));
        let p = SpaceDescriptor::plane();
        assert!(are_disjoint(&p, &OpenSet::ball(vec![0.0, 0.0], 0.4), &OpenSet::ball(vec![1.0, 0.0], 0.5)));
    }

    #[test]
    fn sweep_agrees_with_pairwise() {
        let c = SpaceDescriptor::circle(CircleMetric::Arc);
        let arcs = vec![OpenSet::arc(6.0, 6.5), OpenSet::arc(0.1, 0.2), OpenSet::arc(3.0, 3.1)];
        assert!(!pairwise_disjoint(&c, &arcs));
        let arcs = vec![OpenSet::arc(6.0, 6.2), OpenSet::arc(0.1, 0.2), OpenSet::arc(3.0, 3.1)];
        assert!(pairwise_disjoint(&c, &arcs));
        let r = SpaceDescriptor::real_line();
        let ivs: Vec<OpenSet> = (0..1000).map(|k| OpenSet::interval(k as f64, k as f64 + 1.0)).collect();
        assert!(pairwise_disjoint(&r, &ivs));
    }

    #[test]
    fn ball_canonical_forms() {
        let c = SpaceDescriptor::circle(CircleMetric::Chord);
        let OpenSet::Arc { start, end } = canonical(&c, &OpenSet::ball(vec![0.0], 1.0)).unwrap() else { panic!() };
        assert_abs_diff_eq!(arc_length(start, end), 2.0 * 2.0 * (0.5f64).asin(), epsilon = 1e-12);
        assert_eq!(canonical(&c, &OpenSet::ball(vec![0.0], 2.5)).unwrap(), OpenSet::Whole);
    }

    #[test]
    fn relatively_open_at_closed_endpoint() {
        let unit = SpaceDescriptor::closed_interval(0.0, 1.0);
        let u = OpenSet::interval(-0.1, 0.1);
        assert!(contains(&unit, &u, &Point::scalar(0.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = sample_points(&unit, &u, 20, &mut rng);
        assert!(pts.iter().any(|p| p.0[0] == 0.0));
        let grid = enumerate_basic_opens(&unit, 0.5, &OpenSet::Whole).unwrap();
        for x in [0.0, 0.3, 1.0] {
            assert!(grid.iter().any(|s| contains(&unit, s, &Point::scalar(x))));
        }
    }

    #[test]
    fn curve_arclength() {
        let curve = Curve::from_fn(400, |t| [t.cos(), t.sin()]).unwrap();
        assert_abs_diff_eq!(curve.length(), 1.0, epsilon = 1e-5);
        let s = SpaceDescriptor::RectifiableCurve { samples: curve };
        assert_abs_diff_eq!(s.distance(&Point::scalar(0.0), &Point::scalar(0.5)).unwrap(), 0.5, epsilon = 1e-5);
        let grid = enumerate_basic_opens(&s, 0.1, &OpenSet::Whole).unwrap();
        for g in &grid {
            assert!(diam_upper(&s, g).unwrap() <= 0.1 + 1e-12);
        }
    }

    #[test]
    fn json_shapes() {
        let s: SpaceDescriptor = serde_json::from_str(r#"{"kind":"real_interval","a":0.0,"b":1.0}"#).unwrap();
        assert_eq!(s, SpaceDescriptor::open_interval(0.0, 1.0));
        let s: SpaceDescriptor = serde_json::from_str(r#"{"kind":"grid_function_space","m":16,"norm":{"lp":3.0}}"#).unwrap();
        assert_eq!(s, SpaceDescriptor::grid(16, Norm::Lp(3.0)));
        assert!(serde_json::from_str::<SpaceDescriptor>(r#"{"kind":"circle","metric":"arc","x":1}"#).is_err());
        let o: OpenSet = serde_json::from_str(r#"{"shape":"box","bounds":[[0,1],[0,0.5]]}"#).unwrap();
        assert_eq!(o, OpenSet::cuboid(vec![[0.0, 1.0], [0.0, 0.5]]));
        let back: SpaceDescriptor = serde_json::from_str(&serde_json::to_string(&SpaceDescriptor::half_line()).unwrap()).unwrap();
        assert_eq!(back, SpaceDescriptor::half_line());
    }

    #[test]
    fn validation() {
        assert!(SpaceDescriptor::open_interval(1.0, 0.0).validate().is_err());
        assert!(SpaceDescriptor::grid(1, Norm::Sup).validate().is_err());
        assert!(SpaceDescriptor::grid(4, Norm::Lp(1.0)).validate().is_err());
        assert!(matches!(
            enumerate_basic_opens(&SpaceDescriptor::real_line(), 0.0, &OpenSet::interval(0.0, 1.0)),
            Err(TmsError::InvalidScale(_))
        ));
    }
}
