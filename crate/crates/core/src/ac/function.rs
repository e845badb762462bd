//! Function specifications and oscillation brackets.
//!
//! Upper bounds come from range enclosures and local Lipschitz constants, lower
//! bounds from values at sampled points (plus known critical points), so the
//! two sides stay sound independently.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::spaces::{
    arc_length, bounding_box, canonical, contains, diam_upper, is_empty, line_hull, normalize_angle, sample_points, CircleMetric,
    OpenSet, Point, SpaceDescriptor,
};
use crate::tms::Bracket;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralMode {
    /// F(x) = ∫ over [−|x|, |x|].
    Symmetric,
    /// F(x) = ∫ over (−∞, x].
    Cumulative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct GridDensityRepr {
    density: Vec<f64>,
    mode: IntegralMode,
    #[serde(default)]
    lo: f64,
    #[serde(default = "one")]
    hi: f64,
}

fn one() -> f64 {
    1.0
}

/// A piecewise-constant density on `[lo, hi]` (zero outside) and its integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridDensityRepr", into = "GridDensityRepr")]
pub struct GridDensity {
    density: Vec<f64>,
    mode: IntegralMode,
    lo: f64,
    hi: f64,
    prefix: Vec<f64>,
    abs_prefix: Vec<f64>,
}

impl TryFrom<GridDensityRepr> for GridDensity {
    type Error = TmsError;

    fn try_from(r: GridDensityRepr) -> Result<Self> {
        GridDensity::new(r.density, r.mode, r.lo, r.hi)
    }
}

impl From<GridDensity> for GridDensityRepr {
    fn from(g: GridDensity) -> Self {
        GridDensityRepr { density: g.density, mode: g.mode, lo: g.lo, hi: g.hi }
    }
}

impl GridDensity {
    pub fn new(density: Vec<f64>, mode: IntegralMode, lo: f64, hi: f64) -> Result<Self> {
        if density.is_empty() || density.iter().any(|d| !d.is_finite()) {
            return Err(TmsError::InvalidArgument("density needs finite samples".into()));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(TmsError::InvalidArgument("density support must be a bounded interval".into()));
        }
        let h = (hi - lo) / density.len() as f64;
        let mut prefix = vec![0.0];
        let mut abs_prefix = vec![0.0];
        for d in &density {
            prefix.push(prefix.last().unwrap() + h * d);
            abs_prefix.push(abs_prefix.last().unwrap() + h * d.abs());
        }
        Ok(GridDensity { density, mode, lo, hi, prefix, abs_prefix })
    }

    /// Midpoint samples of `f` on `m` cells of `[lo, hi]`.
    pub fn from_fn(m: usize, lo: f64, hi: f64, mode: IntegralMode, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (hi - lo) / m as f64;
        GridDensity::new((0..m).map(|i| f(lo + (i as f64 + 0.5) * h)).collect(), mode, lo, hi)
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn mode(&self) -> IntegralMode {
        self.mode
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn cell(&self) -> f64 {
        (self.hi - self.lo) / self.density.len() as f64
    }

    pub fn l1(&self) -> f64 {
        *self.abs_prefix.last().unwrap()
    }

    pub fn sup(&self) -> f64 {
        self.density.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    fn integrate(&self, table: &[f64], vals: impl Fn(usize) -> f64, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return *table.last().unwrap();
        }
        let h = self.cell();
        let i = (((x - self.lo) / h).floor() as usize).min(self.density.len() - 1);
        table[i] + (x - self.lo - i as f64 * h) * vals(i)
    }

    /// ∫ f over (−∞, x].
    pub fn cumulative(&self, x: f64) -> f64 {
        self.integrate(&self.prefix, |i| self.density[i], x)
    }

    /// ∫ |f| over (−∞, x].
    pub fn abs_cumulative(&self, x: f64) -> f64 {
        self.integrate(&self.abs_prefix, |i| self.density[i].abs(), x)
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.mode {
            IntegralMode::Cumulative => self.cumulative(x),
            IntegralMode::Symmetric => self.cumulative(x.abs()) - self.cumulative(-x.abs()),
        }
    }

    /// ∫ (|f| − p)⁺, the L¹ distance between |f| and its truncation at level p.
    pub fn tail(&self, p: f64) -> f64 {
        let h = self.cell();
        self.density.iter().map(|d| (d.abs() - p).max(0.0)).sum::<f64>() * h
    }

    /// Upper bound on the oscillation over the interval (a, b).
    fn oscillation_upper(&self, a: f64, b: f64) -> f64 {
        match self.mode {
            IntegralMode::Cumulative => self.abs_cumulative(b) - self.abs_cumulative(a),
            IntegralMode::Symmetric => {
                let r0 = if a < 0.0 && b > 0.0 { 0.0 } else { a.abs().min(b.abs()) };
                let r1 = a.abs().max(b.abs());
                (self.abs_cumulative(r1) - self.abs_cumulative(r0)) + (self.abs_cumulative(-r0) - self.abs_cumulative(-r1))
            }
        }
    }

    fn nonnegative(&self) -> bool {
        self.density.iter().all(|d| *d >= 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Identity,
    Sin,
    Cos,
    Square,
    Sqrt,
    /// x·sin(1/x) with value 0 at 0.
    XSinInvX,
    /// The Cantor function, extended by 0 to the left and 1 to the right.
    Cantor,
    /// The k-th embedded coordinate, 1-based.
    Projection {
        k: usize,
    },
    Constant {
        c: f64,
    },
    /// e^{iθ} on the circle, x + iy on the plane.
    ComplexIdentity,
    Norm,
    GridDensityIntegral(GridDensity),
    LinearOnSpace {
        coefficients: Vec<f64>,
    },
    Sum {
        a: Box<FunctionSpec>,
        b: Box<FunctionSpec>,
    },
    Scale {
        alpha: f64,
        f: Box<FunctionSpec>,
    },
    Product {
        a: Box<FunctionSpec>,
        b: Box<FunctionSpec>,
    },
    Reciprocal {
        f: Box<FunctionSpec>,
    },
    Abs {
        f: Box<FunctionSpec>,
    },
    Shift {
        f: Box<FunctionSpec>,
        c: f64,
    },
}

impl FunctionSpec {
    /// Parses builtin names such as `sin`, `projection_2` or `constant:2.5`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || TmsError::InvalidArgument(format!("unknown function {name:?}"));
        Ok(match name {
            "identity" => FunctionSpec::Identity,
            "sin" => FunctionSpec::Sin,
            "cos" => FunctionSpec::Cos,
            "square" => FunctionSpec::Square,
            "sqrt" => FunctionSpec::Sqrt,
            "x_sin_inv_x" => FunctionSpec::XSinInvX,
            "cantor" => FunctionSpec::Cantor,
            "complex_identity" => FunctionSpec::ComplexIdentity,
            "norm" => FunctionSpec::Norm,
            "projection" => FunctionSpec::Projection { k: 1 },
            _ => {
                if let Some(k) = name.strip_prefix("projection_") {
                    FunctionSpec::Projection { k: k.parse().map_err(|_| bad())? }
                } else if let Some(c) = name.strip_prefix("constant:").or_else(|| name.strip_prefix("constant_")) {
                    FunctionSpec::Constant { c: c.parse().map_err(|_| bad())? }
                } else if name == "constant" {
                    FunctionSpec::Constant { c: 1.0 }
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn sum(a: FunctionSpec, b: FunctionSpec) -> Self {
        FunctionSpec::Sum { a: Box::new(a), b: Box::new(b) }
    }

    pub fn scale(alpha: f64, f: FunctionSpec) -> Self {
        FunctionSpec::Scale { alpha, f: Box::new(f) }
    }

    pub fn product(a: FunctionSpec, b: FunctionSpec) -> Self {
        FunctionSpec::Product { a: Box::new(a), b: Box::new(b) }
    }

    pub fn reciprocal(f: FunctionSpec) -> Self {
        FunctionSpec::Reciprocal { f: Box::new(f) }
    }

    pub fn abs(f: FunctionSpec) -> Self {
        FunctionSpec::Abs { f: Box::new(f) }
    }

    pub fn shift(f: FunctionSpec, c: f64) -> Self {
        FunctionSpec::Shift { f: Box::new(f), c }
    }

    pub fn name(&self) -> String {
        match self {
            FunctionSpec::Projection { k } => format!("projection_{k}"),
            FunctionSpec::Constant { c } => format!("constant:{c}"),
            FunctionSpec::GridDensityIntegral(_) => "grid_density_integral".into(),
            FunctionSpec::LinearOnSpace { .. } => "linear_on_space".into(),
            FunctionSpec::Sum { a, b } => format!("({} + {})", a.name(), b.name()),
            FunctionSpec::Scale { alpha, f } => format!("{alpha}*{}", f.name()),
            FunctionSpec::Product { a, b } => format!("({} * {})", a.name(), b.name()),
            FunctionSpec::Reciprocal { f } => format!("1/{}", f.name()),
            FunctionSpec::Abs { f } => format!("|{}|", f.name()),
            FunctionSpec::Shift { f, c } => format!("({} + {c})", f.name()),
            FunctionSpec::Identity => "identity".into(),
            FunctionSpec::Sin => "sin".into(),
            FunctionSpec::Cos => "cos".into(),
            FunctionSpec::Square => "square".into(),
            FunctionSpec::Sqrt => "sqrt".into(),
            FunctionSpec::XSinInvX => "x_sin_inv_x".into(),
            FunctionSpec::Cantor => "cantor".into(),
            FunctionSpec::ComplexIdentity => "complex_identity".into(),
            FunctionSpec::Norm => "norm".into(),
        }
    }

    pub fn validate(&self, space: &SpaceDescriptor) -> Result<()> {
        use FunctionSpec::*;
        match self {
            Identity | Sin | Cos | Square | Sqrt | XSinInvX | Cantor => {
                if space_scalar_kind(space).is_none() {
                    return Err(TmsError::DomainError(format!("{} needs a one-dimensional space", self.name())));
                }
            }
            Projection { k } => {
                if *k == 0 || *k > embedded_dim(space) {
                    return Err(TmsError::DomainError(format!("projection index {k} out of range")));
                }
            }
            ComplexIdentity => {
                if embedded_dim(space) > 2 {
                    return Err(TmsError::DomainError("complex identity needs dimension at most 2".into()));
                }
            }
            LinearOnSpace { coefficients } => {
                if coefficients.len() != embedded_dim(space) {
                    return Err(TmsError::DomainError("coefficient count does not match the space dimension".into()));
                }
            }
            GridDensityIntegral(_) => {
                if !matches!(space, SpaceDescriptor::RealInterval { .. }) {
                    return Err(TmsError::DomainError("grid density integrals live on intervals of the line".into()));
                }
            }
            Constant { c } if !c.is_finite() => return Err(TmsError::InvalidArgument("constant must be finite".into())),
            Sum { a, b } | Product { a, b } => {
                a.validate(space)?;
                b.validate(space)?;
            }
            Scale { f, .. } | Reciprocal { f } | Abs { f } | Shift { f, .. } => f.validate(space)?,
            _ => {}
        }
        Ok(())
    }

    pub fn eval(&self, space: &SpaceDescriptor, x: &Point) -> Result<Complex64> {
        use FunctionSpec::*;
        let real = |v: f64| Ok(Complex64::new(v, 0.0));
        match self {
            Identity | Sin | Cos | Square | Sqrt | XSinInvX | Cantor => {
                let t = scalar_input(space, x)?;
                real(scalar_builtin(self, t)?)
            }
            Projection { k } => real(embedded(space, x)[*k - 1]),
            Constant { c } => real(*c),
            ComplexIdentity => {
                let e = embedded(space, x);
                Ok(Complex64::new(e[0], e.get(1).copied().unwrap_or(0.0)))
            }
            Norm => real(norm_value(space, x)),
            GridDensityIntegral(g) => real(g.value(x.0[0])),
            LinearOnSpace { coefficients } => real(coefficients.iter().zip(embedded(space, x)).map(|(c, v)| c * v).sum()),
            Sum { a, b } => Ok(a.eval(space, x)? + b.eval(space, x)?),
            Scale { alpha, f } => Ok(f.eval(space, x)? * *alpha),
            Product { a, b } => Ok(a.eval(space, x)? * b.eval(space, x)?),
            Reciprocal { f } => {
                let v = f.eval(space, x)?;
                if v == Complex64::new(0.0, 0.0) {
                    return Err(TmsError::DomainError(format!("reciprocal of zero at {:?}", x.0)));
                }
                Ok(v.inv())
            }
            Abs { f } => real(f.eval(space, x)?.norm()),
            Shift { f, c } => Ok(f.eval(space, x)? + *c),
        }
    }

    /// Whether every value is real.
    pub fn is_real(&self) -> bool {
        use FunctionSpec::*;
        match self {
            ComplexIdentity => false,
            Sum { a, b } | Product { a, b } => a.is_real() && b.is_real(),
            Scale { f, .. } | Reciprocal { f } | Shift { f, .. } => f.is_real(),
            _ => true,
        }
    }
}

pub fn cantor(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let (mut x, mut acc, mut weight) = (x, 0.0, 0.5);
    for _ in 0..64 {
        x *= 3.0;
        let digit = x.floor();
        x -= digit;
        if digit >= 2.0 {
            acc += weight;
        } else if digit >= 1.0 {
            return acc + weight;
        }
        weight *= 0.5;
    }
    acc
}

fn scalar_builtin(f: &FunctionSpec, t: f64) -> Result<f64> {
    Ok(match f {
        FunctionSpec::Identity => t,
        FunctionSpec::Sin => t.sin(),
        FunctionSpec::Cos => t.cos(),
        FunctionSpec::Square => t * t,
        FunctionSpec::Sqrt => {
            if t < 0.0 {
                return Err(TmsError::DomainError(format!("sqrt of {t}")));
            }
            t.sqrt()
        }
        FunctionSpec::XSinInvX => {
            if t == 0.0 {
                0.0
            } else {
                t * (1.0 / t).sin()
            }
        }
        FunctionSpec::Cantor => cantor(t),
        _ => unreachable!("not a scalar builtin"),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ScalarKind {
    Line,
    Angle(CircleMetric),
    CurveParam,
}

fn space_scalar_kind(space: &SpaceDescriptor) -> Option<ScalarKind> {
    match space {
        SpaceDescriptor::RealInterval { .. } => Some(ScalarKind::Line),
        SpaceDescriptor::EuclideanBox { dim: 1, .. } => Some(ScalarKind::Line),
        SpaceDescriptor::Circle { metric } => Some(ScalarKind::Angle(*metric)),
        SpaceDescriptor::RectifiableCurve { .. } => Some(ScalarKind::CurveParam),
        _ => None,
    }
}

fn scalar_input(space: &SpaceDescriptor, x: &Point) -> Result<f64> {
    space_scalar_kind(space)
        .map(|_| x.0[0])
        .ok_or_else(|| TmsError::DomainError("scalar builtins need a one-dimensional space".into()))
}

/// Coordinates of the point in its ambient Euclidean picture.
pub fn embedded(space: &SpaceDescriptor, x: &Point) -> Vec<f64> {
    match space {
        SpaceDescriptor::Circle { .. } => vec![x.0[0].cos(), x.0[0].sin()],
        SpaceDescriptor::RectifiableCurve { samples } => samples.position(x.0[0]).to_vec(),
        _ => x.0.clone(),
    }
}

pub fn embedded_dim(space: &SpaceDescriptor) -> usize {
    match space {
        SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. } => 2,
        _ => space.dim(),
    }
}

fn norm_value(space: &SpaceDescriptor, x: &Point) -> f64 {
    match space.norm_of(&x.0) {
        Some(v) => v,
        None => embedded(space, x).iter().map(|v| v * v).sum::<f64>().sqrt(),
    }
}

/// Rectangle in ℂ enclosing a set of values.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Rect {
    re: (f64, f64),
    im: (f64, f64),
}

impl Rect {
    fn real(lo: f64, hi: f64) -> Self {
        Rect { re: (lo, hi), im: (0.0, 0.0) }
    }

    fn everything() -> Self {
        Rect { re: (f64::NEG_INFINITY, f64::INFINITY), im: (f64::NEG_INFINITY, f64::INFINITY) }
    }

    fn diam(&self) -> f64 {
        let (w, h) = (self.re.1 - self.re.0, self.im.1 - self.im.0);
        if h == 0.0 {
            w
        } else {
            w.hypot(h)
        }
    }

    fn hull(self, o: Rect) -> Rect {
        Rect { re: (self.re.0.min(o.re.0), self.re.1.max(o.re.1)), im: (self.im.0.min(o.im.0), self.im.1.max(o.im.1)) }
    }

    fn add(self, o: Rect) -> Rect {
        Rect { re: (self.re.0 + o.re.0, self.re.1 + o.re.1), im: (self.im.0 + o.im.0, self.im.1 + o.im.1) }
    }

    fn scale(self, a: f64) -> Rect {
        let s = |(l, h): (f64, f64)| if a >= 0.0 { (a * l, a * h) } else { (a * h, a * l) };
        Rect { re: s(self.re), im: s(self.im) }
    }

    fn shift(self, c: f64) -> Rect {
        Rect { re: (self.re.0 + c, self.re.1 + c), im: self.im }
    }

    fn max_modulus(&self) -> f64 {
        let x = self.re.0.abs().max(self.re.1.abs());
        let y = self.im.0.abs().max(self.im.1.abs());
        x.hypot(y)
    }

    fn min_modulus(&self) -> f64 {
        let gap = |(l, h): (f64, f64)| {
            if l > 0.0 {
                l
            } else if h < 0.0 {
                -h
            } else {
                0.0
            }
        };
        gap(self.re).hypot(gap(self.im))
    }

    fn mul(self, o: Rect) -> Rect {
        let m = |a: (f64, f64), b: (f64, f64)| {
            let c = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1].map(|v| if v.is_nan() { 0.0 } else { v });
            (c.iter().cloned().fold(f64::INFINITY, f64::min), c.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        };
        let sub = |a: (f64, f64), b: (f64, f64)| (a.0 - b.1, a.1 - b.0);
        let add = |a: (f64, f64), b: (f64, f64)| (a.0 + b.0, a.1 + b.1);
        Rect { re: sub(m(self.re, o.re), m(self.im, o.im)), im: add(m(self.re, o.im), m(self.im, o.re)) }
    }

    fn abs(self) -> Rect {
        Rect::real(self.min_modulus(), self.max_modulus())
    }

    fn recip(self) -> Rect {
        let k = self.min_modulus();
        if k <= 0.0 {
            return Rect::everything();
        }
        if self.im == (0.0, 0.0) {
            return Rect::real(1.0 / self.re.1, 1.0 / self.re.0);
        }
        let r = 1.0 / k;
        Rect { re: (-r, r), im: (-r, r) }
    }
}

/// Range of sin over [a, b].
fn sin_range(a: f64, b: f64) -> (f64, f64) {
    if b - a >= TAU {
        return (-1.0, 1.0);
    }
    let (mut lo, mut hi) = (a.sin().min(b.sin()), a.sin().max(b.sin()));
    let first_peak = ((a - FRAC_PI_2) / TAU).ceil() * TAU + FRAC_PI_2;
    if first_peak <= b {
        hi = 1.0;
    }
    let first_trough = ((a + FRAC_PI_2) / TAU).ceil() * TAU - FRAC_PI_2;
    if first_trough <= b {
        lo = -1.0;
    }
    (lo, hi)
}

fn scalar_range(f: &FunctionSpec, a: f64, b: f64) -> Result<(f64, f64)> {
    Ok(match f {
        FunctionSpec::Identity => (a, b),
        FunctionSpec::Sin => sin_range(a, b),
        FunctionSpec::Cos => sin_range(a + FRAC_PI_2, b + FRAC_PI_2),
        FunctionSpec::Square => {
            let hi = (a * a).max(b * b);
            let lo = if a <= 0.0 && b >= 0.0 { 0.0 } else { (a * a).min(b * b) };
            (lo, hi)
        }
        FunctionSpec::Sqrt => {
            if a < 0.0 {
                return Err(TmsError::DomainError(format!("sqrt on a set reaching {a}")));
            }
            (a.sqrt(), b.sqrt())
        }
        FunctionSpec::XSinInvX => {
            let m = a.abs().max(b.abs());
            (-m, m)
        }
        FunctionSpec::Cantor => (cantor(a), cantor(b)),
        _ => unreachable!("not a scalar builtin"),
    })
}

/// Lipschitz constant of a scalar builtin on [a, b] w.r.t. |s − t|.
fn scalar_lipschitz(f: &FunctionSpec, a: f64, b: f64) -> f64 {
    match f {
        FunctionSpec::Identity | FunctionSpec::Sin | FunctionSpec::Cos => 1.0,
        FunctionSpec::Square => 2.0 * a.abs().max(b.abs()),
        FunctionSpec::Sqrt => {
            if a > 0.0 {
                0.5 / a.sqrt()
            } else {
                f64::INFINITY
            }
        }
        FunctionSpec::XSinInvX => {
            let m = if a <= 0.0 && b >= 0.0 { 0.0 } else { a.abs().min(b.abs()) };
            if m > 0.0 {
                1.0 + 1.0 / m
            } else {
                f64::INFINITY
            }
        }
        _ => f64::INFINITY,
    }
}

/// Whether the oscillation over a connected piece is exactly the range width.
fn scalar_exact(f: &FunctionSpec) -> bool {
    !matches!(f, FunctionSpec::XSinInvX)
}

/// Parameter intervals covering a set on a one-dimensional space; arcs that
/// wrap past 2π are split.
fn param_pieces(space: &SpaceDescriptor, s: &OpenSet) -> Option<Vec<(f64, f64)>> {
    match space {
        SpaceDescriptor::Circle { .. } => match s {
            OpenSet::Whole => Some(vec![(0.0, TAU)]),
            OpenSet::Arc { start, end } => {
                let len = arc_length(*start, *end);
                let st = normalize_angle(*start);
                if st + len > TAU {
                    Some(vec![(st, TAU), (0.0, st + len - TAU)])
                } else {
                    Some(vec![(st, st + len)])
                }
            }
            _ => None,
        },
        SpaceDescriptor::EuclideanBox { dim: 1, .. } => bounding_box(space, s).map(|b| vec![b[0]]),
        _ => line_hull(space, s).map(|h| vec![h]),
    }
}

/// Factor converting a parameter Lipschitz constant into one w.r.t. the metric.
fn param_metric_factor(kind: ScalarKind, wraps: bool) -> f64 {
    match kind {
        ScalarKind::Line => 1.0,
        ScalarKind::Angle(_) if wraps => f64::INFINITY,
        ScalarKind::Angle(CircleMetric::Arc) => 1.0,
        ScalarKind::Angle(CircleMetric::Chord) => FRAC_PI_2,
        ScalarKind::CurveParam => f64::INFINITY,
    }
}

/// Enclosure of the embedded coordinates over a connected set.
fn embedded_box(space: &SpaceDescriptor, s: &OpenSet) -> Option<Vec<(f64, f64)>> {
    match space {
        SpaceDescriptor::Circle { .. } => {
            let pieces = param_pieces(space, s)?;
            let (mut c, mut sn) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
            for (a, b) in pieces {
                let r = sin_range(a + FRAC_PI_2, b + FRAC_PI_2);
                c = (c.0.min(r.0), c.1.max(r.1));
                let r = sin_range(a, b);
                sn = (sn.0.min(r.0), sn.1.max(r.1));
            }
            Some(vec![c, sn])
        }
        SpaceDescriptor::RectifiableCurve { samples } => {
            let (a, b) = line_hull(space, s)?;
            let mut pts = vec![samples.position(a), samples.position(b)];
            let n = samples.samples().len() - 1;
            for (i, p) in samples.samples().iter().enumerate() {
                let t = i as f64 / n as f64;
                if a < t && t < b {
                    pts.push(*p);
                }
            }
            Some(
                (0..2)
                    .map(|k| pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p[k]), h.max(p[k]))))
                    .collect(),
            )
        }
        _ => bounding_box(space, s),
    }
}

/// Constant C with ‖v‖₂ ≤ C‖v‖ for the space's norm on the embedded coordinates.
fn euclid_over_norm(space: &SpaceDescriptor) -> f64 {
    match space.norm() {
        None => 1.0,
        Some((norm, w)) => {
            let n = space.dim() as f64;
            let p = norm.exponent();
            let dim_factor = if p.is_infinite() { n.sqrt() } else { n.powf((0.5 - 1.0 / p).max(0.0)) };
            let weight_factor = if p.is_infinite() { 1.0 } else { w.powf(-1.0 / p) };
            dim_factor * weight_factor
        }
    }
}

/// Lipschitz constant of a linear functional on the embedded coordinates.
fn linear_lipschitz(space: &SpaceDescriptor, c: &[f64]) -> f64 {
    match space.norm() {
        Some((norm, w)) if !matches!(space, SpaceDescriptor::RealInterval { .. }) => norm.dual(c, w),
        _ => c.iter().map(|v| v * v).sum::<f64>().sqrt() * euclid_over_norm(space),
    }
}

struct Bound {
    rect: Rect,
    upper: f64,
    exact: bool,
}

fn unbounded() -> Bound {
    Bound { rect: Rect::everything(), upper: f64::INFINITY, exact: false }
}

/// Enclosure and oscillation upper bound over a canonical, nonempty set.
fn bound(f: &FunctionSpec, space: &SpaceDescriptor, s: &OpenSet) -> Result<Bound> {
    use FunctionSpec::*;
    if let OpenSet::Union { parts } = s {
        let mut rect: Option<Rect> = None;
        for p in parts.iter().filter(|p| !is_empty(space, p)) {
            let b = bound(f, space, p)?;
            rect = Some(rect.map_or(b.rect, |r| r.hull(b.rect)));
        }
        let rect = rect.unwrap_or(Rect::real(0.0, 0.0));
        return Ok(Bound { upper: rect.diam(), rect, exact: false });
    }
    let diam = diam_upper(space, s)?;
    let lip = |l: f64| if l == 0.0 { 0.0 } else { l * diam };
    Ok(match f {
        Identity | Sin | Cos | Square | Sqrt | XSinInvX | Cantor => {
            let kind =
                space_scalar_kind(space).ok_or_else(|| TmsError::DomainError(format!("{} needs dimension 1", f.name())))?;
            let Some(pieces) = param_pieces(space, s) else { return Ok(unbounded()) };
            let wraps = pieces.len() > 1;
            let mut rect: Option<Rect> = None;
            let mut l = 0.0_f64;
            for (a, b) in &pieces {
                let (lo, hi) = scalar_range(f, *a, *b)?;
                rect = Some(rect.map_or(Rect::real(lo, hi), |r| r.hull(Rect::real(lo, hi))));
                l = l.max(scalar_lipschitz(f, *a, *b));
            }
            let rect = rect.unwrap();
            let by_lip = lip(l * param_metric_factor(kind, wraps));
            let exact = scalar_exact(f) && (!wraps || matches!(f, Sin | Cos));
            Bound { upper: rect.diam().min(by_lip), rect, exact }
        }
        Constant { c } => Bound { rect: Rect::real(*c, *c), upper: 0.0, exact: true },
        Projection { k } => {
            let Some(bb) = embedded_box(space, s) else { return Ok(unbounded()) };
            let (lo, hi) = bb[*k - 1];
            let l = match space {
                SpaceDescriptor::Circle { .. } | SpaceDescriptor::RectifiableCurve { .. } => 1.0,
                _ => {
                    let mut e = vec![0.0; space.dim()];
                    e[*k - 1] = 1.0;
                    1.0 / space.norm_of(&e).unwrap()
                }
            };
            let exact = matches!(s, OpenSet::Cuboid { .. } | OpenSet::Interval { .. } | OpenSet::Whole)
                && !matches!(space, SpaceDescriptor::RectifiableCurve { .. });
            Bound { rect: Rect::real(lo, hi), upper: (hi - lo).min(lip(l)), exact }
        }
        ComplexIdentity => {
            let Some(bb) = embedded_box(space, s) else { return Ok(unbounded()) };
            let rect = Rect { re: bb[0], im: bb.get(1).copied().unwrap_or((0.0, 0.0)) };
            match (space, s) {
                // The image of an arc is an arc of the unit circle; its diameter is the chord.
                (SpaceDescriptor::Circle { .. }, OpenSet::Arc { start, end }) => {
                    let len = arc_length(*start, *end).min(PI);
                    Bound { rect, upper: 2.0 * (len / 2.0).sin(), exact: true }
                }
                (SpaceDescriptor::Circle { .. }, _) => Bound { rect, upper: 2.0, exact: true },
                _ => Bound { rect, upper: rect.diam().min(lip(euclid_over_norm(space))), exact: false },
            }
        }
        Norm => {
            let Some(bb) = embedded_box(space, s) else { return Ok(unbounded()) };
            let corner: Vec<f64> = bb.iter().map(|(l, h)| l.abs().max(h.abs())).collect();
            let hi = match space.norm() {
                Some((n, w)) if !space.is_circle() && !matches!(space, SpaceDescriptor::RectifiableCurve { .. }) => {
                    n.eval(&corner, w)
                }
                _ => crate::spaces::Norm::L2.eval(&corner, 1.0),
            };
            let l = match space {
                SpaceDescriptor::Circle { .. } => 0.0,
                _ => 1.0,
            };
            let rect = if space.is_circle() { Rect::real(1.0, 1.0) } else { Rect::real(0.0, hi) };
            Bound { rect, upper: rect.diam().min(lip(l)), exact: space.is_circle() }
        }
        GridDensityIntegral(g) => {
            let Some((a, b)) = line_hull(space, s) else { return Ok(unbounded()) };
            let w = g.oscillation_upper(a, b);
            let exact = g.nonnegative();
            let rect = if exact {
                let (va, vb) = match g.mode {
                    IntegralMode::Cumulative => (g.value(a), g.value(b)),
                    IntegralMode::Symmetric => {
                        let r0 = if a < 0.0 && b > 0.0 { 0.0 } else { a.abs().min(b.abs()) };
                        (g.value(r0), g.value(a.abs().max(b.abs())))
                    }
                };
                Rect::real(va.min(vb), va.max(vb))
            } else {
                let v = g.value(a);
                Rect::real(v - w, v + w)
            };
            Bound { upper: if exact { rect.diam() } else { w }, rect, exact }
        }
        LinearOnSpace { coefficients } => {
            let Some(bb) = embedded_box(space, s) else { return Ok(unbounded()) };
            let lo: f64 = bb.iter().zip(coefficients).map(|((l, h), c)| (c * l).min(c * h)).sum();
            let hi: f64 = bb.iter().zip(coefficients).map(|((l, h), c)| (c * l).max(c * h)).sum();
            let exact = matches!(s, OpenSet::Cuboid { .. } | OpenSet::Interval { .. }) && space.norm().is_some();
            Bound { rect: Rect::real(lo, hi), upper: (hi - lo).min(lip(linear_lipschitz(space, coefficients))), exact }
        }
        Sum { a, b } => {
            let (x, y) = (bound(a, space, s)?, bound(b, space, s)?);
            let rect = x.rect.add(y.rect);
            Bound { upper: (x.upper + y.upper).min(rect.diam()), rect, exact: false }
        }
        Scale { alpha, f } => {
            let x = bound(f, space, s)?;
            let upper = if *alpha == 0.0 { 0.0 } else { alpha.abs() * x.upper };
            Bound { rect: x.rect.scale(*alpha), upper, exact: x.exact || *alpha == 0.0 }
        }
        Product { a, b } => {
            let (x, y) = (bound(a, space, s)?, bound(b, space, s)?);
            let rect = x.rect.mul(y.rect);
            let split = x.rect.max_modulus() * y.upper + y.rect.max_modulus() * x.upper;
            Bound { upper: split.min(rect.diam()), rect, exact: false }
        }
        Reciprocal { f } => {
            let x = bound(f, space, s)?;
            let k = x.rect.min_modulus();
            if k <= 0.0 {
                return Ok(unbounded());
            }
            let rect = x.rect.recip();
            Bound { upper: (x.upper / (k * k)).min(rect.diam()), rect, exact: false }
        }
        Abs { f } => {
            let x = bound(f, space, s)?;
            let rect = x.rect.abs();
            Bound { upper: x.upper.min(rect.diam()), rect, exact: x.exact && f.is_real() }
        }
        Shift { f, c } => {
            let x = bound(f, space, s)?;
            Bound { rect: x.rect.shift(*c), upper: x.upper, exact: x.exact }
        }
    })
}

/// Points where the function is known to attain local extremes inside the set.
fn critical_points(f: &FunctionSpec, space: &SpaceDescriptor, s: &OpenSet) -> Vec<Point> {
    use FunctionSpec::*;
    let mut out = Vec::new();
    match f {
        Sin | Cos | Square | XSinInvX => {
            if space_scalar_kind(space).is_none() {
                return out;
            }
            let Some(pieces) = param_pieces(space, s) else { return out };
            for (a, b) in pieces {
                let mut push = |t: f64| {
                    let t = if space.is_circle() { normalize_angle(t) } else { t };
                    out.push(Point::new(vec![t]));
                };
                match f {
                    Sin | Cos => {
                        let phase = if matches!(f, Sin) { FRAC_PI_2 } else { 0.0 };
                        let k0 = ((a - phase) / PI).ceil() as i64;
                        for k in k0..k0 + 4 {
                            let t = phase + k as f64 * PI;
                            if t < b {
                                push(t);
                            }
                        }
                    }
                    Square => push(0.0),
                    _ => {
                        // Near-extrema of x·sin(1/x): sin(1/x) = ±1 at 2/((2k+1)π).
                        for sign in [1.0, -1.0] {
                            let (lo, hi) = if sign > 0.0 { (a.max(0.0), b) } else { ((-b).max(0.0), -a) };
                            if hi <= 0.0 || lo >= hi {
                                continue;
                            }
                            let k_lo = ((2.0 / (PI * hi) - 1.0) / 2.0).ceil().max(0.0);
                            let k_hi = if lo > 0.0 { ((2.0 / (PI * lo) - 1.0) / 2.0).floor() } else { f64::INFINITY };
                            let mut k = k_lo;
                            let mut n = 0;
                            while k <= k_hi && n < 64 {
                                push(sign * 2.0 / ((2.0 * k + 1.0) * PI));
                                k += 1.0;
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
        Sum { a, b } | Product { a, b } => {
            out.extend(critical_points(a, space, s));
            out.extend(critical_points(b, space, s));
        }
        Scale { f, .. } | Reciprocal { f } | Abs { f } | Shift { f, .. } => out.extend(critical_points(f, space, s)),
        _ => {}
    }
    out.retain(|p| contains(space, s, p));
    out
}

/// Largest |f(x) − f(y)| over the given points; exact for real values and a
/// lower bound otherwise (pairs against the extremes along 8 directions).
fn spread(values: &[Complex64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    if values.iter().all(|v| v.im == 0.0) {
        let lo = values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let hi = values.iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        return hi - lo;
    }
    let mut anchors = Vec::new();
    for k in 0..8 {
        let dir = Complex64::from_polar(1.0, k as f64 * PI / 8.0);
        let proj = |v: &Complex64| (v * dir.conj()).re;
        let (mut imin, mut imax) = (0, 0);
        for (i, v) in values.iter().enumerate() {
            if proj(v) < proj(&values[imin]) {
                imin = i;
            }
            if proj(v) > proj(&values[imax]) {
                imax = i;
            }
        }
        anchors.push(imin);
        anchors.push(imax);
    }
    let mut best = 0.0_f64;
    for &a in &anchors {
        for v in values {
            best = best.max((values[a] - v).norm());
        }
    }
    best
}

fn check_domain(f: &FunctionSpec, space: &SpaceDescriptor, s: &OpenSet) -> Result<()> {
    use FunctionSpec::*;
    match f {
        Sqrt => {
            if let Some(pieces) = param_pieces(space, s) {
                if let Some((a, _)) = pieces.iter().find(|(a, _)| *a < 0.0) {
                    return Err(TmsError::DomainError(format!("sqrt on a set reaching {a}")));
                }
            }
            Ok(())
        }
        Sum { a, b } | Product { a, b } => {
            check_domain(a, space, s)?;
            check_domain(b, space, s)
        }
        Scale { f, .. } | Reciprocal { f } | Abs { f } | Shift { f, .. } => check_domain(f, space, s),
        _ => Ok(()),
    }
}

/// Bracket on ω(f, E) = sup |f(x) − f(y)| over x, y ∈ E.
pub fn oscillation<R: Rng + ?Sized>(
    f: &FunctionSpec,
    space: &SpaceDescriptor,
    e: &OpenSet,
    budget: usize,
    rng: &mut R,
) -> Result<Bracket> {
    f.validate(space)?;
    let e = canonical(space, e)?;
    if is_empty(space, &e) {
        return Ok(Bracket::exact(0.0));
    }
    check_domain(f, space, &e)?;
    if let FunctionSpec::Shift { f: inner, .. } = f {
        return oscillation(inner, space, &e, budget, rng);
    }
    let b = bound(f, space, &e)?;
    if b.exact && b.upper.is_finite() {
        return Ok(Bracket::exact(b.upper));
    }
    let mut pts = sample_points(space, &e, budget.max(2), rng);
    pts.extend(critical_points(f, space, &e));
    let values = pts.iter().map(|p| f.eval(space, p)).collect::<Result<Vec<_>>>()?;
    let lower = spread(&values);
    Ok(Bracket::new(lower, b.upper.max(lower)))
}

/// Upper bound on ω(f, E) without sampling.
pub fn oscillation_upper(f: &FunctionSpec, space: &SpaceDescriptor, e: &OpenSet) -> Result<f64> {
    let e = canonical(space, e)?;
    if is_empty(space, &e) {
        return Ok(0.0);
    }
    check_domain(f, space, &e)?;
    Ok(bound(f, space, &e)?.upper)
}

/// Sampled sup and inf of |f| over a region, used to test declared bounds.
pub fn modulus_range<R: Rng + ?Sized>(
    f: &FunctionSpec,
    space: &SpaceDescriptor,
    region: &OpenSet,
    n: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let region = canonical(space, region)?;
    let mut pts = sample_points(space, &region, n, rng);
    pts.extend(critical_points(f, space, &region));
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for p in &pts {
        let v = f.eval(space, p)?.norm();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(5)
    }

    #[test]
    fn oscillation_examples() {
        let r = SpaceDescriptor::real_line();
        let b = oscillation(&FunctionSpec::Identity, &r, &OpenSet::interval(0.2, 0.9), 100, &mut rng()).unwrap();
        assert_eq!((b.lower, b.upper), (0.9 - 0.2, 0.9 - 0.2));
        let b = oscillation(&FunctionSpec::Sin, &r, &OpenSet::interval(0.0, 0.5), 10_000, &mut rng()).unwrap();
        assert!(b.upper <= 0.5);
        assert_abs_diff_eq!(b.lower, 0.5f64.sin(), epsilon = 1e-9);
        let b = oscillation(&FunctionSpec::Constant { c: 3.0 }, &r, &OpenSet::interval(-4.0, 9.0), 10, &mut rng()).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn sqrt_outside_domain() {
        let r = SpaceDescriptor::real_line();
        let err = oscillation(&FunctionSpec::Sqrt, &r, &OpenSet::interval(-1.0, 1.0), 10, &mut rng());
        assert!(matches!(err, Err(TmsError::DomainError(_))));
        let half = SpaceDescriptor::RealInterval { a: Some(0.0), b: None, closed_a: true, closed_b: false };
        let b = oscillation(&FunctionSpec::Sqrt, &half, &OpenSet::interval(-1.0, 4.0), 10, &mut rng()).unwrap();
        assert_eq!(b.upper, 2.0);
    }

    #[test]
    fn cantor_values() {
        assert_eq!(cantor(0.0), 0.0);
        assert_eq!(cantor(1.0), 1.0);
        assert_abs_diff_eq!(cantor(1.0 / 3.0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cantor(0.5), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cantor(2.0 / 9.0), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(cantor(0.75), 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn complex_identity_on_circle() {
        let s = SpaceDescriptor::circle(CircleMetric::Arc);
        let arc = OpenSet::arc(6.0, 6.5);
        let b = oscillation(&FunctionSpec::ComplexIdentity, &s, &arc, 1000, &mut rng()).unwrap();
        assert_abs_diff_eq!(b.upper, 2.0 * 0.25f64.sin(), epsilon = 1e-12);
        assert!(b.upper <= 0.5);
    }

    #[test]
    fn composite_bounds_are_sound() {
        let r = SpaceDescriptor::real_line();
        let f = FunctionSpec::product(FunctionSpec::Sin, FunctionSpec::Cos);
        let g = FunctionSpec::reciprocal(FunctionSpec::shift(FunctionSpec::Sin, 3.0));
        for (a, b) in [(0.0, 0.3), (1.0, 1.001), (-2.0, 4.0)] {
            for h in [&f, &g] {
                let br = oscillation(h, &r, &OpenSet::interval(a, b), 2000, &mut rng()).unwrap();
                assert!(br.lower <= br.upper + 1e-12, "{h:?} on ({a}, {b}): {br:?}");
            }
        }
    }

    #[test]
    fn grid_density_integral() {
        let g = GridDensity::new(vec![1.0; 10], IntegralMode::Cumulative, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(g.value(0.35), 0.35, epsilon = 1e-12);
        assert_abs_diff_eq!(g.value(3.0), 1.0, epsilon = 1e-12);
        let s = GridDensity::new(vec![1.0; 10], IntegralMode::Symmetric, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(s.value(-0.3), 0.6, epsilon = 1e-12);
        let r = SpaceDescriptor::real_line();
        let f = FunctionSpec::GridDensityIntegral(s);
        let b = oscillation(&f, &r, &OpenSet::interval(-0.2, 0.1), 100, &mut rng()).unwrap();
        assert_abs_diff_eq!(b.upper, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn names_round_trip() {
        for n in ["identity", "sin", "projection_2", "constant:2.5", "x_sin_inv_x", "complex_identity"] {
            let f = FunctionSpec::from_name(n).unwrap();
            assert_eq!(f.name(), n);
        }
        let json = serde_json::to_string(&FunctionSpec::XSinInvX).unwrap();
        assert_eq!(json, r#"{"kind":"x_sin_inv_x"}"#);
        assert!(FunctionSpec::from_name("tan").is_err());
    }
}
