//! The classical definition on [a, b]: Σ|f(bᵢ) − f(aᵢ)| < ε whenever the
//! disjoint subintervals (aᵢ, bᵢ) have total length below δ.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::spaces::{Point, SpaceDescriptor};

use super::falsify::{cantor_stage_for, cantor_stage_interval};
use super::function::FunctionSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalFamily {
    Explicit {
        intervals: Vec<(f64, f64)>,
    },
    /// The first `count` intervals of the n-th Cantor construction stage,
    /// kept implicit because the count can run into the millions.
    CantorStage {
        n: u32,
        count: u64,
    },
}

impl IntervalFamily {
    pub fn len(&self) -> usize {
        match self {
            IntervalFamily::Explicit { intervals } => intervals.len(),
            IntervalFamily::CantorStage { count, .. } => *count as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn for_each(&self, mut visit: impl FnMut(f64, f64)) {
        match self {
            IntervalFamily::Explicit { intervals } => intervals.iter().for_each(|(a, b)| visit(*a, *b)),
            IntervalFamily::CantorStage { n, count } => (0..*count).for_each(|i| {
                let (a, b) = cantor_stage_interval(*n, i);
                visit(a, b)
            }),
        }
    }

    /// (total length, Σ|f(bᵢ) − f(aᵢ)|), recomputed from scratch.
    pub fn evaluate(&self, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
        let (mut len, mut sum) = (0.0, 0.0);
        self.for_each(|a, b| {
            len += b - a;
            sum += (f(b) - f(a)).abs();
        });
        (len, sum)
    }

    /// Sorted, with every interval nonempty and no two overlapping.
    pub fn is_disjoint(&self) -> bool {
        let mut prev = f64::NEG_INFINITY;
        let mut ok = true;
        self.for_each(|a, b| {
            ok &= a < b && a >= prev;
            prev = b;
        });
        ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardWitness {
    pub delta: f64,
    pub family: IntervalFamily,
    pub total_length: f64,
    pub endpoint_sum: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardVerdict {
    /// Some δ on the schedule admits no witness.
    Holds,
    /// Every δ on the schedule has a witness.
    Fails,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardAcReport {
    pub eps: f64,
    pub verdict: StandardVerdict,
    /// Best endpoint sum found per δ.
    pub best_sums: Vec<(f64, f64)>,
    pub witnesses: Vec<StandardWitness>,
}

impl StandardAcReport {
    pub fn holds(&self) -> bool {
        self.verdict == StandardVerdict::Holds
    }
}

/// Greedy packing of grid cells by endpoint jump under the length budget.
fn grid_candidate(vals: &[f64], a: f64, h: f64, delta: f64) -> (f64, Vec<(f64, f64)>) {
    let mut jumps: Vec<(f64, usize)> = vals.windows(2).enumerate().map(|(i, w)| ((w[1] - w[0]).abs(), i)).collect();
    jumps.sort_by(|x, y| y.0.total_cmp(&x.0));
    let fit = ((delta / h).ceil() as usize).saturating_sub(1);
    let mut chosen: Vec<usize> = jumps.iter().take(fit).filter(|j| j.0 > 0.0).map(|j| j.1).collect();
    while chosen.len() as f64 * h >= delta {
        chosen.pop();
    }
    let sum = chosen.iter().map(|&i| (vals[i + 1] - vals[i]).abs()).sum();
    chosen.sort_unstable();
    (sum, chosen.iter().map(|&i| (a + i as f64 * h, a + (i + 1) as f64 * h)).collect())
}

/// Searches disjoint subinterval families of total length below each δ for an
/// endpoint-difference sum of at least ε.
pub fn standard_ac_check(f: &FunctionSpec, a: f64, b: f64, eps: f64, deltas: &[f64], n_max: usize) -> Result<StandardAcReport> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(TmsError::InvalidArgument("need a bounded interval a < b".into()));
    }
    if !(eps > 0.0) || deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(TmsError::InvalidArgument("eps and deltas must be positive".into()));
    }
    let space = SpaceDescriptor::closed_interval(a, b);
    f.validate(&space)?;
    if !f.is_real() {
        return Err(TmsError::DomainError("the standard check needs a real-valued function".into()));
    }
    let eval = |x: f64| -> f64 { f.eval(&space, &Point::scalar(x.clamp(a, b))).map(|v| v.re).unwrap_or(f64::NAN) };
    // Surface domain errors up front rather than as NaN sums.
    f.eval(&space, &Point::scalar(a))?;
    f.eval(&space, &Point::scalar(b))?;
    let mut grids: Vec<usize> = Vec::new();
    for base in [2usize, 3] {
        let mut n = base;
        while n <= n_max.max(2) {
            grids.push(n);
            n *= base;
        }
    }
    let mut best_sums = Vec::new();
    let mut witnesses = Vec::new();
    for &delta in deltas {
        let mut best: (f64, IntervalFamily) = (0.0, IntervalFamily::Explicit { intervals: vec![] });
        let len = 0.999 * delta;
        if len < b - a {
            let n = n_max.clamp(1, 4096);
            for i in 0..=n {
                let x = a + (b - a - len) * i as f64 / n as f64;
                let s = (eval(x + len) - eval(x)).abs();
                if s > best.0 {
                    best = (s, IntervalFamily::Explicit { intervals: vec![(x, x + len)] });
                }
            }
        }
        for &n in &grids {
            let h = (b - a) / n as f64;
            if h >= delta {
                continue;
            }
            let vals: Vec<f64> = (0..=n).map(|i| eval(a + i as f64 * h)).collect();
            let (s, intervals) = grid_candidate(&vals, a, h, delta);
            if s > best.0 {
                best = (s, IntervalFamily::Explicit { intervals });
            }
        }
        if matches!(f, FunctionSpec::Cantor) && a <= 0.0 && b >= 1.0 {
            if let Some((n, count)) = cantor_stage_for(eps, delta) {
                let fam = IntervalFamily::CantorStage { n, count };
                let (_, s) = fam.evaluate(&eval);
                if s > best.0 {
                    best = (s, fam);
                }
            }
        }
        let (total_length, endpoint_sum) = best.1.evaluate(&eval);
        best_sums.push((delta, endpoint_sum));
        if endpoint_sum >= eps && total_length < delta && best.1.is_disjoint() {
            witnesses.push(StandardWitness { delta, family: best.1, total_length, endpoint_sum });
        }
    }
    let verdict = if witnesses.len() == deltas.len() { StandardVerdict::Fails } else { StandardVerdict::Holds };
    Ok(StandardAcReport { eps, verdict, best_sums, witnesses })
}
