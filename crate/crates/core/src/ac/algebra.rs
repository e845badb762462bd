use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TmsError};
use crate::tms::TmsInstance;

use super::certify::certify_ac_lipschitz;
use super::function::{modulus_range, FunctionSpec};
use super::lipschitz::window_region;
use super::AcVerdict;

const BOUND_SAMPLES: usize = 4096;

/// A function together with a certified Lipschitz constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedFunction {
    pub f: FunctionSpec,
    pub l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum AlgebraOp {
    Sum,
    Scale {
        alpha: f64,
    },
    /// Needs a declared M with |f|, |g| ≤ M.
    Product {
        bound: Option<f64>,
    },
    /// Needs a declared K with |f| ≥ K > 0.
    Reciprocal {
        lower_bound: Option<f64>,
    },
    Abs,
}

fn check_bound(f: &FunctionSpec, instance: &TmsInstance, seed: u64, ok: impl Fn(f64, f64) -> bool, what: &str) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = modulus_range(f, &instance.space, &window_region(&instance.space), BOUND_SAMPLES, &mut rng)?;
    if ok(lo, hi) {
        Ok(())
    } else {
        Err(TmsError::InsufficientHypotheses(format!("{} violates the declared {what}: |f| ranges over [{lo}, {hi}]", f.name())))
    }
}

/// Derives the combined function and its constant: L_f + L_g, |α|L, M(L_f + L_g),
/// L/K² or L, then certifies it with spot checks at `eps`.
pub fn ac_algebra_check(
    f: &CertifiedFunction,
    g: Option<&CertifiedFunction>,
    op: &AlgebraOp,
    instance: &TmsInstance,
    eps: f64,
    n_spot: usize,
    seed: u64,
) -> Result<(CertifiedFunction, AcVerdict)> {
    let need_g = || g.ok_or_else(|| TmsError::InvalidArgument("this operation needs a second function".into()));
    let derived = match op {
        AlgebraOp::Sum => {
            let g = need_g()?;
            CertifiedFunction { f: FunctionSpec::sum(f.f.clone(), g.f.clone()), l: f.l + g.l }
        }
        AlgebraOp::Scale { alpha } => CertifiedFunction { f: FunctionSpec::scale(*alpha, f.f.clone()), l: alpha.abs() * f.l },
        AlgebraOp::Product { bound } => {
            let g = need_g()?;
            let m = bound.ok_or_else(|| TmsError::InsufficientHypotheses("product needs a declared bound M".into()))?;
            for h in [&f.f, &g.f] {
                check_bound(h, instance, seed, |_, hi| hi <= m, "bound")?;
            }
            CertifiedFunction { f: FunctionSpec::product(f.f.clone(), g.f.clone()), l: m * (f.l + g.l) }
        }
        AlgebraOp::Reciprocal { lower_bound } => {
            let k = lower_bound
                .filter(|k| *k > 0.0)
                .ok_or_else(|| TmsError::InsufficientHypotheses("reciprocal needs a declared lower bound K > 0".into()))?;
            check_bound(&f.f, instance, seed, |lo, _| lo >= k, "lower bound")?;
            CertifiedFunction { f: FunctionSpec::reciprocal(f.f.clone()), l: f.l / (k * k) }
        }
        AlgebraOp::Abs => CertifiedFunction { f: FunctionSpec::abs(f.f.clone()), l: f.l },
    };
    let verdict = certify_ac_lipschitz(derived.l, &derived.f, instance, eps, n_spot, seed)?;
    Ok((derived, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureKind;
    use crate::spaces::SpaceDescriptor;

    fn line() -> TmsInstance {
        TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).unwrap()
    }

    #[test]
    fn derived_constants() {
        let sin = CertifiedFunction { f: FunctionSpec::Sin, l: 1.0 };
        let cos = CertifiedFunction { f: FunctionSpec::Cos, l: 1.0 };
        let (d, v) = ac_algebra_check(&sin, Some(&cos), &AlgebraOp::Sum, &line(), 0.01, 10, 1).unwrap();
        assert_eq!(d.l, 2.0);
        assert!(v.is_certified());
        let id = CertifiedFunction { f: FunctionSpec::Identity, l: 1.0 };
        let (d, v) = ac_algebra_check(&id, None, &AlgebraOp::Scale { alpha: 0.0 }, &line(), 0.01, 10, 1).unwrap();
        assert_eq!(d.l, 0.0);
        assert_eq!(v.delta_rule().unwrap().delta(0.01), f64::INFINITY);
        let shifted = CertifiedFunction { f: FunctionSpec::shift(FunctionSpec::Sin, 3.0), l: 1.0 };
        let op = AlgebraOp::Reciprocal { lower_bound: Some(2.0) };
        let (d, v) = ac_algebra_check(&shifted, None, &op, &line(), 0.01, 10, 1).unwrap();
        assert_eq!(d.l, 0.25);
        assert!(v.is_certified());
    }

    #[test]
    fn missing_or_false_hypotheses() {
        let sin = CertifiedFunction { f: FunctionSpec::Sin, l: 1.0 };
        let id = CertifiedFunction { f: FunctionSpec::Identity, l: 1.0 };
        let r = ac_algebra_check(&sin, Some(&sin), &AlgebraOp::Product { bound: None }, &line(), 0.1, 4, 1);
        assert!(matches!(r, Err(TmsError::InsufficientHypotheses(_))));
        let r = ac_algebra_check(&sin, Some(&id), &AlgebraOp::Product { bound: Some(1.0) }, &line(), 0.1, 4, 1);
        assert!(matches!(r, Err(TmsError::InsufficientHypotheses(_))));
        let r = ac_algebra_check(&sin, None, &AlgebraOp::Reciprocal { lower_bound: Some(0.5) }, &line(), 0.1, 4, 1);
        assert!(matches!(r, Err(TmsError::InsufficientHypotheses(_))));
    }
}
