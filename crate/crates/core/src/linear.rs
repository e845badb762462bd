//! Finite-dimensional linear maps between normed spaces: operator-norm
//! brackets and the bounded ⇒ absolutely continuous certificate under the
//! diameter outer measure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ac::{AcVerdict, Certificate, DeltaRule, FunctionSpec, SpotCheck};
use crate::error::{Result, TmsError};
use crate::spaces::{Norm, Point, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearMapSpec {
    /// x ↦ Σ cᵢxᵢ on ℝⁿ with the given norm.
    FunctionalOnRn {
        coefficients: Vec<f64>,
        norm: Norm,
    },
    /// A matrix acting on grid functions; both sides use grid norms with weight 1/m.
    MatrixOnGrid {
        matrix: Vec<Vec<f64>>,
        domain_norm: Norm,
        codomain_norm: Norm,
    },
    /// (Tf)(xᵢ) = (1/m)·Σ_{j≤i} f(xⱼ) on grid functions with the sup norm.
    IntegrationOperator {
        m: usize,
    },
    /// f ↦ (1/m)·Σ f(xᵢ)h(xᵢ) on the weighted grid Lᵖ space.
    HolderFunctional {
        h: Vec<f64>,
        p: f64,
        q: f64,
    },
    /// (x, y) ↦ x + y on X × X with ‖(x, y)‖ = max{‖x‖, ‖y‖}.
    Addition {
        dim: usize,
        norm: Norm,
    },
    Scalar {
        alpha: f64,
        dim: usize,
        norm: Norm,
    },
    /// m·(f(xᵢ₊₁) − f(xᵢ)) on sup-normed grid functions. Its norm 2m grows
    /// with the grid, which is how unboundedness shows up at finite size.
    DifferenceOperator {
        m: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormEstimate {
    pub lower: f64,
    pub upper: f64,
}

fn grid_weight(n: usize) -> f64 {
    1.0 / n as f64
}

impl LinearMapSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(TmsError::InvalidArgument(msg.into()));
        match self {
            LinearMapSpec::FunctionalOnRn { coefficients, .. } if coefficients.is_empty() => bad("empty coefficient vector"),
            LinearMapSpec::MatrixOnGrid { matrix, .. } => {
                let cols = matrix.first().map_or(0, Vec::len);
                if cols == 0 || matrix.iter().any(|r| r.len() != cols) {
                    bad("matrix must be rectangular and nonempty")
                } else if matrix.iter().flatten().any(|a| !a.is_finite()) {
                    bad("matrix entries must be finite")
                } else {
                    Ok(())
                }
            }
            LinearMapSpec::IntegrationOperator { m } | LinearMapSpec::DifferenceOperator { m } if *m < 2 => {
                bad("grid needs at least 2 points")
            }
            LinearMapSpec::HolderFunctional { h, p, q } => {
                if h.is_empty() {
                    bad("empty h")
                } else if !(*p > 1.0 && *q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                    bad("Hölder exponents need 1/p + 1/q = 1 with p, q > 1")
                } else {
                    Ok(())
                }
            }
            LinearMapSpec::Addition { dim, .. } | LinearMapSpec::Scalar { dim, .. } if *dim == 0 => {
                bad("dimension must be positive")
            }
            _ => Ok(()),
        }
    }

    pub fn domain_dim(&self) -> usize {
        match self {
            LinearMapSpec::FunctionalOnRn { coefficients, .. } => coefficients.len(),
            LinearMapSpec::MatrixOnGrid { matrix, .. } => matrix[0].len(),
            LinearMapSpec::IntegrationOperator { m } | LinearMapSpec::DifferenceOperator { m } => *m,
            LinearMapSpec::HolderFunctional { h, .. } => h.len(),
            LinearMapSpec::Addition { dim, .. } => 2 * dim,
            LinearMapSpec::Scalar { dim, .. } => *dim,
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self {
            LinearMapSpec::FunctionalOnRn { .. } | LinearMapSpec::HolderFunctional { .. } => 1,
            LinearMapSpec::MatrixOnGrid { matrix, .. } => matrix.len(),
            LinearMapSpec::IntegrationOperator { m } => *m,
            LinearMapSpec::DifferenceOperator { m } => m - 1,
            LinearMapSpec::Addition { dim, .. } | LinearMapSpec::Scalar { dim, .. } => *dim,
        }
    }

    fn holder_norm(p: f64) -> Norm {
        if p == 2.0 {
            Norm::L2
        } else {
            Norm::Lp(p)
        }
    }

    pub fn domain_norm(&self, x: &[f64]) -> f64 {
        match self {
            LinearMapSpec::FunctionalOnRn { norm, .. } | LinearMapSpec::Scalar { norm, .. } => norm.eval(x, 1.0),
            LinearMapSpec::MatrixOnGrid { domain_norm, .. } => domain_norm.eval(x, grid_weight(x.len())),
            LinearMapSpec::IntegrationOperator { .. } | LinearMapSpec::DifferenceOperator { .. } => Norm::Sup.eval(x, 1.0),
            LinearMapSpec::HolderFunctional { p, .. } => Self::holder_norm(*p).eval(x, grid_weight(x.len())),
            LinearMapSpec::Addition { dim, norm } => norm.eval(&x[..*dim], 1.0).max(norm.eval(&x[*dim..], 1.0)),
        }
    }

    pub fn codomain_norm(&self, y: &[f64]) -> f64 {
        match self {
            LinearMapSpec::FunctionalOnRn { .. } | LinearMapSpec::HolderFunctional { .. } => y[0].abs(),
            LinearMapSpec::MatrixOnGrid { codomain_norm, .. } => codomain_norm.eval(y, grid_weight(y.len())),
            LinearMapSpec::IntegrationOperator { .. } | LinearMapSpec::DifferenceOperator { .. } => Norm::Sup.eval(y, 1.0),
            LinearMapSpec::Addition { norm, .. } | LinearMapSpec::Scalar { norm, .. } => norm.eval(y, 1.0),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            LinearMapSpec::FunctionalOnRn { coefficients, .. } => vec![coefficients.iter().zip(x).map(|(c, v)| c * v).sum()],
            LinearMapSpec::MatrixOnGrid { matrix, .. } => {
                matrix.iter().map(|r| r.iter().zip(x).map(|(a, v)| a * v).sum()).collect()
            }
            LinearMapSpec::IntegrationOperator { m } => {
                let mut acc = 0.0;
                x.iter()
                    .map(|v| {
                        acc += v / *m as f64;
                        acc
                    })
                    .collect()
            }
            LinearMapSpec::HolderFunctional { h, .. } => vec![h.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() / h.len() as f64],
            LinearMapSpec::Addition { dim, .. } => (0..*dim).map(|i| x[i] + x[dim + i]).collect(),
            LinearMapSpec::Scalar { alpha, .. } => x.iter().map(|v| alpha * v).collect(),
            LinearMapSpec::DifferenceOperator { m } => x.windows(2).map(|w| *m as f64 * (w[1] - w[0])).collect(),
        }
    }

    /// The closed-form norm, or for matrices the bound that dualizes each row.
    fn analytic_upper(&self) -> f64 {
        match self {
            LinearMapSpec::FunctionalOnRn { coefficients, norm } => norm.dual(coefficients, 1.0),
            LinearMapSpec::MatrixOnGrid { matrix, domain_norm, codomain_norm } => {
                let w = grid_weight(matrix[0].len());
                let duals: Vec<f64> = matrix.iter().map(|r| domain_norm.dual(r, w)).collect();
                codomain_norm.eval(&duals, grid_weight(matrix.len()))
            }
            LinearMapSpec::IntegrationOperator { .. } => 1.0,
            LinearMapSpec::HolderFunctional { h, q, .. } => Self::holder_norm(*q).eval(h, grid_weight(h.len())),
            LinearMapSpec::Addition { .. } => 2.0,
            LinearMapSpec::Scalar { alpha, .. } => alpha.abs(),
            LinearMapSpec::DifferenceOperator { m } => 2.0 * *m as f64,
        }
    }

    fn ratio(&self, x: &[f64]) -> f64 {
        let n = self.domain_norm(x);
        if n > 0.0 {
            self.codomain_norm(&self.apply(x)) / n
        } else {
            0.0
        }
    }

    /// Vectors that attain or nearly attain the norm for the shipped kinds.
    fn structured_probes(&self) -> Vec<Vec<f64>> {
        let n = self.domain_dim();
        let mut probes: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        probes.push(vec![1.0; n]);
        probes.push((0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect());
        let dual_maximizer = |c: &[f64], p: f64| -> Vec<f64> {
            if p.is_infinite() {
                c.iter().map(|v| v.signum()).collect()
            } else if p == 1.0 {
                let k = c.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map_or(0, |(i, _)| i);
                (0..c.len()).map(|i| if i == k { c[k].signum() } else { 0.0 }).collect()
            } else {
                let q = p / (p - 1.0);
                c.iter().map(|v| v.signum() * v.abs().powf(q - 1.0)).collect()
            }
        };
        match self {
            LinearMapSpec::FunctionalOnRn { coefficients, norm } => probes.push(dual_maximizer(coefficients, norm.exponent())),
            LinearMapSpec::MatrixOnGrid { matrix, domain_norm, .. } => {
                probes.extend(matrix.iter().map(|r| dual_maximizer(r, domain_norm.exponent())))
            }
            LinearMapSpec::HolderFunctional { h, p, .. } => probes.push(dual_maximizer(h, *p)),
            LinearMapSpec::Addition { dim, .. } => {
                for i in 0..*dim {
                    let mut v = vec![0.0; 2 * dim];
                    v[i] = 1.0;
                    v[dim + i] = 1.0;
                    probes.push(v);
                }
            }
            _ => {}
        }
        probes
    }
}

/// Probe lower bound and analytic upper bound on ‖T‖.
pub fn operator_norm(map: &LinearMapSpec, budget: usize, seed: u64) -> Result<OperatorNormEstimate> {
    map.validate()?;
    if budget == 0 {
        return Err(TmsError::InvalidArgument("probe budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = map.domain_dim();
    let mut lower = map.structured_probes().iter().map(|x| map.ratio(x)).fold(0.0, f64::max);
    for _ in 0..budget {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        lower = lower.max(map.ratio(&x));
    }
    let upper = map.analytic_upper();
    // Probes that attain the norm can overshoot it by rounding.
    if lower > upper && lower <= upper * (1.0 + 1e-12) {
        lower = upper;
    }
    Ok(OperatorNormEstimate { lower, upper })
}

/// Max defect of additivity and homogeneity over random samples, relative to
/// the size of the outputs.
pub fn linearity_defect(map: &LinearMapSpec, samples: usize, seed: u64) -> Result<f64> {
    map.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = map.domain_dim();
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let a: f64 = rng.gen_range(-5.0..5.0);
        let (tx, ty) = (map.apply(&x), map.apply(&y));
        let sum: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        let scaled: Vec<f64> = x.iter().map(|u| a * u).collect();
        let add: Vec<f64> = map.apply(&sum).iter().zip(tx.iter().zip(&ty)).map(|(s, (u, v))| s - u - v).collect();
        let hom: Vec<f64> = map.apply(&scaled).iter().zip(&tx).map(|(s, u)| s - a * u).collect();
        let scale = 1.0 + map.codomain_norm(&tx) + map.codomain_norm(&ty);
        worst = worst.max(map.codomain_norm(&add) / scale).max(map.codomain_norm(&hom) / (1.0 + a.abs() * scale));
    }
    Ok(worst)
}

/// Random disjoint families of open balls in the domain; a ball of radius r has
/// ν = diam = 2r, and T moves it onto a set of diameter 2r·‖T‖.
fn linear_spot_checks(
    map: &LinearMapSpec,
    norm: OperatorNormEstimate,
    rule: &DeltaRule,
    eps: f64,
    n: usize,
    seed: u64,
) -> Result<(Vec<SpotCheck>, usize)> {
    let delta = rule.delta(eps);
    let delta = if delta.is_finite() { delta } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = map.domain_dim();
    let mut e1 = vec![0.0; dim];
    e1[0] = 1.0;
    let e1_norm = map.domain_norm(&e1);
    let mut checks = Vec::with_capacity(n);
    let mut failures = 0;
    for _ in 0..n {
        let k = rng.gen_range(1..=8usize);
        let total = rng.gen_range(0.5..0.999) * delta;
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let wsum: f64 = weights.iter().sum();
        let radii: Vec<f64> = weights.iter().map(|w| total * w / wsum / 2.0).collect();
        let base: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mut offset = 0.0;
        let mut measure = 0.0;
        let mut upper = 0.0;
        let mut centers = Vec::with_capacity(k);
        for (i, r) in radii.iter().enumerate() {
            if i > 0 {
                offset += (radii[i - 1] + r) / e1_norm * (1.0 + rng.gen_range(0.01..1.0));
            }
            let mut c = base.clone();
            c[0] += offset;
            centers.push(c);
            measure += 2.0 * r;
            upper += 2.0 * r * norm.upper;
        }
        for w in centers.windows(2).zip(radii.windows(2)) {
            let d: Vec<f64> = w.0[1].iter().zip(&w.0[0]).map(|(a, b)| a - b).collect();
            if map.domain_norm(&d) < w.1[0] + w.1[1] {
                return Err(TmsError::InvalidArgument("spot-check balls overlap".into()));
            }
        }
        if !(upper < eps) || !(measure < delta) {
            failures += 1;
        }
        checks.push(SpotCheck { eps, delta, family_size: k, total_measure_upper: measure, oscillation_sum_upper: upper });
    }
    Ok((checks, failures))
}

/// A bounded map is absolutely continuous with δ(ε) = ε/(‖T‖ + 1).
pub fn ac_from_bounded(
    map: &LinearMapSpec,
    eps: f64,
    probes: usize,
    n_spot: usize,
    seed: u64,
) -> Result<(OperatorNormEstimate, AcVerdict)> {
    if !(eps > 0.0) {
        return Err(TmsError::InvalidArgument("eps must be positive".into()));
    }
    let est = operator_norm(map, probes, seed)?;
    if !est.upper.is_finite() {
        return Ok((est, AcVerdict::inconclusive("no finite operator-norm bound")));
    }
    let rule = DeltaRule::Proportional { slope: 1.0 / (est.upper + 1.0) };
    let (spot_checks, failures) = linear_spot_checks(map, est, &rule, eps, n_spot, seed)?;
    let verdict = if failures == 0 {
        AcVerdict::Certified { certificate: Certificate::LinearBounded { norm: est.upper }, delta_rule: rule, spot_checks }
    } else {
        AcVerdict::inconclusive(format!("{failures} spot-check families reached eps"))
    };
    Ok((est, verdict))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub l: f64,
    pub pairs: usize,
    /// max of |T_h f − T_h g| − L·‖f − g‖_p over the sampled pairs.
    pub max_excess: f64,
    pub verdict: AcVerdict,
}

/// Certifies T_h with L = ‖h‖_q and checks the Hölder bound on random pairs.
pub fn holder_functional_check(h: &[f64], p: f64, q: f64, pairs: usize, seed: u64) -> Result<HolderReport> {
    let map = LinearMapSpec::HolderFunctional { h: h.to_vec(), p, q };
    map.validate()?;
    let l = map.analytic_upper();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..pairs {
        let scale = 10f64.powi(rng.gen_range(-3..=3));
        let f: Vec<f64> = h.iter().map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = if i % 10 == 0 { f.clone() } else { h.iter().map(|_| scale * rng.gen_range(-1.0..1.0)).collect() };
        let diff: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a - b).collect();
        let lhs = (map.apply(&f)[0] - map.apply(&g)[0]).abs();
        max_excess = max_excess.max(lhs - l * map.domain_norm(&diff));
    }
    let verdict = if max_excess <= 1e-9 {
        AcVerdict::Certified {
            certificate: Certificate::LocallyLipschitz { l },
            delta_rule: DeltaRule::lipschitz(l),
            spot_checks: Vec::new(),
        }
    } else {
        AcVerdict::inconclusive(format!("Hölder bound exceeded by {max_excess}"))
    };
    Ok(HolderReport { l, pairs, max_excess, verdict })
}

/// The norm of a normed space is 1-Lipschitz for the diameter measure.
pub fn norm_function_certificate(space: &SpaceDescriptor, eps: f64, n_spot: usize, seed: u64) -> Result<AcVerdict> {
    let instance = crate::tms::TmsInstance::new(space.clone(), crate::measure::MeasureKind::DiamOuter)?;
    crate::ac::certify_ac_lipschitz(1.0, &FunctionSpec::Norm, &instance, eps, n_spot, seed)
}

/// The inner function of a composition T ∘ f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorFunction {
    /// x ↦ x on ℝ^dim.
    Identity {
        dim: usize,
    },
    Scalar {
        f: FunctionSpec,
    },
}

impl VectorFunction {
    pub fn codomain_dim(&self) -> usize {
        match self {
            VectorFunction::Identity { dim } => *dim,
            VectorFunction::Scalar { .. } => 1,
        }
    }

    pub fn eval(&self, space: &SpaceDescriptor, x: &Point) -> Result<Vec<f64>> {
        match self {
            VectorFunction::Identity { .. } => Ok(x.0.clone()),
            VectorFunction::Scalar { f } => Ok(vec![f.eval(space, x)?.re]),
        }
    }
}

/// ω(T∘f, E) ≤ ‖T‖·ω(f, E): the composite has L' = ‖T‖·L_f and
/// δ(ε) = δ_f(ε/‖T‖).
pub fn composition_ac(
    map: &LinearMapSpec,
    f: &VectorFunction,
    f_verdict: &AcVerdict,
    probes: usize,
    seed: u64,
) -> Result<AcVerdict> {
    if f.codomain_dim() != map.domain_dim() {
        return Err(TmsError::InvalidComposition(format!(
            "f takes values in dimension {}, the map expects {}",
            f.codomain_dim(),
            map.domain_dim()
        )));
    }
    let (Some(rule), Some(l_f)) = (f_verdict.delta_rule(), f_verdict.lipschitz_constant()) else {
        return Err(TmsError::InsufficientHypotheses("f needs a certificate with a Lipschitz-type constant".into()));
    };
    let norm = operator_norm(map, probes, seed)?.upper;
    let delta_rule = if norm == 0.0 {
        DeltaRule::Unbounded
    } else {
        DeltaRule::EpsScaled { factor: 1.0 / norm, inner: Box::new(rule.clone()) }
    };
    Ok(AcVerdict::Certified { certificate: Certificate::LocallyLipschitz { l: norm * l_f }, delta_rule, spot_checks: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        let f = LinearMapSpec::FunctionalOnRn { coefficients: vec![3.0, 4.0], norm: Norm::L2 };
        let e = operator_norm(&f, 100, 1).unwrap();
        assert_eq!(e.upper, 5.0);
        assert!(e.lower >= 5.0 - 1e-6 && e.lower <= 5.0);
        let add = LinearMapSpec::Addition { dim: 3, norm: Norm::L2 };
        let e = operator_norm(&add, 100, 1).unwrap();
        assert!(e.upper == 2.0 && e.lower >= 2.0 - 1e-6);
        let zero = LinearMapSpec::Scalar { alpha: 0.0, dim: 2, norm: Norm::Sup };
        assert_eq!(operator_norm(&zero, 10, 1).unwrap(), OperatorNormEstimate { lower: 0.0, upper: 0.0 });
        let int = LinearMapSpec::IntegrationOperator { m: 50 };
        let e = operator_norm(&int, 10, 1).unwrap();
        assert!(e.upper == 1.0 && (e.lower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_maps_certify() {
        let f = LinearMapSpec::FunctionalOnRn { coefficients: vec![3.0, 4.0], norm: Norm::L2 };
        let (_, v) = ac_from_bounded(&f, 0.6, 100, 100, 2).unwrap();
        assert!((v.delta_rule().unwrap().delta(0.6) - 0.1).abs() < 1e-15);
        let int = LinearMapSpec::IntegrationOperator { m: 64 };
        let (_, v) = ac_from_bounded(&int, 0.01, 100, 100, 2).unwrap();
        assert!(v.is_certified());
        assert!((v.delta_rule().unwrap().delta(0.01) - 0.005).abs() < 1e-15);
    }

    #[test]
    fn holder() {
        let r = holder_functional_check(&[1.0; 64], 2.0, 2.0, 1000, 3).unwrap();
        assert!((r.l - 1.0).abs() < 1e-12 && r.verdict.is_certified());
        let r = holder_functional_check(&[0.0; 8], 2.0, 2.0, 100, 3).unwrap();
        assert_eq!(r.l, 0.0);
        assert_eq!(r.verdict.delta_rule(), Some(&DeltaRule::Unbounded));
        assert!(holder_functional_check(&[1.0], 3.0, 2.0, 1, 3).is_err());
    }

    #[test]
    fn compositions() {
        let sin = AcVerdict::Certified {
            certificate: Certificate::LocallyLipschitz { l: 1.0 },
            delta_rule: DeltaRule::lipschitz(1.0),
            spot_checks: vec![],
        };
        let three = LinearMapSpec::Scalar { alpha: 3.0, dim: 1, norm: Norm::L2 };
        let v = composition_ac(&three, &VectorFunction::Scalar { f: FunctionSpec::Sin }, &sin, 10, 1).unwrap();
        assert_eq!(v.lipschitz_constant(), Some(3.0));
        assert!((v.delta_rule().unwrap().delta(0.3) - 0.1).abs() < 1e-15);
        let proj = LinearMapSpec::FunctionalOnRn { coefficients: vec![1.0, 0.0], norm: Norm::L2 };
        let v = composition_ac(&proj, &VectorFunction::Identity { dim: 2 }, &sin, 10, 1).unwrap();
        assert_eq!(v.lipschitz_constant(), Some(1.0));
        let r = composition_ac(&proj, &VectorFunction::Identity { dim: 3 }, &sin, 10, 1);
        assert!(matches!(r, Err(TmsError::InvalidComposition(_))));
    }

    #[test]
    fn difference_operator_norms_grow() {
        for m in [4usize, 16, 64] {
            let e = operator_norm(&LinearMapSpec::DifferenceOperator { m }, 10, 1).unwrap();
            assert_eq!(e.lower, 2.0 * m as f64);
        }
    }
}
