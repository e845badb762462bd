//! Absolute continuity on a topological measure space: for every ε there is a
//! δ such that every disjoint family of open connected sets with total measure
//! below δ has oscillation sum below ε.

mod algebra;
mod certify;
mod falsify;
mod family;
mod function;
mod lipschitz;
mod standard;

pub use algebra::{ac_algebra_check, AlgebraOp, CertifiedFunction};
pub use certify::{
    analyze, certify_ac_integral, certify_ac_lipschitz, glue_verdicts, half_inv_sqrt_certificate, spot_check, AnalyzeConfig,
    GluePiece, SpotCheckSummary,
};
pub use falsify::{constancy_falsifier, falsify_ac, validate_witness, ConstancyOutcome, NullSet, Strategy, DEFAULT_DELTAS};
pub use family::{family_oscillation_sum, random_family, DisjointFamily};
pub use function::{
    cantor, embedded, embedded_dim, modulus_range, oscillation, oscillation_upper, FunctionSpec, GridDensity, IntegralMode,
};
pub use lipschitz::{estimate_local_lipschitz, LipschitzEstimate, ScaleMaximum};
pub use standard::{standard_ac_check, IntervalFamily, StandardAcReport, StandardVerdict, StandardWitness};

use serde::{Deserialize, Serialize};

/// How the truncation tail ∫(|f| − p)⁺ behaves as a function of the level p.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailProfile {
    /// Tail values at increasing levels; the last level has tail 0.
    Table { levels: Vec<(f64, f64)> },
    /// Density 1/(2√t) on (0, 1], whose tail at level p is 1/(4p).
    HalfInvSqrt,
}

impl TailProfile {
    /// Least tabulated level whose tail is below `threshold`.
    pub fn level_below(&self, threshold: f64) -> Option<(f64, f64)> {
        match self {
            TailProfile::Table { levels } => levels.iter().copied().find(|(_, t)| *t < threshold),
            TailProfile::HalfInvSqrt => {
                if !(threshold > 0.0) {
                    return None;
                }
                // Least integer p with 1/(4p) < threshold.
                let mut p = (1.0 / (4.0 * threshold)).floor().max(0.0) + 1.0;
                while p > 1.0 && 1.0 / (4.0 * (p - 1.0)) < threshold {
                    p -= 1.0;
                }
                Some((p, 1.0 / (4.0 * p)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DeltaRule {
    /// δ(ε) = slope·ε.
    Proportional {
        slope: f64,
    },
    /// δ(ε) = ε / (divisor·p) with p the least level whose tail is below share·ε.
    Truncation {
        divisor: f64,
        share: f64,
        profile: TailProfile,
    },
    /// δ(ε) = inner(factor·ε).
    EpsScaled {
        factor: f64,
        inner: Box<DeltaRule>,
    },
    Min {
        rules: Vec<DeltaRule>,
    },
    /// Any δ works.
    Unbounded,
}

impl DeltaRule {
    pub fn delta(&self, eps: f64) -> f64 {
        match self {
            DeltaRule::Proportional { slope } => slope * eps,
            DeltaRule::Truncation { divisor, share, profile } => match profile.level_below(share * eps) {
                Some((p, _)) if p > 0.0 => eps / (divisor * p),
                Some(_) => f64::INFINITY,
                None => 0.0,
            },
            DeltaRule::EpsScaled { factor, inner } => inner.delta(factor * eps),
            DeltaRule::Min { rules } => rules.iter().map(|r| r.delta(eps)).fold(f64::INFINITY, f64::min),
            DeltaRule::Unbounded => f64::INFINITY,
        }
    }

    /// ε/L, or unbounded for L = 0.
    pub fn lipschitz(l: f64) -> Self {
        if l == 0.0 {
            DeltaRule::Unbounded
        } else {
            DeltaRule::Proportional { slope: 1.0 / l }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    LocallyLipschitz { l: f64 },
    IntegralL1 { p: f64, tail: f64, mode: IntegralMode },
    Glued { pieces: Vec<GluedPiece> },
    LinearBounded { norm: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluedPiece {
    pub lo: f64,
    #[serde(with = "crate::serde_float")]
    pub hi: f64,
    pub certificate: Certificate,
    pub delta_rule: DeltaRule,
}

/// A P_δ family whose oscillation sum reaches ε.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub delta: f64,
    pub strategy: Strategy,
    pub family: DisjointFamily,
    pub oscillation_sum_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub eps: f64,
    #[serde(with = "crate::serde_float")]
    pub delta: f64,
    pub family_size: usize,
    pub total_measure_upper: f64,
    pub oscillation_sum_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AcVerdict {
    Certified { certificate: Certificate, delta_rule: DeltaRule, spot_checks: Vec<SpotCheck> },
    Falsified { eps: f64, witnesses: Vec<Witness> },
    Inconclusive { diagnostics: Vec<String>, partial: Vec<Witness> },
}

impl AcVerdict {
    pub fn inconclusive(msg: impl Into<String>) -> Self {
        AcVerdict::Inconclusive { diagnostics: vec![msg.into()], partial: Vec::new() }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, AcVerdict::Certified { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, AcVerdict::Falsified { .. })
    }

    pub fn delta_rule(&self) -> Option<&DeltaRule> {
        match self {
            AcVerdict::Certified { delta_rule, .. } => Some(delta_rule),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            AcVerdict::Certified { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// The Lipschitz-type constant of a certificate, when it has one.
    pub fn lipschitz_constant(&self) -> Option<f64> {
        match self.certificate()? {
            Certificate::LocallyLipschitz { l } => Some(*l),
            Certificate::LinearBounded { norm } => Some(*norm),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_rules() {
        assert_eq!(DeltaRule::lipschitz(5.0).delta(1.0), 0.2);
        assert_eq!(DeltaRule::lipschitz(0.0).delta(1.0), f64::INFINITY);
        let glued = DeltaRule::Min {
            rules: vec![
                DeltaRule::EpsScaled { factor: 0.5, inner: Box::new(DeltaRule::lipschitz(1.0)) },
                DeltaRule::EpsScaled { factor: 0.5, inner: Box::new(DeltaRule::lipschitz(4.0)) },
            ],
        };
        assert_eq!(glued.delta(1.0), 0.125);
    }

    #[test]
    fn half_inv_sqrt_levels() {
        // 1/(4p) < 0.05 first holds at p = 6.
        assert_eq!(TailProfile::HalfInvSqrt.level_below(0.05), Some((6.0, 1.0 / 24.0)));
        assert_eq!(TailProfile::HalfInvSqrt.level_below(0.3).unwrap().0, 1.0);
        let t = TailProfile::Table { levels: vec![(0.0, 0.5), (1.0, 0.1), (2.0, 0.0)] };
        assert_eq!(t.level_below(0.2), Some((1.0, 0.1)));
        assert_eq!(t.level_below(0.01), Some((2.0, 0.0)));
    }
}
