//! Shared fixtures for the criterion benches.

use tmslab_core::measure::MeasureKind;
use tmslab_core::spaces::{CircleMetric, Norm, SpaceDescriptor};
use tmslab_core::tms::TmsInstance;

pub fn line() -> TmsInstance {
    TmsInstance::new(SpaceDescriptor::real_line(), MeasureKind::Lebesgue).expect("Lebesgue measure on the line")
}

pub fn plane_diam() -> TmsInstance {
    TmsInstance::new(SpaceDescriptor::euclidean(2, Norm::L2), MeasureKind::DiamOuter).expect("diameter measure on the plane")
}

pub fn circle_diam() -> TmsInstance {
    TmsInstance::new(SpaceDescriptor::circle(CircleMetric::Arc), MeasureKind::DiamOuter).expect("diameter measure on the circle")
}

/// A dense n x n matrix with entries in [-1, 1], fixed so runs compare.
pub fn matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| (((i * 7 + j * 3) % 11) as f64 / 5.0) - 1.0).collect()).collect()
}
