use proptest::prelude::*;
use tmslab_core::measure::{measure_of, nu_lower_connected, nu_upper, nu_upper_with_hints, CoverProposal, MeasureKind};
use tmslab_core::spaces::{diam_upper, CircleMetric, Norm, OpenSet, SpaceDescriptor};

const BUDGET: usize = 1000;

fn nu(space: &SpaceDescriptor, s: &OpenSet) -> f64 {
    nu_upper(space, s, BUDGET).unwrap().upper
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_on_nested_intervals(a in -5.0f64..5.0, len in 1e-3f64..4.0, shrink in 0.0f64..0.49) {
        let line = SpaceDescriptor::real_line();
        let outer = OpenSet::interval(a, a + len);
        let inner = OpenSet::interval(a + shrink * len, a + (1.0 - shrink) * len);
        let big = nu_upper(&line, &outer, BUDGET).unwrap();
        let small = nu_upper_with_hints(&line, &inner, BUDGET, &[big.cover().unwrap().clone()]).unwrap();
        prop_assert!(small.upper <= big.upper + 1e-9);
    }

    #[test]
    fn monotone_on_nested_balls(x in -3.0f64..3.0, y in -3.0f64..3.0, r in 1e-2f64..2.0, k in 0.05f64..1.0) {
        let plane = SpaceDescriptor::euclidean(2, Norm::L2);
        let outer = OpenSet::ball(vec![x, y], r);
        let inner = OpenSet::ball(vec![x + 0.5 * (1.0 - k) * r, y], k * r * 0.5);
        let big = nu_upper(&plane, &outer, BUDGET).unwrap();
        let small = nu_upper_with_hints(&plane, &inner, BUDGET, &[big.cover().unwrap().clone()]).unwrap();
        prop_assert!(small.upper <= big.upper + 1e-9);
    }

    #[test]
    fn subadditive_on_finite_unions(starts in prop::collection::vec((-5.0f64..5.0, 1e-3f64..1.0), 1..6)) {
        let line = SpaceDescriptor::real_line();
        let parts: Vec<OpenSet> = starts.iter().map(|(a, l)| OpenSet::interval(*a, a + l)).collect();
        let ests: Vec<_> = parts.iter().map(|p| nu_upper(&line, p, BUDGET).unwrap()).collect();
        let covers: Vec<CoverProposal> = ests.iter().map(|e| e.cover().unwrap().clone()).collect();
        let joint = CoverProposal::concat(&line, &covers).unwrap();
        let u = nu_upper_with_hints(&line, &OpenSet::union(parts), BUDGET, &[joint]).unwrap();
        let sum: f64 = ests.iter().map(|e| e.upper).sum();
        prop_assert!(u.upper <= sum + 1e-9);
    }

    #[test]
    fn diameter_identity(kind in 0usize..3, c in -3.0f64..3.0, size in 1e-3f64..2.5) {
        let (space, s) = match kind {
            0 => (SpaceDescriptor::real_line(), OpenSet::interval(c, c + size)),
            1 => (SpaceDescriptor::circle(CircleMetric::Arc), OpenSet::arc(c, c + size)),
            _ => (SpaceDescriptor::euclidean(2, Norm::L2), OpenSet::ball(vec![c, -c], size / 2.0)),
        };
        let m = measure_of(&space, MeasureKind::DiamOuter, &s, BUDGET).unwrap();
        let d = diam_upper(&space, &s).unwrap();
        prop_assert!(m.lower <= m.upper);
        prop_assert!((m.upper - d).abs() <= 1e-6 && (m.lower - d).abs() <= 1e-6, "{:?} vs {}", m, d);
    }

    #[test]
    fn chaining_lower_never_exceeds_upper(c in -3.0f64..3.0, size in 1e-3f64..3.0, budget in prop::sample::select(vec![10usize, 100, 1000])) {
        let space = SpaceDescriptor::circle(CircleMetric::Arc);
        let s = OpenSet::arc(c, c + size);
        let lo = nu_lower_connected(&space, &s).unwrap().lower;
        prop_assert!(lo <= nu_upper(&space, &s, budget).unwrap().upper + 1e-12);
    }
}

#[test]
fn empty_set_has_measure_zero() {
    for space in [SpaceDescriptor::real_line(), SpaceDescriptor::plane(), SpaceDescriptor::circle(CircleMetric::Chord)] {
        assert_eq!(nu(&space, &OpenSet::Empty), 0.0);
        for kind in [MeasureKind::DiamOuter, MeasureKind::Lebesgue] {
            if kind.supports(&space) {
                let m = measure_of(&space, kind, &OpenSet::Empty, 10).unwrap();
                assert_eq!((m.lower, m.upper), (0.0, 0.0));
            }
        }
    }
}

#[test]
fn bracket_width_shrinks_with_budget() {
    let cases = [
        (SpaceDescriptor::real_line(), OpenSet::interval(0.0, 0.7)),
        (SpaceDescriptor::circle(CircleMetric::Arc), OpenSet::arc(1.0, 2.5)),
        (SpaceDescriptor::euclidean(2, Norm::L2), OpenSet::ball(vec![0.0, 0.0], 0.4)),
    ];
    for (space, s) in &cases {
        let widths: Vec<f64> =
            [10, 100, 1000].iter().map(|b| measure_of(space, MeasureKind::DiamOuter, s, *b).unwrap().width()).collect();
        assert!(widths.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{widths:?}");
        assert!(widths[2] <= 1e-6, "{widths:?}");
    }
}
