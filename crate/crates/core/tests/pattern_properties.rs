use std::f64::consts::PI;

use proptest::prelude::*;
use selfmix_core::pattern::{
    read_pattern_csv, sample_pattern, theta_grid_deg, write_pattern_csv, PatternBand, PatternKind,
};
use selfmix_core::{
    beamwidth_3db, if_array_factor, self_mix_pattern, total_pattern, AnalyticPattern,
    ArrayGeometry, PatternGrid,
};

fn grid() -> Vec<f64> {
    theta_grid_deg(-90.0, 90.0, 1.0).unwrap()
}

fn gains_strategy() -> impl Strategy<Value = PatternGrid> {
    prop::collection::vec(0.0f64..2.0, 181)
        .prop_map(|g| PatternGrid::new(grid(), 0.0, g, 38e9).unwrap())
}

fn cos_q(q: f64) -> PatternGrid {
    let p = AnalyticPattern::new(PatternKind::CosQ { q }, 38e9).unwrap();
    sample_pattern(&p, &theta_grid_deg(-90.0, 90.0, 0.25).unwrap(), 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative_and_associative(a in gains_strategy(), b in gains_strategy(), c in gains_strategy()) {
        let ab = self_mix_pattern(&a, &b).unwrap();
        let ba = self_mix_pattern(&b, &a).unwrap();
        prop_assert_eq!(ab.gains(), ba.gains());
        let left = self_mix_pattern(&ab, &c).unwrap();
        let right = self_mix_pattern(&a, &self_mix_pattern(&b, &c).unwrap()).unwrap();
        for (x, y) in left.gains().iter().zip(right.gains()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn normalisation_commutes_with_product(a in gains_strategy(), b in gains_strategy()) {
        prop_assume!(a.max_gain() > 0.0 && b.max_gain() > 0.0);
        let p1 = self_mix_pattern(&a.normalized(), &b.normalized()).unwrap();
        let p2 = self_mix_pattern(&a, &b).unwrap();
        let ratios: Vec<f64> = p1
            .gains()
            .iter()
            .zip(p2.gains())
            .filter(|(_, y)| **y > 1e-12)
            .map(|(x, y)| x / y)
            .collect();
        if let Some(first) = ratios.first() {
            for r in &ratios {
                prop_assert!((r - first).abs() <= 1e-12 * first);
            }
        }
    }

    #[test]
    fn total_never_exceeds_self_mix(a in gains_strategy(), n in 1usize..=6, d in 0.005f64..0.1) {
        let g = ArrayGeometry::linear(n, d).unwrap();
        let t = total_pattern(&a, |dir| if_array_factor(&g, (38.5e9, 36e9), dir)).unwrap();
        for (x, y) in t.gains().iter().zip(a.gains()) {
            prop_assert!(*x <= y * (1.0 + 1e-12));
        }
    }

    #[test]
    fn beamwidth_is_scale_invariant(q in 0.5f64..20.0, s in 1e-3f64..1e3) {
        let p = cos_q(q);
        let a = beamwidth_3db(&p).unwrap();
        let b = beamwidth_3db(&p.scaled(s).unwrap()).unwrap();
        prop_assert!((a.width - b.width).abs() <= 1e-9);
    }
}

#[test]
fn analytic_shapes() {
    let iso = sample_pattern(&AnalyticPattern::isotropic(38e9), &grid(), 0.0).unwrap();
    assert!(iso.gains().iter().all(|&g| g == 1.0));
    let c2 = AnalyticPattern::new(PatternKind::CosQ { q: 2.0 }, 38e9).unwrap();
    let at60 = sample_pattern(&c2, &[-(PI / 3.0), PI / 3.0], 0.0).unwrap();
    assert!((at60.gains()[1] - 0.25).abs() < 1e-12);

    let tb = AnalyticPattern::new(
        PatternKind::TwoBeam { tilt: 30f64.to_radians(), width: 20f64.to_radians() },
        38e9,
    )
    .unwrap();
    let p = sample_pattern(&tb, &grid(), 0.0).unwrap();
    let mid = 90;
    assert!(p.gains()[mid] < p.gains()[mid - 1] && p.gains()[mid] < p.gains()[mid + 1]);
}

#[test]
fn pattern_products() {
    let iso = sample_pattern(&AnalyticPattern::isotropic(38e9), &grid(), 0.0).unwrap();
    assert!(self_mix_pattern(&iso, &iso).unwrap().gains().iter().all(|&g| g == 1.0));
    let c1 = sample_pattern(&AnalyticPattern::new(PatternKind::CosQ { q: 1.0 }, 38.5e9).unwrap(), &grid(), 0.0).unwrap();
    let c2 = sample_pattern(&AnalyticPattern::new(PatternKind::CosQ { q: 2.0 }, 37.5e9).unwrap(), &grid(), 0.0).unwrap();
    let sq = self_mix_pattern(&c1, &c1).unwrap();
    for (a, b) in sq.gains().iter().zip(c2.gains()) {
        assert!((a - b).abs() < 1e-12);
    }
    let zero = PatternGrid::new(grid(), 0.0, vec![0.0; 181], 37.5e9).unwrap();
    assert!(self_mix_pattern(&c1, &zero).unwrap().gains().iter().all(|&g| g == 0.0));
    let sm = self_mix_pattern(&c1, &c2).unwrap();
    assert_eq!(sm.band(), PatternBand::If);
    assert!((sm.frequency() - 1e9).abs() < 1.0);

    let unity = total_pattern(&sm, |_| 1.0).unwrap();
    assert_eq!(unity.gains(), sm.gains());
    let single = ArrayGeometry::linear(1, 0.032).unwrap();
    let one = total_pattern(&sm, |d| if_array_factor(&single, (38.5e9, 37.5e9), d)).unwrap();
    assert_eq!(one.gains(), sm.gains());
}

#[test]
fn beamwidth_reference_values() {
    let iso = sample_pattern(&AnalyticPattern::isotropic(38e9), &grid(), 0.0).unwrap();
    let b = beamwidth_3db(&iso).unwrap();
    assert!(b.no_crossing);
    assert!((b.width - PI).abs() < 1e-12);

    let w = beamwidth_3db(&cos_q(2.0)).unwrap();
    let exact = 2.0 * 2f64.powf(-0.25).acos();
    assert!((w.width - exact).abs() < 1e-3, "{}", w.width.to_degrees());
    assert!((w.width.to_degrees() - 65.53).abs() < 0.05);
    assert!(!w.no_crossing);
}

#[test]
fn csv_round_trip() {
    let p = cos_q(3.0);
    let mut buf = Vec::new();
    write_pattern_csv(&p, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("theta_deg,gain_db\n"));
    assert!(!text.contains('\r'));
    let back = read_pattern_csv(buf.as_slice(), 0.0, 38e9).unwrap();
    assert_eq!(back.len(), p.len());
    for (a, b) in back.gains().iter().zip(p.gains()) {
        assert!((a - b).abs() <= 1e-7 * b.max(1e-9) || (*a < 1e-9 && *b < 1e-9));
    }
}
