mod common;

use common::{classify_at, enumerate_points, oracle_eer, random_instance, rng};
use multitarget::metrics::{
    det_points, stack_reduce, sweep_both, sweep_top_1, sweep_top_s, DetectorReport, OperatingPoint, StackScore,
    ThresholdPolicy, TrialLabel, Truth,
};
use multitarget::io::KeyEntry;
use multitarget::{evaluate_scores, ScoreMatrix};
use proptest::prelude::*;
use rand::Rng;

fn simple(blacklist: &[f64], background: &[f64]) -> (Vec<StackScore<f64>>, Vec<TrialLabel>) {
    let mut stack = Vec::new();
    let mut labels = Vec::new();
    for (i, &y) in blacklist.iter().enumerate() {
        stack.push(StackScore { y_star: y, h_star: 0 });
        labels.push(TrialLabel { utterance_id: format!("b{i}"), truth: Truth::Blacklist(0) });
    }
    for (i, &y) in background.iter().enumerate() {
        stack.push(StackScore { y_star: y, h_star: 0 });
        labels.push(TrialLabel { utterance_id: format!("n{i}"), truth: Truth::Background });
    }
    (stack, labels)
}

fn assert_matches_enumeration(report: &DetectorReport<f64>, stack: &[StackScore<f64>], labels: &[TrialLabel], top1: bool) {
    let oracle = enumerate_points(stack, labels, top1);
    assert_eq!(report.operating_points.len(), oracle.len());
    for (p, o) in report.operating_points.iter().zip(&oracle) {
        assert_eq!(p.theta, o.theta);
        assert_eq!((p.misses, p.false_alarms), (o.misses, o.false_alarms), "theta {}", o.theta);
    }
    assert!((report.eer - oracle_eer(&oracle)).abs() < 1e-9);
}

#[test]
fn sweeps_match_enumeration_with_and_without_ties() {
    let mut r = rng(11);
    for quantum in [0.0, 0.25] {
        for _ in 0..10 {
            let n = r.random_range(2..400);
            let s = r.random_range(1..20);
            let (stack, labels) = random_instance(&mut r, n, s, 0.4, quantum);
            let (ts, t1) = sweep_both(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
            assert_matches_enumeration(&ts, &stack, &labels, false);
            assert_matches_enumeration(&t1, &stack, &labels, true);
        }
    }
}

#[test]
fn top_1_matches_per_trial_classification_on_500_trials() {
    let mut r = rng(12);
    let (stack, labels) = random_instance(&mut r, 500, 20, 0.5, 0.0);
    let report = sweep_top_1(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
    for p in &report.operating_points {
        let o = classify_at(&stack, &labels, p.theta, true);
        assert_eq!(p.misses, o.misses);
        assert_eq!(p.false_alarms, o.false_alarms);
    }
}

#[test]
fn identical_score_sets_cross_at_the_median() {
    // With strict inequalities on both sides, the median score itself is
    // neither a miss nor a false alarm, so the rates meet at 4/9, not 1/2.
    let values: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let (stack, labels) = simple(&values, &values);
    let report = sweep_top_s(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
    let oracle = oracle_eer(&enumerate_points(&stack, &labels, false));
    assert!((oracle - 4.0 / 9.0).abs() < 1e-12);
    assert!((report.eer - oracle).abs() < 1e-9);
    assert_eq!(report.eer_threshold, 0.5);
}

#[test]
fn mirrored_scores_keep_the_eer() {
    // Negating every score and swapping the classes mirrors the curve.
    let mut r = rng(13);
    for _ in 0..10 {
        let bl: Vec<f64> = (0..r.random_range(1..60)).map(|_| r.random::<f64>() + 0.3).collect();
        let bg: Vec<f64> = (0..r.random_range(1..60)).map(|_| r.random::<f64>()).collect();
        let (s1, l1) = simple(&bl, &bg);
        let neg = |v: &[f64]| v.iter().map(|y| -y).collect::<Vec<_>>();
        let (s2, l2) = simple(&neg(&bg), &neg(&bl));
        let a = sweep_top_s(&s1, &l1, &ThresholdPolicy::Observed).unwrap();
        let b = sweep_top_s(&s2, &l2, &ThresholdPolicy::Observed).unwrap();
        assert!((a.eer - b.eer).abs() < 1e-12, "{} vs {}", a.eer, b.eer);
    }
}

#[test]
fn eer_at_threshold_sits_between_adjacent_rates() {
    let mut r = rng(14);
    let (stack, labels) = random_instance(&mut r, 300, 5, 0.5, 0.0);
    let rep = sweep_top_s(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
    let below = rep.operating_points.iter().rfind(|p| p.theta <= rep.eer_threshold).unwrap();
    let above = rep.operating_points.iter().find(|p| p.theta >= rep.eer_threshold).unwrap();
    let lo = below.p_miss.min(below.p_fa).min(above.p_miss.min(above.p_fa));
    let hi = below.p_miss.max(below.p_fa).max(above.p_miss.max(above.p_fa));
    assert!(lo - 1e-12 <= rep.eer && rep.eer <= hi + 1e-12);
}

#[test]
fn explicit_thresholds_are_evaluated_as_given() {
    let (stack, labels) = simple(&[0.6, 0.8], &[0.1, 0.7]);
    let policy = ThresholdPolicy::Explicit(vec![f64::NEG_INFINITY, 0.5, 0.7, f64::INFINITY]);
    let rep = sweep_top_s(&stack, &labels, &policy).unwrap();
    let counts: Vec<(usize, usize)> = rep.operating_points.iter().map(|p| (p.misses, p.false_alarms)).collect();
    assert_eq!(counts, vec![(0, 2), (0, 1), (1, 0), (2, 0)]);
}

fn polyline_distance(curve: &[OperatingPoint<f64>], p: &OperatingPoint<f64>) -> f64 {
    let (px, py) = (p.p_fa, p.p_miss);
    curve
        .windows(2)
        .map(|w| {
            let (ax, ay, bx, by) = (w[0].p_fa, w[0].p_miss, w[1].p_fa, w[1].p_miss);
            let (dx, dy) = (bx - ax, by - ay);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 { 0.0 } else { (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0) };
            let (cx, cy) = (ax + t * dx, ay + t * dy);
            (px - cx).abs().max((py - cy).abs())
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn det_down_sampling_stays_close_to_the_full_curve() {
    let mut r = rng(15);
    let (stack, labels) = random_instance(&mut r, 9_998, 1, 0.5, 0.0);
    let rep = sweep_top_s(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
    assert_eq!(rep.operating_points.len(), 10_000);
    let det = det_points(&rep, 100).unwrap();
    assert!(det.len() <= 100);
    assert_eq!(det.first(), rep.operating_points.first());
    assert_eq!(det.last(), rep.operating_points.last());
    assert!(det.windows(2).all(|w| w[0].theta < w[1].theta));
    let worst = rep.operating_points.iter().map(|p| polyline_distance(&det, p)).fold(0.0, f64::max);
    assert!(worst < 0.01, "max deviation {worst}");
}

#[test]
fn det_keeps_short_reports_and_rejects_tiny_budgets() {
    let (stack, labels) = simple(&[0.9], &[0.1]);
    let rep = sweep_top_s(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
    assert_eq!(rep.operating_points.len(), 4);
    assert_eq!(det_points(&rep, 10).unwrap(), rep.operating_points);
    assert!(det_points(&rep, 1).is_err());
}

#[test]
fn evaluate_scores_resolves_the_key_against_detector_ids() {
    let m = ScoreMatrix::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["s1".into(), "s2".into()],
        vec![0.9, 0.1, 0.2, 0.8, 0.3, 0.2],
    )
    .unwrap();
    let key = vec![
        KeyEntry { utterance_id: "c".into(), speaker_id: None },
        KeyEntry { utterance_id: "a".into(), speaker_id: Some("s1".into()) },
        KeyEntry { utterance_id: "b".into(), speaker_id: Some("s1".into()) },
    ];
    let ev = evaluate_scores(&m, &key).unwrap();
    // "b" is detected above "c" but attributed to s2.
    assert_eq!(ev.top_s.eer, 0.0);
    assert!(ev.top_1.eer > 0.0);
    let missing = vec![KeyEntry { utterance_id: "a".into(), speaker_id: None }];
    assert!(evaluate_scores(&m, &missing).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rates_are_monotone_and_top_1_dominates(seed in any::<u64>(), n in 2usize..300, s in 1usize..12, q in prop_oneof![Just(0.0), Just(0.5)]) {
        let mut r = rng(seed);
        let (stack, labels) = random_instance(&mut r, n, s, 0.5, q);
        let (ts, t1) = sweep_both(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
        for (a, b) in ts.operating_points.iter().zip(&t1.operating_points) {
            prop_assert_eq!(a.theta.to_bits(), b.theta.to_bits());
            prop_assert_eq!(a.false_alarms, b.false_alarms);
            prop_assert!(b.misses >= a.misses);
            prop_assert!((0.0..=1.0).contains(&a.p_miss) && (0.0..=1.0).contains(&a.p_fa));
        }
        for rep in [&ts, &t1] {
            for w in rep.operating_points.windows(2) {
                prop_assert!(w[0].misses <= w[1].misses);
                prop_assert!(w[0].false_alarms >= w[1].false_alarms);
            }
            prop_assert!((0.0..=1.0).contains(&rep.eer));
        }
        prop_assert!(t1.eer >= ts.eer - 1e-12);
    }

    #[test]
    fn eer_is_invariant_under_increasing_transforms(seed in any::<u64>(), n in 2usize..200) {
        let mut r = rng(seed);
        let (stack, labels) = random_instance(&mut r, n, 3, 0.5, 0.0);
        let warped: Vec<StackScore<f64>> = stack
            .iter()
            .map(|s| StackScore { y_star: (3.0 * s.y_star).exp() + 1.0, h_star: s.h_star })
            .collect();
        let a = sweep_top_1(&stack, &labels, &ThresholdPolicy::Observed).unwrap();
        let b = sweep_top_1(&warped, &labels, &ThresholdPolicy::Observed).unwrap();
        let counts = |r: &DetectorReport<f64>| r.operating_points.iter().map(|p| (p.misses, p.false_alarms)).collect::<Vec<_>>();
        prop_assert_eq!(counts(&a), counts(&b));
        prop_assert!((a.eer - b.eer).abs() < 1e-9);
    }

    #[test]
    fn stack_of_random_matrix_is_its_row_maximum(seed in any::<u64>(), t in 1usize..30, s in 1usize..30) {
        let mut r = rng(seed);
        let values: Vec<f64> = (0..t * s).map(|_| (r.random::<f64>() * 8.0).floor()).collect();
        let m = ScoreMatrix::new((0..t).map(|i| format!("t{i}")).collect(), (0..s).map(|i| format!("d{i}")).collect(), values.clone()).unwrap();
        for (row, st) in values.chunks(s).zip(stack_reduce(&m).unwrap()) {
            prop_assert_eq!(st.y_star, row.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            prop_assert_eq!(st.h_star, row.iter().position(|&y| y == st.y_star).unwrap());
        }
    }
}
