use faceflow_core::metrics::{compute_metrics, confusion_counts, losocv_aggregate};
use faceflow_core::strain::{strain_feature, strain_norm, strain_tensor};
use faceflow_core::FlowField;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_flow(seed: u64, h: usize, w: usize) -> FlowField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FlowField::from_fn(h, w, |_, _| {
        [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]
    })
    .unwrap()
}

fn labels() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..3, n),
            prop::collection::vec(0usize..3, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strain_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let (u, v) = (random_flow(s1, 9, 11), random_flow(s2, 9, 11));
        let mix = FlowField::from_fn(9, 11, |x, y| {
            let (p, q) = (u.get(x, y), v.get(x, y));
            [a * p[0] + b * q[0], a * p[1] + b * q[1]]
        })
        .unwrap();
        let (su, sv, sm) = (strain_tensor(&u), strain_tensor(&v), strain_tensor(&mix));
        for i in 0..sm.data().len() {
            for c in 0..3 {
                let want = a * su.data()[i][c] + b * sv.data()[i][c];
                prop_assert!((sm.data()[i][c] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn strain_norm_is_non_negative_and_zero_only_for_zero(seed in any::<u64>()) {
        let s = strain_tensor(&random_flow(seed, 6, 7));
        for (n, t) in strain_norm(&s).iter().zip(s.data()) {
            prop_assert!(*n >= 0.0);
            prop_assert_eq!(*n == 0.0, t.iter().all(|&c| c == 0.0));
        }
    }

    #[test]
    fn rigid_rotation_has_no_interior_strain(w in -2.0..2.0f64) {
        let f = FlowField::from_fn(16, 16, |x, y| [-w * y as f64, w * x as f64]).unwrap();
        let n = strain_norm(&strain_tensor(&f));
        for y in 0..15 {
            for x in 0..15 {
                prop_assert!(n[y * 16 + x] <= 1e-9);
            }
        }
    }

    #[test]
    fn single_label_micro_scores_equal_accuracy((t, p) in labels()) {
        let r = compute_metrics(&confusion_counts(&t, &p, 3).unwrap()).unwrap();
        let acc = t.iter().zip(&p).filter(|(a, b)| a == b).count() as f64 / t.len() as f64;
        prop_assert_eq!(r.micro_precision, r.micro_recall);
        prop_assert!((r.micro_recall - acc).abs() < 1e-12);
    }

    #[test]
    fn fold_invariants((t, p) in labels()) {
        let r = compute_metrics(&confusion_counts(&t, &p, 3).unwrap()).unwrap();
        for m in [r.macro_precision, r.macro_recall, r.macro_f1, r.micro_precision, r.micro_recall, r.micro_f1, r.g_mean] {
            prop_assert!((0.0..=1.0).contains(&m));
        }
        let pr = r.macro_precision + r.macro_recall;
        let hm = if pr == 0.0 { 0.0 } else { 2.0 * r.macro_precision * r.macro_recall / pr };
        prop_assert!((r.macro_f1 - hm).abs() < 1e-12);
        prop_assert!(r.g_mean <= r.macro_recall + 1e-12);
        let tp: u64 = r.counts.iter().map(|c| c.tp).sum();
        prop_assert_eq!(tp as usize, t.iter().zip(&p).filter(|(a, b)| a == b).count());
    }

    #[test]
    fn permutation_invariance((t, p) in labels(), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..t.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        let t2: Vec<_> = idx.iter().map(|&i| t[i]).collect();
        let p2: Vec<_> = idx.iter().map(|&i| p[i]).collect();
        let a = compute_metrics(&confusion_counts(&t, &p, 3).unwrap()).unwrap();
        let b = compute_metrics(&confusion_counts(&t2, &p2, 3).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn brute_force_counting_oracle() {
    let (t, p) = ([0usize, 0, 1, 2], [0usize, 1, 1, 2]);
    let c = confusion_counts(&t, &p, 3).unwrap();
    for k in 0..3 {
        let tp = t
            .iter()
            .zip(&p)
            .filter(|&(&a, &b)| a == k && b == k)
            .count() as u64;
        let fp = t
            .iter()
            .zip(&p)
            .filter(|&(&a, &b)| a != k && b == k)
            .count() as u64;
        let fn_ = t
            .iter()
            .zip(&p)
            .filter(|&(&a, &b)| a == k && b != k)
            .count() as u64;
        assert_eq!((c[k].tp, c[k].fp, c[k].fn_), (tp, fp, fn_));
    }
    let r = compute_metrics(&c).unwrap();
    assert!((r.macro_recall - 5.0 / 6.0).abs() < 1e-12);
    assert!((r.macro_precision - 5.0 / 6.0).abs() < 1e-12);
    assert!((r.micro_recall - 0.75).abs() < 1e-12);
    assert!((r.g_mean - 0.5f64.cbrt()).abs() < 1e-12);
}

#[test]
fn aggregation_is_an_arithmetic_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let folds: Vec<_> = (0..7)
        .map(|_| {
            let n = rng.gen_range(3..30);
            let t: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            let p: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            compute_metrics(&confusion_counts(&t, &p, 3).unwrap()).unwrap()
        })
        .collect();
    let agg = losocv_aggregate(&folds).unwrap();
    let mut f1 = 0.0;
    let mut recall = 0.0;
    for f in &folds {
        f1 += f.macro_f1;
        recall += f.macro_recall;
    }
    assert!((agg.macro_f1 - f1 / 7.0).abs() < 1e-15);
    assert!((agg.macro_recall - recall / 7.0).abs() < 1e-15);

    let single = losocv_aggregate(&folds[..1]).unwrap();
    assert_eq!(single, (&folds[0]).into());
    assert!(losocv_aggregate(&[]).is_err());
}

#[test]
fn two_fold_f1_mean() {
    let mut a = compute_metrics(&confusion_counts(&[0], &[0], 3).unwrap()).unwrap();
    let mut b = a.clone();
    a.macro_f1 = 0.8;
    b.macro_f1 = 0.6;
    assert_eq!(losocv_aggregate(&[a, b]).unwrap().macro_f1, 0.7);
}

#[test]
fn strain_feature_of_a_stretch() {
    let a = 0.3;
    let f = FlowField::from_fn(64, 64, |x, _| [a * x as f64, 0.0]).unwrap();
    let feat = strain_feature(&f, (28, 28)).unwrap();
    for y in 2..26 {
        for x in 2..26 {
            assert!((feat.get(x, y, 2) - a).abs() < 1e-9);
        }
    }
    let zero = strain_feature(&FlowField::zeros(10, 10).unwrap(), (28, 28)).unwrap();
    assert!(zero.data().iter().all(|&v| v == 0.0));
}
