use mammotex_core::classify::{
    ClassifierConfig, ClassifierKind, Dataset, FitModel, MembershipInit, Sample,
};
use mammotex_core::eval::{loocv, MALIGNANT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Dataset {
    let samples = (0..n)
        .map(|i| {
            let label = if rng.random_bool(0.5) {
                "benign"
            } else {
                "malignant"
            };
            let features = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
            Sample::new(format!("s{i:04}"), features, label)
        })
        .collect();
    Dataset::with_classes(
        (0..dim).map(|d| format!("f{d}")).collect(),
        samples,
        vec!["benign".into(), "malignant".into()],
    )
    .unwrap()
}

fn query(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-6.0..6.0)).collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Sorts every training sample by (distance, id) and keeps the first k.
fn brute_force(ds: &Dataset, x: &[f64], k: usize) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = ds
        .samples()
        .iter()
        .map(|s| (s.id.clone(), euclid(&s.features, x)))
        .collect();
    all.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

#[test]
fn kneighbors_matches_exhaustive_sort() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ds = random_dataset(&mut rng, 50, 2);
    let model = FitModel::fit(
        &ds,
        ClassifierConfig::new(ClassifierKind::Knn, 5).with_normalize(false),
    )
    .unwrap();
    for _ in 0..100 {
        let x = query(&mut rng, 2);
        for k in [1, 5, 60] {
            let got: Vec<(String, f64)> = model
                .kneighbors(&x, k, None)
                .unwrap()
                .iter()
                .map(|n| (n.id.to_string(), n.distance))
                .collect();
            assert_eq!(got, brute_force(&ds, &x, k));
        }
    }
}

#[test]
fn knn_matches_voting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ds = random_dataset(&mut rng, 200, 5);
    for k in [1, 3, 5, 8] {
        let model = FitModel::fit(
            &ds,
            ClassifierConfig::new(ClassifierKind::Knn, k).with_normalize(false),
        )
        .unwrap();
        for _ in 0..50 {
            let x = query(&mut rng, 5);
            let near = brute_force(&ds, &x, k);
            let mut votes = [0usize; 2];
            let mut dist = [0.0f64; 2];
            for (id, d) in &near {
                let c = ds.class_index(&ds.sample(id).unwrap().label).unwrap();
                votes[c] += 1;
                dist[c] += d;
            }
            let expected = if votes[1] > votes[0] || (votes[1] == votes[0] && dist[1] < dist[0]) {
                1
            } else {
                0
            };
            let p = model.predict(&x).unwrap();
            assert_eq!(p.label_index, expected);
            assert_eq!(p.scores[1], votes[1] as f64 / k as f64);
        }
    }
}

#[test]
fn scores_are_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let ds = random_dataset(&mut rng, 100, 4);
    for kind in ClassifierKind::ALL {
        for init in [MembershipInit::Crisp, MembershipInit::Keller] {
            let model = FitModel::fit(&ds, ClassifierConfig::new(kind, 5).with_init(init)).unwrap();
            for _ in 0..200 {
                let p = model.predict(&query(&mut rng, 4)).unwrap();
                assert!((p.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(p.scores.iter().all(|s| (0.0..=1.0).contains(s)));
                let max = p.scores.iter().cloned().fold(f64::MIN, f64::max);
                if kind != ClassifierKind::Knn {
                    let first = p.scores.iter().position(|&s| s == max).unwrap();
                    assert_eq!(p.label_index, first, "{kind}");
                } else {
                    assert_eq!(p.scores[p.label_index], max);
                }
            }
        }
    }
}

#[test]
fn uniform_scaling_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ds = random_dataset(&mut rng, 80, 3);
    let scaled = ds.scaled(7.3);
    for normalize in [false, true] {
        for kind in ClassifierKind::ALL {
            let cfg = ClassifierConfig::new(kind, 4).with_normalize(normalize);
            let a = FitModel::fit(&ds, cfg).unwrap();
            let b = FitModel::fit(&scaled, cfg).unwrap();
            for _ in 0..100 {
                let x = query(&mut rng, 3);
                let xs: Vec<f64> = x.iter().map(|v| v * 7.3).collect();
                let (pa, pb) = (a.predict(&x).unwrap(), b.predict(&xs).unwrap());
                assert_eq!(pa.label, pb.label, "{kind}");
                if matches!(kind, ClassifierKind::Fknn | ClassifierKind::Fknne) {
                    for (u, v) in pa.scores.iter().zip(&pb.scores) {
                        assert!((u - v).abs() < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn training_order_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ds = random_dataset(&mut rng, 60, 2);
    let mut shuffled = ds.samples().to_vec();
    shuffled.reverse();
    shuffled.rotate_left(17);
    let permuted =
        Dataset::with_classes(ds.feature_names().to_vec(), shuffled, ds.classes().to_vec())
            .unwrap();
    for kind in ClassifierKind::ALL {
        let cfg = ClassifierConfig::new(kind, 3);
        let a = FitModel::fit(&ds, cfg).unwrap();
        let b = FitModel::fit(&permuted, cfg).unwrap();
        for _ in 0..100 {
            let x = query(&mut rng, 2);
            assert_eq!(a.predict(&x).unwrap(), b.predict(&x).unwrap());
        }
    }
}

#[test]
fn k1_crisp_all_agree_with_nearest() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let ds = random_dataset(&mut rng, 40, 3);
    let models: Vec<FitModel> = ClassifierKind::ALL
        .iter()
        .map(|&kind| {
            let cfg = ClassifierConfig::new(kind, 1)
                .with_init(MembershipInit::Crisp)
                .with_normalize(false);
            FitModel::fit(&ds, cfg).unwrap()
        })
        .collect();
    for _ in 0..200 {
        let x = query(&mut rng, 3);
        let near = brute_force(&ds, &x, 2);
        if near[0].1 == near[1].1 {
            continue;
        }
        let expected = &ds.sample(&near[0].0).unwrap().label;
        for m in &models {
            assert_eq!(
                &m.predict(&x).unwrap().label,
                expected,
                "{}",
                m.config().kind
            );
        }
    }
}

#[test]
fn keller_memberships_are_distributions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ds = random_dataset(&mut rng, 50, 2);
    let model = FitModel::fit(&ds, ClassifierConfig::new(ClassifierKind::Fknne, 5)).unwrap();
    for (j, s) in model.training().samples().iter().enumerate() {
        let u = model.membership(j);
        assert!((u.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(u.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(u[model.training().class_index(&s.label).unwrap()] >= 0.51);
    }
}

#[test]
fn loocv_wiring_matches_manual_leave_out() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ds = random_dataset(&mut rng, 30, 2);
    for kind in ClassifierKind::ALL {
        let cfg = ClassifierConfig::new(kind, 3);
        let report = loocv(&ds, &cfg, MALIGNANT).unwrap();
        for held in &report.predictions {
            let rest: Vec<&str> = ds
                .samples()
                .iter()
                .map(|s| s.id.as_str())
                .filter(|id| *id != held.id)
                .collect();
            let model = FitModel::fit(&ds.subset(&rest).unwrap(), cfg).unwrap();
            let manual = model
                .predict(&ds.sample(&held.id).unwrap().features)
                .unwrap();
            assert_eq!(manual, held.prediction);
        }
    }
}

#[test]
fn fknne_can_disagree_with_knne_under_keller() {
    // a lone A sample sits inside B territory, so its Keller membership in A
    // is low while its distance to the query is small
    let ds = Dataset::new(
        vec!["x".into()],
        vec![
            Sample::new("a0", vec![1.1], "A"),
            Sample::new("a1", vec![-5.0], "A"),
            Sample::new("a2", vec![-5.2], "A"),
            Sample::new("b0", vec![0.88], "B"),
            Sample::new("b1", vec![1.2], "B"),
            Sample::new("b2", vec![1.25], "B"),
        ],
    )
    .unwrap();
    let base = ClassifierConfig::new(ClassifierKind::Knne, 1).with_normalize(false);
    let knne = FitModel::fit(&ds, base).unwrap().predict(&[1.0]).unwrap();
    let fknne = FitModel::fit(
        &ds,
        ClassifierConfig {
            kind: ClassifierKind::Fknne,
            k_init: Some(3),
            ..base
        },
    )
    .unwrap()
    .predict(&[1.0])
    .unwrap();
    assert_eq!(knne.label, "A");
    assert_eq!(fknne.label, "B");
}
