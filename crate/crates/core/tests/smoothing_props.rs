use mhk_core::geometry::Euclidean;
use mhk_core::rng::{RngStream, StreamKey};
use mhk_core::smoothing::{ensemble_classify, kernel_smooth_regress, sgn, Branch};
use mhk_core::synthdata::{sample_points, SphereDistribution};
use mhk_core::{KernelSpec, LabeledDataset, Manifold, Sphere, SpherePoint, WrpConfig};
use proptest::prelude::*;

fn kernels() -> Vec<KernelSpec<Sphere>> {
    vec![
        KernelSpec::manifold_hilbert(Sphere { d: 2 }).unwrap(),
        KernelSpec::wrp(WrpConfig::geometric(-2.0, 0.9, 2).unwrap()).unwrap(),
        KernelSpec::power_law(Sphere { d: 2 }, -0.7).unwrap(),
        KernelSpec::power_law(Sphere { d: 2 }, -6.0).unwrap(),
    ]
}

fn dataset(n: usize, seed: u64) -> LabeledDataset<SpherePoint> {
    let mut rng = RngStream::new(StreamKey::new(seed, 0));
    let pts = sample_points(&SphereDistribution::uniform(2), n, &mut rng).unwrap();
    let labels = (0..n).map(|_| 4.0 * rng.uniform() - 2.0).collect();
    LabeledDataset::new(pts, labels).unwrap()
}

fn queries(n: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = RngStream::new(StreamKey::new(seed, 1));
    sample_points(&SphereDistribution::uniform(2), n, &mut rng).unwrap()
}

#[test]
fn interpolates_exactly_for_every_singular_kernel() {
    for seed in 0..5 {
        let data = dataset(50, seed);
        for k in kernels() {
            for (x, y) in data.iter() {
                let est = kernel_smooth_regress(x, &data, &k).unwrap();
                assert_eq!(est.branch, Branch::Interpolation);
                assert_eq!(est.value, y);
                assert_eq!(ensemble_classify(x, &data, &k).unwrap(), sgn(y));
            }
        }
    }
}

#[test]
fn estimates_lie_in_the_label_range() {
    let data = dataset(30, 7);
    let (lo, hi) = data
        .labels()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| {
            (a.min(y), b.max(y))
        });
    for k in kernels() {
        for q in queries(200, 7) {
            let v = kernel_smooth_regress(&q, &data, &k).unwrap().value;
            assert!(lo <= v && v <= hi);
        }
    }
}

#[test]
fn label_affine_maps_commute_with_the_estimate() {
    let data = dataset(25, 8);
    for k in kernels() {
        for q in queries(50, 8) {
            let base = kernel_smooth_regress(&q, &data, &k).unwrap().value;
            for c in [2.0, -0.5, 8.0] {
                let scaled = LabeledDataset::new(
                    data.points().to_vec(),
                    data.labels().iter().map(|y| c * y).collect(),
                )
                .unwrap();
                assert_eq!(
                    kernel_smooth_regress(&q, &scaled, &k).unwrap().value,
                    c * base
                );
            }
            let shifted = LabeledDataset::new(
                data.points().to_vec(),
                data.labels().iter().map(|y| y + 3.0).collect(),
            )
            .unwrap();
            let v = kernel_smooth_regress(&q, &shifted, &k).unwrap().value;
            assert!((v - (base + 3.0)).abs() <= 1e-12);
        }
    }
}

#[test]
fn permutation_leaves_estimates_unchanged() {
    let data = dataset(40, 9);
    let n = data.len();
    let order: Vec<usize> = (0..n).map(|i| (i * 17 + 5) % n).collect();
    let shuffled = LabeledDataset::new(
        order.iter().map(|&i| data.points()[i].clone()).collect(),
        order.iter().map(|&i| data.labels()[i]).collect(),
    )
    .unwrap();
    for k in kernels() {
        for q in queries(100, 9).iter().chain(data.points()) {
            assert_eq!(
                kernel_smooth_regress(q, &data, &k).unwrap(),
                kernel_smooth_regress(q, &shuffled, &k).unwrap()
            );
            assert_eq!(
                ensemble_classify(q, &data, &k).unwrap(),
                ensemble_classify(q, &shuffled, &k).unwrap()
            );
        }
    }
}

#[test]
fn classifier_agrees_with_the_sign_of_the_regressor() {
    for seed in 0..10 {
        let mut rng = RngStream::new(StreamKey::new(seed, 3));
        let pts = sample_points(&SphereDistribution::uniform(2), 5, &mut rng).unwrap();
        let labels = (0..5)
            .map(|_| if rng.uniform() < 0.5 { 1.0 } else { -1.0 })
            .collect();
        let data = LabeledDataset::new(pts, labels).unwrap();
        for k in kernels() {
            for q in queries(100, 100 + seed) {
                let m = kernel_smooth_regress(&q, &data, &k).unwrap();
                assert_eq!(m.branch, Branch::Ratio);
                assert_eq!(sgn(m.value), ensemble_classify(&q, &data, &k).unwrap());
            }
        }
    }
}

#[test]
fn euclidean_hilbert_kernel_interpolates() {
    let e = Euclidean { d: 3 };
    let k = KernelSpec::manifold_hilbert(e).unwrap();
    let mut rng = RngStream::new(StreamKey::new(5, 5));
    let pts: Vec<Vec<f64>> = (0..30)
        .map(|_| (0..3).map(|_| rng.uniform()).collect())
        .collect();
    let labels: Vec<f64> = pts.iter().map(|p| p[0] - p[2]).collect();
    let data = LabeledDataset::new(pts.clone(), labels.clone()).unwrap();
    for (p, y) in pts.iter().zip(&labels) {
        assert_eq!(kernel_smooth_regress(p, &data, &k).unwrap().value, *y);
    }
    assert_eq!(e.dim(), 3);
}

proptest! {
    #[test]
    fn sign_agreement_on_random_datasets(
        seed in 0u64..10_000,
        n in 1usize..12,
        q in -6.0f64..-0.1,
    ) {
        let mut rng = RngStream::new(StreamKey::new(seed, 9));
        let pts = sample_points(&SphereDistribution::uniform(2), n + 1, &mut rng).unwrap();
        let labels = (0..n).map(|_| if rng.uniform() < 0.5 { 1.0 } else { -1.0 }).collect();
        let data = LabeledDataset::new(pts[..n].to_vec(), labels).unwrap();
        let k = KernelSpec::power_law(Sphere { d: 2 }, q).unwrap();
        let m = kernel_smooth_regress(&pts[n], &data, &k).unwrap();
        prop_assert_eq!(sgn(m.value), ensemble_classify(&pts[n], &data, &k).unwrap());
    }
}
