//! Seeded synthetic data on `S^d` with known regression function and Bayes risk.
//!
//! Sampling algorithms, all driven by [`RngStream`] normals and uniforms:
//!
//! * uniform: normalize `d+1` standard normals;
//! * von Mises-Fisher, `d = 2`: `w = 1 + ln(u + (1-u)e^{-2κ})/κ` with
//!   `u ∈ (0, 1]` (inverse CDF of the cosine to the mean);
//! * von Mises-Fisher, other `d`: Wood's rejection scheme, with the
//!   `Beta(d/2, d/2)` proposal drawn as `S₁/(S₁+S₂)` where `S₁`, `S₂` are sums
//!   of `d` squared normals;
//!
//! then `x = w·μ + sqrt(1-w²)·v` with `v` a uniform unit tangent at `μ`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{dot, SpherePoint};
use crate::kernels::int_pow;
use crate::rng::RngStream;
use crate::stats::{McEstimate, Moments};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VmfComponent {
    pub mean: SpherePoint,
    pub kappa: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereDistribution {
    Uniform {
        d: usize,
    },
    VmfMixture {
        d: usize,
        components: Vec<VmfComponent>,
    },
}

impl SphereDistribution {
    pub fn uniform(d: usize) -> Self {
        SphereDistribution::Uniform { d }
    }

    pub fn vmf(mean: SpherePoint, kappa: f64) -> Result<Self> {
        let dist = SphereDistribution::VmfMixture {
            d: mean.dim(),
            components: vec![VmfComponent {
                mean,
                kappa,
                weight: 1.0,
            }],
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn dim(&self) -> usize {
        match self {
            SphereDistribution::Uniform { d } | SphereDistribution::VmfMixture { d, .. } => *d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SphereDistribution::Uniform { d } if *d >= 1 => Ok(()),
            SphereDistribution::Uniform { .. } => {
                Err(Error::invalid("sphere dimension must be at least 1"))
            }
            SphereDistribution::VmfMixture { d, components } => {
                if components.is_empty() {
                    return Err(Error::invalid("a mixture needs at least one component"));
                }
                let mut total = 0.0;
                for c in components {
                    check_dim(*d, c.mean.dim())?;
                    if !(c.kappa >= 0.0 && c.kappa.is_finite()) {
                        return Err(Error::invalid(format!(
                            "concentration must be finite and ≥ 0, got {}",
                            c.kappa
                        )));
                    }
                    if !(c.weight >= 0.0) {
                        return Err(Error::invalid(format!(
                            "mixture weight must be ≥ 0, got {}",
                            c.weight
                        )));
                    }
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::invalid(format!(
                        "mixture weights sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Density relative to the uniform distribution, `f_X(x) / f_uniform(x)`.
    pub fn density_ratio(&self, x: &SpherePoint) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        match self {
            SphereDistribution::Uniform { .. } => Ok(1.0),
            SphereDistribution::VmfMixture { d, components } => Ok(components
                .iter()
                .map(|c| {
                    let t = c.mean.dot(x);
                    c.weight * (c.kappa * (t - 1.0)).exp() / scaled_vmf_normalizer(c.kappa, *d)
                })
                .sum()),
        }
    }
}

/// `E_uniform[exp(κ(t - 1))]` for `t` the cosine to a fixed pole on `S^d`.
fn scaled_vmf_normalizer(kappa: f64, d: usize) -> f64 {
    if kappa == 0.0 {
        return 1.0;
    }
    if d == 2 {
        return -(-2.0 * kappa).exp_m1() / (2.0 * kappa);
    }
    // The polar angle θ has density ∝ sin^{d-1}θ; composite Simpson in θ.
    let n = 4096;
    let h = std::f64::consts::PI / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let theta = i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let s = int_pow(theta.sin(), d - 1);
        num += w * s * (kappa * (theta.cos() - 1.0)).exp();
        den += w * s;
    }
    num / den
}

fn uniform_point(d: usize, rng: &mut RngStream) -> SpherePoint {
    let mut v = vec![0.0; d + 1];
    loop {
        rng.fill_normal(&mut v);
        if let Ok(p) = SpherePoint::normalize(v.clone()) {
            return p;
        }
    }
}

/// Cosine `w = μ·x` of a vMF draw on `S^d`.
fn vmf_cosine(kappa: f64, d: usize, rng: &mut RngStream) -> f64 {
    if kappa == 0.0 && d == 2 {
        return 2.0 * rng.uniform() - 1.0;
    }
    if d == 2 {
        let u = rng.uniform_open0();
        return (1.0 + (u + (1.0 - u) * (-2.0 * kappa).exp()).ln() / kappa).clamp(-1.0, 1.0);
    }
    let m1 = d as f64;
    let b = m1 / ((4.0 * kappa * kappa + m1 * m1).sqrt() + 2.0 * kappa);
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + m1 * (1.0 - x0 * x0).ln();
    let chi2 = |rng: &mut RngStream| {
        (0..d)
            .map(|_| {
                let z = rng.standard_normal();
                z * z
            })
            .sum::<f64>()
    };
    loop {
        let s1 = chi2(rng);
        let s2 = chi2(rng);
        let z = s1 / (s1 + s2);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u = rng.uniform_open0();
        if kappa * w + m1 * (1.0 - x0 * w).ln() - c >= u.ln() {
            return w;
        }
    }
}

fn vmf_point(mean: &SpherePoint, kappa: f64, rng: &mut RngStream) -> SpherePoint {
    let d = mean.dim();
    let w = vmf_cosine(kappa, d, rng);
    let mu = mean.coords();
    let mut v = vec![0.0; d + 1];
    let tangent = loop {
        rng.fill_normal(&mut v);
        let along = dot(&v, mu);
        v.iter_mut().zip(mu).for_each(|(vi, m)| *vi -= along * m);
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            break v.iter().map(|vi| vi / n).collect::<Vec<_>>();
        }
    };
    let r = (1.0 - w * w).max(0.0).sqrt();
    let coords = mu
        .iter()
        .zip(&tangent)
        .map(|(m, t)| w * m + r * t)
        .collect();
    SpherePoint::normalize(coords).expect("vMF draw is a unit vector")
}

pub fn sample_points(
    dist: &SphereDistribution,
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<SpherePoint>> {
    dist.validate()?;
    Ok(match dist {
        SphereDistribution::Uniform { d } => (0..n).map(|_| uniform_point(*d, rng)).collect(),
        SphereDistribution::VmfMixture { components, .. } => (0..n)
            .map(|_| {
                let u = rng.uniform();
                let mut acc = 0.0;
                let pick = components
                    .iter()
                    .find(|c| {
                        acc += c.weight;
                        u < acc
                    })
                    .unwrap_or_else(|| components.last().expect("validated nonempty"));
                vmf_point(&pick.mean, pick.kappa, rng)
            })
            .collect(),
    })
}

/// Conditional law of a `±1` label: `P(Y = +1 | X = x) = η(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelModel {
    /// `η ≡ eta`.
    Constant { eta: f64 },
    /// `η(x) = (1 + x·axis)/2`.
    Linear { axis: SpherePoint },
    /// `η(x) = 1{x·axis ≥ 0}`: noiseless.
    Threshold { axis: SpherePoint },
}

impl LabelModel {
    pub fn eta(&self, x: &SpherePoint) -> f64 {
        let v = match self {
            LabelModel::Constant { eta } => *eta,
            LabelModel::Linear { axis } => 0.5 * (1.0 + axis.dot(x)),
            LabelModel::Threshold { axis } => {
                if axis.dot(x) >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// `m(x) = E[Y | X = x] = 2η(x) - 1`.
    pub fn regression(&self, x: &SpherePoint) -> f64 {
        2.0 * self.eta(x) - 1.0
    }

    /// `|Y| ≤ bound`.
    pub fn bound(&self) -> f64 {
        1.0
    }

    /// `E[min(η, 1-η)]` when it is known in closed form.
    pub fn analytic_bayes_risk(&self, dist: &SphereDistribution) -> Option<f64> {
        match (self, dist) {
            (LabelModel::Constant { eta }, _) => Some(eta.min(1.0 - eta).max(0.0)),
            (LabelModel::Threshold { .. }, _) => Some(0.0),
            // x·axis is uniform on [-1, 1] on S², and E[(1 - |t|)/2] = 1/4.
            (LabelModel::Linear { .. }, SphereDistribution::Uniform { d: 2 }) => Some(0.25),
            _ => None,
        }
    }
}

pub fn sample_labels(points: &[SpherePoint], model: &LabelModel, rng: &mut RngStream) -> Vec<f64> {
    points
        .iter()
        .map(|x| {
            if rng.uniform() < model.eta(x) {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

/// Monte Carlo estimate of `E[min(η(X), 1 - η(X))]`.
pub fn bayes_risk(
    dist: &SphereDistribution,
    model: &LabelModel,
    n_mc: usize,
    rng: &mut RngStream,
) -> Result<McEstimate> {
    if n_mc < 2 {
        return Err(Error::invalid("need at least 2 Monte Carlo samples"));
    }
    let pts = sample_points(dist, n_mc, rng)?;
    let m: Moments = pts
        .iter()
        .map(|x| {
            let e = model.eta(x);
            e.min(1.0 - e)
        })
        .collect();
    Ok(m.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamKey;

    fn rng(seed: u64) -> RngStream {
        RngStream::new(StreamKey::new(seed, 0))
    }

    #[test]
    fn uniform_mean_is_near_zero() {
        let n = 100_000;
        let pts = sample_points(&SphereDistribution::uniform(2), n, &mut rng(1)).unwrap();
        let mut mean = [0.0; 3];
        for p in &pts {
            mean.iter_mut()
                .zip(p.coords())
                .for_each(|(m, c)| *m += c / n as f64);
        }
        assert!(dot(&mean, &mean).sqrt() <= 0.02);
        assert!(pts
            .iter()
            .all(|p| (dot(p.coords(), p.coords()).sqrt() - 1.0).abs() <= 1e-12));
    }

    fn vmf_mean_cosine(d: usize, kappa: f64, seed: u64) -> f64 {
        let pole = SpherePoint::north_pole(d).unwrap();
        let dist = SphereDistribution::vmf(pole.clone(), kappa).unwrap();
        let n = 100_000;
        let pts = sample_points(&dist, n, &mut rng(seed)).unwrap();
        pts.iter().map(|p| p.dot(&pole)).sum::<f64>() / n as f64
    }

    #[test]
    fn vmf_first_moment_on_s2() {
        let kappa: f64 = 10.0;
        let expected = 1.0 / kappa.tanh() - 1.0 / kappa;
        assert!((vmf_mean_cosine(2, kappa, 2) - expected).abs() < 0.01);
    }

    #[test]
    fn vmf_rejection_sampler_first_moment() {
        // Mean cosine by quadrature over the polar angle, density ∝ sin^{d-1}θ·e^{κ cos θ}.
        let (d, kappa) = (4usize, 5.0f64);
        let n = 20_000;
        let h = std::f64::consts::PI / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let f = w * t.sin().powi(d as i32 - 1) * (kappa * t.cos()).exp();
            num += f * t.cos();
            den += f;
        }
        let expected = num / den;
        assert!((vmf_mean_cosine(d, kappa, 3) - expected).abs() < 0.01);
        // κ = 0 degenerates to uniform.
        assert!(vmf_mean_cosine(3, 0.0, 4).abs() < 0.02);
    }

    #[test]
    fn empty_sample() {
        assert!(
            sample_points(&SphereDistribution::uniform(3), 0, &mut rng(0))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn invalid_distributions_are_rejected() {
        let pole = SpherePoint::north_pole(2).unwrap();
        assert!(SphereDistribution::vmf(pole.clone(), -1.0).is_err());
        let bad = SphereDistribution::VmfMixture {
            d: 2,
            components: vec![VmfComponent {
                mean: pole,
                kappa: 1.0,
                weight: 0.5,
            }],
        };
        assert!(sample_points(&bad, 3, &mut rng(0)).is_err());
        assert!(SphereDistribution::uniform(0).validate().is_err());
    }

    #[test]
    fn density_ratio_integrates_to_one() {
        let pole = SpherePoint::north_pole(2).unwrap();
        for kappa in [0.0, 1.0, 10.0] {
            let dist = SphereDistribution::vmf(pole.clone(), kappa).unwrap();
            let pts = sample_points(&SphereDistribution::uniform(2), 200_000, &mut rng(5)).unwrap();
            let mean: f64 = pts
                .iter()
                .map(|p| dist.density_ratio(p).unwrap())
                .sum::<f64>()
                / pts.len() as f64;
            assert!((mean - 1.0).abs() < 0.05, "kappa {kappa}: {mean}");
        }
        // Quadrature path agrees with the closed form on S².
        for kappa in [0.5, 3.0, 40.0] {
            let closed = scaled_vmf_normalizer(kappa, 2);
            let n = 4096;
            let h = std::f64::consts::PI / n as f64;
            let (mut num, mut den) = (0.0, 0.0);
            for i in 0..=n {
                let t = i as f64 * h;
                let w = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                num += w * t.sin() * (kappa * (t.cos() - 1.0)).exp();
                den += w * t.sin();
            }
            assert!((num / den - closed).abs() < 1e-8 * closed);
        }
    }

    #[test]
    fn label_examples() {
        let pts = sample_points(&SphereDistribution::uniform(2), 1000, &mut rng(6)).unwrap();
        let ones = sample_labels(&pts, &LabelModel::Constant { eta: 1.0 }, &mut rng(7));
        assert!(ones.iter().all(|&y| y == 1.0));

        let n = 100_000;
        let pts = sample_points(&SphereDistribution::uniform(2), n, &mut rng(8)).unwrap();
        let ys = sample_labels(&pts, &LabelModel::Constant { eta: 0.5 }, &mut rng(9));
        let frac = ys.iter().filter(|&&y| y == 1.0).count() as f64 / n as f64;
        assert!((frac - 0.5).abs() <= 4.0 * 0.5 / (n as f64).sqrt());

        let north = SpherePoint::north_pole(2).unwrap();
        let model = LabelModel::Linear {
            axis: north.clone(),
        };
        let ys = sample_labels(&vec![north.clone(); 100], &model, &mut rng(10));
        assert!(ys.iter().all(|&y| y == 1.0));
        assert_eq!(model.regression(&north), 1.0);
        assert_eq!(model.regression(&north.antipode()), -1.0);
    }

    #[test]
    fn bayes_risk_examples() {
        let unif = SphereDistribution::uniform(2);
        let pole = SpherePoint::north_pole(2).unwrap();
        let r = bayes_risk(&unif, &LabelModel::Constant { eta: 1.0 }, 1000, &mut rng(1)).unwrap();
        assert_eq!(r.mean, 0.0);
        let r = bayes_risk(&unif, &LabelModel::Constant { eta: 0.5 }, 1000, &mut rng(1)).unwrap();
        assert_eq!(r.mean, 0.5);

        // Independent quadrature in the latitude variable t = cos θ, uniform on [-1, 1].
        let n = 10_000;
        let quad: f64 = (0..n)
            .map(|i| {
                let t = -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
                let eta: f64 = 0.5 * (1.0 + t);
                eta.min(1.0 - eta) * 0.5 * (2.0 / n as f64)
            })
            .sum();
        assert!((quad - 0.25).abs() < 1e-9);
        let model = LabelModel::Linear { axis: pole };
        assert_eq!(model.analytic_bayes_risk(&unif), Some(0.25));
        let r = bayes_risk(&unif, &model, 200_000, &mut rng(2)).unwrap();
        assert!((r.mean - quad).abs() <= 4.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let dist = SphereDistribution::vmf(SpherePoint::north_pole(3).unwrap(), 4.0).unwrap();
        let a = sample_points(&dist, 50, &mut rng(12)).unwrap();
        let b = sample_points(&dist, 50, &mut rng(12)).unwrap();
        assert_eq!(a, b);
    }
}
