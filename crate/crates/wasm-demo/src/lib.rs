//! Browser bindings for three interactive views of the kernel on `S²`:
//! the kernel curve (closed form, series and ensemble estimate), the
//! same-cell collision curve, and a lat-lon map of the kernel smoother.
//!
//! The `*_impl` functions carry the logic and run natively; the exported
//! wrappers only convert errors for JavaScript.

use std::f64::consts::PI;

use mhk_core::kernels::{same_cell_probability, wrp_kernel_closed_form, wrp_kernel_series};
use mhk_core::partitions::{mc_kernel_estimate, same_cell, sample_arrangement_with_height};
use mhk_core::smoothing::kernel_smooth_regress;
use mhk_core::stats::sample_scalar;
use mhk_core::synthdata::{sample_labels, sample_points, LabelModel, SphereDistribution};
use mhk_core::{KernelSpec, LabeledDataset, RngStream, Sphere, SpherePoint, StreamKey, WrpConfig};
use wasm_bindgen::prelude::*;

const SERIES_TERMS: usize = 400;

fn err(e: mhk_core::Error) -> String {
    e.to_string()
}

/// `e₂` and the point at `angle` from it along `e₀`.
fn pair(angle: f64) -> (SpherePoint, SpherePoint) {
    let x = SpherePoint::north_pole(2).expect("d = 2");
    let z = SpherePoint::normalize(vec![angle.sin(), 0.0, angle.cos()]).expect("unit circle");
    (x, z)
}

fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCurve {
    angles: Vec<f64>,
    closed: Vec<f64>,
    series: Vec<f64>,
    mc_mean: Vec<f64>,
    mc_stderr: Vec<f64>,
}

#[wasm_bindgen]
impl KernelCurve {
    #[wasm_bindgen(getter)]
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn closed(&self) -> Vec<f64> {
        self.closed.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn series(&self) -> Vec<f64> {
        self.series.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mc_mean(&self) -> Vec<f64> {
        self.mc_mean.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mc_stderr(&self) -> Vec<f64> {
        self.mc_stderr.clone()
    }
}

/// Kernel values at `n_angles` angles spread over `[min_angle, π]`.
///
/// The ensemble estimate is skipped (NaN) where the estimator's variance is infinite.
pub fn kernel_curve_impl(
    q: f64,
    ratio: f64,
    min_angle: f64,
    n_angles: usize,
    n_mc: usize,
    seed: u64,
) -> Result<KernelCurve, String> {
    if !(min_angle > 0.0 && min_angle <= PI) {
        return Err(format!("min_angle must lie in (0, π], got {min_angle}"));
    }
    let cfg = WrpConfig::geometric(q, ratio, 2).map_err(err)?;
    let angles = grid(n_angles, min_angle, PI);
    let mut curve = KernelCurve {
        angles: angles.clone(),
        closed: Vec::new(),
        series: Vec::new(),
        mc_mean: Vec::new(),
        mc_stderr: Vec::new(),
    };
    let root = StreamKey::new(seed, 0).labeled("kernel-curve");
    for (i, &a) in angles.iter().enumerate() {
        curve
            .closed
            .push(wrp_kernel_closed_form(a, &cfg).map_err(err)?.value());
        curve.series.push(
            wrp_kernel_series(a, &cfg, SERIES_TERMS)
                .map_err(err)?
                .partial_sum,
        );
        if ratio > 1.0 - a / PI {
            let (x, z) = pair(a);
            let est = mc_kernel_estimate(&x, &z, &cfg, n_mc, root.child(i as u64)).map_err(err)?;
            curve.mc_mean.push(est.mean);
            curve.mc_stderr.push(est.stderr);
        } else {
            curve.mc_mean.push(f64::NAN);
            curve.mc_stderr.push(f64::NAN);
        }
    }
    Ok(curve)
}

#[wasm_bindgen]
pub fn kernel_curve(
    q: f64,
    ratio: f64,
    min_angle: f64,
    n_angles: usize,
    n_mc: usize,
    seed: u32,
) -> Result<KernelCurve, JsError> {
    kernel_curve_impl(q, ratio, min_angle, n_angles, n_mc, seed.into())
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionCurve {
    angles: Vec<f64>,
    empirical: Vec<f64>,
    theoretical: Vec<f64>,
}

#[wasm_bindgen]
impl CollisionCurve {
    #[wasm_bindgen(getter)]
    pub fn angles(&self) -> Vec<f64> {
        self.angles.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn empirical(&self) -> Vec<f64> {
        self.empirical.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn theoretical(&self) -> Vec<f64> {
        self.theoretical.clone()
    }
}

/// Same-cell frequency under `h` Gaussian hyperplanes at angles over `[0, π]`.
pub fn collision_curve_impl(
    h: usize,
    n_angles: usize,
    samples: usize,
    seed: u64,
) -> Result<CollisionCurve, String> {
    if samples < 2 {
        return Err("need at least 2 samples".into());
    }
    let angles = grid(n_angles, 0.0, PI);
    let root = StreamKey::new(seed, 0).labeled("collision-curve");
    let mut curve = CollisionCurve {
        angles: angles.clone(),
        empirical: Vec::new(),
        theoretical: Vec::new(),
    };
    for (i, &a) in angles.iter().enumerate() {
        let (x, z) = pair(a);
        let make = || {
            let (x, z) = (&x, &z);
            move |rng: &mut RngStream| {
                let w = sample_arrangement_with_height(2, h, rng);
                if same_cell(&w, x, z).expect("d = 2") {
                    1.0
                } else {
                    0.0
                }
            }
        };
        curve
            .empirical
            .push(sample_scalar(samples, root.child(i as u64), make).mean);
        curve
            .theoretical
            .push(same_cell_probability(a, h).map_err(err)?);
    }
    Ok(curve)
}

#[wasm_bindgen]
pub fn collision_curve(
    h: usize,
    n_angles: usize,
    samples: usize,
    seed: u32,
) -> Result<CollisionCurve, JsError> {
    collision_curve_impl(h, n_angles, samples, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    train_lon: Vec<f64>,
    train_lat: Vec<f64>,
    train_labels: Vec<f64>,
}

#[wasm_bindgen]
impl SmootherMap {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }
    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }
    /// Row-major smoother values; row 0 is the northernmost latitude.
    #[wasm_bindgen(getter)]
    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn train_lon(&self) -> Vec<f64> {
        self.train_lon.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn train_lat(&self) -> Vec<f64> {
        self.train_lat.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn train_labels(&self) -> Vec<f64> {
        self.train_labels.clone()
    }
}

fn from_lon_lat(lon: f64, lat: f64) -> SpherePoint {
    SpherePoint::normalize(vec![
        lat.cos() * lon.cos(),
        lat.cos() * lon.sin(),
        lat.sin(),
    ])
    .expect("unit vector")
}

fn label_model(name: &str) -> Result<LabelModel, String> {
    let axis = SpherePoint::north_pole(2).expect("d = 2");
    match name {
        "linear" => Ok(LabelModel::Linear { axis }),
        "threshold" => Ok(LabelModel::Threshold { axis }),
        "noise" => Ok(LabelModel::Constant { eta: 0.5 }),
        other => Err(format!(
            "unknown label model {other:?}; use linear, threshold or noise"
        )),
    }
}

/// The kernel smoother fitted to `n_train` uniform points, on an equirectangular grid.
pub fn smoother_map_impl(
    n_train: usize,
    q: f64,
    labels: &str,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<SmootherMap, String> {
    if n_train == 0 || width == 0 || height == 0 {
        return Err("n_train, width and height must be positive".into());
    }
    let model = label_model(labels)?;
    let spec = KernelSpec::power_law(Sphere { d: 2 }, q).map_err(err)?;
    let mut rng = RngStream::new(StreamKey::new(seed, 0).labeled("smoother-map"));
    let points = sample_points(&SphereDistribution::uniform(2), n_train, &mut rng).map_err(err)?;
    let ys = sample_labels(&points, &model, &mut rng);
    let data = LabeledDataset::new(points, ys).map_err(err)?;

    let mut values = Vec::with_capacity(width * height);
    for row in 0..height {
        let lat = PI / 2.0 - PI * (row as f64 + 0.5) / height as f64;
        for col in 0..width {
            let lon = -PI + 2.0 * PI * (col as f64 + 0.5) / width as f64;
            values.push(
                kernel_smooth_regress(&from_lon_lat(lon, lat), &data, &spec)
                    .map_err(err)?
                    .value,
            );
        }
    }
    let (mut train_lon, mut train_lat) = (Vec::new(), Vec::new());
    for p in data.points() {
        let c = p.coords();
        train_lon.push(c[1].atan2(c[0]));
        train_lat.push(c[2].clamp(-1.0, 1.0).asin());
    }
    Ok(SmootherMap {
        width,
        height,
        values,
        train_lon,
        train_lat,
        train_labels: data.labels().to_vec(),
    })
}

#[wasm_bindgen]
pub fn smoother_map(
    n_train: usize,
    q: f64,
    labels: &str,
    width: usize,
    height: usize,
    seed: u32,
) -> Result<SmootherMap, JsError> {
    smoother_map_impl(n_train, q, labels, width, height, seed.into()).map_err(|e| JsError::new(&e))
}
