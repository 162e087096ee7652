//! Geometry of the round sphere `S^d ⊂ R^{d+1}` and of flat `R^d`.
//!
//! Points of `S^d` are stored in ambient coordinates. Tangent vectors at `x`
//! are ambient vectors orthogonal to `x`, scaled so that their norm is a
//! geodesic length in radians.
//!
//! The logarithm is a right inverse of the exponential everywhere, including
//! the cut locus: the antipode `-x` is sent to `π·u₀(x)`, where `u₀(x)` is the
//! normalized tangent projection of the standard basis vector on which `x` has
//! the smallest absolute coordinate (ties go to the lowest index).

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Inputs whose norm lies within this distance of 1 are renormalized on construction.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Maximum `|⟨x, v⟩|` accepted for a tangent vector `v` at `x`.
pub const TANGENCY_TOLERANCE: f64 = 1e-10;

/// The log map takes the antipodal branch when `x·ξ < 0` and the component
/// of `ξ` orthogonal to `x` is shorter than this.
pub const ANTIPODE_TOLERANCE: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A unit vector in `R^{d+1}`, i.e. a point of `S^d` with `d ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Accepts vectors whose norm is within [`NORM_TOLERANCE`] of 1 and
    /// renormalizes them.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid(format!(
                "a sphere point needs at least 2 ambient coordinates, got {}",
                coords.len()
            )));
        }
        let n = norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotUnitNorm(n));
        }
        Ok(Self::scaled(coords, n))
    }

    /// Projects any nonzero finite vector radially onto the sphere.
    pub fn normalize(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid(
                "a sphere point needs at least 2 ambient coordinates",
            ));
        }
        let n = norm(&coords);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotUnitNorm(n));
        }
        Ok(Self::scaled(coords, n))
    }

    fn scaled(mut coords: Vec<f64>, n: f64) -> Self {
        // Leave already-normalized input bit-for-bit intact.
        if (n - 1.0).abs() > 1e-14 {
            coords.iter_mut().for_each(|c| *c /= n);
        }
        Self { coords }
    }

    /// The standard basis vector `e_i` of `R^{d+1}`.
    pub fn basis(d: usize, i: usize) -> Result<Self> {
        if d == 0 || i > d {
            return Err(Error::invalid(format!(
                "basis vector e_{i} does not exist on S^{d}"
            )));
        }
        let mut coords = vec![0.0; d + 1];
        coords[i] = 1.0;
        Ok(Self { coords })
    }

    /// The last basis vector, used as the "north pole".
    pub fn north_pole(d: usize) -> Result<Self> {
        Self::basis(d, d)
    }

    /// Intrinsic dimension `d`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        dot(&self.coords, &other.coords)
    }
}

impl TryFrom<Vec<f64>> for SpherePoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<SpherePoint> for Vec<f64> {
    fn from(p: SpherePoint) -> Self {
        p.coords
    }
}

/// An element of the tangent space `T_x S^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: SpherePoint,
    vec: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: SpherePoint, vec: Vec<f64>) -> Result<Self> {
        check_dim(base.coords.len(), vec.len())?;
        let inner = dot(&base.coords, &vec);
        if !inner.is_finite() || inner.abs() > TANGENCY_TOLERANCE {
            return Err(Error::NotTangent(inner));
        }
        Ok(Self { base, vec })
    }

    /// Removes the normal component of `vec` at `base`.
    pub fn project(base: SpherePoint, mut vec: Vec<f64>) -> Result<Self> {
        check_dim(base.coords.len(), vec.len())?;
        let inner = dot(&base.coords, &vec);
        vec.iter_mut()
            .zip(&base.coords)
            .for_each(|(v, x)| *v -= inner * x);
        Ok(Self { base, vec })
    }

    pub fn zero(base: SpherePoint) -> Self {
        let vec = vec![0.0; base.coords.len()];
        Self { base, vec }
    }

    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn vec(&self) -> &[f64] {
        &self.vec
    }

    /// Riemannian norm, which equals the length of the geodesic `t ↦ exp(t·v)`, `t ∈ [0, 1]`.
    pub fn norm(&self) -> f64 {
        norm(&self.vec)
    }
}

/// Arc-length distance on `S^d`, in `[0, π]`.
///
/// Evaluated as `2·atan2(‖x − z‖, ‖x + z‖)`, which equals `arccos(x·z)` but
/// keeps full relative precision near 0 and π.
pub fn geodesic_distance(x: &SpherePoint, z: &SpherePoint) -> Result<f64> {
    check_dim(x.coords.len(), z.coords.len())?;
    let (mut diff, mut sum) = (0.0, 0.0);
    for (a, b) in x.coords.iter().zip(&z.coords) {
        diff += (a - b) * (a - b);
        sum += (a + b) * (a + b);
    }
    Ok(2.0 * diff.sqrt().atan2(sum.sqrt()))
}

/// `exp_x(v) = cos(‖v‖)·x + sin(‖v‖)·v/‖v‖`.
pub fn exp_map(x: &SpherePoint, v: &TangentVector) -> Result<SpherePoint> {
    check_dim(x.coords.len(), v.vec.len())?;
    if v.base != *x {
        return Err(Error::BaseMismatch);
    }
    let len = v.norm();
    if len == 0.0 {
        return Ok(x.clone());
    }
    let (s, c) = len.sin_cos();
    let coords = x
        .coords
        .iter()
        .zip(&v.vec)
        .map(|(xi, vi)| c * xi + s * vi / len)
        .collect();
    SpherePoint::normalize(coords)
}

/// Right inverse of [`exp_map`] with `‖log_x(ξ)‖ = dist(x, ξ)`.
pub fn log_map(x: &SpherePoint, xi: &SpherePoint) -> Result<TangentVector> {
    let theta = geodesic_distance(x, xi)?;
    if theta == 0.0 {
        return Ok(TangentVector::zero(x.clone()));
    }
    let c = x.dot(xi);
    let mut residual: Vec<f64> = xi
        .coords
        .iter()
        .zip(&x.coords)
        .map(|(a, b)| a - c * b)
        .collect();
    let r = norm(&residual);
    if c < 0.0 && r <= ANTIPODE_TOLERANCE {
        let mut u = antipodal_direction(x);
        u.iter_mut().for_each(|ui| *ui *= std::f64::consts::PI);
        return Ok(TangentVector {
            base: x.clone(),
            vec: u,
        });
    }
    if r == 0.0 {
        return Ok(TangentVector::zero(x.clone()));
    }
    let scale = theta / r;
    residual.iter_mut().for_each(|v| *v *= scale);
    Ok(TangentVector {
        base: x.clone(),
        vec: residual,
    })
}

/// The unit tangent direction `u₀(x)` used to resolve the cut locus.
pub fn antipodal_direction(x: &SpherePoint) -> Vec<f64> {
    let i = x
        .coords
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, c)| {
            if c.abs() < best.1 {
                (j, c.abs())
            } else {
                best
            }
        })
        .0;
    let xi = x.coords[i];
    let mut u: Vec<f64> = x.coords.iter().map(|c| -xi * c).collect();
    u[i] += 1.0;
    // |x_i| ≤ 1/sqrt(d+1), so ‖u‖² = 1 - x_i² ≥ 1/2.
    let n = norm(&u);
    u.iter_mut().for_each(|c| *c /= n);
    u
}

pub fn euclidean_distance(x: &[f64], z: &[f64]) -> Result<f64> {
    check_dim(x.len(), z.len())?;
    Ok(x.iter()
        .zip(z)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// A metric space the kernel smoother can run on.
pub trait Manifold {
    type Point: Clone;

    /// Intrinsic dimension.
    fn dim(&self) -> usize;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sphere {
    pub d: usize,
}

impl Manifold for Sphere {
    type Point = SpherePoint;

    fn dim(&self) -> usize {
        self.d
    }

    fn distance(&self, a: &SpherePoint, b: &SpherePoint) -> Result<f64> {
        check_dim(self.d, a.dim())?;
        geodesic_distance(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Euclidean {
    pub d: usize,
}

impl Manifold for Euclidean {
    type Point = Vec<f64>;

    fn dim(&self) -> usize {
        self.d
    }

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> Result<f64> {
        check_dim(self.d, a.len())?;
        euclidean_distance(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(v: &[f64]) -> SpherePoint {
        SpherePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let x = p(&[0.0, 0.6, 0.8]);
        assert_eq!(geodesic_distance(&x, &x).unwrap(), 0.0);
        assert_eq!(geodesic_distance(&x, &x.antipode()).unwrap(), PI);
        let e1 = SpherePoint::basis(2, 0).unwrap();
        let e2 = SpherePoint::basis(2, 1).unwrap();
        assert_eq!(geodesic_distance(&e1, &e2).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn distance_agrees_with_arccos_away_from_the_poles() {
        let x = p(&[0.0, 0.6, 0.8]);
        let z = SpherePoint::normalize(vec![0.48, 0.0, 0.8]).unwrap();
        let direct = x.dot(&z).clamp(-1.0, 1.0).acos();
        assert_abs_diff_eq!(geodesic_distance(&x, &z).unwrap(), direct, epsilon = 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = SpherePoint::basis(2, 0).unwrap();
        let b = SpherePoint::basis(3, 0).unwrap();
        assert!(matches!(
            geodesic_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(euclidean_distance(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn construction_normalizes_or_rejects() {
        let q = SpherePoint::new(vec![0.0, 0.0, 1.0 + 5e-7]).unwrap();
        assert!((norm(q.coords()) - 1.0).abs() <= 1e-12);
        assert!(matches!(
            SpherePoint::new(vec![0.0, 0.0, 1.01]),
            Err(Error::NotUnitNorm(_))
        ));
        assert!(SpherePoint::new(vec![1.0]).is_err());
        assert!(SpherePoint::normalize(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn exp_examples() {
        let north = p(&[0.0, 0.0, 1.0]);
        assert_eq!(
            exp_map(&north, &TangentVector::zero(north.clone())).unwrap(),
            north
        );

        let quarter = TangentVector::new(north.clone(), vec![FRAC_PI_2, 0.0, 0.0]).unwrap();
        let y = exp_map(&north, &quarter).unwrap();
        assert_abs_diff_eq!(y.coords()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y.coords()[2], 0.0, epsilon = 1e-15);

        let half = TangentVector::new(north.clone(), vec![PI, 0.0, 0.0]).unwrap();
        let s = exp_map(&north, &half).unwrap();
        assert_abs_diff_eq!(s.coords()[2], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.coords()[0], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_rejects_foreign_base() {
        let north = p(&[0.0, 0.0, 1.0]);
        let east = p(&[1.0, 0.0, 0.0]);
        let v = TangentVector::new(east, vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(exp_map(&north, &v), Err(Error::BaseMismatch)));
    }

    #[test]
    fn non_tangent_vectors_are_rejected() {
        let north = p(&[0.0, 0.0, 1.0]);
        assert!(matches!(
            TangentVector::new(north.clone(), vec![0.0, 0.0, 0.1]),
            Err(Error::NotTangent(_))
        ));
        let v = TangentVector::project(north, vec![0.3, 0.0, 0.1]).unwrap();
        assert_eq!(v.vec(), &[0.3, 0.0, 0.0]);
    }

    #[test]
    fn log_examples() {
        let north = p(&[0.0, 0.0, 1.0]);
        assert_eq!(log_map(&north, &north).unwrap().norm(), 0.0);
        let v = log_map(&north, &p(&[1.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(v.vec()[0], FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v.vec()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.vec()[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn antipodal_log_has_norm_pi_and_maps_back() {
        for coords in [
            [0.0, 0.0, 1.0],
            [0.6, 0.0, 0.8],
            [1.0, 0.0, 0.0],
            [0.36, 0.48, 0.8],
        ] {
            let x = p(&coords);
            let v = log_map(&x, &x.antipode()).unwrap();
            assert_abs_diff_eq!(v.norm(), PI, epsilon = 1e-12);
            assert!(dot(x.coords(), v.vec()).abs() <= TANGENCY_TOLERANCE);
            let back = exp_map(&x, &v).unwrap();
            for (a, b) in back.coords().iter().zip(x.antipode().coords()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn antipodal_direction_uses_smallest_coordinate() {
        let u = antipodal_direction(&p(&[0.0, 0.0, 1.0]));
        assert_eq!(u, vec![1.0, 0.0, 0.0]);
        let u = antipodal_direction(&p(&[0.8, 0.0, 0.6]));
        assert_eq!(u, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(euclidean_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        let e = Euclidean { d: 2 };
        assert_eq!(e.distance(&vec![0.0, 0.0], &vec![3.0, 4.0]).unwrap(), 5.0);
        assert!(e.distance(&vec![0.0; 3], &vec![0.0; 3]).is_err());
    }
}
