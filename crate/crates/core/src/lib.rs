//! Singular kernel smoothing on the sphere and in Euclidean space.
//!
//! The manifold-Hilbert kernel `dist(x, z)^-d` makes the Nadaraya-Watson
//! estimator interpolate its training labels. On `S^d` the same kernel is the
//! expectation of a weighted ensemble of histogram classifiers built on random
//! hyperplane arrangements, which this crate realizes by Monte Carlo.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`geometry`] | geodesic distance, exp/log maps with the antipodal branch |
//! | [`kernels`] | closed-form and series kernels, arrangement weights |
//! | [`partitions`] | sign patterns, histogram scores, Monte Carlo estimators |
//! | [`smoothing`] | the three-branch kernel smoother and its classifier |
//! | [`synthdata`] | seeded sphere distributions and label models |
//! | [`rng`], [`stats`] | counter-based substreams and mergeable moments |
//!
//! ```
//! use mhk_core::smoothing::kernel_smooth_regress;
//! use mhk_core::{Branch, KernelSpec, LabeledDataset, Sphere, SpherePoint};
//!
//! # fn main() -> mhk_core::Result<()> {
//! let data = LabeledDataset::new(
//!     vec![SpherePoint::new(vec![0.0, 0.0, 1.0])?, SpherePoint::new(vec![1.0, 0.0, 0.0])?],
//!     vec![1.0, -1.0],
//! )?;
//! let kernel = KernelSpec::manifold_hilbert(Sphere { d: 2 })?;
//!
//! // Equidistant from both points.
//! let x = SpherePoint::normalize(vec![1.0, 0.0, 1.0])?;
//! let est = kernel_smooth_regress(&x, &data, &kernel)?;
//! assert!(est.value.abs() < 1e-12);
//!
//! // At a training point the label comes back exactly.
//! let at = kernel_smooth_regress(&data.points()[1], &data, &kernel)?;
//! assert_eq!((at.value, at.branch), (-1.0, Branch::Interpolation));
//! # Ok(())
//! # }
//! ```

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod partitions;
pub mod rng;
pub mod smoothing;
pub mod stats;
pub mod synthdata;

pub use dataset::LabeledDataset;
pub use error::{Error, Result};
pub use geometry::{Euclidean, Manifold, Sphere, SpherePoint, TangentVector};
pub use kernels::{HeightPmf, KernelValue, WrpConfig};
pub use partitions::{CellId, HyperplaneArrangement};
pub use rng::{RngStream, StreamKey};
pub use smoothing::{Branch, KernelKind, KernelSpec, RegressionEstimate};
pub use stats::{McEstimate, Moments};
