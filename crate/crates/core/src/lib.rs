//! Class Angular Distortion Index (CADI) and companion cluster-level quality
//! metrics for dimensionality reduction.
//!
//! CADI compares internal angles of between-class point triples before and
//! after projection: for a reference point `i` in one class and an unordered
//! pair `{j, k}` from a different class, the cosine of the angle at `i` is
//! computed in both spaces and the squared differences are averaged.
//!
//! The crate also provides
//! - a seeded sampler over the class-constrained (and unconstrained) triplet space,
//! - Silhouette, Davies-Bouldin, Cluster Distance Score, NMI, ARI and Spearman,
//! - generators for the synthetic benchmark datasets,
//! - AngleEmbedding, an MLP trained with Adam to minimize sampled CADI, plus
//!   PCA and random baselines.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases at the crate root pick a concrete precision.

pub mod baseline;
pub mod data;
pub mod embed;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod metric;
pub mod sampling;
pub mod scalar;
pub mod stats;
pub mod summation;
pub mod synthetic;

pub use data::{Dataset, MetricResult, Partition, Projection};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use metric::{CadiMode, CadiScore, ClassPairBreakdown};
pub use sampling::{Triplet, TripletBudget};
pub use scalar::Scalar;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type Projection64 = Projection<f64>;
pub type Projection32 = Projection<f32>;
pub type CadiScore64 = CadiScore<f64>;
pub type CadiScore32 = CadiScore<f32>;
