//! AngleEmbedding and the PCA / random baselines.
//!
//! AngleEmbedding minimizes sampled CADI with Adam, either through a small
//! feedforward network applied to the input coordinates (parametric mode)
//! or directly over the output coordinates (non-parametric mode).

mod adam;
mod loss;
mod mlp;
mod pca;
mod train;

pub use adam::AdamState;
pub use loss::{cadi_loss_and_grad, loss_and_grad_prepared, prepare_triplets, PreparedTriplet};
pub use mlp::{Activation, ForwardCache, MlpParams};
pub use pca::{pca_project, random_project, symmetric_eigen, PcaResult};
pub use train::{angle_embedding, EmbeddingOutput, TrainConfig, TrainMode};
