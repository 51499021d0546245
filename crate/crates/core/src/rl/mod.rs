//! Feed-forward approximators, replay buffer and actor-critic updates.

mod actor_critic;
mod adam;
mod checkpoint;
mod hyper;
mod mlp;
mod replay;

pub use actor_critic::{critic_loss_and_grad, policy_gradient, soft_update, CriticBatch};
pub use adam::Adam;
pub use checkpoint::{Checkpoint, Tensor, CHECKPOINT_MAGIC};
pub use hyper::Hyperparams;
pub use mlp::{Activation, ForwardCache, Gradients, Layer, Mlp};
pub use replay::ReplayBuffer;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RlError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("parameter shapes differ")]
    ShapeMismatch,
    #[error("replay buffer not ready: {size} transitions, need {needed}")]
    NotReady { size: usize, needed: usize },
    #[error("invalid hyperparameter {field}: {reason}")]
    InvalidHyperparam { field: &'static str, reason: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}
