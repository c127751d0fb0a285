//! Bounded-rational serial perception-action systems.
//!
//! A world state `w` is perceived through a channel `p(x|w)` and acted upon
//! through a channel `p(a|x)`. Both channels trade expected utility against
//! their mutual information, weighted by inverse temperatures `beta1` and
//! `beta2`:
//!
//! ```text
//! J = E[U(w, a)] - I(W;X) / beta1 - I(X;A) / beta2
//! ```
//!
//! The crate solves this two ways:
//!
//! - [`analytic`]: fixed-point iteration on tabular channels (the baseline).
//! - [`trainer`]: online stochastic gradient ascent on a one-hidden-layer
//!   perceptual network and a multinomial action channel ([`channels`]),
//!   using score-function gradients of sampled rollouts.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`.

pub mod analytic;
pub mod channels;
pub mod cli;
pub mod env;
pub mod error;
pub mod infotheory;
pub mod matrix;
pub mod scalar;
pub mod trainer;

pub use error::{Error, Result};
pub use infotheory::InfoUnit;
pub use matrix::Matrix;
pub use scalar::Scalar;

pub type WorldModel = env::WorldModel<f64>;
pub type PerceptualNetwork = channels::PerceptualNetwork<f64>;
pub type ActionChannel = channels::ActionChannel<f64>;
pub type JointSystem = infotheory::JointSystem<f64>;
pub type TabularSolution = analytic::TabularSolution<f64>;
pub type TrainingConfig = trainer::TrainingConfig<f64>;
pub type TrainingTrace = trainer::TrainingTrace<f64>;
pub type Objective = infotheory::Objective<f64>;
