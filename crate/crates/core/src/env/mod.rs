//! Discrete perception-action tasks: world priors, utility tables and the
//! deterministic encoders that turn a world index into a network input.

mod io;
pub mod mug;
pub mod predator_prey;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{inverse_cdf, Scalar};

pub use io::{load_mug_template, load_utility_file, parse_mug_template, parse_utility_table, UtilityFile};
pub use mug::{mug_task, mug_utility, MUG_HEIGHT, MUG_WIDTH};
pub use predator_prey::{predator_prey_task, predator_prey_utility};

/// Map from world index to the real-valued input vector fed to the perceptual network.
#[derive(Clone, Debug, PartialEq)]
pub enum Encoder<T> {
    /// Little-endian binary expansion of the world index, one `{0,1}` component per bit.
    Binary { bits: usize },
    /// One flattened template per world with independent per-pixel flips.
    Bitmap { templates: Vec<Vec<T>>, flip_prob: f64 },
}

impl<T: Scalar> Encoder<T> {
    /// Smallest binary encoder that covers `num_worlds` codes.
    pub fn binary_for(num_worlds: usize) -> Self {
        let mut bits = 1;
        while (1usize << bits) < num_worlds {
            bits += 1;
        }
        Encoder::Binary { bits }
    }

    pub fn dim(&self) -> usize {
        match self {
            Encoder::Binary { bits } => *bits,
            Encoder::Bitmap { templates, .. } => templates.first().map_or(0, Vec::len),
        }
    }

    pub fn is_noisy(&self) -> bool {
        matches!(self, Encoder::Bitmap { flip_prob, .. } if *flip_prob > 0.0)
    }

    /// Noise-free encoding of `world`.
    pub fn clean(&self, world: usize) -> Vec<T> {
        match self {
            Encoder::Binary { bits } => (0..*bits)
                .map(|b| if (world >> b) & 1 == 1 { T::one() } else { T::zero() })
                .collect(),
            Encoder::Bitmap { templates, .. } => templates[world].clone(),
        }
    }

    /// Encoding of `world`, with pixel noise drawn from `rng` when the flip
    /// probability is positive. A noise-free encoder never touches `rng`.
    pub fn encode<R: Rng + ?Sized>(&self, world: usize, rng: &mut R) -> Vec<T> {
        match self {
            Encoder::Bitmap { templates, flip_prob } if *flip_prob > 0.0 => templates[world]
                .iter()
                .map(|&px| if rng.gen::<f64>() < *flip_prob { T::one() - px } else { px })
                .collect(),
            _ => self.clean(world),
        }
    }
}

/// A discrete task: prior over worlds, utility table and input encoder.
#[derive(Clone, Debug)]
pub struct WorldModel<T> {
    prior: Vec<T>,
    utility: Matrix<T>,
    encoder: Encoder<T>,
    world_names: Vec<String>,
    action_names: Vec<String>,
}

impl<T: Scalar> WorldModel<T> {
    pub fn new(prior: Vec<T>, utility: Matrix<T>, encoder: Encoder<T>) -> Result<Self> {
        let world_names = (0..utility.rows()).map(|i| format!("w{i}")).collect();
        let action_names = (0..utility.cols()).map(|i| format!("a{i}")).collect();
        Self::with_names(prior, utility, encoder, world_names, action_names)
    }

    pub fn with_names(
        prior: Vec<T>,
        utility: Matrix<T>,
        encoder: Encoder<T>,
        world_names: Vec<String>,
        action_names: Vec<String>,
    ) -> Result<Self> {
        let (nw, na) = utility.shape();
        if nw == 0 || na == 0 {
            return Err(invalid("utility", "needs at least one world and one action"));
        }
        if prior.len() != nw {
            return Err(Error::Dimension { what: "prior", expected: nw, got: prior.len() });
        }
        if prior.iter().any(|&p| !(p >= T::zero())) {
            return Err(invalid("prior", "entries must be nonnegative"));
        }
        let total: T = prior.iter().copied().sum();
        let tol = T::of(1e-12).max(T::epsilon() * T::of(64.0));
        if (total - T::one()).abs() > tol {
            return Err(invalid("prior", format!("sums to {total}, expected 1")));
        }
        if !utility.is_finite() {
            return Err(invalid("utility", "entries must be finite"));
        }
        match &encoder {
            Encoder::Binary { bits } => {
                if *bits == 0 || *bits >= usize::BITS as usize || (1usize << bits) < nw {
                    return Err(invalid("encoder", format!("{bits} bits cannot encode {nw} worlds")));
                }
            }
            Encoder::Bitmap { templates, flip_prob } => {
                if templates.len() != nw {
                    return Err(Error::Dimension { what: "templates", expected: nw, got: templates.len() });
                }
                let d = templates[0].len();
                if d == 0 || templates.iter().any(|t| t.len() != d) {
                    return Err(invalid("encoder", "templates must share a nonzero length"));
                }
                if !(0.0..=1.0).contains(flip_prob) {
                    return Err(invalid("encoder", format!("flip probability {flip_prob} outside [0, 1]")));
                }
            }
        }
        if world_names.len() != nw {
            return Err(Error::Dimension { what: "world names", expected: nw, got: world_names.len() });
        }
        if action_names.len() != na {
            return Err(Error::Dimension { what: "action names", expected: na, got: action_names.len() });
        }
        Ok(WorldModel { prior, utility, encoder, world_names, action_names })
    }

    pub fn num_worlds(&self) -> usize {
        self.utility.rows()
    }

    pub fn num_actions(&self) -> usize {
        self.utility.cols()
    }

    pub fn input_dim(&self) -> usize {
        self.encoder.dim()
    }

    pub fn prior(&self) -> &[T] {
        &self.prior
    }

    pub fn utility(&self) -> &Matrix<T> {
        &self.utility
    }

    pub fn encoder(&self) -> &Encoder<T> {
        &self.encoder
    }

    pub fn world_names(&self) -> &[String] {
        &self.world_names
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    /// Same task with a different encoder flip probability (bitmap encoders only).
    pub fn with_noise(mut self, flip_prob: f64) -> Result<Self> {
        match &mut self.encoder {
            Encoder::Bitmap { flip_prob: p, .. } => {
                if !(0.0..=1.0).contains(&flip_prob) {
                    return Err(invalid("noise", format!("{flip_prob} outside [0, 1]")));
                }
                *p = flip_prob;
            }
            Encoder::Binary { .. } if flip_prob != 0.0 => {
                return Err(invalid("noise", "binary encoders are noise-free"));
            }
            Encoder::Binary { .. } => {}
        }
        Ok(self)
    }

    /// Draws a world index from the prior using one uniform draw.
    pub fn sample_world<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        inverse_cdf(&self.prior, rng.gen::<f64>())
    }

    /// Encodes `world`. Panics if `world` is out of range.
    pub fn encode<R: Rng + ?Sized>(&self, world: usize, rng: &mut R) -> Vec<T> {
        assert!(world < self.num_worlds(), "world index {world} out of range");
        self.encoder.encode(world, rng)
    }

    pub fn encode_clean(&self, world: usize) -> Vec<T> {
        assert!(world < self.num_worlds(), "world index {world} out of range");
        self.encoder.clean(world)
    }
}

pub fn uniform<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::one() / T::of(n as f64); n]
}
