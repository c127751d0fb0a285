#![allow(dead_code)]

use bounded_percept::channels::{ActionChannel, PerceptualNetwork};
use bounded_percept::env::{Encoder, WorldModel};
use bounded_percept::trainer::materialize;
use bounded_percept::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FD_STEP: f64 = 1e-6;

/// A small random system: world model with real-valued inputs, network and
/// action channel, all drawn from `seed`.
pub struct Instance {
    pub model: WorldModel<f64>,
    pub net: PerceptualNetwork<f64>,
    pub ch: ActionChannel<f64>,
    pub beta1: f64,
    pub beta2: f64,
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, scale: f64, rng: &mut R) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

pub fn random_distribution<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p
}

/// `worlds x percepts x actions` system with `input_dim` real inputs and
/// `hidden` tanh units.
pub fn random_instance(seed: u64, worlds: usize, percepts: usize, actions: usize) -> Instance {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let (input_dim, hidden) = (2, 4);
    let prior = random_distribution(worlds, &mut r);
    let utility = random_matrix(worlds, actions, 2.0, &mut r);
    let templates: Vec<Vec<f64>> =
        (0..worlds).map(|_| (0..input_dim).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
    let model = WorldModel::new(prior, utility, Encoder::Bitmap { templates, flip_prob: 0.0 }).unwrap();
    let net = PerceptualNetwork::new(
        random_matrix(input_dim, hidden, 1.0, &mut r),
        random_matrix(hidden, percepts, 1.0, &mut r),
    )
    .unwrap();
    let ch = ActionChannel::new(random_matrix(actions - 1, percepts, 1.0, &mut r)).unwrap();
    Instance { model, net, ch, beta1: r.gen_range(0.5..4.0), beta2: r.gen_range(0.5..4.0) }
}

#[derive(Clone, Copy, Debug)]
pub enum Block {
    V,
    W,
    Eta,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::V, Block::W, Block::Eta];
}

/// Central finite differences of the exact objective with respect to one
/// parameter block.
pub fn objective_fd(inst: &Instance, block: Block) -> Matrix<f64> {
    let shape = match block {
        Block::V => inst.net.v().shape(),
        Block::W => inst.net.w().shape(),
        Block::Eta => inst.ch.eta().shape(),
    };
    Matrix::from_fn(shape.0, shape.1, |r, c| {
        let eval = |delta: f64| {
            let mut net = inst.net.clone();
            let mut ch = inst.ch.clone();
            match block {
                Block::V => net.v_mut()[(r, c)] += delta,
                Block::W => net.w_mut()[(r, c)] += delta,
                Block::Eta => ch.eta_mut()[(r, c)] += delta,
            }
            materialize(&inst.model, &net, &ch, inst.beta1, inst.beta2).unwrap().objective().value
        };
        (eval(FD_STEP) - eval(-FD_STEP)) / (2.0 * FD_STEP)
    })
}

/// Largest absolute gap between the exact expectation of each score-times-j
/// estimator and the finite-difference gradient, per block.
pub fn estimator_bias(inst: &Instance) -> [f64; 3] {
    let g = bounded_percept::trainer::expected_gradient(&inst.model, &inst.net, &inst.ch, inst.beta1, inst.beta2)
        .unwrap();
    [
        g.v.max_abs_diff(&objective_fd(inst, Block::V)),
        g.w.max_abs_diff(&objective_fd(inst, Block::W)),
        g.eta.max_abs_diff(&objective_fd(inst, Block::Eta)),
    ]
}
