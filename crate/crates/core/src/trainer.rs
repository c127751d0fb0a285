//! Online stochastic gradient ascent on the perceptual network and the action
//! channel.
//!
//! Each step samples `(w, x, a)` by running the environment and both channels,
//! evaluates `j(w, x, a)` with exact marginals, and moves every parameter block
//! along its score function scaled by `j`.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{ActionChannel, PerceptualNetwork};
use crate::env::WorldModel;
use crate::error::{invalid, Error, Result};
use crate::infotheory::{integrand, InfoUnit, JointSystem, Objective};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingConfig<T> {
    pub beta1: T,
    pub beta2: T,
    /// Learning rate shared by `V` and `W`.
    pub alpha_vw: T,
    pub alpha_eta: T,
    pub batch_size: usize,
    pub iterations: usize,
    /// Iterations between exact-metric snapshots.
    pub stride: usize,
    pub seed: u64,
    pub hidden_units: usize,
    pub num_percepts: usize,
}

impl<T: Scalar> TrainingConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta1 > T::zero() && self.beta2 > T::zero()) {
            return Err(invalid("inverse temperature", "beta1 and beta2 must be positive"));
        }
        if !(self.alpha_vw >= T::zero() && self.alpha_eta >= T::zero()) {
            return Err(invalid("learning rate", "alpha_vw and alpha_eta must be nonnegative"));
        }
        if self.batch_size == 0 || self.stride == 0 || self.hidden_units == 0 || self.num_percepts == 0 {
            return Err(invalid("training config", "batch size, stride, hidden units and percepts must be positive"));
        }
        Ok(())
    }
}

/// One environment interaction.
#[derive(Clone, Debug, PartialEq)]
pub struct Rollout<T> {
    pub world: usize,
    pub input: Vec<T>,
    pub percept: usize,
    pub action: usize,
    pub utility: T,
}

/// Samples world, encoder noise, percept and action, in that order, from `rng`.
pub fn rollout<T: Scalar>(
    model: &WorldModel<T>,
    net: &PerceptualNetwork<T>,
    ch: &ActionChannel<T>,
    rng: &mut ChaCha8Rng,
) -> Rollout<T> {
    let world = model.sample_world(rng);
    let input = model.encode(world, rng);
    let percept = net.sample_percept(&input, rng);
    let action = ch.sample_action(percept, rng);
    Rollout { utility: model.utility()[(world, action)], world, input, percept, action }
}

/// Tabular view of the current parameters as a [`JointSystem`], using
/// noise-free encodings for `p(x|w)`.
pub fn materialize<T: Scalar>(
    model: &WorldModel<T>,
    net: &PerceptualNetwork<T>,
    ch: &ActionChannel<T>,
    beta1: T,
    beta2: T,
) -> Result<JointSystem<T>> {
    JointSystem::new(
        model.prior().to_vec(),
        model.utility().clone(),
        net.conditional_table(model),
        ch.table(),
        beta1,
        beta2,
    )
}

/// Gradient blocks shaped like `V`, `W` and `eta`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients<T> {
    pub v: Matrix<T>,
    pub w: Matrix<T>,
    pub eta: Matrix<T>,
}

impl<T: Scalar> Gradients<T> {
    fn zeros_like(net: &PerceptualNetwork<T>, ch: &ActionChannel<T>) -> Self {
        Gradients {
            v: Matrix::zeros(net.input_dim(), net.hidden_dim()),
            w: Matrix::zeros(net.hidden_dim(), net.num_percepts()),
            eta: Matrix::zeros(ch.num_actions() - 1, ch.num_percepts()),
        }
    }

    /// Adds `weight * score(w, x, a)` for one triplet.
    fn accumulate(
        &mut self,
        net: &PerceptualNetwork<T>,
        ch: &ActionChannel<T>,
        input: &[T],
        percept: usize,
        action: usize,
        weight: T,
    ) {
        let act = net.activations(input);
        self.v.add_scaled(&net.grad_log_v_with(&act, input, percept), weight);
        self.w.add_scaled(&net.grad_log_w_with(&act, percept), weight);
        for (i, g) in ch.grad_log_eta(percept, action).into_iter().enumerate() {
            self.eta[(i, percept)] += weight * g;
        }
    }

    fn first_non_finite(&self) -> Option<&'static str> {
        [("V", &self.v), ("W", &self.w), ("eta", &self.eta)]
            .into_iter()
            .find(|(_, m)| !m.is_finite())
            .map(|(n, _)| n)
    }
}

/// Exact expectation of the score-times-`j` estimator, summed over every
/// `(w, x, a)` weighted by its joint probability (noise-free encodings).
pub fn expected_gradient<T: Scalar>(
    model: &WorldModel<T>,
    net: &PerceptualNetwork<T>,
    ch: &ActionChannel<T>,
    beta1: T,
    beta2: T,
) -> Result<Gradients<T>> {
    let sys = materialize(model, net, ch, beta1, beta2)?;
    let marginals = sys.marginals();
    let mut g = Gradients::zeros_like(net, ch);
    for w in 0..model.num_worlds() {
        let input = model.encode_clean(w);
        for x in 0..net.num_percepts() {
            for a in 0..model.num_actions() {
                let p = model.prior()[w] * sys.perception()[(w, x)] * sys.action()[(x, a)];
                if p == T::zero() {
                    continue;
                }
                let j = sys.sample_integrand(&marginals, w, x, a)?;
                g.accumulate(net, ch, &input, x, a, p * j);
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepDiagnostics<T> {
    /// Batch mean of `j(w, x, a)`.
    pub mean_integrand: T,
    pub mean_utility: T,
}

/// One stochastic ascent step with `cfg.batch_size` sampled triplets.
pub fn gradient_step<T: Scalar>(
    model: &WorldModel<T>,
    net: &mut PerceptualNetwork<T>,
    ch: &mut ActionChannel<T>,
    cfg: &TrainingConfig<T>,
    rng: &mut ChaCha8Rng,
    iteration: usize,
) -> Result<StepDiagnostics<T>> {
    let pxw = net.conditional_table(model);
    let px = pxw.left_mul(model.prior());
    let pa = ch.table().left_mul(&px);

    let mut grads = Gradients::zeros_like(net, ch);
    let mut sum_j = T::zero();
    let mut sum_u = T::zero();
    for _ in 0..cfg.batch_size {
        let r = rollout(model, net, ch, rng);
        let log_pxw = net.log_prob(&r.input, r.percept);
        let j = integrand(
            r.utility,
            log_pxw,
            px[r.percept].ln(),
            ch.log_prob(r.percept, r.action),
            pa[r.action].ln(),
            cfg.beta1,
            cfg.beta2,
        )
        .ok_or(Error::ZeroProbability { what: "sampled triplet", world: r.world, percept: r.percept, action: r.action })?;
        grads.accumulate(net, ch, &r.input, r.percept, r.action, j);
        if let Some(name) = grads.first_non_finite() {
            return Err(Error::NonFinite {
                iteration,
                location: format!("gradient of {name} at (w={}, x={}, a={})", r.world, r.percept, r.action),
            });
        }
        sum_j += j;
        sum_u += r.utility;
    }

    let n = T::of(cfg.batch_size as f64);
    net.v_mut().add_scaled(&grads.v, cfg.alpha_vw / n);
    net.w_mut().add_scaled(&grads.w, cfg.alpha_vw / n);
    ch.eta_mut().add_scaled(&grads.eta, cfg.alpha_eta / n);
    if !net.is_finite() || !ch.is_finite() {
        return Err(Error::NonFinite { iteration, location: "parameters after update".into() });
    }
    Ok(StepDiagnostics { mean_integrand: sum_j / n, mean_utility: sum_u / n })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapshot<T> {
    pub iteration: usize,
    pub objective: Objective<T>,
}

#[derive(Clone, Debug)]
pub struct TrainingTrace<T> {
    pub snapshots: Vec<Snapshot<T>>,
    pub net: PerceptualNetwork<T>,
    pub channel: ActionChannel<T>,
}

impl<T: Scalar> TrainingTrace<T> {
    pub fn final_snapshot(&self) -> &Snapshot<T> {
        self.snapshots.last().expect("trace always holds the initial snapshot")
    }
}

/// Glorot network and uniform action channel, drawn from `cfg.seed`, then
/// `cfg.iterations` online steps with exact snapshots every `cfg.stride`
/// iterations and at the end.
pub fn train<T: Scalar>(model: &WorldModel<T>, cfg: &TrainingConfig<T>) -> Result<TrainingTrace<T>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut net = PerceptualNetwork::glorot(model.input_dim(), cfg.hidden_units, cfg.num_percepts, &mut rng);
    let mut ch = ActionChannel::uniform(model.num_actions(), cfg.num_percepts);
    let snap = |it: usize, net: &PerceptualNetwork<T>, ch: &ActionChannel<T>| -> Result<Snapshot<T>> {
        let objective = materialize(model, net, ch, cfg.beta1, cfg.beta2)?.objective();
        Ok(Snapshot { iteration: it, objective })
    };

    let mut snapshots = vec![snap(0, &net, &ch)?];
    for it in 1..=cfg.iterations {
        gradient_step(model, &mut net, &mut ch, cfg, &mut rng, it)?;
        if it % cfg.stride == 0 || it == cfg.iterations {
            snapshots.push(snap(it, &net, &ch)?);
        }
    }
    Ok(TrainingTrace { snapshots, net, channel: ch })
}

/// Trace CSV: `iteration,J,EU,I_omega_x_bits,I_x_a_bits`.
pub fn trace_csv<T: Scalar>(snapshots: &[Snapshot<T>]) -> String {
    let mut out = String::from("iteration,J,EU,I_omega_x_bits,I_x_a_bits\n");
    for s in snapshots {
        let o = &s.objective;
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.17e}",
            s.iteration,
            o.value.to_f64_lossy(),
            o.expected_utility.to_f64_lossy(),
            o.info_world_percept_in(InfoUnit::Bits).to_f64_lossy(),
            o.info_percept_action_in(InfoUnit::Bits).to_f64_lossy(),
        )
        .unwrap();
    }
    out
}

/// `p(a|w)` as CSV with a header of action names and one row per world.
pub fn behavior_csv<T: Scalar>(model: &WorldModel<T>, behavior: &Matrix<T>) -> String {
    let mut out = format!("world,{}\n", model.action_names().join(","));
    for (w, row) in behavior.iter_rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|p| format!("{:.17e}", p.to_f64_lossy())).collect();
        writeln!(out, "{},{}", model.world_names()[w], cells.join(",")).unwrap();
    }
    out
}

/// One learning-rate pair and how its run ended.
#[derive(Clone, Debug)]
pub struct GridCell<T> {
    pub alpha_vw: T,
    pub alpha_eta: T,
    pub outcome: std::result::Result<Objective<T>, String>,
}

#[derive(Clone, Debug)]
pub struct GridReport<T> {
    /// Cells with a finite final `J`, best first.
    pub ranked: Vec<GridCell<T>>,
    /// Cells that errored or ended with a non-finite `J`.
    pub failed: Vec<GridCell<T>>,
}

/// `center * factor^k` for `k = -(n/2) ..= n/2` (`n` odd gives a centered grid).
pub fn log_grid<T: Scalar>(center: T, factor: T, n: usize) -> Vec<T> {
    let half = (n / 2) as i32;
    (0..n as i32).map(|k| center * factor.powi(k - half)).collect()
}

/// Trains one run per `(alpha_vw, alpha_eta)` pair in parallel and ranks the
/// cells by final exact `J`, ties broken by the learning rates in
/// lexicographic order.
pub fn grid_search<T: Scalar>(
    model: &WorldModel<T>,
    base: &TrainingConfig<T>,
    alphas_vw: &[T],
    alphas_eta: &[T],
) -> Result<GridReport<T>> {
    if alphas_vw.is_empty() || alphas_eta.is_empty() {
        return Err(invalid("grid", "needs at least one learning rate on each axis"));
    }
    let pairs: Vec<(T, T)> = alphas_vw.iter().flat_map(|&v| alphas_eta.iter().map(move |&e| (v, e))).collect();
    let cells: Vec<GridCell<T>> = pairs
        .into_par_iter()
        .map(|(alpha_vw, alpha_eta)| {
            let cfg = TrainingConfig { alpha_vw, alpha_eta, ..base.clone() };
            let outcome = match train(model, &cfg) {
                Ok(trace) => {
                    let o = trace.final_snapshot().objective;
                    if o.value.is_finite() {
                        Ok(o)
                    } else {
                        Err("non-finite objective".to_string())
                    }
                }
                Err(e) => Err(e.to_string()),
            };
            GridCell { alpha_vw, alpha_eta, outcome }
        })
        .collect();

    let (mut ranked, failed): (Vec<_>, Vec<_>) = cells.into_iter().partition(|c| c.outcome.is_ok());
    let value = |c: &GridCell<T>| c.outcome.as_ref().map(|o| o.value).unwrap_or(T::neg_infinity());
    ranked.sort_by(|a, b| {
        value(b)
            .partial_cmp(&value(a))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.alpha_vw.partial_cmp(&b.alpha_vw).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.alpha_eta.partial_cmp(&b.alpha_eta).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(GridReport { ranked, failed })
}

/// Grid report as CSV: `rank,alpha_vw,alpha_eta,J,status`.
pub fn grid_csv<T: Scalar>(report: &GridReport<T>) -> String {
    let mut out = String::from("rank,alpha_vw,alpha_eta,J,status\n");
    for (i, c) in report.ranked.iter().enumerate() {
        let j = c.outcome.as_ref().map(|o| o.value.to_f64_lossy()).unwrap_or(f64::NAN);
        writeln!(out, "{},{},{},{:.17e},ok", i + 1, c.alpha_vw, c.alpha_eta, j).unwrap();
    }
    for c in &report.failed {
        let msg = c.outcome.as_ref().err().map(|m| m.replace(',', ";")).unwrap_or_default();
        writeln!(out, "-,{},{},nan,failed: {msg}", c.alpha_vw, c.alpha_eta).unwrap();
    }
    out
}
