//! Blahut-Arimoto style fixed-point solvers used as baselines.
//!
//! [`solve_rate_distortion`] handles the single-stage problem
//! `max E[U] - I(W;A)/beta`. [`solve_serial`] iterates the four coupled
//! equations of the two-stage chain `W -> X -> A` in order:
//! perceptual channel, percept marginal, action channel, action marginal.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::env::{uniform, WorldModel};
use crate::error::{invalid, Error, Result};
use crate::infotheory::{InfoUnit, JointSystem, Objective};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Starting point for `q(x)`, `q(a)` and `q(a|x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Initialization {
    /// Everything uniform. For the two-stage solver this is a fixed point
    /// where no percept carries information, so it is only useful as a probe.
    Uniform,
    /// Uniform `q(a)`; `q(x)` and each row of `q(a|x)` mixed with a seeded
    /// flat-Dirichlet draw: `(1 - strength) * uniform + strength * dirichlet`.
    Jitter { seed: u64, strength: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Stop once the largest absolute change over all tables falls below this.
    pub tolerance: f64,
    /// Consecutive sweeps that must stay below `tolerance` before stopping.
    pub settle_sweeps: usize,
    pub max_iterations: usize,
    pub init: Initialization,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-10,
            settle_sweeps: 10,
            max_iterations: 10_000,
            init: Initialization::Jitter { seed: 0, strength: 1.0 } }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(invalid("solver tolerance", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(invalid("solver max_iterations", "must be at least 1"));
        }
        if self.settle_sweeps == 0 {
            return Err(invalid("solver settle_sweeps", "must be at least 1"));
        }
        if let Initialization::Jitter { strength, .. } = self.init {
            if !(0.0..=1.0).contains(&strength) {
                return Err(invalid("jitter strength", "must lie in [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        if let Initialization::Jitter { seed: s, .. } = &mut self.init {
            *s = seed;
        }
        self
    }
}

fn flat_dirichlet<T: Scalar, R: Rng>(n: usize, rng: &mut R) -> Vec<T> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| T::of(d / total)).collect()
}

fn jittered<T: Scalar, R: Rng>(n: usize, strength: f64, rng: &mut R) -> Vec<T> {
    let u = 1.0 / n as f64;
    flat_dirichlet::<f64, _>(n, rng)
        .into_iter()
        .map(|d| T::of((1.0 - strength) * u + strength * d))
        .collect()
}

/// Normalizes `exp(logits)` in place; returns the partition sum relative to the max logit.
fn normalize_exp<T: Scalar>(logits: &mut [T]) -> T {
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let mut z = T::zero();
    for l in logits.iter_mut() {
        *l = if l.is_finite() { (*l - max).exp() } else { T::zero() };
        z += *l;
    }
    for l in logits.iter_mut() {
        *l /= z;
    }
    z
}

fn ln_or_neg_inf<T: Scalar>(p: T) -> T {
    if p > T::zero() {
        p.ln()
    } else {
        T::neg_infinity()
    }
}

fn check_finite<T: Scalar>(m: &Matrix<T>, name: &str, iteration: usize) -> Result<()> {
    for (i, &v) in m.as_slice().iter().enumerate() {
        if !v.is_finite() {
            let (r, c) = (i / m.cols(), i % m.cols());
            return Err(Error::NonFinite { iteration, location: format!("{name}[{r},{c}] = {v}") });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Single stage

#[derive(Clone, Debug)]
pub struct RateDistortionSolution<T> {
    /// `p(a|w)`, `|W| x |A|`.
    pub channel: Matrix<T>,
    pub marginal: Vec<T>,
    /// `E[U] - I(W;A)/beta`.
    pub objective: T,
    pub expected_utility: T,
    /// `I(W;A)` in nats.
    pub information: T,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after every sweep.
    pub objective_trace: Vec<T>,
}

fn single_stage_objective<T: Scalar>(prior: &[T], utility: &Matrix<T>, channel: &Matrix<T>, beta: T) -> (T, T, T) {
    let marginal = channel.left_mul(prior);
    let mut eu = T::zero();
    let mut info = T::zero();
    for (w, &pw) in prior.iter().enumerate() {
        for (a, &p) in channel.row(w).iter().enumerate() {
            eu += pw * p * utility[(w, a)];
            if p > T::zero() {
                info += pw * p * (p / marginal[a]).ln();
            }
        }
    }
    (eu - info / beta, eu, info)
}

/// Alternates `p(a|w) ∝ p(a) exp(beta U(w,a))` and `p(a) = sum_w p(w) p(a|w)`.
pub fn solve_rate_distortion<T: Scalar>(
    model: &WorldModel<T>,
    beta: T,
    cfg: &SolverConfig,
) -> Result<RateDistortionSolution<T>> {
    cfg.validate()?;
    if !(beta > T::zero()) {
        return Err(invalid("beta", "must be positive"));
    }
    let (nw, na) = model.utility().shape();
    let prior = model.prior();
    let mut marginal: Vec<T> = match cfg.init {
        Initialization::Uniform => uniform(na),
        Initialization::Jitter { seed, strength } => jittered(na, strength, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut channel = Matrix::from_rows(&vec![marginal.clone(); nw]);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut calm = 0;

    while iterations < cfg.max_iterations {
        iterations += 1;
        let log_marginal: Vec<T> = marginal.iter().map(|&p| ln_or_neg_inf(p)).collect();
        let mut next = Matrix::zeros(nw, na);
        for w in 0..nw {
            let row = next.row_mut(w);
            for a in 0..na {
                row[a] = log_marginal[a] + beta * model.utility()[(w, a)];
            }
            normalize_exp(row);
        }
        check_finite(&next, "p(a|w)", iterations)?;
        let next_marginal = next.left_mul(prior);
        let change = next
            .max_abs_diff(&channel)
            .max(marginal.iter().zip(&next_marginal).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max));
        channel = next;
        marginal = next_marginal;
        trace.push(single_stage_objective(prior, model.utility(), &channel, beta).0);
        calm = if change < T::of(cfg.tolerance) { calm + 1 } else { 0 };
        if calm >= cfg.settle_sweeps {
            converged = true;
            break;
        }
    }

    let (objective, expected_utility, information) = single_stage_objective(prior, model.utility(), &channel, beta);
    Ok(RateDistortionSolution {
        channel,
        marginal,
        objective,
        expected_utility,
        information,
        iterations,
        converged,
        objective_trace: trace,
    })
}

// ---------------------------------------------------------------------------
// Two stages

/// The four right-hand sides, each a pure function of the tables it reads.
struct SerialEquations<'a, T> {
    prior: &'a [T],
    utility: &'a Matrix<T>,
    beta1: T,
    beta2: T,
}

impl<T: Scalar> SerialEquations<'_, T> {
    /// `p(x|w) ∝ q(x) exp(beta1 dF(w,x))`, with
    /// `dF(w,x) = E_{q(a|x)}[U(w,a)] - D_KL(q(.|x) || q(a)) / beta2`.
    fn perception(&self, qx: &[T], qax: &Matrix<T>, qa: &[T]) -> Matrix<T> {
        let nw = self.prior.len();
        let nx = qx.len();
        let kl: Vec<T> = (0..nx)
            .map(|x| {
                let mut kl = T::zero();
                for (&p, &q) in qax.row(x).iter().zip(qa) {
                    if p > T::zero() {
                        kl += if q > T::zero() { p * (p / q).ln() } else { T::infinity() };
                    }
                }
                kl
            })
            .collect();
        let mut out = Matrix::zeros(nw, nx);
        for w in 0..nw {
            let row = out.row_mut(w);
            for x in 0..nx {
                let eu: T = qax.row(x).iter().zip(self.utility.row(w)).map(|(&p, &u)| p * u).sum();
                let df = eu - kl[x] / self.beta2;
                row[x] = ln_or_neg_inf(qx[x]) + self.beta1 * df;
            }
            normalize_exp(row);
        }
        out
    }

    fn percept_marginal(&self, pxw: &Matrix<T>) -> Vec<T> {
        pxw.left_mul(self.prior)
    }

    /// `p(a|x) ∝ q(a) exp(beta2 sum_w p(w|x) U(w,a))`. Percepts with zero
    /// marginal have no posterior; their row is set to `q(a)`.
    fn action(&self, pxw: &Matrix<T>, px: &[T], qa: &[T]) -> Matrix<T> {
        let (nw, na) = self.utility.shape();
        let nx = px.len();
        let log_qa: Vec<T> = qa.iter().map(|&p| ln_or_neg_inf(p)).collect();
        let mut out = Matrix::zeros(nx, na);
        for x in 0..nx {
            let row = out.row_mut(x);
            if px[x] <= T::zero() {
                row.copy_from_slice(qa);
                continue;
            }
            for a in 0..na {
                let mut eu = T::zero();
                for w in 0..nw {
                    eu += self.prior[w] * pxw[(w, x)] / px[x] * self.utility[(w, a)];
                }
                row[a] = log_qa[a] + self.beta2 * eu;
            }
            normalize_exp(row);
        }
        out
    }

    fn action_marginal(&self, px: &[T], pax: &Matrix<T>) -> Vec<T> {
        pax.left_mul(px)
    }
}

fn vec_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord<T> {
    pub sweep: usize,
    pub objective: Objective<T>,
    pub max_change: T,
}

/// Converged (or budget-limited) two-stage solution.
#[derive(Clone, Debug)]
pub struct TabularSolution<T> {
    /// `p(x|w)`, `|W| x |X|`.
    pub perception: Matrix<T>,
    /// `p(a|x)`, `|X| x |A|`.
    pub action: Matrix<T>,
    pub marginal_x: Vec<T>,
    pub marginal_a: Vec<T>,
    pub objective: Objective<T>,
    pub iterations: usize,
    pub max_change: T,
    pub converged: bool,
    pub trace: Vec<SweepRecord<T>>,
}

impl<T: Scalar> TabularSolution<T> {
    pub fn joint_system(&self, model: &WorldModel<T>, beta1: T, beta2: T) -> Result<JointSystem<T>> {
        JointSystem::new(
            model.prior().to_vec(),
            model.utility().clone(),
            self.perception.clone(),
            self.action.clone(),
            beta1,
            beta2,
        )
    }

    /// `p(a|w)`.
    pub fn behavior(&self) -> Matrix<T> {
        let rows: Vec<Vec<T>> = self.perception.iter_rows().map(|r| self.action.left_mul(r)).collect();
        Matrix::from_rows(&rows)
    }
}

/// Iterates the four self-consistent equations from `cfg.init` until the
/// largest table change has stayed below `cfg.tolerance` for
/// `cfg.settle_sweeps` consecutive sweeps.
pub fn solve_serial<T: Scalar>(
    model: &WorldModel<T>,
    beta1: T,
    beta2: T,
    num_percepts: usize,
    cfg: &SolverConfig,
) -> Result<TabularSolution<T>> {
    cfg.validate()?;
    if !(beta1 > T::zero() && beta2 > T::zero()) {
        return Err(invalid("inverse temperature", "beta1 and beta2 must be positive"));
    }
    if num_percepts == 0 {
        return Err(invalid("num_percepts", "must be at least 1"));
    }
    let (nw, na) = model.utility().shape();
    let eq = SerialEquations { prior: model.prior(), utility: model.utility(), beta1, beta2 };

    let mut qa: Vec<T> = uniform(na);
    let (mut qx, mut qax): (Vec<T>, Matrix<T>) = match cfg.init {
        Initialization::Uniform => (uniform(num_percepts), Matrix::filled(num_percepts, na, T::one() / T::of(na as f64))),
        Initialization::Jitter { seed, strength } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let qx = jittered(num_percepts, strength, &mut rng);
            let rows: Vec<Vec<T>> = (0..num_percepts).map(|_| jittered(na, strength, &mut rng)).collect();
            (qx, Matrix::from_rows(&rows))
        }
    };
    let mut pxw = Matrix::filled(nw, num_percepts, T::nan());
    let mut trace = Vec::new();
    let mut converged = false;
    let mut change = T::infinity();
    let mut sweep = 0;
    let mut calm = 0;

    while sweep < cfg.max_iterations {
        sweep += 1;
        let next_pxw = eq.perception(&qx, &qax, &qa);
        check_finite(&next_pxw, "p(x|w)", sweep)?;
        let px = eq.percept_marginal(&next_pxw);
        let pax = eq.action(&next_pxw, &px, &qa);
        check_finite(&pax, "p(a|x)", sweep)?;
        let pa = eq.action_marginal(&px, &pax);

        change = if sweep == 1 { T::infinity() } else { next_pxw.max_abs_diff(&pxw) };
        change = change.max(vec_diff(&px, &qx)).max(pax.max_abs_diff(&qax)).max(vec_diff(&pa, &qa));

        pxw = next_pxw;
        qx = px;
        qax = pax;
        qa = pa;

        let sys = JointSystem::new(model.prior().to_vec(), model.utility().clone(), pxw.clone(), qax.clone(), beta1, beta2)?;
        trace.push(SweepRecord { sweep, objective: sys.objective(), max_change: change });
        calm = if change < T::of(cfg.tolerance) { calm + 1 } else { 0 };
        if calm >= cfg.settle_sweeps {
            converged = true;
            break;
        }
    }

    let objective = trace.last().expect("at least one sweep").objective;
    Ok(TabularSolution {
        perception: pxw,
        action: qax,
        marginal_x: qx,
        marginal_a: qa,
        objective,
        iterations: sweep,
        max_change: change,
        converged,
        trace,
    })
}

/// Largest deviation between the solution's tables and the right-hand sides
/// of the four equations evaluated on those same tables.
pub fn fixed_point_residual<T: Scalar>(model: &WorldModel<T>, sol: &TabularSolution<T>, beta1: T, beta2: T) -> T {
    let eq = SerialEquations { prior: model.prior(), utility: model.utility(), beta1, beta2 };
    let r9 = eq.perception(&sol.marginal_x, &sol.action, &sol.marginal_a).max_abs_diff(&sol.perception);
    let r10 = vec_diff(&eq.percept_marginal(&sol.perception), &sol.marginal_x);
    let r11 = eq.action(&sol.perception, &sol.marginal_x, &sol.marginal_a).max_abs_diff(&sol.action);
    let r12 = vec_diff(&eq.action_marginal(&sol.marginal_x, &sol.action), &sol.marginal_a);
    r9.max(r10).max(r11).max(r12)
}

/// Result of several independently seeded [`solve_serial`] runs.
#[derive(Clone, Debug)]
pub struct RestartReport<T> {
    pub best: TabularSolution<T>,
    pub best_index: usize,
    /// Final `J` of every restart, in restart order.
    pub values: Vec<T>,
    /// Whether every restart reached the best `J` within `agreement_tolerance`.
    pub agree: bool,
}

pub const RESTART_AGREEMENT: f64 = 1e-6;

/// Runs `restarts` jittered solves (seeds `seed, seed+1, ...`) in parallel
/// and keeps the highest `J`, lowest restart index on ties.
pub fn solve_serial_restarts<T: Scalar>(
    model: &WorldModel<T>,
    beta1: T,
    beta2: T,
    num_percepts: usize,
    cfg: &SolverConfig,
    restarts: usize,
) -> Result<RestartReport<T>> {
    if restarts == 0 {
        return Err(invalid("restarts", "must be at least 1"));
    }
    let base_seed = match cfg.init {
        Initialization::Jitter { seed, .. } => seed,
        Initialization::Uniform => return Err(invalid("restarts", "uniform initialization cannot be restarted")),
    };
    let solutions = (0..restarts)
        .into_par_iter()
        .map(|i| solve_serial(model, beta1, beta2, num_percepts, &cfg.with_seed(base_seed + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<T> = solutions.iter().map(|s| s.objective.value).collect();
    let mut best_index = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best_index] {
            best_index = i;
        }
    }
    let best_value = values[best_index];
    let agree = values.iter().all(|&v| (best_value - v).abs() < T::of(RESTART_AGREEMENT));
    let best = solutions.into_iter().nth(best_index).expect("index in range");
    Ok(RestartReport { best, best_index, values, agree })
}

/// Convergence trace as CSV: `sweep,J,I_omega_x,I_x_a,max_change`.
pub fn sweep_trace_csv<T: Scalar>(trace: &[SweepRecord<T>], unit: InfoUnit) -> String {
    let mut out = String::from("sweep,J,I_omega_x,I_x_a,max_change\n");
    for r in trace {
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.6e}",
            r.sweep,
            r.objective.value.to_f64_lossy(),
            r.objective.info_world_percept_in(unit).to_f64_lossy(),
            r.objective.info_percept_action_in(unit).to_f64_lossy(),
            r.max_change.to_f64_lossy(),
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Encoder;

    fn model(utility: Matrix<f64>) -> WorldModel<f64> {
        let nw = utility.rows();
        WorldModel::new(uniform(nw), utility, Encoder::binary_for(nw)).unwrap()
    }

    fn bits(nats: f64) -> f64 {
        InfoUnit::Bits.from_nats(nats)
    }

    #[test]
    fn tiny_beta_acts_according_to_prior() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0, 0.3], vec![0.0, 1.0, 0.2]]));
        // Contraction is O(beta) per sweep, so the budget runs out before the
        // table change drops below tolerance; the channel is already the prior.
        let sol = solve_rate_distortion(&m, 1e-8, &SolverConfig::default()).unwrap();
        assert!(bits(sol.information) < 1e-6);
        for w in 0..2 {
            for a in 0..3 {
                assert!((sol.channel[(w, a)] - sol.marginal[a]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn large_beta_on_identity_utility_is_nearly_deterministic() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));
        let sol = solve_rate_distortion(&m, 50.0, &SolverConfig { init: Initialization::Uniform, ..Default::default() })
            .unwrap();
        let i = bits(sol.information);
        assert!((0.99..=1.0).contains(&i), "{i}");
        assert!(sol.channel[(0, 0)] > 0.999);
    }

    #[test]
    fn constant_utility_keeps_initial_marginal() {
        let m = model(Matrix::filled(3, 4, 0.7));
        let sol = solve_rate_distortion(&m, 5.0, &SolverConfig::default()).unwrap();
        assert!(sol.information.abs() < 1e-15);
        let init: Vec<f64> = jittered(4, 1.0, &mut ChaCha8Rng::seed_from_u64(0));
        for (a, b) in sol.marginal.iter().zip(&init) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn single_stage_objective_never_decreases() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let m = model(Matrix::from_fn(5, 4, |_, _| rng.gen_range(-1.0..1.0)));
            let sol = solve_rate_distortion(&m, 3.0, &SolverConfig::default().with_seed(rng.gen())).unwrap();
            for pair in sol.objective_trace.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-12, "{pair:?}");
            }
        }
    }

    #[test]
    fn vanishing_action_beta_collapses_action_channel() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]]));
        let sol = solve_serial(&m, 5.0, 1e-8, 3, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert!(bits(sol.objective.info_percept_action) < 1e-6);
        for x in 0..3 {
            for a in 0..2 {
                assert!((sol.action[(x, a)] - sol.marginal_a[a]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn single_percept_carries_no_information() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]));
        let sol = solve_serial(&m, 3.0, 2.0, 1, &SolverConfig::default()).unwrap();
        assert!(sol.objective.info_world_percept.abs() < 1e-15);
        // The action stage then solves a prior-only trade-off: all mass on the best average action.
        assert!(sol.action[(0, 1)] > 0.99);
    }

    #[test]
    fn uniform_start_is_a_stuck_fixed_point() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));
        let cfg = SolverConfig { init: Initialization::Uniform, ..Default::default() };
        let sol = solve_serial(&m, 10.0, 10.0, 2, &cfg).unwrap();
        assert!(sol.objective.info_world_percept.abs() < 1e-12);
        let jit = solve_serial(&m, 10.0, 10.0, 2, &SolverConfig::default()).unwrap();
        assert!(jit.objective.value > sol.objective.value + 0.1);
    }

    #[test]
    fn converged_serial_solution_is_a_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = model(Matrix::from_fn(6, 4, |_, _| rng.gen_range(0.0..2.0)));
        let sol = solve_serial(&m, 4.0, 3.0, 5, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert!(fixed_point_residual(&m, &sol, 4.0, 3.0) < 1e-8);
        let partition_ok = sol.perception.as_slice().iter().all(|p| p.is_finite());
        assert!(partition_ok);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));
        let cfg = SolverConfig { max_iterations: 2, ..Default::default() };
        let sol = solve_serial(&m, 3.0, 3.0, 2, &cfg).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 2);
    }

    #[test]
    fn rejects_bad_config() {
        let m = model(Matrix::zeros(2, 2));
        assert!(solve_serial(&m, 0.0, 1.0, 2, &SolverConfig::default()).is_err());
        let cfg = SolverConfig { tolerance: 0.0, ..Default::default() };
        assert!(solve_serial(&m, 1.0, 1.0, 2, &cfg).is_err());
        assert!(solve_rate_distortion(&m, -1.0, &SolverConfig::default()).is_err());
    }

    #[test]
    fn restarts_pick_best_deterministically() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = model(Matrix::from_fn(5, 5, |_, _| rng.gen_range(0.0..3.0)));
        let a = solve_serial_restarts(&m, 6.0, 6.0, 5, &SolverConfig::default(), 4).unwrap();
        let b = solve_serial_restarts(&m, 6.0, 6.0, 5, &SolverConfig::default(), 4).unwrap();
        assert_eq!(a.best_index, b.best_index);
        assert_eq!(a.values, b.values);
        assert!(a.values.iter().all(|&v| v <= a.best.objective.value));
    }

    #[test]
    fn trace_csv_header() {
        let m = model(Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));
        let sol = solve_serial(&m, 2.0, 2.0, 2, &SolverConfig::default()).unwrap();
        let csv = sweep_trace_csv(&sol.trace, InfoUnit::Bits);
        assert!(csv.starts_with("sweep,J,I_omega_x,I_x_a,max_change\n1,"));
        assert_eq!(csv.lines().count(), sol.trace.len() + 1);
    }
}
