//! Parametric perception and action channels with closed-form score functions.
//!
//! The perceptual channel is a one-hidden-layer network
//! `p(x | xi) = softmax(tanh(xi^T V) W)` without bias terms. The action channel
//! is a multinomial in exponential-family form: for `n = |A| - 1` free
//! parameters per percept, `p(a_i | x) = exp(eta_i^x - psi(eta^x))` for
//! `i = 1..n`, and action 0 takes the remaining mass.

use std::fmt::Write as _;

use rand::Rng;

use crate::env::WorldModel;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{inverse_cdf, log_sum_exp, softmax_in_place, Scalar};

/// Hidden activations and output distribution for one input.
#[derive(Clone, Debug)]
pub struct Activations<T> {
    pub hidden: Vec<T>,
    pub logits: Vec<T>,
    pub probs: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerceptualNetwork<T> {
    v: Matrix<T>,
    w: Matrix<T>,
}

impl<T: Scalar> PerceptualNetwork<T> {
    /// `v` is `input_dim x hidden`, `w` is `hidden x num_percepts`.
    pub fn new(v: Matrix<T>, w: Matrix<T>) -> Result<Self> {
        if v.cols() != w.rows() {
            return Err(Error::Dimension { what: "hidden layer", expected: v.cols(), got: w.rows() });
        }
        if v.rows() == 0 || v.cols() == 0 || w.cols() == 0 {
            return Err(crate::error::invalid("network", "all layer sizes must be positive"));
        }
        Ok(PerceptualNetwork { v, w })
    }

    pub fn zeros(input_dim: usize, hidden: usize, num_percepts: usize) -> Self {
        PerceptualNetwork { v: Matrix::zeros(input_dim, hidden), w: Matrix::zeros(hidden, num_percepts) }
    }

    /// Glorot-uniform initialization: each layer is drawn from
    /// `U(-b, b)` with `b = sqrt(6 / (fan_in + fan_out))`, `V` first, row-major.
    pub fn glorot<R: Rng + ?Sized>(input_dim: usize, hidden: usize, num_percepts: usize, rng: &mut R) -> Self {
        PerceptualNetwork {
            v: glorot_matrix(input_dim, hidden, rng),
            w: glorot_matrix(hidden, num_percepts, rng),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.v.rows()
    }

    pub fn hidden_dim(&self) -> usize {
        self.v.cols()
    }

    pub fn num_percepts(&self) -> usize {
        self.w.cols()
    }

    pub fn v(&self) -> &Matrix<T> {
        &self.v
    }

    pub fn w(&self) -> &Matrix<T> {
        &self.w
    }

    pub fn v_mut(&mut self) -> &mut Matrix<T> {
        &mut self.v
    }

    pub fn w_mut(&mut self) -> &mut Matrix<T> {
        &mut self.w
    }

    fn check_input(&self, xi: &[T]) {
        assert_eq!(xi.len(), self.input_dim(), "input dimension mismatch");
    }

    pub fn activations(&self, xi: &[T]) -> Activations<T> {
        self.check_input(xi);
        let hidden: Vec<T> = self.v.left_mul(xi).into_iter().map(T::tanh).collect();
        let logits = self.w.left_mul(&hidden);
        let mut probs = logits.clone();
        softmax_in_place(&mut probs);
        Activations { hidden, logits, probs }
    }

    /// `p(. | xi)`.
    pub fn forward(&self, xi: &[T]) -> Vec<T> {
        self.activations(xi).probs
    }

    pub fn log_prob(&self, xi: &[T], percept: usize) -> T {
        let act = self.activations(xi);
        act.logits[percept] - log_sum_exp(&act.logits)
    }

    /// Gradient of `log p(percept | xi)` with respect to `V`.
    pub fn grad_log_v(&self, xi: &[T], percept: usize) -> Matrix<T> {
        let act = self.activations(xi);
        self.grad_log_v_with(&act, xi, percept)
    }

    /// As [`grad_log_v`](Self::grad_log_v), reusing precomputed activations.
    pub fn grad_log_v_with(&self, act: &Activations<T>, xi: &[T], percept: usize) -> Matrix<T> {
        assert!(percept < self.num_percepts(), "percept index out of range");
        // delta_c = phi'(z_c) * (W[c, i] - sum_k p_k W[c, k])
        let delta: Vec<T> = (0..self.hidden_dim())
            .map(|c| {
                let row = self.w.row(c);
                let expected: T = row.iter().zip(&act.probs).map(|(&w, &p)| w * p).sum();
                let h = act.hidden[c];
                (T::one() - h * h) * (row[percept] - expected)
            })
            .collect();
        Matrix::from_fn(self.input_dim(), self.hidden_dim(), |r, c| xi[r] * delta[c])
    }

    /// Gradient of `log p(percept | xi)` with respect to `W`.
    pub fn grad_log_w(&self, xi: &[T], percept: usize) -> Matrix<T> {
        let act = self.activations(xi);
        self.grad_log_w_with(&act, percept)
    }

    pub fn grad_log_w_with(&self, act: &Activations<T>, percept: usize) -> Matrix<T> {
        assert!(percept < self.num_percepts(), "percept index out of range");
        Matrix::from_fn(self.hidden_dim(), self.num_percepts(), |c, j| {
            let indicator = if j == percept { T::one() } else { T::zero() };
            (indicator - act.probs[j]) * act.hidden[c]
        })
    }

    /// Inverse-CDF draw from `p(. | xi)` with a single uniform.
    pub fn sample_percept<R: Rng + ?Sized>(&self, xi: &[T], rng: &mut R) -> usize {
        inverse_cdf(&self.forward(xi), rng.gen::<f64>())
    }

    /// Tabular `p(x | w)` over the noise-free encodings of every world.
    pub fn conditional_table(&self, model: &WorldModel<T>) -> Matrix<T> {
        let rows: Vec<Vec<T>> = (0..model.num_worlds()).map(|w| self.forward(&model.encode_clean(w))).collect();
        Matrix::from_rows(&rows)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.w.is_finite()
    }
}

fn glorot_matrix<T: Scalar, R: Rng + ?Sized>(fan_in: usize, fan_out: usize, rng: &mut R) -> Matrix<T> {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    Matrix::from_fn(fan_in, fan_out, |_, _| T::of(rng.gen_range(-bound..bound)))
}

/// Multinomial action channel. `eta` is `(|A| - 1) x |X|`; column `x` holds the
/// natural parameters used when the percept is `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionChannel<T> {
    eta: Matrix<T>,
}

impl<T: Scalar> ActionChannel<T> {
    pub fn new(eta: Matrix<T>) -> Result<Self> {
        if eta.cols() == 0 {
            return Err(crate::error::invalid("action channel", "needs at least one percept"));
        }
        Ok(ActionChannel { eta })
    }

    /// All-zero parameters: every action equally likely under every percept.
    pub fn uniform(num_actions: usize, num_percepts: usize) -> Self {
        assert!(num_actions >= 1 && num_percepts >= 1);
        ActionChannel { eta: Matrix::zeros(num_actions - 1, num_percepts) }
    }

    pub fn num_actions(&self) -> usize {
        self.eta.rows() + 1
    }

    pub fn num_percepts(&self) -> usize {
        self.eta.cols()
    }

    pub fn eta(&self) -> &Matrix<T> {
        &self.eta
    }

    pub fn eta_mut(&mut self) -> &mut Matrix<T> {
        &mut self.eta
    }

    /// Logits with the complement action pinned at zero: `[0, eta_1^x, ..., eta_n^x]`.
    fn logits(&self, percept: usize) -> Vec<T> {
        assert!(percept < self.num_percepts(), "percept index out of range");
        std::iter::once(T::zero()).chain(self.eta.column(percept)).collect()
    }

    /// `psi(eta^x) = log(1 + sum_i exp(eta_i^x))`.
    pub fn psi(&self, percept: usize) -> T {
        log_sum_exp(&self.logits(percept))
    }

    /// `p(. | x)`; entry 0 is the complement `1 - sum_{i>=1} p(a_i | x)`.
    pub fn probs(&self, percept: usize) -> Vec<T> {
        let psi = self.psi(percept);
        let mut p: Vec<T> = self.logits(percept).into_iter().map(|l| (l - psi).exp()).collect();
        let rest: T = p[1..].iter().copied().sum();
        p[0] = (T::one() - rest).max(T::zero());
        p
    }

    pub fn log_prob(&self, percept: usize, action: usize) -> T {
        let logits = self.logits(percept);
        logits[action] - log_sum_exp(&logits)
    }

    /// Gradient of `log p(action | percept)` with respect to `eta^x`:
    /// component `i` is `[action == i] - p(a_i | x)` for `i = 1..n`.
    pub fn grad_log_eta(&self, percept: usize, action: usize) -> Vec<T> {
        assert!(action < self.num_actions(), "action index out of range");
        let p = self.probs(percept);
        (1..self.num_actions())
            .map(|i| if i == action { T::one() - p[i] } else { -p[i] })
            .collect()
    }

    pub fn sample_action<R: Rng + ?Sized>(&self, percept: usize, rng: &mut R) -> usize {
        inverse_cdf(&self.probs(percept), rng.gen::<f64>())
    }

    /// Tabular `p(a | x)`, `|X| x |A|`.
    pub fn table(&self) -> Matrix<T> {
        let rows: Vec<Vec<T>> = (0..self.num_percepts()).map(|x| self.probs(x)).collect();
        Matrix::from_rows(&rows)
    }

    pub fn is_finite(&self) -> bool {
        self.eta.is_finite()
    }
}

/// Writes network and channel parameters as text: a `dims` line
/// (`input hidden percepts actions`) followed by `V`, `W` and `eta` blocks in
/// row-major order, each value with 17 significant digits.
pub fn write_parameters<T: Scalar>(net: &PerceptualNetwork<T>, ch: &ActionChannel<T>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "dims {} {} {} {}",
        net.input_dim(),
        net.hidden_dim(),
        net.num_percepts(),
        ch.num_actions()
    )
    .unwrap();
    for (name, m) in [("V", net.v()), ("W", net.w()), ("eta", ch.eta())] {
        writeln!(out, "{name}").unwrap();
        for row in m.iter_rows() {
            let line: Vec<String> = row.iter().map(|x| format!("{:.16e}", x.to_f64_lossy())).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
    }
    out
}

/// Inverse of [`write_parameters`].
pub fn read_parameters<T: Scalar>(text: &str) -> Result<(PerceptualNetwork<T>, ActionChannel<T>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let parse_err = |line, reason: &str| Error::Parse { line, reason: reason.to_string() };

    let (n, dims) = lines.next().ok_or_else(|| parse_err(1, "empty snapshot"))?;
    let dims: Vec<usize> = dims
        .strip_prefix("dims")
        .ok_or_else(|| parse_err(n, "expected `dims` line"))?
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(n, "bad dimension"))?;
    let [d, h, nx, na] = dims[..] else {
        return Err(parse_err(n, "expected four dimensions"));
    };
    if na == 0 {
        return Err(parse_err(n, "need at least one action"));
    }

    let mut block = |name: &str, rows: usize, cols: usize| -> Result<Matrix<T>> {
        let (n, tag) = lines.next().ok_or_else(|| parse_err(0, "truncated snapshot"))?;
        if tag != name {
            return Err(parse_err(n, &format!("expected block {name}")));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (n, l) = lines.next().ok_or_else(|| parse_err(0, "truncated snapshot"))?;
            let row: Vec<T> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>().map(T::of))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(n, "bad number"))?;
            if row.len() != cols {
                return Err(parse_err(n, &format!("expected {cols} values")));
            }
            data.extend(row);
        }
        Ok(Matrix::from_vec(rows, cols, data))
    };
    let v = block("V", d, h)?;
    let w = block("W", h, nx)?;
    let eta = block("eta", na - 1, nx)?;
    Ok((PerceptualNetwork::new(v, w)?, ActionChannel::new(eta)?))
}
