//! Exact information quantities over the discrete chain `W -> X -> A`.
//!
//! Everything here is computed in nats with the convention `0 log 0 = 0`;
//! [`InfoUnit`] converts for display.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InfoUnit {
    #[default]
    Bits,
    Nats,
}

impl InfoUnit {
    pub fn from_nats<T: Scalar>(self, nats: T) -> T {
        match self {
            InfoUnit::Nats => nats,
            InfoUnit::Bits => nats / T::of(std::f64::consts::LN_2),
        }
    }
}

impl fmt::Display for InfoUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfoUnit::Bits => "bits",
            InfoUnit::Nats => "nats",
        })
    }
}

impl FromStr for InfoUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bits" => Ok(InfoUnit::Bits),
            "nats" => Ok(InfoUnit::Nats),
            other => Err(format!("unknown unit {other:?} (expected bits or nats)")),
        }
    }
}

const ROW_TOL: f64 = 1e-10;

fn check_distribution<T: Scalar>(what: &'static str, p: &[T]) -> Result<()> {
    if p.iter().any(|&x| !(x >= T::zero())) {
        return Err(invalid(what, "entries must be nonnegative"));
    }
    let s: T = p.iter().copied().sum();
    if (s - T::one()).abs() > T::of(ROW_TOL).max(T::epsilon() * T::of(64.0)) {
        return Err(invalid(what, format!("sums to {s}, expected 1")));
    }
    Ok(())
}

fn x_log_ratio<T: Scalar>(p: T, q: T) -> T {
    if p == T::zero() {
        T::zero()
    } else {
        p * (p / q).ln()
    }
}

/// `I(U;V)` in nats for a joint distribution given as a matrix.
pub fn mutual_information<T: Scalar>(joint: &Matrix<T>) -> Result<T> {
    check_distribution("joint distribution", joint.as_slice())?;
    let row: Vec<T> = joint.iter_rows().map(|r| r.iter().copied().sum()).collect();
    let col: Vec<T> = (0..joint.cols()).map(|c| joint.column(c).into_iter().sum()).collect();
    let mut mi = T::zero();
    for (u, r) in joint.iter_rows().enumerate() {
        for (v, &p) in r.iter().enumerate() {
            mi += x_log_ratio(p, row[u] * col[v]);
        }
    }
    Ok(mi)
}

/// `D_KL(p || q)` in nats. Fails when `p` puts mass where `q` has none.
pub fn kl_divergence<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::Dimension { what: "KL arguments", expected: p.len(), got: q.len() });
    }
    let mut kl = T::zero();
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > T::zero() && qi <= T::zero() {
            return Err(Error::InfiniteDivergence { index: i });
        }
        kl += x_log_ratio(pi, qi);
    }
    Ok(kl.max(T::zero()))
}

/// Shannon entropy in nats.
pub fn entropy<T: Scalar>(p: &[T]) -> T {
    -p.iter().map(|&x| if x > T::zero() { x * x.ln() } else { T::zero() }).sum::<T>()
}

/// Total-variation distance `0.5 * sum |p - q|`.
pub fn total_variation<T: Scalar>(p: &[T], q: &[T]) -> T {
    p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum::<T>() * T::of(0.5)
}

/// Exact marginals `p(x)` and `p(a)` of a [`JointSystem`].
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals<T> {
    pub x: Vec<T>,
    pub a: Vec<T>,
}

/// Objective `J` and its parts, all in nats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objective<T> {
    pub value: T,
    pub expected_utility: T,
    pub info_world_percept: T,
    pub info_percept_action: T,
}

impl<T: Scalar> Objective<T> {
    /// `I(W;X)` in `unit`, clamped at zero.
    pub fn info_world_percept_in(&self, unit: InfoUnit) -> T {
        unit.from_nats(self.info_world_percept.max(T::zero()))
    }

    pub fn info_percept_action_in(&self, unit: InfoUnit) -> T {
        unit.from_nats(self.info_percept_action.max(T::zero()))
    }
}

/// Prior, utility, both channel tables and the two inverse temperatures.
#[derive(Clone, Debug)]
pub struct JointSystem<T> {
    prior: Vec<T>,
    utility: Matrix<T>,
    perception: Matrix<T>,
    action: Matrix<T>,
    beta1: T,
    beta2: T,
}

impl<T: Scalar> JointSystem<T> {
    /// `perception` is `p(x|w)` (`|W| x |X|`), `action` is `p(a|x)` (`|X| x |A|`).
    pub fn new(
        prior: Vec<T>,
        utility: Matrix<T>,
        perception: Matrix<T>,
        action: Matrix<T>,
        beta1: T,
        beta2: T,
    ) -> Result<Self> {
        let (nw, na) = utility.shape();
        if prior.len() != nw {
            return Err(Error::Dimension { what: "prior", expected: nw, got: prior.len() });
        }
        if perception.rows() != nw {
            return Err(Error::Dimension { what: "perception rows", expected: nw, got: perception.rows() });
        }
        if action.rows() != perception.cols() {
            return Err(Error::Dimension { what: "action rows", expected: perception.cols(), got: action.rows() });
        }
        if action.cols() != na {
            return Err(Error::Dimension { what: "action columns", expected: na, got: action.cols() });
        }
        if !(beta1 > T::zero() && beta2 > T::zero()) {
            return Err(invalid("inverse temperature", "beta1 and beta2 must be positive"));
        }
        check_distribution("prior", &prior)?;
        for r in perception.iter_rows() {
            check_distribution("perceptual channel row", r)?;
        }
        for r in action.iter_rows() {
            check_distribution("action channel row", r)?;
        }
        Ok(JointSystem { prior, utility, perception, action, beta1, beta2 })
    }

    pub fn prior(&self) -> &[T] {
        &self.prior
    }

    pub fn utility(&self) -> &Matrix<T> {
        &self.utility
    }

    pub fn perception(&self) -> &Matrix<T> {
        &self.perception
    }

    pub fn action(&self) -> &Matrix<T> {
        &self.action
    }

    pub fn betas(&self) -> (T, T) {
        (self.beta1, self.beta2)
    }

    pub fn marginal_x(&self) -> Vec<T> {
        self.perception.left_mul(&self.prior)
    }

    pub fn marginal_a(&self) -> Vec<T> {
        self.action.left_mul(&self.marginal_x())
    }

    pub fn marginals(&self) -> Marginals<T> {
        let x = self.marginal_x();
        let a = self.action.left_mul(&x);
        Marginals { x, a }
    }

    /// `p(w, x)`.
    pub fn joint_world_percept(&self) -> Matrix<T> {
        Matrix::from_fn(self.perception.rows(), self.perception.cols(), |w, x| {
            self.prior[w] * self.perception[(w, x)]
        })
    }

    /// `p(x, a)`.
    pub fn joint_percept_action(&self) -> Matrix<T> {
        let px = self.marginal_x();
        Matrix::from_fn(self.action.rows(), self.action.cols(), |x, a| px[x] * self.action[(x, a)])
    }

    /// End-to-end behavior `p(a|w) = sum_x p(x|w) p(a|x)`.
    pub fn behavior(&self) -> Matrix<T> {
        let rows: Vec<Vec<T>> = self.perception.iter_rows().map(|r| self.action.left_mul(r)).collect();
        Matrix::from_rows(&rows)
    }

    /// Free-energy difference of the action stage,
    /// `E_{p(a|x)}[U(w,a)] - D_KL(p(.|x) || p(a)) / beta2`.
    pub fn free_energy_diff(&self, world: usize, percept: usize) -> Result<T> {
        self.free_energy_diff_with(&self.marginal_a(), world, percept)
    }

    pub fn free_energy_diff_with(&self, marginal_a: &[T], world: usize, percept: usize) -> Result<T> {
        let row = self.action.row(percept);
        let eu: T = row.iter().zip(self.utility.row(world)).map(|(&p, &u)| p * u).sum();
        Ok(eu - kl_divergence(row, marginal_a)? / self.beta2)
    }

    pub fn expected_utility(&self) -> T {
        let behavior = self.behavior();
        let mut eu = T::zero();
        for (w, &pw) in self.prior.iter().enumerate() {
            for (&p, &u) in behavior.row(w).iter().zip(self.utility.row(w)) {
                eu += pw * p * u;
            }
        }
        eu
    }

    /// `J = E[U] - I(W;X)/beta1 - I(X;A)/beta2`.
    pub fn objective(&self) -> Objective<T> {
        let eu = self.expected_utility();
        let iwx = mutual_information(&self.joint_world_percept()).expect("validated tables");
        let ixa = mutual_information(&self.joint_percept_action()).expect("validated tables");
        Objective {
            value: eu - iwx / self.beta1 - ixa / self.beta2,
            expected_utility: eu,
            info_world_percept: iwx,
            info_percept_action: ixa,
        }
    }

    /// Per-sample integrand `j(w, x, a)`, so that `J = sum p(w,x,a) j(w,x,a)`.
    pub fn sample_integrand(&self, marginals: &Marginals<T>, world: usize, percept: usize, action: usize) -> Result<T> {
        let pxw = self.perception[(world, percept)];
        let pax = self.action[(percept, action)];
        integrand(
            self.utility[(world, action)],
            pxw.ln(),
            marginals.x[percept].ln(),
            pax.ln(),
            marginals.a[action].ln(),
            self.beta1,
            self.beta2,
        )
        .ok_or(Error::ZeroProbability { what: zero_what(pxw, pax), world, percept, action })
    }
}

fn zero_what<T: Scalar>(pxw: T, _pax: T) -> &'static str {
    if pxw == T::zero() {
        "p(x|w)"
    } else {
        "p(a|x)"
    }
}

/// `u - (log p(x|w) - log p(x)) / beta1 - (log p(a|x) - log p(a)) / beta2`, or
/// `None` when any log-probability is `-inf` (a probability-zero triplet).
pub fn integrand<T: Scalar>(
    utility: T,
    log_p_x_given_w: T,
    log_p_x: T,
    log_p_a_given_x: T,
    log_p_a: T,
    beta1: T,
    beta2: T,
) -> Option<T> {
    let logs = [log_p_x_given_w, log_p_x, log_p_a_given_x, log_p_a];
    if logs.iter().any(|l| !l.is_finite()) {
        return None;
    }
    Some(utility - (log_p_x_given_w - log_p_x) / beta1 - (log_p_a_given_x - log_p_a) / beta2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_stochastic(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<f64> {
        let mut m = Matrix::from_fn(rows, cols, |_, _| r.gen_range(0.01..1.0));
        for i in 0..rows {
            let s: f64 = m.row(i).iter().sum();
            m.row_mut(i).iter_mut().for_each(|x| *x /= s);
        }
        m
    }

    fn random_system(r: &mut ChaCha8Rng, nw: usize, nx: usize, na: usize) -> JointSystem<f64> {
        let prior = random_stochastic(r, 1, nw).row(0).to_vec();
        let u = Matrix::from_fn(nw, na, |_, _| r.gen_range(-1.0..2.0));
        JointSystem::new(prior, u, random_stochastic(r, nw, nx), random_stochastic(r, nx, na), 1.7, 0.9).unwrap()
    }

    #[test]
    fn identity_channel_with_uniform_prior_has_uniform_marginal() {
        let sys = JointSystem::<f64>::new(
            vec![0.25; 4],
            Matrix::zeros(4, 2),
            Matrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.0 }),
            Matrix::filled(4, 2, 0.5),
            1.0,
            1.0,
        )
        .unwrap();
        assert_eq!(sys.marginal_x(), vec![0.25; 4]);
        let mi = mutual_information(&sys.joint_world_percept()).unwrap();
        assert!((InfoUnit::Bits.from_nats(mi) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identical_action_rows_fix_marginal_a() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let row = vec![0.1, 0.6, 0.3];
        let sys = JointSystem::new(
            vec![0.2, 0.8],
            Matrix::zeros(2, 3),
            random_stochastic(&mut r, 2, 4),
            Matrix::from_rows(&vec![row.clone(); 4]),
            1.0,
            1.0,
        )
        .unwrap();
        for (a, b) in sys.marginal_a().iter().zip(&row) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn marginals_match_triple_loop() {
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let sys = random_system(&mut r, 5, 3, 4);
        let mut px = [0.0; 3];
        let mut pa = [0.0; 4];
        for w in 0..5 {
            for x in 0..3 {
                for a in 0..4 {
                    let p = sys.prior()[w] * sys.perception()[(w, x)] * sys.action()[(x, a)];
                    px[x] += p;
                    pa[a] += p;
                }
            }
        }
        let m = sys.marginals();
        for x in 0..3 {
            assert!((m.x[x] - px[x]).abs() < 1e-12);
        }
        for a in 0..4 {
            assert!((m.a[a] - pa[a]).abs() < 1e-12);
        }
        assert!((m.x.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_joint_has_zero_information() {
        let u = [0.2, 0.3, 0.5];
        let v = [0.6, 0.4];
        let joint: Matrix<f64> = Matrix::from_fn(3, 2, |i, j| u[i] * v[j]);
        assert!(mutual_information(&joint).unwrap().abs() < 1e-15);
    }

    #[test]
    fn mutual_information_matches_double_loop() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let mut joint = Matrix::from_fn(6, 5, |_, _| r.gen_range(0.0..1.0));
        let s: f64 = joint.as_slice().iter().sum();
        joint.scale(1.0 / s);
        let mut brute = 0.0;
        for i in 0..6 {
            for j in 0..5 {
                let pi: f64 = (0..5).map(|k| joint[(i, k)]).sum();
                let pj: f64 = (0..6).map(|k| joint[(k, j)]).sum();
                brute += joint[(i, j)] * (joint[(i, j)] / (pi * pj)).ln();
            }
        }
        assert!((mutual_information(&joint).unwrap() - brute).abs() < 1e-12);
        let mut neg = joint.clone();
        neg[(0, 0)] = -neg[(0, 0)];
        assert!(mutual_information(&neg).is_err());
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        let kl: f64 = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((InfoUnit::Bits.from_nats(kl) - 1.0).abs() < 1e-15);
        assert!(matches!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), Err(Error::InfiniteDivergence { index: 1 })));
        let p = [0.1f64, 0.2, 0.7];
        let q = [0.3f64, 0.3, 0.4];
        let direct: f64 = (0..3).map(|i| p[i] * (p[i] / q[i]).ln()).sum();
        assert!((kl_divergence(&p, &q).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn free_energy_diff_reduces_to_expected_utility_at_marginal() {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        let base = random_system(&mut r, 3, 2, 3);
        let pa = base.marginal_a();
        // Rows equal to a fixed distribution make that distribution the marginal.
        let sys = JointSystem::new(
            base.prior().to_vec(),
            base.utility().clone(),
            base.perception().clone(),
            Matrix::from_rows(&vec![pa.clone(); 2]),
            1.0,
            2.0,
        )
        .unwrap();
        for w in 0..3 {
            let eu: f64 = (0..3).map(|a| pa[a] * sys.utility()[(w, a)]).sum();
            assert!((sys.free_energy_diff(w, 1).unwrap() - eu).abs() < 1e-14);
        }
    }

    #[test]
    fn free_energy_diff_matches_formula() {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let sys = random_system(&mut r, 4, 3, 5);
        let pa = sys.marginal_a();
        for w in 0..4 {
            for x in 0..3 {
                let row = sys.action().row(x);
                let eu: f64 = (0..5).map(|a| row[a] * sys.utility()[(w, a)]).sum();
                let kl: f64 = (0..5).map(|a| row[a] * (row[a] / pa[a]).ln()).sum();
                assert!((sys.free_energy_diff(w, x).unwrap() - (eu - kl / 0.9)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_channels_give_zero_information() {
        let prior = vec![0.5, 0.3, 0.2];
        let pa = vec![0.1, 0.9];
        let u = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 1.0]]);
        let sys = JointSystem::new(
            prior.clone(),
            u.clone(),
            Matrix::from_rows(&vec![vec![0.25, 0.75]; 3]),
            Matrix::from_rows(&vec![pa.clone(); 2]),
            2.0,
            3.0,
        )
        .unwrap();
        let obj = sys.objective();
        let expected: f64 = (0..3).flat_map(|w| (0..2).map(move |a| (w, a))).map(|(w, a)| prior[w] * pa[a] * u[(w, a)]).sum();
        assert!((obj.value - expected).abs() < 1e-14);
        assert!(obj.info_world_percept.abs() < 1e-15 && obj.info_percept_action.abs() < 1e-15);
        let m = sys.marginals();
        for w in 0..3 {
            for a in 0..2 {
                assert!((sys.sample_integrand(&m, w, 1, a).unwrap() - u[(w, a)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_utility_objective_is_nonpositive() {
        let mut r = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let s = random_system(&mut r, 4, 3, 3);
            let sys = JointSystem::new(
                s.prior().to_vec(),
                Matrix::zeros(4, 3),
                s.perception().clone(),
                s.action().clone(),
                1.0,
                1.0,
            )
            .unwrap();
            assert!(sys.objective().value <= 0.0);
        }
    }

    #[test]
    fn hand_built_two_by_two_by_two() {
        // p(w) = [0.5, 0.5], p(x|w) = [[0.8, 0.2], [0.2, 0.8]], p(a|x) = [[0.9, 0.1], [0.3, 0.7]].
        let sys = JointSystem::<f64>::new(
            vec![0.5, 0.5],
            Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
            Matrix::from_rows(&[vec![0.8, 0.2], vec![0.2, 0.8]]),
            Matrix::from_rows(&[vec![0.9, 0.1], vec![0.3, 0.7]]),
            1.0,
            1.0,
        )
        .unwrap();
        let m = sys.marginals();
        // p(x) = [0.5, 0.5]; p(a) = [0.6, 0.4].
        assert!((m.a[0] - 0.6).abs() < 1e-15);
        // j(0, 0, 0) = 1 - ln(0.8/0.5) - ln(0.9/0.6)
        let hand = 1.0 - (1.6f64).ln() - (1.5f64).ln();
        assert!((sys.sample_integrand(&m, 0, 0, 0).unwrap() - hand).abs() < 1e-15);
        // j(1, 0, 1) = 1 - ln(0.2/0.5) - ln(0.1/0.4)
        let hand = 1.0 - (0.4f64).ln() - (0.25f64).ln();
        assert!((sys.sample_integrand(&m, 1, 0, 1).unwrap() - hand).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_triplet_is_an_error() {
        let sys = JointSystem::new(
            vec![0.5, 0.5],
            Matrix::zeros(2, 2),
            Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
            Matrix::filled(2, 2, 0.5),
            1.0,
            1.0,
        )
        .unwrap();
        let m = sys.marginals();
        assert!(matches!(sys.sample_integrand(&m, 0, 1, 0), Err(Error::ZeroProbability { what: "p(x|w)", .. })));
    }
}
