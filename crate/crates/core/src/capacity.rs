//! Maximal alpha-leakage as a support-constrained Arimoto capacity.
//!
//! For `alpha` in `(1, inf)` the value is the supremum of Sibson mutual
//! information over inputs supported inside `supp(P_X)`. The objective is
//! concave on the simplex, so the ascent below stops at a certified point:
//! the reported `kkt_residual` is `max_x dI/dP(x) - sum_x P(x) dI/dP(x)`,
//! which bounds the distance to the optimum from above.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LeakageError, Result};
use crate::logsum::log_sum_exp;
use crate::measures::{shannon_mi, snap_zero, MeasureValue};
use crate::prob::{joint_from, normalize_support, AlphaOrder, Channel, Distribution};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Random restarts in addition to the uniform start.
    pub restarts: usize,
    pub seed: u64,
    pub improvement_tol: f64,
    pub kkt_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 100_000,
            restarts: 5,
            seed: 0x5EED_A1FA,
            improvement_tol: 1e-12,
            kkt_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub nats: f64,
    /// Maximizing input on the full input alphabet, zero outside the support.
    pub argmax_input: Distribution,
    pub alpha: AlphaOrder,
    pub iterations: usize,
    pub kkt_residual: f64,
    pub converged: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl CapacityResult {
    pub fn bits(&self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }

    pub fn as_measure(&self) -> MeasureValue {
        MeasureValue {
            nats: self.nats,
            alpha: self.alpha,
        }
    }

    fn closed_form(nats: f64, argmax_input: Distribution, alpha: AlphaOrder) -> Self {
        CapacityResult {
            nats,
            argmax_input,
            alpha,
            iterations: 0,
            kkt_residual: 0.0,
            converged: true,
            diagnostics: BTreeMap::from([("closed_form".to_string(), 1.0)]),
        }
    }
}

/// Sibson objective restricted to a set of input rows, evaluated in the log
/// domain. `log_w[i][y]` is `ln W(y|x_i)`.
struct SibsonObjective {
    alpha: f64,
    log_w: Vec<Vec<f64>>,
}

impl SibsonObjective {
    fn new(channel: &Channel, rows: &[usize], alpha: f64) -> Self {
        let log_w = rows
            .iter()
            .map(|&x| {
                channel
                    .row(x)
                    .probs()
                    .iter()
                    .map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY })
                    .collect()
            })
            .collect();
        SibsonObjective { alpha, log_w }
    }

    fn out_size(&self) -> usize {
        self.log_w.first().map_or(0, Vec::len)
    }

    /// `ln A_y = ln sum_i p_i W(y|i)^alpha` for each `y`.
    fn log_inner(&self, p: &[f64]) -> Vec<f64> {
        let a = self.alpha;
        (0..self.out_size())
            .map(|y| {
                log_sum_exp(
                    p.iter()
                        .zip(&self.log_w)
                        .filter(|(&pi, lw)| pi > 0.0 && lw[y] > f64::NEG_INFINITY)
                        .map(|(&pi, lw)| pi.ln() + a * lw[y]),
                )
            })
            .collect()
    }

    fn log_s(&self, log_a: &[f64]) -> f64 {
        log_sum_exp(log_a.iter().map(|la| la / self.alpha))
    }

    fn value(&self, p: &[f64]) -> f64 {
        let a = self.alpha;
        a / (a - 1.0) * self.log_s(&self.log_inner(p))
    }

    fn value_and_gradient(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let a = self.alpha;
        let log_a = self.log_inner(p);
        let log_s = self.log_s(&log_a);
        let grad = self
            .log_w
            .iter()
            .map(|lw| {
                let mut unbounded = false;
                let lse = log_sum_exp((0..lw.len()).filter_map(|y| {
                    if lw[y] == f64::NEG_INFINITY {
                        None
                    } else if log_a[y] == f64::NEG_INFINITY {
                        // d/dA of A^(1/alpha) blows up at A = 0.
                        unbounded = true;
                        None
                    } else {
                        Some((1.0 / a - 1.0) * log_a[y] + a * lw[y])
                    }
                }));
                if unbounded {
                    f64::INFINITY
                } else {
                    (lse - log_s).exp() / (a - 1.0)
                }
            })
            .collect();
        (a / (a - 1.0) * log_s, grad)
    }
}

fn finite_order_above_one(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(LeakageError::AlphaOutOfRange(alpha))
    }
}

fn check_input_len(channel: &Channel, p: &[f64]) -> Result<()> {
    if p.len() != channel.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: channel.in_size(),
            found: p.len(),
        });
    }
    Ok(())
}

/// Sibson objective `alpha/(alpha-1) ln sum_y (sum_x p(x) W(y|x)^alpha)^(1/alpha)`
/// for an arbitrary non-negative weight vector `p` (not necessarily normalized).
pub fn sibson_objective(channel: &Channel, p: &[f64], alpha: f64) -> Result<f64> {
    finite_order_above_one(alpha)?;
    check_input_len(channel, p)?;
    let rows: Vec<usize> = (0..channel.in_size()).collect();
    Ok(SibsonObjective::new(channel, &rows, alpha).value(p))
}

/// Analytic gradient of [`sibson_objective`] with respect to each `p(x)`.
pub fn sibson_gradient(channel: &Channel, p: &[f64], alpha: f64) -> Result<Vec<f64>> {
    finite_order_above_one(alpha)?;
    check_input_len(channel, p)?;
    let rows: Vec<usize> = (0..channel.in_size()).collect();
    Ok(SibsonObjective::new(channel, &rows, alpha).value_and_gradient(p).1)
}

/// `max_i g_i - sum_i p_i g_i`.
fn frank_wolfe_gap(p: &[f64], g: &[f64]) -> f64 {
    let max = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean: f64 = p.iter().zip(g).filter(|(&pi, _)| pi > 0.0).map(|(pi, gi)| pi * gi).sum();
    (max - mean).max(0.0)
}

struct Ascent {
    p: Vec<f64>,
    value: f64,
    iterations: usize,
    gap: f64,
    converged: bool,
    hit_cap: bool,
    step: f64,
}

const MIN_STEP: f64 = 1e-30;
const MAX_STEP: f64 = 1e12;

fn ascend(obj: &SibsonObjective, start: Vec<f64>, opts: &SolverOptions) -> Ascent {
    let mut p = start;
    let (mut value, mut grad) = obj.value_and_gradient(&p);
    let mut step = 1.0;
    let mut last_improvement = f64::INFINITY;
    let mut iterations = 0;
    loop {
        let gap = frank_wolfe_gap(&p, &grad);
        let done = gap < opts.kkt_tol && last_improvement < opts.improvement_tol;
        if done || iterations >= opts.max_iterations || step < MIN_STEP {
            return Ascent {
                p,
                value,
                iterations,
                gap,
                converged: done,
                hit_cap: iterations >= opts.max_iterations,
                step,
            };
        }
        iterations += 1;
        let gmax = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut cand: Vec<f64> = p
            .iter()
            .zip(&grad)
            .map(|(&pi, &gi)| {
                if gi == f64::INFINITY {
                    pi.max(f64::MIN_POSITIVE)
                } else {
                    // Floor keeps every coordinate revivable after underflow.
                    (pi * (step * (gi - gmax)).exp()).max(1e-300)
                }
            })
            .collect();
        let total: f64 = cand.iter().sum();
        cand.iter_mut().for_each(|c| *c /= total);
        let (cand_value, cand_grad) = obj.value_and_gradient(&cand);
        // Close to the optimum the objective stops resolving progress. A step
        // whose predicted gain is below rounding noise is then judged by the
        // optimality gap instead. The prefactor alpha/(alpha-1) amplifies
        // rounding in the log-sum.
        let noise = 32.0 * f64::EPSILON * value.abs().max(1.0) * obj.alpha / (obj.alpha - 1.0);
        let predicted: f64 = grad.iter().zip(cand.iter().zip(&p)).map(|(g, (c, q))| g * (c - q)).sum();
        let unresolvable = predicted <= noise && cand_value >= value - noise;
        let accept = cand_value > value || (unresolvable && frank_wolfe_gap(&cand, &cand_grad) < gap);
        if accept {
            last_improvement = (cand_value - value).max(0.0);
            p = cand;
            value = cand_value;
            grad = cand_grad;
            step = (step * 2.0).min(MAX_STEP);
        } else {
            if gap < opts.kkt_tol && unresolvable {
                // Optimal to within tolerance and no resolvable progress left.
                last_improvement = 0.0;
            }
            step *= 0.5;
        }
    }
}

fn random_simplex_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| (v / s).max(1e-12)).collect()
}

/// Maximizes Sibson MI over inputs supported within `support`.
pub fn solve_alpha_capacity(
    channel: &Channel,
    support: &[usize],
    alpha: f64,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    finite_order_above_one(alpha)?;
    let support = normalize_support(support, channel.in_size())?;
    let obj = SibsonObjective::new(channel, &support, alpha);
    let k = support.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut runs = vec![ascend(&obj, vec![1.0 / k as f64; k], opts)];
    if k > 1 {
        for _ in 0..opts.restarts {
            runs.push(ascend(&obj, random_simplex_point(&mut rng, k), opts));
        }
    }
    let total_iterations: usize = runs.iter().map(|r| r.iterations).sum();
    let spread = runs.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max)
        - runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let (best_index, best) = runs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .expect("at least one run");

    let mut full = vec![0.0; channel.in_size()];
    for (&x, &pi) in support.iter().zip(&best.p) {
        full[x] = pi;
    }
    let argmax_input = Distribution::new(full)?;
    let diagnostics = BTreeMap::from([
        ("iterations".to_string(), best.iterations as f64),
        ("total_iterations".to_string(), total_iterations as f64),
        ("kkt_residual".to_string(), best.gap),
        ("converged".to_string(), if best.converged { 1.0 } else { 0.0 }),
        ("max_iterations_exceeded".to_string(), if best.hit_cap { 1.0 } else { 0.0 }),
        ("starts".to_string(), runs.len() as f64),
        ("best_start".to_string(), best_index as f64),
        ("restart_value_spread".to_string(), spread),
        ("final_step".to_string(), best.step),
    ]);
    Ok(CapacityResult {
        nats: snap_zero(best.value),
        argmax_input,
        alpha: AlphaOrder::Finite(alpha),
        iterations: best.iterations,
        kkt_residual: best.gap,
        converged: best.converged,
        diagnostics,
    })
}

/// Maximal leakage `ln sum_y max_{x in support} W(y|x)`.
pub fn maxl(channel: &Channel, support: &[usize]) -> Result<f64> {
    let support = normalize_support(support, channel.in_size())?;
    let total: f64 = (0..channel.out_size())
        .map(|y| support.iter().map(|&x| channel.get(x, y)).fold(0.0, f64::max))
        .sum();
    Ok(snap_zero(total.ln()))
}

/// Sibson MI of the uniform input, a lower bound on the capacity that is
/// tight for symmetric channels.
pub fn uniform_sibson_lower_bound(channel: &Channel, alpha: AlphaOrder) -> Result<f64> {
    let n = channel.in_size() as f64;
    match alpha {
        AlphaOrder::Infinity => maxl(channel, &(0..channel.in_size()).collect::<Vec<_>>()),
        AlphaOrder::Finite(a) if a > 1.0 => {
            let log_sum = log_sum_exp((0..channel.out_size()).map(|y| {
                log_sum_exp(
                    channel
                        .rows()
                        .iter()
                        .filter(|r| r.get(y) > 0.0)
                        .map(|r| a * r.get(y).ln()),
                ) / a
            }));
            Ok(snap_zero(a / (a - 1.0) * (log_sum - n.ln() / a)))
        }
        other => Err(LeakageError::AlphaOutOfRange(other.value())),
    }
}

pub fn maximal_alpha_leakage(prior: &Distribution, channel: &Channel, alpha: AlphaOrder) -> Result<CapacityResult> {
    maximal_alpha_leakage_with(prior, channel, alpha, &SolverOptions::default())
}

/// Shannon MI at order one, maximal leakage at infinity, and the
/// support-constrained capacity in between.
pub fn maximal_alpha_leakage_with(
    prior: &Distribution,
    channel: &Channel,
    alpha: AlphaOrder,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    alpha.require_leakage_order()?;
    if prior.len() != channel.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: channel.in_size(),
            found: prior.len(),
        });
    }
    match alpha {
        AlphaOrder::One => Ok(CapacityResult::closed_form(
            shannon_mi(&joint_from(prior, channel)?),
            prior.clone(),
            alpha,
        )),
        AlphaOrder::Infinity => Ok(CapacityResult::closed_form(
            maxl(channel, prior.support())?,
            Distribution::uniform_on(prior.len(), prior.support())?,
            alpha,
        )),
        AlphaOrder::Finite(a) => solve_alpha_capacity(channel, prior.support(), a, opts),
    }
}

/// Naive direct-summation objective used by the grid oracle. Shares no code
/// with the log-domain solver path.
fn direct_objective(rows: &[&[f64]], p: &[f64], alpha: AlphaOrder) -> f64 {
    let m = rows[0].len();
    match alpha {
        AlphaOrder::Finite(a) => {
            let mut s = 0.0;
            for y in 0..m {
                let mut inner = 0.0;
                for (row, &pi) in rows.iter().zip(p) {
                    inner += pi * row[y].powf(a);
                }
                s += inner.powf(1.0 / a);
            }
            a / (a - 1.0) * s.ln()
        }
        AlphaOrder::One => {
            let mut mi = 0.0;
            for y in 0..m {
                let py: f64 = rows.iter().zip(p).map(|(row, pi)| pi * row[y]).sum();
                for (row, &pi) in rows.iter().zip(p) {
                    if pi > 0.0 && row[y] > 0.0 {
                        mi += pi * row[y] * (row[y] / py).ln();
                    }
                }
            }
            mi
        }
        AlphaOrder::Infinity => {
            let mut s = 0.0;
            for y in 0..m {
                let mut best = 0.0f64;
                for (row, &pi) in rows.iter().zip(p) {
                    if pi > 0.0 {
                        best = best.max(row[y]);
                    }
                }
                s += best;
            }
            s.ln()
        }
    }
}

fn for_each_composition(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(remaining: usize, slot: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slot + 1 == buf.len() {
            buf[slot] = remaining;
            f(buf);
            return;
        }
        for v in 0..=remaining {
            buf[slot] = v;
            rec(remaining - v, slot + 1, buf, f);
        }
    }
    let mut buf = vec![0; parts];
    rec(total, 0, &mut buf, f);
}

/// Brute-force capacity: maximum of the objective over the simplex lattice
/// with spacing `resolution`, followed by a derivative-free pattern search
/// around the best lattice point.
pub fn grid_oracle_capacity(channel: &Channel, support: &[usize], alpha: AlphaOrder, resolution: f64) -> Result<f64> {
    let support = normalize_support(support, channel.in_size())?;
    if support.len() > 4 {
        return Err(LeakageError::SupportTooLarge(support.len()));
    }
    if resolution.is_nan() || resolution < 1e-3 {
        return Err(LeakageError::ResolutionTooFine(resolution));
    }
    let rows: Vec<&[f64]> = support.iter().map(|&x| channel.row(x).probs()).collect();
    let k = rows.len();
    let steps = (1.0 / resolution).round().max(1.0) as usize;

    let mut best_value = f64::NEG_INFINITY;
    let mut best = vec![0.0; k];
    let mut p = vec![0.0; k];
    for_each_composition(steps, k, &mut |c| {
        for (pi, &ci) in p.iter_mut().zip(c) {
            *pi = ci as f64 / steps as f64;
        }
        let v = direct_objective(&rows, &p, alpha);
        if v > best_value {
            best_value = v;
            best.copy_from_slice(&p);
        }
    });

    let mut h = 1.0 / steps as f64;
    while h > 1e-11 {
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j || best[j] <= 0.0 {
                    continue;
                }
                let delta = h.min(best[j]);
                let mut cand = best.clone();
                cand[i] += delta;
                cand[j] -= delta;
                let v = direct_objective(&rows, &cand, alpha);
                if v > best_value {
                    best_value = v;
                    best = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok(best_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::sibson_mi;
    use approx::assert_abs_diff_eq;

    const BSC_SIBSON_2: f64 = 0.494696241836107;

    fn full(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn objective_matches_measure() {
        let w = Channel::from_rows(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.6, 0.3]]).unwrap();
        let p = Distribution::new(vec![0.35, 0.65]).unwrap();
        for a in [1.5, 2.0, 30.0] {
            let v = sibson_objective(&w, p.probs(), a).unwrap();
            assert_abs_diff_eq!(v, sibson_mi(&p, &w, AlphaOrder::Finite(a)).unwrap().nats, epsilon = 1e-14);
        }
        assert!(sibson_objective(&w, p.probs(), 1.0).is_err());
        assert!(sibson_objective(&w, &[1.0], 2.0).is_err());
    }

    #[test]
    fn gradient_pairs_to_one_over_alpha_minus_one() {
        // The objective is 1/alpha-homogeneous inside the log, so p . grad = 1/(alpha-1).
        let w = Channel::from_rows(vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.6, 0.3], vec![0.3, 0.3, 0.4]]).unwrap();
        let p = [0.2, 0.5, 0.3];
        for a in [1.2, 3.0, 100.0] {
            let g = sibson_gradient(&w, &p, a).unwrap();
            let dot: f64 = g.iter().zip(&p).map(|(g, p)| g * p).sum();
            assert_abs_diff_eq!(dot, 1.0 / (a - 1.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn maxl_examples() {
        assert_abs_diff_eq!(maxl(&Channel::identity(4).unwrap(), &full(4)).unwrap(), 4f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(maxl(&Channel::bsc(0.1).unwrap(), &full(2)).unwrap(), 0.587786664902119, epsilon = 1e-15);
        let q = Distribution::new(vec![0.3, 0.3, 0.4]).unwrap();
        assert_abs_diff_eq!(maxl(&Channel::rank_one(3, &q).unwrap(), &full(3)).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(maxl(&Channel::bsc(0.1).unwrap(), &[]), Err(LeakageError::EmptySupport));
    }

    #[test]
    fn lower_bound_examples() {
        let b = uniform_sibson_lower_bound(&Channel::bsc(0.1).unwrap(), AlphaOrder::Finite(2.0)).unwrap();
        assert_abs_diff_eq!(b, BSC_SIBSON_2, epsilon = 1e-14);
        let q = Distribution::new(vec![0.3, 0.7]).unwrap();
        let b = uniform_sibson_lower_bound(&Channel::rank_one(3, &q).unwrap(), AlphaOrder::Finite(3.0)).unwrap();
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-14);
        let b = uniform_sibson_lower_bound(&Channel::identity(3).unwrap(), AlphaOrder::Finite(2.0)).unwrap();
        assert_abs_diff_eq!(b, 3f64.ln(), epsilon = 1e-14);
        assert!(uniform_sibson_lower_bound(&Channel::identity(3).unwrap(), AlphaOrder::One).is_err());
    }

    #[test]
    fn solver_examples() {
        let opts = SolverOptions::default();
        for p in [0.01, 0.1, 0.3, 0.45] {
            let r = solve_alpha_capacity(&Channel::bsc(p).unwrap(), &full(2), 2.0, &opts).unwrap();
            assert!(r.converged);
            let tv = r.argmax_input.total_variation(&Distribution::uniform(2).unwrap());
            assert!(tv < 1e-6, "p={p}: tv {tv}");
        }
        let q = Distribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let r = solve_alpha_capacity(&Channel::rank_one(3, &q).unwrap(), &full(3), 3.0, &opts).unwrap();
        assert_abs_diff_eq!(r.nats, 0.0, epsilon = 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn solver_respects_support() {
        let w = Channel::from_rows(vec![vec![0.9, 0.1, 0.0], vec![0.0, 0.2, 0.8], vec![0.3, 0.3, 0.4]]).unwrap();
        let r = solve_alpha_capacity(&w, &[1, 2], 2.0, &SolverOptions::default()).unwrap();
        assert_eq!(r.argmax_input.get(0), 0.0);
        let oracle = grid_oracle_capacity(&w, &[1, 2], AlphaOrder::Finite(2.0), 1e-3).unwrap();
        assert_abs_diff_eq!(r.nats, oracle, epsilon = 1e-8);
    }

    #[test]
    fn solver_handles_zero_columns() {
        let w = Channel::from_rows(vec![vec![0.5, 0.0, 0.5], vec![0.2, 0.0, 0.8]]).unwrap();
        let r = solve_alpha_capacity(&w, &full(2), 4.0, &SolverOptions::default()).unwrap();
        let oracle = grid_oracle_capacity(&w, &full(2), AlphaOrder::Finite(4.0), 1e-3).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.nats, oracle, epsilon = 1e-8);
    }

    #[test]
    fn maximal_leakage_dispatch() {
        let u = Distribution::uniform(2).unwrap();
        let b = Channel::bsc(0.1).unwrap();
        let r = maximal_alpha_leakage(&u, &b, AlphaOrder::One).unwrap();
        assert_abs_diff_eq!(r.nats, 0.368064207168497, epsilon = 1e-14);
        let skewed = Distribution::new(vec![0.8, 0.2]).unwrap();
        let r = maximal_alpha_leakage(&skewed, &b, AlphaOrder::Finite(2.0)).unwrap();
        assert_abs_diff_eq!(r.nats, BSC_SIBSON_2, epsilon = 1e-10);
        for a in [AlphaOrder::Finite(1.5), AlphaOrder::Finite(2.0), AlphaOrder::Finite(10.0), AlphaOrder::Infinity] {
            let r = maximal_alpha_leakage(&Distribution::new(vec![0.1, 0.2, 0.7]).unwrap(), &Channel::identity(3).unwrap(), a).unwrap();
            assert_abs_diff_eq!(r.nats, 3f64.ln(), epsilon = 1e-9);
        }
        assert_eq!(
            maximal_alpha_leakage(&u, &b, AlphaOrder::Finite(0.5)).unwrap_err(),
            LeakageError::AlphaOutOfRange(0.5)
        );
        assert!(maximal_alpha_leakage(&Distribution::uniform(3).unwrap(), &b, AlphaOrder::Infinity).is_err());
    }

    #[test]
    fn grid_oracle_examples() {
        let v = grid_oracle_capacity(&Channel::identity(3).unwrap(), &full(3), AlphaOrder::Finite(2.0), 1e-2).unwrap();
        assert!((v - 3f64.ln()).abs() < 2e-3);
        let v = grid_oracle_capacity(&Channel::bsc(0.1).unwrap(), &full(2), AlphaOrder::Finite(2.0), 1e-3).unwrap();
        assert!((v - BSC_SIBSON_2).abs() < 1e-5);
        let q = Distribution::new(vec![0.5, 0.5]).unwrap();
        for a in [AlphaOrder::Finite(2.0), AlphaOrder::One, AlphaOrder::Infinity] {
            let v = grid_oracle_capacity(&Channel::rank_one(3, &q).unwrap(), &full(3), a, 0.05).unwrap();
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        assert_eq!(
            grid_oracle_capacity(&Channel::identity(5).unwrap(), &full(5), AlphaOrder::Finite(2.0), 0.1),
            Err(LeakageError::SupportTooLarge(5))
        );
        assert!(grid_oracle_capacity(&Channel::identity(2).unwrap(), &full(2), AlphaOrder::Finite(2.0), 1e-4).is_err());
    }
}
