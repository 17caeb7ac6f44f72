//! Mechanical checks of the structural properties of maximal alpha-leakage.
//!
//! Each check evaluates both sides of an inequality (or equality) on a
//! concrete instance and returns a [`TheoremVerdict`]. The verdict carries a
//! [`Witness`] with every input, so any verdict can be re-run with
//! [`TheoremSuite::replay`] and reproduces the same `lhs`/`rhs` bit for bit.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::capacity::{maximal_alpha_leakage_with, maxl, uniform_sibson_lower_bound, SolverOptions};
use crate::error::{LeakageError, Result};
use crate::logsum::log_sum_exp;
use crate::measures::{arimoto_mi, renyi_divergence, shannon_entropy, sibson_mi};
use crate::prob::{
    cascade_channel, joint_from, normalize_support, product_channel, reverse_deterministic_channel, AlphaOrder,
    Channel, Distribution,
};

/// Slack for inequalities whose sides involve the capacity solver.
pub const DEFAULT_SLACK: f64 = 1e-8;
/// Slack for inequalities between closed-form measures.
pub const MEASURE_SLACK: f64 = 1e-9;
/// Equality tolerance at the analytically optimal output distribution.
pub const TILT_EQUALITY_SLACK: f64 = 1e-6;

/// Every input needed to re-run one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Witness {
    Quasiconvexity {
        w0: Channel,
        w1: Channel,
        prior: Distribution,
        alpha: AlphaOrder,
        lambdas: Vec<f64>,
    },
    Dpi {
        w1: Channel,
        w2: Channel,
        prior: Distribution,
        alpha: AlphaOrder,
    },
    Composition {
        w1: Channel,
        w2: Channel,
        prior: Distribution,
        alpha: AlphaOrder,
    },
    Bounds {
        channel: Channel,
        prior: Distribution,
        alpha: AlphaOrder,
    },
    SibsonInfimum {
        prior: Distribution,
        channel: Channel,
        alpha: AlphaOrder,
        trials: usize,
        seed: u64,
    },
    Shatter {
        prior: Distribution,
        channel: Channel,
        target: Distribution,
        copies_per_x: Vec<usize>,
        alpha: AlphaOrder,
    },
}

impl Witness {
    /// Hex SHA-256 prefix of the canonical JSON serialization.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("witness serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .take(12)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs <= rhs + slack`
    AtMost,
    /// `|lhs - rhs| <= slack`
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem_id: String,
    pub instance_digest: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub witness: Witness,
}

impl TheoremVerdict {
    fn new(id: &str, relation: Relation, lhs: f64, rhs: f64, slack: f64, witness: &Witness) -> Self {
        let passed = match relation {
            Relation::AtMost => lhs <= rhs + slack,
            Relation::Equal => (lhs - rhs).abs() <= slack,
        };
        TheoremVerdict {
            theorem_id: id.to_string(),
            instance_digest: witness.digest(),
            seed: None,
            passed,
            relation,
            lhs,
            rhs,
            slack,
            witness: witness.clone(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// The auxiliary variable `U` of the shattering construction: `|U_x|` copies
/// of every input symbol, `U` determines `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShatterSpec {
    pub copies_per_x: Vec<usize>,
    /// `P_U`, grouped by block in input order.
    pub u_weights: Distribution,
    /// Input symbol each `u` maps to.
    pub u_to_x: Vec<usize>,
    /// Distribution on `X` proportional to `sum_{u in U_x} P_U(u)^alpha`.
    pub induced_x_tilde: Distribution,
}

impl ShatterSpec {
    /// Channel `P(y|u) = W(y|x_u)`.
    pub fn lift(&self, channel: &Channel) -> Result<Channel> {
        Channel::from_rows(self.u_to_x.iter().map(|&x| channel.row(x).probs().to_vec()).collect())
    }
}

fn check_same_in(a: &Channel, b: &Channel) -> Result<()> {
    if a.in_size() != b.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: a.in_size(),
            found: b.in_size(),
        });
    }
    Ok(())
}

fn check_prior(prior: &Distribution, channel: &Channel) -> Result<()> {
    if prior.len() != channel.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: channel.in_size(),
            found: prior.len(),
        });
    }
    Ok(())
}

/// Rows are permutations of one another and so are columns.
pub fn is_symmetric(channel: &Channel) -> bool {
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v
    };
    let rows: Vec<Vec<f64>> = channel.rows().iter().map(|r| sorted(r.probs().to_vec())).collect();
    let cols: Vec<Vec<f64>> = (0..channel.out_size())
        .map(|y| sorted(channel.rows().iter().map(|r| r.get(y)).collect()))
        .collect();
    let same = |vs: &[Vec<f64>]| vs.iter().all(|v| v.iter().zip(&vs[0]).all(|(a, b)| (a - b).abs() <= 1e-12));
    same(&rows) && same(&cols)
}

/// Each output column has at most one non-zero entry among `support` rows.
fn input_recoverable_from_output(channel: &Channel, support: &[usize]) -> bool {
    (0..channel.out_size()).all(|y| support.iter().filter(|&&x| channel.get(x, y) > 0.0).count() <= 1)
}

/// Configurable runner for the property checks.
#[derive(Debug, Clone)]
pub struct TheoremSuite {
    pub slack: f64,
    pub solver: SolverOptions,
}

impl Default for TheoremSuite {
    fn default() -> Self {
        TheoremSuite {
            slack: DEFAULT_SLACK,
            solver: SolverOptions::default(),
        }
    }
}

impl TheoremSuite {
    fn leakage(&self, prior: &Distribution, channel: &Channel, alpha: AlphaOrder) -> Result<f64> {
        Ok(maximal_alpha_leakage_with(prior, channel, alpha, &self.solver)?.nats)
    }

    /// Leakage of every mixture `lambda w0 + (1 - lambda) w1` stays below the
    /// larger endpoint value.
    pub fn check_quasiconvexity(
        &self,
        w0: &Channel,
        w1: &Channel,
        prior: &Distribution,
        alpha: AlphaOrder,
        lambdas: &[f64],
    ) -> Result<TheoremVerdict> {
        check_same_in(w0, w1)?;
        if w0.out_size() != w1.out_size() {
            return Err(LeakageError::DimensionMismatch {
                expected: w0.out_size(),
                found: w1.out_size(),
            });
        }
        check_prior(prior, w0)?;
        let ends = self.leakage(prior, w0, alpha)?.max(self.leakage(prior, w1, alpha)?);
        let mut worst = f64::NEG_INFINITY;
        for &lambda in lambdas {
            worst = worst.max(self.leakage(prior, &w0.mix(w1, lambda)?, alpha)?);
        }
        let witness = Witness::Quasiconvexity {
            w0: w0.clone(),
            w1: w1.clone(),
            prior: prior.clone(),
            alpha,
            lambdas: lambdas.to_vec(),
        };
        Ok(TheoremVerdict::new("quasiconvexity", Relation::AtMost, worst, ends, self.slack, &witness))
    }

    /// For `X -> Y -> Z`: `L(X->Z) <= L(X->Y)` and `L(X->Z) <= L(Y->Z)`.
    pub fn check_dpi(
        &self,
        w1: &Channel,
        w2: &Channel,
        prior: &Distribution,
        alpha: AlphaOrder,
    ) -> Result<(TheoremVerdict, TheoremVerdict)> {
        check_prior(prior, w1)?;
        let z = cascade_channel(w1, w2)?;
        let p_y = joint_from(prior, w1)?.output()?;
        let xz = self.leakage(prior, &z, alpha)?;
        let xy = self.leakage(prior, w1, alpha)?;
        let yz = self.leakage(&p_y, w2, alpha)?;
        let witness = Witness::Dpi {
            w1: w1.clone(),
            w2: w2.clone(),
            prior: prior.clone(),
            alpha,
        };
        Ok((
            TheoremVerdict::new("dpi-post-processing", Relation::AtMost, xz, xy, self.slack, &witness),
            TheoremVerdict::new("dpi-pre-processing", Relation::AtMost, xz, yz, self.slack, &witness),
        ))
    }

    /// Joint release of two conditionally independent outputs leaks at most
    /// the sum of the individual leakages.
    pub fn check_composition(
        &self,
        w1: &Channel,
        w2: &Channel,
        prior: &Distribution,
        alpha: AlphaOrder,
    ) -> Result<TheoremVerdict> {
        check_same_in(w1, w2)?;
        check_prior(prior, w1)?;
        let joint = self.leakage(prior, &product_channel(w1, w2)?, alpha)?;
        let budget = self.leakage(prior, w1, alpha)? + self.leakage(prior, w2, alpha)?;
        let witness = Witness::Composition {
            w1: w1.clone(),
            w2: w2.clone(),
            prior: prior.clone(),
            alpha,
        };
        Ok(TheoremVerdict::new("composition", Relation::AtMost, joint, budget, self.slack, &witness))
    }

    /// Zero and maximal bounds, the maximal-leakage upper bound, the uniform
    /// Sibson lower bound and the cases where they are attained.
    pub fn check_bounds(&self, channel: &Channel, prior: &Distribution, alpha: AlphaOrder) -> Result<Vec<TheoremVerdict>> {
        check_prior(prior, channel)?;
        alpha.require_leakage_order()?;
        let support = prior.support();
        let l = self.leakage(prior, channel, alpha)?;
        let witness = Witness::Bounds {
            channel: channel.clone(),
            prior: prior.clone(),
            alpha,
        };
        let mut out = vec![TheoremVerdict::new("nonnegative", Relation::AtMost, 0.0, l, MEASURE_SLACK, &witness)];

        let ceiling = match alpha {
            AlphaOrder::One => shannon_entropy(prior.probs()),
            _ => (channel.in_size() as f64).ln(),
        };
        out.push(TheoremVerdict::new("upper-bound", Relation::AtMost, l, ceiling, self.slack, &witness));
        out.push(TheoremVerdict::new(
            "maxl-upper-bound",
            Relation::AtMost,
            l,
            maxl(channel, support)?,
            self.slack,
            &witness,
        ));

        let restricted = channel.restrict_inputs(support)?;
        if alpha != AlphaOrder::One {
            let lower = uniform_sibson_lower_bound(&restricted, alpha)?;
            out.push(TheoremVerdict::new(
                "uniform-sibson-lower-bound",
                Relation::AtMost,
                lower,
                l,
                self.slack,
                &witness,
            ));
            if is_symmetric(&restricted) {
                out.push(TheoremVerdict::new(
                    "symmetric-uniform-optimal",
                    Relation::Equal,
                    l,
                    lower,
                    self.slack,
                    &witness,
                ));
            }
        }

        if channel.is_rank_one_on(support, 1e-12) {
            out.push(TheoremVerdict::new("zero-iff-independent", Relation::AtMost, l.abs(), 0.0, MEASURE_SLACK, &witness));
        } else {
            out.push(TheoremVerdict::new("zero-iff-independent", Relation::AtMost, MEASURE_SLACK, l, 0.0, &witness));
        }

        if input_recoverable_from_output(channel, support) && (alpha == AlphaOrder::One || prior.has_full_support()) {
            out.push(TheoremVerdict::new(
                "deterministic-attains-upper-bound",
                Relation::Equal,
                l,
                ceiling,
                self.slack,
                &witness,
            ));
        }
        Ok(out)
    }

    /// Sibson MI as an infimum of Rényi divergences: no random `Q_Y` goes
    /// below it and the tilted output distribution attains it.
    pub fn check_sibson_infimum(
        &self,
        prior: &Distribution,
        channel: &Channel,
        alpha: AlphaOrder,
        trials: usize,
        seed: u64,
    ) -> Result<Vec<TheoremVerdict>> {
        check_prior(prior, channel)?;
        let smi = sibson_mi(prior, channel, alpha)?.nats;
        let joint = joint_from(prior, channel)?;
        let flat_joint = Distribution::new(joint.mass().iter().flatten().cloned().collect())?;
        let divergence_to = |q: &Distribution| -> Result<f64> {
            let product = Distribution::new(
                prior
                    .probs()
                    .iter()
                    .flat_map(|&px| q.probs().iter().map(move |&qy| px * qy))
                    .collect(),
            )?;
            Ok(renyi_divergence(&flat_joint, &product, alpha)?.nats)
        };

        let mut gen = InstanceGenerator::new(seed);
        let mut smallest = f64::INFINITY;
        for _ in 0..trials {
            smallest = smallest.min(divergence_to(&gen.distribution(channel.out_size()))?);
        }
        let optimal = optimal_output(prior, channel, alpha)?;
        let at_optimal = divergence_to(&optimal)?;

        let witness = Witness::SibsonInfimum {
            prior: prior.clone(),
            channel: channel.clone(),
            alpha,
            trials,
            seed,
        };
        let mut out = Vec::new();
        if trials > 0 {
            out.push(TheoremVerdict::new("sibson-infimum", Relation::AtMost, smi, smallest, MEASURE_SLACK, &witness));
        }
        out.push(TheoremVerdict::new(
            "sibson-infimum-attained",
            Relation::Equal,
            at_optimal,
            smi,
            TILT_EQUALITY_SLACK,
            &witness,
        ));
        Ok(out)
    }

    /// Builds `U` with `H(X|U) = 0` whose Arimoto MI with `Y` equals the
    /// Sibson MI of `target`.
    ///
    /// Within each block the weights are uniform; block masses solve the
    /// tilt equation so that the induced distribution is `target`.
    pub fn shatter_construction(
        &self,
        prior: &Distribution,
        channel: &Channel,
        target: &Distribution,
        copies_per_x: &[usize],
        alpha: AlphaOrder,
    ) -> Result<(ShatterSpec, TheoremVerdict)> {
        check_prior(prior, channel)?;
        check_prior(target, channel)?;
        if copies_per_x.len() != channel.in_size() {
            return Err(LeakageError::DimensionMismatch {
                expected: channel.in_size(),
                found: copies_per_x.len(),
            });
        }
        if copies_per_x.contains(&0) {
            return Err(LeakageError::InvalidArgument("every block needs at least one copy".into()));
        }
        if let Some(&x) = target.support().iter().find(|&&x| prior.get(x) == 0.0) {
            return Err(LeakageError::InfeasibleTarget(x));
        }
        let a = match alpha {
            AlphaOrder::One => 1.0,
            AlphaOrder::Finite(a) if a > 1.0 => a,
            other => return Err(LeakageError::AlphaOutOfRange(other.value())),
        };

        // Block mass m_x with k_x (m_x / k_x)^a proportional to target(x).
        let log_mass: Vec<f64> = (0..channel.in_size())
            .map(|x| {
                let t = target.get(x);
                if t > 0.0 {
                    (a - 1.0) / a * (copies_per_x[x] as f64).ln() + t.ln() / a
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        let norm = log_sum_exp(log_mass.iter().cloned());
        let mut u_weights = Vec::new();
        let mut u_to_x = Vec::new();
        for (x, &k) in copies_per_x.iter().enumerate() {
            let block = (log_mass[x] - norm).exp();
            for _ in 0..k {
                u_weights.push(block / k as f64);
                u_to_x.push(x);
            }
        }
        let u_weights = Distribution::new(u_weights)?;

        let log_tilt: Vec<f64> = (0..channel.in_size())
            .map(|x| {
                log_sum_exp(
                    u_to_x
                        .iter()
                        .zip(u_weights.probs())
                        .filter(|(&ux, &w)| ux == x && w > 0.0)
                        .map(|(_, &w)| a * w.ln()),
                )
            })
            .collect();
        let tilt_norm = log_sum_exp(log_tilt.iter().cloned());
        let induced_x_tilde = Distribution::new(log_tilt.iter().map(|l| (l - tilt_norm).exp()).collect())?;

        let spec = ShatterSpec {
            copies_per_x: copies_per_x.to_vec(),
            u_weights,
            u_to_x,
            induced_x_tilde,
        };
        let lhs = arimoto_mi(&spec.u_weights, &spec.lift(channel)?, alpha)?.nats;
        let rhs = sibson_mi(target, channel, alpha)?.nats;
        let witness = Witness::Shatter {
            prior: prior.clone(),
            channel: channel.clone(),
            target: target.clone(),
            copies_per_x: copies_per_x.to_vec(),
            alpha,
        };
        let verdict = TheoremVerdict::new("shatter-equality", Relation::Equal, lhs, rhs, MEASURE_SLACK, &witness);
        Ok((spec, verdict))
    }

    /// Re-runs the check recorded in `witness`.
    pub fn replay(&self, witness: &Witness) -> Result<Vec<TheoremVerdict>> {
        match witness {
            Witness::Quasiconvexity {
                w0,
                w1,
                prior,
                alpha,
                lambdas,
            } => Ok(vec![self.check_quasiconvexity(w0, w1, prior, *alpha, lambdas)?]),
            Witness::Dpi { w1, w2, prior, alpha } => {
                let (a, b) = self.check_dpi(w1, w2, prior, *alpha)?;
                Ok(vec![a, b])
            }
            Witness::Composition { w1, w2, prior, alpha } => Ok(vec![self.check_composition(w1, w2, prior, *alpha)?]),
            Witness::Bounds { channel, prior, alpha } => self.check_bounds(channel, prior, *alpha),
            Witness::SibsonInfimum {
                prior,
                channel,
                alpha,
                trials,
                seed,
            } => self.check_sibson_infimum(prior, channel, *alpha, *trials, *seed),
            Witness::Shatter {
                prior,
                channel,
                target,
                copies_per_x,
                alpha,
            } => Ok(vec![self.shatter_construction(prior, channel, target, copies_per_x, *alpha)?.1]),
        }
    }

    /// Runs every check on `instances` random instances at orders
    /// `{1, 1.5, 2, inf}`. Each instance draws its own seed from `seed`, which
    /// is recorded in the verdicts.
    pub fn random_suite(&self, instances: usize, seed: u64) -> Result<Vec<TheoremVerdict>> {
        let mut out = Vec::new();
        for instance_seed in instance_seeds(instances, seed) {
            out.extend(self.random_instance(instance_seed)?);
        }
        Ok(out)
    }

    /// All checks on the instance drawn from `seed`, tagged with that seed.
    pub fn random_instance(&self, seed: u64) -> Result<Vec<TheoremVerdict>> {
        Ok(self.instance_checks(seed)?.into_iter().map(|v| v.with_seed(seed)).collect())
    }

    fn instance_checks(&self, seed: u64) -> Result<Vec<TheoremVerdict>> {
        let mut gen = InstanceGenerator::new(seed);
        let n = gen.rng.random_range(2..=3);
        let m = gen.rng.random_range(2..=4);
        let prior = if n == 3 && gen.rng.random_bool(0.25) {
            gen.partial_distribution(n)
        } else {
            gen.distribution(n)
        };
        let w0 = gen.channel(n, m);
        let w1 = gen.channel(n, m);
        let z_size = gen.rng.random_range(2..=4);
        let post = gen.channel(m, z_size);
        let second_size = gen.rng.random_range(2..=3);
        let second = gen.channel(n, second_size);
        let target = gen.distribution_on(n, prior.support());
        let copies: Vec<usize> = (0..n).map(|_| gen.rng.random_range(1..=3)).collect();
        let q = gen.distribution(m);
        let rank_one = Channel::rank_one(n, &q)?;
        let assignment: Vec<usize> = (0..3 + n).map(|y| if y < n { y } else { gen.rng.random_range(0..n) }).collect();
        let (deterministic, det_prior) = reverse_deterministic_channel(&assignment, &gen.distribution(assignment.len()))?;
        let infimum_seed: u64 = gen.rng.random();

        let mut out = Vec::new();
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(1.5), AlphaOrder::Finite(2.0), AlphaOrder::Infinity] {
            out.push(self.check_quasiconvexity(&w0, &w1, &prior, alpha, &[0.0, 0.25, 0.5, 0.75, 1.0])?);
            let (a, b) = self.check_dpi(&w0, &post, &prior, alpha)?;
            out.extend([a, b]);
            out.push(self.check_composition(&w0, &second, &prior, alpha)?);
            out.extend(self.check_bounds(&w0, &prior, alpha)?);
            out.extend(self.check_bounds(&rank_one, &prior, alpha)?);
            out.extend(self.check_bounds(&deterministic, &det_prior, alpha)?);
            out.extend(self.check_sibson_infimum(&prior, &w0, alpha, 50, infimum_seed)?);
            if alpha != AlphaOrder::Infinity {
                out.push(self.shatter_construction(&prior, &w0, &target, &copies, alpha)?.1);
            }
        }
        Ok(out)
    }
}

/// Per-instance seeds used by [`TheoremSuite::random_suite`].
pub fn instance_seeds(instances: usize, seed: u64) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..instances).map(|_| master.random()).collect()
}

/// Output distribution attaining the infimum that defines Sibson MI.
pub fn optimal_output(prior: &Distribution, channel: &Channel, alpha: AlphaOrder) -> Result<Distribution> {
    check_prior(prior, channel)?;
    let support = prior.support();
    match alpha {
        AlphaOrder::One => joint_from(prior, channel)?.output(),
        AlphaOrder::Infinity => Distribution::from_weights(
            (0..channel.out_size())
                .map(|y| support.iter().map(|&x| channel.get(x, y)).fold(0.0, f64::max))
                .collect(),
        ),
        AlphaOrder::Finite(a) => {
            let logs: Vec<f64> = (0..channel.out_size())
                .map(|y| {
                    log_sum_exp(
                        support
                            .iter()
                            .filter(|&&x| channel.get(x, y) > 0.0)
                            .map(|&x| prior.get(x).ln() + a * channel.get(x, y).ln()),
                    ) / a
                })
                .collect();
            let norm = log_sum_exp(logs.iter().cloned());
            Distribution::new(logs.iter().map(|l| (l - norm).exp()).collect())
        }
    }
}

/// Behaviour of maximal alpha-leakage just above order one.
///
/// At `alpha = 1` the value is the Shannon MI of the prior, while every order
/// above one maximizes over inputs on the support. `gap` is the difference
/// between the two sides at `1 + epsilon`; it is measured, not asserted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderOneGap {
    pub epsilon: f64,
    pub at_one: f64,
    pub just_above: f64,
    pub gap: f64,
}

/// Measures [`OrderOneGap`] at `1 + epsilon`, in nats.
pub fn order_one_gap(
    prior: &Distribution,
    channel: &Channel,
    epsilon: f64,
    solver: &SolverOptions,
) -> Result<OrderOneGap> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LeakageError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let at_one = maximal_alpha_leakage_with(prior, channel, AlphaOrder::One, solver)?.nats;
    let just_above = maximal_alpha_leakage_with(prior, channel, AlphaOrder::new(1.0 + epsilon)?, solver)?.nats;
    Ok(OrderOneGap {
        epsilon,
        at_one,
        just_above,
        gap: just_above - at_one,
    })
}

/// Seeded source of random instances. Rows are uniform on the simplex.
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn simplex(&mut self, k: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..k).map(|_| -(1.0 - self.rng.random::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|v| v / s).collect()
    }

    pub fn distribution(&mut self, n: usize) -> Distribution {
        Distribution::new(self.simplex(n)).expect("simplex sample")
    }

    /// Uniform on the simplex over `support`, zero elsewhere.
    pub fn distribution_on(&mut self, n: usize, support: &[usize]) -> Distribution {
        let support = normalize_support(support, n).expect("valid support");
        let mut probs = vec![0.0; n];
        for (&i, p) in support.iter().zip(self.simplex(support.len())) {
            probs[i] = p;
        }
        Distribution::new(probs).expect("simplex sample")
    }

    /// Random distribution with exactly one symbol removed from the support.
    pub fn partial_distribution(&mut self, n: usize) -> Distribution {
        let drop = self.rng.random_range(0..n);
        let keep: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
        self.distribution_on(n, &keep)
    }

    pub fn channel(&mut self, n: usize, m: usize) -> Channel {
        Channel::from_rows((0..n).map(|_| self.simplex(m)).collect()).expect("simplex rows")
    }

    pub fn uniform_real(&mut self) -> f64 {
        self.rng.random()
    }
}

/// Summary counts keyed by theorem id: `(passed, total)`.
pub fn tally(verdicts: &[TheoremVerdict]) -> BTreeMap<String, (usize, usize)> {
    let mut t = BTreeMap::new();
    for v in verdicts {
        let e = t.entry(v.theorem_id.clone()).or_insert((0, 0));
        e.1 += 1;
        if v.passed {
            e.0 += 1;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    fn suite() -> TheoremSuite {
        TheoremSuite::default()
    }

    #[test]
    fn order_one_gap_vanishes_only_at_the_optimal_prior() {
        let w = Channel::bsc(0.1).unwrap();
        let opts = SolverOptions::default();
        let u = order_one_gap(&d(&[0.5, 0.5]), &w, 1e-4, &opts).unwrap();
        assert!(u.gap.abs() < 1e-4, "{u:?}");
        let skew = order_one_gap(&d(&[0.9, 0.1]), &w, 1e-4, &opts).unwrap();
        assert!(skew.gap > 0.1, "{skew:?}");
        assert!(order_one_gap(&d(&[0.5, 0.5]), &w, 0.0, &opts).is_err());
    }

    #[test]
    fn quasiconvexity_examples() {
        let s = suite();
        let w = Channel::bsc(0.2).unwrap();
        let prior = d(&[0.3, 0.7]);
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(2.0), AlphaOrder::Infinity] {
            let v = s.check_quasiconvexity(&w, &w, &prior, alpha, &[0.0, 0.3, 1.0]).unwrap();
            assert!(v.passed);
            assert_abs_diff_eq!(v.lhs, v.rhs, epsilon = 1e-10);
        }
        let r1 = Channel::rank_one(2, &d(&[0.5, 0.5])).unwrap();
        let v = s
            .check_quasiconvexity(
                &Channel::identity(2).unwrap(),
                &r1,
                &Distribution::uniform(2).unwrap(),
                AlphaOrder::Finite(2.0),
                &[0.0, 0.25, 0.5, 0.75, 1.0],
            )
            .unwrap();
        assert!(v.passed);
        assert_abs_diff_eq!(v.rhs, 2f64.ln(), epsilon = 1e-9);
        assert!(s
            .check_quasiconvexity(&w, &Channel::identity(3).unwrap(), &prior, AlphaOrder::One, &[0.5])
            .is_err());
    }

    #[test]
    fn dpi_examples() {
        let s = suite();
        let b = Channel::bsc(0.1).unwrap();
        let u = Distribution::uniform(2).unwrap();
        let (post, pre) = s.check_dpi(&b, &b, &u, AlphaOrder::Infinity).unwrap();
        assert!(post.passed && pre.passed);
        assert_abs_diff_eq!(post.lhs, 1.64f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(post.rhs, 1.8f64.ln(), epsilon = 1e-12);

        for alpha in [AlphaOrder::One, AlphaOrder::Finite(2.0), AlphaOrder::Infinity] {
            let (post, _) = s.check_dpi(&b, &Channel::identity(2).unwrap(), &d(&[0.4, 0.6]), alpha).unwrap();
            assert!(post.passed);
            assert_abs_diff_eq!(post.lhs, post.rhs, epsilon = 1e-9);
        }
    }

    #[test]
    fn composition_examples() {
        let s = suite();
        let u = Distribution::uniform(2).unwrap();
        let v = s
            .check_composition(&Channel::bsc(0.1).unwrap(), &Channel::bsc(0.2).unwrap(), &u, AlphaOrder::Infinity)
            .unwrap();
        assert!(v.passed);
        assert_abs_diff_eq!(v.lhs, 1.8f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.rhs, 1.8f64.ln() + 1.6f64.ln(), epsilon = 1e-12);

        let r1 = Channel::rank_one(2, &d(&[0.2, 0.3, 0.5])).unwrap();
        let w = Channel::bsc(0.25).unwrap();
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(1.5), AlphaOrder::Infinity] {
            let v = s.check_composition(&w, &r1, &d(&[0.4, 0.6]), alpha).unwrap();
            assert!(v.passed);
            assert_abs_diff_eq!(v.lhs, v.rhs, epsilon = 1e-9);
        }
    }

    #[test]
    fn bounds_on_rank_one() {
        let s = suite();
        let r1 = Channel::rank_one(3, &d(&[0.2, 0.8])).unwrap();
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(2.0), AlphaOrder::Infinity] {
            let vs = s.check_bounds(&r1, &d(&[0.2, 0.3, 0.5]), alpha).unwrap();
            assert!(vs.iter().all(|v| v.passed), "{vs:#?}");
            let zero = vs.iter().find(|v| v.theorem_id == "zero-iff-independent").unwrap();
            assert!(zero.lhs <= 1e-9);
        }
    }

    #[test]
    fn bounds_on_deterministic_reverse_channel() {
        let s = suite();
        let (w, px) = reverse_deterministic_channel(&[0, 0, 1], &Distribution::uniform(3).unwrap()).unwrap();
        let vs = s.check_bounds(&w, &px, AlphaOrder::Finite(2.0)).unwrap();
        assert!(vs.iter().all(|v| v.passed), "{vs:#?}");
        let eq = vs.iter().find(|v| v.theorem_id == "deterministic-attains-upper-bound").unwrap();
        assert_abs_diff_eq!(eq.lhs, 2f64.ln(), epsilon = 1e-9);

        let vs = s.check_bounds(&w, &px, AlphaOrder::One).unwrap();
        assert!(vs.iter().all(|v| v.passed), "{vs:#?}");
        let eq = vs.iter().find(|v| v.theorem_id == "deterministic-attains-upper-bound").unwrap();
        assert_abs_diff_eq!(eq.lhs, 0.636514168294813, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_channels_are_detected() {
        assert!(is_symmetric(&Channel::bsc(0.1).unwrap()));
        let w = Channel::from_rows(vec![vec![0.6, 0.3, 0.1], vec![0.1, 0.6, 0.3], vec![0.3, 0.1, 0.6]]).unwrap();
        assert!(is_symmetric(&w));
        let vs = suite().check_bounds(&w, &d(&[0.5, 0.3, 0.2]), AlphaOrder::Finite(3.0)).unwrap();
        assert!(vs.iter().any(|v| v.theorem_id == "symmetric-uniform-optimal" && v.passed));
        assert!(!is_symmetric(&Channel::from_rows(vec![vec![0.6, 0.4], vec![0.3, 0.7]]).unwrap()));
    }

    #[test]
    fn sibson_infimum_examples() {
        let s = suite();
        let u = Distribution::uniform(2).unwrap();
        let b = Channel::bsc(0.1).unwrap();
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(2.0), AlphaOrder::Finite(0.5), AlphaOrder::Infinity] {
            let vs = s.check_sibson_infimum(&u, &b, alpha, 50, 3).unwrap();
            assert!(vs.iter().all(|v| v.passed), "{alpha}: {vs:#?}");
        }
        // The exact output marginal is not the minimizer above order one.
        let flat = Distribution::new(vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let prod = Distribution::new(vec![0.25; 4]).unwrap();
        let div = renyi_divergence(&flat, &prod, AlphaOrder::Finite(2.0)).unwrap().nats;
        assert!(div >= 0.494696241836107);
    }

    #[test]
    fn shatter_examples() {
        let s = suite();
        let prior = d(&[0.3, 0.7]);
        let w = Channel::from_rows(vec![vec![0.8, 0.2], vec![0.35, 0.65]]).unwrap();
        let (spec, v) = s.shatter_construction(&prior, &w, &prior, &[1, 1], AlphaOrder::Finite(2.0)).unwrap();
        assert!(v.passed);
        assert_eq!(spec.u_to_x, vec![0, 1]);

        let target = Distribution::uniform(2).unwrap();
        let (spec, v) = s.shatter_construction(&prior, &w, &target, &[2, 3], AlphaOrder::Finite(2.0)).unwrap();
        assert!(v.passed, "{v:?}");
        assert_eq!(spec.u_weights.len(), 5);
        assert!(spec.induced_x_tilde.total_variation(&target) < 1e-12);

        let err = s
            .shatter_construction(&d(&[1.0, 0.0]), &w, &target, &[1, 1], AlphaOrder::Finite(2.0))
            .unwrap_err();
        assert_eq!(err, LeakageError::InfeasibleTarget(1));
    }

    #[test]
    fn verdict_serialization_replays_exactly() {
        let s = suite();
        let mut gen = InstanceGenerator::new(11);
        let prior = gen.distribution(3);
        let w0 = gen.channel(3, 3);
        let w1 = gen.channel(3, 3);
        let v = s
            .check_quasiconvexity(&w0, &w1, &prior, AlphaOrder::Finite(1.5), &[0.0, 0.5, 1.0])
            .unwrap();
        let line = serde_json::to_string(&v).unwrap();
        let back: TheoremVerdict = serde_json::from_str(&line).unwrap();
        assert_eq!(back, v);
        let again = s.replay(&back.witness).unwrap();
        assert_eq!(again[0].lhs.to_bits(), v.lhs.to_bits());
        assert_eq!(again[0].rhs.to_bits(), v.rhs.to_bits());
        assert_eq!(again[0].instance_digest, v.instance_digest);
    }
}
