//! Rényi entropy and divergence, Arimoto conditional entropy, Sibson and
//! Arimoto mutual information.
//!
//! Finite orders are evaluated in the log domain with max-subtraction, so
//! orders up to `1e4` and beyond neither overflow nor underflow. Zero
//! probabilities are skipped, never raised to a power. The limit orders are
//! dispatched on the exact [`AlphaOrder`] tag.

use crate::error::{LeakageError, Result};
use crate::logsum::log_sum_exp;
use crate::prob::{joint_from, AlphaOrder, Channel, Distribution, Joint};

/// A measure in nats together with the order it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub nats: f64,
    pub alpha: AlphaOrder,
}

impl MeasureValue {
    pub fn bits(&self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }
}

fn value(nats: f64, alpha: AlphaOrder) -> MeasureValue {
    MeasureValue { nats, alpha }
}

/// Rounding residue of a quantity that is exactly zero, such as the mutual
/// information of an independent pair, is reported as zero.
pub(crate) fn snap_zero(v: f64) -> f64 {
    if v.abs() < 1e-14 {
        0.0
    } else {
        v
    }
}

fn check_channel_input(prior: &Distribution, channel: &Channel) -> Result<()> {
    if prior.len() != channel.in_size() {
        return Err(LeakageError::DimensionMismatch {
            expected: channel.in_size(),
            found: prior.len(),
        });
    }
    Ok(())
}

pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// `I(X;Y)` of a joint.
pub fn shannon_mi(joint: &Joint) -> f64 {
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    let mut total = 0.0;
    for (x, row) in joint.mass().iter().enumerate() {
        for (y, &m) in row.iter().enumerate() {
            if m > 0.0 {
                total += m * (m / (px[x] * py[y])).ln();
            }
        }
    }
    snap_zero(total)
}

pub fn renyi_entropy(p: &Distribution, alpha: AlphaOrder) -> MeasureValue {
    let probs = p.probs();
    let nats = match alpha {
        AlphaOrder::One => shannon_entropy(probs),
        AlphaOrder::Infinity => -p.max().ln(),
        AlphaOrder::Finite(a) => {
            let lse = log_sum_exp(p.support().iter().map(|&i| a * probs[i].ln()));
            lse / (1.0 - a)
        }
    };
    value(nats, alpha)
}

/// `D_alpha(p || q)`; `+inf` is a legitimate result.
pub fn renyi_divergence(p: &Distribution, q: &Distribution, alpha: AlphaOrder) -> Result<MeasureValue> {
    if p.len() != q.len() {
        return Err(LeakageError::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    let uncovered = p.support().iter().any(|&i| q.get(i) == 0.0);
    let nats = match alpha {
        AlphaOrder::One => {
            if uncovered {
                f64::INFINITY
            } else {
                p.support()
                    .iter()
                    .map(|&i| p.get(i) * (p.get(i) / q.get(i)).ln())
                    .sum()
            }
        }
        AlphaOrder::Infinity => {
            if uncovered {
                f64::INFINITY
            } else {
                p.support()
                    .iter()
                    .map(|&i| (p.get(i) / q.get(i)).ln())
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
        AlphaOrder::Finite(a) if a > 1.0 && uncovered => f64::INFINITY,
        AlphaOrder::Finite(a) => {
            // For a < 1 an uncovered symbol contributes p^a * 0^(1-a) = 0.
            let lse = log_sum_exp(
                p.support()
                    .iter()
                    .filter(|&&i| q.get(i) > 0.0)
                    .map(|&i| a * p.get(i).ln() - (a - 1.0) * q.get(i).ln()),
            );
            if lse == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                lse / (a - 1.0)
            }
        }
    };
    Ok(value(snap_zero(nats), alpha))
}

/// `log sum_y (sum_x mass(x,y)^a)^(1/a)`, skipping zero entries.
fn log_column_norm_sum(joint: &Joint, a: f64) -> f64 {
    log_sum_exp(joint.live_columns().map(|y| {
        let inner = log_sum_exp(
            joint
                .mass()
                .iter()
                .filter(|row| row[y] > 0.0)
                .map(|row| a * row[y].ln()),
        );
        inner / a
    }))
}

fn sum_column_max(joint: &Joint) -> f64 {
    (0..joint.y_size())
        .map(|y| joint.mass().iter().map(|row| row[y]).fold(0.0, f64::max))
        .sum()
}

/// Arimoto conditional entropy `H_alpha(X|Y)`.
pub fn arimoto_cond_entropy(joint: &Joint, alpha: AlphaOrder) -> MeasureValue {
    let nats = match alpha {
        AlphaOrder::One => {
            let py = joint.marginal_y();
            -joint
                .mass()
                .iter()
                .flat_map(|row| row.iter().enumerate())
                .filter(|(_, &m)| m > 0.0)
                .map(|(y, &m)| m * (m / py[y]).ln())
                .sum::<f64>()
        }
        AlphaOrder::Infinity => -sum_column_max(joint).ln(),
        AlphaOrder::Finite(a) => a / (1.0 - a) * log_column_norm_sum(joint, a),
    };
    value(nats, alpha)
}

/// Sibson mutual information via its closed form.
pub fn sibson_mi(prior: &Distribution, channel: &Channel, alpha: AlphaOrder) -> Result<MeasureValue> {
    check_channel_input(prior, channel)?;
    let support = prior.support();
    let nats = match alpha {
        AlphaOrder::One => shannon_mi(&joint_from(prior, channel)?),
        AlphaOrder::Infinity => (0..channel.out_size())
            .map(|y| support.iter().map(|&x| channel.get(x, y)).fold(0.0, f64::max))
            .sum::<f64>()
            .ln(),
        AlphaOrder::Finite(a) => {
            let log_s = log_sum_exp((0..channel.out_size()).map(|y| {
                let log_inner = log_sum_exp(
                    support
                        .iter()
                        .filter(|&&x| channel.get(x, y) > 0.0)
                        .map(|&x| prior.get(x).ln() + a * channel.get(x, y).ln()),
                );
                log_inner / a
            }));
            a / (a - 1.0) * log_s
        }
    };
    Ok(value(snap_zero(nats), alpha))
}

/// Arimoto mutual information `H_alpha(X) - H_alpha(X|Y)`.
pub fn arimoto_mi(prior: &Distribution, channel: &Channel, alpha: AlphaOrder) -> Result<MeasureValue> {
    check_channel_input(prior, channel)?;
    let joint = joint_from(prior, channel)?;
    let nats = match alpha {
        AlphaOrder::One => shannon_mi(&joint),
        AlphaOrder::Infinity => sum_column_max(&joint).ln() - prior.max().ln(),
        AlphaOrder::Finite(a) => {
            let log_den = log_sum_exp(prior.support().iter().map(|&x| a * prior.get(x).ln())) / a;
            a / (a - 1.0) * (log_column_norm_sum(&joint, a) - log_den)
        }
    };
    Ok(value(snap_zero(nats), alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use crate::prob::cascade_channel;

    fn fin(a: f64) -> AlphaOrder {
        AlphaOrder::new(a).unwrap()
    }

    fn d(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    fn bsc() -> Channel {
        Channel::bsc(0.1).unwrap()
    }

    const ALL_ORDERS: [AlphaOrder; 6] = [
        AlphaOrder::Finite(0.5),
        AlphaOrder::One,
        AlphaOrder::Finite(1.5),
        AlphaOrder::Finite(2.0),
        AlphaOrder::Finite(7.0),
        AlphaOrder::Infinity,
    ];

    #[test]
    fn renyi_entropy_examples() {
        let u4 = Distribution::uniform(4).unwrap();
        assert_abs_diff_eq!(renyi_entropy(&u4, fin(2.0)).nats, 4f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(renyi_entropy(&d(&[0.5, 0.25, 0.25]), fin(2.0)).nats, 0.980829253011726, epsilon = 1e-14);
        for alpha in ALL_ORDERS {
            assert_abs_diff_eq!(renyi_entropy(&u4, alpha).nats, 4f64.ln(), epsilon = 1e-14);
            assert_eq!(renyi_entropy(&d(&[1.0, 0.0]), alpha).nats.abs(), 0.0);
        }
    }

    #[test]
    fn renyi_divergence_examples() {
        let p = d(&[0.5, 0.5]);
        for alpha in ALL_ORDERS {
            assert_abs_diff_eq!(renyi_divergence(&p, &p, alpha).unwrap().nats, 0.0, epsilon = 1e-15);
        }
        let q = d(&[0.25, 0.75]);
        assert_abs_diff_eq!(renyi_divergence(&p, &q, fin(2.0)).unwrap().nats, 0.287682072451781, epsilon = 1e-14);
        let disjoint = renyi_divergence(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), fin(2.0)).unwrap();
        assert_eq!(disjoint.nats, f64::INFINITY);
        for alpha in ALL_ORDERS {
            let v = renyi_divergence(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), alpha).unwrap();
            assert_eq!(v.nats, f64::INFINITY, "{alpha}");
        }
        // Partial overlap is finite below order one and infinite above.
        let p = d(&[0.5, 0.5]);
        let q = d(&[1.0, 0.0]);
        assert!(renyi_divergence(&p, &q, fin(0.5)).unwrap().nats.is_finite());
        assert_eq!(renyi_divergence(&p, &q, fin(2.0)).unwrap().nats, f64::INFINITY);
        assert!(renyi_divergence(&p, &d(&[0.2, 0.3, 0.5]), fin(2.0)).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let prior = d(&[0.3, 0.7]);
        let q = d(&[0.2, 0.5, 0.3]);
        let indep = joint_from(&prior, &Channel::rank_one(2, &q).unwrap()).unwrap();
        for alpha in ALL_ORDERS {
            assert_abs_diff_eq!(
                arimoto_cond_entropy(&indep, alpha).nats,
                renyi_entropy(&prior, alpha).nats,
                epsilon = 1e-13
            );
            let det = joint_from(&prior, &Channel::identity(2).unwrap()).unwrap();
            assert_abs_diff_eq!(arimoto_cond_entropy(&det, alpha).nats, 0.0, epsilon = 1e-14);
        }
        let j = joint_from(&Distribution::uniform(2).unwrap(), &bsc()).unwrap();
        assert_abs_diff_eq!(arimoto_cond_entropy(&j, AlphaOrder::Infinity).nats, 0.105360515657826, epsilon = 1e-14);
    }

    #[test]
    fn sibson_examples() {
        let q = d(&[0.2, 0.5, 0.3]);
        let r1 = Channel::rank_one(3, &q).unwrap();
        let prior = d(&[0.1, 0.6, 0.3]);
        for alpha in ALL_ORDERS {
            assert_abs_diff_eq!(sibson_mi(&prior, &r1, alpha).unwrap().nats, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(arimoto_mi(&prior, &r1, alpha).unwrap().nats, 0.0, epsilon = 1e-14);
        }
        let u = Distribution::uniform(2).unwrap();
        assert_abs_diff_eq!(sibson_mi(&u, &bsc(), fin(2.0)).unwrap().nats, 0.494696241836107, epsilon = 1e-14);
        assert_abs_diff_eq!(sibson_mi(&u, &bsc(), AlphaOrder::Infinity).unwrap().nats, 0.587786664902119, epsilon = 1e-14);
        assert_abs_diff_eq!(arimoto_mi(&u, &bsc(), AlphaOrder::Infinity).unwrap().nats, 0.587786664902119, epsilon = 1e-14);
        assert!(sibson_mi(&Distribution::uniform(3).unwrap(), &bsc(), fin(2.0)).is_err());
    }

    #[test]
    fn sibson_infinity_uses_prior_support_only() {
        let w = Channel::from_rows(vec![vec![0.9, 0.1], vec![0.1, 0.9], vec![0.5, 0.5]]).unwrap();
        let prior = d(&[0.5, 0.0, 0.5]);
        assert_abs_diff_eq!(sibson_mi(&prior, &w, AlphaOrder::Infinity).unwrap().nats, 1.4f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn large_orders_stay_finite() {
        let u = Distribution::uniform(2).unwrap();
        let v = sibson_mi(&u, &bsc(), fin(1e6)).unwrap().nats;
        assert!((v - 1.8f64.ln()).abs() < 1e-5);
        let v = arimoto_mi(&d(&[0.3, 0.7]), &bsc(), fin(1e6)).unwrap().nats;
        assert!(v.is_finite());
    }

    fn near(v: f64) -> [AlphaOrder; 2] {
        [fin(v - 1e-4), fin(v + 1e-4)]
    }

    #[test]
    fn continuity_at_limit_orders() {
        let prior = d(&[0.2, 0.5, 0.3]);
        let w = Channel::from_rows(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.6, 0.3],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        let joint = joint_from(&prior, &w).unwrap();
        let measures: Vec<Box<dyn Fn(AlphaOrder) -> f64>> = vec![
            Box::new(|a| renyi_entropy(&prior, a).nats),
            Box::new(|a| renyi_divergence(&prior, w.row(0), a).unwrap().nats),
            Box::new(|a| arimoto_cond_entropy(&joint, a).nats),
            Box::new(|a| sibson_mi(&prior, &w, a).unwrap().nats),
            Box::new(|a| arimoto_mi(&prior, &w, a).unwrap().nats),
        ];
        for m in &measures {
            let at_one = m(AlphaOrder::One);
            for a in near(1.0) {
                assert!((m(a) - at_one).abs() < 1e-3);
            }
            assert!((m(fin(1e4)) - m(AlphaOrder::Infinity)).abs() < 1e-3);
        }
    }

    fn instance(n: usize, m: usize) -> impl Strategy<Value = (Distribution, Channel)> {
        let simplex = |k: usize| {
            prop::collection::vec(0.01f64..1.0, k).prop_map(|v| {
                let s: f64 = v.iter().sum();
                v.into_iter().map(|x| x / s).collect::<Vec<_>>()
            })
        };
        (simplex(n), prop::collection::vec(simplex(m), n)).prop_map(|(p, rows)| {
            (Distribution::new(p).unwrap(), Channel::from_rows(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn mutual_informations_are_nonnegative((prior, w) in instance(3, 4), a in 1.0f64..20.0) {
            for alpha in [fin(a), AlphaOrder::One, AlphaOrder::Infinity] {
                prop_assert!(sibson_mi(&prior, &w, alpha).unwrap().nats >= -1e-12);
                prop_assert!(arimoto_mi(&prior, &w, alpha).unwrap().nats >= -1e-12);
            }
        }

        #[test]
        fn uniform_prior_makes_arimoto_equal_sibson((_, w) in instance(3, 4), a in 0.2f64..50.0) {
            let u = Distribution::uniform(3).unwrap();
            for alpha in [fin(a), AlphaOrder::One, AlphaOrder::Infinity] {
                let s = sibson_mi(&u, &w, alpha).unwrap().nats;
                let r = arimoto_mi(&u, &w, alpha).unwrap().nats;
                prop_assert!((s - r).abs() <= 1e-12, "{} vs {}", s, r);
            }
        }

        #[test]
        fn sibson_post_processing_inequality(
            (prior, w1) in instance(3, 3),
            (_, w2) in instance(3, 4),
            a in 1.01f64..30.0,
        ) {
            let z = cascade_channel(&w1, &w2).unwrap();
            for alpha in [fin(a), AlphaOrder::Infinity] {
                let xz = sibson_mi(&prior, &z, alpha).unwrap().nats;
                let xy = sibson_mi(&prior, &w1, alpha).unwrap().nats;
                prop_assert!(xz <= xy + 1e-9);
            }
        }

        #[test]
        fn arimoto_is_entropy_difference((prior, w) in instance(3, 3), a in 0.2f64..20.0) {
            let joint = joint_from(&prior, &w).unwrap();
            for alpha in [fin(a), AlphaOrder::One, AlphaOrder::Infinity] {
                let diff = renyi_entropy(&prior, alpha).nats - arimoto_cond_entropy(&joint, alpha).nats;
                prop_assert!((arimoto_mi(&prior, &w, alpha).unwrap().nats - diff).abs() < 1e-12);
            }
        }
    }
}
