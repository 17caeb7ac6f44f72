//! Alpha-leakage: the gain in expected reward of an adversary refining a
//! tilted belief about `X` after seeing `Y`.
//!
//! Two independent routes are provided. [`Method::ArimotoIdentity`] returns
//! the Arimoto mutual information; [`Method::OperationalRatio`] builds the
//! optimal tilted estimators with and without `Y` and evaluates the ratio of
//! their expected rewards directly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{LeakageError, Result};
use crate::measures::{arimoto_mi, snap_zero};
use crate::prob::{joint_from, AlphaOrder, Channel, Distribution, Joint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Prior,
    PosteriorColumn(usize),
}

/// Optimal guessing strategy for one source distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimator {
    pub kind: EstimatorKind,
    pub dist: Distribution,
    pub alpha: AlphaOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ArimotoIdentity,
    OperationalRatio,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub nats: f64,
    pub alpha: AlphaOrder,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

impl LeakageReport {
    pub fn bits(&self) -> f64 {
        self.nats / std::f64::consts::LN_2
    }
}

/// `source^alpha` renormalized; the source itself at order one; a point mass
/// on the lowest-index maximizer at infinity.
pub fn tilt(source: &Distribution, alpha: AlphaOrder) -> Distribution {
    match alpha {
        AlphaOrder::One => source.clone(),
        AlphaOrder::Infinity => Distribution::point_mass(source.len(), source.argmax())
            .expect("argmax is in range"),
        AlphaOrder::Finite(a) => {
            let logs: Vec<f64> = source
                .probs()
                .iter()
                .map(|&p| if p > 0.0 { a * p.ln() } else { f64::NEG_INFINITY })
                .collect();
            let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Distribution::from_weights(logs.iter().map(|l| (l - max).exp()).collect())
                .expect("tilted weights include the maximum at weight one")
        }
    }
}

pub fn optimal_estimator(source: &Distribution, alpha: AlphaOrder) -> Estimator {
    Estimator {
        kind: EstimatorKind::Prior,
        dist: tilt(source, alpha),
        alpha,
    }
}

/// One estimator per output symbol with positive probability.
pub fn posterior_estimators(joint: &Joint, alpha: AlphaOrder) -> Vec<Estimator> {
    joint
        .live_columns()
        .map(|y| {
            let post = Distribution::new(joint.posterior(y).expect("live column"))
                .expect("posterior of a validated joint");
            Estimator {
                kind: EstimatorKind::PosteriorColumn(y),
                dist: tilt(&post, alpha),
                alpha,
            }
        })
        .collect()
}

/// Expected alpha-loss of guessing `guess` when `X ~ truth`.
///
/// Log-loss at order one (possibly `+inf`), 0-1 loss at infinity.
pub fn expected_alpha_loss(truth: &Distribution, guess: &Distribution, alpha: AlphaOrder) -> Result<f64> {
    if truth.len() != guess.len() {
        return Err(LeakageError::DimensionMismatch {
            expected: truth.len(),
            found: guess.len(),
        });
    }
    let support = truth.support();
    Ok(match alpha {
        AlphaOrder::One => support
            .iter()
            .map(|&x| {
                let g = guess.get(x);
                if g > 0.0 {
                    -truth.get(x) * g.ln()
                } else {
                    f64::INFINITY
                }
            })
            .sum(),
        AlphaOrder::Infinity => support.iter().map(|&x| truth.get(x) * (1.0 - guess.get(x))).sum(),
        AlphaOrder::Finite(a) => {
            let e = 1.0 - 1.0 / a;
            support
                .iter()
                .map(|&x| truth.get(x) * a / (a - 1.0) * (1.0 - guess.get(x).powf(e)))
                .sum()
        }
    })
}

/// Expected reward `E[g(X)^((a-1)/a)]`, `E[ln g(X)]` at order one and
/// `E[g(X)]` at infinity.
fn expected_reward(weights: &[f64], guess: &Distribution, alpha: AlphaOrder) -> f64 {
    weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(x, &w)| {
            let g = guess.get(x);
            w * match alpha {
                AlphaOrder::One => g.ln(),
                AlphaOrder::Infinity => g,
                AlphaOrder::Finite(a) => g.powf((a - 1.0) / a),
            }
        })
        .sum()
}

fn operational_ratio(joint: &Joint, prior: &Distribution, alpha: AlphaOrder) -> (f64, BTreeMap<String, f64>) {
    let blind = optimal_estimator(prior, alpha);
    let denominator = expected_reward(prior.probs(), &blind.dist, alpha);
    let mut numerator = 0.0;
    for est in posterior_estimators(joint, alpha) {
        let EstimatorKind::PosteriorColumn(y) = est.kind else {
            unreachable!()
        };
        let column: Vec<f64> = joint.mass().iter().map(|row| row[y]).collect();
        numerator += expected_reward(&column, &est.dist, alpha);
    }
    let nats = match alpha {
        AlphaOrder::One => numerator - denominator,
        AlphaOrder::Infinity => (numerator / denominator).ln(),
        AlphaOrder::Finite(a) => a / (a - 1.0) * (numerator / denominator).ln(),
    };
    let nats = snap_zero(nats);
    let diagnostics = BTreeMap::from([
        ("numerator".to_string(), numerator),
        ("denominator".to_string(), denominator),
    ]);
    (nats, diagnostics)
}

/// Alpha-leakage from `X ~ prior` to the output of `channel`, for orders in
/// `[1, inf]`.
pub fn alpha_leakage(
    prior: &Distribution,
    channel: &Channel,
    alpha: AlphaOrder,
    method: Method,
) -> Result<LeakageReport> {
    alpha.require_leakage_order()?;
    let (nats, diagnostics) = match method {
        Method::ArimotoIdentity => (arimoto_mi(prior, channel, alpha)?.nats, BTreeMap::new()),
        Method::OperationalRatio => operational_ratio(&joint_from(prior, channel)?, prior, alpha),
    };
    Ok(LeakageReport {
        nats,
        alpha,
        method,
        diagnostics,
    })
}
