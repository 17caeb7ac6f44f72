//! Tunable information leakage for finite discrete channels.
//!
//! * [`prob`]: validated distributions, channels and joints.
//! * [`measures`]: Rényi entropy/divergence, Arimoto conditional entropy,
//!   Sibson and Arimoto mutual information.
//! * [`leakage`]: alpha-leakage and the optimal tilted estimators.
//! * [`capacity`]: maximal alpha-leakage and its brute-force oracle.
//! * [`theorems`]: property checks producing machine-readable verdicts.
//!
//! All values are in nats.

pub mod capacity;
pub mod error;
pub mod leakage;
mod logsum;
pub mod measures;
pub mod prob;
pub mod theorems;

pub use capacity::{
    grid_oracle_capacity, maximal_alpha_leakage, maximal_alpha_leakage_with, maxl, solve_alpha_capacity,
    uniform_sibson_lower_bound, CapacityResult, SolverOptions,
};
pub use error::{LeakageError, Result};
pub use leakage::{alpha_leakage, expected_alpha_loss, optimal_estimator, Estimator, LeakageReport, Method};
pub use logsum::log_sum_exp;
pub use measures::{arimoto_cond_entropy, arimoto_mi, renyi_divergence, renyi_entropy, sibson_mi, MeasureValue};
pub use prob::{
    cascade_channel, joint_from, product_channel, reverse_deterministic_channel, AlphaOrder, Channel, Distribution,
    Joint,
};
