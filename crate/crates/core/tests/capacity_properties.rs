use alphaleak::capacity::{maximal_alpha_leakage_with, SolverOptions};
use alphaleak::leakage::Method;
use alphaleak::theorems::InstanceGenerator;
use alphaleak::{
    alpha_leakage, grid_oracle_capacity, maximal_alpha_leakage, maxl, uniform_sibson_lower_bound, AlphaOrder, Channel,
    Distribution,
};
use proptest::prelude::*;

fn channel_strategy() -> impl Strategy<Value = Channel> {
    (2usize..=3, 2usize..=4, any::<u64>()).prop_map(|(n, m, seed)| InstanceGenerator::new(seed).channel(n, m))
}

fn order(a: f64) -> AlphaOrder {
    AlphaOrder::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn capacity_is_sandwiched(w in channel_strategy(), a in 1.05f64..30.0) {
        let u = Distribution::uniform(w.in_size()).unwrap();
        let cap = maximal_alpha_leakage(&u, &w, order(a)).unwrap().nats;
        let lower = uniform_sibson_lower_bound(&w, order(a)).unwrap();
        let upper = maxl(&w, u.support()).unwrap();
        prop_assert!(lower <= cap + 1e-10);
        prop_assert!(cap <= upper + 1e-10);
        prop_assert!(cap <= (w.in_size() as f64).ln() + 1e-10);
    }

    #[test]
    fn capacity_grows_with_order(w in channel_strategy()) {
        let u = Distribution::uniform(w.in_size()).unwrap();
        let mut last = maximal_alpha_leakage(&u, &w, AlphaOrder::One).unwrap().nats;
        for a in [1.2, 2.0, 5.0, 20.0, f64::INFINITY] {
            let v = maximal_alpha_leakage(&u, &w, order(a)).unwrap().nats;
            prop_assert!(last <= v + 1e-9, "order {a}: {last} > {v}");
            last = v;
        }
    }

    #[test]
    fn large_order_approaches_maximal_leakage(w in channel_strategy()) {
        let u = Distribution::uniform(w.in_size()).unwrap();
        let v = maximal_alpha_leakage(&u, &w, order(1e4)).unwrap().nats;
        let limit = maxl(&w, u.support()).unwrap();
        prop_assert!((v - limit).abs() <= 1e-3);
    }

    /// Only the support of the prior matters above order one.
    #[test]
    fn depends_on_prior_only_through_support(w in channel_strategy(), seed in any::<u64>(), a in 1.1f64..10.0) {
        let mut gen = InstanceGenerator::new(seed);
        let p1 = gen.distribution(w.in_size());
        let p2 = gen.distribution(w.in_size());
        let v1 = maximal_alpha_leakage(&p1, &w, order(a)).unwrap().nats;
        let v2 = maximal_alpha_leakage(&p2, &w, order(a)).unwrap().nats;
        prop_assert!((v1 - v2).abs() <= 1e-10);
        let inf1 = maximal_alpha_leakage(&p1, &w, AlphaOrder::Infinity).unwrap().nats;
        let inf2 = maximal_alpha_leakage(&p2, &w, AlphaOrder::Infinity).unwrap().nats;
        prop_assert_eq!(inf1, inf2);
    }

    /// Maximal alpha-leakage dominates alpha-leakage for the given prior.
    #[test]
    fn dominates_alpha_leakage(w in channel_strategy(), seed in any::<u64>(), a in 1.0f64..10.0) {
        let prior = InstanceGenerator::new(seed).distribution(w.in_size());
        let l = alpha_leakage(&prior, &w, order(a), Method::ArimotoIdentity).unwrap().nats;
        let cap = maximal_alpha_leakage(&prior, &w, order(a)).unwrap().nats;
        prop_assert!(l <= cap + 1e-9);
    }
}

#[test]
fn solver_matches_oracle_on_partial_supports() {
    let mut gen = InstanceGenerator::new(77);
    for i in 0..10 {
        let w = gen.channel(4, 3 + i % 2);
        let prior = gen.partial_distribution(4);
        for alpha in [AlphaOrder::One, AlphaOrder::Finite(3.0), AlphaOrder::Infinity] {
            let solved = maximal_alpha_leakage(&prior, &w, alpha).unwrap().nats;
            let oracle = grid_oracle_capacity(&w, prior.support(), alpha, 0.01).unwrap();
            if alpha == AlphaOrder::One {
                // The oracle maximizes over inputs; order one keeps the prior.
                assert!(solved <= oracle + 1e-9);
            } else {
                assert!((solved - oracle).abs() <= 1e-6, "{alpha}: {solved} vs {oracle}");
            }
        }
    }
}

#[test]
fn solver_reports_convergence_and_is_deterministic() {
    let w = InstanceGenerator::new(5).channel(3, 4);
    let u = Distribution::uniform(3).unwrap();
    let opts = SolverOptions::default();
    let a = maximal_alpha_leakage_with(&u, &w, AlphaOrder::Finite(2.5), &opts).unwrap();
    let b = maximal_alpha_leakage_with(&u, &w, AlphaOrder::Finite(2.5), &opts).unwrap();
    assert!(a.converged);
    assert!(a.kkt_residual < 1e-8);
    assert_eq!(a.nats.to_bits(), b.nats.to_bits());
    assert_eq!(a.argmax_input, b.argmax_input);
}

#[test]
fn iteration_cap_is_reported() {
    let w = InstanceGenerator::new(6).channel(3, 3);
    let u = Distribution::uniform(3).unwrap();
    let opts = SolverOptions {
        max_iterations: 2,
        restarts: 0,
        ..SolverOptions::default()
    };
    let r = maximal_alpha_leakage_with(&u, &w, AlphaOrder::Finite(4.0), &opts).unwrap();
    assert!(!r.converged);
    assert_eq!(r.diagnostics["max_iterations_exceeded"], 1.0);
}

#[test]
fn solver_converges_across_orders() {
    let mut gen = InstanceGenerator::new(0xC0DE);
    let mut channels = vec![Channel::bsc(0.1).unwrap(), Channel::bsc(0.3).unwrap()];
    for i in 0..12 {
        channels.push(gen.channel(2 + i % 3, 2 + i % 4));
    }
    let orders: Vec<f64> = (0..60).map(|i| 10f64.powf(3.0 * (i as f64 + 0.5) / 60.0)).collect();
    for (k, w) in channels.iter().enumerate() {
        let u = Distribution::uniform(w.in_size()).unwrap();
        for &a in &orders {
            let r = maximal_alpha_leakage(&u, w, order(a)).unwrap();
            assert!(r.converged, "channel {k} order {a}: gap {:e} after {} iterations", r.kkt_residual, r.iterations);
        }
    }
}
