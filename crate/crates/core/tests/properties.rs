use std::sync::Arc;

use nebm::baselines::{SaConfig, TabuConfig};
use nebm::bench::{run_plan, BenchmarkPlan, BksCache, BudgetSpec};
use nebm::schedule::RefractoryPolicy;
use nebm::snn::{NebmConfig, Network};
use nebm::{Assignment, Budget, QuboMatrix, SolverSpec};
use proptest::prelude::*;

fn arb_qubo() -> impl Strategy<Value = QuboMatrix> {
    (1usize..=64)
        .prop_flat_map(|n| {
            let entry = (0..n, 0..n, -128i64..=127);
            (Just(n), prop::collection::vec(entry, 0..4 * n))
        })
        .prop_map(|(n, entries)| {
            let upper: Vec<_> = entries.into_iter().map(|(i, j, c)| (i.min(j), i.max(j), c)).collect();
            QuboMatrix::from_entries(n, &upper).unwrap()
        })
}

fn arb_case() -> impl Strategy<Value = (QuboMatrix, Vec<bool>, Vec<Vec<usize>>)> {
    arb_qubo().prop_flat_map(|q| {
        let n = q.n();
        let batch = prop::collection::btree_set(0..n, 0..=n).prop_map(|s| s.into_iter().collect::<Vec<_>>());
        (Just(q), prop::collection::vec(any::<bool>(), n), prop::collection::vec(batch, 100))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_batches_keep_fields_exact((q, bits, batches) in arb_case()) {
        let mut x = Assignment::from(bits);
        let mut z = q.local_fields(&x).unwrap();
        for batch in &batches {
            q.apply_flips(&mut x, &mut z, batch).unwrap();
            prop_assert_eq!(&z, &q.local_fields(&x).unwrap());
        }
    }

    #[test]
    fn zero_assignment_costs_nothing(q in arb_qubo()) {
        prop_assert_eq!(q.evaluate_cost(&Assignment::zeros(q.n())).unwrap(), 0);
    }

    #[test]
    fn best_is_minimum_emission(q in arb_qubo(), seed in any::<u64>(), lo in 0u32..3, span in 0u32..6) {
        let cfg = NebmConfig { refractory: RefractoryPolicy::new(lo, lo + span).unwrap(), ..NebmConfig::default() }
            .with_seed(seed);
        let mut net = Network::new(q.clone(), &cfg).unwrap();
        let mut lowest = q.evaluate_cost(net.assignment()).unwrap();
        for _ in 0..150 {
            lowest = lowest.min(net.step().cost_emitted);
        }
        let best = net.integrator();
        prop_assert_eq!(best.best_cost, lowest);
        prop_assert_eq!(q.evaluate_cost(&best.best_assignment).unwrap(), lowest);
    }

    #[test]
    fn reported_best_is_reproducible(q in arb_qubo(), seed in any::<u64>()) {
        let q = Arc::new(q);
        for spec in [
            SolverSpec::Nebm(NebmConfig::default()),
            SolverSpec::Sa(SaConfig::default()),
            SolverSpec::Tabu(TabuConfig { restart_after: Some(30), ..TabuConfig::default() }),
        ] {
            let r = spec.solve(&q, seed, Budget::steps(120)).unwrap();
            prop_assert_eq!(q.evaluate_cost(&r.best_assignment).unwrap(), r.best_cost);
        }
    }
}

#[test]
fn small_dense_grid_gaps() {
    let plan = BenchmarkPlan {
        nodes: vec![10],
        densities: vec![0.30],
        instance_seeds: (0..5).collect(),
        budgets: vec![BudgetSpec::Steps(10_000)],
        solvers: vec![SolverSpec::Nebm(NebmConfig::default())],
        run_seeds: (0..5).collect(),
        ..BenchmarkPlan::default()
    };
    let records = run_plan(&plan, &BksCache::default()).unwrap();
    assert_eq!(records.len(), 25);
    assert!(records.iter().all(|r| r.gap_percent <= 20.0));
    let mean = records.iter().map(|r| r.gap_percent).sum::<f64>() / records.len() as f64;
    assert!(mean <= 5.0, "mean gap {mean}");
}

#[test]
fn plan_reads_from_toml_with_defaults() {
    let plan: BenchmarkPlan = toml::from_str(
        "nodes = [25]\nbudgets = [{ seconds = 0.5 }]\n[[solvers]]\nsolver = \"nebm\"\nrefractory = { max = 4 }\n",
    )
    .unwrap();
    assert_eq!(plan.densities, BenchmarkPlan::default().densities);
    assert_eq!(plan.budgets, vec![BudgetSpec::Seconds(0.5)]);
    let SolverSpec::Nebm(cfg) = &plan.solvers[0] else { panic!("expected nebm") };
    assert_eq!(cfg.refractory, RefractoryPolicy { min: 1, max: 4 });
    assert_eq!(cfg.schedule, NebmConfig::default().schedule);
}
