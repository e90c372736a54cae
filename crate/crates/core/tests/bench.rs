use hazeopt::bench::{gen_games, grid_cells, run_bench, BenchOptions, GenConfig};
use hazeopt::solvers::{Algo, Epsilon};

#[test]
fn generated_payoff_mean() {
    let games = gen_games(&GenConfig { n: 30, mpd: 60, seed: 11, count: 5000 }).unwrap();
    let (sum, count) = games.iter().flat_map(|g| g.actions()).fold((0i64, 0i64), |(s, c), a| (s + a.p, c + 1));
    let mean = sum as f64 / count as f64;
    assert!((mean - 15.0).abs() < 0.5, "{mean}");
}

#[test]
fn exact_solvers_agree_on_benchmarked_instances() {
    let cells = grid_cells(&[4, 8], &[30, 90], 5, 40).unwrap();
    let opts = BenchOptions { trials: 40, warmup: 3, threads: 2 };
    let records = run_bench(&cells, &[Algo::Dp, Algo::Ilp, Algo::Brute], &[], &opts).unwrap();
    assert_eq!(records.len(), 12);
    for chunk in records.chunks(3) {
        assert!(chunk.iter().all(|r| r.feasible_count <= r.trials && r.mean_runtime_ns > 0.0));
        assert!(chunk.windows(2).all(|w| w[0].mean_total_hazing == w[1].mean_total_hazing), "{chunk:?}");
        assert!(chunk.windows(2).all(|w| w[0].feasible_count == w[1].feasible_count));
    }
}

#[test]
fn fptas_runtime_does_not_grow_with_payoffs() {
    let trials = 300;
    let cells = grid_cells(&[30], &[60, 600], 9, trials).unwrap();
    let opts = BenchOptions { trials, warmup: 3, threads: 1 };
    let eps = [Epsilon::new(3, 10).unwrap()];
    let records = run_bench(&cells, &[Algo::Fptas], &eps, &opts).unwrap();
    let ratio = records[1].mean_runtime_ns / records[0].mean_runtime_ns;
    assert!(ratio < 2.0, "{records:?}");
}
