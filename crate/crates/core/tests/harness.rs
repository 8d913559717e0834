use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relaysel::config::ExperimentConfig;
use relaysel::harness::{run_sweep, run_trial, summarize, sweep_m, sweep_points, Method, SweepKind};
use relaysel::{draw_channels, local_estimator, output_sinr, solve_centralized, RelaySet};

fn quick(methods: Vec<Method>, trials: usize) -> ExperimentConfig {
    ExperimentConfig { methods, trials, ..Default::default() }
}

#[test]
fn no_interference_matches_a_single_source_run() {
    let with = ExperimentConfig { snr_sweep_inr: 0.0, ..quick(Method::ALL.to_vec(), 10) };
    let without = ExperimentConfig { sources: 1, ..with.clone() };
    let a = run_sweep(&with).unwrap();
    let b = run_sweep(&without).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.selected, y.selected);
        assert!((x.mmse - y.mmse).abs() <= 1e-12 * x.mmse.abs().max(1.0));
        assert!((x.sinr_linear - y.sinr_linear).abs() <= 1e-12 * x.sinr_linear.max(1e-300));
    }
}

#[test]
fn one_relay_makes_every_method_coincide() {
    let cfg = ExperimentConfig { m_grid: vec![1], sweep: SweepKind::M, ..quick(Method::ALL.to_vec(), 5) };
    let rows = run_sweep(&cfg).unwrap();
    for t in 0..5 {
        let trial: Vec<_> = rows.iter().filter(|r| r.trial == t).collect();
        assert_eq!(trial.len(), 4);
        assert!(trial.iter().all(|r| r.mmse == trial[0].mmse && r.sinr_linear == trial[0].sinr_linear));
    }
}

#[test]
fn none_method_reports_the_centralized_sinr() {
    let cfg = ExperimentConfig { m_grid: vec![1], sweep: SweepKind::M, ..quick(vec![Method::None], 1) };
    let point = sweep_points(&cfg)[0];
    let rows = run_trial(&cfg, &point, 0, 1234).unwrap();
    let sc = point.scenario(&cfg);
    let ch = draw_channels(&sc, &mut ChaCha8Rng::seed_from_u64(1234)).unwrap();
    let est = local_estimator(&sc, &ch);
    let set = RelaySet::full(1);
    let (w, _) = solve_centralized(&set, &est, &ch, sc.total_power).unwrap();
    assert_eq!(rows[0].sinr_linear, output_sinr(&w, &ch, &sc, &set).unwrap());
}

#[test]
fn exhaustive_lower_bounds_smmsec_per_row() {
    let cfg = ExperimentConfig {
        m_grid: vec![2, 3, 4],
        sweep: SweepKind::M,
        ..quick(vec![Method::Exhaustive, Method::Smmsec], 30)
    };
    let rows = run_sweep(&cfg).unwrap();
    let (ex, sm) = rows.split_at(rows.len() / 2);
    for (e, s) in ex.iter().zip(sm) {
        assert_eq!((e.sweep_value, e.trial, e.channel_hash), (s.sweep_value, s.trial, s.channel_hash));
        assert!(e.mmse <= s.mmse + 1e-9);
    }
}

#[test]
fn exhaustive_mean_mmse_does_not_grow_with_relays() {
    let cfg = ExperimentConfig { m_grid: vec![2, 3, 4, 5], ..quick(vec![Method::Exhaustive], 50) };
    let summary = summarize(&sweep_m(&cfg).unwrap());
    assert!(summary.windows(2).all(|w| w[1].mean_mmse <= w[0].mean_mmse));
}

#[test]
fn consensus_solver_runs_end_to_end() {
    let cfg = ExperimentConfig {
        solver: "consensus".parse().unwrap(),
        snr_grid_db: vec![0.0],
        snr_sweep_relays: 3,
        consensus: relaysel::ConsensusConfig { max_iters: 500, ..Default::default() },
        ..quick(vec![Method::None, Method::Smmsec], 3)
    };
    let rows = run_sweep(&cfg).unwrap();
    assert!(rows.iter().all(|r| !r.failed() && r.iterations > 0));
}

fn relaysel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relaysel"))
}

#[test]
fn cli_writes_csv_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(&cfg_path, "trials = 2\nsnr_grid_db = 0, 5\nmax_iters = 200\n").unwrap();
    let out = dir.path().join("out.csv");
    let trace = dir.path().join("trace.csv");
    let status = relaysel()
        .args(["run", "--config"])
        .arg(&cfg_path)
        .args(["--seed", "9", "--methods", "none,smmsec", "--out"])
        .arg(&out)
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2);
    assert!(csv.starts_with(
        "method,sweep_param,sweep_value,trial,seed,selected_mask,mmse,sinr_linear,sinr_db,iters,converged\n"
    ));
    let trace = std::fs::read_to_string(&trace).unwrap();
    assert!(trace.starts_with("iteration,disagreement,power,mmse\n"));
    assert!(trace.lines().count() > 1);
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "trials = zero\n").unwrap();
    let code = |args: &[&str]| relaysel().args(args).output().unwrap().status.code();
    assert_eq!(code(&["run", "--config", bad.to_str().unwrap()]), Some(1));
    assert_eq!(code(&["run", "--config", dir.path().join("missing.cfg").to_str().unwrap()]), Some(3));
    assert_eq!(code(&["run", "--trials", "1", "--out", "/nonexistent-dir/x.csv"]), Some(3));
    assert_eq!(code(&["run", "--sweep", "sideways"]), Some(1));
}
