//! End-to-end runs through the command-line entry point.

use std::fs;
use std::path::Path;

use bounded_percept::cli::{main_with_args, run, Mode, RunSpec, TaskSpec, EXIT_CONFIG, EXIT_NON_CONVERGENCE, EXIT_NUMERIC, EXIT_OK};
use tempfile::TempDir;

fn cli(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("bounded-percept").chain(args.iter().copied()))
}

fn write_utility(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    format!("file:{}", path.display())
}

fn summary_value(dir: &Path, key: &str) -> Option<String> {
    fs::read_to_string(dir.join("summary.txt"))
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
}

#[test]
fn analytic_run_writes_artifacts() {
    let tmp = TempDir::new().unwrap();
    let task = write_utility(tmp.path(), "u.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let out = tmp.path().join("run");
    let code = cli(&["run", "--task", &task, "--mode", "analytic", "--beta1", "5", "--beta2", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    for f in ["config.txt", "sweep_trace.csv", "behavior_analytic.csv", "summary.txt"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let trace = fs::read_to_string(out.join("sweep_trace.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "sweep,J,I_omega_x,I_x_a,max_change");
    assert_eq!(summary_value(&out, "analytic_converged").as_deref(), Some("true"));
}

#[test]
fn compare_run_writes_both_traces() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("mug");
    let code = cli(&[
        "run", "--task", "mug", "--mode", "compare", "--beta1", "2", "--beta2", "3", "--alpha-vw", "0.035",
        "--alpha-eta", "0.7", "--iters", "2000", "--out", out.to_str().unwrap(), "--unit", "nats",
    ]);
    assert_eq!(code, EXIT_OK);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "iteration,J,EU,I_omega_x_bits,I_x_a_bits");
    assert_eq!(trace.lines().count(), 1 + 5);
    let behavior = fs::read_to_string(out.join("behavior.csv")).unwrap();
    assert_eq!(behavior.lines().next().unwrap(), "world,a0,aL,aR,a2");
    assert_eq!(behavior.lines().count(), 5);
    let gap: f64 = summary_value(&out, "relative_gap").unwrap().parse().unwrap();
    assert!(gap.is_finite());
    assert_eq!(summary_value(&out, "unit").as_deref(), Some("nats"));
    let params = fs::read_to_string(out.join("parameters.txt")).unwrap();
    let (net, ch) = bounded_percept::channels::read_parameters::<f64>(&params).unwrap();
    assert_eq!((net.input_dim(), net.hidden_dim(), ch.num_actions()), (192, 4, 4));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("a");
    let spec = RunSpec {
        task: TaskSpec::Mug,
        mode: Mode::Gradient,
        iterations: 1500,
        seed: 9,
        out: first.clone(),
        noise: 0.02,
        ..RunSpec::default()
    };
    run(&spec).unwrap();
    let echoed = RunSpec::from_config(&fs::read_to_string(first.join("config.txt")).unwrap()).unwrap();
    assert_eq!(echoed, spec);

    let second = tmp.path().join("b");
    let code = cli(&["run", "--config", first.join("config.txt").to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    for f in ["trace.csv", "behavior.csv", "parameters.txt"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn grid_ranks_every_cell() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("grid");
    let code = cli(&["grid", "--task", "mug", "--beta1", "0.5", "--beta2", "0.5", "--iters", "200", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let grid = fs::read_to_string(out.join("grid.csv")).unwrap();
    assert_eq!(grid.lines().next().unwrap(), "rank,alpha_vw,alpha_eta,J,status");
    assert_eq!(grid.lines().count(), 1 + 25);
    assert!(summary_value(&out, "best_J").is_some());
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("x");
    let out = out.to_str().unwrap();
    assert_eq!(cli(&["run", "--task", "unicorns", "--out", out]), EXIT_CONFIG);
    assert_eq!(cli(&["run", "--mode", "sideways", "--out", out]), EXIT_CONFIG);
    assert_eq!(cli(&["run", "--beta1", "-1", "--out", out]), EXIT_CONFIG);
    assert_eq!(cli(&["run", "--task", "predator_prey", "--noise", "0.1", "--out", out]), EXIT_CONFIG);
    assert_eq!(cli(&["run", "--task", "file:/nonexistent/u.txt", "--out", out]), EXIT_CONFIG);
    let bad = write_utility(tmp.path(), "bad.txt", "2 2\n1 0\n");
    assert_eq!(cli(&["run", "--task", &bad, "--mode", "analytic", "--out", out]), EXIT_CONFIG);
    assert_eq!(cli(&["frobnicate"]), EXIT_CONFIG);
    assert_eq!(cli(&["--help"]), EXIT_OK);
}

#[test]
fn critical_slowing_down_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    let task = write_utility(tmp.path(), "u.txt", "2 2\n1 0\n0 1\n");
    let out = tmp.path().join("nc");
    let code = cli(&["run", "--task", &task, "--mode", "analytic", "--beta1", "2", "--beta2", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_NON_CONVERGENCE);
    assert_eq!(summary_value(&out, "analytic_converged").as_deref(), Some("false"));
}

#[test]
fn overflowing_updates_exit_with_four() {
    let tmp = TempDir::new().unwrap();
    let task = write_utility(tmp.path(), "u.txt", "2 2\n1e200 1e200\n1e200 1e200\n");
    let out = tmp.path().join("nf");
    let code = cli(&["run", "--task", &task, "--mode", "gradient", "--alpha-vw", "1e200", "--iters", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_NUMERIC);
}
