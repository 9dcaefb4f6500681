use std::fs;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcfr-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_then_phase_stats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ckpt = dir.path().join("tables.txt");
    let o = bench(&[
        "solve", "--game", "leduc", "--algo", "sync-pcfr", "--budget", "3000iters", "--seed", "2",
        "--eval-every", "iters:1000", "--out", out, "--checkpoint", ckpt.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("3000 meta-iterations"));
    let run = dir.path().join("leduc_sync-pcfr_seed2.csv");
    let text = fs::read_to_string(&run).unwrap();
    assert_eq!(text.lines().count(), 3001);
    assert_eq!(text.lines().filter(|l| !l.split(',').nth(4).unwrap().is_empty()).count(), 4);
    let tables = fs::read_to_string(&ckpt).unwrap();
    assert!(tables.starts_with("# algorithm=sync-pcfr seed=2 meta=3000"));

    let stats_dir = dir.path().join("phases");
    let o = bench(&["phase-stats", "--in", run.to_str().unwrap(), "--out", stats_dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mapping = fs::read_to_string(stats_dir.join("mapping.csv")).unwrap();
    assert_eq!(mapping.lines().count(), 3001);
    let hist = fs::read_to_string(stats_dir.join("histogram.csv")).unwrap();
    assert!(hist.starts_with("w_low,w_high,count\n1,2,"));
    assert!(hist.lines().count() > 2, "some phase is longer than one iteration");
}

#[test]
fn vanilla_pcfr_phases_are_all_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bench(&["solve", "--game", "kuhn", "--algo", "pcfr", "--budget", "500iters", "--out", out, "--no-wall-time"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let run = dir.path().join("kuhn_pcfr_seed0.csv");
    let o = bench(&["phase-stats", "--in", run.to_str().unwrap(), "--out", out]);
    assert!(o.status.success());
    let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert_eq!(hist, "w_low,w_high,count\n1,2,500\n");
}

#[test]
fn bench_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kuhn.cfg");
    let out = dir.path().join("results");
    fs::write(
        &cfg,
        format!(
            "game = kuhn\nalgorithms = cfrplus, sync-pcfr\nseeds = 2\nbudget = 2e5nodes\neval_every = log:10\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = bench(&["bench", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("wrote 4 run files"));
    let agg = out.join("aggregate.csv");
    let agg = agg.to_str().unwrap();

    let o = bench(&["compare", "--in", agg, "--a", "cfrplus", "--b", "cfrplus", "--target", "1e-2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ratio cfrplus/cfrplus = 1.0000"), "{}", stdout(&o));

    let o = bench(&["compare", "--in", agg, "--a", "sync-pcfr", "--b", "cfrplus", "--target", "1e-12"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not crossed"));

    let o = bench(&["compare", "--in", agg, "--a", "dcfr", "--b", "cfrplus", "--target", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases: [&[&str]; 5] = [
        &["solve", "--game", "holdem", "--algo", "cfr", "--budget", "10iters", "--out", out],
        &["solve", "--game", "kuhn", "--algo", "dcfr", "--budget", "10iters", "--out", out],
        &["solve", "--game", "kuhn", "--algo", "cfr", "--budget", "10", "--out", out],
        &["solve", "--game", "kuhn", "--algo", "cfr", "--budget", "10iters", "--eval-every", "log:0", "--out", out],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(bench(args).status.code(), Some(2), "{args:?}");
    }
    let o = bench(cases[0]);
    assert!(stderr(&o).contains("kuhn, leduc, leduc5"));

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "meta_iteration,effective_iteration,w_pst,nodes_touched,exploitability,wall_time_ms\n").unwrap();
    let o = bench(&["phase-stats", "--in", empty.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = bench(&["bench", "--config", "/nonexistent/config.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dump_and_matrix() {
    let o = bench(&["dump", "--game", "kuhn"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 55);
    assert!(text.starts_with("0 chance:1,1,1,1,1,1/6 - "));

    let o = bench(&["matrix", "--game", "rps", "--algo", "sync-fp", "--iters", "2000", "--seed", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("2000,"));
    assert!(text.lines().count() < 2000);
    let e: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!(e < 0.05);
}
