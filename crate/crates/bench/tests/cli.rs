use std::path::Path;
use std::process::Command;

fn gfs(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gfs")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn graph_sample_reconstruct_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    let samples = dir.path().join("s.txt");
    let values = dir.path().join("v.txt");
    let signal = dir.path().join("x.csv");

    let out = gfs(&["gen-graph", "--family", "sensor", "--n", "50", "--radius", "0.35", "--seed", "2", "--out", p(&edges)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = gfs(&[
        "sample", "--graph", p(&edges), "--bandwidth", "5", "--budget", "8", "--basis", "exact", "--out", p(&samples),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let set: Vec<usize> = std::fs::read_to_string(&samples)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(set.len(), 8);

    std::fs::write(&values, "1\n".repeat(8)).unwrap();
    let out = gfs(&[
        "reconstruct", "--graph", p(&edges), "--bandwidth", "5", "--samples", p(&samples), "--values", p(&values),
        "--method", "ls", "--out", p(&signal),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&signal).unwrap();
    assert!(text.starts_with("node,value\n"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn bench_commands_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.txt");
    let out_csv = dir.path().join("r.csv");
    std::fs::write(
        &cfg,
        "graph = cube\ngraph.side = 5\ngraph.dims = 2\nbandwidth = 4\nsamples = 6\nsnr_db = 10\ntrials = 2\n\
         methods = gfs, random\nreconstructors = ls, gfs-biased\n",
    )
    .unwrap();
    let out = gfs(&["static-bench", "--config", p(&cfg), "--out", p(&out_csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_csv).unwrap();
    assert!(text.starts_with("method,reconstructor,M,snr_db,t,trial,mse_sum,mse_mean,objective,wall_time_ms,seed\n"));
    assert_eq!(text.lines().count(), 1 + 8);

    std::fs::write(&cfg, "graph = cube\ngraph.side = 5\nbandwidth = 4\nsamples = 6\nwhat = 1\n").unwrap();
    assert_eq!(gfs(&["static-bench", "--config", p(&cfg), "--out", p(&out_csv)]).status.code(), Some(2));

    // rank-deficient least squares everywhere: rows are kept, exit code 3
    std::fs::write(
        &cfg,
        "graph = cube\ngraph.side = 5\ngraph.dims = 2\nbandwidth = 6\nsamples = 3\ntrials = 1\nmethods = gfs\n",
    )
    .unwrap();
    let out = gfs(&["static-bench", "--config", p(&cfg), "--out", p(&out_csv)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(std::fs::read_to_string(&out_csv).unwrap().lines().count(), 2);

    let traces = dir.path().join("traces");
    std::fs::write(
        &cfg,
        "graph = cube\ngraph.side = 6\ngraph.dims = 2\nbandwidth = 4\nsamples = 8\ntrials = 2\n\
         methods = gfs-ne, gfs\ndynamic.steps = 3\n",
    )
    .unwrap();
    let out = gfs(&["dynamic-bench", "--config", p(&cfg), "--out", p(&out_csv), "--trace-dir", p(&traces)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = std::fs::read_to_string(traces.join("trace_trial1.csv")).unwrap();
    let masks = gfs_bench::trace::read_trace(trace.as_bytes()).unwrap();
    assert_eq!((masks.len(), masks[0].len()), (4, 36));
}
