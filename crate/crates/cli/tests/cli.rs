use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overlap-graph-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path) -> String {
    let path = dir.join("k4.txt");
    std::fs::write(&path, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn count_on_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path());
    let o = run(&[
        "count",
        "--in",
        &g,
        "--pattern",
        "clique:3",
        "--pattern",
        "cycle:4",
        "--pattern",
        "custom:0-1 1-2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["pattern", "count", "elapsed_ms"]);
    assert_eq!(&rows[1][..2], ["clique:3", "4"]);
    assert_eq!(&rows[2][..2], ["cycle:4", "3"]);
    assert_eq!(&rows[3][..2], ["custom:0-1 1-2", "12"]);
}

#[test]
fn generate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let layers = dir.path().join("layers.txt");
    for (out, with_layers) in [(&a, true), (&b, false)] {
        let mut args = vec![
            "generate",
            "--n",
            "40",
            "--m",
            "30",
            "--dist",
            "point:x=5,y=0.5",
            "--seed",
            "3",
        ];
        let out = out.to_str().unwrap();
        args.extend(["--out", out]);
        if with_layers {
            args.extend(["--layers", layers.to_str().unwrap()]);
        }
        assert!(run(&args).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read_to_string(&layers).unwrap().lines().count(),
        30
    );
}

#[test]
fn theory_row_for_tiny_model() {
    let o = run(&[
        "theory",
        "--n",
        "5",
        "--m",
        "2",
        "--dist",
        "point:x=3,y=1",
        "--pattern",
        "clique:3",
        "--l-source",
        "exact",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[0] - 2.0).abs() < 1e-12);
    assert!((row[1] - 0.38).abs() < 1e-12);
    assert!(row[3] <= 0.19 && 0.19 <= row[4]);
}

#[test]
fn bounds_accept_overrides() {
    let o = run(&[
        "bounds",
        "--n",
        "50",
        "--m",
        "10",
        "--dist",
        "point:x=5,y=0.5",
        "--pattern",
        "clique:3",
        "--x",
        "6",
        "--y",
        "0.8",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("clique:3,6,0.8,"));
    let bad = run(&[
        "bounds",
        "--n",
        "50",
        "--m",
        "10",
        "--dist",
        "point:x=5,y=0.5",
        "--pattern",
        "clique:3",
        "--y",
        "1.5",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_reports_cases() {
    let o = run(&["verify", "--lemma", "6", "--pattern", "clique:4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "lemma,cases_checked,violations\n6,31,0\n");
    let o = run(&[
        "verify",
        "--lemma",
        "2",
        "--pattern",
        "cycle:3",
        "--pattern2",
        "custom:0-1 1-2",
    ]);
    assert!(o.status.success());
    assert_eq!(
        run(&["verify", "--lemma", "2", "--pattern", "cycle:3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn experiment_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "n = 60, 120\nm_ratio = 1\ndist = point:x=5,y=0.5\npatterns = clique:3 | cycle:4\nreplicates = 2\nseed = 11\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "3")] {
        let out = dir.path().join(name);
        let o = run(&[
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with("# overlap-graph-lab v1\nn,m,pattern,replicate,seed,count,theory_leading,ratio,elapsed_ms\n"));
    assert_eq!(text.lines().count(), 2 + 2 * 2 * 2);

    // Flags override the file.
    let out = dir.path().join("c.csv");
    let o = run(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "60",
        "--replicates",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(&out).unwrap().lines().count(),
        2 + 2
    );

    let o = run(&["summarize", dir.path().join("a.csv").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("clique:3,120,2,"));
    assert_eq!(
        run(&["summarize", out.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path());
    assert_eq!(
        run(&["count", "--in", &g, "--pattern", "cycle:9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "count",
            "--in",
            "/definitely/missing",
            "--pattern",
            "clique:3"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&["count", "--in", &g, "--pattern", "wheel:5"])
            .status
            .code(),
        Some(1)
    );
    let bad_out = run(&[
        "experiment",
        "--n",
        "50",
        "--dist",
        "point:x=5,y=0.5",
        "--pattern",
        "clique:3",
        "--out",
        "/definitely/missing/x.csv",
    ]);
    assert_eq!(bad_out.status.code(), Some(1));
    let too_small = run(&[
        "experiment",
        "--n",
        "3",
        "--dist",
        "point:x=5,y=0.5",
        "--pattern",
        "clique:3",
    ]);
    assert_eq!(too_small.status.code(), Some(1));
}

#[test]
fn regime_demo_warns_outside_window() {
    let o = run(&[
        "regime-demo",
        "--n",
        "1000",
        "--exponent",
        "0.3",
        "--replicates",
        "1",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(run(&["regime-demo", "--n", "500"]).status.code(), Some(1));
}
