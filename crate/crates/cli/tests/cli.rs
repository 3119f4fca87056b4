use std::process::{Command, Output};

fn glt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glt"))
        .args(args)
        .env("GLT_THREADS", "2")
        .output()
        .expect("spawn glt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn trivial_figure_csv() {
    let o = glt(&["figure", "2", "--set", "n=3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 4);
    assert!(s.starts_with("k,k_over_n,weighted_eigenvalue,rearranged_sample"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t3.cfg");
    std::fs::write(&cfg, "# small table 3\neta = 1\nn = 100\ngrid = uniform\n").unwrap();
    let o = glt(&["table", "3", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 2);
    let e: f64 = s.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
    assert!((e / 0.3155 - 1.0).abs() < 0.01, "{e}");

    // --set wins over the file
    let o = glt(&["table", "3", "--config", cfg.to_str().unwrap(), "--set", "grid=both"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = glt(&[
            "table",
            "2",
            "--set",
            "alpha=1",
            "--set",
            "n=100",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    for f in ["table2.csv", "table2.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    assert!(a.join("table2.timing.json").exists());
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("table2.json")).unwrap()).unwrap();
    assert_eq!(summary["table"], 2);
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(glt(&["table", "9"]).status.code(), Some(1));
    assert_eq!(glt(&["table", "1", "--set", "n=0"]).status.code(), Some(1));
    assert_eq!(glt(&["figure", "2", "--set", "colour=red"]).status.code(), Some(1));
    assert_eq!(glt(&["figure", "2", "--set", "r=10"]).status.code(), Some(1));
    assert_eq!(glt(&["nonsense"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_glt"))
        .args(["selftest"])
        .env("GLT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = glt(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn single_case_commands() {
    let o = glt(&["assemble", "--set", "n=4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("4 1"));

    let o = glt(&["eig", "--set", "scheme=iga", "--set", "eta=2", "--set", "n=20"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 21);

    let o = glt(&["compare", "--set", "n=50"]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert!(last.ends_with("computed-exact-ref"));

    let o = glt(&["symbol", "--samples", "3", "--set", "grid=liouville"]);
    assert_eq!(stdout(&o).lines().count(), 10);

    let o = glt(&["rearrange", "--set", "n=10", "--set", "r=200"]);
    assert_eq!(stdout(&o).lines().count(), 11);
}
