//! End-to-end runs of the `patrol` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn patrol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patrol")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn complete_network(n: usize, dir: &Path) -> PathBuf {
    let mut text: String = (1..=n).map(|i| format!("node v{i}\n")).collect();
    for i in 1..=n {
        for j in i + 1..=n {
            text.push_str(&format!("arc v{i}-v{j} v{i} v{j} 1\n"));
        }
    }
    let path = dir.join(format!("k{n}.net"));
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_sample_tree() {
    let tree = data("sample_tree.net");
    let o = patrol(&["decompose", s(&tree), "--alpha", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lambda_E=7\n"), "{out}");
    assert!(out.contains("value=4/17\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("component ")).count(), 5);
    let err = stderr(&o);
    assert!(err.starts_with("# manifest\ncommand=decompose\n"));
    assert!(err.contains("sha256="));

    let out = stdout(&patrol(&["decompose", s(&tree), "--alpha", "8"]));
    assert!(out.contains("core measure=0 point=B\n"), "{out}");
    assert!(out.contains("value=2/5\n"));
}

#[test]
fn validation_errors_exit_one() {
    let o = patrol(&["decompose", s(&data("cycle4.net")), "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a tree"));
    let o = patrol(&["attack", s(&data("sample_tree.net")), "--alpha", "41"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(patrol(&["decompose", "--bogus"]).status.code(), Some(2));
    assert_eq!(patrol(&["decompose", s(&data("sample_tree.net")), "--alpha", "x"]).status.code(), Some(2));
    assert_eq!(patrol(&["patrol", s(&data("sample_tree.net")), "--kind", "e"]).status.code(), Some(2));
    assert_eq!(patrol(&["decompose", "/nonexistent.net", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(patrol(&["--jobs", "0", "decompose", s(&data("sample_tree.net")), "--alpha", "1"]).status.code(), Some(2));
}

#[test]
fn attack_horizon_from_epsilon() {
    let o = patrol(&["attack", s(&data("sample_tree.net")), "--alpha", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("T=240\n"));
    let err = stderr(&o);
    assert!(err.contains("epsilon=1/20\n") && err.contains("T=240\n"), "{err}");
    let o = patrol(&["attack", s(&data("sample_tree.net")), "--alpha", "4", "--horizon", "17"]);
    assert!(stdout(&o).starts_with("T=17\n"));
}

#[test]
fn e_patrol_round_trip_and_value() {
    let dir = tempfile::tempdir().unwrap();
    let tree = data("sample_tree.net");
    let (pat, att) = (dir.path().join("e.pat"), dir.path().join("a.att"));
    let o = patrol(&["patrol", s(&tree), "--kind", "e", "--alpha", "4", "-o", s(&pat)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains(&format!("output={}", pat.display())));
    let text = std::fs::read_to_string(&pat).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("mix ")).count(), 2);
    patrol(&["attack", s(&tree), "--alpha", "4", "-o", s(&att)]);
    let o = patrol(&["simulate", s(&tree), "--patrol", s(&pat), "--attack", s(&att), "--alpha", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "exact,4/17,,,,,");

    let o = patrol(&["simulate", s(&tree), "--patrol", s(&pat), "--alpha", "4", "--method", "grid"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("grid,4/17,"));

    let o = patrol(&["simulate", s(&tree), "--patrol", s(&pat), "--alpha", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn monte_carlo_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let tree = data("sample_tree.net");
    let (pat, att) = (dir.path().join("e.pat"), dir.path().join("a.att"));
    patrol(&["patrol", s(&tree), "--kind", "e", "--alpha", "4", "-o", s(&pat)]);
    patrol(&["attack", s(&tree), "--alpha", "4", "-o", s(&att)]);
    let run = |extra: &[&str]| {
        let mut args = extra.to_vec();
        args.extend(["simulate", s(&tree), "--patrol", s(&pat), "--attack", s(&att), "--alpha", "4"]);
        args.extend(["--method", "mc", "--trials", "5000"]);
        stdout(&patrol(&args))
    };
    let base = run(&[]);
    assert!(base.contains(",5000,0,"), "{base}");
    assert_eq!(base, run(&["--seed", "0"]));
    assert_eq!(base, run(&["--jobs", "3"]));
    assert_ne!(base, run(&["--seed", "1"]));
}

#[test]
fn complete_patrols() {
    let o = patrol(&["patrol", s(&data("k4.net")), "--kind", "complete"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("mix 1/3 ")).count(), 3);
    assert!(stderr(&o).contains("valid alpha range: alpha <= 4"));

    let dir = tempfile::tempdir().unwrap();
    let (pat, att) = (dir.path().join("c.pat"), dir.path().join("a.att"));
    std::fs::write(&pat, out).unwrap();
    std::fs::write(&att, "temporal fixed 0\nuniform 1 v1-v2[0,1];v1-v3[0,1];v1-v4[0,1];v2-v3[0,1];v2-v4[0,1];v3-v4[0,1]\n").unwrap();
    let o = patrol(&["simulate", s(&data("k4.net")), "--patrol", s(&pat), "--attack", s(&att), "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "exact,1/2,,,,,");
}

#[test]
fn factorize_counts_and_best() {
    let o = patrol(&["factorize", s(&data("k6.net")), "--enumerate"]);
    assert!(stdout(&o).starts_with("count=6\n"));
    let dir = tempfile::tempdir().unwrap();
    let o = patrol(&["factorize", s(&data("k8.net")), "--enumerate", "--out-dir", s(dir.path())]);
    assert!(stdout(&o).starts_with("count=6240\n"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 6240);

    let f = dir.path().join("best.fac");
    let o = patrol(&["factorize", s(&data("k8.net")), "--best", "-o", s(&f)]);
    assert!(stderr(&o).contains("delta*=4 certified=true"), "{}", stderr(&o));
    let o = patrol(&["patrol", s(&data("k8.net")), "--kind", "complete", "--factorization", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("delta(F)=4 "));
    let o = patrol(&["patrol", s(&data("k8.net")), "--kind", "factor", "--m", "2", "--factorization", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn size_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let k10 = complete_network(10, dir.path());
    assert_eq!(patrol(&["factorize", s(&k10), "--enumerate"]).status.code(), Some(3));
    assert_eq!(patrol(&["factorize", s(&k10), "--best"]).status.code(), Some(3));
    let o = patrol(&["factorize", s(&k10), "--best", "--heuristic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("certified=false"));
}
