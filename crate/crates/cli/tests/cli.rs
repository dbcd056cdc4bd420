use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use hamdist_core::all_distances_naive;

fn hamdist() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hamdist"))
}

fn run(args: &[&str]) -> Output {
    hamdist().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "exit {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, data: &[u8]) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, data).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &Path, n: usize, m: usize, plant: &str, seed: u64) -> (PathBuf, PathBuf, String) {
    let (p, t) = (dir.join("p"), dir.join("t"));
    let out = stdout(&run(&[
        "gen", "--n", &n.to_string(), "--m", &m.to_string(), "--plant", plant, "--seed", &seed.to_string(), "--pattern-out", s(&p),
        "--text-out", s(&t),
    ]));
    (p, t, out)
}

#[test]
fn exact_on_identical_strings() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", b"abracadabra");
    assert_eq!(stdout(&run(&["exact", "--pattern", s(&p), "--text", s(&p), "-k", "3"])), "0\t0\n");
    assert_eq!(stdout(&run(&["exact", "--pattern", s(&p), "--text", s(&p), "-k", "0"])), "0\t0\n");
}

#[test]
fn exact_matches_naive_and_marks_large_distances() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, _) = gen(dir.path(), 600, 40, "periodic:3:0.1", 7);
    let (pv, tv) = (std::fs::read(&p).unwrap(), std::fs::read(&t).unwrap());
    let d = all_distances_naive(&pv, &tv).unwrap();
    let k = 5;
    let got = stdout(&run(&["exact", "--pattern", s(&p), "--text", s(&t), "-k", &k.to_string()]));
    let want: String = d.iter().enumerate().map(|(i, &x)| if x <= k { format!("{i}\t{x}\n") } else { format!("{i}\t>{k}\n") }).collect();
    assert_eq!(got, want);
}

#[test]
fn epsilon_out_of_range_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", b"abc");
    let out = run(&["approx", "--pattern", s(&p), "--text", s(&p), "--epsilon", "0.34"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn pattern_longer_than_text_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", b"abcd");
    let t = write(dir.path(), "t", b"ab");
    assert_eq!(run(&["exact", "--pattern", s(&p), "--text", s(&t), "-k", "1"]).status.code(), Some(2));
}

#[test]
fn symbols_outside_sigma_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", &[0, 1, 5]);
    let out = run(&["exact", "--pattern", s(&p), "--text", s(&p), "-k", "1", "--sigma", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5"));
}

#[test]
fn approx_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, _) = gen(dir.path(), 3000, 200, "exact", 3);
    for extra in [&["--threshold", "20"][..], &[][..], &["--threshold", "20", "--confidence", "single:8"][..]] {
        let mut args = vec!["approx", "--pattern", s(&p), "--text", s(&t), "--epsilon", "0.3", "--seed", "11"];
        args.extend_from_slice(extra);
        let a = stdout(&run(&args));
        assert_eq!(a, stdout(&run(&args)));
        assert_eq!(a.lines().count(), 3000 - 200 + 1);
    }
}

#[test]
fn approx_queries_select_positions() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, planted) = gen(dir.path(), 2000, 100, "exact", 5);
    let at: usize = planted.trim().split('\t').nth(1).unwrap().parse().unwrap();
    let q = write(dir.path(), "q", format!("0\n{at}\n1900\n").as_bytes());
    let out = stdout(&run(&[
        "approx", "--pattern", s(&p), "--text", s(&t), "--epsilon", "0.25", "--threshold", "10", "--queries", s(&q),
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], format!("{at}\t0\tLT_K"));
}

#[test]
fn gen_plants_hold() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, planted) = gen(dir.path(), 1000, 64, "exact", 9);
    let at: usize = planted.trim().split('\t').nth(1).unwrap().parse().unwrap();
    let (pv, tv) = (std::fs::read(&p).unwrap(), std::fs::read(&t).unwrap());
    assert_eq!(&tv[at..at + 64], &pv[..]);

    let (p, t, _) = gen(dir.path(), 1000, 64, "far:0.3", 9);
    let (pv, tv) = (std::fs::read(&p).unwrap(), std::fs::read(&t).unwrap());
    assert!(all_distances_naive(&pv, &tv).unwrap().iter().all(|&d| d as f64 > 0.3 * 64.0));
}

#[test]
fn proptest_reports_planted_copy() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, planted) = gen(dir.path(), 4096, 512, "exact", 2);
    let at = planted.trim().split('\t').nth(1).unwrap();
    let out = stdout(&run(&["proptest", "--pattern", s(&p), "--text", s(&t), "--delta", "0.2"]));
    assert!(out.lines().any(|l| l == at), "{out}");
    assert_eq!(stdout(&run(&["proptest", "--pattern", s(&p), "--text", s(&t), "--delta", "0.2", "--decision"])).trim(), "true");

    let (p, t, _) = gen(dir.path(), 4096, 512, "far:0.3", 2);
    assert_eq!(stdout(&run(&["proptest", "--pattern", s(&p), "--text", s(&t), "--delta", "0.3", "--amplify", "5"])), "");
}

fn stream_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = hamdist().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn stream_matches_offline_output() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, _) = gen(dir.path(), 800, 50, "periodic:4:0.05", 4);
    let text = std::fs::read(&t).unwrap();
    for variant in ["primary", "alt"] {
        for multi in [false, true] {
            let mut args = vec!["stream", "--pattern", s(&p), "--epsilon", "0.3", "-k", "8", "--variant", variant, "--reps", "3"];
            if multi {
                args.push("--multi");
            }
            let online = stdout(&stream_stdin(&args, &text));
            assert_eq!(online.lines().count(), 800 - 50 + 1);
            args.extend_from_slice(&["--offline", s(&t)]);
            assert_eq!(online, stdout(&run(&args)), "{variant} multi={multi}");
        }
    }
}

#[test]
fn stream_empty_input_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", b"abc");
    assert_eq!(stdout(&stream_stdin(&["stream", "--pattern", s(&p), "--epsilon", "0.3", "-k", "1"], b"")), "");
}

#[test]
fn stream_stats_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, _) = gen(dir.path(), 3000, 300, "none", 6);
    let text = std::fs::read(&t).unwrap();
    for variant in ["primary", "alt"] {
        let out = stream_stdin(&["stream", "--pattern", s(&p), "--epsilon", "0.3", "-k", "30", "--variant", variant, "--stats"], &text);
        assert!(out.status.success());
        let err = String::from_utf8(out.stderr).unwrap();
        let field = |name: &str| -> usize {
            err.lines().find_map(|l| l.strip_prefix(&format!("{name}\t"))).unwrap().parse().unwrap()
        };
        assert!(field("resident_words") <= field("budget"), "{err}");
    }
}

#[test]
fn stream_rejects_symbol_outside_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", &[0, 1]);
    let out = stream_stdin(&["stream", "--pattern", s(&p), "--epsilon", "0.3", "-k", "1", "--sigma", "2"], &[0, 1, 1, 7]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_emits_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    stdout(&run(&[
        "bench", "--n", "2000,4000", "--m", "64,128", "-k", "4,8", "--algorithms", "exact,generic,stream-alt,proptest", "--out", s(&csv),
    ]));
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("n,m,k,eps,algorithm,wall_ms,reads,violations"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 2 * 4);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 8);
        if cols[4] == "exact" {
            assert_eq!(cols[7], "0");
        }
        assert_eq!(cols[6] == "NA", cols[4] != "proptest", "{row}");
    }
}

#[test]
fn closed_stdout_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (p, t, _) = gen(dir.path(), 200_000, 100, "none", 1);
    let mut child = hamdist()
        .args(["exact", "--pattern", s(&p), "--text", s(&t), "-k", "3"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
