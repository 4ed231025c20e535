//! End-to-end tests of the `gg` binary: golden stdout bytes, exit codes,
//! file round trips, and seed reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use giving_game::engine::{play, ChoicePolicy};
use giving_game::frame::frame_of;
use giving_game::generate::{fixture_figure2, fixture_figure6a, generate, GeneratorSpec};
use giving_game::io::{matrix_to_json, trace_from_json};
use giving_game::matrix::AgentId;

fn gg(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gg"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = gg(args, &[]);
    assert!(
        out.status.success(),
        "gg {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn write_fixtures(dir: &Path) -> (PathBuf, PathBuf) {
    let fig2 = dir.join("fig2.json");
    let fig6a = dir.join("fig6a.json");
    fs::write(&fig2, matrix_to_json(&fixture_figure2())).unwrap();
    fs::write(&fig6a, matrix_to_json(&fixture_figure6a())).unwrap();
    (fig2, fig6a)
}

#[test]
fn gen_matches_library_serialization() {
    let out = stdout_of(&["gen", "fixture:figure2"]);
    assert_eq!(out, matrix_to_json(&fixture_figure2()));
    let out = stdout_of(&["gen", "random:5,4,11"]);
    let spec = GeneratorSpec::Random {
        n: 5,
        max_value: 4,
        seed: 11,
    };
    assert_eq!(out, matrix_to_json(&generate(&spec).unwrap()));
}

#[test]
fn simulate_text_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, fig6a) = write_fixtures(dir.path());
    let out = stdout_of(&[
        "simulate",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "C",
    ]);
    assert_eq!(
        out,
        "path: C D C D\nboundary: 0\npair: {C,D}\nsummary: (CD)^ω\n"
    );
    let out = stdout_of(&[
        "simulate",
        "--matrix",
        fig6a.to_str().unwrap(),
        "--start",
        "A",
        "--policy",
        "first",
    ]);
    assert_eq!(
        out,
        "path: A B C D A B C D A B C D A B C D A D A\nboundary: 15\npair: {A,D}\nsummary: (ABCD)^4 (AD)^ω\n"
    );
}

#[test]
fn simulate_truncation_renders_plainly() {
    let dir = tempfile::tempdir().unwrap();
    let (_, fig6a) = write_fixtures(dir.path());
    let out = stdout_of(&[
        "simulate",
        "--matrix",
        fig6a.to_str().unwrap(),
        "--start",
        "A",
        "--max-steps",
        "3",
    ]);
    assert_eq!(
        out,
        "path: A B C D\nboundary: none\npair: none\nsummary: A B C D ...\n"
    );
}

#[test]
fn simulate_json_round_trips_through_trace_loader() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let trace_path = dir.path().join("trace.json");
    let out = gg(
        &[
            "simulate",
            "--matrix",
            fig2.to_str().unwrap(),
            "--start",
            "B",
            "--format",
            "json",
            "--out",
            trace_path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "--out must silence stdout");
    let m = fixture_figure2();
    let loaded = trace_from_json(&m, &fs::read_to_string(&trace_path).unwrap()).unwrap();
    let direct = play(&m, AgentId(1), &ChoicePolicy::FirstByIndex, 10_000).unwrap();
    assert_eq!(loaded, direct);
}

#[test]
fn branches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let out = stdout_of(&[
        "branches",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "A",
    ]);
    assert_eq!(
        out,
        concat!(
            "branch 1: A B A  pair {A,B}\n",
            "branch 2: A B C D  pair {C,D}\n",
            "branch 3: A D A  pair {A,D}\n",
            "branch 4: A D C  pair {C,D}\n",
            "total: 4\n",
        )
    );
    let out = stdout_of(&[
        "branches",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "B",
    ]);
    assert_eq!(out, "branch 1: B C D  pair {C,D}\ntotal: 1\n");
}

#[test]
fn frame_text_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let out = stdout_of(&["frame", "--matrix", fig2.to_str().unwrap()]);
    assert_eq!(
        out,
        concat!(
            "agents: A B C D\n",
            "edges:\n",
            "  A -> B\n",
            "  A -> D\n",
            "  B -> C\n",
            "  C -> D\n",
            "  D -> C\n",
            "classes:\n",
            "  {A}\n",
            "  {B}\n",
            "  {C,D}\n",
            "condensation:\n",
            "  {A} -> {B}\n",
            "  {A} -> {C,D}\n",
            "  {B} -> {C,D}\n",
        )
    );
    let out = stdout_of(&[
        "frame",
        "--matrix",
        fig2.to_str().unwrap(),
        "--format",
        "dot",
    ]);
    let m = fixture_figure2();
    let f = frame_of(&m);
    let eq = f.equivalence_classes();
    assert_eq!(out, format!("{}\n{}", f.dot(), f.condensation_dot(&eq)));
}

#[test]
fn cycles_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, fig6a) = write_fixtures(dir.path());
    let out = stdout_of(&["cycles", "--matrix", fig2.to_str().unwrap()]);
    assert_eq!(
        out,
        "cycle 1: CDC  gaps (0,0)  order 0  poles {C,D}\ntotal: 1\n"
    );
    let out = stdout_of(&["cycles", "--matrix", fig6a.to_str().unwrap()]);
    assert_eq!(
        out,
        "cycle 1: ABCDA  gaps (5,5,8,3)  order 3  poles {A,D}\ntotal: 1\n"
    );
}

#[test]
fn decide_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let fig2 = fig2.to_str().unwrap();

    let out = gg(
        &["decide", "--matrix", fig2, "--start", "A", "--pair", "A,B"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "start: A\npair: {A,B} (turquoise)\nanswer: yes\nwitness: A B A B\nbranches explored: 0\n"
    );

    let out = gg(
        &["decide", "--matrix", fig2, "--start", "D", "--pair", "A,B"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("answer: no"));

    // White pair: no without any search.
    let out = gg(
        &["decide", "--matrix", fig2, "--start", "A", "--pair", "A,C"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("(white)"));

    // A zero branch cap aborts the search before it can be exhaustive:
    // from B the hunt for {A,B} hits its first boundary leaf immediately.
    let out = gg(
        &[
            "decide",
            "--matrix",
            fig2,
            "--start",
            "B",
            "--pair",
            "A,B",
            "--branch-cap",
            "0",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("answer: unknown"));

    // Operational failure: unknown label.
    let out = gg(
        &["decide", "--matrix", fig2, "--start", "A", "--pair", "A,Z"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn reduce_golden() {
    let dir = tempfile::tempdir().unwrap();
    let (_, fig6a) = write_fixtures(dir.path());
    let trace_path = dir.path().join("run.json");
    stdout_of(&[
        "simulate",
        "--matrix",
        fig6a.to_str().unwrap(),
        "--start",
        "A",
        "--format",
        "json",
        "--out",
        trace_path.to_str().unwrap(),
    ]);
    let out = stdout_of(&[
        "reduce",
        "--matrix",
        fig6a.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out,
        concat!(
            "input path: A B C D A B C D A B C D A B C D A D A\n",
            "normal form: D A B C D A B C D A B C D A D A\n",
            "pair: {A,D}\n",
            "decomposition: [(DABCD, 3)]\n",
            "closing step: no\n",
        )
    );
}

#[test]
fn reduce_rejects_tampered_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let trace_path = dir.path().join("bad.json");
    fs::write(
        &trace_path,
        "{\"start\":\"C\",\"steps\":[\"D\",\"C\"],\"truncated\":false,\"stability_pair\":[\"A\",\"B\"]}",
    )
    .unwrap();
    let out = gg(
        &[
            "reduce",
            "--matrix",
            fig2.to_str().unwrap(),
            "--trace",
            trace_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability_pair"));
}

#[test]
fn seeded_runs_are_byte_identical_and_honor_gg_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let args = [
        "simulate",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "A",
        "--policy",
        "random:99",
    ];
    let first = gg(&args, &[]);
    let second = gg(&args, &[]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let env_run = gg(
        &[
            "simulate",
            "--matrix",
            fig2.to_str().unwrap(),
            "--start",
            "A",
            "--policy",
            "random",
        ],
        &[("GG_SEED", "99")],
    );
    assert!(env_run.status.success());
    assert_eq!(env_run.stdout, first.stdout);

    // random without any seed source is an operational error.
    let bare = gg(
        &[
            "simulate",
            "--matrix",
            fig2.to_str().unwrap(),
            "--start",
            "A",
            "--policy",
            "random",
        ],
        &[],
    );
    assert_eq!(bare.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bare.stderr).contains("GG_SEED"));
}

#[test]
fn scripted_policy_follows_and_exhausts() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let script = dir.path().join("picks.txt");
    fs::write(&script, "D C\n").unwrap();
    let policy = format!("script:{}", script.display());
    let out = stdout_of(&[
        "simulate",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "A",
        "--policy",
        &policy,
    ]);
    // A -> D is a scripted pick; D -> C hits the boundary.
    assert!(out.starts_with("path: A D C"), "{out}");

    fs::write(&script, "D\n").unwrap();
    let out = gg(
        &[
            "simulate",
            "--matrix",
            fig2.to_str().unwrap(),
            "--start",
            "A",
            "--policy",
            &policy,
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("script"));
}

#[test]
fn snapshots_track_the_holder() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let out = stdout_of(&[
        "simulate",
        "--matrix",
        fig2.to_str().unwrap(),
        "--start",
        "C",
        "--snapshots",
    ]);
    assert!(
        out.starts_with("initial matrix (holder C):\n    A   B  *C   D\n"),
        "{out}"
    );
    assert_eq!(out.matches("after step").count(), 3);
    assert!(out.contains("after step 1 (C -> D):\n    A   B   C  *D\n"));
    // The first pass C -> D bumps the mirror cell (D, C) from 1 to 2,
    // raising the column-D maximum, so row C shows 2B afterwards.
    assert!(out.contains("C  1W  1B   .  2B\n"), "{out}");
    assert!(out.ends_with("path: C D C D\nboundary: 0\npair: {C,D}\nsummary: (CD)^ω\n"));
}

#[test]
fn unknown_agent_and_malformed_matrix_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let (fig2, _) = write_fixtures(dir.path());
    let out = gg(
        &[
            "simulate",
            "--matrix",
            fig2.to_str().unwrap(),
            "--start",
            "Q",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"agents\": [\"A\",\"B\"], \"cells\": [[null,").unwrap();
    let out = gg(
        &[
            "simulate",
            "--matrix",
            broken.to_str().unwrap(),
            "--start",
            "A",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn matrix_file_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    stdout_of(&["gen", "random:6,5,1234", "--out", path.to_str().unwrap()]);
    let original = fs::read_to_string(&path).unwrap();
    let m = giving_game::io::matrix_from_json(&original).unwrap();
    assert_eq!(matrix_to_json(&m), original);
}
