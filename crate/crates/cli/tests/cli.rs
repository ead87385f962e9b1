// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const HALF_ADDER: &str = "# half adder\ninput a\ninput b\noutput sum\noutput carry\nxor sum a b\nand carry a b\n";

fn nbl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let _ = fs::remove_file(&path);
    path
}

fn write(name: &str, text: &str) -> String {
    let path = scratch(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn half_adder_assignment() {
    let nl = write("ha.nl", HALF_ADDER);
    let o = nbl(&["eval", "--netlist", &nl, "--assign", "a=1,b=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sum=L carry=H\n");
    let o = nbl(&["eval", "--netlist", &nl, "--assign", "a=0,b=1", "--backend", "spike"]);
    assert_eq!(stdout(&o), "sum=H carry=L\n");
}

#[test]
fn lowered_xor_table_matches() {
    let nl = write("xor.nl", "input a\ninput b\noutput y\nxor y a b\n");
    let lowered = nbl(&["eval", "--netlist", &nl, "--lower"]);
    assert!(lowered.status.success());
    let text = stdout(&lowered);
    assert!(!text.contains("xor"));
    let lowered_nl = write("xor_lowered.nl", &text);
    let a = nbl(&["eval", "--netlist", &nl, "--truth-table"]);
    let b = nbl(&["eval", "--netlist", &lowered_nl, "--truth-table"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a), "a b | y\n0 0 | L\n0 1 | H\n1 0 | H\n1 1 | L\n");
}

#[test]
fn backends_agree_on_tables() {
    let nl = write("ha_tables.nl", HALF_ADDER);
    let rtw = nbl(&["eval", "--netlist", &nl, "--truth-table", "--backend", "rtw", "--seed", "3"]);
    let spike = nbl(&["eval", "--netlist", &nl, "--truth-table", "--backend", "spike", "--seed", "3"]);
    assert!(rtw.status.success() && spike.status.success());
    assert_eq!(stdout(&rtw), stdout(&spike));
}

#[test]
fn trace_has_a_column_per_wire() {
    let nl = write("ha_trace.nl", HALF_ADDER);
    let trace = scratch("trace.csv");
    let o = nbl(&["eval", "--netlist", &nl, "--assign", "a=1,b=0", "--chips", "32", "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("chip,a,b,"));
    assert!(header.contains("sum") && header.contains("carry"));
    assert_eq!(lines.count(), 32);
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let nl = write("bad.nl", "input a\noutput y\nfrob y a\n");
    let o = nbl(&["eval", "--netlist", &nl, "--assign", "a=1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");

    let nl = write("ha_usage.nl", HALF_ADDER);
    assert_eq!(nbl(&["eval", "--netlist", &nl, "--assign", "a=1"]).status.code(), Some(2));
    assert_eq!(nbl(&["eval", "--netlist", &nl, "--assign", "a=2,b=0"]).status.code(), Some(2));
    assert_eq!(nbl(&["eval", "--netlist", &nl]).status.code(), Some(2));
    assert_eq!(nbl(&["eval", "--netlist", "/nonexistent.nl", "--assign", "a=1"]).status.code(), Some(1));
}

#[test]
fn gen_spike_references_are_disjoint() {
    let out = scratch("spike.csv");
    let o = nbl(&["gen", "--backend", "spike", "--refs", "3", "--slots", "1000", "--density", "0.1", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = stdout(&o);
    let pairs: Vec<&str> = summary.lines().filter(|l| l.starts_with("intersection")).collect();
    assert_eq!(pairs.len(), 3);
    assert!(pairs.iter().all(|l| l.ends_with("= 0")), "{summary}");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("slot,h1,h2,h3"));
    assert_eq!(text.lines().count(), 1001);
}

#[test]
fn gen_rtw_is_deterministic() {
    let (a, b) = (scratch("rtw_a.csv"), scratch("rtw_b.csv"));
    for path in [&a, &b] {
        let o = nbl(&["gen", "--backend", "rtw", "--refs", "2", "--chips", "4096", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("corr h1 h2"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = scratch("rtw_c.csv");
    nbl(&["gen", "--backend", "rtw", "--refs", "2", "--chips", "4096", "--seed", "8", "--out", c.to_str().unwrap()]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn gen_rejects_bad_flag_combinations() {
    assert_eq!(nbl(&["gen", "--backend", "rtw", "--chips", "16", "--density", "0.1"]).status.code(), Some(2));
    assert_eq!(nbl(&["gen", "--backend", "spike", "--chips", "16", "--density", "0.1"]).status.code(), Some(2));
    assert_eq!(nbl(&["gen", "--backend", "spike", "--slots", "16"]).status.code(), Some(2));
    assert_eq!(nbl(&["gen", "--backend", "tri", "--chips", "16"]).status.code(), Some(2));
}

#[test]
fn misclassify_reports_false_alarm_oracle() {
    let o = nbl(&["experiment", "misclassify", "--W", "16", "--p-fast", "0", "--trials", "100000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("experiment,backend,seed,trials,W,theta,p_fast,measured,oracle,stderr,wall_ms"));
    let row: Vec<&str> = lines.find(|l| l.starts_with("false_alarm,")).unwrap().split(',').collect();
    let measured: f64 = row[7].parse().unwrap();
    let oracle: f64 = row[8].parse().unwrap();
    assert_eq!(oracle, 2517.0 / 65536.0);
    let sigma = (oracle * (1.0 - oracle) / 1e5).sqrt();
    assert!((measured - oracle).abs() <= 3.0 * sigma, "{measured}");
}

#[test]
fn misclassify_flag_checks() {
    assert_eq!(nbl(&["experiment", "misclassify", "--mode", "exponential", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(nbl(&["experiment", "misclassify", "--alpha", "0.1", "--trials", "10"]).status.code(), Some(2));
    assert_eq!(nbl(&["experiment", "misclassify", "--p-fast", "1.5", "--trials", "10"]).status.code(), Some(2));
    let o = nbl(&["experiment", "misclassify", "--mode", "exponential", "--alpha", "0.1", "--trials", "200"]);
    assert!(o.status.success());
    // No oracle for exponential smoothing: the oracle field is empty.
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",,"));
}

#[test]
fn propagation_through_not_chain() {
    let nl = write("notchain.nl", "input a\noutput y\nnot t1 a\nnot t2 t1\nnot y t2\n");
    let o = nbl(&["experiment", "propagation", "--netlist", &nl, "--trials", "1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "propagation");
    assert_eq!(row[7].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn window_inversion_and_infeasibility() {
    let o = nbl(&["experiment", "window", "--target", "1e-25"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let w: usize = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!((100..1000).contains(&w), "{w}");
    let o = nbl(&["experiment", "window", "--target", "1e-3", "--p-fast", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn csv_append_writes_header_once() {
    let path = scratch("append.csv");
    let p = path.to_str().unwrap();
    for target in ["1e-3", "1e-6"] {
        assert!(nbl(&["experiment", "window", "--target", target, "--csv", p]).status.success());
    }
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("experiment,")).count(), 1);
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn thread_cap_is_honoured_and_checked() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_nbl"))
            .args(["experiment", "misclassify", "--trials", "3000", "--seed", "4"])
            .env("NBL_THREADS", threads)
            .output()
            .unwrap()
    };
    let strip = |o: &Output| stdout(o).lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(strip(&one), strip(&four));
    assert_eq!(run("zero").status.code(), Some(2));
}
