use std::process::{Command, Output};

fn qec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_single_line_error(o: &Output, exit: i32, code: &str) {
    assert_eq!(o.status.code(), Some(exit), "{}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{code}]: ")), "{err}");
}

#[test]
fn lists_builtin_codes() {
    let o = qec(&["codes", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["two_qubit", "three_qubit_bitflip", "four_two_two", "shor_nine", "four_cycle", "surface_d3"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
}

#[test]
fn four_cycle_is_valid_with_no_logicals() {
    let o = qec(&["validate", "four_cycle"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("valid") && text.contains("k=0"), "{text}");
}

#[test]
fn three_qubit_table_rows() {
    let o = qec(&["syndrome-table", "three_qubit_bitflip", "--max-weight", "3", "--letters", "X"]);
    let want = "error\tsyndrome\nI\t00\nX1\t10\nX2\t11\nX3\t01\nX1 X2\t01\nX1 X3\t11\nX2 X3\t10\nX1 X2 X3\t00\n";
    assert_eq!(stdout(&o), want);
}

#[test]
fn four_two_two_table_rows() {
    let o = qec(&["syndrome-table", "four_two_two", "--max-weight", "1", "--min-weight", "1"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    for q in 1..=4 {
        for (letter, s) in [("X", "10"), ("Z", "01"), ("Y", "11")] {
            assert!(rows.contains(&format!("{letter}{q}\t{s}").as_str()));
        }
    }
    assert_eq!(rows[0], "X1\t10");
    assert_eq!(rows[1], "Y1\t11");
}

#[test]
fn shor_distance() {
    let o = qec(&["distance", "shor_nine", "--max-weight", "4"]);
    assert_eq!(stdout(&o), "shor_nine\td=3\n");
}

#[test]
fn three_qubit_simulation_matches_closed_form() {
    let o = qec(&["simulate", "--code", "three_qubit_bitflip", "--decoder", "lookup", "--noise", "iid_x", "--p", "0.1", "--trials", "100000", "--seed", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,trials,failures,p_L,ci_low,ci_high"));
    let cols: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    let (p_l, lo, hi) = (cols[3], cols[4], cols[5]);
    let sigma = (hi - lo) / (2.0 * 1.959964);
    assert!((p_l - 0.028).abs() <= 3.0 * sigma, "{p_l}");
}

#[test]
fn csv_is_byte_identical_across_thread_counts() {
    let args = |threads: &'static str| {
        vec![
            "--threads", threads, "simulate", "--code", "surface_d3", "--decoder", "mwpm", "--noise", "depolarizing",
            "--p-start", "0.02", "--p-end", "0.1", "--steps", "3", "--trials", "3000", "--seed", "9",
        ]
    };
    let one = qec(&args("1"));
    let three = qec(&args("3"));
    assert!(one.status.success());
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(stdout(&one).lines().count(), 4);
}

#[test]
fn json_report_carries_metadata() {
    let o = qec(&["simulate", "--code", "two_qubit", "--p", "0.1", "--trials", "2000", "--post-select", "--format", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in ["\"seed\": 0", "\"code\": \"two_qubit\"", "\"decoder\": \"lookup\"", "\"version\"", "\"discarded\"", "\"post_select\""] {
        assert!(text.contains(key), "{key} missing in {text}");
    }
}

#[test]
fn writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let o = qec(&["simulate", "--code", "shor_nine", "--noise", "depolarizing", "--p", "0.05", "--trials", "500", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("p,trials,"));
}

#[test]
fn code_json_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let shown = qec(&["codes", "show", "surface_d2"]);
    std::fs::write(&path, &shown.stdout).unwrap();
    let o = qec(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("d=2"));
}

#[test]
fn lookup_export() {
    let o = qec(&["lookup", "three_qubit_bitflip"]);
    let text = stdout(&o);
    assert!(text.contains("\"10\": \"X1\"") && text.contains("\"01\": \"X3\""), "{text}");
}

#[test]
fn small_threshold_scan() {
    let o = qec(&["threshold", "--lambdas", "3,5", "--p-start", "0.05", "--p-end", "0.17", "--steps", "4", "--trials", "3000", "--seed", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lambda,p,trials,failures,p_L,ci_low,ci_high\n"));
    assert!(stderr(&o).starts_with("threshold "));
}

#[test]
fn config_errors_exit_2() {
    assert_single_line_error(
        &qec(&["simulate", "--code", "three_qubit_bitflip", "--p-start", "0.1", "--p-end", "0.2", "--steps", "0"]),
        2,
        "E_CONFIG",
    );
    assert_single_line_error(&qec(&["simulate", "--code", "shor_nine", "--decoder", "mwpm", "--p", "0.1"]), 2, "E_DECODER_MISMATCH");
    assert_single_line_error(&qec(&["validate", "nope"]), 2, "E_UNKNOWN_CODE");
    assert_single_line_error(&qec(&["simulate", "--code", "two_qubit", "--p", "1.5"]), 2, "E_PROBABILITY");
    assert_single_line_error(&qec(&["simulate", "--code", "two_qubit"]), 2, "E_CONFIG");
    assert_single_line_error(&qec(&["simulate", "--frobnicate"]), 2, "E_USAGE");
    assert_single_line_error(&qec(&["lookup", "surface_d5"]), 2, "E_LOOKUP_TOO_LARGE");
}

#[test]
fn runtime_errors_exit_3() {
    // Both curves sit far below threshold here, so they never cross.
    assert_single_line_error(
        &qec(&["threshold", "--lambdas", "3,5", "--p-start", "0.001", "--p-end", "0.002", "--steps", "2", "--trials", "200"]),
        3,
        "E_NO_CROSSING",
    );
}
