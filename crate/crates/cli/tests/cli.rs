use std::f64::consts::SQRT_2;

use tempwork_cli::{run, ResultDocument, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tempwork(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tempwork").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn doc(args: &[&str]) -> ResultDocument {
    let r = tempwork(args);
    assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.stderr);
    ResultDocument::from_json(&r.stdout).unwrap()
}

fn column(d: &ResultDocument, i: usize) -> Vec<f64> {
    d.table.as_ref().unwrap().rows.iter().map(|r| r[i]).collect()
}

#[test]
fn jarzynski_example() {
    let d = doc(&["jarzynski", "--energy", "1", "--beta", "1", "--axis-i", "0,0", "--axis-f", "1.5707963,0"]);
    assert!((d.results["value"] - 1.0).abs() < 1e-9);
    assert_eq!(d.request["subcommand"], "jarzynski");
    assert!(d.table.is_none());
}

#[test]
fn chsh_optimal_example() {
    let d = doc(&["chsh", "--optimal"]);
    assert!((d.results["value"] - 2.828427).abs() < 1e-6);
    assert_eq!(d.results["classical_bound"], 2.0);
    assert_eq!(d.results["violates_classical"], 1.0);
}

#[test]
fn work_bell_second_order_example() {
    let d = doc(&["work-bell", "--order", "2", "--optimal", "--energy", "1"]);
    assert!((d.results["value"] - 9.656854).abs() < 1e-6);
    assert!((d.results["protocol_sum"] - d.results["value"]).abs() < 1e-8);
    assert_eq!(d.results["outside_classical"], 1.0);
}

#[test]
fn beta_scan_of_first_moment_combination() {
    let d = doc(&["scan", "--scan", "beta=0:3:31", "--quantity", "work-bell", "--order", "1", "--optimal"]);
    let values = column(&d, 1);
    assert_eq!(values.len(), 31);
    assert_eq!(values[0], 0.0);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    let endpoint = 2.0 * 3.0_f64.tanh() * (SQRT_2 - 1.0);
    assert!((values[30] - endpoint).abs() < 1e-8, "{}", values[30]);
    let brute = doc(&["work-bell", "--order", "1", "--optimal", "--beta", "3"]);
    assert!((brute.results["protocol_sum"] - values[30]).abs() < 1e-8);
}

#[test]
fn time_scan_of_jarzynski_is_flat() {
    let d = doc(&[
        "scan", "--scan", "time=0:10:11", "--quantity", "jarzynski", "--evolution", "final-ht", "--energy-final", "1.7",
        "--axis-f", "0.9,0.4",
    ]);
    let values = column(&d, 1);
    assert_eq!(values.len(), 11);
    assert!(values.iter().all(|v| (v - 1.0).abs() < 1e-9));
    assert_eq!(column(&d, 0), (0..=10).map(f64::from).collect::<Vec<_>>());
}

#[test]
fn beta_scan_of_second_moment_combination_is_flat() {
    let d = doc(&["scan", "--scan", "beta=0:5:11", "--quantity", "work-bell", "--order", "2", "--optimal"]);
    let values = column(&d, 1);
    assert!(values.iter().all(|v| *v == values[0]));
}

#[test]
fn angle_scan_moves_the_final_axis() {
    let d = doc(&["scan", "--scan", "angle-theta-f=0:3.141592653589793:3", "--quantity", "moment", "--order", "2"]);
    let v = column(&d, 1);
    // 2E²(1 − cos θ_f)
    assert!(v[0].abs() < 1e-12);
    assert!((v[1] - 2.0).abs() < 1e-8);
    assert!((v[2] - 4.0).abs() < 1e-8);
}

#[test]
fn csv_is_plain_lf_with_header() {
    let r = tempwork(&["scan", "--scan", "beta=0:1:3", "--quantity", "moment", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("parameter,value\n"));
    assert!(!r.stdout.contains('\r'));
    assert_eq!(r.stdout.lines().count(), 4);
    for line in r.stdout.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 2);
        assert!(cells.iter().all(|c| c.parse::<f64>().is_ok()), "{line}");
    }
    assert!(r.stdout.ends_with('\n'));
}

#[test]
fn csv_without_table_is_an_argument_error() {
    let r = tempwork(&["chsh", "--optimal", "--format", "csv"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stdout.is_empty());
}

#[test]
fn every_subcommand_round_trips() {
    let cases: &[&[&str]] = &[
        &["jarzynski", "--energy-final", "2", "--evolution", "explicit", "--unitary-axis", "0.4,1.1", "--unitary-angle", "0.8"],
        &["moments", "--order", "5", "--beta", "0.3"],
        &["work-dist", "--energy-final", "1.5", "--evolution", "final-ht", "--time", "2.5"],
        &["chsh", "--axis-a1", "0,0", "--axis-a2", "1,0", "--axis-b1", "2,0", "--axis-b2-xyz", "0,1,0", "--state-xyz", "0.1,0.2,0.3"],
        &["bell3", "--axis-a1", "0,0", "--axis-b1", "1.0471975511965976,0", "--axis-b2", "2.0943951023931953,0"],
        &["work-bell", "--order", "3", "--optimal", "--beta", "0.7"],
        &["classical-bounds", "--order", "2", "--energy", "1.3"],
        &["optimize", "--restarts", "5", "--seed", "9"],
        &["optimize", "--quantity", "work-bell", "--order", "2", "--restarts", "4"],
        &["crooks", "--energy-final", "2", "--axis-f", "0.5,0.5"],
        &["sample", "--samples", "2000", "--seed", "5", "--workers", "3"],
        &["scan", "--scan", "energy=0.5:2:4", "--quantity", "delta-f", "--energy-final", "1"],
        &["scan", "--scan", "beta=0:2:3", "--quantity", "exp-work-bell", "--optimal"],
    ];
    for args in cases {
        let r = tempwork(args);
        assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.stderr);
        let parsed = ResultDocument::from_json(&r.stdout).unwrap();
        assert_eq!(parsed.to_json(), r.stdout, "{args:?}");
        assert_eq!(ResultDocument::from_json(&parsed.to_json()).unwrap(), parsed);
        let value: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        for key in ["request", "results", "table", "notes"] {
            assert!(value.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
}

#[test]
fn identical_requests_give_identical_bytes() {
    for args in [
        &["sample", "--samples", "50000", "--seed", "11", "--workers", "4"][..],
        &["optimize", "--restarts", "6", "--seed", "2"][..],
        &["selftest"][..],
    ] {
        let a = tempwork(args);
        let b = tempwork(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn sample_results_do_not_depend_on_workers() {
    let one = doc(&["sample", "--samples", "30000", "--seed", "4", "--workers", "1"]);
    let many = doc(&["sample", "--samples", "30000", "--seed", "4", "--workers", "7"]);
    assert_eq!(one.results, many.results);
}

#[test]
fn single_sample_notes_undefined_error() {
    let d = doc(&["sample", "--samples", "1"]);
    assert_eq!(d.results["jarzynski_std_error"], 0.0);
    assert!(d.notes.iter().any(|n| n.contains("undefined")));
}

#[test]
fn bell3_convention_note() {
    let minus = doc(&["bell3", "--axis-a1", "0,0", "--axis-b1", "1.0471975511965976,0", "--axis-b2", "2.0943951023931953,0"]);
    assert_eq!(minus.request["convention"], "minus");
    assert!(minus.notes.iter().any(|n| n.contains("--convention plus")));
    assert_eq!(minus.results["violated"], 1.0);
    let plus = doc(&[
        "bell3", "--axis-a1", "0,0", "--axis-b1", "1.0471975511965976,0", "--axis-b2", "2.0943951023931953,0",
        "--convention", "plus",
    ]);
    assert_eq!(plus.results["violated"], 0.0);
}

#[test]
fn crooks_table_matches_prediction() {
    let d = doc(&["crooks", "--energy", "0.8", "--energy-final", "1.9", "--beta", "1.2", "--axis-f", "0.3,2.0"]);
    let t = d.table.as_ref().unwrap();
    assert_eq!(t.columns, ["n", "m", "work", "p_forward", "p_backward", "ratio", "prediction"]);
    for row in &t.rows {
        assert!((row[5] - row[6]).abs() <= 1e-8 * row[6].max(1.0));
    }
}

#[test]
fn argument_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["no-such-command"],
        &["jarzynski", "--beta", "-1"],
        &["jarzynski", "--energy", "0"],
        &["jarzynski", "--axis-i-xyz", "0,0,2"],
        &["jarzynski", "--axis-i", "0,0", "--axis-i-xyz", "0,0,1"],
        &["jarzynski", "--time", "1"],
        &["jarzynski", "--evolution", "explicit"],
        &["chsh"],
        &["chsh", "--optimal", "--axis-a1", "0,0"],
        &["moments", "--order", "61"],
        &["work-bell", "--order", "0", "--optimal"],
        &["scan"],
        &["scan", "--scan", "order=1:2:3"],
        &["scan", "--scan", "beta=0:1:1"],
        &["scan", "--scan", "time=0:1:3"],
        &["scan", "--scan", "angle-theta-f=0:1:3", "--quantity", "work-bell", "--optimal"],
        &["scan", "--scan", "beta=0:1:3", "--quantity", "chsh"],
        &["sample", "--samples", "0"],
        &["sample", "--workers", "0"],
        &["crooks", "--evolution", "explicit", "--unitary-axis", "1,1", "--unitary-angle", "1", "--backward", "initial-generated"],
        &["optimize", "--restarts", "0"],
    ];
    for args in cases {
        let r = tempwork(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?} -> {}", r.stdout);
        assert!(!r.stderr.is_empty(), "{args:?}");
        assert!(r.stdout.is_empty(), "{args:?}");
    }
    assert!(tempwork(&["no-such-command"]).stderr.contains("Usage"));
}

#[test]
fn help_goes_to_stdout() {
    let r = tempwork(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    for sub in ["jarzynski", "moments", "work-dist", "chsh", "bell3", "work-bell", "classical-bounds", "optimize", "crooks", "sample", "scan", "selftest"] {
        assert!(r.stdout.contains(sub), "{sub}");
    }
    assert!(!r.stdout.contains("tolerance-override"));
}

#[test]
fn selftest_passes_and_lists_suites() {
    let r = tempwork(&["selftest"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let d = ResultDocument::from_json(&r.stdout).unwrap();
    for suite in ["jarzynski-identity", "tsirelson", "crooks"] {
        assert_eq!(d.results[suite], 1.0);
        assert!(r.stderr.contains(&format!("PASS {suite}")));
    }
    assert_eq!(d.results["failed"], 0.0);
}

#[test]
fn corrupted_tolerance_fails_selftest() {
    let r = tempwork(&["selftest", "--tolerance-override", "-1"]);
    assert_eq!(r.code, EXIT_VALIDATION);
    assert!(r.stderr.contains("FAIL jarzynski-identity"));
    let d = ResultDocument::from_json(&r.stdout).unwrap();
    assert_eq!(d.results["passed"], 0.0);
}
