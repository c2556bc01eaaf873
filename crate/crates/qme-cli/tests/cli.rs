use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qme")).args(args).output().expect("binary runs")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("qme-cli-{}-{name}", std::process::id()))
}

const SMALL: &[&str] = &[
    "--L", "6", "--N", "1", "--radii", "2,3", "--tau-b-grid", "0.5", "--kinds", "LocalNRE",
    "--tau-sb", "20",
];

#[test]
fn distance_rows_are_deterministic() {
    let args: Vec<&str> = ["distance"].iter().chain(SMALL).copied().collect();
    let first = qme(&args);
    assert!(first.status.success(), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let text = stdout_text(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,kind,R,tau_b,tau_sb,j_int,distance,delta,abscissa_4JtauB_over_R,error"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("distance,LocalNRE,2,0.5,20,"));
    assert!(lines[2].starts_with("distance,LocalNRE,3,0.5,20,"));

    let second = qme(&args);
    assert_eq!(first.stdout, second.stdout, "output bytes must not vary between runs");
}

#[test]
fn config_file_applies_and_flags_win() {
    let config = temp_path("config.txt");
    fs::write(
        &config,
        "# small chain\nL = 6\nN = 1\nradii = 2\nkinds = LocalNRE\ntau_b_grid = 0.5\ntau_sb = 20\n",
    )
    .unwrap();
    let out_path = temp_path("rows.csv");

    let from_config = qme(&["distance", "--config", config.to_str().unwrap()]);
    assert!(from_config.status.success());
    assert!(stdout_text(&from_config).lines().nth(1).unwrap().contains(",2,0.5,20,"));

    let overridden = qme(&[
        "distance",
        "--config",
        config.to_str().unwrap(),
        "--radii",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(overridden.status.success());
    assert!(overridden.stdout.is_empty(), "rows go to the file, not stdout");
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.lines().nth(1).unwrap().contains("LocalNRE,3,"));

    let _ = fs::remove_file(&config);
    let _ = fs::remove_file(&out_path);
}

#[test]
fn populations_emit_one_row_per_mode() {
    let out = qme(&[
        "populations", "--L", "6", "--N", "1", "--beta-l", "0.3", "--beta-r", "0.3", "--radii",
        "2", "--kinds", "LocalNRE", "--tau-b-grid", "0.5", "--tau-sb", "50",
    ]);
    assert!(out.status.success());
    let text = stdout_text(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,R,mode_index,omega_m,population,gibbs");
    assert_eq!(lines.len(), 7);
    for (idx, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("LocalNRE,2,{},", idx + 1)));
    }
}

#[test]
fn configuration_errors_exit_with_2() {
    let bad_kind = qme(&["distance", "--L", "6", "--N", "1", "--kinds", "bogus"]);
    assert_eq!(bad_kind.status.code(), Some(2));

    let unbalanced = qme(&["populations", "--L", "6", "--N", "1", "--beta-l", "0.5", "--beta-r",
        "0.1"]);
    assert_eq!(unbalanced.status.code(), Some(2));

    let oversized_radius = qme(&["distance", "--L", "6", "--N", "1", "--radii", "9"]);
    assert_eq!(oversized_radius.status.code(), Some(2));

    let unknown_flag = qme(&["distance", "--no-such-flag"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn calibration_table_reports_couplings() {
    let out = qme(&[
        "calibration", "--L", "6", "--N", "1", "--tau-b-grid", "0.2,1.0", "--tau-sb", "20",
        "--threads", "2",
    ]);
    assert!(out.status.success());
    let text = stdout_text(&out);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines().skip(1) {
        let j_int: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(j_int > 0.0);
    }
}
