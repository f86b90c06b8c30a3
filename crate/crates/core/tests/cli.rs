//! End-to-end runs of the binary.

use stbc_forge::{io, Design};
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stbc-forge"))
        .args(args)
        .env_remove("STBC_FORGE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_maximal_five_antennas() {
    let o = run(&[
        "generate",
        "--family",
        "maximal",
        "--antennas",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let d: Design = io::from_json(&stdout(&o)).unwrap();
    assert_eq!(d.size(), [15, 5, 10]);
    assert!(d.is_orthogonal());
}

#[test]
fn every_family_generates_and_round_trips() {
    let cases: [(&str, &str, [usize; 3]); 7] = [
        ("square", "4", [4, 4, 3]),
        ("tilde", "5", [15, 10, 5]),
        ("maximal", "6", [30, 6, 20]),
        ("hprime", "3", [4, 3, 3]),
        ("hat4m", "8", [56, 8, 35]),
        ("paired", "5", [15, 5, 10]),
        ("cis", "5", [15, 5, 10]),
    ];
    for (family, t, size) in cases {
        let o = run(&["generate", "--family", family, "--antennas", t]);
        assert_eq!(code(&o), 0, "{family}");
        let d: Design = io::from_json(&stdout(&o)).unwrap();
        assert_eq!(d.size(), size, "{family}");
        assert!(d.is_orthogonal(), "{family}");
        assert_eq!(
            io::from_json::<num_bigint::BigInt>(&io::to_json(&d)).unwrap(),
            d
        );
    }
}

#[test]
fn generate_is_byte_deterministic() {
    for format in ["json", "text", "latex"] {
        let args = [
            "generate",
            "--family",
            "cis",
            "--antennas",
            "6",
            "--l",
            "3",
            "--format",
            format,
        ];
        assert_eq!(run(&args).stdout, run(&args).stdout, "{format}");
    }
}

#[test]
fn generate_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l4.txt");
    let o = run(&[
        "generate",
        "--family",
        "cis",
        "--antennas",
        "4",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let d: Design = io::read_design(&path).unwrap();
    assert_eq!(d.zero_count(), 0);
}

#[test]
fn verify_accepts_fixtures() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for f in ["h4", "hat_h8", "l5", "code_ii"] {
        let o = run(&[
            "verify",
            "--in",
            dir.join(format!("{f}.json")).to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{f}: {}", stdout(&o));
    }
}

#[test]
fn verify_rejects_a_mutated_fixture_with_a_witness() {
    let fixture: Design = io::fixture("h4").unwrap().design().unwrap();
    // flip the sign of one atom
    let (r, col) = (0..fixture.p())
        .flat_map(|r| (0..fixture.n()).map(move |c| (r, c)))
        .find(|&(r, c)| !fixture.entry(r, c).is_zero())
        .unwrap();
    let mutated = fixture.map_entries(|i, j, e| {
        if (i, j) == (r, col) {
            e.neg()
        } else {
            e.clone()
        }
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mutated.json");
    std::fs::write(&path, io::to_json(&mutated)).unwrap();
    let o = run(&["verify", "--in", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("NOT_ORTHOGONAL"), "{out}");
    assert!(
        out.contains("proper 2x2 block") || out.contains("closure"),
        "{out}"
    );
}

#[test]
fn table1_csv() {
    let o = run(&["table1", "--n-min", "4", "--n-max", "7"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("n,w_l,fraction_counted,fraction_formula,match")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4 + 5 + 6 + 7);
    assert!(rows.contains(&"4,1,0.1067,0.1067,true"));
    assert!(rows.contains(&"5,5,0.3333,0.3333,true"));
    assert!(rows.contains(&"7,7,0.3750,0.3750,true"));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn metrics_reports_exact_values() {
    let o = run(&[
        "metrics",
        "--family",
        "cis",
        "--antennas",
        "5",
        "--constellation",
        "qpsk",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("zero_fraction: 8/75 (0.1067)"), "{out}");
    assert!(out.contains("rate: 2/3"), "{out}");
    assert!(out.contains("classification: CIS_COD"), "{out}");
}

#[test]
fn simulate_writes_csv_and_is_thread_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let o = run(&[
            "simulate",
            "--family",
            "cis",
            "--antennas",
            "3",
            "--constraint",
            "peak",
            "--snr",
            "0:5:10",
            "--trials",
            "3000",
            "--seed",
            "5",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let lines: Vec<&str> = outputs[0].lines().collect();
    assert_eq!(lines[0], "snr_db,errors,symbols,ser,ci_low,ci_high");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,") && lines[3].starts_with("10,"));
}

#[test]
fn thread_cap_from_environment() {
    let args = [
        "simulate",
        "--family",
        "square",
        "--antennas",
        "2",
        "--snr",
        "0:10:10",
        "--trials",
        "500",
        "--seed",
        "1",
    ];
    let capped = Command::new(env!("CARGO_BIN_EXE_stbc-forge"))
        .args(args)
        .env("STBC_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 0);
    assert_eq!(capped.stdout, run(&args).stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_stbc-forge"))
        .args(args)
        .env("STBC_FORGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn bad_arguments_exit_two() {
    let cases: [&[&str]; 7] = [
        &["generate", "--family", "nope", "--antennas", "3"],
        &["generate", "--family", "hat4m", "--antennas", "6"],
        &["generate", "--family", "cis", "--antennas", "1"],
        &["generate", "--family", "cis", "--antennas", "3", "--l", "9"],
        &[
            "simulate",
            "--family",
            "cis",
            "--antennas",
            "3",
            "--snr",
            "0:0:5",
            "--trials",
            "10",
        ],
        &[
            "simulate",
            "--family",
            "cis",
            "--antennas",
            "3",
            "--snr",
            "0:1:5",
            "--trials",
            "0",
        ],
        &["verify", "--in", "/nonexistent/design.json"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}
