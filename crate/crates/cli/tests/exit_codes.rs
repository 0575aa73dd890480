use std::process::{Command, Output};

use pohozaev_core::report::parse_json;
use pohozaev_core::suite::Status;

fn pohozaev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pohozaev")).args(args).env_remove("POHOZAEV_PRECISION_BITS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn verify_n7_constants() {
    let o = pohozaev(&["verify", "--all", "--n", "7", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let doc = parse_json(&o.stdout).unwrap();
    for id in ["AdA-1", "A2-1", "35A-1", "stimafinalegamma", "pohofinale7"] {
        let r = doc.reports.iter().find(|r| r.lemma_id == id).unwrap();
        assert_eq!(r.status, Status::Pass, "{id}");
    }
    assert!(doc.reports.iter().all(|r| r.n.is_none_or(|n| n == 7)));
    assert_eq!(doc.summary.total, doc.reports.len());
}

#[test]
fn stimafinalegamma8_discrepancy() {
    let o = pohozaev(&["verify", "--lemma", "stimafinalegamma8", "--b", "-2"]);
    assert_eq!(code(&o), 3);
    let doc = parse_json(&o.stdout).unwrap();
    assert_eq!(doc.reports.len(), 1);
    assert_eq!(
        doc.reports[0].notes,
        "computed 121/13608 vs printed 121/13601; downstream 1089/34020 consistent with computed"
    );
}

#[test]
fn scan_b_signs() {
    let o = pohozaev(&["scan-b", "--grid", "-3,-2,-1,0", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let signs: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(signs, ["+", "+", "+", "-"]);
    let o = pohozaev(&["scan-b", "--grid", "-3,-2,-1,0"]);
    let doc = parse_json(&o.stdout).unwrap();
    assert_eq!(doc.reports[0].computed_exact, "-50/21");
}

#[test]
fn integral_table_row() {
    let o = pohozaev(&["table", "--integrals", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("7,7,1/2,\"I(7,9)\"") || l.starts_with("7,7,1/2,I(7,9)")));
}

#[test]
fn flat_pohozaev() {
    let o = pohozaev(&["pohozaev", "--n", "7", "--r", "2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("poho-flat"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--all", "--bogus"][..],
        &["verify"],
        &["verify", "--lemma", "nope"],
        &["verify", "--all", "--format", "xml"],
        &["verify", "--all", "--n", "4"],
        &["verify", "--all", "--tol", "0"],
        &["verify", "--all", "--delta", "2"],
        &["scan-b", "--grid", "x"],
        &["pohozaev", "--n", "7", "--r", "0"],
        &["frobnicate"],
    ] {
        let o = pohozaev(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn precision_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_pohozaev"))
        .args(["scan-b", "--grid", "0"])
        .env("POHOZAEV_PRECISION_BITS", "80")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_pohozaev"))
        .args(["scan-b", "--grid", "0"])
        .env("POHOZAEV_PRECISION_BITS", "53")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

#[test]
fn output_file_and_io_error() {
    let dir = std::env::temp_dir().join(format!("pohozaev-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.json");
    let o = pohozaev(&["scan-b", "--grid", "1,2", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(parse_json(&std::fs::read(&path).unwrap()).is_ok());
    let bad = dir.join("missing").join("scan.json");
    let o = pohozaev(&["scan-b", "--grid", "1,2", "--output", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_byte_identical_on_rerun() {
    let args = ["verify", "--lemma", "pohofinale7"];
    assert_eq!(pohozaev(&args).stdout, pohozaev(&args).stdout);
}

#[test]
fn dump_profile_text() {
    let o = pohozaev(&["dump-profile", "A7", "--n", "7"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("1/12 * rho^0 * t^0 * Q^(-5/2) * logQ^0"), "{text}");
    assert_eq!(code(&pohozaev(&["dump-profile", "A7", "--n", "8"])), 2);
    assert_eq!(code(&pohozaev(&["dump-profile", "PhiTilde1", "--n", "7", "--param", "a1"])), 2);
}
