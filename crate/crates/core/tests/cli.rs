use std::path::PathBuf;
use std::process::{Command, Output};

use dslice::cli::{BlanchfieldReport, FoxReport, LivingstonCliReport, PaperReport, Report, RhoReport};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn dslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dslice")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let o = dslice(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

/// Re-parses a json report and checks it renders to the same bytes.
fn round_trip<R: Report + PartialEq + std::fmt::Debug>(json: &str) -> R {
    let r: R = serde_json::from_str(json).unwrap();
    assert_eq!(r.render(dslice::cli::Format::Json).trim_end(), json.trim_end());
    r
}

#[test]
fn rho_paper_matrix() {
    let f = data("family_u.json");
    let text = run_ok(&["rho", f.to_str().unwrap(), "--format", "text"]);
    assert!(text.contains("rho = -4/3 (exact)"), "{text}");
    let json = run_ok(&["rho", f.to_str().unwrap()]);
    let rep: RhoReport = round_trip(&json);
    assert!(rep.signature_function.is_some());
}

#[test]
fn rho_finite_order_and_hyperbolic() {
    let text = run_ok(&["rho", data("family_u_order3.json").to_str().unwrap(), "--format", "text"]);
    assert_eq!(text.trim(), "rho = -4/3 (exact)");
    let text = run_ok(&["rho", data("hyperbolic_const.json").to_str().unwrap(), "--format", "text"]);
    assert!(text.contains("rho = 0 (exact)"), "{text}");
}

#[test]
fn rho_numeric_and_copies() {
    let f = data("family_u.json");
    let text = run_ok(&["rho", f.to_str().unwrap(), "--mode", "numeric", "--tol", "1e-6", "--format", "text"]);
    assert!(text.contains("(certified)"), "{text}");
    let text = run_ok(&["rho", f.to_str().unwrap(), "--copies", "2", "--format", "text"]);
    assert!(text.contains("rho = -2/3 (exact)"), "{text}");
}

#[test]
fn fox_trefoil() {
    let json = run_ok(&["fox", data("trefoil.json").to_str().unwrap(), "--covers", "2,3,6"]);
    let rep: FoxReport = round_trip(&json);
    let orders: Vec<String> = rep.rows.iter().map(|r| r.order.to_string()).collect();
    assert_eq!(orders, ["3", "4", "infinite"]);
    assert!(rep.rows.iter().all(|r| r.agrees == Some(true)));
}

#[test]
fn livingston_phi30() {
    let json = run_ok(&["livingston", data("phi30.json").to_str().unwrap()]);
    let rep: LivingstonCliReport = round_trip(&json);
    assert!(rep.livingston.applies);
    assert!(rep.ruberman.success);
    assert!(rep.livingston.rows.iter().filter(|r| r.prime_power).all(|r| r.order.is_trivial()));
}

#[test]
fn blanchfield_hyperbolic() {
    let json = run_ok(&["blanchfield", data("hyperbolic_phi6.json").to_str().unwrap()]);
    assert!(json.contains("ALGEBRAICALLY_DOUBLY_SLICE"));
    let rep: BlanchfieldReport = round_trip(&json);
    assert!(rep.check.complementary);
}

#[test]
fn reproduce_paper_golden() {
    let json = run_ok(&["reproduce-paper"]);
    let rep: PaperReport = round_trip(&json);
    assert!(rep.passed);
    assert!(rep.golden.iter().all(|g| g.passed));
    assert_eq!(json, run_ok(&["reproduce-paper"]), "output is not deterministic");

    let text = run_ok(&["reproduce-paper", "--format", "text"]);
    let order = [
        "evenness witness",
        "abelianized U",
        "augmentation signature = 0",
        "(2x - 1)(2x - 3)",
        "breakpoint x = 1/2 = cos(2pi * 1/6)",
        "[0, -2]",
        "rho = -4/3 (exact)",
        "m = 30",
        "m = 105",
        "verdict: NOT_DOUBLY_SLICE",
        "at least 3 distinct primes",
    ];
    let mut at = 0;
    for needle in order {
        let pos = text[at..].find(needle).unwrap_or_else(|| panic!("{needle:?} missing or out of order"));
        at += pos;
    }
}

#[test]
fn reproduce_paper_options() {
    let text = run_ok(&["reproduce-paper", "--copies", "2", "--format", "text"]);
    assert!(text.contains("rho = -2/3 (exact)"));
    assert!(text.contains("non-paper normalization"));
    let json = run_ok(&["reproduce-paper", "--primes", "3"]);
    let rep: PaperReport = round_trip(&json);
    let row = rep.rho_rows.iter().find(|r| r.label == "phi_A^F_3").unwrap();
    assert_eq!(row.result.to_string(), "rho = -4/3 (exact)");
}

#[test]
fn exit_codes() {
    assert_eq!(dslice(&["reproduce-paper", "--primes", "4"]).status.code(), Some(1));
    assert_eq!(dslice(&["reproduce-paper", "--tol", "0"]).status.code(), Some(1));
    assert_eq!(dslice(&["rho", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(dslice(&["rho", data("trefoil.json").to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(dslice(&["frobnicate"]).status.code(), Some(1));
    let f = data("family_u.json");
    let o = dslice(&["rho", f.to_str().unwrap(), "--mode", "numeric", "--max-precision-bits", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision exhausted"));
    assert_eq!(dslice(&["--help"]).status.code(), Some(0));
}
