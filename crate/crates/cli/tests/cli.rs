use std::process::{Command, Output};

fn balvoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balvoa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_c32_csv() {
    let o = balvoa(&["enumerate", "--c", "32", "--f", "0", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,dim_v1,symbol");
    assert_eq!(lines.len(), 450);
    assert!(text.contains("\"D32,1\""));
}

#[test]
fn enumerate_small_c() {
    let o = balvoa(&["enumerate", "--c", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn derive_identities_c40() {
    let o = balvoa(&["derive-identities", "--c", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "d2 = 496*d1 + 20620",
        "S2^2 = -248*S1^2 + 60*d1*<h,h> + 1560*<h,h>",
        "4*S2^6 - 5*S2^4*<h,h> = -32*S1^6 - 80*S1^4*<h,h> + 360*S1^2*<h,h>^2 - 60*d1*<h,h>^3 - 1200*<h,h>^3",
    ] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
    assert!(text.contains("agree"));
}

#[test]
fn derive_identities_rejects_other_c() {
    assert_eq!(balvoa(&["derive-identities", "--c", "24"]).status.code(), Some(1));
}

#[test]
fn classify_examples() {
    let o = balvoa(&["classify", "A1,1^32", "B2,2^8", "A1,1^12 A3,2^4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let got: Vec<&str> = text.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(got, ["lat", "dgm", "open"]);
}

#[test]
fn classify_with_custom_catalog() {
    let dir = std::env::temp_dir().join(format!("balvoa-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.txt");
    std::fs::write(&path, "rank=32\n").unwrap();
    let o = balvoa(&["classify", "--catalog", path.to_str().unwrap(), "B2,2^8"]);
    assert!(stdout(&o).contains("open"));
    std::fs::write(&path, "E8,1\n").unwrap();
    assert_eq!(balvoa(&["classify", "--catalog", path.to_str().unwrap(), "B2,2^8"]).status.code(), Some(1));
}

#[test]
fn test_command_dimension_stage() {
    let o = balvoa(&["test", "--stages", "dim", "A10,4", "D32,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("A10,4  d1=120  ruled-out (dim)"), "{text}");
    assert!(text.contains("D32,1  d1=2016  passed"), "{text}");
}

#[test]
fn json_output_is_reproducible() {
    let args = ["test", "--stages", "dim,char", "--format", "json", "F4,4^2", "A2,4^7"];
    let a = balvoa(&args);
    let b = balvoa(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["final"]["status"], "Passed");
    assert_eq!(v[0]["stages"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(balvoa(&["bogus"]).status.code(), Some(1));
    assert_eq!(balvoa(&["test", "Q7,1"]).status.code(), Some(1));
    assert_eq!(balvoa(&["test", "--stages", "nope", "A1,1"]).status.code(), Some(1));
    assert_eq!(balvoa(&["enumerate", "--c", "x"]).status.code(), Some(1));
    assert_eq!(balvoa(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_appendix_dimension_rows() {
    let o = balvoa(&["verify-appendix", "--stages", "dim", "--rows", "125,126,373,449", "--realizations"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("4 rows"), "{text}");
    assert!(text.contains("0 mismatches"), "{text}");
}

#[test]
fn verify_appendix_reports_mismatch() {
    let dir = std::env::temp_dir().join(format!("balvoa-fix-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    std::fs::write(&path, "index,dim_v1,symbol,verdict,realization\n373,120,\"A10,4\",pass,none\n").unwrap();
    let o = balvoa(&["verify-appendix", "--stages", "dim", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("MISMATCH"));
    std::fs::write(&path, "index,dim\n").unwrap();
    assert_eq!(balvoa(&["verify-appendix", "--fixture", path.to_str().unwrap()]).status.code(), Some(1));
}
