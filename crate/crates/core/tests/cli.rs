use std::path::Path;
use std::process::{Command, Output};

use germcalc::germ::parse_germ;
use serde_json::Value;

fn germcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germcalc")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_f4() {
    let o = germcalc(&["analyze", "(x,y^2,y^5+x^3*y)"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["m"], 2);
    assert_eq!(v["summary"]["J"], 3);
    assert_eq!(v["invariants"]["C"]["oracle"], 3);
    assert_eq!(v["oracle_seed"], 1729);
    assert_eq!(v["normal_form"]["alpha"], "1");
}

#[test]
fn rejections_exit_2_with_reason() {
    let o = germcalc(&["analyze", "(x,y^2,x^2*y)"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["reason"], "not finitely determined: lambda not squarefree");
    let o = germcalc(&["analyze", "(x,y,x+y)"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["reason"], "corank 0");
    let o = germcalc(&["analyze", "(x, y^2 + x*y^3, y)"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["status"], "rejected");
    let o = germcalc(&["analyze", "(x, y^2, y^3 + x"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&germcalc(&["analyze"])), 3);
    assert_eq!(code(&germcalc(&["analyze", "--bogus", "(x,y^2,x*y)"])), 3);
    assert_eq!(code(&germcalc(&["frobnicate"])), 3);
    assert_eq!(code(&germcalc(&["analyze", "(x,y^2,x*y)", "--format", "xml"])), 3);
    assert_eq!(code(&germcalc(&["table", "B=2..4"])), 3);
    assert_eq!(code(&germcalc(&["table", "B=5..4"])), 3);
    assert_eq!(code(&germcalc(&["table", "F4=1..2"])), 3);
    assert_eq!(code(&germcalc(&["table", "Q"])), 3);
    assert_eq!(code(&germcalc(&["table", "P3", "--p3-param", "3/2"])), 3);
    assert_eq!(code(&germcalc(&["--help"])), 0);
    assert_eq!(code(&germcalc(&["--version"])), 0);
}

#[test]
fn table_rows() {
    let o = germcalc(&["table", "B", "3..4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    let got: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| ["r_i", "r_f", "m", "J"].iter().map(|k| r["computed"][k].as_i64().unwrap()).collect())
        .collect();
    assert_eq!(got, vec![vec![2, 0, 2, 3], vec![0, 2, 2, 4]]);
    let o = germcalc(&["table", "H=2..2", "crosscap", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,germ,type,r_i,r_f,m,J,status");
    assert!(lines[1].starts_with("H2,") && lines[1].ends_with(",2,0,3,2,ok"), "{}", lines[1]);
    assert!(lines[2].starts_with("crosscap,") && lines[2].ends_with(",0,1,1,0,ok"), "{}", lines[2]);
}

#[test]
fn full_default_table_exits_0() {
    let o = germcalc(&["table", "--oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    // family then k order
    let names: Vec<&str> = text.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names[..6], ["crosscap", "S1", "S2", "S3", "S4", "B3"]);
    assert_eq!(names[19], "P3");
}

#[test]
fn json_input_round_trips() {
    for g in ["(x, y^2, y^5 + x^3*y)", "(x,y^3+x*y, 2*y^4+x*y^2)", "(x, y^4, y^6 + x^5*y - 5*x^3*y^3 + 4*x*y^5)"] {
        let v = json(&germcalc(&["analyze", g, "--no-oracle"]));
        let emitted = v["input"].as_str().unwrap();
        assert_eq!(parse_germ(emitted).unwrap(), parse_germ(g).unwrap());
        let nf = v["normal_form"]["germ"].as_str().unwrap();
        assert!(parse_germ(nf).is_ok());
    }
}

#[test]
fn other_formats_and_sources() {
    let o = germcalc(&["analyze", "C7", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1).unwrap(), "\"(x, y^2, x^7*y + x*y^3)\",\"(1,6,10;1,3)\",2,1,1,2,7,0,8,2,2");
    let o = germcalc(&["analyze", "T4", "--format", "table"]);
    assert!(stdout(&o).contains("mu(D)"));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("germ.txt");
    std::fs::write(&f, "# H2\n(x, y^3,\n y^5 + x*y)\n").unwrap();
    let v = json(&germcalc(&["analyze", "--file", f.to_str().unwrap()]));
    assert_eq!((v["summary"]["m"].as_i64(), v["summary"]["J"].as_i64()), (Some(3), Some(2)));
    assert_eq!(code(&germcalc(&["analyze", "--file", "/nonexistent/germ"])), 3);
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sample_c7() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c7");
    let o = germcalc(&["sample", "(x,y^2,x*y^3-x^7*y)", "--count", "3", "--window", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let src = rows(&out.join("source_branches.csv"));
    assert_eq!(src[0], ["branch", "u", "x", "y"]);
    let img = rows(&out.join("image_branches.csv"));
    assert_eq!(img[0], ["branch", "u", "X", "Y", "Z"]);
    for b in 0..3 {
        assert_eq!(src.iter().skip(1).filter(|r| r[0] == b.to_string()).count(), 3);
    }
    // branch 2 is V(x); its image lies on X = Z = 0
    for r in img.iter().skip(1).filter(|r| r[0] == "2") {
        assert_eq!((r[2].parse::<f64>().unwrap(), r[4].parse::<f64>().unwrap()), (0.0, 0.0));
    }
}

#[test]
fn sample_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s1");
    let o = germcalc(&["sample", "S1", "--count", "0", "--window", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let o = germcalc(&["sample", "S1", "--count", "4", "--window", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(out.join("source_branches.csv")).unwrap(), "branch,u,x,y\n");
    assert_eq!(std::fs::read_to_string(out.join("image_branches.csv")).unwrap(), "branch,u,X,Y,Z\n");
    let adv: Value = serde_json::from_str(&std::fs::read_to_string(out.join("advisory.json")).unwrap()).unwrap();
    assert_eq!(adv["non_real_branches"], serde_json::json!([0, 1]));
    let o = germcalc(&["sample", "(x,y^2,x^2*y)", "--count", "2", "--window", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}
