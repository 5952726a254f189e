use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_modheight"));
    cmd.args(args).env_remove("MODHEIGHT_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

#[test]
fn height_table_and_json() {
    let o = run(&["height", "--field", "Q", "--ramified", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("-0.520007460037"));
    assert!(stdout(&o).contains("local[3]"));

    let o = run(&["height", "--field", "Q", "--ramified", "2,3", "--format", "json"]);
    let v = json(&o);
    assert!((v["minus1"]["value"].as_f64().unwrap() + 0.520_007_460_037_369_8).abs() < 1e-10);
    assert_eq!(v["field"]["field"], "Q");
    assert_eq!(v["field"]["d_F"], 1);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn both_routes_agree() {
    let o = run(&["height", "--field", "Q(sqrt 5)", "--ramified", "11:split2", "--route", "both", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(v["difference"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(v["ramified"][0], "11:split2");
}

#[test]
fn domain_errors_name_the_flag() {
    let o = run(&["height", "--field", "Q", "--ramified", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--ramified") && stderr(&o).contains("parity"), "{}", stderr(&o));

    let o = run(&["height", "--field", "Q(sqrt 5)", "--ramified", "11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--ramified") && stderr(&o).contains("split1"));

    let o = run(&["height", "--field", "Q(sqrt 9)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--field"));

    let o = run(&["cm-height", "--disc", "-4", "--dB", "0", "--dEF", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--dB"));

    let o = run(&["cm-height", "--disc", "-12", "--dB", "1", "--dEF", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--disc"));

    let o = run(&["local", "--N", "6", "--delta", "0", "--r", "1", "--s", "1", "--algebra", "split"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--N"));

    let o = run(&["height", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn precision_flag_and_environment() {
    let o = run(&["lvalue", "--field", "Q", "--precision", "1e-13"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--precision"));

    let o = run_env(&["lvalue", "--field", "Q"], &[("MODHEIGHT_PRECISION", "0.5")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("MODHEIGHT_PRECISION"));

    let o = run_env(&["lvalue", "--field", "Q", "--format", "json"], &[("MODHEIGHT_PRECISION", "1e-6")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["zeta_at_minus1"]["exact"], "-1/12");
    assert!((v["log_deriv_at_minus1"].as_f64().unwrap() - 1.985_053_724_405_411).abs() < 1e-6);
}

#[test]
fn cm_height_and_lvalue() {
    let o = run(&["cm-height", "--disc", "-4", "--dB", "1", "--dEF", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((json(&o)["value"].as_f64().unwrap() + 1.476_336_0).abs() < 1e-7);

    let o = run(&["lvalue", "--disc", "-3", "--format", "json"]);
    assert_eq!(json(&o)["l_at_0"]["exact"], "1/3");
}

#[test]
fn degree_is_exact() {
    let o = run(&["degree", "--field", "Q(sqrt 5)", "--ramified", "2", "--class-number", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["degree"]["exact"], "1/10");
    let o = run(&["degree", "--field", "Q", "--ramified", "2,3"]);
    assert!(stdout(&o).contains("1/3"));
    let o = run(&["degree", "--field", "Q", "--ramified", "2,3", "--class-number", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--class-number"));
}

#[test]
fn local_prints_fraction_and_decimal() {
    let o = run(&["local", "--N", "3", "--delta", "1", "--r", "2", "--s", "1", "--algebra", "split"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("3824/59049*sqrt(3)") && out.contains("0.1121672219"), "{out}");

    let o = run(&["local", "--N", "2", "--delta", "0", "--r", "-1", "--s", "2", "--algebra", "nonsplit", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(json(&o)["whittaker"]["exact"].is_string());
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "--suite", "local-identities", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["overall"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 40);
    for c in checks {
        for key in ["label", "lhs", "rhs", "abs_error", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }

    let o = run(&["verify", "--suite", "local-oracle", "--max-depth", "1", "--primes", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall PASS"));

    let o = run(&["verify", "--suite", "local-oracle", "--max-depth", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--max-depth"));
}
