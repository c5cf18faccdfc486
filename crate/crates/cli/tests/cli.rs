use std::process::{Command, Output};

fn bisym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisym")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bisym(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

#[test]
fn eval_omega_h3() {
    assert_eq!(stdout(&["eval", "omega(h[3](x))"]), "s[1,1,1](x)");
}

#[test]
fn eval_cauchy_to_bidegree_two() {
    assert_eq!(
        stdout(&["eval", "sat(p[1](x)*p[1](y))", "--deg-x", "2", "--deg-y", "2", "--basis", "schur"]),
        "s[1](x)*s[1](y) + s[2](x)*s[2](y) + s[1,1](x)*s[1,1](y)"
    );
}

#[test]
fn eval_power_sum_basis_and_hbar() {
    assert_eq!(stdout(&["eval", "pleth(p[2](x), h[2](x))", "--basis", "p"]), "1/2*p[4](x) + 1/2*p[2,2](x)");
    assert_eq!(stdout(&["eval", "hbar*h[2](x) - 3/2*hbar^2"]), "hbar*s[2](x) - 3/2*hbar^2");
    // outside the window the hbar^2 term is dropped
    assert_eq!(stdout(&["eval", "hbar*h[2](x) - 3/2*hbar^2", "--hbar-max", "1"]), "hbar*s[2](x)");
}

#[test]
fn eval_json() {
    let text = stdout(&["eval", "h[2](x)*p[1](y)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["basis"], "schur");
    assert_eq!(v["terms"][0]["x_part"], serde_json::json!([2]));
    assert_eq!(v["terms"][0]["coeff"], "1");
}

#[test]
fn usage_and_evaluation_errors() {
    let out = bisym(&["eval", "p[1](x)", "--deg-x", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bisym(&["eval", "s[2,1)(x)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:6"));
    let out = bisym(&["eval", "pleth(h[2](x), 1 + p[1](x))"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must vanish"));
    let out = bisym(&["eval", "p[1](x)", "--hbar-min", "2", "--hbar-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn autfn_degree_zero_is_diagonal() {
    let text = stdout(&["autfn", "--variant", "Q", "--d", "0", "--p-max", "4"]);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.contains(&"(4) (4) 1") && rows.contains(&"(3,1) (3,1) 1") && rows.contains(&"() () 1"));
}

#[test]
fn autfn_albanese_degree_two() {
    let text = stdout(&["autfn", "--variant", "Qprime", "--d", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let total: i64 = rows.iter().map(|r| r["mult"].as_str().unwrap().parse::<i64>().unwrap()).sum();
    assert_eq!(total, 8);
    assert!(rows.iter().any(|r| r["x_part"] == serde_json::json!([1, 1])
        && r["y_part"] == serde_json::json!([1, 1, 1, 1])
        && r["mult"] == "1"));
}

#[test]
fn autfn_qtilde_is_marked_derived() {
    let text = stdout(&["autfn", "--variant", "Qtilde", "--d", "1", "--p-max", "3"]);
    assert!(text.starts_with("# derived"));
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let mult: i64 = line.rsplit(' ').next().unwrap().parse().unwrap();
        assert!(mult > 0);
    }
}

#[test]
fn table1_csv_and_json() {
    assert_eq!(stdout(&["table1", "--d-max", "2"]), "d,n_irr,sum_mult\n1,2,2\n2,6,8");
    let csv = stdout(&["table1", "--d-max", "5", "--format", "csv"]);
    assert!(csv.ends_with("5,219,720"));
    let json = stdout(&["table1", "--d-max", "1", "--format", "json"]);
    assert_eq!(json, r#"[{"d":1,"n_irr":2,"sum_mult":"2"}]"#);
    assert_eq!(bisym(&["table1", "--d-max", "0"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["autfn", "--variant", "Q", "--d", "2", "--threads", "2"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["eval", "box(R[2] + p[1](x)*p[1](y), p[1](x)*p[1](y))", "--deg-x", "3", "--deg-y", "3"];
    assert_eq!(stdout(&args), stdout(&args));
}
