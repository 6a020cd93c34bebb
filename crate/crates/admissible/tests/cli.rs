use std::path::PathBuf;
use std::process::{Command, Output};

const DEFINITE: &str = "x+y+z-2*i*(x*y+x*z+y*z)-3*x*y*z";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admissible")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compare with the stored file; `UPDATE_GOLDEN=1` rewrites it instead.
fn check_golden(name: &str, args: &[&str]) {
    let o = run(args);
    assert!(o.status.code().is_some());
    let out = stdout(&o);
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path.display(), e));
    assert_eq!(out, want, "output of {:?} differs from {}", args, name);
}

#[test]
fn examples_match_golden_files() {
    check_golden("examples.txt", &["examples"]);
    check_golden("examples.json", &["examples", "--format", "json"]);
    check_golden("p2.txt", &["examples", "--name", "p2"]);
}

#[test]
fn commands_match_golden_files() {
    check_golden("analyze_definite.json", &["analyze", "--format", "json", DEFINITE]);
    check_golden("puiseux_cusp.txt", &["puiseux", "y^2-x^3"]);
    check_golden("transform_definite.txt", &["transform", "3 - z1 - z2 - z3"]);
    check_golden("member_definite_x.txt", &["member", DEFINITE, "x"]);
}

#[test]
fn analyze_outputs_and_exit_codes() {
    let o = run(&["analyze", DEFINITE]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ideal: (x+y+z, x^2, x*y, y^2)"));
    assert!(s.contains("Im phi_2 = 2*x^2+2*x*y+2*y^2"));

    let s = stdout(&run(&["analyze", "z + x"]));
    assert!(s.contains("case: Principal"));
    assert!(s.contains("ideal: (x+z)"));

    let o = run(&["analyze", "x + (y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    // zero at the origin but not smooth there
    let o = run(&["analyze", "z^2 + x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn averaged_example_has_four_generator_families() {
    let o = run(&["examples", "--name", "averaged", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let gens: Vec<&str> = v[0]["ideal"]["generators"].as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect();
    assert_eq!(gens[1], "x^2-2*x*y+y^2");
    assert_eq!(gens[2], "x^3+x^2*y-x*y^2-y^3");
    assert_eq!(&gens[3..], ["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"]);
    assert_eq!(v[0]["ideal"]["L_or_K"], 4);
}

#[test]
fn member_exit_codes() {
    assert_eq!(run(&["member", DEFINITE, "x^2"]).status.code(), Some(0));
    assert_eq!(run(&["member", DEFINITE, DEFINITE]).status.code(), Some(0));
    let o = run(&["member", DEFINITE, "x"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("witness: x = t*[1, 1]"));
    assert_eq!(run(&["member", DEFINITE, "w"]).status.code(), Some(1));
}

#[test]
fn json_schemas() {
    let v: serde_json::Value = serde_json::from_slice(&run(&["analyze", "--format", "json", DEFINITE]).stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(sorted, ["H", "L_or_K", "case", "g", "generators"]);
    assert!(v["g"].is_null());
    assert!(v["L_or_K"].is_u64());

    let m: serde_json::Value = serde_json::from_slice(&run(&["member", "--format", "json", DEFINITE, "x"]).stdout).unwrap();
    assert_eq!(m["verdict"], "NotInIdeal");
    assert!(m["witness"]["ratios"].is_array());

    let b: serde_json::Value = serde_json::from_slice(&run(&["puiseux", "--format", "json", "y^2-x^3"]).stdout).unwrap();
    assert_eq!(b[0]["r"], 2);
    assert_eq!(b[0]["psi"], "t^3");

    let t: serde_json::Value = serde_json::from_slice(&run(&["transform", "--format", "json", "2-z1-z2"]).stdout).unwrap();
    assert!(t["polynomial"].is_string());

    let e: serde_json::Value = serde_json::from_slice(&run(&["examples", "--format", "json"]).stdout).unwrap();
    for item in e.as_array().unwrap() {
        let mut ks: Vec<&String> = item["ideal"].as_object().unwrap().keys().collect();
        ks.sort();
        assert_eq!(ks, ["H", "L_or_K", "case", "g", "generators"]);
    }
}

#[test]
fn input_from_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("admissible-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("p.txt");
    std::fs::write(&f, format!("{}\n", DEFINITE)).unwrap();
    let arg = format!("@{}", f.display());
    let a = run(&["analyze", &arg]);
    let b = run(&["analyze", DEFINITE]);
    assert_eq!(a.stdout, b.stdout);
    let m1 = run(&["member", "--seed", "5", DEFINITE, "x*y"]);
    let m2 = run(&["member", "--seed", "5", DEFINITE, "x*y"]);
    assert_eq!(m1.stdout, m2.stdout);
    assert_eq!(m1.status.code(), Some(0));
    assert_eq!(run(&["analyze", "@/nonexistent/file"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn transform_and_flags() {
    assert_eq!(stdout(&run(&["transform", "2 - z1*z2 - z3"])).trim(), "x+y+z-2*i*x*z-2*i*y*z-x*y*z");
    assert_eq!(run(&["analyze", "--order", "3", DEFINITE]).status.code(), Some(2));
    assert_eq!(run(&["examples", "--name", "nope"]).status.code(), Some(1));
    let s = stdout(&run(&["analyze", "--order", "6", DEFINITE]));
    assert!(s.contains("phi (through degree 6)"));
}
