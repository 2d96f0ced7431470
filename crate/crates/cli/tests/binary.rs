use std::io::Write;
use std::process::{Command, Stdio};

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clalg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const LINE: &str = "ring R { p = 7; vars = [x]; }\n";

#[test]
fn minimal_script_from_stdin() {
    let (code, out, _) = run(&[], &format!("{LINE}check gb [x^2+x];"));
    assert_eq!(code, 0);
    assert!(out.contains("preimage_basis: [[x^2 + x]]"), "{out}");
}

#[test]
fn invalid_scripts_exit_one_with_position() {
    let (code, out, err) = run(&["-"], "ring R { p = 6; vars = [x]; }");
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(
        err.trim(),
        "clalg: 1:14: construction error: modulus not prime: 6"
    );
    let (code, _, err) = run(&[], &format!("{LINE}check member N [x];"));
    assert_eq!(code, 1);
    assert!(err.contains("2:14: undeclared name 'N'"), "{err}");
}

#[test]
fn unknown_and_resource_exit_codes() {
    let tight = format!("{LINE}submodule N of R {{ gens = [x^2]; }}\nclosure t {{ kind = tight; }}\ncheck close t N [x];");
    let (code, out, _) = run(&["--emax", "1"], &tight);
    assert!(
        out.contains("verdict: OUT") || out.contains("verdict: LIKELY_OUT"),
        "{out}"
    );
    assert_eq!(code, 0);
    let (code, out, _) = run(&[], &format!("{LINE}module Z over R {{ ngens = 1; rels = [[1]]; }}\nclosure id {{ kind = identity; }}\ncheck phantom id Z;"));
    assert_eq!(code, 2, "{out}");
    let fermat = "ring R { p = 7; vars = [z, x, y]; rels = [x^3 + y^3 + z^3]; }\n\
                  closure id { kind = identity; }\n\
                  check build id R [[x, y], [x, y, z]] rounds=2;";
    let (code, out, _) = run(&["--budget", "20"], fermat);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("verdict: BUDGET_EXHAUSTED"), "{out}");
}

#[test]
fn json_output_is_versioned_and_stable() {
    let src = format!("{LINE}submodule N of R {{ gens = [x]; }}\ncheck member N [x^3];");
    let (code, a, _) = run(&["--json", "--seed", "3"], &src);
    let (_, b, _) = run(&["--json", "--seed", "3"], &src);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reports"][0]["verdict"], "IN");
    assert_eq!(v["reports"][0]["certificates_verified"], true);
    assert_eq!(v["reports"][0]["certificates"][0]["coefficients"][0], "x^2");
    assert!(v["reports"][0].get("timing_ms").is_none());
}

#[test]
fn print_flag_emits_canonical_script() {
    let (code, out, _) = run(&["--print"], "ring R{p=7;vars=[x]}check gb [x];");
    assert_eq!(code, 0);
    assert_eq!(out, "ring R {\n  p = 7;\n  vars = [x];\n}\ncheck gb [x];\n");
}
