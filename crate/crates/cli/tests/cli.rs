use std::fs;
use std::process::{Command, Output};

use sturm_core::bijection::signature_to_permutation;
use sturm_core::conngraph::{neumann_graph_labelled, quotient_periodic};
use sturm_core::lapsig::{enumerate_signatures, labels, Bound};
use sturm_core::render::graph_json;

fn sak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sak"))
        .args(args)
        .env("SAK_COLOR", "0")
        .output()
        .expect("run sak")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn sig_to_perm_worked_example() {
    let o = sak(&["sig-to-perm", "*({1,1}(@)*(@){1,1})*"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1,8,7,4,5,6,3,2,9");
    let o = sak(&["sig-to-perm", "*({1,1}(@)*(@){1,1})*", "--pairing"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("(2,8) (3,7)"));
}

#[test]
fn perm_to_sig_vas() {
    let o = sak(&["perm-to-sig", "1,12,11,6,5,4,7,10,9,8,3,2,13"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "*({1,1}({1}@{1})*({1}@{1}){1,1})*");
    let o = sak(&["perm-to-sig", "1,6,7,10,3,4,9,8,5,2,11"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn sturm_without_pitchfork() {
    let o = sak(&["validate-perm", "1,6,7,10,3,4,9,8,5,2,11"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sturm=true"));
    let o = sak(&["pitchfork", "1,6,7,10,3,4,9,8,5,2,11"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "no pitchfork");
}

#[test]
fn pitchfork_trace() {
    let o = sak(&["pitchfork", "1,4,3,2,5", "--trace"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[..3], ["1,4,3,2,5", "1,2,3", "1"]);
    let o = sak(&["pitchfork", "1,4,3,2,5", "--exhaustive"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn validate_perm_failures() {
    let o = sak(&["validate-perm", "2,1,3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("dissipative=false"));
    let o = sak(&["validate-perm", "1,2,2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn validate_sig_reports() {
    let o = sak(&["validate-sig", "*({1,2}@{2,1})*"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("n=3 q=2 N=7"));
    let o = sak(&["validate-sig", "*({2}@{2})*"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("(vii)"));
    let o = sak(&["validate-sig", "*({1,3}@{3,1})*", "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["axiom"], "VIII");
    let o = sak(&["validate-sig", "*(#)*"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&sak(&["enumerate"])), 2);
    assert_eq!(code(&sak(&["census", "--N", "8"])), 2);
    assert_eq!(code(&sak(&["bogus"])), 2);
}

#[test]
fn census_json() {
    let o = sak(&["census", "--N", "9", "--class", "all", "--dedup", "both"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], 9);
    assert_eq!(v["raw"], 32);
    assert_eq!(v["uptoTrivial"], 20);
    let o = sak(&["census", "--N", "15", "--class", "integrable"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("15"));
}

#[test]
fn enumerate_table_and_json() {
    let o = sak(&["enumerate", "--max-nq", "7"]);
    assert_eq!(stdout(&o).lines().count(), 21);
    let o = sak(&["enumerate", "--max-N", "5", "--json"]);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2]["signature"], "*({1}@{1})*");
    assert_eq!(rows[2]["N"], 5);
}

#[test]
fn compose_paths_inverse() {
    let o = sak(&["compose-paths", "1,3,2", "1,3,2"]);
    assert_eq!(stdout(&o).trim(), "1,2,3");
}

#[test]
fn file_input_and_output() {
    let dir = std::env::temp_dir().join(format!("sak-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let input = dir.join("sig.txt");
    fs::write(&input, "*({1,1}(@)*(@){1,1})*\n").unwrap();
    let out = dir.join("perm.txt");
    let o = sak(&["sig-to-perm", &format!("@{}", input.display()), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), "1,8,7,4,5,6,3,2,9");
    let o = sak(&["sig-to-perm", "@/nonexistent/sak/input"]);
    assert_eq!(code(&o), 2);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn plain_diagnostics_without_color() {
    let o = sak(&["perm-to-sig", "0,1"]);
    assert!(!stderr(&o).contains('\x1b'));
}

#[test]
fn meander_formats() {
    let svg = stdout(&sak(&["meander", "1,4,3,2,5", "--format", "svg", "--labels"]));
    assert!(svg.contains("<svg"));
    assert_eq!(svg.matches("<path").count(), 4);
    let dot = stdout(&sak(&["meander", "--sig", "*({1}@{1})*", "--format", "dot"]));
    assert!(dot.starts_with("digraph meander"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&sak(&["meander", "1,2,3", "--format", "json"]))).unwrap();
    assert_eq!(json["arcs"].as_array().unwrap().len(), 2);
    let o = sak(&["meander", "1,2,3", "--sig", "*({1}@{1})*", "--format", "json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn graph_formats() {
    let o = sak(&["graph", "1,4,3,2,5", "--bc", "neumann"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 8);
    let o = sak(&["graph", "1,4,3,2,5", "--bc", "neumann", "--reduce", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.contains("subgraph rank_2"));
    assert_eq!(dot.matches(" -> ").count(), 6);
    let o = sak(&["graph", "1,6,7,10,3,4,9,8,5,2,11", "--bc", "periodic"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn periodic_pipeline_consistency() {
    for es in enumerate_signatures(Bound::MaxN(13)).signatures {
        for s in [es.signature.clone(), es.signature.reversed()] {
            let text = s.to_string();
            let from_sig = stdout(&sak(&["graph", "--sig", &text, "--bc", "periodic"]));
            let perm = stdout(&sak(&["sig-to-perm", &text])).trim().to_string();
            let (p, pairing) = signature_to_permutation(&s).unwrap();
            assert_eq!(perm, p.to_string());
            let l = labels(&s).unwrap();
            let expected = graph_json(&quotient_periodic(&neumann_graph_labelled(&p, &l).unwrap(), &pairing, &l).unwrap());
            assert_eq!(from_sig.trim_end(), expected, "{text}");
            let from_perm = stdout(&sak(&["graph", &perm, "--bc", "periodic"]));
            assert_eq!(from_perm, from_sig, "{text}");
        }
    }
}

#[test]
fn deterministic_across_jobs() {
    let runs = |args: &[&str]| -> Vec<String> {
        ["1", "2", "7"]
            .iter()
            .map(|k| {
                let mut a = vec!["--jobs", k];
                a.extend_from_slice(args);
                stdout(&sak(&a))
            })
            .collect()
    };
    for args in [
        &["census", "--N", "11", "--class", "all", "--list"][..],
        &["census", "--N", "13", "--class", "integrable", "--dedup", "trivial", "--list"][..],
        &["enumerate", "--max-N", "13", "--json"][..],
    ] {
        let outs = runs(args);
        assert!(!outs[0].is_empty());
        assert!(outs.iter().all(|o| *o == outs[0]), "{args:?}");
    }
}
