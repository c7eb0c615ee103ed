use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinkbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn sink_of_a_transposition_in_s3() {
    let (code, v) = json(&["sink", "--group", "catalog:S3", "--element", "(1 2)"]);
    assert_eq!(code, 0);
    let check = &v["checks"][0];
    assert_eq!(check["verdict"], "PASS");
    assert_eq!(check["details"]["sink_size"], 3);
    // Oracle: [x, (1 2)] for x ∈ S3 lands in A3 and reaches all of it.
    assert_eq!(
        check["details"]["sink"],
        serde_json::json!(["()", "(1 2 3)", "(1 3 2)"])
    );
    assert_eq!(check["details"]["engel_element"], false);
}

#[test]
fn engel_element_of_a_nilpotent_group() {
    let (code, v) = json(&["sink", "--group", "catalog:D8", "--element", "r"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["details"]["sink_size"], 1);
    assert_eq!(v["checks"][0]["details"]["engel_element"], true);
}

#[test]
fn vandermonde_example() {
    let (code, v) = json(&["vandermonde", "--k", "2", "--p", "3", "--m", "1"]);
    assert_eq!(code, 0);
    let d = &v["checks"][0]["details"];
    // Nodes 1 and 4: c_0 + c_1 = 1 and c_0 + 4c_1 = 0.
    assert_eq!(d["nodes"], serde_json::json!(["1", "4"]));
    assert_eq!(d["rows"][0]["c_i"], "4/3");
    assert_eq!(d["rows"][1]["c_i"], "-1/3");
    assert_eq!(v["command"], "vandermonde --k 2 --p 3 --m 1 --T 50 --U 12");
}

#[test]
fn report_header_is_stable() {
    let raw = String::from_utf8(run(&["--seed", "0x10", "bch", "--W", "3"]).stdout).unwrap();
    let at: Vec<usize> = [
        "\"tool\"",
        "\"version\"",
        "\"command\"",
        "\"seed\"",
        "\"summary\"",
        "\"checks\"",
    ]
    .iter()
    .map(|k| raw.find(k).unwrap())
    .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{raw}");
    let v: Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["seed"], "0x10");
    assert_eq!(v["command"], "bch --W 3");
    let coeffs = &v["checks"][0]["details"]["coefficients"];
    assert!(coeffs.to_string().contains("1/12"), "{coeffs}");
}

#[test]
fn engel_word_parts() {
    let (code, v) = json(&["bch", "--W", "4", "--l", "1"]);
    assert_eq!(code, 0);
    let parts = v["checks"][0]["details"]["parts"].as_array().unwrap();
    // [x + y, z]_G has no x-free part beyond [y, z]-terms and a degree-1 part.
    let degrees: Vec<u64> = parts.iter().map(|p| p["x_degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees[..2], [0, 1]);
}

#[test]
fn linearize_reports_vanishing_degrees() {
    let (code, v) = json(&["linearize", "--l", "1", "--k", "3", "--p", "3", "--W", "5"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["checks"][0]["verdict"], "PASS");
}

#[test]
fn filtration_and_lie_of_q8() {
    let (code, v) = json(&["filtration", "--group", "catalog:Q8", "--element", "i"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "filtration --group catalog:Q8 --p 2 --element i");
    let c = v["checks"].as_array().unwrap();
    assert!(c.iter().all(|r| r["verdict"] == "PASS"));
    let (code, v) = json(&["lie", "--group", "catalog:Q8", "--element", "i"]);
    assert_eq!(code, 0);
    let axioms = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == "lie/Q8/axioms")
        .unwrap();
    // Q8: G/Φ(G) has rank 2 and Φ(G) = Z(G) has order 2.
    assert_eq!(axioms["details"]["dimensions"], serde_json::json!([2, 1]));
}

#[test]
fn catalog_list_is_deterministic() {
    let a = run(&["catalog", "list"]);
    let b = run(&["catalog", "list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let names: Vec<&str> = v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"S3") && names.contains(&"Heis5"));
    let show = run(&["catalog", "show", "c3_on_q8"]);
    assert!(String::from_utf8_lossy(&show.stdout).contains("c3_on_q8"));
}

#[test]
fn verify_a_user_file() {
    let dir = std::env::temp_dir().join(format!("sinkbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c2_on_c5.spec");
    let spec = action_with_local_target();
    std::fs::write(&path, spec).unwrap();
    let (code, v) = json(&["verify", "--action", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["summary"]["fail"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

/// An action file whose target is defined locally and whose actor comes from
/// the bundled catalog.
fn action_with_local_target() -> String {
    let target = String::from_utf8(run(&["catalog", "show", "C5"]).stdout).unwrap();
    let action = String::from_utf8(run(&["catalog", "show", "c4_on_c5"]).stdout).unwrap();
    let target = target.replace("C5", "Five");
    let action = action.replace("c4_on_c5", "mine").replace("C5", "Five");
    format!("{target}\n{action}")
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["sink", "--group", "catalog:Nope", "--element", "()"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["sink", "--group", "catalog:S3", "--element", "(1 9)"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["filtration", "--group", "catalog:S3"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bch"]).status.code(), Some(0));
}

#[test]
fn text_format() {
    let out = run(&["--format", "text", "verify", "--suite", "coprime-sink"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines().last().unwrap().starts_with("summary: 7 pass, 0 fail"),
        "{text}"
    );
}

#[test]
fn q_filter_keeps_matching_actors() {
    let (_, v) = json(&["verify", "--suite", "ward-engel", "--q", "3"]);
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(!ids.is_empty());
    assert!(ids.iter().all(|id| id.contains("c3c3")), "{ids:?}");
}
