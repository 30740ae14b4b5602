use std::path::Path;
use std::process::{Command, Output};

fn turan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turan")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn tree_build_writes_edge_list_with_roots() {
    let out = turan(&["tree", "build", "4", "9"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "n 10\n0 1\n0 4\n0 6\n1 2\n1 7\n2 3\n2 8\n3 5\n3 9\nroots: 4 5 6 7 8 9\n"
    );
}

#[test]
fn tree_check_reports_the_star_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("star.txt");
    std::fs::write(&file, "n 4\n0 1\n0 2\n0 3\nroots: 1 2\n").unwrap();
    let out = turan(&["tree", "check", file.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["balanced"], false);
    assert_eq!(json["rho_T"], "3/2");
    assert_eq!(json["rho_S"], "1/1");
    assert_eq!(json["witness_subset"], serde_json::json!([3]));
}

#[test]
fn construct_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = turan(&["construct", "--a", "1", "--b", "1", "--q", "5", "--seed", "0", "--out", out_dir, "--dot"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["graph.txt", "pruned.txt", "report.json", "report.csv", "graph.dot", "pruned.dot"] {
        assert!(Path::new(out_dir).join(name).exists(), "{name}");
    }
    let report = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert_eq!(report, include_str!("../../core/tests/golden/report_a1_b1_q5_seed0.json"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    // Argument errors.
    assert_eq!(turan(&["construct", "--a", "1", "--b", "2", "--q", "4", "--out", out_dir]).status.code(), Some(2));
    assert_eq!(turan(&["bogus"]).status.code(), Some(2));
    // Capacity errors.
    let capped = Command::new(env!("CARGO_BIN_EXE_turan"))
        .env("RE_CAPACITY_N", "10")
        .args(["construct", "--a", "1", "--b", "2", "--q", "5", "--out", out_dir])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    // I/O errors.
    assert_eq!(turan(&["tree", "check", "/nonexistent/tree.txt"]).status.code(), Some(1));
}

#[test]
fn oracle_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.txt");
    std::fs::write(&tree, "n 3\n0 1\n0 2\nroots: 1 2\n").unwrap();
    let out = turan(&["oracle", "exact", "--n", "5", "--tree", tree.to_str().unwrap(), "--p", "2"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["value"], 6);

    let host = dir.path().join("k23.txt");
    std::fs::write(&host, "n 5\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n").unwrap();
    let out = turan(&["oracle", "witness", "--graph", host.to_str().unwrap(), "--tree", tree.to_str().unwrap(), "--p", "3"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["found"], true);
    assert_eq!(json["roots"], serde_json::json!([0, 1]));
}

#[test]
fn family_enumerate_prints_blocks_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("p3.txt");
    std::fs::write(&tree, "n 4\n0 1\n1 2\n2 3\nroots: 0 3\n").unwrap();
    let out = turan(&["family", "enumerate", tree.to_str().unwrap(), "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("# class").count(), 4);
    let summary: serde_json::Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(summary, serde_json::json!({"classes": 4, "density_ok": true, "max_edges": 6, "min_edges": 5}));
}
