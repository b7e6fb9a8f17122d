use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use fdx_cli::doc::{Document, InstanceDoc, Report};
use fdx_core::welfare::is_pareto_optimal;
use fdx_core::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Report,
}

fn fdx(args: &[&str]) -> Run {
    fdx_env(args, None)
}

fn fdx_env(args: &[&str], budget: Option<&str>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fdx"));
    cmd.args(args).env_remove("FDX_BUDGET");
    if let Some(b) = budget {
        cmd.env("FDX_BUDGET", b);
    }
    let out = cmd.output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = Document::parse(&stdout)
        .unwrap_or_else(|e| panic!("stdout is not a document ({e}): {stdout}"))
        .into_report()
        .unwrap();
    assert_eq!(report.exit_code, code);
    Run { code, report }
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn instance_doc(p: &Path) -> InstanceDoc {
    Document::parse(&fs::read_to_string(p).unwrap()).unwrap().into_instance().unwrap()
}

/// Four identical items over three agents: agent 1 values only its own
/// items, agents 2 and 3 value items held by themselves or by agent 2.
fn write_ex2(dir: &TempDir) -> PathBuf {
    let mut entries = Vec::new();
    for a in 1..=4 {
        entries.push(format!(r#"[1,1,"a{a}","1"]"#));
        for i in 2..=3 {
            entries.push(format!(r#"[{i},2,"a{a}","1"]"#));
            if i == 3 {
                entries.push(format!(r#"[3,3,"a{a}","1"]"#));
            }
        }
    }
    let text = format!(
        r#"{{"schema":"fdx/1","kind":"instance","agents":3,"items":["a1","a2","a3","a4"],"valuations":[{}]}}"#,
        entries.join(",")
    );
    let p = path(dir, "ex2.json");
    fs::write(&p, text).unwrap();
    p
}

fn write_allocation(dir: &TempDir, name: &str, agents: usize, pairs: &[(&str, usize)]) -> PathBuf {
    let body: Vec<String> = pairs.iter().map(|(item, a)| format!(r#""{item}":{a}"#)).collect();
    let p = path(dir, name);
    fs::write(
        &p,
        format!(r#"{{"schema":"fdx/1","kind":"allocation","agents":{agents},"assignment":{{{}}}}}"#, body.join(",")),
    )
    .unwrap();
    p
}

#[test]
fn partition_witness_files_pass_efx() {
    let dir = TempDir::new().unwrap();
    let (inst, wit) = (path(&dir, "p.json"), path(&dir, "w.json"));
    let gen = fdx(&[
        "generate", "partition", "--values", "1,1,2,2", "--subset", "1,3", "--output", s(&inst), "--witness", s(&wit),
    ]);
    assert_eq!(gen.code, 0);
    assert_eq!(gen.report.files.len(), 2);
    let run = fdx(&["check", s(&inst), s(&wit), "--notion", "EFX"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report.verdict.as_deref(), Some("pass"));
    assert_eq!(run.report.pairs.len(), 6);
}

#[test]
fn nash_maximizer_fails_ef1_for_the_first_pair() {
    let dir = TempDir::new().unwrap();
    let inst = write_ex2(&dir);
    let alloc = write_allocation(&dir, "nw.json", 3, &[("a1", 1), ("a2", 2), ("a3", 2), ("a4", 2)]);
    let run = fdx(&["check", s(&inst), s(&alloc), "--notion", "ef1"]);
    assert_eq!(run.code, 1);
    let v = run.report.violation.unwrap();
    assert_eq!((v.i, v.j, v.gap), (1, 2, Value::from(2)));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let inst = write_ex2(&dir);
    let run = fdx(&["check", s(&bad), s(&bad), "--notion", "EF"]);
    assert_eq!(run.code, 2);
    assert!(run.report.error.is_some());
    let short = write_allocation(&dir, "short.json", 3, &[("a1", 1), ("a2", 2)]);
    assert_eq!(fdx(&["check", s(&inst), s(&short), "--notion", "EF"]).code, 2);
    let extra = write_allocation(&dir, "extra.json", 3, &[("a1", 1), ("a2", 2), ("a3", 2), ("a4", 2), ("b", 1)]);
    assert_eq!(fdx(&["check", s(&inst), s(&extra), "--notion", "EF"]).code, 2);
    assert_eq!(fdx(&["check", s(&inst), s(&path(&dir, "missing.json")), "--notion", "EF"]).code, 2);
    // The instance is not an allocation document.
    assert_eq!(fdx(&["check", s(&inst), s(&inst), "--notion", "EF"]).code, 2);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_fdx")).args(["check", "a", "b", "--notion", "EF3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fdx")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_partition_yes_and_no_instances() {
    let dir = TempDir::new().unwrap();
    let yes = path(&dir, "yes.json");
    assert_eq!(fdx(&["generate", "partition", "--values", "1,1,2,2", "--output", s(&yes)]).code, 0);
    let wit = path(&dir, "found.json");
    let run = fdx(&["solve", s(&yes), "--notion", "EFX", "--witness", s(&wit)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report.decision.as_deref(), Some("exists"));
    assert_eq!(fdx(&["check", s(&yes), s(&wit), "--notion", "EFX"]).code, 0);

    let no = path(&dir, "no.json");
    assert_eq!(fdx(&["generate", "partition", "--values", "1,1,1,5", "--output", s(&no)]).code, 0);
    let brute = fdx(&["solve", s(&no), "--notion", "EFX", "--engine", "brute"]);
    let typed = fdx(&["solve", s(&no), "--notion", "EFX", "--engine", "bundle-type"]);
    assert!(brute.code == 0 || brute.code == 1);
    assert_eq!(brute.code, typed.code);
    assert_eq!(typed.report.engine.as_deref(), Some("bundle-type"));
    assert!(brute.report.stats.unwrap().allocations_checked > 0);
}

#[test]
fn budget_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "r.json");
    let gen = ["generate", "random", "--agents", "3", "--items", "6", "--values", "0,1,2,3,4,5", "--seed", "3"];
    assert_eq!(fdx(&[&gen[..], &["--output", s(&inst)]].concat()).code, 0);
    let run = fdx(&["solve", s(&inst), "--notion", "EF", "--budget", "1"]);
    assert_eq!(run.code, 3);
    assert_eq!(fdx_env(&["solve", s(&inst), "--notion", "EF"], Some("1")).code, 3);
    assert_eq!(fdx_env(&["welfare", s(&inst), "--maximize", "nash"], Some("1")).code, 3);
    // The flag overrides the environment.
    assert_ne!(fdx_env(&["solve", s(&inst), "--notion", "EF1", "--budget", "1000000"], Some("1")).code, 3);
}

#[test]
fn bisection_on_k4_reports_three_types() {
    let dir = TempDir::new().unwrap();
    let (inst, wit) = (path(&dir, "b.json"), path(&dir, "bw.json"));
    let run = fdx(&[
        "generate", "bisection", "--graph", "k4", "--cut", "4", "--side", "1,2", "--output", s(&inst), "--witness",
        s(&wit),
    ]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report.metadata["item_types"], 3);
    assert_eq!(instance_doc(&inst).metadata["item_types"], 3);
    assert_eq!(instance_doc(&inst).agents, 6);
    assert_eq!(fdx(&["check", s(&inst), s(&wit), "--notion", "EFX"]).code, 0);
    // A side that cuts the wrong number of edges is not a certificate.
    let bad = fdx(&["generate", "bisection", "--graph", "k4", "--cut", "2", "--side", "1,2", "--output", s(&inst)]);
    assert_eq!(bad.code, 2);
}

#[test]
fn bisection_from_a_graph_document() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.json");
    fs::write(&g, r#"{"schema":"fdx/1","kind":"graph","vertices":4,"edges":[[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#)
        .unwrap();
    let inst = path(&dir, "b.json");
    assert_eq!(fdx(&["generate", "bisection", "--graph-file", s(&g), "--cut", "4", "--output", s(&inst)]).code, 0);
    let not_cubic = path(&dir, "p.json");
    fs::write(&not_cubic, r#"{"schema":"fdx/1","kind":"graph","vertices":2,"edges":[[1,2]]}"#).unwrap();
    assert_eq!(fdx(&["generate", "bisection", "--graph-file", s(&not_cubic), "--cut", "1", "--output", s(&inst)]).code, 2);
}

#[test]
fn clique_witness_is_envy_free() {
    let dir = TempDir::new().unwrap();
    let (inst, wit) = (path(&dir, "c.json"), path(&dir, "cw.json"));
    let run = fdx(&[
        "generate", "clique", "--colors", "2", "--class-size", "2", "--edges", "1-3,1-4,2-3,2-4", "--clique", "1,4",
        "--output", s(&inst), "--witness", s(&wit),
    ]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report.metadata["agents"], 8);
    assert_eq!(fdx(&["check", s(&inst), s(&wit), "--notion", "EF"]).code, 0);
}

#[test]
fn random_generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (path(&dir, "a.json"), path(&dir, "b.json"), path(&dir, "c.json"));
    let args = ["generate", "random", "--agents", "3", "--items", "4", "--values", "-1,0,1/2,2", "--seed", "42"];
    for p in [&a, &b] {
        assert_eq!(fdx(&[&args[..], &["--output", s(p)]].concat()).code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let other = ["generate", "random", "--agents", "3", "--items", "4", "--values", "-1,0,1/2,2", "--seed", "43"];
    assert_eq!(fdx(&[&other[..], &["--output", s(&c)]].concat()).code, 0);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn generated_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "p.json");
    assert_eq!(fdx(&["generate", "partition", "--values", "1,2,3,4", "--output", s(&inst)]).code, 0);
    let text = fs::read_to_string(&inst).unwrap();
    let doc = Document::parse(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    let parsed = doc.into_instance().unwrap();
    let again = InstanceDoc::from_instance(&parsed.to_instance().unwrap(), parsed.metadata.clone());
    assert_eq!(again, parsed);
}

#[test]
fn normalize_removes_negative_values() {
    let dir = TempDir::new().unwrap();
    let (inst, norm) = (path(&dir, "p.json"), path(&dir, "n.json"));
    assert_eq!(fdx(&["generate", "partition", "--values", "1,1,2,2", "--output", s(&inst)]).code, 0);
    assert!(instance_doc(&inst).valuations.iter().any(|e| e.3.is_negative()));
    let run = fdx(&["reduce", "normalize", s(&inst), "--output", s(&norm)]);
    assert_eq!(run.code, 0);
    assert!(run.report.metadata.contains_key("shifts"));
    let out = instance_doc(&norm);
    assert!(out.valuations.iter().all(|e| !e.3.is_negative()));
    assert_eq!(out.metadata["reduction"], "normalize");
}

#[test]
fn binary_reduction_needs_two_values_per_agent() {
    let dir = TempDir::new().unwrap();
    let (three, two, out) = (path(&dir, "3.json"), path(&dir, "2.json"), path(&dir, "o.json"));
    fs::write(
        &three,
        r#"{"schema":"fdx/1","kind":"instance","agents":2,"items":["a","b"],
            "valuations":[[1,1,"a","1"],[1,1,"b","2"]]}"#,
    )
    .unwrap();
    assert_eq!(fdx(&["reduce", "binary", s(&three), "--output", s(&out)]).code, 2);
    fs::write(
        &two,
        r#"{"schema":"fdx/1","kind":"instance","agents":2,"items":["a","b"],"default":"3",
            "valuations":[[1,1,"a","7"],[2,1,"b","-1"]]}"#,
    )
    .unwrap();
    assert_eq!(fdx(&["reduce", "binary", s(&two), "--output", s(&out)]).code, 0);
    let inst = instance_doc(&out).to_instance().unwrap();
    assert!(inst.values().iter().all(|v| v.is_zero() || *v == Value::one()));
    assert_eq!(*inst.value(0, 0, 0), Value::one());
    assert_eq!(*inst.value(1, 0, 1), Value::zero());
}

#[test]
fn team_spec_collapses_to_mu_times_v() {
    let dir = TempDir::new().unwrap();
    let (spec, plain, full) = (path(&dir, "t.json"), path(&dir, "p.json"), path(&dir, "f.json"));
    fs::write(
        &spec,
        r#"{"schema":"fdx/1","kind":"team","items":["a","b"],"teams":[[1,2],[3]],"c":"1/2",
            "base":[["4","2"],["1","3"],["5","0"]]}"#,
    )
    .unwrap();
    assert_eq!(fdx(&["reduce", "correlated", s(&spec), "--output", s(&plain)]).code, 0);
    let p = instance_doc(&plain).to_instance().unwrap();
    assert_eq!(*p.value(0, 0, 0), Value::from(4));
    assert_eq!(*p.value(1, 1, 1), Value::from(3));
    assert!(p.value(0, 1, 0).is_zero());
    assert_eq!(fdx(&["reduce", "correlated", s(&spec), "--expand", "--output", s(&full)]).code, 0);
    let f = instance_doc(&full).to_instance().unwrap();
    // A teammate holding the item leaves half its value.
    assert_eq!(*f.value(0, 1, 0), Value::from(2));
    assert!(f.value(0, 2, 0).is_zero());
}

#[test]
fn network_and_general_correlated_specs() {
    let dir = TempDir::new().unwrap();
    let (net, corr, out) = (path(&dir, "n.json"), path(&dir, "c.json"), path(&dir, "o.json"));
    fs::write(
        &net,
        r#"{"schema":"fdx/1","kind":"network","agents":3,"items":["a"],"edges":[[1,2],[2,3]],
            "base":[["2"],["2"],["2"]],"mu":[["1"],["1/2"],["1"]]}"#,
    )
    .unwrap();
    let run = fdx(&["reduce", "correlated", s(&net), "--expand", "--output", s(&out)]);
    assert_eq!(run.code, 0);
    // Agents 1 and 3 are two hops apart, so d·μ = 2 exceeds 1 for them.
    assert_eq!(run.report.metadata["warnings"].as_array().unwrap().len(), 2);
    let f = instance_doc(&out).to_instance().unwrap();
    assert_eq!(*f.value(0, 2, 0), Value::from(-2));
    fs::write(
        &corr,
        r#"{"schema":"fdx/1","kind":"correlated","agents":2,"items":["a"],
            "base":[["1"],["1"]],"tau":[["0","0"],["1","0"]],"mu":[["1"],["1"]]}"#,
    )
    .unwrap();
    assert_eq!(fdx(&["reduce", "correlated", s(&corr), "--output", s(&out)]).code, 2);
    let disconnected = path(&dir, "d.json");
    fs::write(
        &disconnected,
        r#"{"schema":"fdx/1","kind":"network","agents":2,"items":[],"edges":[],"base":[[],[]],"mu":[[],[]]}"#,
    )
    .unwrap();
    assert_eq!(fdx(&["reduce", "correlated", s(&disconnected), "--output", s(&out)]).code, 2);
}

#[test]
fn nash_maximizer_gives_bundle_sizes_one_and_three() {
    let dir = TempDir::new().unwrap();
    let inst = write_ex2(&dir);
    let run = fdx(&["welfare", s(&inst), "--maximize", "nash"]);
    assert_eq!(run.code, 0);
    let w = run.report.welfare.unwrap();
    assert_eq!(w.nash, Some(Value::from(9)));
    assert_eq!(w.maximizers, Some(4));
    let mut sizes = [0usize; 3];
    for &agent in run.report.witness.unwrap().values() {
        sizes[agent - 1] += 1;
    }
    assert_eq!(sizes, [1, 3, 0]);
}

#[test]
fn utilitarian_maximizer_is_pareto_optimal() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "r.json");
    let gen = ["generate", "random", "--agents", "3", "--items", "5", "--values", "-2,0,1,3", "--seed", "8"];
    assert_eq!(fdx(&[&gen[..], &["--output", s(&inst)]].concat()).code, 0);
    let run = fdx(&["welfare", s(&inst), "--maximize", "utilitarian"]);
    assert_eq!(run.code, 0);
    let instance = instance_doc(&inst).to_instance().unwrap();
    let owner: Vec<usize> = run.report.witness.unwrap().values().map(|a| a - 1).collect();
    let alloc = fdx_core::Allocation::new(3, owner).unwrap();
    assert!(is_pareto_optimal(&instance, &alloc, 1 << 20).unwrap());
}

#[test]
fn welfare_of_an_empty_instance_is_zero() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "e.json");
    fs::write(&inst, r#"{"schema":"fdx/1","kind":"instance","agents":2,"items":[],"valuations":[]}"#).unwrap();
    let alloc = write_allocation(&dir, "a.json", 2, &[]);
    let run = fdx(&["welfare", s(&inst), s(&alloc)]);
    assert_eq!(run.code, 0);
    let w = run.report.welfare.unwrap();
    assert!(w.utilitarian.is_zero());
    assert!(w.utilities.iter().all(Value::is_zero));
    assert_eq!(w.nash, Some(Value::zero()));
}

#[test]
fn nash_with_negative_utilities_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "n.json");
    fs::write(&inst, r#"{"schema":"fdx/1","kind":"instance","agents":2,"items":["a"],"valuations":[[1,2,"a","-1"]]}"#)
        .unwrap();
    assert_eq!(fdx(&["welfare", s(&inst), "--maximize", "nash"]).code, 2);
}

#[test]
fn report_can_go_to_a_file() {
    let dir = TempDir::new().unwrap();
    let inst = write_ex2(&dir);
    let report = path(&dir, "report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_fdx"))
        .args(["solve", s(&inst), "--notion", "EF2", "--output", s(&report)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r = Document::parse(&fs::read_to_string(&report).unwrap()).unwrap().into_report().unwrap();
    assert_eq!(r.decision.as_deref(), Some("exists"));
    assert_eq!(r.command[0], "solve");
}
