use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypertoric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn regions_of_the_fixture() {
    let o = run(&["regions", "-i", &fixture("n4k2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# hypertoric regions n=4 k=2 D=12 mode=Z\n"));
    let feasible = text.lines().filter(|l| l.split('\t').nth(1) == Some("true")).count();
    assert_eq!(feasible, 11);
    let in_p: Vec<&str> =
        text.lines().filter(|l| l.split('\t').nth(3) == Some("true")).map(|l| l.split('\t').next().unwrap()).collect();
    // + < − string order
    assert_eq!(in_p, vec!["+++-", "++-+", "++--", "+-++", "+--+", "+---"]);
}

#[test]
fn validation_errors_have_distinct_codes() {
    let cases = [("dependent.json", "[E12]"), ("concurrent.json", "[E13]"), ("malformed.json", "[E10]")];
    for (file, code) in cases {
        let o = run(&["regions", "-i", &fixture(file)]);
        assert_eq!(o.status.code(), Some(3), "{file}");
        assert!(stderr(&o).contains(code), "{file}: {}", stderr(&o));
    }
    assert!(stderr(&run(&["regions", "-i", &fixture("concurrent.json")])).contains("{1,2,3}"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["regions"]).status.code(), Some(2));
    assert_eq!(run(&["strands", "--n", "2", "--mode", "z"]).status.code(), Some(2));
    assert_eq!(run(&["ext", "+--+", "-i", &fixture("n4k2.json")]).status.code(), Some(2));
    assert_eq!(run(&["svg", "--n", "3", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn ext_with_oracle_matches() {
    let o = run(&["ext", "+--+", "++-+", "--oracle", "-i", &fixture("n4k2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("+--+\t++-+")).unwrap();
    assert!(row.ends_with("\tfalse\ttrue"), "{row}");
    // a label outside 𝒫 does not validate
    assert_eq!(run(&["ext", "++++", "+--+", "-i", &fixture("n4k2.json")]).status.code(), Some(3));
}

#[test]
fn report_all_passes_on_the_fixture() {
    let o = run(&["report", "--all", "-i", &fixture("n4k2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["header"]["D"], "12");
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r["status"] == "pass" || r["status"] == "skipped"));
}

#[test]
fn report_on_a_left_cyclic_arrangement_runs_every_suite() {
    let o = run(&["report", "--all", "--n", "3", "--k", "1", "--side", "left"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!stdout(&o).contains("skipped"));
}

#[test]
fn svg_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("hypertoric-svg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.svg"), dir.join("b.svg"));
    for p in [&a, &b] {
        let o = run(&["svg", "-i", &fixture("n4k2.json"), "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.matches(r#"class="hyperplane""#).count(), 4);
    assert_eq!(text.matches(r#"class="region""#).count(), 6);
    assert!(text.contains("{1,3} +--+"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn k0_matrices() {
    let o = run(&["k0", "--basis", "projective", "-i", &fixture("n4k2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("+---\t0\t0\t1*q^1\t0\t0\t1*q^0"), "{text}");
    let o = run(&["k0", "--basis", "canonical-change", "--n", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 7);
    // canonical-change needs a cyclic (n, k)
    assert_eq!(run(&["k0", "--basis", "canonical-change", "-i", &fixture("n4k2.json")]).status.code(), Some(2));
}

#[test]
fn cyclic_and_strands_subcommands() {
    for side in ["left", "right"] {
        let o = run(&["cyclic", "--n", "5", "--k", "2", "--side", side]);
        assert_eq!(o.status.code(), Some(0), "{side}");
    }
    let o = run(&["cyclic", "--n", "4", "--k", "2", "--nodes", "1,2,3/2,5"]);
    assert_eq!(o.status.code(), Some(3), "nodes must increase");
    let o = run(&["osz-verify", "--n", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["strands", "--n", "2", "--max-degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# hypertoric strands n=2 D=4 mode=F2\n"));
    let o = run(&["ext-strands", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_output_is_stable() {
    let args = ["dims", "-i", &fixture("n4k2.json"), "--format", "json", "--max-degree", "4"];
    let (a, b) = (stdout(&run(&args)), stdout(&run(&args)));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), 36);
}
