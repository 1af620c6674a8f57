use std::path::PathBuf;
use std::process::{Command, Output};

fn divfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divfan")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("divfan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn q(num: i64, den: i64) -> serde_json::Value {
    serde_json::json!({ "num": num, "den": den })
}

#[test]
fn danilov_gizatullin_document_validates() {
    let o = divfan(&["--json", "check", &fixture("dg_2_3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["complete"]["verdict"], "COMPLETE");
    assert_eq!(r["members"], 7);
}

#[test]
fn incident_noncoherent_document_is_rejected_with_a_pair() {
    let o = divfan(&["--json", "check", &fixture("noncoherent_incident.json")]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["valid"], false);
    assert_eq!(r["witness_pair"], serde_json::json!([0, 1]));
    assert_eq!(divfan(&["check", &fixture("noncoherent_disjoint.json")]).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_with_2() {
    let path = scratch("malformed.json");
    std::fs::write(&path, "{\"format_version\": 1, \"base\": ").unwrap();
    assert_eq!(divfan(&["check", &path]).status.code(), Some(2));
    std::fs::write(&path, r#"{"format_version": 1, "base": {"kind": "P1", "primes": [{"name": "a"}]}, "generators": [{"dim": 1, "tail_rays": [], "coeffs": {"a": {"kind": "proper", "vertices": [[{"num": 2, "den": 4}]], "tail_rays": []}}}]}"#).unwrap();
    assert_eq!(divfan(&["check", &path]).status.code(), Some(2));
    assert_eq!(divfan(&["check", &scratch("missing.json")]).status.code(), Some(2));
    assert_eq!(divfan(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn evaluation_of_the_middle_generator() {
    let f = fixture("dg_2_3.json");
    let plus = divfan(&["--json", "eval", &f, "--member", "1", "--u", "1"]);
    assert_eq!(json(&plus), serde_json::json!({ "p0": q(-1, 2) }));
    let zero = divfan(&["--json", "eval", &f, "--member", "1", "--u", "0"]);
    assert_eq!(json(&zero), serde_json::json!({}));
    let minus = divfan(&["--json", "eval", &f, "--member", "1", "--u", "-1"]);
    assert_eq!(json(&minus), serde_json::json!({ "p1": q(-1, 3) }));
    // Outside the dual of the tail of D⁻.
    assert_eq!(divfan(&["eval", &f, "--member", "0", "--u", "1"]).status.code(), Some(1));
}

#[test]
fn slice_reports_cells_and_flags() {
    let o = divfan(&["--json", "slice", &fixture("noncomplete_p2.json"), "--mu", "D=1,E=1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(&o);
    assert_eq!(s["is_complex"], true);
    assert_eq!(s["covers"], false);
}

#[test]
fn rendering_is_deterministic() {
    let f = fixture("cotangent_p2.json");
    let a = divfan(&["render", &f, "--points"]);
    let b = divfan(&["--sequential", "render", &f, "--points"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<?xml") && svg.contains(r#"version="1.1""#));
    // The base is a line with three special points.
    assert_eq!(svg.matches("<g id=\"panel").count(), 3);
}

#[test]
fn danilov_gizatullin_slice_at_p0_has_three_labeled_pieces() {
    let svg = stdout(&divfan(&["render", &fixture("dg_2_3.json"), "--prime", "p0"]));
    assert_eq!(svg.matches("<g id=\"panel").count(), 1);
    for i in 0..3 {
        assert!(svg.contains(&format!(r#"font-size="9">{i}</tspan>"#)));
    }
}

#[test]
fn check_output_does_not_depend_on_scheduling() {
    for f in ["dg_2_3.json", "nonseparated.json", "noncoherent_incident.json"] {
        let a = divfan(&["--json", "check", &fixture(f)]);
        let b = divfan(&["--json", "--sequential", "check", &fixture(f)]);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{f}");
    }
}

#[test]
fn fixtures_round_trip() {
    let names = [
        "cotangent_dp6.json",
        "cotangent_p2.json",
        "dg_2_3.json",
        "noncoherent_disjoint.json",
        "noncoherent_incident.json",
        "noncomplete_p2.json",
        "nonseparated.json",
        "quadrant_downgrade.json",
        "split_p1.json",
    ];
    for n in names {
        let text = std::fs::read_to_string(fixture(n)).unwrap();
        let doc = divfan::io::FanDocument::parse(&text).unwrap();
        assert_eq!(doc.to_json(), text, "{n}");
        assert_eq!(divfan::io::FanDocument::parse(&doc.to_json()).unwrap(), doc);
    }
}

#[test]
fn builders_reproduce_the_fixtures() {
    let cases: [(&[&str], &str); 4] = [
        (&["build", "dg"], "dg_2_3.json"),
        (&["build", "cotangent", "--fan", "p2"], "cotangent_p2.json"),
        (&["build", "example", "nonseparated"], "nonseparated.json"),
        (&["downgrade", "--deg", "1,1", "--cone", "1,0;0,1", "--section", "1;0"], "quadrant_downgrade.json"),
    ];
    for (args, name) in cases {
        assert_eq!(stdout(&divfan(args)), std::fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
    let fan = fixture("inputs/dp6_fan.json");
    let bundle = fixture("inputs/split_p1_bundle.json");
    let from_files: [(&[&str], &str); 2] =
        [(&["build", "cotangent", "--fan", &fan], "cotangent_dp6.json"), (&["build", "rank2", "--data", &bundle], "split_p1.json")];
    for (args, name) in from_files {
        assert_eq!(stdout(&divfan(args)), std::fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn cached_report_survives_a_round_trip() {
    let path = scratch("cached.json");
    std::fs::copy(fixture("dg_2_3.json"), &path).unwrap();
    assert_eq!(divfan(&["check", "--cache", &path]).status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = divfan::io::FanDocument::parse(&text).unwrap();
    assert_eq!(doc.cached.as_ref().unwrap().complete.as_ref().unwrap().verdict, "COMPLETE");
    assert_eq!(doc.to_json(), text);
}

#[test]
fn downgrade_rejects_a_non_splitting_section() {
    let o = divfan(&["downgrade", "--deg", "1,1", "--cone", "1,0;0,1", "--section", "1;1"]);
    assert_eq!(o.status.code(), Some(2));
}
