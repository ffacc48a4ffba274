use std::path::Path;
use std::process::{Command, Output};

use kr_cli::commands::{cmd_curve, CompareReport, CurveReport, GcohReport, ModelReport, SphereReport, SsRunReport};
use kr_cli::json::GroupJson;

fn kr(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kr")).args(args).env("KR_CACHE_DIR", cache).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn group(rank: usize, torsion: &[u64]) -> GroupJson {
    GroupJson { rank, torsion: torsion.to_vec() }
}

const PAGE: &str = r#"{"r": 2, "window": {"p_min": 0, "p_max": 3, "q_min": -2, "q_max": 0},
  "entries": [{"p": 0, "q": 0, "group": {"rank": 1, "torsion": []}},
              {"p": 2, "q": -1, "group": {"rank": 1, "torsion": []}},
              {"p": 1, "q": -1, "group": {"rank": 0, "torsion": [2]}}],
  "differentials": [{"p": 0, "q": 0, "matrix": [[2]]}]}"#;

#[test]
fn projective_genus_one_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["--format", "json", "curve", "--genus", "1", "--real-components", "0", "--projective"]);
    assert!(o.status.success());
    let r: CurveReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.closed_form.period, Some(4));
    assert_eq!(r.closed_form.values[&0], group(2, &[]));
    assert_eq!(r.closed_form.values[&-1], group(1, &[2]));
    assert_eq!(r.closed_form.values[&-2], group(0, &[2]));
    assert_eq!(r.closed_form.values[&-3], group(1, &[]));
    assert_eq!(r.agreement, Some(true));
    assert_eq!(r, cmd_curve(1, 0, true, None).unwrap());
}

#[test]
fn affine_curve_with_three_components() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["--format", "json", "curve", "--affine", "--real-components", "3"]);
    assert!(o.status.success());
    let r: CurveReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.closed_form.values[&0], group(1, &[2, 2, 2]));
    assert_eq!(r.closed_form.values[&-6], group(0, &[]));
    assert_eq!(r.agreement, Some(true));
}

#[test]
fn harnack_violation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["curve", "--genus", "0", "--real-components", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn curve_with_coefficients() {
    let r = cmd_curve(2, 3, true, Some(2)).unwrap();
    let m = r.mod_m.unwrap();
    assert!(r.agreement.unwrap());
    // KR^0 = Z² ⊕ (Z/2)², KR^1 is not listed, so only degree −1 has both neighbours
    assert!(m.contains_key(&-1));
}

#[test]
fn sphere_table_with_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["--format", "json", "sphere", "--dim", "2", "--mod", "8", "--degrees", "0..8"]);
    assert!(o.status.success());
    let r: SphereReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.rows.len(), 8);
    assert_eq!(r.rows[0].group, group(1, &[2]));
    assert_eq!(r.rows[4].group, group(1, &[]));
    let p = r.rows[4].mod_m.as_ref().unwrap();
    assert_eq!((p.sub.clone(), p.quot.clone()), (group(0, &[8]), group(0, &[])));
    for row in &r.rows {
        let p = row.mod_m.as_ref().unwrap();
        let order: u64 = p.sub.torsion.iter().chain(&p.quot.torsion).product();
        assert_eq!(p.order.as_deref(), Some(order.to_string().as_str()));
    }
    let inclusive = kr(dir.path(), &["--format", "json", "sphere", "--dim", "2", "--mod", "8", "--degrees", "0..=7"]);
    assert_eq!(stdout(&inclusive), stdout(&o));
}

#[test]
fn bad_ranges_and_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(kr(dir.path(), &["sphere", "--dim", "2", "--degrees", "5..1"]).status.code(), Some(2));
    assert_eq!(kr(dir.path(), &["sphere", "--dim", "2", "--mod", "1"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(kr(dir.path(), &["ss", "run", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(kr(dir.path(), &["gcoh", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn cold_and_warm_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    for args in [
        &["curve", "--genus", "2", "--real-components", "0"][..],
        &["--format", "json", "curve", "--genus", "1", "--real-components", "2", "--mod", "4"][..],
        &["sphere", "--dim", "3", "--mod", "16"][..],
        &["--format", "json", "model", "--kind", "surface-free", "--genus", "1"][..],
    ] {
        let cold = kr(&cache, args);
        let entries = std::fs::read_dir(&cache).unwrap().count();
        let warm = kr(&cache, args);
        let fresh = kr(&cache, &[&["--no-cache"], args].concat());
        assert!(cold.status.success(), "{args:?}");
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, fresh.stdout, "{args:?}");
        assert_eq!(std::fs::read_dir(&cache).unwrap().count(), entries);
    }
    let cleared = kr(&cache, &["cache", "clear"]);
    assert_eq!(stdout(&cleared), "removed 4 entries\n");
}

#[test]
fn cache_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let key = stdout(&kr(dir.path(), &["cache", "key", "sphere", r#"{"dim": 2}"#])).trim().to_string();
    assert_eq!(key.len(), 64);
    let value = dir.path().join("value.json");
    std::fs::write(&value, r#"{"answer": [1, 2]}"#).unwrap();
    assert!(kr(dir.path(), &["cache", "put", &key, value.to_str().unwrap()]).status.success());
    let got: serde_json::Value = serde_json::from_str(&stdout(&kr(dir.path(), &["cache", "get", &key]))).unwrap();
    assert_eq!(got, serde_json::json!({"answer": [1, 2]}));
    assert!(kr(dir.path(), &["cache", "clear"]).status.success());
    assert_eq!(kr(dir.path(), &["cache", "get", &key]).status.code(), Some(2));
}

#[test]
fn model_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    // a hexagon with the antipodal involution
    let path = dir.path().join("circle.json");
    std::fs::write(
        &path,
        r#"{"vertices": 6, "simplices": [[0,1],[1,2],[2,3],[3,4],[4,5],[0,5]], "tau": [3,4,5,0,1,2]}"#,
    )
    .unwrap();
    let o = kr(dir.path(), &["--format", "json", "model", "--complex", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: ModelReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.free && r.period_four);
    assert_eq!(r.simplices, vec![6, 6]);
    assert_eq!(r.quotient_euler_characteristic, 0);
    let unclosed = dir.path().join("bad.json");
    std::fs::write(&unclosed, r#"{"vertices": 3, "simplices": [[0,1]], "tau": [1,2,0]}"#).unwrap();
    assert_eq!(kr(dir.path(), &["model", "--complex", unclosed.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn refused_model_exits_with_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["model", "--kind", "sphere-trivial", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn spectral_sequence_commands() {
    let dir = tempfile::tempdir().unwrap();
    let page = dir.path().join("a.json");
    std::fs::write(&page, PAGE).unwrap();
    let page = page.to_str().unwrap();

    let run: SsRunReport =
        serde_json::from_str(&stdout(&kr(dir.path(), &["--format", "json", "ss", "run", page]))).unwrap();
    assert!(!run.collapse_certificate);
    let h0 = run.abutment.iter().find(|a| a.n == 0).unwrap();
    assert_eq!(h0.pieces.len(), 1);
    assert_eq!(h0.pieces[0].group, group(0, &[2]));

    let o = kr(dir.path(), &["--format", "json", "ss", "compare", page, page, "--N", "3", "--r0", "2"]);
    let verdict: CompareReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(matches!(verdict, CompareReport::Confirmed { through: 3, .. }));

    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, "[]").unwrap();
    let o = kr(dir.path(), &["--format", "json", "ss", "compare", page, page, "--maps", zero.to_str().unwrap()]);
    let verdict: CompareReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(verdict, CompareReport::HypothesisFailed { p: 0, q: 0 });

    assert_eq!(kr(dir.path(), &["ss", "compare", page, page, "--r0", "3"]).status.code(), Some(2));
}

#[test]
fn group_cohomology_of_a_module() {
    let dir = tempfile::tempdir().unwrap();
    let module = dir.path().join("m.json");
    std::fs::write(&module, r#"{"group": {"rank": 1, "torsion": []}, "sigma": [[-1]]}"#).unwrap();
    let o = kr(dir.path(), &["--format", "json", "gcoh", module.to_str().unwrap(), "--degrees", "0..=3"]);
    let r: GcohReport = serde_json::from_str(&stdout(&o)).unwrap();
    let groups: Vec<GroupJson> = r.rows.into_iter().map(|r| r.group).collect();
    assert_eq!(groups, vec![group(0, &[]), group(0, &[2]), group(0, &[]), group(0, &[2])]);
    std::fs::write(&module, r#"{"group": {"rank": 1, "torsion": []}, "sigma": [[2]]}"#).unwrap();
    assert_eq!(kr(dir.path(), &["gcoh", module.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn acceptance_suite_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let o = kr(dir.path(), &["check", "appendix-a"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    // timings go to stderr, so the report itself is reproducible
    assert_eq!(stdout(&kr(dir.path(), &["check", "appendix-a"])), text);
}
