use std::fs;
use std::process::{Command, Output};

use mcg_core::curves::overlay;
use mcg_core::seeds::chain_curve;
use mcg_core::PolygonSurface;

fn mcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_rejects_small_genus() {
    let o = mcg(&["verify", "--genus", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("genus must be >= 5"), "{}", stderr(&o));
}

#[test]
fn verify_even_genus_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = mcg(&["verify", "--genus", "6", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("even genus branch"));
    assert!(text.contains("step 2 reached a4"));
    let path = dir.path().join("certificates_g6.jsonl");
    let first = fs::read_to_string(&path).unwrap();
    assert_eq!(first.lines().count(), 13);
    for line in first.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["verified"], true);
        let word = v["word"].as_str().unwrap();
        assert!(word.chars().all(|c| matches!(c, 'r' | 'R' | 'q')));
    }
    let o = mcg(&["verify", "--genus", "6", "--out", out, "--no-reflections"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap(), first);
}

#[test]
fn verify_genus_five_reports_the_failed_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcg(&["verify", "--genus", "5", "--out", dir.path().to_str().unwrap()]);
    let text = stdout(&o);
    // the prescribed transport misses a3; the repaired run still certifies
    assert_eq!(o.status.code(), Some(1), "{text}");
    assert!(text.contains("[FAIL] step 2: transport maps c2 to a3"));
    assert!(text.contains("odd genus branch"));
    let certs = fs::read_to_string(dir.path().join("certificates_g5.jsonl")).unwrap();
    assert_eq!(certs.lines().count(), 11);
}

#[test]
fn verify_json_report_for_early_steps() {
    let o = mcg(&["verify", "--genus", "5", "--through", "1", "--format", "json", "--no-reflections"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["genus"], 5);
    assert!(v["certificates"].as_array().unwrap().is_empty());
}

#[test]
fn verify_stops_at_the_weight_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_mcg"))
        .args(["verify", "--genus", "5", "--through", "2"])
        .env("MCG_MAX_WEIGHT_BITS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("weight cap"), "{}", stderr(&o));
}

#[test]
fn word_examples() {
    let o = mcg(&["word", "--genus", "5", "r", "a0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equals: a1"));
    let o = mcg(&["word", "--genus", "5", "qq", "b3"]);
    assert!(stdout(&o).contains("equals: b3"));
    assert!(stdout(&o).contains("character: 1"));
    let o = mcg(&["word", "--genus", "5", "x", "a0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 1"));
    let o = mcg(&["word", "--genus", "5", "r", "z3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_examples() {
    let text = stdout(&mcg(&["curve", "--genus", "5", "b0", "a4"]));
    assert!(text.contains("intersection bracket: (1, 1)"));
    assert!(text.contains("algebraic intersection: 1") || text.contains("algebraic intersection: -1"));
    let text = stdout(&mcg(&["curve", "--genus", "5", "b0", "b4"]));
    assert!(text.contains("disjoint: true"));
    let text = stdout(&mcg(&["curve", "--genus", "5", "a0", "a0"]));
    assert!(text.contains("disjoint: true"));
    assert!(text.contains("algebraic intersection: 0"));
    let s = PolygonSurface::new(5).unwrap();
    let literal = format!("{:?}", chain_curve(&s, 2).weights_u64().unwrap());
    let text = stdout(&mcg(&["curve", "--genus", "5", &literal, "a3"]));
    assert!(text.contains("intersection bracket: (1, 1)"), "{text}");
}

type Segment = ((f64, f64), (f64, f64));

fn paths(svg: &str) -> Vec<Vec<Segment>> {
    svg.lines()
        .filter(|l| l.contains("class=\"curve\""))
        .map(|l| {
            let d = l.split(" d=\"").nth(1).unwrap().split('"').next().unwrap();
            let mut segs = Vec::new();
            for sub in d.split('M').filter(|x| !x.trim().is_empty()) {
                let nums: Vec<f64> = sub.replace('L', " ").split_whitespace().map(|x| x.parse().unwrap()).collect();
                let pts: Vec<(f64, f64)> = nums.chunks(2).map(|c| (c[0], c[1])).collect();
                segs.extend(pts.windows(2).map(|w| (w[0], w[1])));
            }
            segs
        })
        .collect()
}

fn crosses(a: Segment, b: Segment) -> bool {
    let orient = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let d1 = orient(a.0, a.1, b.0);
    let d2 = orient(a.0, a.1, b.1);
    let d3 = orient(b.0, b.1, a.0);
    let d4 = orient(b.0, b.1, a.1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

#[test]
fn svg_crossings_match_the_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcg(&["svg", "--genus", "5", "a0", "a1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("g5_a0_a1.svg")).unwrap();
    let p = paths(&svg);
    assert_eq!(p.len(), 2);
    let drawn = p[0].iter().flat_map(|&x| p[1].iter().map(move |&y| (x, y))).filter(|&(x, y)| crosses(x, y)).count();
    let s = PolygonSurface::new(5).unwrap();
    let want = overlay(&s, &chain_curve(&s, 0), &chain_curve(&s, 1)).unwrap().crossing_count();
    assert_eq!(drawn, want);
    assert_eq!(drawn, 1);
    for (x, y, n) in [("b0", "a4", 1), ("b0", "b4", 0), ("b0", "b1", 1)] {
        let o = mcg(&["svg", "--genus", "5", x, y, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let p = paths(&fs::read_to_string(dir.path().join(format!("g5_{x}_{y}.svg"))).unwrap());
        let drawn = p[0].iter().flat_map(|&u| p[1].iter().map(move |&v| (u, v))).filter(|&(u, v)| crosses(u, v)).count();
        let want = stdout(&mcg(&["curve", "--genus", "5", x, y]));
        assert!(want.contains(&format!("intersection number: {n}")), "{want}");
        assert_eq!(drawn, n, "{x} {y}");
    }
}

#[test]
fn svg_of_b0_is_mirror_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let o = mcg(&["svg", "--genus", "5", "b0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("g5_b0.svg")).unwrap();
    let p = paths(&svg);
    assert_eq!(p.len(), 1);
    let key = |s: Segment| {
        let mut v = [s.0, s.1].map(|(x, y)| ((x * 100.0).round() as i64, (y * 100.0).round() as i64));
        v.sort();
        v
    };
    let mut direct: Vec<_> = p[0].iter().map(|&s| key(s)).collect();
    let mut mirrored: Vec<_> = p[0].iter().map(|&(a, b)| key(((a.0, 520.0 - a.1), (b.0, 520.0 - b.1)))).collect();
    direct.sort();
    mirrored.sort();
    assert_eq!(direct, mirrored);
    // deterministic output
    mcg(&["svg", "--genus", "5", "b0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(fs::read_to_string(dir.path().join("g5_b0.svg")).unwrap(), svg);
}
