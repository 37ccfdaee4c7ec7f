use std::process::{Command, Output};

use kfarey::{det_pair, parse_certificate, FareyVertex};

fn kfarey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfarey")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kfarey(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn header_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(' ').map(str::to_string))
        .unwrap_or_else(|| panic!("no {key:?} in {text}"))
}

fn max_det(vs: &[FareyVertex]) -> u64 {
    let mut m = 0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            m = m.max(det_pair(a, b));
        }
    }
    m
}

#[test]
fn intersect_worked_example() {
    let text = stdout(&["intersect", "-2/1", "1/3"]);
    assert!(text.contains("det 7"));
    assert!(text.contains("sequence {2,2}"));
    assert!(text.contains("co-sequence {1,1,2}"));
    assert!(text.contains("continuant 7 (matches)"));

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["intersect", "-2/1", "1/3", "--format", "json"])).unwrap();
    assert_eq!(json["det"], 7);
    assert_eq!(json["continuant_matches"], true);
}

#[test]
fn intersect_from_infinity_and_neighbors() {
    let text = stdout(&["intersect", "1/0", "3/5"]);
    assert!(text.contains("det 5") && text.contains("(matches)"), "{text}");
    let text = stdout(&["intersect", "0/1", "1/1"]);
    assert!(text.contains("det 1") && text.contains("neighbors: no LR sequence"), "{text}");
}

#[test]
fn construct_sizes() {
    for (family, n, size, i) in [("R", "8", 9, 7), ("S", "4", 10, 7), ("T", "2", 24, 20)] {
        let text = stdout(&["construct", family, n]);
        let vs = parse_certificate(&text).unwrap();
        assert_eq!(vs.len(), size, "{family}_{n}");
        assert_eq!(max_det(&vs), i, "{family}_{n}");
        assert_eq!(header_value(&text, "I"), i.to_string());
    }
    assert_eq!(kfarey(&["construct", "R", "1"]).status.code(), Some(2));
    assert_eq!(kfarey(&["construct", "Q", "3"]).status.code(), Some(2));
}

#[test]
fn certificates_seed_clique_search() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("s4.txt");
    let js = dir.path().join("s4.json");
    let svg = dir.path().join("s4.svg");
    let (cert_s, js_s, svg_s) = (cert.to_str().unwrap(), js.to_str().unwrap(), svg.to_str().unwrap());
    assert!(stdout(&["construct", "S", "4", "--out", cert_s, "--svg", svg_s]).is_empty());
    stdout(&["construct", "S", "4", "--format", "json", "--out", js_s]);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<path d=\"M"));
    for seed in [cert_s, js_s] {
        // Denominator cap 1 holds only 4 vertices, so the 10-vertex seed wins.
        let text = stdout(&["clique", "--k", "7", "--denom-cap", "1", "--seed", seed]);
        assert_eq!(header_value(&text, "size"), "10");
        assert_eq!(max_det(&parse_certificate(&text).unwrap()), 7);
    }
}

#[test]
fn components_examples() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("f7.svg");
    let text = stdout(&["components", "--k", "7", "--level", "40", "--svg", svg.to_str().unwrap()]);
    assert!(text.contains("b0 8\n"), "{text}");
    assert!(text.contains("each component on one line: true"));
    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.trim_end().ends_with("</svg>"));
    assert!(picture.contains(" A ") && picture.contains(" 0\" stroke"), "arcs and rays");

    let text = stdout(&["components", "--k", "1", "--level", "10"]);
    assert!(text.contains("b0 1\n"), "{text}");
}

#[test]
fn level_sweep_is_monotone() {
    let text = stdout(&["components", "--k", "6", "--level-sweep", "7..30"]);
    let rows: Vec<(u64, usize, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.splitn(3, ',');
            (f.next().unwrap().parse().unwrap(), f.next().unwrap().parse().unwrap(), f.next().unwrap().to_string())
        })
        .collect();
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0].0, 7);
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1));
    assert!(rows.iter().all(|r| r.2.is_empty()));
}

#[test]
fn clique_examples() {
    let text = stdout(&["clique", "--k", "1", "--denom-cap", "3"]);
    assert_eq!(header_value(&text, "size"), "3");
    let text = stdout(&["clique", "--k", "7", "--denom-cap", "64"]);
    assert!(header_value(&text, "size").parse::<usize>().unwrap() >= 10);
    let out = stdout(&["clique", "--k", "24", "--denom-cap", "auto", "--budget", "300s", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["size"], 30);
    let vs: Vec<FareyVertex> = serde_json::from_value(json["witness"].clone()).unwrap();
    assert_eq!(vs.len(), 30);
    assert!(max_det(&vs) <= 24);
}

#[test]
fn table_formats() {
    let csv = stdout(&["table", "--k-max", "4", "--max-window", "8"]);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("k,lower,lower_source,construction"));
    assert_eq!(lines.count(), 4);

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["table", "--k-max", "3", "--format", "json"])).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["lower"], 6);
    assert_eq!(rows[2]["construction"], "S_2");
}

#[test]
fn threads_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kfarey"))
        .args(["table", "--k-max", "3", "--max-window", "8"])
        .env("KFAREY_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn verify_suites() {
    let text = stdout(&["verify", "lr-oracle"]);
    assert!(text.starts_with("lr-oracle PASS"), "{text}");
    stdout(&["verify", "constructions"]);
}

#[test]
fn exit_codes() {
    assert_eq!(kfarey(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(kfarey(&["clique", "--k", "3", "--denom-cap", "4", "--budget", "0s"]).status.code(), Some(2));
    assert_eq!(kfarey(&["intersect", "1/2"]).status.code(), Some(2));
    assert_eq!(kfarey(&["intersect", "2/4", "1/3"]).status.code(), Some(2));
    assert_eq!(kfarey(&["components", "--k", "2", "--level", "3", "--format", "svg", "--level-sweep", "1..2"]).status.code(), Some(2));
    assert_eq!(kfarey(&["construct", "R", "3", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(kfarey(&["components", "--k", "1", "--level", "5000"]).status.code(), Some(3));
}

#[test]
fn out_is_atomic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let printed = stdout(&["table", "--k-max", "2", "--out", path.to_str().unwrap()]);
    assert!(printed.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&["table", "--k-max", "2"]));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "no temporaries left behind");
}
