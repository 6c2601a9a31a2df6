use std::path::Path;
use std::process::{Command, Output};

fn bssteg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bssteg"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["gen", "--n", "10", "--size", "32", "--seed", "5", "--out", p(dir)];
    args.extend_from_slice(extra);
    bssteg(&args)
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    assert_eq!(code(&bssteg(&["gen", "--n", "0", "--out", p(&out)])), 1);
    assert_eq!(code(&bssteg(&["gen", "--size", "31", "--out", p(&out)])), 1);
    assert_eq!(code(&bssteg(&["gen", "--alpha", "1.5", "--out", p(&out)])), 1);
    assert_eq!(code(&bssteg(&["gen", "--bogus"])), 1);
    assert_eq!(code(&bssteg(&["extract", "--manifest", "m", "--out", "o", "--pair", "3,3"])), 1);
    assert_eq!(code(&bssteg(&[])), 1);
    assert_eq!(code(&bssteg(&["--help"])), 0);
}

#[test]
fn gen_layout_and_collision() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &[])), 0);
    for f in ["manifest.jsonl", "triplets.jsonl", "params.json", "cover/cover_0009.png", "stego/stego_0000.png"] {
        assert!(c.join(f).exists(), "{f}");
    }
    let manifest = std::fs::read_to_string(c.join("manifest.jsonl")).unwrap();
    assert_eq!(manifest.lines().count(), 20);
    assert_eq!(manifest.lines().filter(|l| l.contains("\"stego\"")).count(), 10);
    let params: serde_json::Value = serde_json::from_slice(&std::fs::read(c.join("params.json")).unwrap()).unwrap();
    assert_eq!(params["seed"], 5);
    assert_eq!(params["items"].as_array().unwrap().len(), 10);

    let again = gen(&c, &[]);
    assert_eq!(code(&again), 1);
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    assert_eq!(code(&gen(&c, &["--force", "--n", "3"])), 0);
    assert!(!c.join("cover/cover_0009.png").exists());
}

#[test]
fn pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &[])), 0);
    let manifest = c.join("manifest.jsonl");
    let features = dir.path().join("f.csv");
    let bands = dir.path().join("bands");
    let out = bssteg(&["extract", "--manifest", p(&manifest), "--out", p(&features), "--dump-bands", p(&bands)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&features).unwrap();
    assert!(csv.starts_with("path,label,mu1,mu2,sigma1,sigma2,gamma1,gamma2,kappa1,kappa2\n"));
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.lines().nth(1).unwrap().starts_with("cover/cover_0000.png,0,"));
    assert_eq!(std::fs::read_dir(&bands).unwrap().count(), 20 * 12);
    assert!(std::fs::read(bands.join("0000_R-LL.pgm")).unwrap().starts_with(b"P5\n16 16\n255\n"));
    assert!(dir.path().join("f.csv.run.json").exists());

    let out = bssteg(&["eval", "--features", p(&features), "--k", "5"]);
    assert_eq!(code(&out), 0);
    let line = stdout(&out);
    let rest = line.trim().strip_prefix("Acc (%) ").expect("Table-1 format");
    let (acc, std) = rest.split_once("  Std (±%) ").unwrap();
    assert!((0.0..=100.0).contains(&acc.parse::<f64>().unwrap()));
    assert!(std.parse::<f64>().unwrap() >= 0.0);

    let model = dir.path().join("model.txt");
    assert_eq!(code(&bssteg(&["train", "--features", p(&features), "--out", p(&model)])), 0);
    assert!(std::fs::read_to_string(&model).unwrap().starts_with("bssteg-svm v1\n"));
    let out = bssteg(&["eval", "--features", p(&features), "--model", p(&model)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Acc (%) "));
}

#[test]
fn gridsearch_emits_66_rows() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &[])), 0);
    let table = dir.path().join("g.csv");
    let out = bssteg(&["gridsearch", "--manifest", p(&c.join("manifest.jsonl")), "--out", p(&table), "--k", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&table).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,mean_acc,std_acc"));
    assert_eq!(lines.count(), 66);
    assert!(stdout(&out).starts_with("best pair "));
}

#[test]
fn analyze_identity_corpus_gives_zero_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &["--alpha", "0"])), 0);
    let matrix = dir.path().join("m.csv");
    let heat = dir.path().join("m.pgm");
    let out = bssteg(&[
        "analyze", "--triplets", p(&c.join("triplets.jsonl")), "--out", p(&matrix), "--heatmap", p(&heat), "--cell", "4",
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&matrix).unwrap();
    assert_eq!(text.lines().count(), 13);
    for row in text.lines().skip(1) {
        assert!(row.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0), "{row}");
    }
    assert!(std::fs::read(&heat).unwrap().starts_with(b"P5\n48 48\n255\n"));

    let c2 = dir.path().join("c2");
    assert_eq!(code(&gen(&c2, &[])), 0);
    assert_eq!(code(&bssteg(&["analyze", "--triplets", p(&c2.join("triplets.jsonl")), "--out", p(&matrix)])), 0);
    let text = std::fs::read_to_string(&matrix).unwrap();
    let r_ll: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(r_ll > 0.8, "{r_ll}");
}

#[test]
fn inn_mode_generates() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &["--mode", "inn"])), 0);
    let manifest = std::fs::read_to_string(c.join("manifest.jsonl")).unwrap();
    assert!(manifest.contains("\"scheme\":\"inn\""));
    let params = std::fs::read_to_string(c.join("params.json")).unwrap();
    assert!(params.contains("\"blocks\": 16"));
}

#[test]
fn data_and_numerical_failures() {
    let dir = tempfile::tempdir().unwrap();
    let features = dir.path().join("f.csv");
    let missing = dir.path().join("nope.jsonl");
    assert_eq!(code(&bssteg(&["extract", "--manifest", p(&missing), "--out", p(&features)])), 2);

    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(code(&bssteg(&["extract", "--manifest", p(&empty), "--out", p(&features)])), 2);

    // A flat image is readable but has no independent components.
    let c = dir.path().join("c");
    assert_eq!(code(&gen(&c, &["--n", "2"])), 0);
    let flat: bssteg::Image<f64> = bssteg::Raster::filled(32, 32, 0.5).quantize();
    bssteg::corpus::save_png(&flat, c.join("flat.png")).unwrap();
    let mut m = std::fs::read_to_string(c.join("manifest.jsonl")).unwrap();
    m.push_str("{\"path\":\"flat.png\",\"label\":\"cover\"}\n");
    std::fs::write(c.join("manifest.jsonl"), &m).unwrap();
    let out = bssteg(&["extract", "--manifest", p(&c.join("manifest.jsonl")), "--out", p(&features)]);
    assert_eq!(code(&out), 3);
    assert_eq!(std::fs::read_to_string(&features).unwrap().lines().count(), 5);

    // An unreadable file outranks numerical failures.
    std::fs::write(c.join("broken.png"), b"not a png").unwrap();
    m.push_str("{\"path\":\"broken.png\",\"label\":\"stego\"}\n");
    std::fs::write(c.join("manifest.jsonl"), &m).unwrap();
    let out = bssteg(&["extract", "--manifest", p(&c.join("manifest.jsonl")), "--out", p(&features)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2 of 6 images skipped"));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "path,label,mu1\n").unwrap();
    assert_eq!(code(&bssteg(&["eval", "--features", p(&bad)])), 2);
}
